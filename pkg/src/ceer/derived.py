"""Decision procedures for the relations derived from a coding.

Given a coding ``chi`` of ``nu`` with ``pi = nu o chi``:

* ``R`` is the image of ``pi``;
* ``S`` links second components ``proj2 pi(m)``, ``proj2 pi(n)`` when
  ``nu(n)`` is the inverse of ``nu(m)``, and ``T`` when they are equal;
* ``H = S | T``, ``F`` is the transitive closure of ``R`` and its converse;
* with an interleaved pair of codings ``xi``/``zeta``, ``J`` is the closure
  of ``R_zeta`` cut down to numbers outside the field of ``H``, and
  ``G = H | J``.

Second components of ``pi`` climb strictly and exceed their index, so every
existential over indices is bounded by the numbers being tested; the
deciders only ever grow the coding table as far as those bounds require.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import deque
from dataclasses import dataclass

from .coding import (
    CodingTable,
    MergedCoding,
    extend_coding,
    extend_merged,
    find_index,
)
from .relations import CountingEnumerator, Pair, Walk, eta, inverse, tau
from .seqcode import beta, item_bits

RELATION_NAMES = ("R", "S", "T", "H", "F", "J", "G")


class NoWalk(LookupError):
    pass


class ScaleExceeded(ValueError):
    """The literal bounded-walk formula was asked for arguments beyond toy scale."""


class DisjointSet:
    """Union-find with path halving and union by size."""

    def __init__(self):
        self.parent: dict[int, int] = {}
        self.size: dict[int, int] = {}

    def find(self, x: int) -> int:
        parent = self.parent
        if x not in parent:
            parent[x] = x
            self.size[x] = 1
            return x
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


class ReachIndex:
    """Connectivity over a growing prefix of the edges ``pi(1), pi(2), ...``.

    Absorbing extra edges never changes an answer: they are edges of ``R``
    all the same, and the bounded prefix already suffices for completeness.
    """

    def __init__(self):
        self.ds = DisjointSet()
        self.cursor = 0

    def absorb(self, pis: tuple[Pair, ...], upto: int) -> None:
        for m in range(self.cursor, upto):
            a, b = pis[m]
            self.ds.union(a, b)
        self.cursor = max(self.cursor, upto)


class DerivedContext:
    """Deciders over one coding (``CodingTable``) or an interleaved pair (``MergedCoding``).

    The context owns its coding and grows it on demand; share one context
    per thread of work.
    """

    def __init__(self, coding: CodingTable | MergedCoding):
        self.coding = coding
        self.nu = CountingEnumerator(coding.nu)
        self._reach = {"main": ReachIndex(), "zeta": ReachIndex()}

    @property
    def merged(self) -> bool:
        return isinstance(self.coding, MergedCoding)

    @property
    def fuel(self) -> int:
        return self.coding.fuel

    def pis(self, side: str = "main") -> tuple[Pair, ...]:
        if side == "zeta":
            if not self.merged:
                raise ValueError("the zeta side needs a merged coding")
            return self.coding.pi_zeta
        return self.coding.pi_xi if self.merged else self.coding.pi

    def table(self, side: str = "main") -> CodingTable:
        if not self.merged:
            return self.coding
        return self.coding.zeta_table() if side == "zeta" else self.coding.xi_table()

    def ensure(self, n: int) -> None:
        if n <= self.coding.filled:
            return
        grow = extend_merged if self.merged else extend_coding
        self.coding = grow(self.coding, n)

    def ensure_second(self, cap: int, side: str = "main") -> int:
        """Grow until some second component exceeds ``cap``; return how many are ``<= cap``."""
        while True:
            pis = self.pis(side)
            if pis and pis[-1][1] > cap:
                break
            filled = self.coding.filled
            # seconds climb strictly, so extrapolate from the rate so far
            guess = filled * (cap + 1) // pis[-1][1] + 1 if pis else 1
            self.ensure(max(filled + 1, min(guess, 2 * filled + 1)))
        seconds = self._seconds(side)
        return bisect_left(seconds, cap + 1)

    def _seconds(self, side: str) -> list[int]:
        pis = self.pis(side)
        cache = self.__dict__.setdefault("_second_cache", {})
        lst = cache.setdefault(side, [])
        lst.extend(p[1] for p in pis[len(lst):])
        return lst

    def pi(self, n: int, side: str = "main") -> Pair:
        self.ensure(n)
        return self.pis(side)[n - 1]

    def preimage_second(self, i: int, side: str = "main") -> int | None:
        """The unique ``m`` with ``proj2 pi(m) == i``, if any; always ``m < i``."""
        if i < 2:
            return None
        count = self.ensure_second(i, side)
        seconds = self._seconds(side)
        if count and seconds[count - 1] == i:
            return count
        return None

    # R, S, T, H ------------------------------------------------------

    def witness_R(self, i: int, j: int, side: str = "main") -> int | None:
        m = self.preimage_second(j, side)
        if m is not None and self.pis(side)[m - 1][0] == i:
            return m
        return None

    def _second_pair(self, i: int, j: int) -> tuple[int, int] | None:
        m = self.preimage_second(i)
        if m is None:
            return None
        n = self.preimage_second(j)
        if n is None:
            return None
        return m, n

    def witness_S(self, i: int, j: int) -> tuple[int, int] | None:
        mn = self._second_pair(i, j)
        if mn is None:
            return None
        m, n = mn
        return mn if self.nu(n) == inverse(self.nu(m)) else None

    def witness_T(self, i: int, j: int) -> tuple[int, int] | None:
        mn = self._second_pair(i, j)
        if mn is None:
            return None
        m, n = mn
        return mn if self.nu(n) == self.nu(m) else None

    # F and J ---------------------------------------------------------

    def connected(self, i: int, j: int, side: str = "main") -> bool:
        """Closure membership for ``i != j`` using edges with second component <= max(i, j)."""
        count = self.ensure_second(max(i, j), side)
        idx = self._reach[side]
        idx.absorb(self.pis(side), count)
        return idx.ds.connected(i, j)

    def in_F(self, i: int, j: int, side: str = "main") -> bool:
        # every i has some nu(n) = (i, i), so (i, i) lies in R R^-1: the closure is reflexive
        if i == j:
            return True
        return self.connected(i, j, side)

    def in_field_H(self, i: int) -> bool:
        # (i, i) is in T exactly when i is a second component of pi
        return self.preimage_second(i) is not None

    def in_J(self, i: int, j: int) -> bool:
        if not self.merged:
            raise ValueError("J needs a merged coding")
        if self.in_field_H(i) or self.in_field_H(j):
            return False
        return self.in_F(i, j, side="zeta")

    def reflexive_walk(self, i: int, side: str = "main") -> Walk:
        """A length-2 walk from ``i`` back to ``i``, preferring the form ``(-m, m)``."""
        m = self.preimage_second(i, side)
        if m is not None:
            return (-m, m)
        m = find_index(self.coding.nu, (i, i), self.fuel)
        self.ensure(m)
        return (m, -m)

    def minimal_walk(self, i: int, j: int, side: str = "main") -> Walk:
        """A shortest walk from ``i`` to ``j`` in ``R``, by BFS over the bounded edge set."""
        if i == j:
            return self.reflexive_walk(i, side)
        count = self.ensure_second(max(i, j), side)
        pis = self.pis(side)
        adj: dict[int, list[tuple[int, int]]] = {}
        for m in range(1, count + 1):
            a, b = pis[m - 1]
            adj.setdefault(a, []).append((m, b))
            adj.setdefault(b, []).append((-m, a))
        prev: dict[int, tuple[int, int]] = {i: (0, i)}
        queue = deque([i])
        while queue:
            u = queue.popleft()
            if u == j:
                break
            for step, v in adj.get(u, ()):
                if v not in prev:
                    prev[v] = (step, u)
                    queue.append(v)
        if j not in prev:
            raise NoWalk(f"no walk from {i} to {j}")
        steps = []
        node = j
        while node != i:
            step, node = prev[node]
            steps.append(step)
        return tuple(reversed(steps))

    def edges(self, cap: int, side: str = "main") -> list[Pair]:
        """Edges ``pi(m)`` whose second component is at most ``cap``."""
        count = self.ensure_second(cap, side)
        return list(self.pis(side)[:count])


def _ctx_pi(ctx: DerivedContext, side: str = "main"):
    return lambda n: ctx.pi(n, side)


def in_R(i: int, j: int, ctx: DerivedContext) -> bool:
    return ctx.witness_R(i, j) is not None


def in_S(i: int, j: int, ctx: DerivedContext) -> bool:
    return ctx.witness_S(i, j) is not None


def in_T(i: int, j: int, ctx: DerivedContext) -> bool:
    return ctx.witness_T(i, j) is not None


def in_H(i: int, j: int, ctx: DerivedContext) -> bool:
    return in_S(i, j, ctx) or in_T(i, j, ctx)


def in_F(i: int, j: int, ctx: DerivedContext) -> bool:
    return ctx.in_F(i, j)


def in_J(i: int, j: int, ctx: DerivedContext) -> bool:
    return ctx.in_J(i, j)


def in_G(i: int, j: int, ctx: DerivedContext) -> bool:
    return in_H(i, j, ctx) or in_J(i, j, ctx)


def minimal_walk(i: int, j: int, ctx: DerivedContext) -> Walk:
    return ctx.minimal_walk(i, j)


def walk_shape_ok(w: Walk) -> bool:
    """A block of negative steps followed by a block of positive ones."""
    seen_positive = False
    for x in w:
        if x > 0:
            seen_positive = True
        elif seen_positive:
            return False
    return True


def formula_witness(i: int, j: int, ctx: DerivedContext, side: str = "main") -> int | None:
    """Least-first search for a code ``x <= beta(i + j)`` of a walk from ``i`` to ``j``.

    Codes are concatenations, so a prefix whose value already exceeds the
    bound cannot be extended below it; walks are grown item by item and
    pruned on the bound and on head/tail agreement. Each step is an edge
    of ``R`` or its converse by construction of ``pi``.
    """
    if i + j < 1:
        return None
    bound = beta(i + j)
    # a lone item of magnitude m has at least m + 1 digits
    max_mag = bound.bit_length() - 1
    ctx.ensure(max_mag)
    pi = _ctx_pi(ctx, side)
    found: list[int] = []

    def grow(value: int, node: int | None) -> bool:
        for sign in (-1, 1):
            for mag in range(1, max_mag + 1):
                bits = item_bits(sign * mag)
                code = (value << len(bits)) | int(bits, 2)
                if code > bound:
                    break
                x = sign * mag
                start = i if node is None else node
                if tau(x, pi) != start:
                    continue
                head = eta(x, pi)
                if head == j:
                    found.append(code)
                    return True
                if grow(code, head):
                    return True
        return False

    grow(0, None)
    return found[0] if found else None


def formula_scan(i: int, j: int, ctx: DerivedContext, side: str = "main") -> int | None:
    """The same formula by scanning every ``x <= beta(i + j)``; only for tiny ``i + j``."""
    from .relations import is_walk
    from .seqcode import parse_code

    if i + j < 1:
        return None
    bound = beta(i + j)
    ctx.ensure(bound.bit_length() - 1)
    pi = _ctx_pi(ctx, side)
    for z in range(1, bound + 1):
        s = parse_code(z)
        if s is not None and is_walk(s, i, j, pi):
            return z
    return None


def in_F_formula(i: int, j: int, ctx: DerivedContext, max_sum: int = 4) -> bool:
    """Closure membership by the literal bounded walk formula (toy scale only).

    The formula's bound comes from minimal walks between distinct points;
    the diagonal is settled by reflexivity, as in :meth:`DerivedContext.in_F`.
    """
    if i + j > max_sum:
        raise ScaleExceeded(f"i + j = {i + j} exceeds {max_sum}")
    if i == j:
        return True
    return formula_witness(i, j, ctx) is not None


@dataclass
class Decision:
    relation: str
    i: int
    j: int
    value: bool
    witness: dict

    def to_dict(self) -> dict:
        return {"relation": self.relation, "i": self.i, "j": self.j,
                "value": self.value, "witness": self.witness}


def decide(ctx: DerivedContext, rel: str, i: int, j: int) -> Decision:
    """Membership of ``(i, j)`` in a named derived relation, with a witness when true."""
    if rel not in RELATION_NAMES:
        raise ValueError(f"unknown relation {rel!r}; expected one of {', '.join(RELATION_NAMES)}")
    w: dict = {}
    if rel == "R":
        m = ctx.witness_R(i, j)
        value = m is not None
        if value:
            w = {"index": m, "pi": list(ctx.pi(m))}
    elif rel in ("S", "T", "H"):
        hit = None
        for name in ("S", "T") if rel == "H" else (rel,):
            mn = ctx.witness_S(i, j) if name == "S" else ctx.witness_T(i, j)
            if mn is not None:
                hit = (name, mn)
                break
        value = hit is not None
        if value:
            name, (m, n) = hit
            w = {"via": name, "m": m, "n": n, "nu_m": list(ctx.nu(m)), "nu_n": list(ctx.nu(n))}
    elif rel == "F":
        value = ctx.in_F(i, j)
        if value:
            w = {"walk": list(ctx.minimal_walk(i, j))}
        else:
            w = {"bound": max(i, j), "edges_checked": len(ctx.edges(max(i, j)))}
    elif rel == "J":
        value = ctx.in_J(i, j)
        if value:
            w = {"walk_zeta": list(ctx.minimal_walk(i, j, side="zeta"))}
    else:  # G
        d = decide(ctx, "H", i, j)
        if d.value:
            value, w = True, {"via": "H", "H": d.witness}
        else:
            value = ctx.in_J(i, j)
            if value:
                w = {"via": "J", "walk_zeta": list(ctx.minimal_walk(i, j, side="zeta"))}
    return Decision(rel, i, j, value, w)
