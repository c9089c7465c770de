"""Finite relation algebra, enumerators and walks.

Everything here works on a bounded universe ``[0, bound]``. Relations on
the naturals are infinite, so the brute-force oracles used throughout the
package only ever look at a window of them.
"""

from __future__ import annotations

import json
from collections.abc import Callable, Iterable
from dataclasses import dataclass

import numpy as np

Pair = tuple[int, int]
Walk = tuple[int, ...]


def inverse(pair: Pair) -> Pair:
    return (pair[1], pair[0])


@dataclass(frozen=True)
class FiniteRelation:
    """An explicit set of pairs over the universe ``[0, bound]``."""

    bound: int
    pairs: frozenset[Pair] = frozenset()

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("bound must be non-negative")
        pairs = frozenset((int(i), int(j)) for i, j in self.pairs)
        for i, j in pairs:
            if not (0 <= i <= self.bound and 0 <= j <= self.bound):
                raise ValueError(f"pair {(i, j)} outside [0, {self.bound}]")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_predicate(cls, bound: int, pred: Callable[[int, int], bool]) -> FiniteRelation:
        return cls(bound, frozenset(
            (i, j) for i in range(bound + 1) for j in range(bound + 1) if pred(i, j)))

    @classmethod
    def identity(cls, bound: int) -> FiniteRelation:
        return cls(bound, frozenset((i, i) for i in range(bound + 1)))

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __or__(self, other: FiniteRelation) -> FiniteRelation:
        _check_bounds(self, other)
        return FiniteRelation(self.bound, self.pairs | other.pairs)

    def __and__(self, other: FiniteRelation) -> FiniteRelation:
        _check_bounds(self, other)
        return FiniteRelation(self.bound, self.pairs & other.pairs)

    def __le__(self, other: FiniteRelation) -> bool:
        return self.pairs <= other.pairs

    def __matmul__(self, other: FiniteRelation) -> FiniteRelation:
        return compose(self, other)

    def restrict(self, bound: int) -> FiniteRelation:
        return FiniteRelation(bound, frozenset(
            (i, j) for i, j in self.pairs if i <= bound and j <= bound))

    def to_json(self) -> str:
        return json.dumps({"bound": self.bound, "pairs": [list(p) for p in sorted(self.pairs)]})

    @classmethod
    def from_json(cls, text: str) -> FiniteRelation:
        data = json.loads(text)
        return cls(int(data["bound"]), frozenset(tuple(p) for p in data["pairs"]))

    def to_dot(self, name: str = "R") -> str:
        """Graphviz rendering; symmetric relations become undirected graphs."""
        symmetric = self.pairs == converse(self).pairs
        lines = [f"{'graph' if symmetric else 'digraph'} {name} {{"]
        arrow = "--" if symmetric else "->"
        for i, j in sorted(self.pairs):
            if symmetric and i > j:
                continue
            lines.append(f"  {i} {arrow} {j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _check_bounds(a: FiniteRelation, b: FiniteRelation) -> None:
    if a.bound != b.bound:
        raise ValueError(f"bound mismatch: {a.bound} != {b.bound}")


def compose(a: FiniteRelation, b: FiniteRelation) -> FiniteRelation:
    """Relational composition ``{(i, k) | (i, j) in a and (j, k) in b}``."""
    _check_bounds(a, b)
    succ: dict[int, list[int]] = {}
    for j, k in b.pairs:
        succ.setdefault(j, []).append(k)
    return FiniteRelation(a.bound, frozenset(
        (i, k) for i, j in a.pairs for k in succ.get(j, ())))


def converse(a: FiniteRelation) -> FiniteRelation:
    return FiniteRelation(a.bound, frozenset(inverse(p) for p in a.pairs))


def transitive_closure_bf(a: FiniteRelation) -> FiniteRelation:
    """Union of all positive powers of ``a``, iterated to a fixpoint."""
    closure = a.pairs
    power = a
    while True:
        power = compose(power, a)
        grown = closure | power.pairs
        if grown == closure:
            return FiniteRelation(a.bound, closure)
        closure = grown


def power(a: FiniteRelation, n: int) -> FiniteRelation:
    if n < 1:
        raise ValueError("power needs n >= 1")
    out = a
    for _ in range(n - 1):
        out = compose(out, a)
    return out


def is_reflexive(a: FiniteRelation, domain: Iterable[int]) -> bool:
    return all((i, i) in a.pairs for i in domain)


def is_symmetric(a: FiniteRelation) -> bool:
    return all((j, i) in a.pairs for i, j in a.pairs)


def is_transitive(a: FiniteRelation) -> bool:
    return compose(a, a).pairs <= a.pairs


def is_equivalence(a: FiniteRelation, domain: Iterable[int] | None = None) -> bool:
    """Reflexive over ``domain`` (default the whole window), symmetric, transitive."""
    if domain is None:
        domain = range(a.bound + 1)
    return is_reflexive(a, domain) and is_symmetric(a) and is_transitive(a)


def lattice_join(a: FiniteRelation, b: FiniteRelation) -> FiniteRelation:
    """Join of two equivalence relations: the closure of their union."""
    for name, rel in (("left", a), ("right", b)):
        if not is_equivalence(rel):
            raise ValueError(f"{name} operand is not an equivalence relation on [0, {rel.bound}]")
    return transitive_closure_bf(a | b)


def field(a: FiniteRelation) -> frozenset[int]:
    out = set()
    for i, j in a.pairs:
        out.add(i)
        out.add(j)
    return frozenset(out)


def class_of(a: FiniteRelation, i: int) -> frozenset[int]:
    """``[i]`` as ``{j | (i, j) in a}``; empty when ``i`` is outside the field."""
    return frozenset(j for k, j in a.pairs if k == i)


def classes(a: FiniteRelation) -> list[frozenset[int]]:
    """Partition of the field of a symmetric, transitive relation, sorted by least member."""
    seen: dict[int, set[int]] = {}
    for i, j in a.pairs:
        seen.setdefault(i, set()).add(j)
    parts = {frozenset(v) for v in seen.values()}
    return sorted(parts, key=min)


@dataclass(frozen=True)
class Enumerator:
    """A total map from positive indices to pairs.

    ``fn`` must be deterministic; it is called directly without caching.
    """

    fn: Callable[[int], Pair]
    label: str = "enumerator"
    # optional numpy version of fn: int64 index array -> (firsts, seconds)
    vec: Callable | None = None

    def __call__(self, k: int) -> Pair:
        if k < 1:
            raise ValueError(f"enumerators are indexed from 1, got {k}")
        return self.fn(k)

    def signed(self, x: int) -> Pair:
        """Value at a signed index; negative indices give the inverse pair."""
        if x == 0:
            raise ValueError("signed edge index must be nonzero")
        p = self.fn(abs(x))
        return p if x > 0 else (p[1], p[0])

    def block(self, start: int, stop: int):
        """First and second components for indices ``start..stop-1`` as int64 arrays."""
        if start < 1:
            raise ValueError("enumerators are indexed from 1")
        ks = np.arange(start, stop, dtype=np.int64)
        if self.vec is not None:
            return self.vec(ks)
        pairs = [self.fn(int(k)) for k in ks]
        return (np.fromiter((p[0] for p in pairs), np.int64, len(pairs)),
                np.fromiter((p[1] for p in pairs), np.int64, len(pairs)))

    def prefix(self, n: int) -> list[Pair]:
        return [self.fn(k) for k in range(1, n + 1)]


class CountingEnumerator:
    """Wraps an enumerator and records how many and which indices were queried."""

    def __init__(self, inner: Enumerator):
        self.inner = inner
        self.label = inner.label
        self.calls = 0
        self.max_index = 0

    def __call__(self, k: int) -> Pair:
        self.calls += 1
        self.max_index = max(self.max_index, k)
        return self.inner(k)

    def reset(self) -> None:
        self.calls = 0
        self.max_index = 0


def tau(x: int, nu: Callable[[int], Pair]) -> int:
    """Tail of signed edge ``x``: first component of nu(x), second if x < 0."""
    if x == 0:
        raise ValueError("signed edge index must be nonzero")
    p = nu(abs(x))
    return p[0] if x > 0 else p[1]


def eta(x: int, nu: Callable[[int], Pair]) -> int:
    """Head of signed edge ``x``."""
    if x == 0:
        raise ValueError("signed edge index must be nonzero")
    p = nu(abs(x))
    return p[1] if x > 0 else p[0]


def is_walk(w: Walk, i: int, j: int, nu: Callable[[int], Pair]) -> bool:
    """True iff ``w`` is a walk from ``i`` to ``j`` along the edges of ``nu``.

    Consecutive steps must agree head-to-tail: ``eta(w[k]) == tau(w[k+1])``.
    """
    if not w or any(x == 0 for x in w):
        return False
    if tau(w[0], nu) != i or eta(w[-1], nu) != j:
        return False
    return all(eta(a, nu) == tau(b, nu) for a, b in zip(w, w[1:]))
