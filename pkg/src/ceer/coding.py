"""Codings of enumerations and the interleaved double coding.

A coding ``chi`` reindexes an enumeration ``nu`` so that ``pi = nu o chi``
keeps the first components of ``nu`` while forcing the second components
to climb strictly. Tables here hold finite prefixes of ``chi`` and ``pi``
(1-based in the maths, stored 0-based) and grow by minimal-witness search.
Every search is fuel-bounded; running out of fuel is the only signal that a
relation might have a finite class.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field

import numpy as np

from .relations import Enumerator, Pair

DEFAULT_FUEL = 10**6


class FuelExhausted(RuntimeError):
    """A minimal-witness search used up its query budget.

    Either the relation has a finite class (so no coding exists) or the
    fuel was too small; the two cannot be told apart.
    """

    def __init__(self, step: int, queries: int, detail: str = ""):
        self.step = step
        self.queries = queries
        self.detail = detail
        msg = f"fuel exhausted at step {step} after {queries} queries"
        super().__init__(f"{msg}: {detail}" if detail else msg)


def proj_exp(k: int) -> int:
    """Exponent of 2 in ``k``."""
    if k < 1:
        raise ValueError("proj_exp is defined for k >= 1")
    return (k & -k).bit_length() - 1


def proj_odd(k: int) -> int:
    """``b`` such that ``k = 2**proj_exp(k) * (2b + 1)``."""
    if k < 1:
        raise ValueError("proj_odd is defined for k >= 1")
    return ((k >> proj_exp(k)) - 1) // 2


def _decimal(x: int) -> str:
    # mu values run to millions of digits; lift the interpreter's str() guard
    limit = getattr(sys, "get_int_max_str_digits", lambda: 0)()
    if limit:
        sys.set_int_max_str_digits(0)
    try:
        return str(x)
    finally:
        if limit:
            sys.set_int_max_str_digits(limit)


def merge_pair(a: int, b: int) -> int:
    return (2 * b + 1) << a


class _Budget:
    """Counts enumerator queries for one search step and enforces the fuel cap."""

    def __init__(self, nu: Enumerator, fuel: int, step: int):
        self.nu, self.fuel, self.step, self.used = nu, fuel, step, 0

    def charge(self, n: int) -> None:
        self.used += n
        if self.used > self.fuel:
            raise FuelExhausted(self.step, self.fuel, "no witness within fuel")

    def __call__(self, k: int) -> Pair:
        self.charge(1)
        return self.nu(k)

    def scan(self, start: int, accept, stop: int | None = None) -> tuple[int, Pair] | None:
        """Least ``k`` in ``[start, stop)`` whose pair passes ``accept``.

        ``accept`` maps (firsts, seconds) arrays to a boolean mask. Every
        index examined up to the hit is charged.
        """
        size = 64
        k = start
        while stop is None or k < stop:
            end = k + size if stop is None else min(k + size, stop)
            firsts, seconds = self.nu.block(k, end)
            hits = np.flatnonzero(accept(firsts, seconds))
            if hits.size:
                idx = int(hits[0])
                self.charge(idx + 1)
                return k + idx, (int(firsts[idx]), int(seconds[idx]))
            self.charge(end - k)
            k = end
            size = min(size * 2, 1 << 16)
        return None


@dataclass(frozen=True)
class CodingTable:
    """Prefix ``chi(1..n)`` of a coding of ``nu`` with cached ``pi = nu o chi``."""

    nu: Enumerator
    chi: tuple[int, ...] = ()
    pi: tuple[Pair, ...] = ()
    fuel: int = DEFAULT_FUEL
    queries: int = field(default=0, compare=False)

    @property
    def filled(self) -> int:
        return len(self.chi)

    def chi_at(self, n: int) -> int:
        return self.chi[n - 1]

    def pi_at(self, n: int) -> Pair:
        return self.pi[n - 1]

    def to_dict(self) -> dict:
        return {"chi": list(self.chi), "pi": [list(p) for p in self.pi],
                "fuel": self.fuel, "enumerator": self.nu.label}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def next_chi(nu: Enumerator, n: int, prev_chi: int, prev_second: int, fuel: int) -> tuple[int, int]:
    """Least ``k > prev_chi`` with ``nu(k)`` sharing the first component of ``nu(n)``
    and a second component above both its first and ``prev_second``.

    For ``n == 1`` pass ``prev_chi = prev_second = 1``. Returns ``(k, queries)``.
    """
    ask = _Budget(nu, fuel, n)
    target = ask(n)[0]
    k, _ = ask.scan(prev_chi + 1, lambda a, b: (a == target) & (b > np.maximum(a, prev_second)))
    return k, ask.used


def new_coding(nu: Enumerator, fuel: int = DEFAULT_FUEL) -> CodingTable:
    return CodingTable(nu, (), (), fuel)


def extend_coding(t: CodingTable, n: int) -> CodingTable:
    """Return a table filled through ``n`` (unchanged if already that long)."""
    if n <= t.filled:
        return t
    chi, pi = list(t.chi), list(t.pi)
    queries = t.queries
    for step in range(t.filled + 1, n + 1):
        prev_chi = chi[-1] if chi else 1
        prev_second = pi[-1][1] if pi else 1
        k, used = next_chi(t.nu, step, prev_chi, prev_second, t.fuel)
        queries += used
        chi.append(k)
        pi.append(t.nu(k))
    return CodingTable(t.nu, tuple(chi), tuple(pi), t.fuel, queries)


def build_coding(nu: Enumerator, n: int, fuel: int = DEFAULT_FUEL) -> CodingTable:
    return extend_coding(new_coding(nu, fuel), n)


def extend_until_second_exceeds(t: CodingTable, cap: int) -> CodingTable:
    """Grow ``t`` until its last second component exceeds ``cap``.

    Since ``n < proj2 pi(n)``, every index whose second component is at most
    ``cap`` is then inside the table.
    """
    while not t.pi or t.pi[-1][1] <= cap:
        t = extend_coding(t, max(t.filled + 1, min(cap, 2 * t.filled + 1)))
    return t


@dataclass
class CodingReport:
    """Per-clause outcome; ``None`` means the clause held on the whole prefix."""

    clauses: dict[str, str | None]

    @property
    def ok(self) -> bool:
        return all(v is None for v in self.clauses.values())

    def failures(self) -> dict[str, str]:
        return {k: v for k, v in self.clauses.items() if v is not None}


def _first(cond_iter):
    for msg in cond_iter:
        if msg:
            return msg
    return None


def check_coding_conditions(t: CodingTable, nu: Enumerator | None = None) -> CodingReport:
    """Check every coding clause, and the consequences about growth, on the filled prefix."""
    nu = nu or t.nu
    chi, pi = t.chi, t.pi
    n = len(chi)
    c: dict[str, str | None] = {}
    if n == 0:
        return CodingReport({})
    c["pi_is_nu_of_chi"] = _first(
        f"pi({k + 1})={pi[k]} but nu(chi)={nu(chi[k])}" for k in range(n) if pi[k] != nu(chi[k]))
    c["chi1_gt_1"] = None if chi[0] > 1 else f"chi(1)={chi[0]}"
    c["first_components_kept"] = _first(
        f"n={k + 1}: {pi[k][0]} != {nu(k + 1)[0]}" for k in range(n) if pi[k][0] != nu(k + 1)[0])
    c["basis_second"] = (None if max(1, nu(1)[0]) < pi[0][1]
                         else f"proj2 pi(1)={pi[0][1]} not above max(1, {nu(1)[0]})")
    c["chi_increasing"] = _first(
        f"chi({k + 1})={chi[k]} >= chi({k + 2})={chi[k + 1]}" for k in range(n - 1) if chi[k] >= chi[k + 1])
    c["second_climbs"] = _first(
        f"n={k + 1}: proj2 pi(n+1)={pi[k + 1][1]} not above max({pi[k + 1][0]}, {pi[k][1]})"
        for k in range(n - 1) if not max(pi[k + 1][0], pi[k][1]) < pi[k + 1][1])
    c["first_below_second"] = _first(
        f"n={k + 1}: {pi[k]}" for k in range(n) if not pi[k][0] < pi[k][1])
    c["n_below_chi"] = _first(f"n={k + 1}: chi={chi[k]}" for k in range(n) if not k + 1 < chi[k])
    c["n_below_second"] = _first(f"n={k + 1}: proj2 pi={pi[k][1]}" for k in range(n) if not k + 1 < pi[k][1])
    c["class_chains_climb"] = _first(_chain_violations(t, nu))
    return CodingReport(c)


def _chain_violations(t: CodingTable, nu: Enumerator):
    # chains k, chi(k), chi(chi(k)), ... starting at diagonal values nu(k) = (i, i)
    for k in range(1, t.filled + 1):
        i, j = nu(k)
        if i != j:
            continue
        last = None
        idx = k
        while idx <= t.filled:
            p = t.pi_at(idx)
            if p[0] != i:
                yield f"chain from {k}: first component {p[0]} != {i}"
            if last is not None and p[1] <= last:
                yield f"chain from {k}: {p[1]} not above {last}"
            last = p[1]
            idx = t.chi_at(idx)


def find_index(nu: Enumerator, pair: Pair, fuel: int, start: int = 1) -> int:
    """Least index ``k >= start`` with ``nu(k) == pair``."""
    i, j = pair
    k, _ = _Budget(nu, fuel, 0).scan(start, lambda a, b: (a == i) & (b == j))
    return k


def class_chain(t: CodingTable, i: int, depth: int, fuel: int | None = None) -> tuple[CodingTable, list[int]]:
    """Second components along ``k, chi(k), chi^2(k), ...`` where ``nu(k) = (i, i)``.

    Returns the (possibly extended) table and ``depth + 1`` values, all of
    which lie in the class of ``i``.
    """
    fuel = t.fuel if fuel is None else fuel
    k = find_index(t.nu, (i, i), fuel)
    out = []
    idx = k
    for _ in range(depth + 1):
        t = extend_coding(t, idx)
        out.append(t.pi_at(idx)[1])
        idx = t.chi_at(idx)
    return t, out


@dataclass(frozen=True)
class MergedCoding:
    """Two interleaved codings ``xi`` and ``zeta`` of one enumeration.

    ``mu(n) = 2**xi(n) * (2 zeta(n) + 1)`` and ``xi(n) < zeta(n) < xi(n+1)``.
    """

    nu: Enumerator
    xi: tuple[int, ...] = ()
    zeta: tuple[int, ...] = ()
    pi_xi: tuple[Pair, ...] = ()
    pi_zeta: tuple[Pair, ...] = ()
    fuel: int = DEFAULT_FUEL

    @property
    def filled(self) -> int:
        return len(self.xi)

    @property
    def mu(self) -> tuple[int, ...]:
        # about xi(n) bits each, so built on request only
        return tuple(merge_pair(a, b) for a, b in zip(self.xi, self.zeta))

    def xi_table(self) -> CodingTable:
        return CodingTable(self.nu, self.xi, self.pi_xi, self.fuel)

    def zeta_table(self) -> CodingTable:
        return CodingTable(self.nu, self.zeta, self.pi_zeta, self.fuel)

    def to_dict(self) -> dict:
        return {"mu": [_decimal(m) for m in self.mu], "xi": list(self.xi), "zeta": list(self.zeta),
                "pi_xi": [list(p) for p in self.pi_xi], "pi_zeta": [list(p) for p in self.pi_zeta],
                "fuel": self.fuel, "enumerator": self.nu.label}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def merged_less(a: int, b: int, c: int, d: int) -> bool:
    """``merge_pair(a, b) < merge_pair(c, d)`` without building either number."""
    x, y = 2 * b + 1, 2 * d + 1
    if a <= c:
        shift = c - a
        return shift > x.bit_length() or x < (y << shift)
    shift = a - c
    return shift <= y.bit_length() and (x << shift) < y


def next_merged(nu: Enumerator, n: int, prev_zeta: int, prev_second: int, fuel: int) -> tuple[int, int, int]:
    """Least ``k`` whose dyadic halves ``a = proj_exp(k) < b = proj_odd(k)`` both
    exceed ``prev_zeta``, share the first component of ``nu(n)``, and have
    second components ``max(first, prev_second) < second(a) < second(b)``.

    Minimising ``k`` directly would mean scanning past ``2**prev_zeta``
    values, so candidates are walked by ``a`` instead: for fixed ``a`` the
    least valid ``b`` gives the least ``k``, and ``a`` only needs to grow
    while ``2**a * (2a + 3)`` can still undercut the best ``k`` found.
    ``k`` itself has about ``a`` bits, so it is only ever compared through
    its halves. Returns ``(a, b, queries)``.
    """
    ask = _Budget(nu, fuel, n)
    target = ask(n)[0]
    best = None
    a = prev_zeta
    while True:
        stop = None
        if best is not None:
            stop = a + 1
            while merged_less(stop, stop + 1, *best):
                stop += 1
        found = ask.scan(a + 1, lambda p, q: (p == target) & (q > np.maximum(p, prev_second)), stop)
        if found is None:
            return best[0], best[1], ask.used
        a, (_, second_a) = found
        b_stop = None
        if best is not None:
            b_stop = _least_b_reaching(a, *best)
        hit = ask.scan(a + 1, lambda p, q: (p == target) & (q > second_a), b_stop)
        if hit is not None and (best is None or merged_less(a, hit[0], *best)):
            best = (a, hit[0])


def _least_b_reaching(a: int, c: int, d: int) -> int:
    """Least ``b > a`` with ``merge_pair(a, b) >= merge_pair(c, d)``."""
    if a >= c:
        return a + 1
    # need 2b + 1 >= (2d + 1) * 2**(c - a)
    need = (2 * d + 1) << (c - a)
    return max(a + 1, need // 2)


def new_merged(nu: Enumerator, fuel: int = DEFAULT_FUEL) -> MergedCoding:
    return MergedCoding(nu, fuel=fuel)


def extend_merged(m: MergedCoding, n: int) -> MergedCoding:
    if n <= m.filled:
        return m
    xi, zeta = list(m.xi), list(m.zeta)
    pxi, pzeta = list(m.pi_xi), list(m.pi_zeta)
    for step in range(m.filled + 1, n + 1):
        prev_zeta = zeta[-1] if zeta else 1
        prev_second = pzeta[-1][1] if pzeta else 1
        a, b, _ = next_merged(m.nu, step, prev_zeta, prev_second, m.fuel)
        xi.append(a)
        zeta.append(b)
        pxi.append(m.nu(a))
        pzeta.append(m.nu(b))
    return MergedCoding(m.nu, tuple(xi), tuple(zeta), tuple(pxi), tuple(pzeta), m.fuel)


def build_merged(nu: Enumerator, n: int, fuel: int = DEFAULT_FUEL) -> MergedCoding:
    return extend_merged(new_merged(nu, fuel), n)


def merged_until_second_exceeds(m: MergedCoding, cap: int) -> MergedCoding:
    """Grow ``m`` until both codings have a second component above ``cap``."""
    while not m.pi_xi or m.pi_xi[-1][1] <= cap:
        m = extend_merged(m, max(m.filled + 1, min(cap, 2 * m.filled + 1)))
    return m


def interleaving_violations(m: MergedCoding) -> list[str]:
    out = []
    for k in range(m.filled):
        if not m.xi[k] < m.zeta[k]:
            out.append(f"n={k + 1}: xi={m.xi[k]} not below zeta={m.zeta[k]}")
        if k + 1 < m.filled and not m.zeta[k] < m.xi[k + 1]:
            out.append(f"n={k + 1}: zeta={m.zeta[k]} not below xi(n+1)={m.xi[k + 1]}")
    return out
