"""Concrete equivalence relations with ground truth, and their enumerators."""

from __future__ import annotations

import json
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from math import isqrt

import numpy as np

from .relations import Enumerator, FiniteRelation, Pair

IC, FC, MIXED = "IC", "FC", "mixed"


def dyadic_split(k: int) -> Pair:
    """Inverse of ``(m, n) -> 2**m * (2n + 1)``."""
    if k < 1:
        raise ValueError("dyadic pairing is defined on positive integers")
    m = (k & -k).bit_length() - 1
    return m, ((k >> m) - 1) // 2


def dyadic_split_vec(ks: np.ndarray):
    low = ks & -ks
    m = np.zeros_like(ks)
    # trailing zeros by binary search on the isolated low bit
    for width in (32, 16, 8, 4, 2, 1):
        big = low >= (np.int64(1) << width)
        m += np.where(big, width, 0)
        low = np.where(big, low >> width, low)
    return m, ((ks >> m) - 1) // 2


def dyadic_join(m: int, n: int) -> int:
    return (2 * n + 1) << m


def cantor_split(k: int) -> Pair:
    """Positive index to pair, sweeping anti-diagonals: 1->(0,0), 2->(0,1), 3->(1,0), ..."""
    if k < 1:
        raise ValueError("cantor pairing is indexed from 1")
    c = k - 1
    d = (isqrt(8 * c + 1) - 1) // 2
    i = c - d * (d + 1) // 2
    return i, d - i


def _isqrt_vec(x: np.ndarray) -> np.ndarray:
    """Elementwise floor square root, one bit at a time in unsigned 64-bit."""
    x = x.astype(np.uint64)
    r = np.zeros_like(x)
    for bit in range(31, -1, -1):
        cand = r | np.uint64(1 << bit)
        r = np.where(cand * cand <= x, cand, r)
    return r.astype(np.int64)


def cantor_split_vec(ks: np.ndarray):
    c = ks - 1
    d = (_isqrt_vec(8 * c + 1) - 1) // 2
    i = c - d * (d + 1) // 2
    return i, d - i


def cantor_join(i: int, j: int) -> int:
    d = i + j
    return d * (d + 1) // 2 + i + 1


SWEEPS: dict[str, Callable[[int], Pair]] = {"dyadic": dyadic_split, "cantor": cantor_split}
SWEEPS_VEC = {"dyadic": dyadic_split_vec, "cantor": cantor_split_vec}
SWEEP_INDEX: dict[str, Callable[[int, int], int]] = {"dyadic": dyadic_join, "cantor": cantor_join}


@dataclass(frozen=True)
class GroundTruth:
    decide: Callable[[int, int], bool]
    class_kind: str
    label: str

    def __call__(self, i: int, j: int) -> bool:
        return self.decide(i, j)

    def window(self, n: int) -> FiniteRelation:
        return FiniteRelation.from_predicate(n, self.decide)


class InjectiveStream:
    """An injective map from positive indices to naturals, possibly finite.

    Stands in for an enumeration without repetitions of a set ``A``; nothing
    here is undecidable, the stream is only treated as opaque.
    """

    def __init__(self, fn: Callable[[int], int] | Sequence[int], length: int | None = None):
        if callable(fn):
            self._fn = fn
            self.length = length
        else:
            values = tuple(int(v) for v in fn)
            if len(set(values)) != len(values):
                raise ValueError("stream values must be distinct")
            self._fn = lambda n: values[n - 1]
            self.length = len(values)

    def defined(self, n: int) -> bool:
        return n >= 1 and (self.length is None or n <= self.length)

    def __call__(self, n: int) -> int:
        if not self.defined(n):
            raise IndexError(f"stream undefined at {n}")
        return self._fn(n)

    def values(self, upto: int) -> list[int]:
        last = upto if self.length is None else min(upto, self.length)
        return [self(n) for n in range(1, last + 1)]

    def check_injective(self, upto: int) -> bool:
        vals = self.values(upto)
        return len(set(vals)) == len(vals)


def enumerator_from_decider(g: GroundTruth | Callable[[int, int], bool], default: int = 0,
                            sweep: str = "cantor", label: str | None = None) -> Enumerator:
    """Sweep all pairs, emitting related ones and ``(default, default)`` otherwise."""
    split = SWEEPS[sweep]

    def fn(k: int) -> Pair:
        i, j = split(k)
        return (i, j) if g(i, j) else (default, default)

    name = label or f"sweep[{sweep}]({getattr(g, 'label', 'decider')})"
    return Enumerator(fn, name)


def mod_relation(k: int, sweep: str = "cantor") -> tuple[GroundTruth, Enumerator]:
    """Congruence mod ``k``; unrelated sweep pairs ``(i, j)`` become ``(i, i)``."""
    if k < 1:
        raise ValueError("modulus must be >= 1")
    split = SWEEPS[sweep]

    def decide(i: int, j: int) -> bool:
        return (i - j) % k == 0

    def fn(idx: int) -> Pair:
        i, j = split(idx)
        return (i, j) if (i - j) % k == 0 else (i, i)

    def vec(ks):
        i, j = split_vec(ks)
        return i, np.where((i - j) % k == 0, j, i)

    split_vec = SWEEPS_VEC[sweep]
    return GroundTruth(decide, IC, f"mod {k}"), Enumerator(fn, f"mod {k} [{sweep}]", vec)


def full_relation() -> tuple[GroundTruth, Enumerator]:
    """All of N x N, enumerated by ``2**m (2n + 1) -> (m, n)``."""
    return GroundTruth(lambda i, j: True, IC, "full"), Enumerator(dyadic_split, "full [dyadic]", dyadic_split_vec)


def fair_enumeration(nu: Enumerator) -> Enumerator:
    """Enumerator hitting every value of ``nu`` infinitely often: ``2**m (2n+1) -> nu(n+1)``."""

    def fn(k: int) -> Pair:
        return nu((k >> ((k & -k).bit_length() - 1)) // 2 + 1)

    def vec(ks):
        low = ks & -ks
        inner = (ks // low) // 2 + 1
        if nu.vec is not None:
            return nu.vec(inner)
        pairs = [nu(int(x)) for x in inner]
        return np.array([p[0] for p in pairs], np.int64), np.array([p[1] for p in pairs], np.int64)

    return Enumerator(fn, f"fair({nu.label})", vec)


def eager_enumeration(truth: GroundTruth, nu: Enumerator, spacing: int = 8) -> Enumerator:
    """An enumeration of the same relation on which codings grow linearly.

    Every ``spacing``-th index replays ``nu``, which keeps the image onto.
    Index ``k`` elsewhere is eager slot ``m + 1`` and emits ``(x, y)``
    with ``x`` the first component at index ``m`` and ``y`` the least
    partner of ``x`` above every earlier eager ``y``. The coding entry for
    ``m`` can therefore never lie past slot ``k``. Needs every class
    infinite, or the partner search never ends.
    """
    if spacing < 2:
        raise ValueError("spacing must be at least 2")
    values: list[Pair] = []
    top = [0]

    def fill(k: int) -> None:
        while len(values) < k:
            idx = len(values) + 1
            if idx % spacing == 0:
                values.append(nu(idx // spacing))
                continue
            # one slot behind, since the first entry must sit above index 1
            m = idx - 1 - idx // spacing
            x = values[m - 1][0] if m >= 1 else nu(idx)[0]
            y = max(top[0], x, 1) + 1
            while not truth(x, y):
                y += 1
            top[0] = y
            values.append((x, y))

    def fn(k: int) -> Pair:
        fill(k)
        return values[k - 1]

    return Enumerator(fn, f"eager {nu.label}")


def prop23_pair(eta: InjectiveStream) -> tuple[GroundTruth, GroundTruth]:
    """Deciders linking ``2n`` with ``3**eta(n)`` (first) and with ``5**eta(n)`` (second)."""

    def linker(base: int) -> Callable[[int, int], bool]:
        def decide(i: int, j: int) -> bool:
            if i == j:
                return True
            lo, hi = min(i, j), max(i, j)
            if lo % 2:
                return False
            n = lo // 2
            # bounded search over n <= max{i, j} collapses to the single candidate lo / 2
            return n >= 1 and n <= hi and eta.defined(n) and base ** eta(n) == hi
        return decide

    f = GroundTruth(linker(3), FC, "prop23 F")
    g = GroundTruth(linker(5), FC, "prop23 G")
    return f, g


def exact_log(x: int, base: int) -> int | None:
    """``e`` with ``base**e == x``, or None."""
    if x < 1:
        return None
    e = 0
    while x % base == 0:
        x //= base
        e += 1
    return e if x == 1 else None


def prop23_join_truth(eta: InjectiveStream) -> GroundTruth:
    """Closed form of the join: classes ``{2n, 3**eta(n), 5**eta(n)}`` or singletons."""

    def anchor(i: int) -> int | None:
        if i > 0 and i % 2 == 0 and eta.defined(i // 2):
            return i // 2
        for base in (3, 5):
            e = exact_log(i, base)
            if e is None:
                continue
            n = 1
            while n <= i and eta.defined(n):
                if eta(n) == e:
                    return n
                n += 1
        return None

    def decide(i: int, j: int) -> bool:
        if i == j:
            return True
        a = anchor(i)
        return a is not None and a == anchor(j)

    return GroundTruth(decide, FC, "prop23 join")


def prop24_relation(a: Callable[[int], bool] | Iterable[int]) -> GroundTruth:
    """Pairs ``{2n, 2n+1}`` for ``n`` in A, everything else a singleton."""
    member = a if callable(a) else frozenset(a).__contains__

    def decide(x: int, y: int) -> bool:
        if x == y:
            return True
        lo = min(x, y)
        return lo % 2 == 0 and member(lo // 2) and (y - x) ** 2 == 1

    return GroundTruth(decide, FC, "prop24")


def partition_spec_relation(spec: Sequence[Iterable[int]], modulus: int = 1) -> GroundTruth:
    """Listed finite classes, with unlisted numbers grouped by residue mod ``modulus``.

    ``modulus == 0`` leaves every unlisted number in its own class.
    """
    owner: dict[int, int] = {}
    for idx, cls in enumerate(spec):
        for x in cls:
            if x in owner:
                raise ValueError(f"{x} listed in two classes")
            owner[x] = idx
    if modulus < 0:
        raise ValueError("modulus must be >= 0")

    def decide(i: int, j: int) -> bool:
        if i == j:
            return True
        oi, oj = owner.get(i), owner.get(j)
        if oi is not None or oj is not None:
            return oi == oj
        return modulus != 0 and (i - j) % modulus == 0

    if modulus == 0:
        kind = FC
    else:
        kind = MIXED if owner else IC
    return GroundTruth(decide, kind, f"partition{[sorted(c) for c in spec]} mod {modulus}")


@dataclass(frozen=True)
class RelationSpec:
    """A parsed relation spec: ground truth plus an enumerator, when one exists."""

    kind: str
    params: dict
    truth: GroundTruth
    nu: Enumerator | None
    # the unfair enumeration the fair one was built from; cheaper to code
    base_nu: Enumerator | None = None

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind, **self.params}, sort_keys=True)


def builtin_ic_relations() -> list[RelationSpec]:
    """The four IC relations the suite exercises: mod 1, 2, 3, 5 under fair enumeration."""
    return [load_spec({"kind": "mod", "k": k}) for k in (1, 2, 3, 5)]


def load_spec(spec: str | dict) -> RelationSpec:
    """Build a relation from its JSON spec or a ``kind:arg`` shorthand.

    Shorthands: ``full``, ``mod:3``, ``partition:0,5;1/1``, ``prop23:2,3,7``,
    ``prop24:3``. Malformed specs raise ValueError.
    """
    data = _parse_spec(spec) if isinstance(spec, str) else dict(spec)
    kind = data.get("kind")
    if kind == "full":
        truth, nu = full_relation()
        return RelationSpec("full", {}, truth, nu)
    if kind == "mod":
        k = _int(data, "k")
        sweep = data.get("sweep", "cantor")
        fair = bool(data.get("fair", True))
        if sweep not in SWEEPS:
            raise ValueError(f"unknown sweep {sweep!r}")
        truth, nu = mod_relation(k, sweep)
        params = {"k": k, "sweep": sweep, "fair": fair}
        return RelationSpec("mod", params, truth, fair_enumeration(nu) if fair else nu, nu)
    if kind == "partition":
        classes = [sorted(int(x) for x in c) for c in data.get("classes", [])]
        modulus = int(data.get("modulus", 1))
        truth = partition_spec_relation(classes, modulus)
        base = enumerator_from_decider(truth)
        return RelationSpec("partition", {"classes": classes, "modulus": modulus}, truth,
                            fair_enumeration(base), base)
    if kind == "prop23":
        eta = [int(x) for x in data.get("eta", [2, 3, 7])]
        which = data.get("which", "join")
        if which not in ("F", "G", "join"):
            raise ValueError(f"prop23 'which' must be F, G or join, got {which!r}")
        stream = InjectiveStream(eta)
        f, g = prop23_pair(stream)
        truth = {"F": f, "G": g, "join": prop23_join_truth(stream)}[which]
        return RelationSpec("prop23", {"eta": eta, "which": which}, truth,
                            enumerator_from_decider(truth))
    if kind == "prop24":
        a = sorted(int(x) for x in data.get("A", [3]))
        truth = prop24_relation(a)
        return RelationSpec("prop24", {"A": a}, truth, enumerator_from_decider(truth))
    raise ValueError(f"unknown relation kind {kind!r}")


def _int(data: dict, key: str) -> int:
    try:
        return int(data[key])
    except (KeyError, TypeError, ValueError):
        raise ValueError(f"spec needs an integer {key!r}") from None


def _parse_spec(text: str) -> dict:
    text = text.strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"bad relation spec JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ValueError("relation spec must be a JSON object")
        return data
    kind, _, arg = text.partition(":")
    try:
        if kind == "full":
            return {"kind": "full"}
        if kind == "mod":
            return {"kind": "mod", "k": int(arg)}
        if kind == "prop23":
            return {"kind": "prop23", "eta": [int(x) for x in arg.split(",") if x]}
        if kind == "prop24":
            return {"kind": "prop24", "A": [int(x) for x in arg.split(",") if x]}
        if kind == "partition":
            body, _, mod = arg.partition("/")
            classes = [[int(x) for x in c.split(",") if x] for c in body.split(";") if c]
            return {"kind": "partition", "classes": classes, "modulus": int(mod or 1)}
    except ValueError:
        raise ValueError(f"malformed relation spec {text!r}") from None
    return {"kind": kind}
