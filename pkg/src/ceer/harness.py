"""Windowed, fuel-bounded checks of the coding results.

Each check reports ``pass``, ``fail`` (always with a concrete
counterexample) or ``inconclusive-fuel``: an inclusion into a
semi-decidable relation can be confirmed by a bounded search but never
refuted by one, so running out of budget is not a failure.
"""

from __future__ import annotations

import json
import random
from collections import deque
from collections.abc import Callable, Iterable
from dataclasses import asdict, dataclass, field, replace

from . import __version__
from .coding import (
    DEFAULT_FUEL,
    FuelExhausted,
    MergedCoding,
    build_coding,
    check_coding_conditions,
    extend_merged,
    find_index,
    interleaving_violations,
    new_coding,
    new_merged,
)
from .derived import DerivedContext, in_F_formula, walk_shape_ok
from .generators import (
    FC,
    GroundTruth,
    InjectiveStream,
    RelationSpec,
    builtin_ic_relations,
    prop23_join_truth,
    prop23_pair,
    prop24_relation,
)
from .relations import (
    FiniteRelation,
    classes,
    compose,
    converse,
    is_equivalence,
    is_walk,
    lattice_join,
    transitive_closure_bf,
)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive-fuel"


# JSON Schema for ``VerificationReport.to_json``
REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["manifest", "summary", "checks"],
    "additionalProperties": False,
    "properties": {
        "manifest": {
            "type": "object",
            "required": ["command", "relation", "window", "fuel", "seeds", "version"],
            "properties": {
                "window": {"type": "integer", "minimum": 1},
                "fuel": {"type": "integer", "minimum": 1},
                "seeds": {"type": "array", "items": {"type": "integer"}},
            },
        },
        "summary": {
            "type": "object",
            "required": [PASS, FAIL, INCONCLUSIVE],
            "additionalProperties": {"type": "integer", "minimum": 0},
        },
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status", "detail", "queries"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": [PASS, FAIL, INCONCLUSIVE]},
                    "detail": {"type": "object"},
                    "queries": {"type": "integer", "minimum": 0},
                },
                "if": {"properties": {"status": {"const": FAIL}}},
                "then": {"properties": {"detail": {"required": ["counterexample"]}}},
            },
        },
    },
}


@dataclass
class Check:
    name: str
    status: str
    detail: dict = field(default_factory=dict)
    queries: int = 0


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)
    manifest: dict = field(default_factory=dict)

    def add(self, name: str, status: str, queries: int = 0, **detail) -> Check:
        if status == FAIL and "counterexample" not in detail:
            raise ValueError(f"failing check {name} needs a counterexample")
        c = Check(name, status, detail, queries)
        self.checks.append(c)
        return c

    def extend(self, other: VerificationReport) -> VerificationReport:
        self.checks.extend(other.checks)
        return self

    def by_name(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, INCONCLUSIVE: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def to_dict(self) -> dict:
        checks = sorted(self.checks, key=lambda c: c.name)
        return {"manifest": self.manifest, "summary": self.counts(),
                "checks": [asdict(c) for c in checks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=_jsonable)

    def to_text(self) -> str:
        lines = []
        for c in sorted(self.checks, key=lambda c: c.name):
            note = ""
            if c.status == FAIL:
                note = f"  counterexample={c.detail['counterexample']}"
            lines.append(f"{c.status:<18} {c.name}{note}")
        s = self.counts()
        lines.append(f"-- {s[PASS]} pass, {s[FAIL]} fail, {s[INCONCLUSIVE]} inconclusive")
        return "\n".join(lines) + "\n"


def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


@dataclass(frozen=True)
class WindowConfig:
    """Window bound, per-step fuel, sampling seeds.

    ``table_cap`` caps how far witness searches may grow a coding table;
    merged tables cost far more per entry and get ``merged_cap``.
    """

    n: int = 30
    fuel: int = DEFAULT_FUEL
    seeds: tuple[int, ...] = (0,)
    table_cap: int = 2000
    merged_cap: int = 400

    def __post_init__(self):
        if self.n < 1 or self.fuel < 1:
            raise ValueError("window and fuel must be >= 1")


def _status(fails: list, inconclusive: list) -> str:
    if fails:
        return FAIL
    return INCONCLUSIVE if inconclusive else PASS


def _fail_or(name: str, report: VerificationReport, fails: list, inconclusive: list = (),
             queries: int = 0, **detail) -> None:
    if fails:
        detail["counterexample"] = fails[0]
        detail["failures"] = len(fails)
    if inconclusive:
        detail["inconclusive"] = len(inconclusive)
        detail["first_inconclusive"] = inconclusive[0]
    report.add(name, _status(fails, list(inconclusive)), queries, **detail)


# oracles ---------------------------------------------------------------


def reach_oracle(edges: Iterable[tuple[int, int]], i: int, j: int) -> bool:
    """Plain BFS over undirected edges; every node reaches itself."""
    adj: dict[int, list[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen = {i}
    queue = deque([i])
    while queue:
        u = queue.popleft()
        if u == j:
            return True
        for v in adj.get(u, ()):
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return False


def bfs_distance(edges: Iterable[tuple[int, int]], i: int, j: int) -> int | None:
    adj: dict[int, list[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    dist = {i: 0}
    queue = deque([i])
    while queue:
        u = queue.popleft()
        if u == j:
            return dist[u]
        for v in adj.get(u, ()):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return None


def materialize(pred: Callable[[int, int], bool], n: int) -> FiniteRelation:
    return FiniteRelation.from_predicate(n, pred)


# checks ----------------------------------------------------------------


def verify_coding(nu, w: WindowConfig, n: int = 200, label: str = "") -> VerificationReport:
    report = VerificationReport()
    name = f"{label}coding.conditions"
    try:
        t = build_coding(nu, n, w.fuel)
    except FuelExhausted as exc:
        report.add(name, INCONCLUSIVE, exc.queries, step=exc.step, reason=str(exc))
        return report
    rep = check_coding_conditions(t)
    fails = [f"{k}: {v}" for k, v in rep.failures().items()]
    _fail_or(name, report, fails, queries=t.queries, filled=t.filled,
             clauses=sorted(rep.clauses))
    return report


def verify_F_oracle(ctx: DerivedContext, w: WindowConfig, label: str = "") -> VerificationReport:
    """Union-find decider against BFS over the same bounded edge set, on the whole window."""
    report = VerificationReport()
    n = w.n
    fails = []
    for i in range(n + 1):
        for j in range(n + 1):
            got = ctx.in_F(i, j)
            want = reach_oracle(ctx.edges(max(i, j)), i, j)
            if got != want:
                fails.append([i, j, got, want])
    _fail_or(f"{label}F.oracle", report, fails, pairs=(n + 1) ** 2)
    return report


def verify_formula(ctx: DerivedContext, max_sum: int = 4, label: str = "") -> VerificationReport:
    report = VerificationReport()
    fails = []
    pairs = [(i, s - i) for s in range(max_sum + 1) for i in range(s + 1)]
    for i, j in pairs:
        a, b = in_F_formula(i, j, ctx, max_sum), ctx.in_F(i, j)
        if a != b:
            fails.append([i, j, a, b])
    _fail_or(f"{label}F.formula", report, fails, pairs=len(pairs))
    return report


def verify_prop11(e: GroundTruth, ctx: DerivedContext, w: WindowConfig, label: str = "") -> VerificationReport:
    """``E = R S R^-1``: composites are sound, and every window pair has a witness."""
    report = VerificationReport()
    nu = ctx.coding.nu
    n = w.n
    queries = 0
    fails, inconclusive = [], []
    pairs = [(i, j) for i in range(n + 1) for j in range(n + 1) if e(i, j)]
    for i, j in pairs:
        try:
            m = find_index(nu, (i, j), w.fuel)
            k = find_index(nu, (j, i), w.fuel)
        except FuelExhausted as exc:
            queries += exc.queries
            inconclusive.append([i, j, "enumeration index beyond fuel"])
            continue
        queries += m + k
        if max(m, k) > w.table_cap:
            inconclusive.append([i, j, f"witness index {max(m, k)} beyond table cap"])
            continue
        try:
            ctx.ensure(max(m, k))
        except FuelExhausted as exc:
            inconclusive.append([i, j, str(exc)])
            continue
        (_, h), (_, kk) = ctx.pi(m), ctx.pi(k)
        ok = (ctx.witness_R(i, h) is not None and ctx.witness_S(h, kk) is not None
              and ctx.witness_R(j, kk) is not None)
        if not ok:
            fails.append([i, j, h, kk])
    _fail_or(f"{label}rsr.completeness", report, fails, inconclusive, queries, pairs=len(pairs))

    # soundness: every composite over the filled prefix lies in E
    pis = ctx.pis()
    by_value: dict = {}
    for a in range(1, len(pis) + 1):
        by_value.setdefault(nu(a), []).append(a)
    fails, checked = [], 0
    for a in range(1, len(pis) + 1):
        p = nu(a)
        for b in by_value.get((p[1], p[0]), ()):
            i, j = pis[a - 1][0], pis[b - 1][0]
            checked += 1
            if not e(i, j):
                fails.append([i, j, a, b])
    # cross-validate the S decider on a slice of those composites
    for a in range(1, min(len(pis), 200) + 1):
        p = nu(a)
        for b in by_value.get((p[1], p[0]), ())[:3]:
            if ctx.witness_S(pis[a - 1][1], pis[b - 1][1]) is None:
                fails.append(["S decider missed", pis[a - 1][1], pis[b - 1][1]])
    # no composites means nothing was tested, which is not a pass
    empty = [] if checked else [["no composites in the filled prefix"]]
    _fail_or(f"{label}rsr.soundness", report, fails, empty, composites=checked, prefix=len(pis))
    return report


def class_sizes(pred: Callable[[int, int], bool], node: int, windows: Iterable[int]) -> list[int]:
    return [sum(1 for j in range(n + 1) if pred(node, j)) for n in windows]


def verify_prop17_18(e: GroundTruth, m: MergedCoding, w: WindowConfig, label: str = "") -> VerificationReport:
    """``E = F G F = F v G`` with both sides decidable equivalence relations with infinite classes."""
    if e.class_kind == FC:
        raise ValueError("a relation with finite classes has no coding; nothing to decompose")
    report = VerificationReport()
    n = w.n
    ctx = DerivedContext(m)
    ew = e.window(n)

    fw = materialize(ctx.in_F, n)
    gw = materialize(lambda i, j: _in_G(ctx, i, j), n)
    for nm, rel in (("F", fw), ("G", gw)):
        fails = []
        if not is_equivalence(rel):
            fails.append(_equivalence_counterexample(rel))
        extra = sorted(rel.pairs - ew.pairs)
        if extra:
            fails.append(["not in E", *extra[0]])
        _fail_or(f"{label}{nm}.equivalence_subset", report, fails, pairs=len(rel))

    fails = []
    for i in range(n + 1):
        for j in range(n + 1):
            if ctx.in_F(i, j) != reach_oracle(ctx.edges(max(i, j)), i, j):
                fails.append([i, j])
    _fail_or(f"{label}xi.F.oracle", report, fails)

    join = lattice_join(fw, gw)
    extra = sorted(join.pairs - ew.pairs)
    _fail_or(f"{label}join.in_E", report, [list(extra[0])] if extra else [], pairs=len(join))

    # F G F witnesses: first inside a doubled window, then along the coding
    wide = 2 * n
    f2 = materialize(ctx.in_F, wide)
    g2 = materialize(lambda i, j: _in_G(ctx, i, j), wide)
    fgf = compose(compose(f2, g2), f2)
    fails, inconclusive = [], []
    for i, j in sorted(ew.pairs):
        if (i, j) in fgf:
            continue
        try:
            a = find_index(m.nu, (i, j), w.fuel)
            b = find_index(m.nu, (j, i), w.fuel)
        except FuelExhausted:
            inconclusive.append([i, j])
            continue
        if max(a, b) > w.merged_cap:
            inconclusive.append([i, j])
            continue
        try:
            ctx.ensure(max(a, b))
            (_, h), (_, k) = ctx.pi(a), ctx.pi(b)
            ok = (ctx.witness_R(i, h) == a and ctx.witness_S(h, k) == (a, b)
                  and ctx.witness_R(j, k) == b and ctx.in_F(i, h) and ctx.in_F(k, j))
        except FuelExhausted:
            inconclusive.append([i, j])
            continue
        if not ok:
            fails.append([i, j, h, k])
    _fail_or(f"{label}fgf.witness", report, fails, inconclusive, pairs=len(ew))

    short = []
    try:
        ctx.coding = extend_merged(ctx.coding, max(min(100, w.merged_cap), ctx.coding.filled))
    except FuelExhausted as exc:
        short.append(str(exc))
    m = ctx.coding
    if m.filled < 100:
        short.append(f"only {m.filled} entries")
    bad = interleaving_violations(m)
    _fail_or(f"{label}merged.interleaving", report, bad, short, entries=m.filled)
    fails = []
    for side, t in (("xi", m.xi_table()), ("zeta", m.zeta_table())):
        for k, v in check_coding_conditions(t).failures().items():
            fails.append(f"{side}.{k}: {v}")
    _fail_or(f"{label}merged.codings", report, fails)

    field_j = {i for i in range(n + 1) if ctx.in_J(i, i)}
    field_h = {i for i in range(n + 1) if ctx.in_field_H(i)}
    rest = set(range(n + 1)) - field_h
    diff = sorted(field_j ^ rest)
    _fail_or(f"{label}J.field", report, [diff[0]] if diff else [],
             field_H=sorted(field_h), field_J=sorted(field_j))

    # class growth as the window doubles; flat counters are not a refutation
    rng = random.Random(w.seeds[0] if w.seeds else 0)
    nodes = sorted(rng.sample(range(n + 1), min(4, n + 1)))
    windows = [n << t for t in range(4)]
    growth, flat = {}, []
    try:
        for node in nodes:
            fs = class_sizes(ctx.in_F, node, windows)
            gs = class_sizes(lambda i, j: _in_G(ctx, i, j), node, windows)
            growth[str(node)] = {"F": fs, "G": gs}
            flat += [[node, nm, c] for nm, c in (("F", fs), ("G", gs))
                     if not all(x < y for x, y in zip(c, c[1:]))]
    except FuelExhausted as exc:
        flat.append(str(exc))
    report.add(f"{label}class_growth", INCONCLUSIVE if flat else PASS,
               windows=windows, sizes=growth, **({"not_strict": flat} if flat else {}))
    return report


def _in_G(ctx: DerivedContext, i: int, j: int) -> bool:
    return (ctx.witness_S(i, j) is not None or ctx.witness_T(i, j) is not None
            or ctx.in_J(i, j))


def _equivalence_counterexample(rel: FiniteRelation) -> list:
    for i in range(rel.bound + 1):
        if (i, i) not in rel:
            return ["not reflexive", i, i]
    for i, j in sorted(rel.pairs):
        if (j, i) not in rel:
            return ["not symmetric", i, j]
    extra = sorted(compose(rel, rel).pairs - rel.pairs)
    return ["not transitive", *extra[0]] if extra else ["unknown"]


def sample_reachable(ctx: DerivedContext, n: int, count: int, seed: int) -> list[tuple[int, int]]:
    pool = [(i, j) for i in range(n + 1) for j in range(n + 1) if i != j and ctx.in_F(i, j)]
    rng = random.Random(seed)
    return sorted(rng.sample(pool, min(count, len(pool))))


def verify_lemma13_shape(ctx: DerivedContext, w: WindowConfig, samples: int = 100,
                         label: str = "") -> VerificationReport:
    """Shortest walks run backwards first, then forwards, and are at most ``i + j`` long."""
    report = VerificationReport()
    pi = lambda k: ctx.pi(k)
    fails = []
    pairs = []
    for seed in w.seeds:
        pairs.extend(sample_reachable(ctx, w.n, samples, seed))
    for i, j in pairs:
        walk = ctx.minimal_walk(i, j)
        best = bfs_distance(ctx.edges(max(i, j)), i, j)
        if not (is_walk(walk, i, j, pi) and walk_shape_ok(walk) and len(walk) <= i + j
                and len(walk) == best):
            fails.append([i, j, list(walk)])
    diag = [i for i in range(w.n + 1) if ctx.preimage_second(i) is not None]
    for i in diag:
        walk = ctx.minimal_walk(i, i)
        if not (len(walk) == 2 and walk[0] < 0 < walk[1] and is_walk(walk, i, i, pi)):
            fails.append([i, i, list(walk)])
    _fail_or(f"{label}walk.shape", report, fails, sampled=len(pairs), diagonal=len(diag))
    return report


def matchings(elems: tuple[int, ...]):
    """All partitions of ``elems`` into blocks of size one or two."""
    if not elems:
        yield []
        return
    first, rest = elems[0], elems[1:]
    for tail in matchings(rest):
        yield [(first,)] + tail
    for k, other in enumerate(rest):
        for tail in matchings(rest[:k] + rest[k + 1:]):
            yield [(first, other)] + tail


def _relation_from_blocks(bound: int, blocks) -> FiniteRelation:
    return FiniteRelation(bound, frozenset((a, b) for blk in blocks for a in blk for b in blk))


def verify_lemma2(w: WindowConfig | None = None, size: int = 6) -> VerificationReport:
    """Reflexive subrelations of a relation with classes of size <= 2 are already closed."""
    report = VerificationReport()
    bound = size - 1
    ident = FiniteRelation.identity(bound)
    relations = subsets = sym = 0
    fail_list, sym_fails = [], []
    for blocks in matchings(tuple(range(size))):
        relations += 1
        e = _relation_from_blocks(bound, blocks)
        off = sorted(p for p in e.pairs if p[0] != p[1])
        for mask in range(1 << len(off)):
            chosen = [off[b] for b in range(len(off)) if mask >> b & 1]
            r = FiniteRelation(bound, ident.pairs | frozenset(chosen))
            subsets += 1
            if transitive_closure_bf(r) != r:
                fail_list.append([sorted(r.pairs)])
            if r == converse(r):
                sym += 1
                if not is_equivalence(r):
                    sym_fails.append([sorted(r.pairs)])
    _fail_or("small_classes.closed", report, fail_list, relations=relations, subrelations=subsets)
    _fail_or("small_classes.symmetric_is_equivalence", report, sym_fails, symmetric=sym)

    # with a class of three, the conclusion breaks
    e = _relation_from_blocks(bound, [(0, 1, 2)] + [(x,) for x in range(3, size)])
    off = sorted(p for p in e.pairs if p[0] != p[1])
    witnesses = []
    for mask in range(1 << len(off)):
        r = FiniteRelation(bound, ident.pairs | frozenset(off[b] for b in range(len(off)) if mask >> b & 1))
        if transitive_closure_bf(r) != r:
            witnesses.append(sorted(p for p in r.pairs if p[0] != p[1]))
    report.add("small_classes.tightness", PASS if witnesses else FAIL, counterexamples_found=len(witnesses),
               first=witnesses[0] if witnesses else None,
               **({} if witnesses else {"counterexample": "no class-size-3 counterexample"}))
    return report


def verify_prop23(eta: InjectiveStream, a_membership: Callable[[int], bool],
                  w: WindowConfig) -> VerificationReport:
    """The join of the two pairing relations is ``F G F``, with the expected triples."""
    report = VerificationReport()
    n = w.n
    f, g = prop23_pair(eta)
    fw, gw = f.window(n), g.window(n)

    fails = []
    for nm, rel in (("F", fw), ("G", gw)):
        if not is_equivalence(rel):
            fails.append([nm, *_equivalence_counterexample(rel)])
        big = [sorted(c) for c in classes(rel) if len(c) > 2]
        if big:
            fails.append([nm, "class larger than two", big[0]])
    _fail_or("triples.F_G_small_classes", report, fails)

    fg, gf = compose(fw, gw), compose(gw, fw)
    fgf, gfg = compose(fg, fw), compose(gf, gw)
    lhs = fgf | gfg
    mid = fg | gf
    fails = []
    for nm, a, b in (("FGF|GFG vs FG|GF", lhs, mid), ("FG|GF vs FGF", mid, fgf)):
        diff = sorted(a.pairs ^ b.pairs)
        if diff:
            fails.append([nm, *diff[0]])
    _fail_or("triples.composition_identity", report, fails, pairs=len(fgf))

    join = lattice_join(fw, gw)
    fails = []
    if join != fgf:
        fails.append(["join vs FGF", *sorted(join.pairs ^ fgf.pairs)[0]])
    closed = prop23_join_truth(eta).window(n)
    if join != closed:
        fails.append(["join vs closed form", *sorted(join.pairs ^ closed.pairs)[0]])
    expected = _expected_prop23_classes(eta, n)
    got = [sorted(c) for c in classes(join)]
    if got != expected:
        mismatch = next(x for x in got + expected if (x in got) != (x in expected))
        fails.append(["class mismatch", mismatch])
    triples = [c for c in got if len(c) == 3]
    status_fails = fails
    if not triples and not fails:
        report.add("triples.join_classes", INCONCLUSIVE, reason="no complete triple in window")
    else:
        _fail_or("triples.join_classes", report, status_fails, triples=triples,
                 classes=len(got))

    fails, checked = [], []
    k = 1
    while 5 ** k <= n:
        joined = (3 ** k, 5 ** k) in join
        checked.append(k)
        if joined != bool(a_membership(k)):
            fails.append([k, bool(a_membership(k)), joined])
        k += 1
    if not checked:
        report.add("triples.reduction", INCONCLUSIVE, reason="window below 5")
    else:
        _fail_or("triples.reduction", report, fails, checked=checked)
    return report


def _expected_prop23_classes(eta: InjectiveStream, n: int) -> list[list[int]]:
    grouped = set()
    out = []
    k = 1
    while 2 * k <= n and eta.defined(k):
        members = [x for x in (2 * k, 3 ** eta(k), 5 ** eta(k)) if x <= n]
        out.append(sorted(set(members)))
        grouped.update(members)
        k += 1
    out.extend([x] for x in range(n + 1) if x not in grouped)
    return sorted(out, key=min)


def verify_prop24(a_membership: Callable[[int], bool], w: WindowConfig, samples: int = 50) -> VerificationReport:
    """Reflexive symmetric subrelations of the pairing relation are closed, so only E itself closes to E."""
    report = VerificationReport()
    n = w.n
    e = prop24_relation(a_membership)
    ew = e.window(n)

    expected = []
    for x in range(0, n + 1, 2):
        if x + 1 <= n and a_membership(x // 2):
            expected.append([x, x + 1])
        else:
            expected.extend([[x]] + ([[x + 1]] if x + 1 <= n else []))
    got = [sorted(c) for c in classes(ew)]
    _fail_or("pairs.classes", report, [] if got == sorted(expected, key=min) else [["classes differ", got]])

    fails = [[k, bool(a_membership(k))] for k in range((n - 1) // 2 + 1)
             if ((2 * k, 2 * k + 1) in ew) != bool(a_membership(k))]
    _fail_or("pairs.reduction", report, fails)

    ident = FiniteRelation.identity(n)
    links = sorted((i, j) for i, j in ew.pairs if i < j)
    rng = random.Random(w.seeds[0] if w.seeds else 0)
    trials = [[], links]
    trials += [[p for p in links if rng.random() < 0.5] for _ in range(samples)]
    fails = []
    for chosen in trials:
        r = FiniteRelation(n, ident.pairs | frozenset(chosen) | frozenset((j, i) for i, j in chosen))
        tc = transitive_closure_bf(r)
        if tc != r:
            fails.append(["not closed", sorted(chosen)])
        if (tc == ew) != (r == ew):
            fails.append(["closes to E without being E", sorted(chosen)])
    _fail_or("pairs.closure_of_subrelations", report, fails, trials=len(trials), links=len(links))
    return report


# orchestration ---------------------------------------------------------


def verify_ic_relation(spec: RelationSpec, w: WindowConfig) -> VerificationReport:
    """Every IC-side check for one relation."""
    label = f"{spec.truth.label}: "
    report = VerificationReport()
    report.extend(verify_coding(spec.nu, w, label=label))
    base = spec.base_nu or spec.nu
    try:
        ctx11 = DerivedContext(new_coding(base, w.fuel))
        report.extend(verify_prop11(spec.truth, ctx11, w, label=label))
    except FuelExhausted as exc:
        report.add(f"{label}rsr.completeness", INCONCLUSIVE, exc.queries, reason=str(exc))
    if spec.truth.class_kind == FC:
        return report
    try:
        ctx = DerivedContext(new_coding(spec.nu, w.fuel))
        report.extend(verify_F_oracle(ctx, w, label=label))
        report.extend(verify_formula(ctx, label=label))
        report.extend(verify_lemma13_shape(ctx, w, label=label))
        report.extend(verify_prop17_18(spec.truth, new_merged(spec.nu, w.fuel), w, label=label))
    except FuelExhausted as exc:
        report.add(f"{label}derived", INCONCLUSIVE, exc.queries, reason=str(exc))
    return report


def verify_spec(spec: RelationSpec, w: WindowConfig) -> VerificationReport:
    if spec.kind == "prop23":
        eta = InjectiveStream(spec.params["eta"])
        members = set(spec.params["eta"])
        report = verify_prop23(eta, members.__contains__, w)
    elif spec.kind == "prop24":
        members = set(spec.params["A"])
        report = verify_prop24(members.__contains__, w)
    else:
        report = verify_ic_relation(spec, w)
    report.manifest = manifest(w, spec.to_json())
    return report


def run_all(w: WindowConfig | None = None) -> VerificationReport:
    """Every check: the built-in IC relations first, then the finite-class constructions."""
    w = w or WindowConfig()
    report = VerificationReport()
    for spec in builtin_ic_relations():
        report.extend(verify_ic_relation(spec, w))
    report.extend(verify_lemma2(w))
    wide = replace(w, n=max(w.n, 250))
    report.extend(verify_prop23(InjectiveStream((2, 3, 7)), {2, 3, 7}.__contains__, wide))
    report.extend(verify_prop24({3}.__contains__, replace(w, n=max(w.n, 16))))
    report.manifest = manifest(w, "builtin")
    return report


def manifest(w: WindowConfig, spec: str, command: str = "verify") -> dict:
    return {"command": command, "relation": spec, "window": w.n, "fuel": w.fuel,
            "seeds": list(w.seeds), "table_cap": w.table_cap, "merged_cap": w.merged_cap, "version": __version__}


__all__ = [
    "FAIL",
    "INCONCLUSIVE",
    "PASS",
    "REPORT_SCHEMA",
    "Check",
    "VerificationReport",
    "WindowConfig",
    "bfs_distance",
    "manifest",
    "matchings",
    "reach_oracle",
    "run_all",
    "verify_F_oracle",
    "verify_coding",
    "verify_formula",
    "verify_ic_relation",
    "verify_lemma2",
    "verify_lemma13_shape",
    "verify_prop11",
    "verify_prop17_18",
    "verify_prop23",
    "verify_prop24",
    "verify_spec",
]
