"""Acceptance suite: one printed PASS/FAIL line per criterion.

Each criterion is a function returning ``(ok, detail)``; ``detail`` is plain
JSON data, so the determinism criterion can rerun every other one and
compare bytes. Wall-clock times are printed but kept out of ``detail``.
"""

import json
import time
from itertools import product

import pytest
from oracles import bfs_reach, literal_chi

from ceer.coding import build_coding, check_coding_conditions, new_coding, new_merged
from ceer.derived import DerivedContext, in_F, in_F_formula
from ceer.generators import InjectiveStream, builtin_ic_relations, load_spec
from ceer.harness import (
    PASS,
    WindowConfig,
    verify_lemma2,
    verify_lemma13_shape,
    verify_prop11,
    verify_prop17_18,
    verify_prop23,
    verify_spec,
)
from ceer.seqcode import beta, encode_seq, parse_code

BUILTIN_NAMES = ["mod 1", "mod 2", "mod 3", "mod 5"]


def statuses(report):
    # names may carry a "relation: " prefix
    return {c.name.split(": ")[-1]: c.status for c in report.checks}


def c1_coding_soundness():
    detail = {}
    for name, spec in zip(BUILTIN_NAMES, builtin_ic_relations()):
        t = build_coding(spec.nu, 200, 10**6)
        rep = check_coding_conditions(t)
        mono = all(a < b for a, b in zip(t.chi, t.chi[1:])) and all(
            a[1] < b[1] for a, b in zip(t.pi, t.pi[1:]))
        detail[name] = {"clauses": sorted(rep.clauses), "failures": rep.failures(),
                        "monotone": mono, "chi_200": t.chi_at(200)}
    ok = all(not d["failures"] and d["monotone"] for d in detail.values())
    return ok, detail


def c2_worked_values():
    nu = load_spec("full").nu
    t = build_coding(nu, 3, 10**8)
    chi, pi = literal_chi(nu, 3)
    detail = {"chi": list(t.chi), "pi": [list(p) for p in t.pi],
              "oracle_chi": chi, "oracle_pi": [list(p) for p in pi]}
    ok = (list(t.chi) == chi == [5, 14, 15]
          and [tuple(p) for p in t.pi] == pi == [(0, 2), (1, 3), (0, 7)])
    return ok, detail


def c3_closure_oracle():
    detail = {}
    for name, spec in zip(BUILTIN_NAMES, builtin_ic_relations()):
        ctx = DerivedContext(new_coding(spec.nu))
        mismatches = []
        for i in range(51):
            for j in range(51):
                truth = i == j or bfs_reach(ctx.edges(max(i, j)), i, j)
                if in_F(i, j, ctx) != truth:
                    mismatches.append([i, j])
        detail[name] = {"pairs": 51 * 51, "mismatches": mismatches}
    return all(not d["mismatches"] for d in detail.values()), detail


def c4_formula():
    ctx = DerivedContext(new_coding(load_spec("full").nu, 10**8))
    betas = [beta(k) for k in (1, 2, 3)]
    rows = []
    for i in range(5):
        for j in range(5 - i):
            rows.append([i, j, in_F_formula(i, j, ctx), in_F(i, j, ctx)])
    ok = betas == [16, 512, 65536] and all(a == b for *_, a, b in rows)
    return ok, {"beta": betas, "rows": rows}


def c5_codec():
    cases, codes, bad_roundtrip = 0, set(), []
    items = [x for x in range(-4, 5) if x]
    for length in range(1, 5):
        for s in product(items, repeat=length):
            cases += 1
            z = encode_seq(s)
            codes.add(z)
            if parse_code(z) != s:
                bad_roundtrip.append(list(s))
    bound_fails = []
    for k in range(1, 5):
        mags = [x for x in range(-k, k + 1) if x]
        for length in range(1, k + 1):
            for s in product(mags, repeat=length):
                if encode_seq(s) > beta(k):
                    bound_fails.append([k, list(s)])
    detail = {"cases": cases, "distinct_codes": len(codes), "roundtrip_failures": bad_roundtrip,
              "bound_failures": bound_fails}
    ok = cases == 8 + 64 + 512 + 4096 == len(codes) and not bad_roundtrip and not bound_fails
    return ok, detail


def c6_rsr():
    w = WindowConfig(n=20, fuel=10**5)
    detail = {}
    for name in ("mod:2", "mod:3"):
        spec = load_spec(name)
        r = verify_prop11(spec.truth, DerivedContext(new_coding(spec.base_nu, w.fuel)), w)
        detail[name] = {c.name: {"status": c.status, **c.detail} for c in r.checks}
    ok = all(d["rsr.soundness"]["status"] == PASS and d["rsr.completeness"]["status"] == PASS
             for d in detail.values())
    return ok, detail


def c7_decomposition():
    spec = load_spec("mod:3")
    r = verify_prop17_18(spec.truth, new_merged(spec.nu), WindowConfig(n=30))
    st = statuses(r)
    needed = ["F.equivalence_subset", "G.equivalence_subset", "merged.interleaving", "J.field"]
    entries = r.by_name("merged.interleaving").detail["entries"]
    ok = all(st[n] == PASS for n in needed) and entries >= 100
    return ok, {"statuses": st, "interleaving_entries": entries,
                "field_J": r.by_name("J.field").detail["field_J"]}


def c8_walk_shape():
    detail = {}
    for name, spec in zip(BUILTIN_NAMES, builtin_ic_relations()):
        r = verify_lemma13_shape(DerivedContext(new_coding(spec.nu)), WindowConfig(n=60))
        c = r.checks[0]
        detail[name] = {"status": c.status, **c.detail}
    ok = all(d["status"] == PASS and d["sampled"] == 100 for d in detail.values())
    return ok, detail


def c9_small_classes():
    r = verify_lemma2()
    st = statuses(r)
    tight = r.by_name("small_classes.tightness").detail
    ok = set(st.values()) == {PASS} and tight["counterexamples_found"] >= 1
    return ok, {"statuses": st, "closed": r.by_name("small_classes.closed").detail,
                "tightness_found": tight["counterexamples_found"]}


def c10_triples():
    r = verify_prop23(InjectiveStream((2, 3, 7)), {2, 3, 7}.__contains__, WindowConfig(n=250))
    st = statuses(r)
    triples = r.by_name("triples.join_classes").detail["triples"]
    ok = set(st.values()) == {PASS} and triples == [[2, 9, 25], [4, 27, 125]]
    return ok, {"statuses": st, "triples": triples,
                "checked": r.by_name("triples.reduction").detail["checked"]}


CRITERIA = {
    1: (c1_coding_soundness, 5.0),
    2: (c2_worked_values, None),
    3: (c3_closure_oracle, 10.0),
    4: (c4_formula, None),
    5: (c5_codec, None),
    6: (c6_rsr, None),
    7: (c7_decomposition, None),
    8: (c8_walk_shape, None),
    9: (c9_small_classes, None),
    10: (c10_triples, None),
}

_first_run: dict[int, str] = {}


def _dump(detail) -> str:
    return json.dumps(detail, sort_keys=True, indent=1)


def _announce(capsys, number, ok, note):
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {note}")


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    fn, budget = CRITERIA[number]
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    _first_run[number] = _dump(detail)
    in_time = budget is None or elapsed < budget
    note = f"({elapsed:.2f}s" + (f", budget {budget:.0f}s)" if budget else ")")
    _announce(capsys, number, ok and in_time, note)
    assert ok, _first_run[number][:2000]
    assert in_time, f"took {elapsed:.2f}s, budget {budget}s"


def test_criterion_11_determinism(capsys):
    diffs = []
    for number, (fn, _) in sorted(CRITERIA.items()):
        again = _dump(fn()[1])
        # a missing first run (test selected alone) is computed here twice
        first = _first_run.get(number) or _dump(fn()[1])
        if again != first:
            diffs.append(number)
    # the harness report itself, as ``ceer verify mod:3 --json`` writes it
    w = WindowConfig(n=30)
    if verify_spec(load_spec("mod:3"), w).to_json() != verify_spec(load_spec("mod:3"), w).to_json():
        diffs.append("report")
    ok = not diffs
    _announce(capsys, 11, ok, f"reran criteria 1-10, differing: {diffs or 'none'}")
    assert ok
