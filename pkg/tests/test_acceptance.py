"""Acceptance criteria, one test per criterion.

Each test appends a single ``CRITERION n: PASS|FAIL ...`` line that is
printed inline and again in the terminal summary.  Set
``POLYSTRATA_STRETCH=1`` to run the d <= 13 stretch suite.
"""

import os
import random
import time

import pytest

from polystrata.complexes import (
    apply_operator,
    build_ambient,
    build_dual,
    build_quotient_complex,
    build_theta_complex,
    insert_boundary,
    merge_boundary,
)
from polystrata.composition import compositions_of
from polystrata.homology import reduced_cohomology_of_complement, reduced_homology_of_complement
from polystrata.invariants import bouquet_count, kappa, load_appendix, stability_check, verify_appendix
from polystrata.poset import closure, from_spec, parse_spec
from polystrata.snf import matmul, smith_normal_form

from oracles import bareiss_rank

STRETCH = os.environ.get("POLYSTRATA_STRETCH") == "1"
WORKERS = os.cpu_count() or 1
STABILITY_GRID = ["gen:4", "gen:1,2,1", "redge:3", "maxge:3", "maxge:4"]

# posets exercised by criteria 1-7, reused by criterion 10
SUITE_POSETS: list = []


def report(log, capsys, n, ok, detail):
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    log.append(line)
    with capsys.disabled():
        print("\n" + line)


def test_criterion_01_appendix_reproduction(acceptance_log, capsys):
    t0 = time.perf_counter()
    rows = [r for r in verify_appendix(11, negative_max_d=0, workers=WORKERS) if r.kind == "listed"]
    elapsed = time.perf_counter() - t0
    expected = [e for e in load_appendix() if e.d <= 11]
    bad = [r.to_dict() for r in rows if not r.passed]
    ok = not bad and len(rows) == len(expected) and elapsed <= 120
    SUITE_POSETS.extend(closure([r.omega], r.d) for r in rows)
    report(acceptance_log, capsys, 1, ok, f"{len(rows) - len(bad)}/{len(rows)} rows with d<=11 match, {elapsed:.1f}s (limit 120s)")
    assert ok, bad


@pytest.mark.slow
@pytest.mark.skipif(not STRETCH, reason="set POLYSTRATA_STRETCH=1 for the d<=13 stretch run")
def test_criterion_01_stretch(acceptance_log, capsys):
    t0 = time.perf_counter()
    rows = verify_appendix(13, negative_max_d=13, workers=WORKERS)
    elapsed = time.perf_counter() - t0
    bad = [r.to_dict() for r in rows if not r.passed]
    ok = not bad and elapsed <= 1800
    report(acceptance_log, capsys, "1-stretch", ok, f"{len(rows) - len(bad)}/{len(rows)} rows (listed and negative, d<=13), {elapsed:.0f}s (limit 1800s)")
    assert ok, bad[:5]


def test_criterion_02_negative_control(acceptance_log, capsys):
    rows = [r for r in verify_appendix(8, negative_max_d=8, workers=WORKERS) if r.kind == "negative"]
    bad = [(r.d, r.omega, r.computed) for r in rows if not r.passed]
    SUITE_POSETS.extend(closure([r.omega], r.d) for r in rows)
    ok = not bad and rows
    report(acceptance_log, capsys, 2, ok, f"{len(rows) - len(bad)}/{len(rows)} unlisted generators with d<=8 are trivial")
    assert ok, bad


def test_criterion_03_bouquet_count_6_3_0(acceptance_log, capsys):
    a = bouquet_count(6, 3, 0)
    SUITE_POSETS.append(from_spec(parse_spec("redge:3,0"), 6))
    report(acceptance_log, capsys, 3, a == 10, f"A(6,3,0) = {a}, expected 10")
    assert a == 10


def _admissible_q(d):
    return [0] + [q for q in range(1, d + 1) if (q - d) % 2 == 0]


def test_criterion_04_bouquet_consistency(acceptance_log, capsys):
    bad, checked = [], 0
    for d in range(4, 10):
        for k in range(3, d):
            for q in _admissible_q(d):
                th = from_spec(parse_spec(f"redge:{k},{q}"), d)
                SUITE_POSETS.append(th)
                a = bouquet_count(d, k, q)
                t = reduced_cohomology_of_complement(th)
                want = {k - 1: (a, ())} if a else {}
                checked += 1
                if t.groups != want:
                    bad.append((d, k, q, a, t.groups))
    report(acceptance_log, capsys, 4, not bad, f"{checked - len(bad)}/{checked} (d,k,q) triples give rank A in degree k-1 only, no torsion")
    assert not bad, bad


def test_criterion_05_free_group_ranks(acceptance_log, capsys):
    got = {}
    for d in range(4, 9):
        th = from_spec(parse_spec("free2"), d)
        SUITE_POSETS.append(th)
        got[d] = reduced_cohomology_of_complement(th).groups
    want = {d: {1: (k, ())} for d, k in zip(range(4, 9), (2, 4, 6, 9, 12))}
    ok = got == want and all(kappa(d) == want[d][1][0] for d in want)
    report(acceptance_log, capsys, 5, ok, "H^1 ranks " + ", ".join(f"d={d}:{g.get(1, (0,))[0]}" for d, g in got.items()))
    assert ok, got


def test_criterion_06_arnold_vassiliev(acceptance_log, capsys):
    bad, checked = [], 0
    for k in (3, 4):
        for d in range(k, 11):
            th = from_spec(parse_spec(f"maxge:{k}"), d)
            SUITE_POSETS.append(th)
            want = {(k - 2) * m: (1, ()) for m in range(1, d // k + 1)}
            got = reduced_cohomology_of_complement(th).groups
            checked += 1
            if got != want:
                bad.append((k, d, got))
    report(acceptance_log, capsys, 6, not bad, f"{checked - len(bad)}/{checked} (k,d) cases match Z in degrees (k-2)m")
    assert not bad, bad


def _parity_ok(spec, d):
    if spec.kind != "generators":
        return True
    return all((g.norm - d) % 2 == 0 and g.norm <= d for g in spec.generators)


def test_criterion_07_stabilization(acceptance_log, capsys):
    failures, checked, skipped = [], 0, []
    for text in STABILITY_GRID:
        spec = parse_spec(text)
        for d in range(4, 10):
            if not _parity_ok(spec, d):
                skipped.append((text, d))
                continue
            r = stability_check(spec, d)
            SUITE_POSETS.append(from_spec(spec, d))
            checked += 1
            for j, a, b in r.failures:
                failures.append(f"{text}@d={d} j={j}: {a}->{b} (xi={r.xi})")
    ok = not failures
    detail = f"{len(failures)} disagreements over {checked} grid points ({len(skipped)} parity-incompatible points skipped)"
    if failures:
        detail += "; first: " + "; ".join(failures[:3])
    report(acceptance_log, capsys, 7, ok, detail)
    assert ok, failures


def test_criterion_08_operator_algebra(acceptance_log, capsys):
    bad = []
    d = 9
    for m in range(0, d + 1):
        for w in compositions_of(m):
            if apply_operator(merge_boundary, merge_boundary(w)):
                bad.append(("MM", w))
            if m <= d - 4 and apply_operator(insert_boundary, insert_boundary(w)):
                bad.append(("II", w))
            if m <= d - 2:
                total = dict(apply_operator(merge_boundary, insert_boundary(w)))
                for k, v in apply_operator(insert_boundary, merge_boundary(w)).items():
                    total[k] = total.get(k, 0) + v
                if any(total.values()):
                    bad.append(("MI+IM", w))
    complexes = 0
    for dd in range(2, 10):
        cs = [build_ambient(dd)]
        cs += [build_theta_complex(th) for th in SUITE_POSETS if th.d == dd and th.elements][:40]
        cs += [build_quotient_complex(th) for th in SUITE_POSETS if th.d == dd and th.elements][:40]
        for c in cs:
            for cc in (c, build_dual(c)):
                complexes += 1
                try:
                    cc.check()
                except Exception as exc:  # noqa: BLE001 - recorded as a failure
                    bad.append(("matrix", cc.label, dd, str(exc)))
    report(acceptance_log, capsys, 8, not bad, f"operator identities on all patterns of norm <= 9 and boundary-squared checks on {complexes} complexes")
    assert not bad, bad[:5]


def _diag(res, r, c):
    out = [[0] * c for _ in range(r)]
    for i, x in enumerate(res.diagonal):
        out[i][i] = x
    return out


def test_criterion_09_snf(acceptance_log, capsys):
    rng = random.Random(20261016)
    bad = []
    for trial in range(1000):
        r, c = rng.randint(1, 7), rng.randint(1, 7)
        density = rng.choice([0.3, 0.6, 1.0])
        m = [[rng.randint(-12, 12) if rng.random() < density else 0 for _ in range(c)] for _ in range(r)]
        res = smith_normal_form(m, transforms=True)
        dg = res.diagonal
        if any(b % a for a, b in zip(dg, dg[1:])) or any(x <= 0 for x in dg):
            bad.append((trial, "chain"))
        if res.rank != bareiss_rank(m):
            bad.append((trial, "rank"))
        if matmul(matmul(res.U, m), res.V) != _diag(res, r, c):
            bad.append((trial, "reconstruction"))
    report(acceptance_log, capsys, 9, not bad, f"{1000 - len({t for t, _ in bad})}/1000 random matrices pass chain, rank and U*m*V checks")
    assert not bad, bad[:5]


def test_criterion_10_universal_coefficients(acceptance_log, capsys):
    posets = [th for th in SUITE_POSETS if th.elements]
    if not posets:
        pytest.skip("criteria 1-7 did not run")
    seen, bad = set(), []
    for th in posets:
        key = (th.d, th.elements)
        if key in seen:
            continue
        seen.add(key)
        co = reduced_cohomology_of_complement(th, route="quotient")
        ho = reduced_homology_of_complement(th, route="quotient")
        if co.ranks() != ho.ranks() or any(co.torsion(j) != ho.torsion(j - 1) for j in range(0, th.d + 2)):
            bad.append((th.d, th.spec, co.groups, ho.groups))
    report(acceptance_log, capsys, 10, not bad, f"{len(seen) - len(bad)}/{len(seen)} posets from criteria 1-7 agree in rank with torsion shifted by one")
    assert not bad, bad[:5]
