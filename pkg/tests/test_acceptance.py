"""Acceptance criteria, one test each; the terminal summary prints a PASS/FAIL line per criterion."""

import time
from fractions import Fraction

import numpy as np
import pytest

from soqc.atlas import standard_subgroups
from soqc.chartable import character_table
from soqc.field import FieldTable
from soqc.groups import build_group, closure, generators, predicate_search
from soqc.reps import RepTheory
from soqc.verify import CATALOG, VerifyConfig, run_suite
from soqc.weyl import WeylAtlas


def _enumerate_both(p):
    F = FieldTable(p)
    build_group.cache_clear()
    start = time.perf_counter()
    G = build_group("so-even", F, 2)
    by_closure = closure(G.space, generators("so-even", F, 2))
    by_search = predicate_search(G.space, G.gram)
    U = standard_subgroups(G).U
    return G, by_closure, by_search, U, time.perf_counter() - start


@pytest.mark.parametrize("p,order,u,budget", [(3, 720, 9, 10.0), (5, 15600, 25, 180.0)])
def test_c01_orders(criterion, p, order, u, budget):
    G, by_closure, by_search, U, secs = _enumerate_both(p)
    ok = (G.order == len(by_closure) == len(by_search) == order and np.array_equal(by_closure, by_search)
          and len(U) == u and secs < budget)
    criterion(1, ok, f"|SO_4^-({p})| = {G.order}, |U| = {len(U)}, {secs:.1f}s")
    assert ok


def test_c02_character_table(criterion):
    start = time.perf_counter()
    G = build_group("so-even", FieldTable(3), 2)
    X = character_table(G)
    rows, cols = X.orthogonality()
    secs = time.perf_counter() - start
    ok = rows and cols and sum(d * d for d in X.degrees) == 720 and secs < 60
    criterion(2, ok, f"{len(X)} irreducibles, sum dim^2 = {sum(d * d for d in X.degrees)}, {secs:.1f}s")
    assert ok


def test_c03_multiplicity(criterion):
    F = FieldTable(3)
    seen = {}
    for kind, size in [("so-even", 2), ("so-odd", 1), ("gl", 2)]:
        th = RepTheory(build_group(kind, F, size))
        seen[th.G.name] = {th.generic_multiplicity(i) for i in range(len(th.table))}
    ok = all(m <= {Fraction(0), Fraction(1)} for m in seen.values())
    criterion(3, ok, "; ".join(f"{k}: {sorted(map(str, v))}" for k, v in seen.items()))
    assert ok


def test_c04_bessel_oracle(criterion, theory):
    G = theory.G
    generic = theory.generic()
    bad = [i for i in generic if not theory.bessel(i).same_as(theory.whittaker_oracle(i)[0])]
    ok = not bad and len(generic) > 0 and theory.bessel(generic[0]).values.shape[0] == G.order
    criterion(4, ok, f"{len(generic)} generic pi on {G.order} points")
    assert ok


def test_c05_suite(criterion, full_report):
    report, secs = full_report
    counts = report.counts()
    ok = counts == {"pass": len(CATALOG), "fail": 0, "skipped": 0} and secs < 600
    criterion(5, ok, f"{counts['pass']}/{len(CATALOG)} pass in {secs:.1f}s")
    assert ok, [(c.name, c.status, c.detail) for c in report.checks if c.status != "pass"]


def test_c06_certificates(criterion, full_report):
    report, _ = full_report
    ws = report.extras["workspace"]
    sizes = [len(ws.gamma(n, i, t.index).certificate)
             for n in (1, 2) for i in ws.cuspidal() for t in ws.taus(n)]
    ok = min(sizes) >= 16
    criterion(6, ok, f"{len(sizes)} (pi, tau) pairs, min {min(sizes)} certificate pairs")
    assert ok


def test_c07_conjugate_gamma(criterion, full_report):
    report, _ = full_report
    ws = report.extras["workspace"]
    th = ws.theory
    pairs = [(n, i, t.index) for n in (1, 2) for i in ws.cuspidal() for t in ws.taus(n)]
    ok = all(ws.gamma(n, i, t).value == ws.gamma(n, th.conjugate_id(i), t).value for n, i, t in pairs)
    ok = ok and all(report.record(c).status == "pass" for c in ("conj-gamma-6.3", "conj-gamma-7.4"))
    criterion(7, ok, f"{len(pairs)} pairs")
    assert ok


def test_c08_converse(criterion, full_report):
    report, _ = full_report
    rec = report.record("converse-8.2")
    ok = rec.status == "pass" and report.record("bessel-sum-8.1").status == "pass"
    criterion(8, ok, rec.detail)
    assert ok


def test_c09_hom_dimension(criterion, full_report):
    report, _ = full_report
    dims = []
    for name in ("multone-3.1", "multone-3.3"):
        rec = report.record(name)
        assert rec.status == "pass", rec.detail
        for by_pi in rec.witness["dimensions"].values():
            for ds in by_pi.values():
                dims += ds
    ok = bool(dims) and max(dims) <= 1
    criterion(9, ok, f"{len(dims)} Hom spaces for n in {{1, 2}}, max dimension {max(dims)}")
    assert ok


def test_c10_weyl(criterion):
    start = time.perf_counter()
    ok = True
    for l in range(2, 7):
        W = WeylAtlas(l)
        parts = W.bessel_partition
        covered = sorted((w for v in parts.values() for w in v), key=W.elements.index)
        ok &= W.check_theta_bijection() and W.check_theta_partition()
        ok &= covered == sorted(W.bessel_support, key=W.elements.index)
    secs = time.perf_counter() - start
    ok = ok and secs < 1.0
    criterion(10, ok, f"l = 2..6 in {secs:.3f}s")
    assert ok


@pytest.mark.slow
def test_c11_stretch_q5(criterion):
    start = time.perf_counter()
    report = run_suite(VerifyConfig(p=5))
    secs = time.perf_counter() - start
    counts = report.counts()
    ok = counts["pass"] == len(CATALOG) and secs < 3600
    criterion(11, ok, f"q = 5: {counts}, {secs:.0f}s")
    assert ok, [(c.name, c.detail) for c in report.checks if c.status != "pass"]
