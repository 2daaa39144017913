"""
Acceptance criteria 1-9.

Each criterion prints one ``criterion N: PASS|FAIL ...`` line (collected into
the pytest terminal summary by ``conftest.py``) and then asserts.  Run
directly with ``python3 tests/test_acceptance.py`` for the lines alone.
"""

import random
import time

import numpy as np
import pytest

from qosc.constructs import Realization, build_H, pw_mode, q_integer
from qosc.fockrep import FockBasis, interior_residual, op_annihilator, op_identity
from qosc.ncalg import paper, pw, rewrite_consistency
from qosc.verify import SUITES, Params, _symbolic_verdict, builtin_suite, cross_check, limit_sweep, run_suite

RESULTS = {}


def _record(k, ok, detail):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[k] = line
    print(line)
    return ok


def criterion_1():
    """Exact symbolic proof of every displayed relation, n = 3, under 1 s."""
    t = time.perf_counter()
    verdicts = {}
    for sid in SUITES:
        for rel in builtin_suite(sid, 3).relations:
            if rel.symbolic is not None:
                verdicts[f"{sid}/{rel.name}"] = _symbolic_verdict(rel)[0]
    dt = time.perf_counter() - t
    bad = [k for k, v in verdicts.items() if v != "proved"]
    ok = not bad and dt < 1.0
    return _record(1, ok, f"{len(verdicts) - len(bad)}/{len(verdicts)} proved in {dt:.2f}s"
                   + (f"; not proved: {bad[:5]}" if bad else ""))


def criterion_2():
    """All seven suites at q0 in {0.3, 0.5, 0.9}, n = 3, D = 12, margin 1: residual <= 1e-10."""
    t = time.perf_counter()
    failures, worst = [], 0.0
    for q0 in (0.3, 0.5, 0.9):
        for sid in SUITES:
            rep = run_suite(sid, Params(q=q0, modes=3, dim=12, margin=None, tol=1e-10))
            worst = max(worst, rep.max_residual)
            failures += [f"q={q0} {sid}/{r.name} ({r.residual:.1e})" for r in rep.relations if not r.passed]
    dt = time.perf_counter() - t
    ok = not failures and dt < 60
    detail = f"{dt:.1f}s, worst residual {worst:.2e}"
    if failures:
        detail += f"; {len(failures)} relations over threshold, e.g. {failures[0]}, {failures[-1]}"
    return _record(2, ok, detail)


def criterion_3():
    """|H[1,k] - (1-q0^2)^(1/2) A_k| <= 1e-12 on the interior, k = 1..n, n in {2,3}."""
    worst = 0.0
    for n in (2, 3):
        for q0 in (0.3, 0.5, 0.9):
            b = FockBasis(n, 8)
            H = build_H(n, b, q0)
            for k in range(1, n + 1):
                r = interior_residual(H[0, k - 1] - (1 - q0 ** 2) ** 0.5 * pw_mode(b, k, q0), 1)
                worst = max(worst, r)
    return _record(3, worst <= 1e-12, f"worst residual {worst:.2e} over n in (2,3), q0 in (0.3,0.5,0.9), D=8")


def criterion_4():
    """Round trip a_k -> A_k -> a_k to 1e-12, and the reconstructed modes pass the mode-algebra suite."""
    worst_rt, suite_ok, worst_suite = 0.0, True, 0.0
    for q0 in (0.5, 0.9):
        R = Realization(FockBasis(3, 8), q0)
        for k in (1, 2, 3):
            worst_rt = max(worst_rt, interior_residual(R.rec(k) - R.a(k), 1))
        rep = run_suite("transform_invariance", Params(q=q0, modes=3, dim=8))
        suite_ok &= rep.passed
        worst_suite = max(worst_suite, rep.max_residual)
    ok = worst_rt <= 1e-12 and suite_ok
    return _record(4, ok, f"round trip {worst_rt:.2e}, reconstructed suite worst {worst_suite:.2e} "
                          f"(q0 in (0.5,0.9), n=3, D=8)")


def criterion_5():
    """B-M relation residual and [n] spectrum at q0 = 0.5, D = 12."""
    q0, D = 0.5, 12
    R = Realization(FockBasis(1, D), q0)
    aq = R.aq(1)
    kinv = np.diag(q0 ** -np.arange(float(D)))
    rel = (aq @ aq.adjoint() - q0 * (aq.adjoint() @ aq)).toarray() - kinv
    res = float(np.linalg.norm(rel[:, : D - 1], axis=0).max())
    d = (aq.adjoint() @ aq).diagonal()
    # oracle: the closed form evaluated directly
    oracle = np.array([(q0 ** n - q0 ** -n) / (q0 - 1 / q0) for n in range(D)])
    spec = float(np.max(np.abs(d - oracle) / np.maximum(1.0, np.abs(oracle))))
    two = d[2]
    ok = res <= 1e-12 and spec <= 1e-12 and abs(two - 2.5) <= 1e-12 and q_integer(2, q0) == 2.5
    return _record(5, ok, f"relation residual {res:.2e}, spectrum deviation {spec:.2e}, [2] = {float(two)!r}")


def criterion_6():
    """commutator_norm = 1 - q0^2 to 1e-14; bm_defect strictly decreasing on a 6-point grid."""
    grid = [float(v) for v in np.linspace(0.5, 0.99, 6)]
    comm = limit_sweep("commutator_norm", grid, dim=12)
    dev = max(abs(v - (1 - q0 ** 2)) for q0, v in comm)
    bm = [v for _, v in limit_sweep("bm_defect", grid, dim=12)]
    dec = all(x > y for x, y in zip(bm, bm[1:]))
    return _record(6, dev <= 1e-14 and dec,
                   f"max |norm - (1-q0^2)| = {dev:.1e}; bm_defect {bm[0]:.3g} -> {bm[-1]:.3g} "
                   f"{'strictly decreasing' if dec else 'NOT monotone'}")


def criterion_7():
    """100 random words per presentation, length <= 6: |eval(w) - eval(nf(w))| <= 1e-9."""
    rep = cross_check(100, 6, 42, Params(q=0.5, modes=3, dim=8))
    worst = max(r.residual for r in rep.relations)
    return _record(7, rep.passed and worst <= 1e-9, f"worst scaled deviation {worst:.2e} (paper and pw, n=3, D=8)")


def criterion_8():
    """1000 random words per presentation, length <= 6, two strategies agree."""
    res = [rewrite_consistency(make(3), seed=2024, max_len=6, trials=1000) for make in (paper, pw)]
    ok = all(r.consistent for r in res)
    bad = [r.counterexample for r in res if not r.consistent]
    return _record(8, ok, f"paper and pw: {sum(r.trials for r in res)} words, "
                          f"{len(bad)} counterexamples, deepest rewrite chain {max(r.max_depth for r in res)}")


def criterion_9():
    """Margin-0 top-column residual of the q-oscillator relation equals 1 - q0^(2D)."""
    worst = 0.0
    for q0 in (0.3, 0.5, 0.9):
        for D in (4, 8, 12):
            b = FockBasis(1, D)
            a = op_annihilator(b, 1, q0)
            r = a @ a.adjoint() - q0 ** 2 * (a.adjoint() @ a) - (1 - q0 ** 2) * op_identity(b)
            top = r.column_norms()[D - 1]
            # oracle derived by hand: a a^+ vanishes on the top state, a^+ a = 1 - q^(2D-2) there
            worst = max(worst, abs(top - (1 - q0 ** (2 * D))))
            worst = max(worst, abs(interior_residual(r, 0) - (1 - q0 ** (2 * D))))
    return _record(9, worst <= 1e-12, f"max |defect - (1 - q0^(2D))| = {worst:.1e} over q0 in (0.3,0.5,0.9), D in (4,8,12)")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("crit", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 10)])
def test_criterion(crit):
    assert crit(), RESULTS[int(crit.__name__.split("_")[1])]


if __name__ == "__main__":
    for c in CRITERIA:
        c()
