"""The nine acceptance criteria, each timed against its budget.

Every test records one PASS/FAIL line; conftest prints them in the terminal summary.
"""

import os
import subprocess
import sys
import time

import pytest

from bt_strata import dl_finite as DF
from bt_strata import hermitian as H
from bt_strata import selftest as T

RESULTS = []


def _fresh():
    DF._count_cached.cache_clear()
    H._enumerate_cached.cache_clear()
    H._dual.cache_clear()


def check(label, budget, fn):
    """Run fn() -> (ok, detail) from cold caches and record one line."""
    _fresh()
    t0 = time.perf_counter()
    ok, detail = fn()
    took = time.perf_counter() - t0
    passed = ok and (budget is None or took < budget)
    limit = "" if budget is None else f" (budget {budget:.0f}s)"
    line = f"{'PASS' if passed else 'FAIL'}  {label}: {detail}; {took:.1f}s{limit}"
    RESULTS.append(line)
    print(line)
    assert ok, detail
    assert budget is None or took < budget, f"took {took:.1f}s, budget {budget}s"


def _all(rows):
    return all(ok for ok, _ in rows), "; ".join(d for _, d in rows)


def test_duality_laws():
    rows = lambda: _all([T.duality_laws(p, f, 500) for p in (3, 5) for f in (1, 2)])
    check("1 duality laws, 500 lattices x (p, f) in {3,5} x {1,2}", 60, rows)


def test_classifier_soundness():
    rows = lambda: _all([T.classifier_sweep(n, h) for n in (2, 3) for h in range(n + 1)])
    check("2 classifier soundness, q=3, n in {2,3}", 180, rows)


def test_stratum_set_laws():
    rows = lambda: _all([T.set_laws(n, h) for n in (2, 3) for h in range(n + 1)])
    check("3 stratum set laws, q=3, n in {2,3}, a=1", 300, rows)


def test_flag_decomposition_and_dimensions():
    rows = lambda: _all([T.dl_decomposition(7), T.weyl_dimensions(7)])
    check("4 closed = open-id + open-w and Weyl dimensions, t <= 7", 300, rows)


def test_projective_space_counts():
    check("5 projective counts, n in {2,3,4}, m in {1,2}", 120,
          lambda: T.projective_counts((2, 3, 4), (1, 2)))


def test_component_labels():
    check("6 components are the maximal nodes, n in {2,3}", 60, lambda: T.components((2, 3)))


def test_intersection_numbers():
    check("7 chi closed forms, shift identity, integrality", 10, lambda: T.chi_grid(20, (3, 5, 7)))


def test_reduction_conservation():
    check("8 reduction conservation, n <= 12", 10, lambda: T.reduction_conservation(12))


def _selftest(seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    code = "import sys; from bt_strata.cli import run; sys.exit(run(sys.argv[1:]))"
    return subprocess.run([sys.executable, "-c", code, "selftest", "--quick"],
                          capture_output=True, env=env, timeout=600)


def test_selftest_is_deterministic():
    def both():
        a, b = _selftest(1), _selftest(2)
        same = a.stdout == b.stdout and a.returncode == b.returncode == 0
        return same, f"{len(a.stdout)} bytes, exit codes {a.returncode}/{b.returncode}"
    check("9 selftest --quick byte-identical across processes", None, both)


@pytest.fixture(scope="session", autouse=True)
def _report(request):
    yield
    request.config._acceptance_lines = list(RESULTS)
