"""Desk-scale property suites shared by `bt-strata selftest` and the test suite.

Each suite returns (ok, detail). Details hold only counts, never timings, so
reports are byte-identical across runs.
"""

from __future__ import annotations

import itertools
import random

from . import bt_graph as G
from . import chi_calc as C
from . import dl_finite as DF
from . import dvr_lattice as dl
from . import hermitian as H
from . import strata as ST
from .padic_core import build_tower


def duality_laws(p, f, count, seed=0, m=2, N=16):
    """(A^v)^v = tau(A), (A+B)^v = A^v n B^v and index additivity on random lattices.

    The level m = 2 keeps tau nontrivial. n cycles through 1..4.
    """
    E = build_tower(p, f, 1, N)
    F = build_tower(p, f, m, N)
    spaces = {n: H.standard_space(E, n, H.TI).at_level(F) for n in range(1, 5)}
    rng = random.Random(f"{seed}-{p}-{f}")
    fails = 0
    for i in range(count):
        n = i % 4 + 1
        S = spaces[n]
        A, B = dl.random_lattice(F, n, rng), dl.random_lattice(F, n, rng)
        Ad, Bd = H.dual(A, S), H.dual(B, S)
        if H.dual(Ad, S) != dl.tau(A):
            fails += 1
            continue
        AB = dl.lattice_sum(A, B)
        if H.dual(AB, S) != dl.intersect(Ad, Bd):
            fails += 1
            continue
        C_ = dl.intersect(A, B)
        if dl.index(C_, A) + dl.index(A, AB) != dl.index(C_, AB):
            fails += 1
    return fails == 0, f"{count - fails}/{count}"


def classifier_sweep(n, h, p=3, a=1):
    """Lift every flag of V_Lambda (one Lambda per class and type) and classify the points."""
    E = build_tower(p, 1, 1)
    S = H.standard_space(E, n, H.kind_for(n, h))
    seen, points, fails = set(), 0, 0
    for v in H.enumerate_vertex_lattices(S, n, h, a):
        if not v.plus or (v.cls, v.type) in seen:
            continue
        seen.add((v.cls, v.type))
        fs = ST.finite_space(v, S)
        k1, k2 = DF.flag_dims(fs.d, n, h, v.cls)
        for s2 in DF.all_subspaces(fs.F, fs.d, k2):
            for sub in DF.all_subspaces(fs.F, k2, k1):
                fl = DF.make_flag(fs, [DF._combine(fs.F, c, s2) for c in sub], s2)
                closed = DF.flag_membership(fl, fs, n, h) != DF.NONE
                pt = ST.lift_flag(v, fl, S)
                ok = bool(ST.is_point(pt.A, pt.B, n, h, S))
                if ok != closed or ST.reduce_point(v, pt, S) != fl:
                    fails += 1
                    continue
                if ok:
                    points += 1
                    verdicts = ST.classify(pt, S)
                    for vd in verdicts:
                        diagram = ST.l0_diagram if vd.case == "L0" else ST.l1_diagram
                        if not diagram(pt, vd.closure, S):
                            fails += 1
    return fails == 0, f"{points} points, {fails} failures"


def set_laws(n, h, p=3, a=1):
    E = build_tower(p, 1, 1)
    S = H.standard_space(E, n, H.kind_for(n, h))
    fails = ST.check_set_laws(S, n, h, a)
    return not fails, f"{len(fails)} failures"


def dl_decomposition(t_max, q=3):
    """closed = open-id + open-w, both matching the Weyl relative position, for t <= t_max."""
    fails, cases = 0, 0
    for t in range(1, t_max + 1):
        for cls in (0, 1):
            S = DF.standard_finite_space(q, t, cls=cls)
            for gap in range((t - 1) % 2, t, 2):
                n = t
                h = gap if cls == 0 else n - gap
                c = DF.count_points(S, n, h)
                cases += 1
                if (c.closed != c.open_id + c.open_w or c.open_id != c.id_position
                        or c.open_w != c.w_position or c.other_position):
                    fails += 1
                if gap == 0 and c.open_w:
                    fails += 1
    return fails == 0, f"{cases} cases, {fails} failures"


def weyl_dimensions(t_max=9):
    fails, cases = 0, 0
    for t in range(1, t_max + 1):
        for cls in (0, 1):
            for gap in range((t - 1) % 2, t, 2):
                n = t
                h = gap if cls == 0 else n - gap
                D = DF.weyl_datum_for(t, n, h, cls)
                cases += 1
                if DF.dimension_weyl(D) != DF.dimension_formula(t, n, h, cls) or not DF.is_irreducible(D):
                    fails += 1
    return fails == 0, f"{cases} data, {fails} failures"


def projective_counts(ns, ms, q=3):
    """h = 1, class 1, t = n: every line of V is a point, (Q^n - 1)/(Q - 1) with Q = q^(2m)."""
    fails = 0
    for n in ns:
        S = DF.standard_finite_space(q, n, cls=1)
        for m in ms:
            Q = q ** (2 * m)
            if DF.count_points(S, n, 1, m).closed != (Q ** n - 1) // (Q - 1):
                fails += 1
    return fails == 0, f"{len(ns) * len(ms)} cases, {fails} failures"


def components(ns, p=3, a=1):
    fails, cases = 0, 0
    E = build_tower(p, 1, 1)
    for n in ns:
        for h in range(n + 1):
            g = G.build_graph(H.standard_space(E, n, H.kind_for(n, h)), n, h, a)
            for cls in (0, 1):
                cases += 1
                flagged = {i for i, v in enumerate(g.nodes) if v.cls == cls and g.components[i]}
                if flagged != set(g.maximal(cls)):
                    fails += 1
                if any(g.dims[i] != G.component_dimension(cls, n, h) for i in flagged):
                    fails += 1
    return fails == 0, f"{cases} cases, {fails} failures"


def chi_grid(top=20, qs=(3, 5, 7)):
    fails = 0
    if C.chi_z(0, 1, 3) != 1 or C.chi_z(0, 1, 5) != 1 or C.chi_z(1, 2, 3) != 5:
        fails += 1
    checked = 0
    for q in qs:
        for a in range(0, top + 1):
            for b in range(a + 1, top + 1, 2):
                z, y = C.chi_z(a, b, q), C.chi_y(a, b, q)
                checked += 1
                if y != C.chi_z(a + 1, b + 1, q):
                    fails += 1
                if z.denominator != 1 or z <= 0 or y.denominator != 1 or y <= 0:
                    fails += 1
    return fails == 0, f"{checked} pairs, {fails} failures"


def supported_profiles(n_max, pairs=((0, 1), (1, 2), (0, 3), (2, 5))):
    """Every z-case and y-case profile with n <= n_max, distinguished pair from `pairs`."""
    out = []
    for n in range(2, n_max + 1):
        for h in range(0, n + 1):
            k = n - h
            for a, b in pairs:
                if k >= 2:
                    for i, j in itertools.combinations(range(k), 2):
                        x = [0] * k
                        x[i], x[j] = b, a
                        out.append(C.IntersectionProblem(n, h, tuple(x), (-1,) * h, 3))
                if h >= 2:
                    for ya, yb in ((a, b), (a - 1, b - 1)):
                        for i, j in itertools.combinations(range(h), 2):
                            y = [-1] * h
                            y[i], y[j] = yb, ya
                            out.append(C.IntersectionProblem(n, h, (0,) * k, tuple(y), 3))
    return out


def reduction_conservation(n_max=12):
    fails = 0
    profiles = supported_profiles(n_max)
    for prob in profiles:
        r = C.reduce_problem(prob)
        vals = prob.xvals if r.case == "z" else prob.yvals
        stripped = sorted(s.val for s in r.trace if s.slot == ("x" if r.case == "z" else "y"))
        if len(r.trace) != prob.n - 2:
            fails += 1
        elif sorted(stripped + list(r.core)) != sorted(vals):
            fails += 1
        elif r.trace and (r.trace[-1].n, r.trace[-1].h) != (2, 0 if r.case == "z" else 2):
            fails += 1
    return fails == 0, f"{len(profiles)} profiles, {fails} failures"


def suites(quick=True, seed=0):
    """(name, thunk) pairs in report order."""
    ns = (2,) if quick else (2, 3)
    out = []
    for p, f in ((3, 1), (5, 1), (3, 2), (5, 2)):
        out.append((f"duality-laws p={p} f={f}",
                    lambda p=p, f=f: duality_laws(p, f, 20 if quick else 500, seed)))
    for n in ns:
        for h in range(n + 1):
            out.append((f"classifier n={n} h={h}", lambda n=n, h=h: classifier_sweep(n, h)))
            out.append((f"set-laws n={n} h={h}", lambda n=n, h=h: set_laws(n, h)))
    out.append(("flag-decomposition", lambda: dl_decomposition(4 if quick else 7)))
    out.append(("weyl-dimensions", lambda: weyl_dimensions(9)))
    out.append(("projective-counts", lambda: projective_counts((2, 3) if quick else (2, 3, 4), (1, 2))))
    out.append(("components", lambda: components(ns)))
    out.append(("chi-closed-forms", lambda: chi_grid()))
    out.append(("reduction-conservation", lambda: reduction_conservation(12)))
    return out


def run(quick=True, seed=0):
    """List of (name, ok, detail)."""
    rows = []
    for name, thunk in suites(quick, seed):
        ok, detail = thunk()
        rows.append((name, ok, detail))
    return rows


def report(rows):
    width = max(len(r[0]) for r in rows)
    lines = [f"{'suite'.ljust(width)}  result  detail"]
    for name, ok, detail in rows:
        lines.append(f"{name.ljust(width)}  {'PASS' if ok else 'FAIL'}    {detail}")
    passed = sum(1 for r in rows if r[1])
    lines.append(f"{passed}/{len(rows)} suites passed")
    return "\n".join(lines) + "\n"
