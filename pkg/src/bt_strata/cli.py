"""bt-strata: command-line entry point.

Options fall back to BT_STRATA_<NAME> environment variables, then defaults.
Exit codes: 0 ok, 2 usage, 3 budget, 4 precision, 5 invariant violation.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import asdict, dataclass

import click

from . import bt_graph as G
from . import chi_calc as C
from . import dl_finite as DF
from . import dvr_lattice as dl
from . import hermitian as H
from . import selftest as T
from . import strata as ST
from .errors import BtStrataError, BudgetError, PrecisionError, UsageError
from .padic_core import DEFAULT_PRECISION, build_tower

HINTS = {
    BudgetError: "shrink the window or the level, or raise --max-lattices / --max-subspaces",
    PrecisionError: "raise --precision",
}


@dataclass
class RunConfig:
    command: str
    p: int = 3
    f: int = 1
    n: int | None = None
    h: int | None = None
    kind: str | None = None
    precision: int = DEFAULT_PRECISION
    window: int = 1
    level: int = 1
    q: int | None = None
    format: str = "json"
    out: str | None = None
    seed: int = 0
    max_subspaces: int = DF.MAX_WORK
    max_lattices: int = H.MAX_WINDOW_LATTICES

    def __post_init__(self):
        if self.p % 2 == 0 or self.p < 3:
            raise UsageError("p must be an odd prime")
        if self.q is None:
            self.q = self.p ** self.f
        elif self.q != self.p ** self.f:
            raise UsageError(f"q = {self.q} is not p^f = {self.p ** self.f}")
        if self.n is not None and self.h is not None and not 0 <= self.h <= self.n:
            raise UsageError("need 0 <= h <= n")
        if self.max_subspaces <= 0 or self.max_lattices <= 0:
            raise UsageError("budgets must be positive")
        if self.window < 0 or self.level < 1:
            raise UsageError("need window >= 0 and level >= 1")


def _opt(*names, env, **kw):
    return click.option(*names, envvar=f"BT_STRATA_{env}", show_envvar=True, **kw)


def field_options(fn):
    for deco in reversed([
        _opt("--p", env="P", type=int, default=3, help="odd prime"),
        _opt("--f", env="F", type=int, default=1, help="residue degree of F"),
        _opt("--n", env="N", type=int, required=True),
        _opt("--h", env="H", type=int, required=True),
        _opt("--kind", env="KIND", type=click.Choice([H.TI, H.TJ]), default=None,
             help="standard form; default is forced by (n, h)"),
        _opt("--precision", env="PRECISION", type=int, default=DEFAULT_PRECISION),
        _opt("--window", env="WINDOW", type=int, default=1),
        _opt("--max-lattices", env="MAX_LATTICES", type=int, default=H.MAX_WINDOW_LATTICES),
    ]):
        fn = deco(fn)
    return fn


def out_option(fn):
    return _opt("--out", env="OUT", type=click.Path(dir_okay=False), default=None)(fn)


def emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def dump(payload, cfg):
    payload = {"config": asdict(cfg), **payload}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def space_for(cfg):
    E = build_tower(cfg.p, cfg.f, 1, cfg.precision)
    kind = cfg.kind or H.kind_for(cfg.n, cfg.h)
    cfg.kind = kind
    return H.standard_space(E, cfg.n, kind)


def vertices(cfg, space):
    return H.enumerate_vertex_lattices(space, cfg.n, cfg.h, cfg.window, limit=cfg.max_lattices)


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Vertex lattices, strata, Deligne-Lusztig counts and intersection numbers."""


@main.command("vertex-lattices")
@field_options
@_opt("--format", "fmt", env="FORMAT", type=click.Choice(["json", "csv", "text"]), default="json")
@out_option
def vertex_lattices(p, f, n, h, kind, precision, window, max_lattices, fmt, out):
    """Enumerate vertex lattices between pi^a L0 and pi^-a L0."""
    cfg = RunConfig("vertex-lattices", p, f, n, h, kind, precision, window, format=fmt, out=out,
                    max_lattices=max_lattices)
    S = space_for(cfg)
    vs = vertices(cfg, S)
    if fmt == "json":
        emit(dump({"lattices": [v.to_json() for v in vs]}, cfg), out)
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "class", "type", "sign", "lattice"])
        for i, v in enumerate(vs):
            w.writerow([i, v.cls, v.type, v.sign, v.lattice.compact()])
        emit(buf.getvalue(), out)
    else:
        lines = [f"{i:4d}  {v.cls}/{v.type} {v.sign:8s} {v.lattice.compact()}" for i, v in enumerate(vs)]
        emit("\n".join(lines) + "\n", out)


@main.command("strata-graph")
@field_options
@_opt("--level", env="LEVEL", type=int, default=None, help="attach point counts over this level")
@_opt("--format", "fmt", env="FORMAT", type=click.Choice(["dot", "json", "csv"]), default="dot")
@out_option
def strata_graph(p, f, n, h, kind, precision, window, max_lattices, level, fmt, out):
    """The stratification graph of the window."""
    cfg = RunConfig("strata-graph", p, f, n, h, kind, precision, window, level or 1, format=fmt, out=out,
                    max_lattices=max_lattices)
    S = space_for(cfg)
    g = G.build_graph(S, n, h, window)
    counts = G.open_stratum_counts(g, level) if level else None
    text = G.export(g, fmt, m=level, counts=counts)
    if fmt == "json":
        data = json.loads(text)
        text = dump(data, cfg)
    emit(text, out)


def _class_options(fn):
    for deco in reversed([
        _opt("--t", env="T", type=int, required=True, help="type of the vertex lattice"),
        _opt("--n", env="N", type=int, required=True),
        _opt("--h", env="H", type=int, required=True),
        _opt("--class", "cls", env="CLASS", type=click.IntRange(0, 1), default=0),
    ]):
        fn = deco(fn)
    return fn


@main.command("dl-count")
@_opt("--q", env="Q", type=int, default=3)
@_class_options
@_opt("--level", env="LEVEL", type=int, default=1)
@_opt("--mode", env="MODE", type=click.Choice(["auto", "fast", "full"]), default="auto")
@_opt("--max-subspaces", env="MAX_SUBSPACES", type=int, default=DF.MAX_WORK)
@out_option
def dl_count(q, t, n, h, cls, level, mode, max_subspaces, out):
    """Count closed flags of V_Lambda over F_{q^(2m)}."""
    p = DF._prime_of(q)
    f = DF._log(q, p)
    if p ** f != q:
        raise UsageError(f"q = {q} is not a prime power")
    cfg = RunConfig("dl-count", p, f, n, h, None, level=level, q=q, max_subspaces=max_subspaces, out=out)
    S = DF.standard_finite_space(q, t, cls=cls)
    c = DF.count_points(S, n, h, level, mode, max_subspaces)
    payload = {"t": t, "class": cls, **c.to_json(),
               "dim": DF.dimension_weyl(DF.weyl_datum_for(t, n, h, cls))}
    emit(dump(payload, cfg), out)


@main.command("dl-dim")
@_class_options
@_opt("--format", "fmt", env="FORMAT", type=click.Choice(["text", "json"]), default="text")
def dl_dim(t, n, h, cls, fmt):
    """Dimension of the Deligne-Lusztig variety attached to a vertex lattice of type t."""
    d = DF.dimension_weyl(DF.weyl_datum_for(t, n, h, cls))
    if fmt == "text":
        click.echo(d)
    else:
        cfg = RunConfig("dl-dim", n=n, h=h, format=fmt)
        D = DF.weyl_datum_for(t, n, h, cls)
        click.echo(dump({"t": t, "class": cls, "dim": d, "I": sorted(D.I), "w": list(D.w),
                         "irreducible": DF.is_irreducible(D)}, cfg), nl=False)


@main.command("stratum-points")
@field_options
@_opt("--lattice", env="LATTICE", type=click.File("r"), default=None,
      help="vertex lattice JSON (a vertex-lattices entry or a bare lattice)")
@_opt("--vertex", env="VERTEX", type=int, default=None, help="index into the vertex-lattices output")
@_opt("--class", "cls", env="CLASS", type=click.IntRange(0, 1), default=None)
@_opt("--level", env="LEVEL", type=int, default=1)
@out_option
def stratum_points(p, f, n, h, kind, precision, window, max_lattices, lattice, vertex, cls, level, out):
    """Points of S_Lambda or R_Lambda over level m, lifted from closed flags."""
    cfg = RunConfig("stratum-points", p, f, n, h, kind, precision, window, level, out=out,
                    max_lattices=max_lattices)
    S = space_for(cfg)
    if (lattice is None) == (vertex is None):
        raise UsageError("give exactly one of --lattice and --vertex")
    if lattice is not None:
        data = json.load(lattice)
        if "lattices" in data:
            data = data["lattices"][0]
        if "lattice" in data:
            cls = data.get("class", cls)
            data = data["lattice"]
        v = H.classify_vertex(dl.Lattice.from_json(S.field, data), S, n, h, cls=cls)
        if v == H.NOT_VERTEX:
            raise UsageError("the lattice is not a vertex lattice")
    else:
        vs = vertices(cfg, S)
        if not 0 <= vertex < len(vs):
            raise UsageError(f"vertex index must be in [0, {len(vs)})")
        v = vs[vertex]
    if not v.plus:
        raise UsageError(f"the vertex lattice has sign {v.sign!r}; strata need sign '+'")
    pts = ST.stratum_points(v, S, level)
    emit(dump({"vertex": v.to_json(), "count": len(pts), "points": [pt.to_json() for pt in pts]}, cfg), out)


@main.command("classify-point")
@field_options
@_opt("--level", env="LEVEL", type=int, default=1)
@_opt("--point", "point_file", env="POINT", type=click.File("r"), required=True,
      help='point JSON: {"A": lattice, "B": lattice} or stratum-points output (first point)')
def classify_point(p, f, n, h, kind, precision, window, max_lattices, level, point_file):
    """Classify a point (A, B) into the cases of the two-case lemma."""
    cfg = RunConfig("classify-point", p, f, n, h, kind, precision, window, level)
    S = space_for(cfg)
    data = json.load(point_file)
    if "points" in data:
        data = data["points"][0]
    data = {"level": level, "n": n, "h": h, **data}
    Fm = build_tower(p, f, data["level"], precision)
    pt = ST.point_from_json(Fm, data)
    chk = ST.is_point(pt.A, pt.B, n, h, S)
    if not chk:
        raise UsageError(f"not a point: {chk.reason}")
    verdicts = ST.classify(pt, S)
    out = [{"case": v.case, "witness": v.witness.to_json(), "depths": list(v.depths)} for v in verdicts]
    click.echo(dump({"verdicts": out}, cfg), nl=False)


def _ints(text):
    text = (text or "").strip()
    return tuple(int(x) for x in text.split(",")) if text else ()


def _chi_payload(prob):
    r = C.reduce_problem(prob)
    value = C.chi(prob)
    return {"n": prob.n, "h": prob.h, "q": prob.q, "xvals": list(prob.xvals), "yvals": list(prob.yvals),
            "core": list(sorted(r.core)), "case": r.case, "edge_case": r.edge_case,
            "chi": C.as_json(value), "trace": [s.to_json() for s in r.trace]}


@main.command("intersect-chi")
@_opt("--n", env="N", type=int, default=None)
@_opt("--h", env="H", type=int, default=None)
@_opt("--q", env="Q", type=int, default=3)
@_opt("--xvals", env="XVALS", default="")
@_opt("--yvals", env="YVALS", default="")
@_opt("--batch", env="BATCH", type=click.File("r"), default=None,
      help="CSV with columns n,h,q,xvals,yvals (values separated by ';')")
@_opt("--format", "fmt", env="FORMAT", type=click.Choice(["text", "json"]), default="text")
def intersect_chi(n, h, q, xvals, yvals, batch, fmt):
    """Intersection number of the special cycles for a valuation profile."""
    if batch is not None:
        rows = []
        for rec in csv.DictReader(batch):
            prob = C.IntersectionProblem(int(rec["n"]), int(rec["h"]),
                                         _ints(rec["xvals"].replace(";", ",")),
                                         _ints(rec["yvals"].replace(";", ",")), int(rec["q"]))
            rows.append(_chi_payload(prob))
        cfg = RunConfig("intersect-chi", format="json")
        click.echo(dump({"results": rows}, cfg), nl=False)
        return
    if n is None or h is None:
        raise UsageError("--n and --h are required without --batch")
    prob = C.IntersectionProblem(n, h, _ints(xvals), _ints(yvals), q)
    payload = _chi_payload(prob)
    if fmt == "text":
        value = C.chi(prob)
        click.echo(value if value.denominator != 1 else value.numerator)
    else:
        cfg = RunConfig("intersect-chi", n=n, h=h, format=fmt)
        click.echo(dump(payload, cfg), nl=False)


@main.command("selftest")
@click.option("--quick", is_flag=True, help="desk-scale sizes (seconds)")
@_opt("--seed", env="SEED", type=int, default=0)
def selftest(quick, seed):
    """Run the property suites and print a pass/fail table."""
    rows = T.run(quick=quick, seed=seed)
    click.echo(T.report(rows), nl=False)
    if not all(r[1] for r in rows):
        sys.exit(5)


def run(argv=None):
    """Entry point returning the exit status instead of raising SystemExit."""
    try:
        main.main(args=argv, prog_name="bt-strata", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.UsageError as e:
        e.show()
        return 2
    except click.Abort:
        return 1
    except BtStrataError as e:
        hint = next((v for k, v in HINTS.items() if isinstance(e, k)), None)
        msg = f"error: {e}" + (f" (hint: {hint})" if hint else "")
        click.echo(msg, err=True)
        return e.exit_code
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    return 0


def entry():
    sys.exit(run())
