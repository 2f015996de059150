"""The windowed stratification graph on sign-"+" vertex lattices.

Nodes carry (class, type, dimension). Inclusion edges join Lambda' < Lambda of
the same class; cross edges join a class-1 Lambda1 to a class-0 Lambda0 when
pi Lambda1^vee <= Lambda0. Components are the class-0 nodes of type t_max and
the class-1 nodes pi Lambda^vee with Lambda of type t_min.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from . import dvr_lattice as dl
from . import hermitian as H
from .dl_finite import count_points, dimension_weyl, weyl_datum_for
from .errors import UsageError


def t_max(n, h):
    return n if (n - h) % 2 else n - 1


def t_min(n, h):
    return 0 if h % 2 else 1


def is_component(v):
    n, h = v.n, v.h
    if v.cls == 0:
        return v.type == t_max(n, h)
    return v.type == n - t_min(n, h)


def component_dimension(cls, n, h):
    if cls == 0:
        return (t_max(n, h) - 1 - h) // 2 + h
    return (h - 1 - t_min(n, h)) // 2 + (n - h)


@dataclass
class StrataGraph:
    space: H.HermitianSpace
    n: int
    h: int
    a: int
    nodes: list
    dims: list
    components: list
    inclusions: list = field(default_factory=list)  # (i, j): nodes[i] < nodes[j]
    crosses: list = field(default_factory=list)     # (i, j): i class 1, j class 0

    def header(self, m=None):
        F = self.space.field
        out = {"p": F.p, "f": F.f, "n": self.n, "h": self.h, "kind": self.space.kind, "a": self.a}
        if m is not None:
            out["m"] = m
        return out

    def index_of(self, v):
        return self.nodes.index(v)

    def maximal(self, cls):
        """Indices of nodes of the class not strictly contained in another node of that class."""
        below = {i for i, _ in self.inclusions}
        return [i for i, v in enumerate(self.nodes) if v.cls == cls and i not in below]


def build_graph(space, n, h, a):
    verts = [v for v in H.enumerate_vertex_lattices(space, n, h, a) if v.plus]
    dims = [dimension_weyl(weyl_datum_for(v.type, n, h, v.cls)) for v in verts]
    comps = [is_component(v) for v in verts]
    g = StrataGraph(space, n, h, a, verts, dims, comps)
    duals = [dl.scale(H.dual(v.lattice, space), 1) for v in verts]
    for i, u in enumerate(verts):
        for j, v in enumerate(verts):
            if i == j:
                continue
            if u.cls == v.cls and dl.is_sublattice(u.lattice, v.lattice):
                g.inclusions.append((i, j))
            elif u.cls == 1 and v.cls == 0 and dl.is_sublattice(duals[i], v.lattice):
                g.crosses.append((i, j))
    return g


def stratum_intersection(v1, v2, space):
    """The vertex lattice Lambda1 n Lambda2, or "empty" when it is not sign "+" of that class."""
    if v1.cls != v2.cls:
        raise UsageError("stratum_intersection needs two lattices of the same class")
    if not (v1.plus and v2.plus):
        raise UsageError("stratum_intersection needs sign-'+' lattices")
    L = dl.intersect(v1.lattice, v2.lattice)
    v = H.classify_vertex(L, space, v1.n, v1.h, cls=v1.cls)
    if v == H.NOT_VERTEX or not v.plus:
        return "empty"
    return v


@dataclass(frozen=True)
class StratumCount:
    closed: int
    open: int
    complete: bool  # False: sublattices may leave the window, open is an upper bound


def open_stratum_counts(g, m=1):
    """Closed counts from the flag counter, open counts by subtracting substrata."""
    from .strata import finite_space
    low = dl.scale(H.base_lattice(g.space), g.a)
    closed = []
    for v in g.nodes:
        closed.append(count_points(finite_space(v, g.space, 1), g.n, g.h, m).closed)
    below = {j: [] for j in range(len(g.nodes))}
    for i, j in g.inclusions:
        below[j].append(i)
    order = sorted(range(len(g.nodes)), key=lambda i: g.nodes[i].type)
    opens = {}
    for j in order:
        opens[j] = closed[j] - sum(opens[i] for i in below[j])
    out = []
    for j, v in enumerate(g.nodes):
        floor = dl.scale(H.dual(v.lattice, g.space), v.cls + 1)
        out.append(StratumCount(closed[j], opens[j], dl.is_sublattice(low, floor)))
    return out


# -- export ------------------------------------------------------------------

def _node_rows(g, counts=None):
    rows = []
    for i, v in enumerate(g.nodes):
        row = {"id": f"v{i}", "class": v.cls, "type": v.type, "dim": g.dims[i],
               "component": g.components[i], "lattice": v.lattice.compact()}
        if counts is not None:
            row.update(closed=counts[i].closed, open=counts[i].open, complete=counts[i].complete)
        rows.append(row)
    return rows


def export(g, fmt, m=None, counts=None):
    head = g.header(m)
    if fmt == "dot":
        return _dot(g, head)
    if fmt == "json":
        data = {"header": head, "nodes": _node_rows(g, counts),
                "inclusions": [[f"v{i}", f"v{j}"] for i, j in g.inclusions],
                "crosses": [[f"v{i}", f"v{j}"] for i, j in g.crosses]}
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        buf.write("# " + " ".join(f"{k}={v}" for k, v in head.items()) + "\n")
        rows = _node_rows(g, counts)
        cols = ["id", "class", "type", "dim", "component", "lattice"]
        if counts is not None:
            cols += ["closed", "open", "complete"]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)
        return buf.getvalue()
    raise UsageError(f"unknown format {fmt!r}")


def _dot(g, head):
    lines = ["graph strata {"]
    lines.append("  // " + " ".join(f"{k}={v}" for k, v in head.items()))
    for i, v in enumerate(g.nodes):
        shape = "doublecircle" if g.components[i] else "circle"
        lines.append(f'  v{i} [label="{v.cls}/{v.type}/{g.dims[i]}", shape={shape}];')
    for i, j in g.inclusions:
        lines.append(f"  v{i} -- v{j} [style=solid];")
    for i, j in g.crosses:
        lines.append(f"  v{i} -- v{j} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
