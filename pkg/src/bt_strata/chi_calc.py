"""Intersection numbers of special cycles from valuation profiles.

A profile lists val h(x_i, x_i) for the n-h cycles Z(x_i) and val h(y_j, y_j)
for the h cycles Y(y_j), in an orthogonal basis. Two shapes are supported:

  z-case: every x-valuation is 0 except a distinguished pair (a, b), and every
          y-valuation is -1. Answer chi_z(a, b).
  y-case: every x-valuation is 0, every y-valuation is -1 except a
          distinguished pair (a, b) (a = -1 allowed). Answer chi_y(a, b).

Each val-0 x strips one x slot with h fixed; each val-(-1) y strips one y slot
and lowers h, until n = 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import UsageError


class UnsupportedPattern(UsageError):
    pass


@dataclass(frozen=True)
class IntersectionProblem:
    n: int
    h: int
    xvals: tuple
    yvals: tuple
    q: int

    def __post_init__(self):
        if not 0 <= self.h <= self.n:
            raise UsageError("need 0 <= h <= n")
        if len(self.xvals) != self.n - self.h or len(self.yvals) != self.h:
            raise UsageError(f"expected {self.n - self.h} x-valuations and {self.h} y-valuations")
        if self.q < 2:
            raise UsageError("q must be a prime power")


@dataclass(frozen=True)
class Step:
    slot: str   # "x" or "y"
    val: int
    n: int      # after the strip
    h: int

    def to_json(self):
        return {"slot": self.slot, "val": self.val, "n": self.n, "h": self.h}


@dataclass(frozen=True)
class Reduction:
    core: tuple
    case: str   # "z" or "y"
    trace: tuple
    edge_case: bool = False


def as_json(x):
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def _check_pair(a, b, low):
    if a < low:
        raise UsageError(f"a = {a} is below {low}")
    if a > b:
        raise UsageError("need a <= b")
    if (a - b) % 2 == 0:
        raise UsageError("a and b must have different parity")


def chi_z(a, b, q):
    """(1/2) sum_{l=0}^{a} q^l (a+b+1-2l)."""
    _check_pair(a, b, 0)
    return Fraction(sum(q ** l * (a + b + 1 - 2 * l) for l in range(a + 1)), 2)


def chi_y(a, b, q):
    """(1/2) sum_{l=0}^{a+1} q^l (a+b+3-2l); a = -1 is accepted."""
    _check_pair(a, b, -1)
    return Fraction(sum(q ** l * (a + b + 3 - 2 * l) for l in range(a + 2)), 2)


def _distinguished(vals, filler):
    """Split vals into (pair, rest) with the two largest values as the pair."""
    if len(vals) < 2:
        return None
    order = sorted(vals)
    pair, rest = tuple(order[-2:]), order[:-2]
    if any(v != filler for v in rest):
        return None
    return pair, rest


def reduce_problem(p):
    """Strip slots down to n = 2; raises UnsupportedPattern outside the two shapes."""
    z = _distinguished(p.xvals, 0) if all(v == -1 for v in p.yvals) else None
    if z is not None and (z[0][0] < 0 or (z[0][0] - z[0][1]) % 2 == 0):
        z = None
    y = _distinguished(p.yvals, -1) if all(v == 0 for v in p.xvals) else None
    if y is not None and (y[0][0] < -1 or (y[0][0] - y[0][1]) % 2 == 0):
        y = None
    if z is None and y is None:
        raise UnsupportedPattern(f"valuation profile x={list(p.xvals)} y={list(p.yvals)} is not supported")
    n, h = p.n, p.h
    steps = []
    if z is not None:
        pair, xrest = z
        for v in xrest:
            n -= 1
            steps.append(Step("x", v, n, h))
        for v in p.yvals:
            n, h = n - 1, h - 1
            steps.append(Step("y", v, n, h))
        return Reduction(pair, "z", tuple(steps))
    pair, yrest = y
    for v in p.xvals:
        n -= 1
        steps.append(Step("x", v, n, h))
    for v in yrest:
        n, h = n - 1, h - 1
        steps.append(Step("y", v, n, h))
    return Reduction(pair, "y", tuple(steps), edge_case=pair[0] == -1)


def chi(p):
    r = reduce_problem(p)
    a, b = sorted(r.core)
    return chi_z(a, b, p.q) if r.case == "z" else chi_y(a, b, p.q)
