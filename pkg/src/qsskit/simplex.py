"""Exact revised simplex over the rationals.

Solves ``min c.y  s.t.  A y = b,  y >= 0`` with :class:`fractions.Fraction`
arithmetic and Bland's smallest-index rule, so the run is deterministic and
terminates on degenerate problems.  Columns of ``A`` are given sparsely as
``{row: coefficient}`` dicts.

The entropy LPs are solved through their duals, where the number of rows is
the (small) number of free entropy coordinates and the columns are the
(many) inequality rows; see :mod:`qsskit.entropy_lp`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from qsskit.errors import LPTimeout

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class SimplexResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    value: Fraction | None = None
    y: list[Fraction] = field(default_factory=list)
    duals: list[Fraction] = field(default_factory=list)
    ray: dict[int, Fraction] | None = None
    iterations: int = 0


class _Tableau:
    def __init__(self, columns, b, m, deadline):
        self.m = m
        self.ncols = len(columns)
        self.deadline = deadline
        self.iterations = 0
        self.sign = [ONE] * m
        rhs = []
        for i in range(m):
            bi = Fraction(b[i])
            if bi < 0:
                self.sign[i] = -ONE
                bi = -bi
            rhs.append(bi)
        self.cols = []
        for col in columns:
            self.cols.append({i: Fraction(v) * self.sign[i] for i, v in col.items() if v})
        # artificial j = ncols + i is the unit column of row i
        self.basic = [self.ncols + i for i in range(m)]
        self.is_basic = set(self.basic)
        self.binv = [[ONE if i == k else ZERO for k in range(m)] for i in range(m)]
        self.xb = rhs
        self.locked = set()

    def column(self, j):
        if j >= self.ncols:
            return {j - self.ncols: ONE}
        return self.cols[j]

    def ftran(self, col):
        u = [ZERO] * self.m
        for k, a in col.items():
            for i in range(self.m):
                v = self.binv[i][k]
                if v:
                    u[i] += v * a
        return u

    def duals(self, cost):
        pi = [ZERO] * self.m
        for i, j in enumerate(self.basic):
            cj = cost(j)
            if cj:
                row = self.binv[i]
                for k in range(self.m):
                    if row[k]:
                        pi[k] += cj * row[k]
        return pi

    def pivot(self, r, q, u):
        piv = u[r]
        row_r = [v / piv for v in self.binv[r]]
        self.binv[r] = row_r
        self.xb[r] = self.xb[r] / piv
        nz = [(k, v) for k, v in enumerate(row_r) if v]
        xr = self.xb[r]
        for i in range(self.m):
            ui = u[i]
            if i == r or not ui:
                continue
            row = self.binv[i]
            for k, v in nz:
                row[k] -= ui * v
            self.xb[i] -= ui * xr
        self.is_basic.discard(self.basic[r])
        self.basic[r] = q
        self.is_basic.add(q)
        return row_r

    def run(self, cost, allow_artificial=False):
        """Iterate to optimality for ``cost``; returns ("optimal"|"unbounded", ray)."""
        pi = self.duals(cost)
        limit = self.ncols + (self.m if allow_artificial else 0)
        while True:
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise LPTimeout("simplex exceeded its time budget")
            q = -1
            dq = ZERO
            for j in range(limit):
                if j in self.is_basic:
                    continue
                col = self.column(j)
                d = cost(j)
                for i, a in col.items():
                    if pi[i]:
                        d -= pi[i] * a
                if d < 0:
                    q, dq = j, d
                    break
            if q < 0:
                return "optimal", None
            u = self.ftran(self.column(q))
            r = -1
            best = None
            for i in range(self.m):
                if u[i] > 0 and i not in self.locked:
                    ratio = self.xb[i] / u[i]
                    if best is None or ratio < best or (ratio == best and self.basic[i] < self.basic[r]):
                        best, r = ratio, i
            if r < 0:
                ray = {q: ONE}
                for i in range(self.m):
                    if u[i]:
                        ray[self.basic[i]] = -u[i]
                return "unbounded", ray
            row_r = self.pivot(r, q, u)
            self.iterations += 1
            for k, v in enumerate(row_r):
                if v:
                    pi[k] += dq * v


def solve_standard(columns, b, c, timeout: float | None = None) -> SimplexResult:
    """Minimise ``c.y`` subject to ``sum_j columns[j] * y_j = b`` and ``y >= 0``."""
    m = len(b)
    deadline = None if timeout is None else time.monotonic() + timeout
    tab = _Tableau(columns, b, m, deadline)
    n = tab.ncols
    cvec = [Fraction(v) for v in c]

    tab.run(lambda j: ONE if j >= n else ZERO)
    infeas = sum((tab.xb[i] for i in range(m) if tab.basic[i] >= n), ZERO)
    if infeas > 0:
        pi = tab.duals(lambda j: ONE if j >= n else ZERO)
        return SimplexResult("infeasible", duals=[p * s for p, s in zip(pi, tab.sign)],
                             iterations=tab.iterations)

    # drive zero-level artificials out of the basis; rows that cannot be
    # pivoted are linearly dependent and stay locked at zero
    for r in range(m):
        if tab.basic[r] < n:
            continue
        row = tab.binv[r]
        for j in range(n):
            if j in tab.is_basic:
                continue
            val = sum((row[i] * a for i, a in tab.cols[j].items()), ZERO)
            if val:
                tab.pivot(r, j, tab.ftran(tab.cols[j]))
                tab.iterations += 1
                break
        else:
            tab.locked.add(r)

    status, ray = tab.run(lambda j: ZERO if j >= n else cvec[j])
    pi = [p * s for p, s in zip(tab.duals(lambda j: ZERO if j >= n else cvec[j]), tab.sign)]
    if status == "unbounded":
        return SimplexResult("unbounded", duals=pi, ray={j: v for j, v in ray.items() if j < n},
                             iterations=tab.iterations)
    y = [ZERO] * n
    for i, j in enumerate(tab.basic):
        if j < n:
            y[j] = tab.xb[i]
    value = sum((cj * yj for cj, yj in zip(cvec, y) if yj), ZERO)
    return SimplexResult("optimal", value=value, y=y, duals=pi, iterations=tab.iterations)
