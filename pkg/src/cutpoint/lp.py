"""Exact rational simplex for small LPs: maximize c.x s.t. A x <= b, x >= 0.

Dense tableau, Bland's rule (terminates without cycling), auxiliary
variable phase 1 when some right-hand side is negative.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    value: Fraction | None = None
    x: list | None = None


class _Tableau:
    def __init__(self, A, b, n):
        m = len(A)
        self.n = n
        self.m = m
        self.aux = n + m
        # columns: originals, slacks, aux, rhs
        self.rows = []
        for i in range(m):
            row = [Fraction(a) for a in A[i]]
            row += [ONE if j == i else ZERO for j in range(m)]
            row += [-ONE, Fraction(b[i])]
            self.rows.append(row)
        self.basis = [n + i for i in range(m)]
        self.obj = None
        self.blocked = set()

    def pivot(self, r, col):
        row = self.rows[r]
        p = row[col]
        row[:] = [x / p for x in row]
        for i, other in enumerate(self.rows):
            if i != r and other[col] != 0:
                f = other[col]
                other[:] = [x - f * y for x, y in zip(other, row)]
        if self.obj[col] != 0:
            f = self.obj[col]
            self.obj[:] = [x - f * y for x, y in zip(self.obj, row)]
        self.basis[r] = col

    def set_objective(self, costs):
        # row form: z - sum c_j x_j = value
        obj = [-c for c in costs] + [ZERO]
        for i, bvar in enumerate(self.basis):
            f = obj[bvar]
            if f != 0:
                obj = [x - f * y for x, y in zip(obj, self.rows[i])]
        self.obj = obj

    def optimize(self) -> bool:
        """Run simplex iterations; False when unbounded."""
        ncols = len(self.obj) - 1
        while True:
            enter = next((j for j in range(ncols) if j not in self.blocked and self.obj[j] < 0), None)
            if enter is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                if row[enter] > 0:
                    ratio = row[-1] / row[enter]
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], enter)


def maximize(c, A, b) -> LPResult:
    n = len(c)
    tab = _Tableau(A, b, n)
    ncols = n + tab.m + 1
    if any(Fraction(x) < 0 for x in b):
        costs = [ZERO] * ncols
        costs[tab.aux] = -ONE
        tab.set_objective(costs)
        r = min(range(tab.m), key=lambda i: (tab.rows[i][-1], i))
        tab.pivot(r, tab.aux)
        tab.optimize()
        if tab.obj[-1] < 0:
            return LPResult("infeasible")
        if tab.aux in tab.basis:
            r = tab.basis.index(tab.aux)
            col = next((j for j in range(ncols - 1) if j != tab.aux and tab.rows[r][j] != 0), None)
            if col is None:
                del tab.rows[r], tab.basis[r]
            else:
                tab.pivot(r, col)
    tab.blocked.add(tab.aux)
    costs = [Fraction(x) for x in c] + [ZERO] * (ncols - n)
    tab.set_objective(costs)
    if not tab.optimize():
        return LPResult("unbounded")
    x = [ZERO] * n
    for i, bvar in enumerate(tab.basis):
        if bvar < n:
            x[bvar] = tab.rows[i][-1]
    return LPResult("optimal", tab.obj[-1], x)
