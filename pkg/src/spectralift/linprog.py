"""Dense exact-rational simplex over free variables.

Two-phase primal simplex with Bland's rule (anti-cycling, fully
deterministic).  Variables are free; internally each is split into a
difference of nonnegative parts.  All arithmetic is Fraction-exact; the
solver is meant for the small, combinatorially delicate LPs behind
stratification, relative-interior tests and conjugation, not for scale.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import BudgetExceededError
from .exactlinalg import Vec

ZERO = Fraction(0)
ONE = Fraction(1)

PIVOT_BUDGET_ENV = "SPECTRALIFT_LP_PIVOT_BUDGET"
DEFAULT_PIVOT_BUDGET = 200_000


@dataclass
class LPResult:
    status: str  # "optimal" | "unbounded" | "infeasible"
    x: Vec | None = None
    value: Fraction | None = None


def _pivot_budget(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    raw = os.environ.get(PIVOT_BUDGET_ENV)
    return int(raw) if raw else DEFAULT_PIVOT_BUDGET


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], basis: list[int], budget: int):
        self.rows = rows
        self.basis = basis
        self.budget = budget
        self.pivots = 0

    def pivot(self, r: int, c: int) -> None:
        self.pivots += 1
        if self.pivots > self.budget:
            raise BudgetExceededError(
                f"simplex pivot budget ({self.budget}) exhausted")
        piv = self.rows[r][c]
        self.rows[r] = [x / piv for x in self.rows[r]]
        for i, row in enumerate(self.rows):
            if i != r and row[c] != 0:
                f = row[c]
                base = self.rows[r]
                self.rows[i] = [a - f * b for a, b in zip(row, base)]
        self.basis[r] = c

    def maximize(self, cost: list[Fraction]) -> tuple[str, Fraction]:
        """Run Bland simplex on reduced costs for the given objective."""
        ncols = len(self.rows[0]) - 1
        while True:
            # reduced costs: cbar_j = c_j - c_B . column_j
            cbar = list(cost[:ncols])
            value = ZERO
            for i, b in enumerate(self.basis):
                cb = cost[b]
                if cb != 0:
                    row = self.rows[i]
                    for j in range(ncols):
                        if row[j] != 0:
                            cbar[j] -= cb * row[j]
                    value += cb * row[-1]
            enter = next((j for j in range(ncols) if cbar[j] > 0), None)
            if enter is None:
                return "optimal", value
            ratio = None
            leave = None
            for i, row in enumerate(self.rows):
                if row[enter] > 0:
                    r = row[-1] / row[enter]
                    if ratio is None or r < ratio or (
                            r == ratio and self.basis[i] < self.basis[leave]):
                        ratio, leave = r, i
            if leave is None:
                return "unbounded", value
            self.pivot(leave, enter)


def solve_lp(objective: Sequence[Fraction], *,
             a_ub: Sequence[Sequence[Fraction]] = (),
             b_ub: Sequence[Fraction] = (),
             a_eq: Sequence[Sequence[Fraction]] = (),
             b_eq: Sequence[Fraction] = (),
             sense: str = "max",
             pivot_budget: int | None = None) -> LPResult:
    """Optimize objective . x over {a_ub x <= b_ub, a_eq x = b_eq}, x free."""
    d = len(objective)
    sign = ONE if sense == "max" else -ONE
    m_ub, m_eq = len(a_ub), len(a_eq)
    nslack = m_ub
    nart = m_ub + m_eq  # one artificial per row keeps the setup uniform
    ncols = 2 * d + nslack + nart

    rows: list[list[Fraction]] = []
    basis: list[int] = []
    art0 = 2 * d + nslack
    for i in range(m_ub + m_eq):
        if i < m_ub:
            coeffs, rhs, slack = list(a_ub[i]), b_ub[i], 2 * d + i
        else:
            coeffs, rhs, slack = list(a_eq[i - m_ub]), b_eq[i - m_ub], None
        row = [ZERO] * (ncols + 1)
        flip = rhs < 0
        s = -ONE if flip else ONE
        for j in range(d):
            row[j] = s * coeffs[j]
            row[d + j] = -s * coeffs[j]
        if slack is not None:
            row[slack] = s
        row[art0 + i] = ONE
        row[-1] = s * rhs
        rows.append(row)
        basis.append(art0 + i)

    tab = _Tableau(rows, basis, _pivot_budget(pivot_budget))

    if rows:
        phase1 = [ZERO] * (ncols + 1)
        for j in range(art0, art0 + nart):
            phase1[j] = -ONE
        status, value = tab.maximize(phase1)
        if value < 0:
            return LPResult("infeasible")
        # drive remaining zero-valued artificials out of the basis
        for i in list(range(len(tab.rows))):
            if i < len(tab.basis) and tab.basis[i] >= art0:
                col = next((j for j in range(art0) if tab.rows[i][j] != 0), None)
                if col is not None:
                    tab.pivot(i, col)
        keep = [i for i, b in enumerate(tab.basis) if b < art0]
        tab.rows = [tab.rows[i] for i in keep]
        tab.basis = [tab.basis[i] for i in keep]
        # blank artificial columns so they can never re-enter
        for row in tab.rows:
            for j in range(art0, art0 + nart):
                row[j] = ZERO

    cost = [ZERO] * (ncols + 1)
    for j in range(d):
        cost[j] = sign * objective[j]
        cost[d + j] = -sign * objective[j]
    if tab.rows:
        status, value = tab.maximize(cost)
    else:
        status = "optimal" if all(c == 0 for c in cost[:ncols]) else "unbounded"
        value = ZERO
    if status == "unbounded":
        return LPResult("unbounded")

    xfull = [ZERO] * ncols
    for i, b in enumerate(tab.basis):
        xfull[b] = tab.rows[i][-1]
    x = tuple(xfull[j] - xfull[d + j] for j in range(d))
    return LPResult("optimal", x, sign * value)


def feasible_point(*, a_ub=(), b_ub=(), a_eq=(), b_eq=(),
                   pivot_budget: int | None = None) -> Vec | None:
    d = max((len(r) for r in list(a_ub) + list(a_eq)), default=0)
    res = solve_lp([ZERO] * d, a_ub=a_ub, b_ub=b_ub, a_eq=a_eq, b_eq=b_eq,
                   pivot_budget=pivot_budget)
    return res.x if res.status == "optimal" else None


def strict_feasible_point(*, a_eq=(), b_eq=(), a_strict=(), b_strict=(),
                          a_weak=(), b_weak=(),
                          pivot_budget: int | None = None) -> Vec | None:
    """A point satisfying a_eq x = b_eq, a_strict x < b_strict, a_weak x <= b_weak.

    Uses the margin trick: maximize s <= 1 with a_strict x + s <= b_strict;
    a strictly feasible point exists iff the optimum is positive.
    """
    d = max((len(r) for r in list(a_eq) + list(a_strict) + list(a_weak)),
            default=0)
    a_ub = [list(r) + [ONE] for r in a_strict]
    b_ub = list(b_strict)
    a_ub += [list(r) + [ZERO] for r in a_weak]
    b_ub += list(b_weak)
    a_ub.append([ZERO] * d + [ONE])
    b_ub.append(ONE)
    eq = [list(r) + [ZERO] for r in a_eq]
    obj = [ZERO] * d + [ONE]
    res = solve_lp(obj, a_ub=a_ub, b_ub=b_ub, a_eq=eq, b_eq=b_eq,
                   pivot_budget=pivot_budget)
    if res.status != "optimal" or res.value is None or res.value <= 0:
        return None
    assert res.x is not None
    return res.x[:d]
