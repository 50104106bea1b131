"""Exact rational linear programming over box-bounded variables.

Two-phase tableau simplex on fractions.Fraction, so rounding thresholds
like 1/2 and 1/l are compared bit-exactly.  Pivoting takes the most
negative reduced cost (lowest index on ties) and falls back to Bland's
rule after a run of degenerate pivots, which keeps every run
deterministic and finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InternalConsistencyError

LE = "<="
GE = ">="
EQ = "=="

_BLAND_TRIGGER = 12
_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class LinearConstraint:
    """sum(coeffs[v] * x_v) sense rhs, variables 0-based."""

    coeffs: tuple[tuple[int, Fraction], ...]
    sense: str
    rhs: Fraction

    @classmethod
    def of(
        cls, coeffs: Mapping[int, int | Fraction], sense: str, rhs: int | Fraction
    ) -> "LinearConstraint":
        if sense not in (LE, GE, EQ):
            raise ValueError(f"bad sense {sense!r}")
        items = tuple(sorted((v, Fraction(c)) for v, c in coeffs.items() if c))
        return cls(items, sense, Fraction(rhs))


@dataclass(frozen=True)
class LpProblem:
    """Minimize the objective over [0,1]^num_vars under the constraints."""

    num_vars: int
    constraints: tuple[LinearConstraint, ...]
    objective: tuple[tuple[int, Fraction], ...]
    constant: Fraction = field(default_factory=lambda: Fraction(0))

    @classmethod
    def minimize(
        cls,
        num_vars: int,
        objective: Mapping[int, int | Fraction],
        constraints: Sequence[LinearConstraint],
        constant: int | Fraction = 0,
    ) -> "LpProblem":
        obj = tuple(sorted((v, Fraction(c)) for v, c in objective.items() if c))
        return cls(num_vars, tuple(constraints), obj, Fraction(constant))


def lp_solve(problem: LpProblem) -> tuple[Fraction, list[Fraction]] | None:
    """Exact optimum and an optimal point, or None iff infeasible."""
    n = problem.num_vars
    raw_rows: list[tuple[list[Fraction], str, Fraction]] = []
    for con in problem.constraints:
        row = [_ZERO] * n
        for v, c in con.coeffs:
            if not 0 <= v < n:
                raise InternalConsistencyError(f"constraint variable {v} out of range")
            row[v] += c
        raw_rows.append((row, con.sense, con.rhs))
    for v in range(n):  # upper bounds x_v <= 1; lower bounds are implicit
        row = [_ZERO] * n
        row[v] = _ONE
        raw_rows.append((row, LE, _ONE))

    # normalize to nonnegative rhs and count extra columns
    m = len(raw_rows)
    norm: list[tuple[list[Fraction], str, Fraction]] = []
    for row, sense, rhs in raw_rows:
        if rhs < 0:
            row = [-c for c in row]
            rhs = -rhs
            sense = {LE: GE, GE: LE, EQ: EQ}[sense]
        norm.append((row, sense, rhs))
    n_slack = sum(1 for _, s, _ in norm if s in (LE, GE))
    n_art = sum(1 for _, s, _ in norm if s != LE)
    total = n + n_slack
    width = total + n_art

    tab = [[_ZERO] * width for _ in range(m)]
    rhs = [_ZERO] * m
    basis = [-1] * m
    art_cols: set[int] = set()
    s_at, a_at = n, total
    for i, (row, sense, b) in enumerate(norm):
        tab[i][:n] = row
        rhs[i] = b
        if sense in (LE, GE):
            tab[i][s_at] = _ONE if sense == LE else -_ONE
            if sense == LE:
                basis[i] = s_at
            s_at += 1
        if sense != LE:
            tab[i][a_at] = _ONE
            basis[i] = a_at
            art_cols.add(a_at)
            a_at += 1

    if art_cols:
        cost = [_ZERO] * width
        for c in art_cols:
            cost[c] = _ONE
        if _run_simplex(tab, rhs, basis, cost) != 0:
            return None
        _evict_artificials(tab, rhs, basis, art_cols, total)
        for r in range(len(tab)):
            del tab[r][total:]
        width = total

    cost = [_ZERO] * width
    for v, c in problem.objective:
        cost[v] += c
    value = _run_simplex(tab, rhs, basis, cost)
    point = [_ZERO] * n
    for i, b in enumerate(basis):
        if b < n:
            point[b] = rhs[i]
    return value + problem.constant, point


def _run_simplex(
    tab: list[list[Fraction]], rhs: list[Fraction], basis: list[int], cost: list[Fraction]
) -> Fraction:
    """Minimize cost from the current basic feasible dictionary, in place."""
    m = len(tab)
    width = len(cost)
    red = list(cost)
    for i, b in enumerate(basis):
        f = red[b]
        if f:
            row = tab[i]
            for c in range(width):
                if row[c]:
                    red[c] -= f * row[c]
    degenerate_run = 0
    while True:
        bland = degenerate_run >= _BLAND_TRIGGER
        enter = -1
        if bland:
            for c in range(width):
                if red[c] < 0:
                    enter = c
                    break
        else:
            best = _ZERO
            for c in range(width):
                if red[c] < best:
                    best = red[c]
                    enter = c
        if enter == -1:
            return sum((cost[b] * rhs[i] for i, b in enumerate(basis)), _ZERO)
        leave = -1
        best_ratio: Fraction | None = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = rhs[i] / a
                better = best_ratio is None or ratio < best_ratio
                tie = best_ratio is not None and ratio == best_ratio
                if better or (tie and bland and basis[i] < basis[leave]):
                    best_ratio = ratio
                    leave = i
        if leave == -1:
            raise InternalConsistencyError("unbounded LP despite box bounds")
        degenerate_run = degenerate_run + 1 if best_ratio == 0 else 0
        _pivot(tab, rhs, red, basis, leave, enter)


def _pivot(
    tab: list[list[Fraction]],
    rhs: list[Fraction],
    red: list[Fraction],
    basis: list[int],
    row: int,
    col: int,
) -> None:
    trow = tab[row]
    inv = 1 / trow[col]
    if inv != 1:
        for c in range(len(trow)):
            if trow[c]:
                trow[c] *= inv
        rhs[row] *= inv
    for i in range(len(tab)):
        if i == row:
            continue
        f = tab[i][col]
        if f:
            other = tab[i]
            for c in range(len(trow)):
                if trow[c]:
                    other[c] -= f * trow[c]
            rhs[i] -= f * rhs[row]
    f = red[col]
    if f:
        for c in range(len(trow)):
            if trow[c]:
                red[c] -= f * trow[c]
    basis[row] = col


def _evict_artificials(
    tab: list[list[Fraction]],
    rhs: list[Fraction],
    basis: list[int],
    art: set[int],
    total: int,
) -> None:
    """Pivot zero-valued artificials out of the basis; drop dead rows."""
    i = 0
    while i < len(tab):
        if basis[i] in art:
            pivot_col = next((c for c in range(total) if tab[i][c] != 0), None)
            if pivot_col is None:
                del tab[i], rhs[i], basis[i]
                continue
            dummy = [_ZERO] * len(tab[0])
            _pivot(tab, rhs, dummy, basis, i, pivot_col)
        i += 1
