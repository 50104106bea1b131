"""Decision procedures the optimization solvers lean on.

Every routine dispatches on the language's verdict: tractable classes get
their constructive polynomial algorithm, everything else falls back to
capped enumeration and refuses loudly beyond the cap.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import gf2
from .clauses import assignment_from, cached_clauses,formula_parity, horn_model, twosat_model
from .errors import NotAModel, TooLarge
from .formulas import (
    ORACLE_VAR_CAP,
    Assignment,
    Formula,
    enumerate_models,
    hamming,
    satisfies,
)
from .postlattice import verdict

SCHAEFER_FLAGS = ("bijunctive", "horn", "dual_horn", "affine")


def _language_flags(formula: Formula) -> frozenset[str]:
    return formula.effective_language().flags


def _enumeration_guard(formula: Formula, cap: int) -> None:
    if formula.var_count > cap:
        raise TooLarge(
            f"{formula.var_count} variables exceed the enumeration cap {cap} "
            "and the language admits no polynomial routine"
        )


def _affine_model(formula: Formula, assumptions: dict[int, int] | None = None) -> Assignment | None:
    n = formula.var_count
    equations = []
    for support, bit in formula_parity(formula):
        if not support and bit:
            return None
        row = 0
        for v in support:
            row |= 1 << (v - 1)
        equations.append((row, bit))
    for v, b in (assumptions or {}).items():
        equations.append((1 << (v - 1), b))
    solved = gf2.solve_affine(gf2.Gf2System.from_equations(n, tuple(equations)))
    if solved is None:
        return None
    particular, _ = solved
    return Assignment(tuple((particular >> (v - 1)) & 1 for v in range(1, n + 1)))


def _solve_with_flags(
    formula: Formula,
    flags: frozenset[str],
    assumptions: dict[int, int] | None = None,
    cap: int = ORACLE_VAR_CAP,
) -> Assignment | None:
    """Constructive SAT for any Schaefer flag the language carries.

    Assumptions are extra unit constraints; they keep all four classes
    tractable.  Falls back to capped enumeration when no flag applies.
    """
    n = formula.var_count
    if "horn" in flags:
        model = horn_model(n, cached_clauses(formula, "horn"), assumptions, default=0)
        return None if model is None else assignment_from(model, n)
    if "dual_horn" in flags:
        model = horn_model(n, cached_clauses(formula, "dual_horn"), assumptions, default=1)
        return None if model is None else assignment_from(model, n)
    if "bijunctive" in flags:
        model = twosat_model(n, cached_clauses(formula, "bijunctive"), assumptions)
        return None if model is None else assignment_from(model, n)
    if "affine" in flags:
        return _affine_model(formula, assumptions)
    _enumeration_guard(formula, cap)
    for m in enumerate_models(formula, cap=None, var_cap=cap).assignments:
        if all(m.value(v) == b for v, b in (assumptions or {}).items()):
            return m
    return None


def sat_solve(formula: Formula, cap: int = ORACLE_VAR_CAP) -> Assignment | None:
    """A model or None, via the strongest routine the class admits."""
    lang = formula.effective_language()
    v = verdict(lang, "SAT")
    n = formula.var_count
    if v.algorithm_tag == "const_zero":
        return Assignment((0,) * n)
    if v.algorithm_tag == "const_one":
        return Assignment((1,) * n)
    if v.algorithm_tag == "horn_prop":
        model = horn_model(n, cached_clauses(formula, "horn"), default=0)
        return None if model is None else assignment_from(model, n)
    if v.algorithm_tag == "dualhorn_prop":
        model = horn_model(n, cached_clauses(formula, "dual_horn"), default=1)
        return None if model is None else assignment_from(model, n)
    if v.algorithm_tag == "twosat":
        model = twosat_model(n, cached_clauses(formula, "bijunctive"))
        return None if model is None else assignment_from(model, n)
    if v.algorithm_tag == "affine_gauss":
        return _affine_model(formula)
    _enumeration_guard(formula, cap)
    models = enumerate_models(formula, cap=1, var_cap=cap).assignments
    return models[0] if models else None


def another_sat(
    formula: Formula, m: Assignment, cap: int = ORACLE_VAR_CAP
) -> Assignment | None:
    """Some model different from m, or None iff m is the unique model."""
    if not satisfies(formula, m):
        raise NotAModel("another_sat needs a satisfying assignment")
    lang = formula.effective_language()
    flags = lang.flags
    if flags & set(SCHAEFER_FLAGS):
        best: Assignment | None = None
        for v in range(1, formula.var_count + 1):
            cand = _solve_with_flags(formula, flags, {v: 1 - m.value(v)}, cap)
            if cand is None:
                continue
            if best is None or (hamming(m, cand), cand.bits) < (hamming(m, best), best.bits):
                best = cand
        return best
    tag = verdict(lang, "ANOTHERSAT").algorithm_tag
    if tag == "complement":
        return m.complement()
    if tag == "both_valid":
        zero = Assignment((0,) * formula.var_count)
        return zero if m != zero else Assignment((1,) * formula.var_count)
    _enumeration_guard(formula, cap)
    for cand in enumerate_models(formula, var_cap=cap).assignments:
        if cand != m:
            return cand
    return None


@dataclass(frozen=True)
class TwoModels:
    """TSSAT outcome: satisfiable? two models? plus the witnesses found."""

    satisfiable: bool
    witnesses: tuple[Assignment, Assignment] | None

    @property
    def has_two(self) -> bool:
        return self.witnesses is not None


def tssat(formula: Formula, cap: int = ORACLE_VAR_CAP) -> TwoModels:
    """Does the formula have two distinct models?"""
    lang = formula.effective_language()
    if verdict(lang, "TSSAT").complexity == "P":
        first = sat_solve(formula, cap)
        if first is None:
            return TwoModels(False, None)
        second = another_sat(formula, first, cap)
        if second is None:
            return TwoModels(True, None)
        return TwoModels(True, (first, second))
    _enumeration_guard(formula, cap)
    models = enumerate_models(formula, cap=2, var_cap=cap).assignments
    if not models:
        return TwoModels(False, None)
    if len(models) == 1:
        return TwoModels(True, None)
    return TwoModels(True, (models[0], models[1]))


def another_sat_below_n(
    formula: Formula, m: Assignment, cap: int = ORACLE_VAR_CAP
) -> bool:
    """Is there a model m' != m with hd(m, m') < n (n = variable count)?

    For the four Schaefer classes this fixes one flipped and one agreeing
    variable per probe, so a distance-n-only second model cannot fool it.
    """
    if not satisfies(formula, m):
        raise NotAModel("another_sat_below_n needs a satisfying assignment")
    n = formula.var_count
    flags = _language_flags(formula)
    if flags & set(SCHAEFER_FLAGS):
        if n == 1:
            return False
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                fixed = {i: 1 - m.value(i), j: m.value(j)}
                if _solve_with_flags(formula, flags, fixed, cap) is not None:
                    return True
        return False
    _enumeration_guard(formula, cap)
    for cand in enumerate_models(formula, var_cap=cap).assignments:
        if cand != m and hamming(cand, m) < n:
            return True
    return False
