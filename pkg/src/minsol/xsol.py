"""Next-solution solvers: the closest other model of a given one.

Exact polynomial routes for bijunctive and hitting-set-bounded
languages, the affine route through minimum code weight, the Horn route
as an oracle reduction to nearest-solution, and an n-approximation via
the second-model decision procedure.
"""

from __future__ import annotations

from . import gf2
from .clauses import cached_clauses, formula_parity, unit_propagate
from .decision import another_sat
from .errors import (
    InternalConsistencyError,
    NoPolyAlgorithm,
    NoSecondModel,
    NotAModel,
    TooLarge,
    Unsatisfiable,
)
from .formulas import (
    ORACLE_VAR_CAP,
    XSOL,
    Assignment,
    Formula,
    dualize_formula,
    hamming,
    oracle_optimize,
    satisfies,
)
from .outcome import Guarantee, SolveOutcome, exact, n_approx
from .postlattice import Verdict, verdict
from .preprocess import absorb_units
from .nsol import solve_nsol


def _outcome(
    formula: Formula,
    m: Assignment,
    witness: Assignment,
    guarantee: Guarantee,
    method: str,
    vdict: Verdict | None = None,
) -> SolveOutcome:
    if witness == m:
        raise InternalConsistencyError(f"{method} returned the input assignment")
    if not satisfies(formula, witness):
        raise InternalConsistencyError(f"{method} produced a non-model witness")
    return SolveOutcome(XSOL, hamming(m, witness), witness, None, guarantee, vdict, method)


def _best(candidates: list[Assignment], m: Assignment) -> Assignment | None:
    if not candidates:
        return None
    return min(candidates, key=lambda w: (hamming(m, w), w.bits))


def xsol_bijunctive(formula: Formula, m: Assignment) -> SolveOutcome:
    """Per-variable flip with forced repairs along binary constraints."""
    if not satisfies(formula, m):
        raise NotAModel("xsol needs a model as input")
    n = formula.var_count
    propagated = unit_propagate(cached_clauses(formula, "bijunctive"))
    if propagated is None:
        raise InternalConsistencyError("model exists but unit propagation failed")
    assign, residual = propagated
    candidates: list[Assignment] = []
    free = [v for v in range(1, n + 1) if v not in assign]
    for x in free:
        bits = list(m.bits)
        flipped = {x}
        bits[x - 1] ^= 1
        ok = True
        while True:
            falsified = None
            for clause in residual:
                if not any((l > 0) == bool(bits[abs(l) - 1]) for l in clause):
                    falsified = clause
                    break
            if falsified is None:
                break
            unmarked = [abs(l) for l in falsified if abs(l) not in flipped]
            if not unmarked:
                ok = False
                break
            y = min(unmarked)
            bits[y - 1] ^= 1
            flipped.add(y)
        if ok:
            candidates.append(Assignment(tuple(bits)))
    best = _best(candidates, m)
    if best is None:
        raise NoSecondModel("the given model is the only one")
    return _outcome(formula, m, best, exact(), "bijunctive_flip")


def xsol_ihsb(formula: Formula, m: Assignment, width: int, dual: bool = False) -> SolveOutcome:
    """Flip one variable and close along implications, upward or downward."""
    if dual:
        inner = xsol_ihsb(dualize_formula(formula), m.complement(), width)
        return _outcome(formula, m, inner.witness.complement(), exact(), "ihsb_flip_dual")
    if not satisfies(formula, m):
        raise NotAModel("xsol needs a model as input")
    n = formula.var_count
    propagated = unit_propagate(cached_clauses(formula, "ihsb_pos", width))
    if propagated is None:
        raise InternalConsistencyError("model exists but unit propagation failed")
    assign, residual = propagated
    forward: dict[int, list[int]] = {}
    backward: dict[int, list[int]] = {}
    ors: list[list[int]] = []
    for clause in residual:
        pos = sorted(l for l in clause if l > 0)
        neg = sorted(-l for l in clause if l < 0)
        if not neg:
            ors.append(pos)
        elif len(neg) == 1 and len(pos) == 1:
            forward.setdefault(neg[0], []).append(pos[0])
            backward.setdefault(pos[0], []).append(neg[0])
        else:
            raise InternalConsistencyError("hitting-set residual clause out of shape")
    candidates: list[Assignment] = []
    free = [v for v in range(1, n + 1) if v not in assign]
    for x in free:
        bits = list(m.bits)
        if m.value(x) == 0:
            stack = [x]
            bits[x - 1] = 1
            while stack:
                u = stack.pop()
                for v in forward.get(u, ()):
                    if bits[v - 1] == 0:
                        bits[v - 1] = 1
                        stack.append(v)
        else:
            stack = [x]
            bits[x - 1] = 0
            while stack:
                u = stack.pop()
                for v in backward.get(u, ()):
                    if bits[v - 1] == 1:
                        bits[v - 1] = 0
                        stack.append(v)
        cand = Assignment(tuple(bits))
        if satisfies(formula, cand):
            candidates.append(cand)
    best = _best(candidates, m)
    if best is None:
        raise NoSecondModel("the given model is the only one")
    return _outcome(formula, m, best, exact(), "ihsb_flip")


def xsol_affine(formula: Formula, m: Assignment, cap: int = gf2.ENUM_CAP_BITS) -> SolveOutcome:
    """Minimum nonzero weight of the homogeneous space, added onto m."""
    if not satisfies(formula, m):
        raise NotAModel("xsol needs a model as input")
    n = formula.var_count
    rows = []
    for support, bit in formula_parity(formula):
        row = 0
        for v in support:
            row |= 1 << (v - 1)
        rows.append(row)
    basis = gf2.nullspace(rows, n)
    if len(basis) > cap:
        raise TooLarge(f"solution space dimension {len(basis)} exceeds cap {cap}")
    found = gf2.min_weight_nonzero(basis, n)
    if found is None:
        raise NoSecondModel("the affine solution space is a single point")
    weight, vector = found
    bits = tuple(m.value(v) ^ ((vector >> (v - 1)) & 1) for v in range(1, n + 1))
    out = _outcome(formula, m, Assignment(bits), exact(), "affine_mindist")
    if out.value != weight:
        raise InternalConsistencyError("affine witness does not realize the weight")
    return out


def _pin_one_var(formula: Formula, x: int, value: int) -> Formula:
    """Conjoin a unit atom fixing variable x, under collision-free names."""
    from .relations import F_REL, Language, T_REL

    rel = T_REL if value else F_REL
    base = f"__pin{value}"
    name, k = base, 0
    lang = formula.language
    while lang.declared(name) is not None and lang.declared(name) != rel:
        k += 1
        name = f"{base}_{k}"
    if lang.declared(name) is None:
        lang = Language(lang.relations + ((name, rel),))
    return Formula(lang, formula.var_count, formula.atoms + ((name, (x,)),))


def xsol_horn_turing(
    formula: Formula,
    m: Assignment,
    mode: str = "auto",
    cap: int = ORACLE_VAR_CAP,
    dual: bool = False,
) -> SolveOutcome:
    """Per-variable pinning reduction to nearest-solution oracle calls.

    Each call pins one variable opposite to m; at desk scale the calls are
    answered exactly, so the route is exact and tagged that way.
    """
    if dual:
        inner = xsol_horn_turing(dualize_formula(formula), m.complement(), mode, cap)
        return _outcome(
            formula, m, inner.witness.complement(), inner.guarantee, "horn_turing_dual"
        )
    if not satisfies(formula, m):
        raise NotAModel("xsol needs a model as input")
    n = formula.var_count
    sub_mode = "exact" if n <= cap else "auto"
    results: list[SolveOutcome] = []
    for x in range(1, n + 1):
        pinned = _pin_one_var(formula, x, 1 - m.value(x))
        try:
            results.append(solve_nsol(pinned, m, sub_mode, cap))
        except Unsatisfiable:
            continue
    if not results:
        raise NoSecondModel("every single-variable pin is unsatisfiable")
    best = min(results, key=lambda o: (o.value, o.witness.bits))
    guarantee = exact() if all(o.guarantee.kind == "exact" for o in results) else n_approx()
    return _outcome(formula, m, best.witness, guarantee, "horn_turing")


def xsol_anothersat_napprox(
    formula: Formula, m: Assignment, cap: int = ORACLE_VAR_CAP
) -> SolveOutcome:
    other = another_sat(formula, m, cap)
    if other is None:
        raise NoSecondModel("the given model is the only one")
    return _outcome(formula, m, other, n_approx(), "anothersat_napprox")


def _oracle_fallback(formula: Formula, m: Assignment, cap: int) -> SolveOutcome:
    out = oracle_optimize(XSOL, formula, m, var_cap=cap)
    return SolveOutcome(XSOL, out.value, out.witness, None, exact(), None, "exhaustive_fallback")


def solve_xsol(
    formula: Formula, m: Assignment, mode: str = "auto", cap: int = ORACLE_VAR_CAP
) -> SolveOutcome:
    """Dispatch the next-solution classification on the unit-absorbed residual."""
    if mode not in ("auto", "exact", "approx"):
        raise ValueError(f"unknown mode {mode!r}")
    formula.check_length(m)
    if not satisfies(formula, m):
        raise NotAModel("xsol needs a model as input")
    res = absorb_units(formula).pinned()
    vdict = verdict(res.effective_language(), "XSOL")

    def finish(out: SolveOutcome) -> SolveOutcome:
        return _outcome(formula, m, out.witness, out.guarantee, out.method, vdict)

    tag = vdict.algorithm_tag
    if tag == "bijunctive_flip":
        return finish(xsol_bijunctive(res, m))
    if tag in ("ihsb_flip", "ihsb_flip_dual"):
        return finish(xsol_ihsb(res, m, vdict.param, dual=tag.endswith("dual")))
    if tag == "affine_mindist":
        if mode == "approx":
            return finish(xsol_anothersat_napprox(res, m, cap))
        return finish(xsol_affine(res, m))
    if tag in ("horn_turing", "horn_turing_dual"):
        if mode == "approx":
            return finish(xsol_anothersat_napprox(res, m, cap))
        if mode == "exact":
            return finish(_oracle_fallback(res, m, cap))
        return finish(xsol_horn_turing(res, m, mode, cap, dual=tag.endswith("dual")))
    if tag == "anothersat_napprox":
        if mode == "exact":
            return finish(_oracle_fallback(res, m, cap))
        return finish(xsol_anothersat_napprox(res, m, cap))
    if mode == "approx":
        raise NoPolyAlgorithm(
            "the residual language admits no polynomial-time approximation"
        )
    return finish(_oracle_fallback(res, m, cap))
