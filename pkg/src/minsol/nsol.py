"""Nearest-solution solvers.

Exact routes for 2affine and monotone languages, LP-rounding
approximations for the bijunctive and hitting-set classes, the
feasibility n-approximation, an exact affine route at desk scale, and a
capped exhaustive fallback.  `solve_nsol` absorbs unit atoms, classifies
the residual, and dispatches per the nearest-solution classification.
"""

from __future__ import annotations

from fractions import Fraction

from . import gf2
from .clauses import cached_clauses, formula_parity, twosat_model, unit_propagate
from .decision import sat_solve
from .errors import (
    InternalConsistencyError,
    NoPolyAlgorithm,
    TooLarge,
    Unsatisfiable,
)
from .formulas import (
    NSOL,
    ORACLE_VAR_CAP,
    Assignment,
    Formula,
    dualize_formula,
    hamming,
    oracle_optimize,
    satisfies,
)
from .flow import INF, FlowNetwork
from .lp import GE, LE, LinearConstraint, LpProblem, lp_solve
from .outcome import Guarantee, SolveOutcome, exact, n_approx, ratio
from .postlattice import Verdict, verdict
from .preprocess import absorb_units

HALF = Fraction(1, 2)


def _outcome(
    formula: Formula,
    m: Assignment,
    witness: Assignment,
    guarantee: Guarantee,
    method: str,
    vdict: Verdict | None = None,
) -> SolveOutcome:
    if not satisfies(formula, witness):
        raise InternalConsistencyError(f"{method} produced a non-model witness")
    return SolveOutcome(NSOL, hamming(m, witness), witness, None, guarantee, vdict, method)


# --- exact routes ---------------------------------------------------------


def nsol_2affine(formula: Formula, m: Assignment) -> SolveOutcome:
    """Exact nearest solution for parity-of-two constraint systems.

    Unary/binary parity equations form a constraint graph; each connected
    component admits exactly two colorings and we keep the one closer to m.
    """
    formula.check_length(m)
    n = formula.var_count
    parent = list(range(n + 1))  # 0 is the constant-zero node
    offset = [0] * (n + 1)  # parity of node relative to its root

    def find_with_parity(v: int) -> tuple[int, int]:
        root = v
        par = 0
        while parent[root] != root:
            par ^= offset[root]
            root = parent[root]
        # path compression
        cur, cpar = v, par
        while parent[cur] != root:
            nxt, noff = parent[cur], offset[cur]
            parent[cur], offset[cur] = root, cpar
            cpar ^= noff
            cur = nxt
        return root, par

    def union(u: int, v: int, par: int) -> bool:
        ru, pu = find_with_parity(u)
        rv, pv = find_with_parity(v)
        if ru == rv:
            return (pu ^ pv) == par
        parent[ru] = rv
        offset[ru] = pu ^ pv ^ par
        return True

    for support, bit in formula_parity(formula):
        if not support:
            if bit:
                raise Unsatisfiable("contradictory parity atom")
            continue
        vs = sorted(support)
        if len(vs) == 1:
            ok = union(vs[0], 0, bit)
        elif len(vs) == 2:
            ok = union(vs[0], vs[1], bit)
        else:
            raise InternalConsistencyError("2affine route got a wide parity equation")
        if not ok:
            raise Unsatisfiable("parity constraints conflict")

    groups: dict[int, list[tuple[int, int]]] = {}
    for v in range(1, n + 1):
        root, par = find_with_parity(v)
        groups.setdefault(root, []).append((v, par))
    zero_root, zero_par = find_with_parity(0)
    bits = [0] * n
    for root, members in groups.items():
        if root == zero_root:
            for v, par in members:
                bits[v - 1] = par ^ zero_par  # parity relative to the constant
            continue
        cost0 = sum(m.value(v) != par for v, par in members)
        cost1 = sum(m.value(v) != (par ^ 1) for v, par in members)
        flip = 1 if cost1 < cost0 else 0
        if cost0 == cost1:
            lead_v, lead_par = min(members)
            flip = lead_par  # makes the smallest member 0
        for v, par in members:
            bits[v - 1] = par ^ flip
    return _outcome(formula, m, Assignment(tuple(bits)), exact(), "2affine_exact")


def nsol_monotone(formula: Formula, m: Assignment) -> SolveOutcome:
    """Exact nearest solution for implication/unit systems via minimum cut."""
    formula.check_length(m)
    n = formula.var_count
    propagated = unit_propagate(cached_clauses(formula, "monotone"))
    if propagated is None:
        raise Unsatisfiable("unit propagation conflict")
    assign, residual = propagated
    free = sorted(v for v in range(1, n + 1) if v not in assign)
    index = {v: i for i, v in enumerate(free)}
    net = FlowNetwork(len(free) + 2)
    source, sink = len(free), len(free) + 1
    for v in free:
        if m.value(v) == 1:
            net.add_edge(source, index[v], 1)
        else:
            net.add_edge(index[v], sink, 1)
    for clause in residual:
        pos = [l for l in clause if l > 0]
        neg = [-l for l in clause if l < 0]
        if len(pos) != 1 or len(neg) != 1:
            raise InternalConsistencyError("monotone route got a non-implication clause")
        # premise -> conclusion arc may not cross the cut source-to-sink
        net.add_edge(index[neg[0]], index[pos[0]], INF)
    net.max_flow(source, sink)
    ones = net.source_side(source)
    bits = [0] * n
    for v, b in assign.items():
        bits[v - 1] = b
    for v in free:
        bits[v - 1] = 1 if index[v] in ones else 0
    return _outcome(formula, m, Assignment(tuple(bits)), exact(), "monotone_mincut")


def nsol_affine_exact(formula: Formula, m: Assignment, cap: int = gf2.ENUM_CAP_BITS) -> SolveOutcome:
    """Exact affine route: enumerate the solution coset around m."""
    formula.check_length(m)
    n = formula.var_count
    equations = []
    for support, bit in formula_parity(formula):
        if not support:
            if bit:
                raise Unsatisfiable("contradictory parity atom")
            continue
        row = 0
        for v in support:
            row |= 1 << (v - 1)
        equations.append((row, bit))
    solved = gf2.solve_affine(gf2.Gf2System.from_equations(n, tuple(equations)))
    if solved is None:
        raise Unsatisfiable("affine system inconsistent")
    particular, basis = solved
    if len(basis) > cap:
        raise TooLarge(f"solution space dimension {len(basis)} exceeds cap {cap}")
    target = gf2.vector_from_bits([m.value(v) for v in range(1, n + 1)]) ^ particular
    _, message = gf2.nearest_codeword(basis, n, target)
    span = particular
    for i, row in enumerate(basis):
        if (message >> i) & 1:
            span ^= row
    witness = Assignment(tuple((span >> (v - 1)) & 1 for v in range(1, n + 1)))
    return _outcome(formula, m, witness, exact(), "affine_exact")


# --- approximation routes ----------------------------------------------------


def _distance_objective(m: Assignment, free: list[int]) -> tuple[dict[int, int], int]:
    """c(m') = sum over free vars of |m'(v) - m(v)| as coeffs + constant."""
    coeffs: dict[int, int] = {}
    constant = 0
    for i, v in enumerate(free):
        if m.value(v) == 1:
            coeffs[i] = -1
            constant += 1
        else:
            coeffs[i] = 1
    return coeffs, constant


def nsol_bijunctive_2approx(formula: Formula, m: Assignment) -> SolveOutcome:
    """Half-integral LP rounding for two-variable constraints, factor 2.

    Integral LP values are final; the half-valued variables induce a
    sub-2-SAT instance that is completed by a deterministic 2-SAT model,
    which preserves feasibility and at most doubles each half cost.
    """
    formula.check_length(m)
    n = formula.var_count
    clauses = cached_clauses(formula, "bijunctive")
    if twosat_model(n, clauses) is None:
        raise Unsatisfiable("no model (2-SAT check)")
    if satisfies(formula, m):
        return _outcome(formula, m, m, ratio(2), "bijunctive_2approx")
    propagated = unit_propagate(clauses)
    if propagated is None:  # pragma: no cover - guarded by the 2-SAT check
        raise Unsatisfiable("unit conflict")
    assign, residual = propagated
    free = sorted(v for v in range(1, n + 1) if v not in assign)
    index = {v: i for i, v in enumerate(free)}
    cons = []
    for clause in residual:
        lits = sorted(clause, key=abs)
        if len(lits) != 2:
            raise InternalConsistencyError("bijunctive residual clause is not binary")
        a, b = lits
        ia, ib = index[abs(a)], index[abs(b)]
        if a > 0 and b > 0:
            cons.append(LinearConstraint.of({ia: 1, ib: 1}, GE, 1))
        elif a < 0 and b < 0:
            cons.append(LinearConstraint.of({ia: 1, ib: 1}, LE, 1))
        elif a < 0 and b > 0:
            cons.append(LinearConstraint.of({ia: 1, ib: -1}, LE, 0))
        else:
            cons.append(LinearConstraint.of({ib: 1, ia: -1}, LE, 0))
    coeffs, constant = _distance_objective(m, free)
    solved = lp_solve(LpProblem.minimize(len(free), coeffs, cons, constant))
    if solved is None:
        raise InternalConsistencyError("LP infeasible on a satisfiable 2-SAT system")
    _, point = solved
    halves = {free[i] for i, x in enumerate(point) if 0 < x < 1}
    for v in halves:
        if point[index[v]] != HALF:
            raise InternalConsistencyError("LP vertex is not half-integral")
    sub = [c for c in residual if all(abs(l) in halves for l in c)]
    model = twosat_model(n, sub)
    if model is None:
        raise InternalConsistencyError("half-variable 2-SAT residue unsatisfiable")
    bits = [0] * n
    for v, b in assign.items():
        bits[v - 1] = b
    for v in free:
        if v in halves:
            bits[v - 1] = model[v]
        else:
            bits[v - 1] = int(point[index[v]] == 1)
    return _outcome(formula, m, Assignment(tuple(bits)), ratio(2), "bijunctive_2approx")


def nsol_ihsb_rounding(
    formula: Formula, m: Assignment, width: int, dual: bool = False
) -> SolveOutcome:
    """LP rounding at threshold 1/width for hitting-set-bounded languages."""
    if dual:
        inner = nsol_ihsb_rounding(dualize_formula(formula), m.complement(), width)
        witness = inner.witness.complement()
        out = _outcome(formula, m, witness, ratio(width), "ihsb_rounding_dual")
        return out
    formula.check_length(m)
    n = formula.var_count
    clauses = cached_clauses(formula, "ihsb_pos", width)
    propagated = unit_propagate(clauses)
    if propagated is None:
        raise Unsatisfiable("unit conflict")
    assign, residual = propagated
    free = sorted(v for v in range(1, n + 1) if v not in assign)
    index = {v: i for i, v in enumerate(free)}
    cons = []
    for clause in residual:
        pos = [l for l in clause if l > 0]
        neg = [l for l in clause if l < 0]
        if not neg:
            cons.append(LinearConstraint.of({index[v]: 1 for v in pos}, GE, 1))
        elif len(pos) == 1 and len(neg) == 1:
            cons.append(
                LinearConstraint.of({index[-neg[0]]: 1, index[pos[0]]: -1}, LE, 0)
            )
        else:
            raise InternalConsistencyError("hitting-set residual clause out of shape")
    coeffs, constant = _distance_objective(m, free)
    solved = lp_solve(LpProblem.minimize(len(free), coeffs, cons, constant))
    if solved is None:
        raise Unsatisfiable("LP infeasible, formula has no model")
    _, point = solved
    threshold = Fraction(1, width)
    bits = [0] * n
    for v, b in assign.items():
        bits[v - 1] = b
    for v in free:
        bits[v - 1] = int(point[index[v]] >= threshold)
    return _outcome(formula, m, Assignment(tuple(bits)), ratio(width), "ihsb_rounding")


def nsol_feasible_napprox(formula: Formula, m: Assignment, cap: int = ORACLE_VAR_CAP) -> SolveOutcome:
    """Return m when it satisfies the formula, else any model (factor n)."""
    formula.check_length(m)
    if satisfies(formula, m):
        return _outcome(formula, m, m, exact(), "feasible_napprox")
    model = sat_solve(formula, cap)
    if model is None:
        raise Unsatisfiable("formula has no model")
    return _outcome(formula, m, model, n_approx(), "feasible_napprox")


def _oracle_fallback(formula: Formula, m: Assignment, cap: int) -> SolveOutcome:
    out = oracle_optimize(NSOL, formula, m, var_cap=cap)
    return SolveOutcome(NSOL, out.value, out.witness, None, exact(), None, "exhaustive_fallback")


# --- dispatcher ---------------------------------------------------------------


def solve_nsol(
    formula: Formula, m: Assignment, mode: str = "auto", cap: int = ORACLE_VAR_CAP
) -> SolveOutcome:
    """Classify (after unit absorption) and dispatch the strongest route.

    Modes: auto picks the best guarantee the classification permits;
    exact forces oracle enumeration for classes without exact routes;
    approx never exceeds polynomial time and refuses where impossible.
    """
    if mode not in ("auto", "exact", "approx"):
        raise ValueError(f"unknown mode {mode!r}")
    formula.check_length(m)
    res = absorb_units(formula).pinned()
    vdict = verdict(res.effective_language(), "NSOL")

    def finish(out: SolveOutcome) -> SolveOutcome:
        return _outcome(formula, m, out.witness, out.guarantee, out.method, vdict)

    tag = vdict.algorithm_tag
    if tag == "2affine_exact":
        return finish(nsol_2affine(res, m))
    if tag == "monotone_mincut":
        return finish(nsol_monotone(res, m))
    if tag == "affine_exact":
        if mode == "approx":
            return finish(nsol_feasible_napprox(res, m, cap))
        return finish(nsol_affine_exact(res, m))
    if tag in ("bijunctive_2approx", "ihsb_rounding", "ihsb_rounding_dual"):
        if mode == "exact":
            return finish(_oracle_fallback(res, m, cap))
        if tag == "bijunctive_2approx":
            return finish(nsol_bijunctive_2approx(res, m))
        return finish(nsol_ihsb_rounding(res, m, vdict.param, dual=tag.endswith("dual")))
    if tag == "feasible_napprox":
        if mode == "exact":
            return finish(_oracle_fallback(res, m, cap))
        return finish(nsol_feasible_napprox(res, m, cap))
    # NPO territory
    if mode == "approx":
        raise NoPolyAlgorithm(
            "the residual language admits no polynomial-time approximation"
        )
    return finish(_oracle_fallback(res, m, cap))
