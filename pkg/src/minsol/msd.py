"""Minimum-distance-between-models solvers.

The bijunctive route closes binary clauses under resolution and reads
the answer off literal equivalence classes; the Horn route adds
hyper-resolution with binary implications and excludes classes with
dependent variables.  Affine languages reduce to minimum code weight,
everything else gets the two-models n-approximation or the capped
exhaustive fallback.
"""

from __future__ import annotations

from collections import deque

from . import gf2
from .clauses import LitClause, cached_clauses, formula_parity, twosat_model
from .decision import tssat
from .errors import (
    InternalConsistencyError,
    NoPolyAlgorithm,
    TooLarge,
    UniqueModel,
    Unsatisfiable,
)
from .formulas import (
    MSD,
    ORACLE_VAR_CAP,
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


def _outcome(
    formula: Formula,
    w1: Assignment,
    w2: Assignment,
    guarantee: Guarantee,
    method: str,
    vdict: Verdict | None = None,
) -> SolveOutcome:
    if w1 == w2:
        raise InternalConsistencyError(f"{method} produced identical witnesses")
    if not (satisfies(formula, w1) and satisfies(formula, w2)):
        raise InternalConsistencyError(f"{method} produced a non-model witness")
    if w2.bits < w1.bits:
        w1, w2 = w2, w1
    return SolveOutcome(MSD, hamming(w1, w2), w1, w2, guarantee, vdict, method)


class _ClosureState:
    """Clause set under unit resolution/subsumption plus added resolvents.

    Tautologies (x or not-x) are seeded deliberately; unit processing
    deletes every clause mentioning the decided variable.  Step counters
    assert the structural bounds on closure work.
    """

    def __init__(self, n: int) -> None:
        self.n = n
        self.clauses: set[LitClause] = set()
        self.units: dict[int, int] = {}
        self.unit_queue: deque[int] = deque()
        self.fresh: deque[LitClause] = deque()
        self.unsatisfiable = False
        self.unit_steps = 0
        self.additions = 0

    def add(self, cl: LitClause) -> bool:
        if self.unsatisfiable or cl in self.clauses:
            return False
        if not cl:
            self.unsatisfiable = True
            return True
        if len(cl) == 1:
            (lit,) = cl
            v, b = abs(lit), int(lit > 0)
            if self.units.get(v, b) != b:
                self.unsatisfiable = True
                return True
            if v not in self.units:
                self.units[v] = b
                self.unit_queue.append(lit)
                return True
            return False
        self.clauses.add(cl)
        self.fresh.append(cl)
        self.additions += 1
        return True

    def drain_units(self) -> None:
        while self.unit_queue and not self.unsatisfiable:
            lit = self.unit_queue.popleft()
            self.unit_steps += 1
            if self.unit_steps > self.n + 1:
                raise InternalConsistencyError("unit closure exceeded its step bound")
            satisfied = [c for c in self.clauses if lit in c]
            shrink = [c for c in self.clauses if -lit in c]
            for c in satisfied:
                self.clauses.discard(c)
            for c in shrink:
                self.clauses.discard(c)
                self.add(c - {-lit})

    def alive_vars(self) -> list[int]:
        out = set()
        for c in self.clauses:
            out.update(abs(l) for l in c)
        return sorted(out)


def _bijunctive_closure(formula: Formula) -> _ClosureState:
    n = formula.var_count
    state = _ClosureState(n)
    for v in range(1, n + 1):
        state.add(frozenset({v, -v}))
    for c in cached_clauses(formula, "bijunctive"):
        state.add(c)
    state.drain_units()
    while state.fresh and not state.unsatisfiable:
        cl = state.fresh.popleft()
        if cl not in state.clauses:
            continue
        for other in list(state.clauses):
            for lit in cl:
                if -lit in other:
                    state.add((cl - {lit}) | (other - {-lit}))
        state.drain_units()
    return state


def _horn_closure(formula: Formula) -> _ClosureState:
    n = formula.var_count
    state = _ClosureState(n)
    for v in range(1, n + 1):
        state.add(frozenset({v, -v}))
    for c in cached_clauses(formula, "horn"):
        state.add(c)
    state.drain_units()
    max_additions = len(state.clauses) + 4 * n * n + 2 * n + 4
    changed = True
    while changed and not state.unsatisfiable:
        changed = False
        snapshot = list(state.clauses)
        alive = state.alive_vars()
        for cl in snapshot:
            if cl not in state.clauses:
                continue
            neg = [-l for l in cl if l < 0]
            pos = [l for l in cl if l > 0]
            if not neg or len(pos) > 1:
                continue
            if len(cl) == 2 and pos and pos[0] == neg[0]:
                continue  # tautologies are vacuous as main premises
            for x in alive:
                if all(frozenset({-x, y}) in state.clauses for y in neg):
                    if state.add(frozenset({-x}) | frozenset(pos)):
                        changed = True
        state.drain_units()
        if state.additions > max_additions:
            raise InternalConsistencyError("hyper-resolution exceeded its step bound")
    return state


def _unit_bits(state: _ClosureState, n: int) -> list[int | None]:
    bits: list[int | None] = [None] * n
    for v, b in state.units.items():
        bits[v - 1] = b
    return bits


def msd_bijunctive(formula: Formula) -> SolveOutcome:
    """Minimal literal-equivalence class after binary resolution closure."""
    n = formula.var_count
    state = _bijunctive_closure(formula)
    if state.unsatisfiable:
        raise Unsatisfiable("formula has no model")
    if not state.clauses:
        raise UniqueModel("all variables are forced")
    clauses = state.clauses
    lits = sorted({l for c in clauses for l in c}, key=lambda l: (abs(l), l < 0))
    parent: dict[int, int] = {l: l for l in lits}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb, key=lambda l: (abs(l), l < 0))] = min(
                ra, rb, key=lambda l: (abs(l), l < 0)
            )

    for a in lits:
        for b in lits:
            if a != b and frozenset({-a, b}) in clauses and frozenset({-b, a}) in clauses:
                union(a, b)
    classes: dict[int, list[int]] = {}
    for l in lits:
        classes.setdefault(find(l), []).append(l)
    pivot_root = min(
        classes, key=lambda r: (len(classes[r]), sorted((abs(l), l < 0) for l in classes[r]))
    )
    pivot = set(classes[pivot_root])
    # direct arcs between classes; the closure made the graph transitive
    preds: set[int] = set()
    succs: set[int] = set()
    for c in clauses:
        if len(c) != 2:
            continue
        a, b = sorted(c, key=lambda l: (abs(l), l < 0))
        if a == -b:
            continue
        for x, y in ((a, b), (b, a)):
            # clause (x or y) is the implication (-x) -> y
            if find(-x) != find(y):
                if -x in pivot:
                    succs.add(find(y))
                if y in pivot:
                    preds.add(find(-x))
    base = twosat_model(n, clauses)
    if base is None:
        raise InternalConsistencyError("closure satisfiable but 2-SAT failed")
    forced = _unit_bits(state, n)

    def literal_rule(l: int, pivot_value: int) -> int | None:
        root = find(l)
        if root == pivot_root:
            return pivot_value
        if root in preds:
            return 0
        if root in succs:
            return 1
        return None

    def build(pivot_value: int) -> Assignment:
        bits = [0] * n
        for v in range(1, n + 1):
            if forced[v - 1] is not None:
                bits[v - 1] = forced[v - 1]
        for v in {abs(l) for l in lits}:
            rp = literal_rule(v, pivot_value) if v in parent else None
            rn = literal_rule(-v, pivot_value) if -v in parent else None
            if rp is None and rn is None:
                val = base[v]
            elif rn is None:
                val = rp
            elif rp is None:
                val = 1 - rn
            else:
                if rp != 1 - rn:
                    raise InternalConsistencyError("contradictory literal class values")
                val = rp
            bits[v - 1] = val
        return Assignment(tuple(bits))

    w1, w2 = build(0), build(1)
    out = _outcome(formula, w1, w2, exact(), "bijunctive_classes")
    if out.value != len(pivot):
        raise InternalConsistencyError("pivot class size does not match the distance")
    return out


def msd_horn(formula: Formula, dual: bool = False) -> SolveOutcome:
    """Minimal variable class without dependent variables (Horn closure)."""
    if dual:
        inner = msd_horn(dualize_formula(formula))
        return _outcome(
            formula,
            inner.witness.complement(),
            inner.witness2.complement(),
            exact(),
            "horn_closure_dual",
        )
    n = formula.var_count
    state = _horn_closure(formula)
    if state.unsatisfiable:
        raise Unsatisfiable("formula has no model")
    if not state.clauses:
        raise UniqueModel("all variables are forced")
    clauses = state.clauses
    vars_ = state.alive_vars()
    parent = {v: v for v in vars_}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in vars_:
        for y in vars_:
            if (
                x < y
                and frozenset({-x, y}) in clauses
                and frozenset({-y, x}) in clauses
            ):
                parent[find(max(x, y))] = find(min(x, y))
    classes: dict[int, list[int]] = {}
    for v in vars_:
        classes.setdefault(find(v), []).append(v)
    dependent: set[int] = set()
    for cl in clauses:
        pos = [l for l in cl if l > 0]
        neg = [-l for l in cl if l < 0]
        if len(pos) != 1 or not neg:
            continue
        z = pos[0]
        if z in neg:
            continue
        ys = [y for y in neg if y != z]
        if not ys:
            continue
        if all(frozenset({-z, y}) in clauses for y in ys) and all(
            find(z) != find(y) for y in ys
        ):
            dependent.add(find(z))
    eligible = [r for r in classes if r not in dependent]
    if not eligible:
        raise InternalConsistencyError("no class without dependent variables")
    pivot_root = min(eligible, key=lambda r: (len(classes[r]), sorted(classes[r])))
    pivot = set(classes[pivot_root])
    forced = _unit_bits(state, n)
    implied = {
        y
        for y in vars_
        if y not in pivot and any(frozenset({-x, y}) in clauses for x in pivot)
    }

    def build(pivot_value: int) -> Assignment:
        bits = [0] * n
        for v in range(1, n + 1):
            if forced[v - 1] is not None:
                bits[v - 1] = forced[v - 1]
        for v in vars_:
            if v in pivot:
                bits[v - 1] = pivot_value
            elif v in implied:
                bits[v - 1] = 1
            else:
                bits[v - 1] = 0
        return Assignment(tuple(bits))

    w1, w2 = build(0), build(1)
    out = _outcome(formula, w1, w2, exact(), "horn_closure")
    if out.value != len(pivot):
        raise InternalConsistencyError("pivot class size does not match the distance")
    return out


def msd_affine(formula: Formula, cap: int = gf2.ENUM_CAP_BITS) -> SolveOutcome:
    """Minimum nonzero weight of the homogeneous solution space."""
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
    found = gf2.min_weight_nonzero(basis, n)
    if found is None:
        raise UniqueModel("the affine solution space is a single point")
    weight, vector = found
    w1 = Assignment(tuple((particular >> (v - 1)) & 1 for v in range(1, n + 1)))
    w2 = Assignment(
        tuple(((particular ^ vector) >> (v - 1)) & 1 for v in range(1, n + 1))
    )
    out = _outcome(formula, w1, w2, exact(), "affine_mindist")
    if out.value != weight:
        raise InternalConsistencyError("affine witnesses do not realize the weight")
    return out


def msd_napprox(formula: Formula, cap: int = ORACLE_VAR_CAP) -> SolveOutcome:
    """Any two models, n-approximate (the optimum is at least 1)."""
    two = tssat(formula, cap)
    if not two.satisfiable:
        raise Unsatisfiable("formula has no model")
    if not two.has_two:
        raise UniqueModel("formula has exactly one model")
    w1, w2 = two.witnesses
    return _outcome(formula, w1, w2, n_approx(), "tssat_napprox")


def _oracle_fallback(formula: Formula, cap: int) -> SolveOutcome:
    out = oracle_optimize(MSD, formula, var_cap=cap)
    return SolveOutcome(
        MSD, out.value, out.witness, out.witness2, exact(), None, "exhaustive_fallback"
    )


def solve_msd(formula: Formula, mode: str = "auto", cap: int = ORACLE_VAR_CAP) -> SolveOutcome:
    """Dispatch the minimum-solution-distance classification."""
    if mode not in ("auto", "exact", "approx"):
        raise ValueError(f"unknown mode {mode!r}")
    res = absorb_units(formula).pinned()
    vdict = verdict(res.effective_language(), "MSD")

    def finish(out: SolveOutcome) -> SolveOutcome:
        return _outcome(formula, out.witness, out.witness2, out.guarantee, out.method, vdict)

    tag = vdict.algorithm_tag
    if tag == "bijunctive_classes":
        return finish(msd_bijunctive(res))
    if tag in ("horn_closure", "horn_closure_dual"):
        return finish(msd_horn(res, dual=tag.endswith("dual")))
    if tag == "affine_mindist":
        if mode == "approx":
            return finish(msd_napprox(res, cap))
        return finish(msd_affine(res))
    if tag == "tssat_napprox":
        if mode == "exact":
            return finish(_oracle_fallback(res, cap))
        return finish(msd_napprox(res, cap))
    if mode == "approx":
        raise NoPolyAlgorithm(
            "the residual language admits no polynomial-time approximation"
        )
    return finish(_oracle_fallback(res, cap))
