"""Guarantee soundness of the dispatchers over arbitrary languages.

Whatever the classifier decides, an outcome claiming `exact` must equal
the oracle, a `ratio(r)` outcome must stay within factor r, and an
`n_approx` outcome within factor n; exact mode must always equal the
oracle.  Languages here are fully random, so every dispatch branch gets
sampled, including the fallbacks.
"""

import random

from helpers import random_language, random_satisfiable

from minsol.errors import NoPolyAlgorithm, NoSecondModel, TooLarge, UniqueModel
from minsol.formulas import Assignment, oracle_optimize, satisfies
from minsol.msd import solve_msd
from minsol.nsol import solve_nsol
from minsol.xsol import solve_xsol


def _check_guarantee(out, opt, n):
    if out.guarantee.kind == "exact":
        assert out.value == opt, out.method
    elif out.guarantee.kind == "ratio":
        assert opt <= out.value <= out.guarantee.ratio * opt or (opt == 0 == out.value)
    else:
        assert opt <= out.value <= n * max(1, opt), out.method


def test_auto_mode_guarantees_hold():
    rng = random.Random(424242)
    trials = 0
    while trials < 200:
        language = random_language(rng, max_arity=3)
        formula, codes = random_satisfiable(language, rng, max_vars=7, max_atoms=6)
        n = formula.var_count
        m = Assignment.from_code(rng.randrange(1 << n), n)
        trials += 1
        try:
            out = solve_nsol(formula, m)
            _check_guarantee(out, oracle_optimize("NSOL", formula, m).value, n)
            assert satisfies(formula, out.witness)
            assert solve_nsol(formula, m, "exact").value == oracle_optimize(
                "NSOL", formula, m
            ).value
        except (TooLarge, NoPolyAlgorithm):
            pass
        if len(codes) < 2:
            continue
        model = Assignment.from_code(int(rng.choice(codes)), n)
        try:
            out = solve_xsol(formula, model)
            opt = oracle_optimize("XSOL", formula, model).value
            _check_guarantee(out, opt, n)
            assert out.witness != model and satisfies(formula, out.witness)
        except (TooLarge, NoPolyAlgorithm, NoSecondModel):
            pass
        try:
            out = solve_msd(formula)
            opt = oracle_optimize("MSD", formula).value
            _check_guarantee(out, opt, n)
            w1, w2 = out.witnesses()
            assert w1 != w2 and satisfies(formula, w1) and satisfies(formula, w2)
        except (TooLarge, NoPolyAlgorithm, UniqueModel):
            pass


def test_exact_routes_at_thirteen_variables():
    # beyond the acceptance sampler's size, still inside oracle range
    from helpers import FAMILY_EXACT_PROBLEMS, FAMILY_LANGUAGES, random_model

    rng = random.Random(131313)
    for family, language in FAMILY_LANGUAGES.items():
        for _ in range(8):
            formula, codes = random_satisfiable(language, rng, max_vars=13, max_atoms=18)
            n = formula.var_count
            m = Assignment.from_code(rng.randrange(1 << n), n)
            model = random_model(rng, codes, n)
            for problem in FAMILY_EXACT_PROBLEMS[family]:
                arg = m if problem == "NSOL" else model
                try:
                    if problem == "NSOL":
                        got = solve_nsol(formula, arg)
                    elif problem == "XSOL":
                        got = solve_xsol(formula, arg)
                    else:
                        got = solve_msd(formula)
                except (NoSecondModel, UniqueModel):
                    assert len(codes) == 1
                    continue
                want = oracle_optimize(problem, formula, arg)
                assert got.value == want.value, (family, problem, formula.atoms)


def test_dense_bijunctive_closure():
    from helpers import lang
    from minsol.relations import IMPL, NAND2, OR2, XOR2

    rng = random.Random(99)
    language = lang(or2=OR2, nand2=NAND2, impl=IMPL, xor2=XOR2)
    for _ in range(15):
        formula, codes = random_satisfiable(language, rng, max_vars=12, max_atoms=30,
                                            min_models=2)
        got = solve_msd(formula)
        assert got.value == oracle_optimize("MSD", formula).value


def test_approx_mode_never_worse_than_its_promise():
    rng = random.Random(434343)
    trials = 0
    while trials < 120:
        language = random_language(rng, max_arity=3)
        formula, codes = random_satisfiable(language, rng, max_vars=6, max_atoms=5)
        n = formula.var_count
        m = Assignment.from_code(rng.randrange(1 << n), n)
        trials += 1
        try:
            out = solve_nsol(formula, m, "approx")
        except NoPolyAlgorithm:
            continue
        _check_guarantee(out, oracle_optimize("NSOL", formula, m).value, n)
