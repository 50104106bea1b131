#!/usr/bin/env python3
"""Empirical approximation-ratio sweep.

Samples random satisfiable formulas for each approximation family, compares
the dispatched solver's value against the brute-force optimum, and reports
the worst observed ratio next to the guaranteed factor.

Usage: python scripts/ratio_audit.py [--samples N] [--seed S] [--max-vars V]
"""

import argparse
import random
from fractions import Fraction

from minsol.formulas import model_codes, Assignment, make_formula, oracle_optimize
from minsol.nsol import solve_nsol
from minsol.relations import (
    DUP3,
    F_REL,
    IMPL,
    Language,
    T_REL,
    XOR2,
    even_rel,
    nand_rel,
    or_rel,
)


def lang(**named):
    return Language(tuple(named.items()))


FAMILIES = {
    "bijunctive (factor 2)": (lang(xor2=XOR2, impl=IMPL), 2),
    "or2 hitting set (factor 2)": (lang(or2=or_rel(2), impl=IMPL, f=F_REL, t=T_REL), 2),
    "or3 hitting set (factor 3)": (lang(or3=or_rel(3), impl=IMPL, f=F_REL, t=T_REL), 3),
    "nand3 dual hitting set (factor 3)": (
        lang(nand3=nand_rel(3), impl=IMPL, f=F_REL, t=T_REL), 3),
    "0/1-valid feasibility (factor n)": (lang(dup3=DUP3), None),
    "both-valid feasibility (factor n)": (lang(even4=even_rel(4), impl=IMPL), None),
}


def sample(language, rng, max_vars, max_atoms=12):
    names = [n for n, _ in language.relations]
    while True:
        n = rng.randint(2, max_vars)
        atoms = [
            (nm, tuple(rng.randint(1, n) for _ in range(language.get(nm).arity)))
            for nm in (rng.choice(names) for _ in range(rng.randint(1, max_atoms)))
        ]
        formula = make_formula(language, n, atoms)
        if len(model_codes(formula)):
            return formula


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=300)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--max-vars", type=int, default=9)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    print(f"{'family':<36} {'bound':>6} {'worst':>8} {'mean':>8} {'exact%':>7}")
    for name, (language, bound) in FAMILIES.items():
        worst = Fraction(1)
        total = Fraction(0)
        exact = 0
        counted = 0
        for _ in range(args.samples):
            formula = sample(language, rng, args.max_vars)
            n = formula.var_count
            m = Assignment.from_code(rng.randrange(1 << n), n)
            got = solve_nsol(formula, m)
            opt = oracle_optimize("NSOL", formula, m).value
            if opt == 0:
                assert got.value == 0
                continue
            ratio = Fraction(got.value, opt)
            limit = Fraction(bound) if bound else Fraction(n)
            assert ratio <= limit, (name, formula.atoms)
            worst = max(worst, ratio)
            total += ratio
            exact += ratio == 1
            counted += 1
        bound_txt = str(bound) if bound else "n"
        mean = float(total / counted) if counted else 1.0
        share = 100.0 * exact / counted if counted else 100.0
        print(f"{name:<36} {bound_txt:>6} {float(worst):>8.3f} {mean:>8.3f} {share:>6.1f}%")


if __name__ == "__main__":
    main()
