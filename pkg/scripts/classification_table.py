#!/usr/bin/env python3
"""Print the co-clone classification and per-problem verdicts for a sweep
of constraint languages (the stored base of every lattice node).

Usage: python scripts/classification_table.py [--max-param M]
"""

import argparse

from minsol import postlattice as pl
from minsol.relations import Language


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-param", type=int, default=3)
    args = ap.parse_args()
    header = f"{'node':>9} | {'NSOL':<28} {'XSOL':<28} {'MSD':<28}"
    print(header)
    print("-" * len(header))
    for label in pl.all_labels(args.max_param):
        base = Language(tuple((f"b{i}", r) for i, r in enumerate(pl.relation_base(label))))
        got = pl.classify(base)
        assert got == label, (str(label), str(got))
        cells = []
        for problem in ("NSOL", "XSOL", "MSD"):
            v = pl.verdict_for_label(label, problem)
            param = "" if v.param is None else f"({v.param})"
            cells.append(f"{v.complexity}:{v.algorithm_tag}{param}")
        print(f"{str(label):>9} | {cells[0]:<28} {cells[1]:<28} {cells[2]:<28}")


if __name__ == "__main__":
    main()
