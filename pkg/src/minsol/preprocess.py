"""Unit-atom absorption shared by the three optimization solvers.

Unit atoms pin variables; pinned coordinates are substituted into the
remaining atoms, which can only shrink the residual language, so the
dispatcher classifies what is actually left to solve.  The residual
formula keeps the original variable indexing; forced variables simply
stop being referenced.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import Unsatisfiable
from .formulas import Formula
from .relations import Language, Relation


@dataclass(frozen=True)
class ReducedFormula:
    """Residual atoms plus the variables pinned by unit absorption.

    `pinned()` re-attaches the pins as builtin unit atoms, so the result
    has exactly the original model set while exposing the restricted
    relations to the classifier.
    """

    formula: Formula
    forced: dict[int, int]

    def pinned(self) -> Formula:
        if not self.forced:
            return self.formula
        from .relations import F_REL, T_REL

        atoms = list(self.formula.atoms)
        pairs = list(self.formula.language.relations)
        used = {n for n, _ in pairs}
        names = {}
        for value, rel in ((1, T_REL), (0, F_REL)):
            name = "t" if value else "f"
            if name in used:  # residual names carry '#', but stay defensive
                name = f"__pin{value}"
            names[value] = name
            pairs.append((name, rel))
        for v in sorted(self.forced):
            atoms.append((names[self.forced[v]], (v,)))
        return Formula(Language(tuple(pairs)), self.formula.var_count, tuple(atoms))


def absorb_units(formula: Formula) -> ReducedFormula:
    """Propagate unit atoms and pin their variables into the other atoms.

    Raises Unsatisfiable on a unit conflict or an atom emptied by pinning.
    """
    forced: dict[int, int] = {}
    atoms: list[tuple[Relation, tuple[int, ...], str]] = [
        (formula.relation(name), vars_, name) for name, vars_ in formula.atoms
    ]
    changed = True
    while changed:
        changed = False
        survivors: list[tuple[Relation, tuple[int, ...], str]] = []
        for rel, vars_, name in atoms:
            # pin coordinates whose variable is already forced
            i = 0
            while i < rel.arity:
                v = vars_[i]
                if v in forced:
                    if rel.arity == 1:
                        if not rel.contains(forced[v]):
                            raise Unsatisfiable("unit atoms conflict")
                        rel = None  # satisfied outright
                        break
                    rel = rel.restrict(i, forced[v])
                    if rel is None:
                        raise Unsatisfiable(f"atom {name} emptied by unit propagation")
                    vars_ = vars_[:i] + vars_[i + 1 :]
                    changed = True
                    continue
                i += 1
            if rel is None:
                continue
            if rel.arity == 1 and rel.size == 1:
                v = vars_[0]
                val = rel.tuples()[0]
                if forced.get(v, val) != val:
                    raise Unsatisfiable("unit atoms conflict")
                if v not in forced:
                    forced[v] = val
                    changed = True
                continue
            if rel.is_full():
                continue
            survivors.append((rel, vars_, name))
        atoms = survivors
    pairs: dict[str, Relation] = {}
    new_atoms: list[tuple[str, tuple[int, ...]]] = []
    for rel, vars_, name in atoms:
        key = f"{name}#{rel.arity}x{rel.mask:x}"
        pairs.setdefault(key, rel)
        new_atoms.append((key, vars_))
    residual = Formula(
        Language(tuple(pairs.items())), formula.var_count, tuple(new_atoms)
    )
    return ReducedFormula(residual, forced)
