"""Result records returned by every solver and by the brute-force oracle."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover - typing only
    from .formulas import Assignment
    from .postlattice import Verdict

EXACT = "exact"
RATIO = "ratio"
N_APPROX = "n_approx"


@dataclass(frozen=True)
class Guarantee:
    kind: str
    ratio: Fraction | None = None

    def __str__(self) -> str:
        if self.kind == RATIO:
            return f"ratio({self.ratio})"
        return self.kind


@dataclass(frozen=True)
class SolveOutcome:
    """Optimal or approximate value plus the witness(es) that realize it."""

    problem: str
    value: int
    witness: "Assignment"
    witness2: "Assignment | None" = None
    guarantee: Guarantee = Guarantee(EXACT)
    verdict: "Verdict | None" = None
    method: str = ""

    def witnesses(self) -> tuple["Assignment", ...]:
        if self.witness2 is None:
            return (self.witness,)
        return (self.witness, self.witness2)


def exact() -> Guarantee:
    return Guarantee(EXACT)


def ratio(r: Fraction | int) -> Guarantee:
    return Guarantee(RATIO, Fraction(r))


def n_approx() -> Guarantee:
    return Guarantee(N_APPROX)
