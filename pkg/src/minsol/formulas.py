"""Conjunctive formulas, assignments, model enumeration, and the oracle.

The oracle is the library's ground truth: plain exhaustive enumeration,
vectorized with numpy so the acceptance suites stay inside their budgets.
Assignment codes are MSB-first (variable 1 is the most significant bit),
so ascending code order is lexicographic order on bitstrings.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    LengthMismatch,
    NoSecondModel,
    NotAModel,
    ParseError,
    TooLarge,
    Unsatisfiable,
)
from .outcome import SolveOutcome, exact
from .relations import (
    BUILTIN_RELATIONS,
    Language,
    Relation,
    dualize,
    load_language,
)

ORACLE_VAR_CAP = 24
_BLOCK_BITS = 18

NSOL = "NSOL"
XSOL = "XSOL"
MSD = "MSD"

_POP16 = np.array([c.bit_count() for c in range(1 << 16)], dtype=np.uint8)


@dataclass(frozen=True)
class Assignment:
    """A fixed-length bit vector over the formula's variables."""

    bits: tuple[int, ...]

    @classmethod
    def from_string(cls, s: str) -> "Assignment":
        if not s or set(s) - {"0", "1"}:
            raise ParseError(f"assignment must be a nonempty bitstring, got {s!r}")
        return cls(tuple(int(c) for c in s))

    @classmethod
    def from_code(cls, code: int, n: int) -> "Assignment":
        return cls(tuple((code >> (n - 1 - i)) & 1 for i in range(n)))

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    def code(self) -> int:
        c = 0
        for b in self.bits:
            c = (c << 1) | b
        return c

    def value(self, var: int) -> int:
        """Value of 1-based variable index."""
        return self.bits[var - 1]

    def complement(self) -> "Assignment":
        return Assignment(tuple(1 - b for b in self.bits))

    def flipped(self, var: int) -> "Assignment":
        bits = list(self.bits)
        bits[var - 1] ^= 1
        return Assignment(tuple(bits))

    def with_value(self, var: int, value: int) -> "Assignment":
        bits = list(self.bits)
        bits[var - 1] = value
        return Assignment(tuple(bits))


def hamming(m1: Assignment, m2: Assignment) -> int:
    """Number of coordinates on which the two vectors disagree."""
    if len(m1) != len(m2):
        raise LengthMismatch(f"lengths {len(m1)} and {len(m2)} differ")
    return sum(a != b for a, b in zip(m1.bits, m2.bits))


@dataclass(frozen=True)
class Formula:
    """A conjunction of atoms over a language; variables are 1-based."""

    language: Language
    var_count: int
    atoms: tuple[tuple[str, tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        if self.var_count < 1:
            raise ParseError("formulas need at least one variable")
        for name, vars_ in self.atoms:
            rel = self.language.get(name)
            if len(vars_) != rel.arity:
                raise ParseError(
                    f"atom {name}{vars_} has {len(vars_)} indices, arity is {rel.arity}"
                )
            if any(not 1 <= v <= self.var_count for v in vars_):
                raise ParseError(f"atom {name}{vars_} uses an index outside 1..{self.var_count}")

    def relation(self, name: str) -> Relation:
        return self.language.get(name)

    def effective_language(self) -> Language:
        """Declared relations plus any builtins the atoms reference."""
        pairs = list(self.language.relations)
        declared = {n for n, _ in pairs}
        for name, _ in self.atoms:
            if name not in declared and name in BUILTIN_RELATIONS:
                pairs.append((name, BUILTIN_RELATIONS[name]))
                declared.add(name)
        return Language(tuple(pairs))

    def check_length(self, m: Assignment) -> None:
        if len(m) != self.var_count:
            raise LengthMismatch(f"assignment length {len(m)} != var count {self.var_count}")


def satisfies(formula: Formula, m: Assignment) -> bool:
    """True iff every atom's projected tuple is in its relation."""
    formula.check_length(m)
    for name, vars_ in formula.atoms:
        rel = formula.relation(name)
        code = 0
        for v in vars_:
            code = (code << 1) | m.bits[v - 1]
        if not rel.contains(code):
            return False
    return True


def dualize_formula(formula: Formula) -> Formula:
    """Replace every relation by its dual; models map to their complements."""
    lang = Language(tuple((n, dualize(r)) for n, r in formula.effective_language().relations))
    return Formula(lang, formula.var_count, formula.atoms)


# --- vectorized model enumeration ---------------------------------------------


def _popcount(arr: np.ndarray) -> np.ndarray:
    return _POP16[arr & 0xFFFF] + _POP16[(arr >> 16) & 0xFFFF]


def _model_blocks(formula: Formula) -> Iterator[np.ndarray]:
    """Yield ascending arrays of model codes, in blocks."""
    n = formula.var_count
    atoms = [(formula.relation(name), vars_) for name, vars_ in formula.atoms]
    tables = [np.frombuffer(
        bytes((rel.mask >> i) & 1 for i in range(1 << rel.arity)), dtype=np.uint8
    ) for rel, _ in atoms]
    total = 1 << n
    step = 1 << min(_BLOCK_BITS, n)
    for start in range(0, total, step):
        codes = np.arange(start, min(start + step, total), dtype=np.int64)
        ok = np.ones(len(codes), dtype=bool)
        for (rel, vars_), table in zip(atoms, tables):
            idx = np.zeros(len(codes), dtype=np.int64)
            for pos, v in enumerate(vars_):
                idx |= ((codes >> (n - v)) & 1) << (rel.arity - 1 - pos)
            ok &= table[idx].astype(bool)
            if not ok.any():
                break
        yield codes[ok]


@dataclass(frozen=True)
class ModelEnumeration:
    assignments: tuple[Assignment, ...]
    truncated: bool


def enumerate_models(
    formula: Formula, cap: int | None = None, var_cap: int = ORACLE_VAR_CAP
) -> ModelEnumeration:
    """All models in lexicographic order, truncated at `cap` if given."""
    n = formula.var_count
    if n > var_cap:
        raise TooLarge(f"{n} variables exceed the enumeration cap {var_cap}")
    out: list[Assignment] = []
    truncated = False
    for block in _model_blocks(formula):
        for code in block:
            if cap is not None and len(out) >= cap:
                truncated = True
                break
            out.append(Assignment.from_code(int(code), n))
        if truncated:
            break
    return ModelEnumeration(tuple(out), truncated)


def model_codes(formula: Formula, var_cap: int = ORACLE_VAR_CAP) -> np.ndarray:
    """Ascending int64 array of all model codes."""
    n = formula.var_count
    if n > var_cap:
        raise TooLarge(f"{n} variables exceed the enumeration cap {var_cap}")
    blocks = [b for b in _model_blocks(formula) if len(b)]
    if not blocks:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(blocks)


def count_models(formula: Formula, var_cap: int = ORACLE_VAR_CAP) -> int:
    return int(len(model_codes(formula, var_cap)))


def oracle_optimize(
    problem: str,
    formula: Formula,
    m: Assignment | None = None,
    var_cap: int = ORACLE_VAR_CAP,
) -> SolveOutcome:
    """Exact optimum of NSOL/XSOL/MSD by full enumeration.

    Witnesses are the lexicographically smallest optima, so every
    equivalence test against the oracle is deterministic.
    """
    if problem not in (NSOL, XSOL, MSD):
        raise ParseError(f"unknown oracle problem {problem!r}")
    n = formula.var_count
    if problem in (NSOL, XSOL):
        if m is None:
            raise NotAModel(f"{problem} needs an input assignment")
        formula.check_length(m)
    codes = model_codes(formula, var_cap)
    if len(codes) == 0:
        raise Unsatisfiable("formula has no model")
    if problem == NSOL:
        dist = _popcount((codes ^ m.code()).astype(np.int64))
        best = int(dist.argmin())
        # argmin returns the first (lexicographically smallest) optimum
        witness = Assignment.from_code(int(codes[best]), n)
        return SolveOutcome(NSOL, int(dist[best]), witness, guarantee=exact(), method="oracle")
    if problem == XSOL:
        if not satisfies(formula, m):
            raise NotAModel("XSOL input assignment must satisfy the formula")
        others = codes[codes != m.code()]
        if len(others) == 0:
            raise NoSecondModel("the given model is the only one")
        dist = _popcount((others ^ m.code()).astype(np.int64))
        best = int(dist.argmin())
        witness = Assignment.from_code(int(others[best]), n)
        return SolveOutcome(XSOL, int(dist[best]), witness, guarantee=exact(), method="oracle")
    # MSD
    if len(codes) < 2:
        raise NoSecondModel("fewer than two models")
    best_val = n + 1
    best_pair: tuple[int, int] | None = None
    chunk = 1 << 12
    for i in range(0, len(codes), chunk):
        left = codes[i : i + chunk]
        for j in range(i, len(codes), chunk):
            right = codes[j : j + chunk]
            d = _popcount(left[:, None] ^ right[None, :])
            if i == j:  # keep strictly ordered pairs only
                d = np.where(np.tri(len(left), len(right), 0, dtype=bool), n + 1, d)
            val = int(d.min())
            if val > n or val > best_val:
                continue
            t0, t1 = np.argwhere(d == val)[0]  # row-major first = lex smallest pair
            cand = (int(left[t0]), int(right[t1]))
            if val < best_val or best_pair is None or cand < best_pair:
                best_val = val
                best_pair = cand
    w1 = Assignment.from_code(best_pair[0], n)
    w2 = Assignment.from_code(best_pair[1], n)
    return SolveOutcome(MSD, best_val, w1, w2, guarantee=exact(), method="oracle")


# --- formula files --------------------------------------------------------------


def parse_formula(text: str, base_dir: str | Path | None = None) -> Formula:
    """Parse the formula file format.

    Header: `lang FILE` or `lang builtin`, then `vars N`, then one atom per
    line: `NAME i1 i2 ...` with 1-based variable indices.
    """
    lang: Language | None = None
    var_count: int | None = None
    atoms: list[tuple[str, tuple[int, ...]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "lang":
            if len(parts) != 2:
                raise ParseError(f"line {lineno}: expected 'lang FILE|builtin'")
            if parts[1] == "builtin":
                lang = Language(())
            else:
                path = Path(parts[1])
                if base_dir is not None and not path.is_absolute():
                    path = Path(base_dir) / path
                lang = load_language(path)
        elif parts[0] == "vars":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(f"line {lineno}: expected 'vars N'")
            var_count = int(parts[1])
        else:
            if lang is None or var_count is None:
                raise ParseError(f"line {lineno}: atom before 'lang'/'vars' header")
            name = parts[0]
            try:
                vars_ = tuple(int(p) for p in parts[1:])
            except ValueError as exc:
                raise ParseError(f"line {lineno}: variable indices must be integers") from exc
            if not lang.has(name):
                raise ParseError(f"line {lineno}: unknown relation {name!r}")
            atoms.append((name, vars_))
    if lang is None or var_count is None:
        raise ParseError("formula file needs 'lang' and 'vars' headers")
    return Formula(lang, var_count, tuple(atoms))


def load_formula(path: str | Path) -> Formula:
    p = Path(path)
    return parse_formula(p.read_text(encoding="utf-8"), base_dir=p.parent)


def make_formula(
    language: Language, var_count: int, atoms: Iterable[tuple[str, Sequence[int]]]
) -> Formula:
    return Formula(language, var_count, tuple((n, tuple(v)) for n, v in atoms))
