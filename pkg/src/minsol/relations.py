"""Boolean relations, their closure properties, and clause decompositions.

A relation of arity n is stored as a membership table over the 2**n tuple
codes, where the integer code of a tuple has the first coordinate as its
most significant bit ("0110" -> 6).  The same MSB-first convention is used
for truth tables of Boolean functions and for assignment bitstrings, so
lexicographic order on bitstrings is numeric order on codes everywhere.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import InternalConsistencyError, ParseError, ShapeUnavailable

MAX_RELATION_ARITY = 16
# Truth tables up to arity 18 so the threshold functions used by the
# co-clone classifier cover parameters up to MAX_RELATION_ARITY + 1.
MAX_FUNCTION_ARITY = 18

FLAG_NAMES = (
    "zero_valid",
    "one_valid",
    "horn",
    "dual_horn",
    "monotone",
    "bijunctive",
    "affine",
    "complementive",
)


def tuple_code(bits: Sequence[int]) -> int:
    """Integer code of a bit tuple, first coordinate most significant."""
    code = 0
    for b in bits:
        code = (code << 1) | (b & 1)
    return code


def code_bits(code: int, arity: int) -> tuple[int, ...]:
    return tuple((code >> (arity - 1 - i)) & 1 for i in range(arity))


@dataclass(frozen=True)
class Relation:
    """A nonempty Boolean relation of fixed arity."""

    arity: int
    mask: int

    def __post_init__(self) -> None:
        if not 1 <= self.arity <= MAX_RELATION_ARITY:
            raise ParseError(f"relation arity {self.arity} outside 1..{MAX_RELATION_ARITY}")
        if self.mask <= 0:
            raise ParseError("empty relations are rejected")
        if self.mask >> (1 << self.arity):
            raise ParseError("membership table longer than 2**arity")

    @classmethod
    def from_tuples(cls, arity: int, tuples: Iterable[Sequence[int] | int | str]) -> "Relation":
        mask = 0
        for t in tuples:
            if isinstance(t, int):
                code = t
            elif isinstance(t, str):
                if len(t) != arity or set(t) - {"0", "1"}:
                    raise ParseError(f"bad tuple {t!r} for arity {arity}")
                code = int(t, 2)
            else:
                if len(t) != arity:
                    raise ParseError(f"tuple {t} has wrong length for arity {arity}")
                code = tuple_code(t)
            if not 0 <= code < (1 << arity):
                raise ParseError(f"tuple code {code} out of range for arity {arity}")
            mask |= 1 << code
        return cls(arity, mask)

    def tuples(self) -> tuple[int, ...]:
        """Member tuple codes in ascending (lexicographic) order."""
        return tuple(c for c in range(1 << self.arity) if (self.mask >> c) & 1)

    def bit_rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(code_bits(c, self.arity) for c in self.tuples())

    def contains(self, code: int) -> bool:
        return bool((self.mask >> code) & 1)

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def is_full(self) -> bool:
        return self.mask == (1 << (1 << self.arity)) - 1

    def restrict(self, coord: int, value: int) -> "Relation | None":
        """Pin one 0-based coordinate to a value; None if that empties it.

        The result keeps the remaining coordinates in order (arity - 1),
        or, for arity 1, returns None/"full" degenerately via the caller.
        """
        if self.arity == 1:
            raise InternalConsistencyError("cannot restrict a unary relation further")
        shift = self.arity - 1 - coord
        mask = 0
        for c in self.tuples():
            if (c >> shift) & 1 != value:
                continue
            high = c >> (shift + 1)
            low = c & ((1 << shift) - 1)
            mask |= 1 << ((high << shift) | low)
        if mask == 0:
            return None
        return Relation(self.arity - 1, mask)

    def __str__(self) -> str:
        rows = ",".join("".join(map(str, r)) for r in self.bit_rows())
        return f"Relation({self.arity}:{rows})"


@dataclass(frozen=True)
class BoolFunction:
    """A Boolean function given by its truth table (MSB-first argument code)."""

    arity: int
    table: int
    name: str = ""

    def __post_init__(self) -> None:
        if not 1 <= self.arity <= MAX_FUNCTION_ARITY:
            raise ParseError(f"function arity {self.arity} outside 1..{MAX_FUNCTION_ARITY}")
        if self.table >> (1 << self.arity):
            raise ParseError("truth table longer than 2**arity")

    @classmethod
    def from_callable(cls, arity: int, fn, name: str = "") -> "BoolFunction":
        table = 0
        for code in range(1 << arity):
            if fn(*code_bits(code, arity)):
                table |= 1 << code
        return cls(arity, table, name)

    def value(self, code: int) -> int:
        return (self.table >> code) & 1

    def apply_bits(self, bits: Sequence[int]) -> int:
        return self.value(tuple_code(bits))

    @functools.cached_property
    def is_symmetric(self) -> bool:
        by_weight: dict[int, int] = {}
        for code in range(1 << self.arity):
            w = code.bit_count()
            v = self.value(code)
            if by_weight.setdefault(w, v) != v:
                return False
        return True

    def __str__(self) -> str:
        return self.name or f"fn{self.arity}:{self.table:x}"


# --- named functions (clone bases) -----------------------------------------

ID1 = BoolFunction(1, 0b10, "id")
NOT1 = BoolFunction(1, 0b01, "not")
CONST0 = BoolFunction(1, 0b00, "const0")
CONST1 = BoolFunction(1, 0b11, "const1")
AND2 = BoolFunction(2, 0b1000, "and")
OR2F = BoolFunction(2, 0b1110, "or")
XOR2F = BoolFunction(2, 0b0110, "xor")
XNOR2F = BoolFunction(2, 0b1001, "xnor")
IMPL2F = BoolFunction(2, 0b1011, "impl")
ANDNOT2 = BoolFunction(2, 0b0100, "andnot")
MAJ3 = BoolFunction.from_callable(3, lambda x, y, z: x + y + z >= 2, "maj")
XOR3 = BoolFunction.from_callable(3, lambda x, y, z: (x + y + z) % 2, "xor3")
XNOR3 = BoolFunction.from_callable(3, lambda x, y, z: (x + y + z + 1) % 2, "xnor3")
OR_AND3 = BoolFunction.from_callable(3, lambda x, y, z: x | (y & z), "or_and")
OR_ANDNOT3 = BoolFunction.from_callable(3, lambda x, y, z: x | (y & (1 - z)), "or_andnot")
AND_OR3 = BoolFunction.from_callable(3, lambda x, y, z: x & (y | z), "and_or")
AND_ORNOT3 = BoolFunction.from_callable(3, lambda x, y, z: x & (y | (1 - z)), "and_ornot")
AND_XNOR3 = BoolFunction.from_callable(3, lambda x, y, z: x & ((y + z + 1) % 2), "and_xnor")
SELFDUAL3 = BoolFunction.from_callable(
    3, lambda x, y, z: (x & (1 - y)) | (x & (1 - z)) | ((1 - y) & (1 - z)), "selfdual3"
)
SELFDUAL_MONOTONE3 = BoolFunction.from_callable(
    3, lambda x, y, z: (x & y) | (x & (1 - z)) | (y & (1 - z)), "selfdual_mon3"
)


@functools.lru_cache(maxsize=None)
def near_unanimity(m: int) -> BoolFunction:
    """(m+1)-ary threshold: true iff at least m arguments are true."""
    arity = m + 1
    table = 0
    for code in range(1 << arity):
        if code.bit_count() >= m:
            table |= 1 << code
    return BoolFunction(arity, table, f"nu{m}")


@functools.lru_cache(maxsize=None)
def dual_near_unanimity(m: int) -> BoolFunction:
    """(m+1)-ary threshold: true iff at least two arguments are true."""
    arity = m + 1
    table = 0
    for code in range(1 << arity):
        if code.bit_count() >= 2:
            table |= 1 << code
    return BoolFunction(arity, table, f"dual_nu{m}")


# --- named relations --------------------------------------------------------


def _full_minus(arity: int, excluded: Iterable[int]) -> Relation:
    mask = (1 << (1 << arity)) - 1
    for c in excluded:
        mask &= ~(1 << c)
    return Relation(arity, mask)


def or_rel(m: int) -> Relation:
    return _full_minus(m, [0])


def nand_rel(m: int) -> Relation:
    return _full_minus(m, [(1 << m) - 1])


def even_rel(m: int) -> Relation:
    return Relation.from_tuples(m, [c for c in range(1 << m) if c.bit_count() % 2 == 0])


def odd_rel(m: int) -> Relation:
    return Relation.from_tuples(m, [c for c in range(1 << m) if c.bit_count() % 2 == 1])


def clause_rel(arity: int, positives: Sequence[int], negatives: Sequence[int]) -> Relation:
    """Relation of a single clause over coordinates 0..arity-1."""
    tuples = []
    for c in range(1 << arity):
        bits = code_bits(c, arity)
        if any(bits[i] for i in positives) or any(not bits[i] for i in negatives):
            tuples.append(c)
    return Relation.from_tuples(arity, tuples)


T_REL = Relation(1, 0b10)  # [x]
F_REL = Relation(1, 0b01)  # [not x]
EQ2 = Relation(2, 0b1001)
XOR2 = odd_rel(2)
IMPL = Relation(2, 0b1011)  # [x -> y]
OR2 = or_rel(2)
NAND2 = nand_rel(2)
DUP3 = _full_minus(3, [0b010, 0b101])
NAE3 = _full_minus(3, [0b000, 0b111])
ONE_IN_THREE = Relation.from_tuples(3, [0b001, 0b010, 0b100])
HORN3 = clause_rel(3, positives=[2], negatives=[0, 1])  # [-x | -y | z]
DUALHORN3 = clause_rel(3, positives=[0, 1], negatives=[2])  # [x | y | -z]

BUILTIN_RELATIONS: dict[str, Relation] = {
    "or2": OR2,
    "impl": IMPL,
    "nand2": NAND2,
    "even3": even_rel(3),
    "even4": even_rel(4),
    "odd3": odd_rel(3),
    "dup3": DUP3,
    "nae3": NAE3,
    "one_in_three": ONE_IN_THREE,
    "t": T_REL,
    "f": F_REL,
}


# --- polymorphisms and flags -------------------------------------------------


def _threshold_of(f: BoolFunction) -> int | None:
    """t such that f = [weight >= t] with 1 <= t <= arity, else None."""
    if not f.is_symmetric:
        return None
    weights = sorted({c.bit_count() for c in range(1 << f.arity) if f.value(c)})
    if not weights or weights[0] < 1:
        return None
    t = weights[0]
    if weights == list(range(t, f.arity + 1)):
        return t
    return None


def _weight_set_of(r: Relation) -> frozenset[int] | None:
    """Weights of a permutation-symmetric relation, else None."""
    wset = {c.bit_count() for c in r.tuples()}
    for c in range(1 << r.arity):
        if ((r.mask >> c) & 1) != (c.bit_count() in wset):
            return None
    return frozenset(wset)


@functools.lru_cache(maxsize=200_000)
def _is_poly_cached(f_arity: int, f_table: int, r_arity: int, r_mask: int) -> bool:
    f = BoolFunction(f_arity, f_table)
    r = Relation(r_arity, r_mask)
    n, k = r.arity, f.arity
    full = (1 << (1 << n)) - 1

    # threshold functions on or/nand-type relations admit a packing argument:
    # a counterexample spreads one violating entry per row across the columns
    t = _threshold_of(f)
    if t is not None:
        if r.mask == full & ~1:  # [weight >= 1]
            return k > n * (t - 1)
        if r.mask == full & ~(1 << ((1 << n) - 1)):  # [weight <= n-1]
            return k > n * (k - t)

    # weight-determined relations: counterexamples are column multisets
    wset = _weight_set_of(r)
    if wset is not None and math.comb((1 << k) + n - 1, n) <= min(500_000, r.size**k):
        for cols in itertools.combinations_with_replacement(range(1 << k), n):
            row_weights = [0] * k
            out_weight = 0
            for p in cols:
                for i in range(k):
                    row_weights[i] += (p >> (k - 1 - i)) & 1
                out_weight += f.value(p)
            if all(w in wset for w in row_weights) and out_weight not in wset:
                return False
        return True

    rows = r.tuples()
    shifts = tuple(n - 1 - j for j in range(n))
    if f.is_symmetric:
        choices: Iterable[tuple[int, ...]] = itertools.combinations_with_replacement(rows, k)
    else:
        choices = itertools.product(rows, repeat=k)
    table = f.table
    mask = r.mask
    for ts in choices:
        out = 0
        for s in shifts:
            idx = 0
            for t_ in ts:
                idx = (idx << 1) | ((t_ >> s) & 1)
            out = (out << 1) | ((table >> idx) & 1)
        if not (mask >> out) & 1:
            return False
    return True


def is_polymorphism(f: BoolFunction, r: Relation) -> bool:
    """True iff applying f coordinatewise to tuples of r stays inside r."""
    return _is_poly_cached(f.arity, f.table, r.arity, r.mask)


@functools.lru_cache(maxsize=None)
def _flags_cached(arity: int, mask: int) -> frozenset[str]:
    r = Relation(arity, mask)
    flags = set()
    if r.contains(0):
        flags.add("zero_valid")
    if r.contains((1 << arity) - 1):
        flags.add("one_valid")
    if is_polymorphism(AND2, r):
        flags.add("horn")
    if is_polymorphism(OR2F, r):
        flags.add("dual_horn")
    if "horn" in flags and "dual_horn" in flags:
        flags.add("monotone")
    if is_polymorphism(MAJ3, r):
        flags.add("bijunctive")
    if is_polymorphism(XOR3, r):
        flags.add("affine")
    if is_polymorphism(NOT1, r):
        flags.add("complementive")
    return frozenset(flags)


def property_flags(r: Relation) -> frozenset[str]:
    """The eight closure/validity flags of a relation."""
    return _flags_cached(r.arity, r.mask)


def dualize(r: Relation) -> Relation:
    """Complement every tuple; an involution."""
    full = (1 << r.arity) - 1
    mask = 0
    for c in r.tuples():
        mask |= 1 << (c ^ full)
    return Relation(r.arity, mask)


def dualize_function(f: BoolFunction) -> BoolFunction:
    full_in = (1 << f.arity) - 1
    table = 0
    for code in range(1 << f.arity):
        if not f.value(code ^ full_in):
            table |= 1 << code
    return BoolFunction(f.arity, table, f"dual_{f.name}" if f.name else "")


# --- clause shapes and CNF decomposition -------------------------------------

UNIT_POS = "UNIT_POS"
UNIT_NEG = "UNIT_NEG"
IMPL_KIND = "IMPL"
OR_K = "OR_K"
PARITY = "PARITY"
GENERAL = "GENERAL"


@dataclass(frozen=True)
class Clause:
    """One clause over 0-based coordinate indices.

    Disjunctive clauses carry positive/negative index tuples; parity
    clauses carry their support in `positives` plus the target bit.
    """

    positives: tuple[int, ...]
    negatives: tuple[int, ...] = ()
    parity_bit: int | None = None
    kind: str = field(init=False)

    def __post_init__(self) -> None:
        if self.parity_bit is not None:
            if self.negatives or self.parity_bit not in (0, 1):
                raise ParseError("parity clauses carry a bit and unsigned support only")
            kind = PARITY
        elif len(self.positives) == 1 and not self.negatives:
            kind = UNIT_POS
        elif len(self.negatives) == 1 and not self.positives:
            kind = UNIT_NEG
        elif len(self.positives) == 1 and len(self.negatives) == 1:
            kind = IMPL_KIND
        elif len(self.positives) >= 2 and not self.negatives:
            kind = OR_K
        else:
            kind = GENERAL
        object.__setattr__(self, "kind", kind)

    def holds(self, bits: Sequence[int]) -> bool:
        if self.parity_bit is not None:
            return sum(bits[i] for i in self.positives) % 2 == self.parity_bit
        return any(bits[i] for i in self.positives) or any(not bits[i] for i in self.negatives)

    def literals(self) -> frozenset[int]:
        """Signed 1-based literal set (disjunctive clauses only)."""
        return frozenset(i + 1 for i in self.positives) | frozenset(-(i + 1) for i in self.negatives)


_SHAPES = ("horn", "dual_horn", "bijunctive", "monotone", "parity", "ihsb_pos", "ihsb_neg")


def _shape_admits(r: Relation, shape: str, k: int | None) -> bool:
    flags = property_flags(r)
    if shape == "horn":
        return "horn" in flags
    if shape == "dual_horn":
        return "dual_horn" in flags
    if shape == "bijunctive":
        return "bijunctive" in flags
    if shape == "monotone":
        return "monotone" in flags
    if shape == "parity":
        return "affine" in flags
    if shape == "ihsb_pos":
        return is_polymorphism(OR_AND3, r) and is_polymorphism(dual_near_unanimity(k), r)
    if shape == "ihsb_neg":
        return is_polymorphism(AND_OR3, r) and is_polymorphism(near_unanimity(k), r)
    raise ParseError(f"unknown decomposition shape {shape!r}")


def _clause_allowed(shape: str, k: int | None, pos: tuple[int, ...], neg: tuple[int, ...]) -> bool:
    np_, nn = len(pos), len(neg)
    if np_ + nn == 1:
        return True
    if shape == "horn":
        return np_ <= 1
    if shape == "dual_horn":
        return nn <= 1
    if shape == "bijunctive":
        return np_ + nn <= 2
    if shape == "monotone":
        return np_ <= 1 and nn <= 1
    if shape == "ihsb_pos":
        return (nn == 0 and 2 <= np_ <= k) or (np_ == 1 and nn == 1)
    if shape == "ihsb_neg":
        return (np_ == 0 and 2 <= nn <= k) or (np_ == 1 and nn == 1)
    raise ParseError(f"unknown decomposition shape {shape!r}")


def _parity_decompose(r: Relation) -> tuple[Clause, ...]:
    # Check-space of the tuple set: all (a | c) with a.t = c for every t in r,
    # reduced to RREF so 2affine relations yield unary/binary equations only.
    from . import gf2

    n = r.arity
    rows = [_reverse_bits(c, n) | (1 << n) for c in r.tuples()]  # [t | 1], LSB = coord 0
    basis = gf2.nullspace(rows, n + 1)
    basis = gf2.rref_basis(basis, n + 1)
    clauses = []
    for v in basis:
        support = tuple(i for i in range(n) if (v >> i) & 1)
        rhs = (v >> n) & 1
        if not support:
            # 0 = 1 cannot arise from a nonempty relation
            raise InternalConsistencyError("contradictory parity row from nonempty relation")
        clauses.append(Clause(positives=support, parity_bit=rhs))
    return tuple(clauses)


def _reverse_bits(code: int, n: int) -> int:
    out = 0
    for i in range(n):
        if (code >> i) & 1:
            out |= 1 << (n - 1 - i)
    return out


@functools.lru_cache(maxsize=None)
def _decompose_cached(arity: int, mask: int, shape: str, k: int | None) -> tuple[Clause, ...]:
    r = Relation(arity, mask)
    if not _shape_admits(r, shape, k):
        raise ShapeUnavailable(f"{r} admits no {shape}{'' if k is None else f'_{k}'} decomposition")
    if shape == "parity":
        clauses = _parity_decompose(r)
    else:
        clauses = _minimal_implicates(r, shape, k)
    _verify_decomposition(r, clauses)
    return clauses


def _minimal_implicates(r: Relation, shape: str, k: int | None) -> tuple[Clause, ...]:
    n = r.arity
    tuples = r.tuples()
    implicates: list[tuple[frozenset[int], Clause]] = []
    # signs per coordinate: absent / positive / negative
    for signs in itertools.product((0, 1, 2), repeat=n):
        pos = tuple(i for i in range(n) if signs[i] == 1)
        neg = tuple(i for i in range(n) if signs[i] == 2)
        if not pos and not neg:
            continue
        if not _clause_allowed(shape, k, pos, neg):
            continue
        cl = Clause(pos, neg)
        if all(cl.holds(code_bits(t, n)) for t in tuples):
            implicates.append((cl.literals(), cl))
    implicates.sort(key=lambda item: (len(item[0]), sorted(item[0])))
    kept: list[tuple[frozenset[int], Clause]] = []
    for lits, cl in implicates:
        if any(prev <= lits for prev, _ in kept):
            continue
        kept.append((lits, cl))
    return tuple(cl for _, cl in kept)


def _verify_decomposition(r: Relation, clauses: tuple[Clause, ...]) -> None:
    n = r.arity
    for code in range(1 << n):
        bits = code_bits(code, n)
        if all(cl.holds(bits) for cl in clauses) != r.contains(code):
            raise InternalConsistencyError(
                f"decomposition of {r} does not reproduce its model set"
            )


def cnf_decompose(r: Relation, shape: str, k: int | None = None) -> tuple[Clause, ...]:
    """Clause list over coordinates whose conjunction equals r exactly.

    Shapes: horn, dual_horn, bijunctive, monotone, parity, ihsb_pos,
    ihsb_neg (the latter two take the hitting-set width k >= 2).
    Raises ShapeUnavailable when r's flags do not admit the shape.
    """
    if shape not in _SHAPES:
        raise ParseError(f"unknown decomposition shape {shape!r}")
    if shape in ("ihsb_pos", "ihsb_neg"):
        if k is None or k < 2:
            raise ParseError("ihsb shapes need a width k >= 2")
    else:
        k = None
    return _decompose_cached(r.arity, r.mask, shape, k)


# --- languages ----------------------------------------------------------------


@dataclass(frozen=True)
class Language:
    """A named finite set of relations (the constraint language)."""

    relations: tuple[tuple[str, Relation], ...]

    @classmethod
    def of(cls, **named: Relation) -> "Language":
        return cls(tuple(named.items()))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, Relation]]) -> "Language":
        seen: dict[str, Relation] = {}
        for name, rel in pairs:
            if name in seen and seen[name] != rel:
                raise ParseError(f"relation {name!r} declared twice with different tuples")
            seen[name] = rel
        return cls(tuple(seen.items()))

    def get(self, name: str) -> Relation:
        for n, r in self.relations:
            if n == name:
                return r
        if name in BUILTIN_RELATIONS:
            return BUILTIN_RELATIONS[name]
        raise ParseError(f"unknown relation {name!r}")

    def declared(self, name: str) -> Relation | None:
        for n, r in self.relations:
            if n == name:
                return r
        return None

    def has(self, name: str) -> bool:
        return any(n == name for n, _ in self.relations) or name in BUILTIN_RELATIONS

    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.relations)

    def members(self) -> tuple[Relation, ...]:
        return tuple(r for _, r in self.relations)

    @functools.cached_property
    def flags(self) -> frozenset[str]:
        """Flags holding for every member relation."""
        sets = [property_flags(r) for r in self.members()]
        if not sets:
            return frozenset(FLAG_NAMES)
        out = set(sets[0])
        for s in sets[1:]:
            out &= s
        if "horn" in out and "dual_horn" in out:
            out.add("monotone")
        return frozenset(out)

    @property
    def max_arity(self) -> int:
        return max((r.arity for r in self.members()), default=1)

    def dualized(self) -> "Language":
        return Language(tuple((n, dualize(r)) for n, r in self.relations))

    def __iter__(self) -> Iterator[tuple[str, Relation]]:
        return iter(self.relations)


_REL_LINE = re.compile(r"^rel\s+(\S+)\s+(\d+)\s+(\S+)$")


def parse_language(text: str) -> Language:
    """Parse the language file format: lines `rel NAME ARITY t1,t2,...`."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _REL_LINE.match(line)
        if not m:
            raise ParseError(f"line {lineno}: expected 'rel NAME ARITY t1,t2,...'")
        name, arity_s, tuples_s = m.groups()
        try:
            arity = int(arity_s)
            rel = Relation.from_tuples(arity, tuples_s.split(","))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
        pairs.append((name, rel))
    return Language.from_pairs(pairs)


def load_language(path: str | Path) -> Language:
    return parse_language(Path(path).read_text(encoding="utf-8"))


def builtin_language(names: Iterable[str]) -> Language:
    return Language.from_pairs((n, BUILTIN_RELATIONS[n]) for n in names)
