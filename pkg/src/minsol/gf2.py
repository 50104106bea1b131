"""Linear algebra over GF(2) with bit-packed rows.

Vectors of length l are ints with bit i = coordinate i (LSB first).
Desk-scale exact solvers for minimum weight and nearest codeword live
here; both enumerate exhaustively and refuse oversized instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import TooLarge

ENUM_CAP_BITS = 24


def vector_from_bits(bits: Sequence[int]) -> int:
    v = 0
    for i, b in enumerate(bits):
        if b:
            v |= 1 << i
    return v


def vector_to_bits(v: int, length: int) -> tuple[int, ...]:
    return tuple((v >> i) & 1 for i in range(length))


@dataclass(frozen=True)
class Gf2System:
    """A·x = b with k bit-packed rows over l columns."""

    rows: tuple[int, ...]
    rhs: tuple[int, ...]
    cols: int

    def __post_init__(self) -> None:
        assert len(self.rows) == len(self.rhs)

    @classmethod
    def from_equations(cls, cols: int, equations: Sequence[tuple[int, int]]) -> "Gf2System":
        rows = tuple(a for a, _ in equations)
        rhs = tuple(b & 1 for _, b in equations)
        return cls(rows, rhs, cols)


def _eliminate(rows: list[int], cols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; returns (reduced rows, pivot columns)."""
    reduced: list[int] = []
    pivots: list[int] = []
    for row in rows:
        for r, p in zip(reduced, pivots):
            if (row >> p) & 1:
                row ^= r
        if row == 0:
            continue
        p = (row & -row).bit_length() - 1
        # back-substitute into earlier rows
        for i, r in enumerate(reduced):
            if (r >> p) & 1:
                reduced[i] = r ^ row
        reduced.append(row)
        pivots.append(p)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [reduced[i] for i in order], [pivots[i] for i in order]


def rref_basis(vectors: Sequence[int], cols: int) -> list[int]:
    """Canonical RREF basis of the span of the given vectors."""
    reduced, _ = _eliminate(list(vectors), cols)
    return reduced


def rank(vectors: Sequence[int], cols: int) -> int:
    return len(rref_basis(vectors, cols))


def nullspace(rows: Sequence[int], cols: int) -> list[int]:
    """Basis of {x : row·x = 0 for all rows}, one vector per free column."""
    reduced, pivots = _eliminate(list(rows), cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        v = 1 << free
        for r, p in zip(reduced, pivots):
            if (r >> free) & 1:
                v |= 1 << p
        basis.append(v)
    return basis


def solve_affine(system: Gf2System) -> tuple[int, list[int]] | None:
    """Particular solution (free columns zero) and nullspace basis.

    Returns None iff the system is inconsistent.
    """
    cols = system.cols
    # augment with the rhs in an extra top bit
    aug = [row | (b << cols) for row, b in zip(system.rows, system.rhs)]
    reduced, pivots = _eliminate(aug, cols + 1)
    particular = 0
    for r, p in zip(reduced, pivots):
        if p == cols:
            return None  # row 0 = 1
        if (r >> cols) & 1:
            particular |= 1 << p
    hom_rows = [r & ((1 << cols) - 1) for r in reduced if (r & ((1 << cols) - 1))]
    basis = nullspace(hom_rows, cols)
    return particular, basis


def min_weight_nonzero(basis: Sequence[int], cols: int) -> tuple[int, int] | None:
    """Minimum-weight nonzero span member; None for the zero-dimensional space.

    Ties break toward the vector whose MSB-first bitstring is smallest.
    Gray-code enumeration over all 2**dim combinations.
    """
    dim = len(basis)
    if dim == 0:
        return None
    if dim > ENUM_CAP_BITS:
        raise TooLarge(f"nullspace dimension {dim} exceeds 2**{ENUM_CAP_BITS} enumeration cap")
    best: tuple[int, int] | None = None
    best_key: tuple[int, int] | None = None
    current = 0
    for i in range(1, 1 << dim):
        current ^= basis[(i & -i).bit_length() - 1]
        if current == 0:
            continue
        w = current.bit_count()
        key = (w, _msb_key(current, cols))
        if best_key is None or key < best_key:
            best = (w, current)
            best_key = key
    return best


def nearest_codeword(generator_rows: Sequence[int], cols: int, target: int) -> tuple[int, int]:
    """Exact closest-codeword search over the whole message space.

    Returns (distance, message); ties break toward the lexicographically
    smallest message (MSB-first over message bits m[0..k-1]).
    """
    k = len(generator_rows)
    if k > ENUM_CAP_BITS:
        raise TooLarge(f"message space 2**{k} exceeds 2**{ENUM_CAP_BITS} enumeration cap")
    best = ((target).bit_count(), 0)  # message 0 -> zero codeword
    best_key = (best[0], 0)
    codeword = 0
    gray_prev = 0
    for i in range(1, 1 << k):
        gray = i ^ (i >> 1)
        codeword ^= generator_rows[(gray ^ gray_prev).bit_length() - 1]
        gray_prev = gray
        d = (codeword ^ target).bit_count()
        key = (d, _msb_key(gray, k))
        if key < best_key:
            best = (d, gray)
            best_key = key
    return best


def _msb_key(v: int, length: int) -> int:
    """Reverse bit order so numeric comparison = MSB-first lexicographic."""
    out = 0
    for i in range(length):
        if (v >> i) & 1:
            out |= 1 << (length - 1 - i)
    return out
