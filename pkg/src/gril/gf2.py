"""Sparse linear algebra over GF(2).

Vectors are immutable sets of row indices carrying coefficient 1, stored as
python int bitsets (XOR = addition).  Matrices are column lists.  This is the
workhorse of homology computation and the limit/colimit rank oracle; the
zigzag engine uses its own bit-packed kernels for speed.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence


class Gf2Vector:
    """A vector over GF(2), identified with its support set of row indices."""

    __slots__ = ("_bits",)

    def __init__(self, indices: Iterable[int] = ()):
        bits = 0
        for i in indices:
            if i < 0:
                raise ValueError("negative row index")
            bits |= 1 << i
        self._bits = bits

    @classmethod
    def from_bits(cls, bits: int) -> "Gf2Vector":
        v = cls.__new__(cls)
        v._bits = bits
        return v

    @property
    def bits(self) -> int:
        return self._bits

    @property
    def support(self) -> tuple[int, ...]:
        """Sorted tuple of row indices with coefficient 1."""
        out = []
        bits = self._bits
        while bits:
            lsb = bits & -bits
            out.append(lsb.bit_length() - 1)
            bits ^= lsb
        return tuple(out)

    def is_zero(self) -> bool:
        return self._bits == 0

    def low(self) -> int:
        """Largest row index with a 1 (the persistence 'low'), or -1 if zero."""
        return self._bits.bit_length() - 1

    def __xor__(self, other: "Gf2Vector") -> "Gf2Vector":
        return Gf2Vector.from_bits(self._bits ^ other._bits)

    __add__ = __xor__

    def __contains__(self, index: int) -> bool:
        return bool((self._bits >> index) & 1)

    def __eq__(self, other) -> bool:
        return isinstance(other, Gf2Vector) and self._bits == other._bits

    def __hash__(self) -> int:
        return hash(self._bits)

    def __bool__(self) -> bool:
        return self._bits != 0

    def __repr__(self) -> str:
        return f"Gf2Vector({list(self.support)})"


class Gf2Matrix:
    """A matrix over GF(2) stored as a list of sparse columns."""

    __slots__ = ("nrows", "columns")

    def __init__(self, nrows: int, columns: Sequence[Gf2Vector]):
        self.nrows = int(nrows)
        self.columns = list(columns)
        for col in self.columns:
            if col.bits >> self.nrows:
                raise ValueError("row index out of range")

    @property
    def ncols(self) -> int:
        return len(self.columns)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, [Gf2Vector([i]) for i in range(n)])

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "Gf2Matrix":
        return cls(nrows, [Gf2Vector() for _ in range(ncols)])

    def transpose(self) -> "Gf2Matrix":
        cols = [0] * self.nrows
        for j, col in enumerate(self.columns):
            bits = col.bits
            while bits:
                lsb = bits & -bits
                cols[lsb.bit_length() - 1] |= 1 << j
                bits ^= lsb
        return Gf2Matrix(self.ncols, [Gf2Vector.from_bits(b) for b in cols])

    def __repr__(self) -> str:
        return f"Gf2Matrix({self.nrows}x{self.ncols})"


def column_reduce(m: Gf2Matrix) -> tuple[Gf2Matrix, list[Optional[int]]]:
    """Persistence-style column reduction, left to right.

    Each column is reduced by adding earlier columns until its lowest one
    (largest row index) is unique or the column vanishes.  Returns the
    reduced matrix and the per-column pivot row (None for zero columns).
    """
    low_to_col: dict[int, int] = {}
    reduced: list[int] = []
    pivots: list[Optional[int]] = []
    for j, col in enumerate(m.columns):
        bits = col.bits
        while bits:
            low = bits.bit_length() - 1
            k = low_to_col.get(low)
            if k is None:
                break
            bits ^= reduced[k]
        reduced.append(bits)
        if bits:
            low = bits.bit_length() - 1
            low_to_col[low] = j
            pivots.append(low)
        else:
            pivots.append(None)
    cols = [Gf2Vector.from_bits(b) for b in reduced]
    return Gf2Matrix(m.nrows, cols), pivots


def rank(m: Gf2Matrix) -> int:
    """Rank over GF(2): number of pivoted columns after reduction."""
    _, pivots = column_reduce(m)
    return sum(1 for p in pivots if p is not None)


def in_span(basis: Sequence[Gf2Vector], target: Gf2Vector) -> Optional[set[int]]:
    """Express ``target`` as a sum of basis vectors, if possible.

    Returns the set S of basis indices with XOR(basis[S]) == target, or None
    when target is outside the span.  The basis need not be independent; if
    it is dependent an arbitrary valid combination is returned.
    """
    # Echelonize the basis while tracking combinations of original columns.
    low_to_pos: dict[int, int] = {}
    reduced: list[int] = []
    combos: list[int] = []
    for j, vec in enumerate(basis):
        bits = vec.bits
        combo = 1 << j
        while bits:
            low = bits.bit_length() - 1
            k = low_to_pos.get(low)
            if k is None:
                break
            bits ^= reduced[k]
            combo ^= combos[k]
        if bits:
            low_to_pos[bits.bit_length() - 1] = len(reduced)
            reduced.append(bits)
            combos.append(combo)
    t = target.bits
    combo = 0
    while t:
        k = low_to_pos.get(t.bit_length() - 1)
        if k is None:
            return None
        t ^= reduced[k]
        combo ^= combos[k]
    out = set()
    while combo:
        lsb = combo & -combo
        out.add(lsb.bit_length() - 1)
        combo ^= lsb
    return out


def kernel_basis(m: Gf2Matrix) -> list[Gf2Vector]:
    """Basis of the kernel {x : m @ x = 0}, as vectors over column indices."""
    low_to_col: dict[int, int] = {}
    reduced: list[int] = []
    combos: list[int] = []
    kernel: list[Gf2Vector] = []
    for j, col in enumerate(m.columns):
        bits = col.bits
        combo = 1 << j
        while bits:
            low = bits.bit_length() - 1
            k = low_to_col.get(low)
            if k is None:
                break
            bits ^= reduced[k]
            combo ^= combos[k]
        if bits:
            low_to_col[bits.bit_length() - 1] = len(reduced)
            reduced.append(bits)
            combos.append(combo)
        else:
            kernel.append(Gf2Vector.from_bits(combo))
    return kernel


def matvec(m: Gf2Matrix, x: Gf2Vector) -> Gf2Vector:
    """m @ x where x is a vector over column indices."""
    bits = 0
    xb = x.bits
    while xb:
        lsb = xb & -xb
        bits ^= m.columns[lsb.bit_length() - 1].bits
        xb ^= lsb
    return Gf2Vector.from_bits(bits)
