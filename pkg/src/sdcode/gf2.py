"""Bit-packed linear algebra over GF(2).

Vectors are Python ints used as bitsets: bit i holds coordinate i, so
coordinate 0 is the least significant bit.  Arbitrary-precision ints play
the role of packed machine words; all arithmetic is XOR/AND plus popcount.
Coordinates are 0-indexed everywhere inside the library.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def popcount_and(a: int, b: int) -> int:
    """Weight of the coordinatewise AND of two vectors."""
    return (a & b).bit_count()


def dot(a: int, b: int) -> int:
    """Standard inner product over GF(2)."""
    return (a & b).bit_count() & 1


def vector_from_support(support: Iterable[int]) -> int:
    v = 0
    for i in support:
        v |= 1 << i
    return v


def support(v: int) -> list[int]:
    """Sorted list of coordinates where v is 1."""
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


def bits_to_string(v: int, n: int) -> str:
    """Render coordinates 0..n-1 left to right as a 0/1 string."""
    return "".join("1" if (v >> i) & 1 else "0" for i in range(n))


def string_to_bits(s: str) -> int:
    """Inverse of bits_to_string: leftmost character is coordinate 0."""
    v = 0
    for i, ch in enumerate(s):
        if ch == "1":
            v |= 1 << i
        elif ch != "0":
            raise ValueError(f"invalid bit character {ch!r}")
    return v


def lex_value(v: int, n: int) -> int:
    """Value of v read as a big-endian n-bit string.

    Comparing these values orders vectors lexicographically by their
    coordinate string with coordinate 0 most significant.
    """
    out = 0
    for i in range(n):
        out = (out << 1) | ((v >> i) & 1)
    return out


def row_reduce(rows: Sequence[int]) -> tuple[list[int], list[int]]:
    """Reduced row echelon form of a list of int rows.

    Pivots are chosen at the lowest set bit available, i.e. scanning
    coordinates left to right.  Returns (reduced nonzero rows sorted by
    pivot, pivot columns in the same order).
    """
    pivots: dict[int, int] = {}
    for row in rows:
        for p in sorted(pivots):
            if (row >> p) & 1:
                row ^= pivots[p]
        if row:
            p = (row & -row).bit_length() - 1
            for q, other in pivots.items():
                if (other >> p) & 1:
                    pivots[q] = other ^ row
            pivots[p] = row
    cols = sorted(pivots)
    return [pivots[p] for p in cols], cols


def in_span(rows: Sequence[int], v: int) -> bool:
    """Whether v lies in the row space.  rows need not be reduced."""
    red, cols = row_reduce(rows)
    for row, p in zip(red, cols):
        if (v >> p) & 1:
            v ^= row
    return v == 0


def solve(rows: Sequence[int], pivot_cols: Sequence[int], v: int) -> int | None:
    """Express v in a reduced basis; returns the coefficient mask or None.

    rows must come from row_reduce.  Bit j of the result is the coefficient
    of rows[j].
    """
    coeffs = 0
    for j, (row, p) in enumerate(zip(rows, pivot_cols)):
        if (v >> p) & 1:
            v ^= row
            coeffs |= 1 << j
    return coeffs if v == 0 else None


class BitVector:
    """A length-aware GF(2) vector backed by one int."""

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: int = 0):
        if n < 0:
            raise ValueError("length must be nonnegative")
        if bits >> n:
            raise ValueError("bits exceed the stated length")
        self.n = n
        self.bits = bits

    @classmethod
    def from_string(cls, s: str) -> "BitVector":
        return cls(len(s), string_to_bits(s))

    def weight(self) -> int:
        return self.bits.bit_count()

    def dot(self, other: "BitVector") -> int:
        self._check(other)
        return dot(self.bits, other.bits)

    def __xor__(self, other: "BitVector") -> "BitVector":
        self._check(other)
        return BitVector(self.n, self.bits ^ other.bits)

    def __and__(self, other: "BitVector") -> "BitVector":
        self._check(other)
        return BitVector(self.n, self.bits & other.bits)

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVector)
            and self.n == other.n
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.n, self.bits))

    def __str__(self) -> str:
        return bits_to_string(self.bits, self.n)

    def __repr__(self) -> str:
        return f"BitVector({self.n}, {str(self)!r})"

    def _check(self, other: "BitVector") -> None:
        if self.n != other.n:
            raise ValueError("length mismatch")


class GF2Matrix:
    """A list of equal-length bit rows over GF(2)."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: Iterable[int]):
        self.n = n
        self.rows = tuple(rows)
        for r in self.rows:
            if r >> n:
                raise ValueError("row exceeds the stated width")

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> "GF2Matrix":
        if not lines:
            raise ValueError("need at least one row")
        n = len(lines[0])
        if any(len(line) != n for line in lines):
            raise ValueError("ragged rows")
        return cls(n, [string_to_bits(line) for line in lines])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.n

    def rref(self) -> tuple["GF2Matrix", int, list[int]]:
        """Reduced row echelon form, rank, and pivot columns."""
        red, cols = row_reduce(self.rows)
        return GF2Matrix(self.n, red), len(red), cols

    def rank(self) -> int:
        return len(row_reduce(self.rows)[0])

    def kernel(self) -> "GF2Matrix":
        """Basis of the right null space, one row per free column."""
        red, pivot_cols = row_reduce(self.rows)
        pivot_set = set(pivot_cols)
        basis = []
        for free in range(self.n):
            if free in pivot_set:
                continue
            v = 1 << free
            for row, p in zip(red, pivot_cols):
                if (row >> free) & 1:
                    v |= 1 << p
            basis.append(v)
        return GF2Matrix(self.n, basis)

    def transpose_apply(self, v: int) -> int:
        """Syndrome map: bit j of the result is dot(rows[j], v)."""
        out = 0
        for j, row in enumerate(self.rows):
            out |= dot(row, v) << j
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GF2Matrix)
            and self.n == other.n
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        return f"GF2Matrix({self.n}, {len(self.rows)} rows)"

    def __str__(self) -> str:
        return "\n".join(bits_to_string(r, self.n) for r in self.rows)


def rref(m: GF2Matrix) -> tuple[GF2Matrix, int, list[int]]:
    return m.rref()


def kernel(m: GF2Matrix) -> GF2Matrix:
    return m.kernel()
