"""Binary linear codes with the operations the classification pipeline needs.

A LinearCode stores its generator matrix in reduced row echelon form, so two
equal codes on the same coordinates compare equal.  Weight enumeration uses
a meet-in-the-middle split vectorized with numpy: all codewords are XOR
combinations of two half-bases, and popcounts run on uint64 arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceededError, ParseError, ValidationError
from .gf2 import (
    GF2Matrix,
    bits_to_string,
    dot,
    lex_value,
    row_reduce,
    string_to_bits,
)

ENUM_BUDGET_LOG2 = 26

_U64 = np.uint64


def _xor_combos(rows: Sequence[int]) -> np.ndarray:
    """All 2^k XOR combinations of the given rows as a uint64 array."""
    arr = np.zeros(1, dtype=_U64)
    for r in rows:
        arr = np.concatenate([arr, arr ^ _U64(r)])
    return arr


def _weight_histogram(rows: Sequence[int], n: int) -> np.ndarray:
    """Exact codeword weight counts, index w -> number of words of weight w."""
    k = len(rows)
    lows = _xor_combos(rows[: k // 2])
    highs = _xor_combos(rows[k // 2 :])
    counts = np.zeros(n + 1, dtype=np.int64)
    chunk = max(1, (1 << 22) // len(lows))
    for start in range(0, len(highs), chunk):
        grid = lows[None, :] ^ highs[start : start + chunk, None]
        w = np.bitwise_count(grid)
        counts += np.bincount(w.ravel(), minlength=n + 1)[: n + 1]
    return counts


def _words_of_weight(rows: Sequence[int], w: int) -> list[int]:
    """All codewords of exactly weight w, ascending as integers."""
    k = len(rows)
    lows = _xor_combos(rows[: k // 2])
    highs = _xor_combos(rows[k // 2 :])
    found: list[int] = []
    chunk = max(1, (1 << 22) // len(lows))
    for start in range(0, len(highs), chunk):
        grid = lows[None, :] ^ highs[start : start + chunk, None]
        hit = np.bitwise_count(grid) == w
        if hit.any():
            found.extend(int(x) for x in grid[hit])
    found.sort()
    return found


def _check_budget(k: int, budget_log2: int) -> None:
    if k > budget_log2:
        raise BudgetExceededError(
            f"enumeration over 2^{k} codewords exceeds the 2^{budget_log2} budget"
        )


def extremal_bound(n: int) -> int:
    """Largest minimum weight a self-dual code of length n can attain."""
    return 4 * (n // 24) + (6 if n % 24 == 22 else 4)


def delete_coords(v: int, coords: Sequence[int], n: int) -> int:
    """Remove the given coordinates from v, compressing the rest in order."""
    out = 0
    j = 0
    dropped = set(coords)
    for i in range(n):
        if i in dropped:
            continue
        out |= ((v >> i) & 1) << j
        j += 1
    return out


class LinearCode:
    """A binary [n, k] linear code with a canonical RREF generator matrix."""

    __slots__ = ("n", "k", "rows", "_cache")

    def __init__(self, n: int, rows: Iterable[int]):
        if n <= 0:
            raise ValidationError("code length must be positive")
        reduced, _ = row_reduce(list(rows))
        for r in reduced:
            if r >> n:
                raise ValidationError("generator row exceeds the code length")
        self.n = n
        self.k = len(reduced)
        self.rows = tuple(reduced)
        self._cache: dict = {}

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> "LinearCode":
        m = GF2Matrix.from_strings(lines)
        return cls(m.n, m.rows)

    @classmethod
    def from_gm(cls, text: str, allow_rank_deficient: bool = False) -> "LinearCode":
        """Parse the plain generator-matrix format: 'n k' then k rows of 0/1."""
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ParseError("empty generator matrix file")
        header = lines[0].split()
        if len(header) != 2:
            raise ParseError("header must be 'n k'")
        try:
            n, k = int(header[0]), int(header[1])
        except ValueError as exc:
            raise ParseError("header must contain two integers") from exc
        if n <= 0 or k < 0:
            raise ParseError("invalid dimensions in header")
        body = lines[1:]
        if len(body) != k:
            raise ParseError(f"expected {k} rows, found {len(body)}")
        rows = []
        for ln in body:
            if len(ln) != n or set(ln) - {"0", "1"}:
                raise ParseError(f"row {ln!r} is not {n} bits")
            rows.append(string_to_bits(ln))
        code = cls(n, rows)
        if code.k != k and not allow_rank_deficient:
            raise ValidationError(
                f"generator matrix has rank {code.k}, not {k}; "
                "pass allow_rank_deficient to accept"
            )
        return code

    def gm(self) -> str:
        """Serialize in the same 'n k' + rows format."""
        lines = [f"{self.n} {self.k}"]
        lines.extend(bits_to_string(r, self.n) for r in self.rows)
        return "\n".join(lines) + "\n"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinearCode)
            and self.n == other.n
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        return f"LinearCode(n={self.n}, k={self.k})"

    def contains(self, v: int) -> bool:
        for row in self.rows:
            p = (row & -row).bit_length() - 1
            if (v >> p) & 1:
                v ^= row
        return v == 0

    def words(self, budget_log2: int = 20) -> list[int]:
        """Every codeword as an int; guarded for small dimensions only."""
        _check_budget(self.k, budget_log2)
        arr = _xor_combos(self.rows)
        return [int(x) for x in arr]

    def permute(self, images: Sequence[int]) -> "LinearCode":
        """Relabel coordinates: coordinate i moves to images[i]."""
        if sorted(images) != list(range(self.n)):
            raise ValidationError("not a permutation of the coordinates")
        new_rows = []
        for r in self.rows:
            v = 0
            while r:
                low = r & -r
                v |= 1 << images[low.bit_length() - 1]
                r ^= low
            new_rows.append(v)
        return LinearCode(self.n, new_rows)

    # -- duality ---------------------------------------------------------

    def dual(self) -> "LinearCode":
        if "dual" not in self._cache:
            ker = GF2Matrix(self.n, self.rows).kernel()
            self._cache["dual"] = LinearCode(self.n, ker.rows)
        return self._cache["dual"]

    def is_self_orthogonal(self) -> bool:
        rows = self.rows
        return all(
            dot(rows[i], rows[j]) == 0
            for i in range(len(rows))
            for j in range(i, len(rows))
        )

    def is_self_dual(self) -> bool:
        return 2 * self.k == self.n and self.is_self_orthogonal()

    def is_doubly_even(self) -> bool:
        """True when every codeword weight is divisible by 4.

        For a self-orthogonal code this reduces to a basis check; otherwise
        fall back to scanning codewords until a violation appears.
        """
        if any(r.bit_count() % 4 for r in self.rows):
            return False
        if self.is_self_orthogonal():
            return True
        _check_budget(self.k, ENUM_BUDGET_LOG2)
        hist = self.weight_distribution()
        return all(hist[w] == 0 for w in range(self.n + 1) if w % 4)

    # -- weight data -----------------------------------------------------

    def weight_distribution(self, budget_log2: int = ENUM_BUDGET_LOG2) -> tuple[int, ...]:
        if "weights" not in self._cache:
            _check_budget(self.k, budget_log2)
            hist = _weight_histogram(self.rows, self.n)
            self._cache["weights"] = tuple(int(c) for c in hist)
        return self._cache["weights"]

    def min_weight(self, budget_log2: int = ENUM_BUDGET_LOG2) -> int:
        """Smallest nonzero codeword weight; n+1 for the zero code."""
        if self.k == 0:
            return self.n + 1
        if "weights" in self._cache:
            hist = self._cache["weights"]
            return next(w for w in range(1, self.n + 1) if hist[w])
        if "min_weight" not in self._cache:
            _check_budget(self.k, budget_log2)
            lows = _xor_combos(self.rows[: self.k // 2])
            highs = _xor_combos(self.rows[self.k // 2 :])
            best = self.n + 1
            chunk = max(1, (1 << 22) // len(lows))
            for start in range(0, len(highs), chunk):
                grid = lows[None, :] ^ highs[start : start + chunk, None]
                w = np.bitwise_count(grid)
                nz = w[grid != 0]
                if nz.size:
                    best = min(best, int(nz.min()))
            self._cache["min_weight"] = best
        return self._cache["min_weight"]

    def words_of_weight(self, w: int, budget_log2: int = ENUM_BUDGET_LOG2) -> list[int]:
        key = ("wow", w)
        if key not in self._cache:
            _check_budget(self.k, budget_log2)
            self._cache[key] = _words_of_weight(self.rows, w)
        return list(self._cache[key])

    def a4(self) -> int:
        return self.weight_distribution()[4] if self.n >= 4 else 0

    def is_extremal(self) -> bool:
        return self.min_weight() == extremal_bound(self.n)

    # -- derived codes ---------------------------------------------------

    def puncture(self, coords: Sequence[int]) -> "LinearCode":
        """Delete the given coordinates from every codeword."""
        coords = sorted(set(coords))
        if any(c < 0 or c >= self.n for c in coords):
            raise ValidationError("puncture coordinate out of range")
        if len(coords) >= self.n:
            raise ValidationError("cannot puncture away every coordinate")
        rows = [delete_coords(r, coords, self.n) for r in self.rows]
        return LinearCode(self.n - len(coords), rows)

    def shorten(self, coords: Sequence[int]) -> "LinearCode":
        """Keep codewords vanishing on the given coordinates, then delete them."""
        coords = sorted(set(coords))
        if any(c < 0 or c >= self.n for c in coords):
            raise ValidationError("shorten coordinate out of range")
        if len(coords) >= self.n:
            raise ValidationError("cannot shorten away every coordinate")
        rows = list(self.rows)
        for i in coords:
            odd = [r for r in rows if (r >> i) & 1]
            even = [r for r in rows if not (r >> i) & 1]
            if odd:
                pivot = odd[0]
                even.extend(r ^ pivot for r in odd[1:])
            rows = even
        rows = [delete_coords(r, coords, self.n) for r in rows]
        return LinearCode(self.n - len(coords), rows)

    def subtract(self, i: int, j: int) -> "LinearCode":
        """Keep codewords agreeing at coordinates i and j, then delete both."""
        if i == j:
            raise ValidationError("subtraction needs two distinct coordinates")
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise ValidationError("subtraction coordinate out of range")
        mask_i, mask_j = 1 << i, 1 << j
        rows = list(self.rows)
        odd = [r for r in rows if bool(r & mask_i) != bool(r & mask_j)]
        even = [r for r in rows if bool(r & mask_i) == bool(r & mask_j)]
        if odd:
            pivot = odd[0]
            even.extend(r ^ pivot for r in odd[1:])
        rows = [delete_coords(r, (i, j), self.n) for r in even]
        return LinearCode(self.n - 2, rows)

    def direct_sum(self, other: "LinearCode") -> "LinearCode":
        rows = list(self.rows)
        rows.extend(r << self.n for r in other.rows)
        return LinearCode(self.n + other.n, rows)

    # -- shadow ----------------------------------------------------------

    def doubly_even_subcode(self) -> tuple["LinearCode", int | None]:
        """The weight mod 4 kernel and one representative outside it.

        For a self-orthogonal code with even weights, wt/2 mod 2 is linear,
        so the doubly even part has codimension 0 or 1.  Returns the subcode
        and a codeword of weight 2 mod 4, or None when all weights are 0 mod 4.
        """
        phi = [(r.bit_count() // 2) & 1 for r in self.rows]
        if not any(phi):
            return self, None
        first = phi.index(1)
        pivot = self.rows[first]
        sub = [
            r if not phi[idx] else r ^ pivot
            for idx, r in enumerate(self.rows)
            if idx != first
        ]
        return LinearCode(self.n, sub), pivot

    def shadow(self) -> "ShadowDecomposition":
        return shadow_decomposition(self)


@dataclass(frozen=True)
class ShadowDecomposition:
    """Partition of the dual of the doubly even subcode into four cosets.

    c0 is the doubly even subcode of a singly even self-dual code C, and the
    cosets c0 + rep2 (inside C), c0 + rep1, c0 + rep3 (the shadow) exhaust
    the dual of c0.  rep1 labels the shadow coset whose minimum-weight
    vector is lexicographically least.
    """

    c0: LinearCode
    rep2: int
    rep1: int
    rep3: int
    shadow_weights: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.c0.n


def _coset_weight_stats(sub_rows: Sequence[int], rep: int, n: int):
    """(weight histogram, lexicographically least minimum-weight vector)."""
    k = len(sub_rows)
    lows = _xor_combos(sub_rows[: k // 2])
    highs = _xor_combos(sub_rows[k // 2 :]) ^ _U64(rep)
    hist = np.zeros(n + 1, dtype=np.int64)
    best_w = n + 1
    best_words: list[int] = []
    chunk = max(1, (1 << 22) // len(lows))
    for start in range(0, len(highs), chunk):
        grid = lows[None, :] ^ highs[start : start + chunk, None]
        w = np.bitwise_count(grid)
        hist += np.bincount(w.ravel(), minlength=n + 1)[: n + 1]
        w_min = int(w.min())
        if w_min <= best_w:
            if w_min < best_w:
                best_w = w_min
                best_words = []
            best_words.extend(int(x) for x in grid[w == w_min])
    leader = min(best_words, key=lambda v: lex_value(v, n))
    return hist, leader


def shadow_decomposition(code: LinearCode) -> ShadowDecomposition:
    """Shadow of a singly even self-dual code.

    The doubly even subcode c0 has codimension 1; its dual splits into c0,
    the nontrivial coset of c0 in C, and the two shadow cosets.
    """
    if not code.is_self_dual():
        raise ValidationError("shadow needs a self-dual code")
    c0, rep2 = code.doubly_even_subcode()
    if rep2 is None:
        raise ValidationError("shadow of a doubly even code is the code itself")
    c0_dual = c0.dual()
    t = next(r for r in c0_dual.rows if not code.contains(r))
    # The two shadow cosets are t + c0 and t + rep2 + c0.
    hist_a, leader_a = _coset_weight_stats(c0.rows, t, code.n)
    hist_b, leader_b = _coset_weight_stats(c0.rows, t ^ rep2, code.n)
    n = code.n
    key_a = (leader_a.bit_count(), lex_value(leader_a, n))
    key_b = (leader_b.bit_count(), lex_value(leader_b, n))
    if key_a <= key_b:
        rep1, rep3 = t, t ^ rep2
    else:
        rep1, rep3 = t ^ rep2, t
    shadow_weights = tuple(int(x) for x in (hist_a + hist_b))
    return ShadowDecomposition(c0, rep2, rep1, rep3, shadow_weights)


# -- module-level wrappers and named codes ------------------------------


def dual(code: LinearCode) -> LinearCode:
    return code.dual()


def weight_distribution(code: LinearCode) -> tuple[int, ...]:
    return code.weight_distribution()


def min_weight(code: LinearCode) -> int:
    return code.min_weight()


def subtract(code: LinearCode, i: int, j: int) -> LinearCode:
    return code.subtract(i, j)


def direct_sum(a: LinearCode, b: LinearCode) -> LinearCode:
    return a.direct_sum(b)


def repetition_pair() -> LinearCode:
    """The [2, 1] repetition code {00, 11}."""
    return LinearCode(2, [0b11])


def repetition_blocks(m: int) -> LinearCode:
    """Direct sum of m repetition pairs, the standard singly even filler."""
    if m <= 0:
        raise ValidationError("need at least one block")
    return LinearCode(2 * m, [0b11 << (2 * i) for i in range(m)])


def extended_hamming_code() -> LinearCode:
    """The [8, 4, 4] extended Hamming code, first-order Reed-Muller basis."""
    return LinearCode.from_strings(
        [
            "11111111",
            "01010101",
            "00110011",
            "00001111",
        ]
    )


def extended_hamming_power(m: int) -> LinearCode:
    code = extended_hamming_code()
    out = code
    for _ in range(m - 1):
        out = out.direct_sum(code)
    return out


_GOLAY_POLY = 0b110001110101  # x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1


def extended_golay_code() -> LinearCode:
    """The [24, 12, 8] extended Golay code via the length-23 cyclic code."""
    rows = []
    for i in range(12):
        r = _GOLAY_POLY << i
        if r.bit_count() & 1:
            r |= 1 << 23
        rows.append(r)
    return LinearCode(24, rows)
