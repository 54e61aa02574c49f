"""Constructions that produce self-dual codes from other codes.

Three engines feed the classifier:

 * the two-coordinate lift of a singly even self-dual code, built from its
   shadow decomposition, together with its inverse, subtraction of a
   coordinate pair;
 * the neighbor step, which walks from a doubly even self-dual code to
   every doubly even self-dual code meeting it in a hyperplane that
   contains the all-ones vector;
 * gluing a pair of shorter self-orthogonal components along an isometry
   of their dual quotient spaces, with inequivalent gluings indexed by
   double cosets of the induced automorphism actions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .codes import LinearCode, extremal_bound
from .equiv import automorphism_group, canonical_form
from .errors import ValidationError
from .gf2 import row_reduce, solve
from .perms import Permutation
from .quadspace import (
    QuotientSpace,
    double_coset_reps,
    find_isometry,
    isometry_group_gens,
    mat_apply,
    mat_inverse,
    mat_mul,
)


def _lowbit(v: int) -> int:
    return (v & -v).bit_length() - 1


# -- lift and subtraction -----------------------------------------------


def bp_lift(code: LinearCode) -> LinearCode:
    """Two-coordinate doubly even lift of a singly even self-dual code.

    For self-dual C of length n = 6 mod 8, split the dual of the doubly
    even subcode C0 into cosets C0, C2 (the rest of C) and the two shadow
    cosets C1, C3; then C0 00 + C2 11 + C1 10 + C3 01 is doubly even
    self-dual of length n + 2.  Swapping the roles of C1 and C3 just swaps
    the two new coordinates, so one labeling suffices; the shadow
    decomposition picks C1 deterministically.
    """
    if code.n % 8 != 6:
        raise ValidationError("lift needs length 6 mod 8")
    if not code.is_self_dual():
        raise ValidationError("lift needs a self-dual code")
    sd = code.shadow()
    n = code.n
    rows = list(sd.c0.rows)
    rows.append(sd.rep2 | (1 << n) | (1 << (n + 1)))
    rows.append(sd.rep1 | (1 << n))
    out = LinearCode(n + 2, rows)
    if not (out.is_self_dual() and out.is_doubly_even()):
        raise AssertionError("lift failed to produce a doubly even self-dual code")
    return out


def extremal_pair_filter(code: LinearCode) -> list[tuple[int, int]]:
    """Pairs (i, j) whose subtraction meets the length n-2 extremal bound.

    Subtracting (i, j) keeps the words agreeing on i and j and deletes the
    two coordinates, so a word of weight w maps to weight w or w - 2.  The
    pair survives iff no nonzero word of weight below bound(n-2) avoids
    both coordinates and none of weight below bound(n-2) + 2 covers both.
    """
    n = code.n
    bound = extremal_bound(n - 2)
    bad = [[False] * n for _ in range(n)]
    for w in range(4, bound + 2, 4):
        for word in code.words_of_weight(w):
            supp = [i for i in range(n) if (word >> i) & 1]
            if w < bound + 2:
                for a in range(len(supp)):
                    for b in range(a + 1, len(supp)):
                        bad[supp[a]][supp[b]] = True
            if w < bound:
                comp = [i for i in range(n) if not (word >> i) & 1]
                for a in range(len(comp)):
                    for b in range(a + 1, len(comp)):
                        bad[comp[a]][comp[b]] = True
    return [
        (i, j) for i in range(n) for j in range(i + 1, n) if not bad[i][j]
    ]


def subtraction_candidates(code: LinearCode) -> list[tuple[int, int]]:
    """Coordinate pairs whose subtraction leaves an extremal code.

    Only codes with at most one weight-4 word are supported; with more,
    no pair can dodge them all.  Each surviving pair is double-checked by
    actually subtracting and recomputing the minimum weight.
    """
    if not code.is_self_dual() or not code.is_doubly_even():
        raise ValidationError("subtraction needs a doubly even self-dual code")
    if code.a4() > 1:
        raise ValidationError(
            "subtraction to an extremal code needs at most one weight-4 word"
        )
    bound = extremal_bound(code.n - 2)
    pairs = extremal_pair_filter(code)
    for i, j in pairs:
        if code.subtract(i, j).min_weight() != bound:
            raise AssertionError(
                f"pair ({i}, {j}) passed the filter but is not extremal"
            )
    return pairs


# -- neighbors ----------------------------------------------------------


def _ones_coefficients(code: LinearCode) -> int:
    ones = (1 << code.n) - 1
    pivots = [_lowbit(r) for r in code.rows]
    mask = solve(code.rows, pivots, ones)
    if mask is None:
        raise ValidationError("code does not contain the all-ones vector")
    return mask


def functional_masks(code: LinearCode) -> list[int]:
    """Nonzero functionals on the basis vanishing on the all-ones vector.

    Each mask phi defines the hyperplane of codewords whose phi-weighted
    coefficient parity is zero; requiring phi(1) = 0 keeps 1 inside it.
    """
    k = code.k
    s1 = _ones_coefficients(code)
    i0 = _lowbit(s1)
    free = [i for i in range(k) if i != i0]
    out = []
    for m in range(1, 1 << (k - 1)):
        phi = 0
        mm = m
        for pos in free:
            if mm & 1:
                phi |= 1 << pos
            mm >>= 1
            if not mm:
                break
        if (phi & s1).bit_count() & 1:
            phi |= 1 << i0
        out.append(phi)
    out.sort()
    return out


def neighbor(code: LinearCode, phi: int) -> LinearCode:
    """The doubly even self-dual neighbor through the hyperplane of phi.

    The dual of the hyperplane B adds one vector w with w.r_i = phi_i,
    read off the echelon pivots; of the two cosets extending B exactly one
    is doubly even, decided by wt(w) mod 4.
    """
    if phi <= 0 or phi >> code.k:
        raise ValidationError("functional out of range")
    if not code.is_self_dual() or not code.is_doubly_even():
        raise ValidationError("neighbor step needs a doubly even self-dual code")
    if (phi & _ones_coefficients(code)).bit_count() & 1:
        raise ValidationError("functional does not vanish on the all-ones vector")
    rows = code.rows
    pivots = [_lowbit(r) for r in rows]
    w = 0
    for i in range(code.k):
        if (phi >> i) & 1:
            w |= 1 << pivots[i]
    first = _lowbit(phi)
    if w.bit_count() % 4:
        w ^= rows[first]
    if w.bit_count() % 4:
        raise AssertionError("no doubly even coset representative")
    hyper = [
        r if not (phi >> i) & 1 else r ^ rows[first]
        for i, r in enumerate(rows)
        if i != first
    ]
    return LinearCode(code.n, hyper + [w])


def neighbor_step(code: LinearCode) -> list[LinearCode]:
    """Every doubly even self-dual neighbor along 1-containing hyperplanes."""
    return [neighbor(code, phi) for phi in functional_masks(code)]


def _functional_action_table(code: LinearCode, images) -> list[int]:
    """Table of phi -> phi o pi over all 2^k functionals."""
    k = code.k
    rows = code.rows
    pivots = [_lowbit(r) for r in rows]
    perm = Permutation(tuple(images))
    mat = []
    for r in rows:
        mapped = perm.apply_bits(r)
        coeffs = solve(rows, pivots, mapped)
        if coeffs is None:
            raise ValidationError("permutation does not preserve the code")
        mat.append(coeffs)
    cols = []
    for i in range(k):
        col = 0
        for j in range(k):
            col |= ((mat[j] >> i) & 1) << j
        cols.append(col)
    table = [0] * (1 << k)
    for phi in range(1, 1 << k):
        low = phi & -phi
        table[phi] = table[phi ^ low] ^ cols[low.bit_length() - 1]
    return table


def neighbor_functional_orbits(code: LinearCode) -> list[int]:
    """Functional masks up to the automorphism action of the code.

    Automorphic functionals give equivalent neighbors, so one orbit
    representative per orbit is enough for classification.
    """
    masks = functional_masks(code)
    gens = automorphism_group(code).generators
    if not gens:
        return masks
    tables = [_functional_action_table(code, g.images) for g in gens]
    visited = bytearray(1 << code.k)
    reps = []
    for phi in masks:
        if visited[phi]:
            continue
        reps.append(phi)
        stack = [phi]
        visited[phi] = 1
        while stack:
            cur = stack.pop()
            for t in tables:
                img = t[cur]
                if not visited[img]:
                    visited[img] = 1
                    stack.append(img)
    return reps


# -- decomposition and gluing -------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """Components of a code split along the support of one codeword."""

    c1: LinearCode
    c2: LinearCode
    support: tuple[int, ...]


def decompose_at(code: LinearCode, x: int) -> Decomposition:
    """Split a code along a codeword: words inside the support and outside.

    c1 lives on the support coordinates, c2 on the complement; both contain
    their local all-ones vector (x and 1 + x restricted), so both carry
    quadratic quotient spaces and the code is a gluing of the two.
    """
    if not code.contains(x):
        raise ValidationError("decomposition point is not a codeword")
    if x == 0 or x == (1 << code.n) - 1:
        raise ValidationError("decomposition point must be a proper codeword")
    supp = tuple(i for i in range(code.n) if (x >> i) & 1)
    comp = tuple(i for i in range(code.n) if not (x >> i) & 1)
    c1 = code.shorten(comp)
    c2 = code.shorten(supp)
    return Decomposition(c1, c2, supp)


def glue(c1: LinearCode, c2: LinearCode, f) -> LinearCode:
    """Glue two self-orthogonal components along a quotient isometry.

    The result contains c1 + c2 plus one glue row per quotient basis
    vector, pairing a coset representative with the representative of its
    image under f.  The glue map must be an isometry for the output to be
    doubly even self-dual; that is validated on the result.
    """
    v1 = QuotientSpace(c1)
    v2 = QuotientSpace(c2)
    if v1.k != v2.k:
        raise ValidationError("component quotient dimensions differ")
    if len(f) != v1.k:
        raise ValidationError("glue map has the wrong dimension")
    rows = list(c1.rows)
    rows.extend(r << c1.n for r in c2.rows)
    for i in range(v1.k):
        u1 = v1.rep(1 << i)
        u2 = v2.rep(mat_apply(f, 1 << i))
        rows.append(u1 | (u2 << c1.n))
    out = LinearCode(c1.n + c2.n, rows)
    if out.k != c1.k + c2.k + v1.k:
        raise ValidationError("glue map is not injective")
    if not (out.is_self_dual() and out.is_doubly_even()):
        raise ValidationError("glue map is not an isometry")
    return out


def glue_family(
    c1: LinearCode, c2: LinearCode, budget: int = 300000
) -> list[LinearCode]:
    """All inequivalent gluings of two components, up to induced symmetry.

    Gluings along f and g2 f g1 are equivalent when g1, g2 are induced by
    automorphisms of the components, so double coset representatives of the
    induced subgroups inside the full isometry group enumerate a complete
    and usually duplicate-light family.
    """
    v1 = QuotientSpace(c1)
    v2 = QuotientSpace(c2)
    f0 = find_isometry(v1, v2)
    if f0 is None:
        return []
    if v1.k == 0:
        return [glue(c1, c2, ())]
    g1 = [
        v1.induced_isometry(g.images)
        for g in automorphism_group(c1).generators
    ]
    g2 = [
        v2.induced_isometry(g.images)
        for g in automorphism_group(c2).generators
    ]
    f0_inv = mat_inverse(f0)
    left = [mat_mul(f0_inv, mat_mul(g, f0)) for g in g2]
    ambient = isometry_group_gens(v1)
    cosets = double_coset_reps(
        tuple(left), tuple(g1), ambient, dim=v1.k, budget=budget
    )
    return [glue(c1, c2, mat_mul(f0, h)) for h in cosets.reps]


def glue_map_of(code: LinearCode, dec: Decomposition):
    """The isometry a code induces between its own component quotients.

    Restriction to the support side is a surjection of the code onto
    the quotient space there, with kernel the direct sum of the two
    components, so pairing restriction coordinates on both sides yields a
    well-defined linear map; gluing along it reconstructs the code.
    """
    v1 = QuotientSpace(dec.c1)
    v2 = QuotientSpace(dec.c2)
    supp, n = dec.support, code.n
    comp = tuple(i for i in range(n) if i not in set(supp))
    k = v1.k

    def restrict(v, coords):
        out = 0
        for pos, c in enumerate(coords):
            if (v >> c) & 1:
                out |= 1 << pos
        return out

    combined = []
    for r in code.rows:
        low = v1.coords(restrict(r, supp))
        high = v2.coords(restrict(r, comp))
        combined.append(low | (high << k))
    reduced = row_reduce(combined)[0]
    rows_f = []
    for i in range(k):
        v = 1 << i
        img = 0
        for row in reduced:
            p = _lowbit(row)
            if p < k and (v >> p) & 1:
                v ^= row & ((1 << k) - 1)
                img ^= row >> k
        if v:
            raise AssertionError("restriction map is not surjective")
        rows_f.append(img)
    return tuple(rows_f)


def shortened_dim_profile(code: LinearCode, w: int = 8) -> tuple[int, ...]:
    """Sorted dimensions of the inside component over all weight-w words."""
    dims = []
    for x in code.words_of_weight(w):
        dims.append(decompose_at(code, x).c1.k)
    return tuple(sorted(dims))


# -- small component enumeration ----------------------------------------


@lru_cache(maxsize=None)
def _small_classes_level(n: int, dim: int) -> tuple[LinearCode, ...]:
    if dim == 1:
        return (LinearCode(n, [(1 << n) - 1]),)
    seen_exact: set = set()
    by_hash: dict[str, LinearCode] = {}
    for c in _small_classes_level(n, dim - 1):
        dual_words = c.dual().words()
        gens = automorphism_group(c).generators
        visited: set[int] = set()
        for v in dual_words:
            if v in visited or v == 0 or v.bit_count() % 4 or c.contains(v):
                continue
            orbit = [v]
            visited.add(v)
            while orbit:
                cur = orbit.pop()
                for g in gens:
                    img = g.apply_bits(cur)
                    if img not in visited:
                        visited.add(img)
                        orbit.append(img)
            ext = LinearCode(n, list(c.rows) + [v])
            if ext.rows in seen_exact:
                continue
            seen_exact.add(ext.rows)
            digest = canonical_form(ext).hash
            if digest not in by_hash:
                by_hash[digest] = ext
    return tuple(by_hash[h] for h in sorted(by_hash))


def small_self_orthogonal_classes(n: int, dim: int) -> list[LinearCode]:
    """Doubly even codes containing the all-ones vector, up to equivalence.

    Level-by-level extension: every dimension-d representative is a
    dimension d-1 representative plus one orthogonal doubly even vector,
    with candidates reduced to automorphism orbits and duplicates removed
    by canonical form.  The chain is complete because any such code has a
    codimension-1 subcode that still contains the all-ones vector.  Levels
    are cached, so requesting several dimensions shares the work.
    """
    if n % 4 != 0 or dim < 1 or dim > n // 2:
        return []
    return list(_small_classes_level(n, dim))
