"""Quadratic spaces on dual quotients of doubly even codes.

For a doubly even self-orthogonal code C containing the all-ones vector,
the quotient V = Cperp/C carries the nondegenerate quadratic form
q(x + C) = wt(x)/2 mod 2 with polar form b(x, y) = x.y.  Self-dual
doubly even extensions of C correspond to maximal totally isotropic
subspaces, and gluings of two components are governed by isometries
between their quotient spaces.  This module standardizes such spaces into
hyperbolic plus at most one anisotropic plane, builds their full isometry
groups with orders verified against the closed formula, and enumerates
double cosets of induced subgroups, which index inequivalent gluings.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .codes import LinearCode
from .errors import BudgetExceededError, ValidationError
from .gf2 import GF2Matrix, popcount_and, row_reduce

MAX_QUOTIENT_DIM = 16


def _lowbit(v: int) -> int:
    return (v & -v).bit_length() - 1


# -- matrices over GF(2), rows = images of basis vectors ----------------


def mat_apply(rows: tuple, x: int) -> int:
    out = 0
    i = 0
    while x:
        if x & 1:
            out ^= rows[i]
        x >>= 1
        i += 1
    return out


def mat_mul(a: tuple, b: tuple) -> tuple:
    """Composition a after b."""
    return tuple(mat_apply(a, r) for r in b)


def mat_identity(k: int) -> tuple:
    return tuple(1 << i for i in range(k))


def mat_inverse(rows: tuple) -> tuple:
    k = len(rows)
    aug = [rows[i] | (1 << (k + i)) for i in range(k)]
    reduced = row_reduce(aug)[0]
    if len(reduced) != k or any(_lowbit(r) >= k for r in reduced):
        raise ValidationError("matrix is singular")
    out = [0] * k
    for r in reduced:
        out[_lowbit(r)] = r >> k
    return tuple(out)


def _mat_pack(rows: tuple, k: int) -> int:
    v = 0
    for i, r in enumerate(rows):
        v |= r << (i * k)
    return v


# -- quotient spaces ----------------------------------------------------


class QuotientSpace:
    """The space Cperp/C with q(x+C) = wt(x)/2 mod 2.

    Coset representatives come from the echelonized dual basis: the rows
    whose pivot is not a pivot of C span a complement of C in Cperp, and
    coordinates of any dual vector are read off at those pivots after
    reduction modulo C.
    """

    def __init__(self, code: LinearCode):
        if not code.is_self_orthogonal():
            raise ValidationError("quotient space needs a self-orthogonal code")
        if not code.is_doubly_even():
            raise ValidationError("quotient space needs a doubly even code")
        ones = (1 << code.n) - 1
        if not code.contains(ones):
            raise ValidationError(
                "quotient space needs the all-ones vector in the code"
            )
        self.code = code
        self.dual = code.dual()
        self.k = self.dual.k - code.k
        if self.k > MAX_QUOTIENT_DIM:
            raise BudgetExceededError(
                f"quotient dimension {self.k} exceeds the supported "
                f"{MAX_QUOTIENT_DIM}"
            )
        code_pivots = {_lowbit(r) for r in code.rows}
        self.qrows = tuple(
            r for r in self.dual.rows if _lowbit(r) not in code_pivots
        )
        if len(self.qrows) != self.k:
            raise AssertionError("quotient basis size mismatch")
        self.qpivots = tuple(_lowbit(r) for r in self.qrows)
        self._qtab: list[int] | None = None

    def rep(self, mask: int) -> int:
        """Canonical coset representative of a coordinate mask."""
        out = 0
        m = mask
        i = 0
        while m:
            if m & 1:
                out ^= self.qrows[i]
            m >>= 1
            i += 1
        return out

    def coords(self, v: int) -> int:
        """Quotient coordinates of a dual vector."""
        if any(popcount_and(v, d) & 1 for d in self.code.rows):
            raise ValidationError("vector is not in the dual of the code")
        reduced = v
        for c in self.code.rows:
            if (reduced >> _lowbit(c)) & 1:
                reduced ^= c
        mask = 0
        for i, p in enumerate(self.qpivots):
            if (reduced >> p) & 1:
                mask |= 1 << i
        return mask

    def q_table(self) -> list[int]:
        if self._qtab is None:
            self._qtab = [
                (bin(self.rep(x)).count("1") // 2) & 1 for x in range(1 << self.k)
            ]
        return self._qtab

    def q(self, mask: int) -> int:
        return self.q_table()[mask]

    def b(self, x: int, y: int) -> int:
        tab = self.q_table()
        return tab[x ^ y] ^ tab[x] ^ tab[y]

    def zero_count(self) -> int:
        return sum(1 for v in self.q_table() if v == 0)

    def type_tag(self) -> int:
        """+1 for hyperbolic (plus) type, -1 for minus type."""
        return standardize(self).eps

    def induced_isometry(self, images) -> tuple:
        """Isometry of the quotient induced by a code automorphism."""
        rows = []
        for i in range(self.k):
            v = self.rep(1 << i)
            pv = 0
            m = v
            while m:
                low = m & -m
                pv |= 1 << images[low.bit_length() - 1]
                m ^= low
            rows.append(self.coords(pv))
        return tuple(rows)


@dataclass(frozen=True)
class Standardization:
    """Symplectic-style basis for a quotient space.

    basis lists coordinate masks e1, f1, e2, f2, ...; all pairs are
    hyperbolic (q = 0 on both members) except, in minus type, the last
    pair which is anisotropic (q = 1 on both members).  eps is +1 or -1.
    """

    basis: tuple[int, ...]
    eps: int

    @property
    def matrix(self) -> tuple:
        """Rows = standard basis vectors written in space coordinates."""
        return self.basis


def standardize(space: QuotientSpace) -> Standardization:
    if getattr(space, "_std", None) is not None:
        return space._std
    k = space.k
    if k % 2 != 0:
        raise ValidationError("quotient dimension must be even")
    tab = space.q_table()

    def b(x, y):
        return tab[x ^ y] ^ tab[x] ^ tab[y]

    remaining = [1 << i for i in range(k)]
    pairs: list[tuple[int, int]] = []
    eps = 1
    while remaining:
        combos = []
        for m in range(1, 1 << len(remaining)):
            v = 0
            mm = m
            i = 0
            while mm:
                if mm & 1:
                    v ^= remaining[i]
                mm >>= 1
                i += 1
            combos.append(v)
        x = next((v for v in combos if tab[v] == 0), None)
        if x is None:
            if len(remaining) != 2:
                raise AssertionError("anisotropic part larger than a plane")
            u = combos[0]
            v = next(w for w in combos if b(u, w) == 1)
            pairs.append((u, v))
            eps = -1
            break
        y = next(w for w in combos if b(x, w) == 1)
        if tab[y] == 1:
            y ^= x
        pairs.append((x, y))
        gram_rows = [0, 0]
        for i, r in enumerate(remaining):
            if b(r, x):
                gram_rows[0] |= 1 << i
            if b(r, y):
                gram_rows[1] |= 1 << i
        kernel_masks = GF2Matrix(len(remaining), gram_rows).kernel().rows
        new_remaining = []
        for km in kernel_masks:
            v = 0
            mm = km
            i = 0
            while mm:
                if mm & 1:
                    v ^= remaining[i]
                mm >>= 1
                i += 1
            new_remaining.append(v)
        remaining = [v for v in row_reduce(new_remaining)[0]]
    basis = tuple(v for pair in pairs for v in pair)
    zeros = space.zero_count()
    expected = (1 << (k - 1)) + eps * (1 << (k // 2 - 1)) if k else 1
    if zeros != expected:
        raise AssertionError(
            f"type from decomposition ({eps}) disagrees with zero count "
            f"{zeros} (expected {expected})"
        )
    m = k // 2
    for i in range(m):
        e, f = basis[2 * i], basis[2 * i + 1]
        want = 1 if (eps == -1 and i == m - 1) else 0
        if tab[e] != want or tab[f] != want or b(e, f) != 1:
            raise AssertionError("standard basis relations violated")
        for j in range(i):
            e2, f2 = basis[2 * j], basis[2 * j + 1]
            if b(e, e2) or b(e, f2) or b(f, e2) or b(f, f2):
                raise AssertionError("standard basis pairs not orthogonal")
    std = Standardization(basis, eps)
    space._std = std
    return std


# -- standard-form orthogonal groups ------------------------------------


def orthogonal_group_order(k: int, eps: int) -> int:
    """|O^eps_k(2)| for even k, from the closed product formula."""
    if k % 2 != 0 or k < 0:
        raise ValidationError("orthogonal group dimension must be even")
    if k == 0:
        return 1
    m = k // 2
    out = 2 ** (m * (m - 1) + 1) * (2**m - eps)
    for i in range(1, m):
        out *= 4**i - 1
    return out


def _std_q_table(k: int, eps: int) -> list[int]:
    m = k // 2
    tab = []
    for x in range(1 << k):
        val = 0
        for i in range(m):
            a = (x >> (2 * i)) & 1
            b = (x >> (2 * i + 1)) & 1
            if eps == -1 and i == m - 1:
                val ^= a ^ b ^ (a & b)
            else:
                val ^= a & b
        tab.append(val)
    return tab


@lru_cache(maxsize=None)
def _std_orthogonal_group(k: int, eps: int) -> tuple:
    """(generators, sorted packed elements, q table) for O^eps_k(2).

    Generators are the orthogonal transvections plus basis-pair swaps; the
    closure is verified against the order formula, so wrong or missing
    generators cannot pass silently.
    """
    if k == 0:
        return ((), (0,), [0])
    tab = _std_q_table(k, eps)

    def b(x, y):
        return tab[x ^ y] ^ tab[x] ^ tab[y]

    gens: list[tuple] = []
    for u in range(1, 1 << k):
        if tab[u] == 1:
            gens.append(
                tuple((1 << i) ^ (u if b(1 << i, u) else 0) for i in range(k))
            )
    m = k // 2
    hyper = m - 1 if eps == -1 else m
    for i in range(hyper):
        swap = list(mat_identity(k))
        swap[2 * i], swap[2 * i + 1] = swap[2 * i + 1], swap[2 * i]
        gens.append(tuple(swap))
    for i in range(hyper - 1):
        cyc = list(mat_identity(k))
        cyc[2 * i], cyc[2 * i + 2] = cyc[2 * i + 2], cyc[2 * i]
        cyc[2 * i + 1], cyc[2 * i + 3] = cyc[2 * i + 3], cyc[2 * i + 1]
        gens.append(tuple(cyc))
    gens = sorted(set(gens) - {mat_identity(k)})

    order = orthogonal_group_order(k, eps)
    tables = [[mat_apply(g, x) for x in range(1 << k)] for g in gens]
    ident = mat_identity(k)
    seen = {_mat_pack(ident, k)}
    elems = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for mat in frontier:
            for t in tables:
                new = tuple(t[r] for r in mat)
                key = _mat_pack(new, k)
                if key not in seen:
                    seen.add(key)
                    elems.append(new)
                    nxt.append(new)
        frontier = nxt
        if len(seen) > order:
            raise AssertionError("orthogonal closure exceeded the order formula")
    if len(seen) != order:
        raise AssertionError(
            f"orthogonal closure has {len(seen)} elements, formula says {order}"
        )
    for g in gens:
        for x in range(1 << k):
            if tab[mat_apply(g, x)] != tab[x]:
                raise AssertionError("generator does not preserve the form")
    elems.sort(key=lambda rows: _mat_pack(rows, k))
    return (tuple(gens), tuple(elems), tab)


def isometry_group_gens(space: QuotientSpace) -> tuple[tuple, ...]:
    """Generators of the full isometry group of the space, verified."""
    std = standardize(space)
    gens_std, _, _ = _std_orthogonal_group(space.k, std.eps)
    s = std.matrix
    s_inv = mat_inverse(s)
    out = []
    for g in gens_std:
        out.append(mat_mul(s, mat_mul(g, s_inv)))
    return tuple(out)


def isometry_group_order(space: QuotientSpace) -> int:
    return orthogonal_group_order(space.k, standardize(space).eps)


def find_isometry(a: QuotientSpace, b: QuotientSpace):
    """A q-preserving linear bijection between two spaces, or None."""
    if a.k != b.k:
        return None
    sa, sb = standardize(a), standardize(b)
    if sa.eps != sb.eps:
        return None
    if a.k == 0:
        return ()
    t = mat_mul(sb.matrix, mat_inverse(sa.matrix))
    ta, tb = a.q_table(), b.q_table()
    for x in range(1 << a.k):
        if tb[mat_apply(t, x)] != ta[x]:
            raise AssertionError("composed standardizations are not an isometry")
    return t


# -- double cosets ------------------------------------------------------


@dataclass(frozen=True)
class DoubleCosets:
    """Left\\Ambient/Right decomposition with per-coset sizes.

    Iterating yields the representatives, so the object doubles as the
    plain representative list most callers want.
    """

    reps: tuple[tuple, ...]
    sizes: tuple[int, ...]
    group_order: int

    def __iter__(self):
        return iter(self.reps)

    def __len__(self) -> int:
        return len(self.reps)

    def __getitem__(self, i):
        return self.reps[i]


_closure_cache: dict = {}


def group_closure(gens, dim: int, budget: int = 100_000_000) -> tuple:
    """All elements generated by invertible matrices, breadth-first.

    The result is cached per generator set since glue enumeration asks for
    the same ambient group once per component pairing.
    """
    key = (dim, frozenset(gens))
    hit = _closure_cache.get(key)
    if hit is not None:
        return hit
    identity = mat_identity(dim)
    elems = [identity]
    seen = {_mat_pack(identity, dim)}
    head = 0
    while head < len(elems):
        cur = elems[head]
        head += 1
        for g in gens:
            nxt = mat_mul(g, cur)
            packed = _mat_pack(nxt, dim)
            if packed not in seen:
                if len(elems) >= budget:
                    raise BudgetExceededError(
                        f"group closure exceeded {budget} elements", partial=None
                    )
                seen.add(packed)
                elems.append(nxt)
    out = tuple(sorted(elems, key=lambda rows: _mat_pack(rows, dim)))
    _closure_cache[key] = out
    return out


def double_coset_reps(
    left_gens,
    right_gens,
    ambient_gens,
    dim: int | None = None,
    budget: int = 100_000_000,
) -> DoubleCosets:
    """Representatives of Left\\Ambient/Right by orbit merging.

    The ambient group is enumerated by breadth-first closure over its
    generators, then elements are merged along left multiplication by left
    generators and right multiplication by right generators.  Each class
    reports its lexicographically least element, and classes come out
    sorted by representative, so the output is deterministic.
    """
    if dim is None:
        for g in (*left_gens, *right_gens, *ambient_gens):
            dim = len(g)
            break
        else:
            raise ValidationError(
                "dimension needed when all generator lists are empty"
            )
    for g in (*left_gens, *right_gens, *ambient_gens):
        if len(g) != dim:
            raise ValidationError("generator dimensions disagree")
    if dim == 0:
        return DoubleCosets(((),), (1,), 1)
    try:
        elems = group_closure(tuple(ambient_gens), dim, budget)
    except BudgetExceededError as exc:
        raise BudgetExceededError(
            f"ambient group larger than budget {budget}; rerun with a bigger "
            "budget or shard over smaller subgroups",
            partial=DoubleCosets((), (), 0),
        ) from exc
    index = {_mat_pack(e, dim): i for i, e in enumerate(elems)}
    left_tables = [
        [mat_apply(g, x) for x in range(1 << dim)] for g in left_gens
    ]
    seen = [False] * len(elems)
    classes = []
    for start in range(len(elems)):
        if seen[start]:
            continue
        stack = [elems[start]]
        seen[start] = True
        members = []
        while stack:
            h = stack.pop()
            members.append(h)
            neighbors = [tuple(t[r] for r in h) for t in left_tables]
            neighbors += [mat_mul(h, g) for g in right_gens]
            for nb in neighbors:
                i = index.get(_mat_pack(nb, dim))
                if i is None:
                    raise ValidationError(
                        "left/right generators do not normalize the ambient set"
                    )
                if not seen[i]:
                    seen[i] = True
                    stack.append(nb)
        classes.append((min(members), len(members)))
    classes.sort(key=lambda pair: pair[0])
    reps = tuple(rep for rep, _ in classes)
    sizes = tuple(size for _, size in classes)
    if sum(sizes) != len(elems):
        raise AssertionError("double cosets do not partition the group")
    return DoubleCosets(reps, sizes, len(elems))


def quotient_space(code) -> QuotientSpace:
    """The quadratic space a doubly even code induces on dual mod code."""
    return QuotientSpace(code)


def induced_group_gens(code, group) -> tuple[tuple, ...]:
    """Images of automorphism generators inside the quotient isometry group.

    Generators acting trivially on the quotient come out as the identity;
    every output is checked pointwise against the quadratic form.
    """
    space = QuotientSpace(code)
    gens = getattr(group, "generators", group)
    tab = space.q_table()
    out = []
    for g in gens:
        images = getattr(g, "images", g)
        if code.permute(images) != code:
            raise ValidationError("generator does not preserve the code")
        iso = space.induced_isometry(images)
        for x in range(1 << space.k):
            if tab[mat_apply(iso, x)] != tab[x]:
                raise AssertionError("induced map fails to preserve the form")
        out.append(iso)
    return tuple(out)
