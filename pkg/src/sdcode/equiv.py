"""Equivalence of binary codes under coordinate permutation.

The workhorse is a partition-refinement canonical labeling of the incidence
structure between coordinates and the codewords of the smallest nonzero
weights.  Coordinates start colored by their sorted co-occurrence (Gram)
rows, codewords by weight; refinement alternates counting sweeps on both
sides until stable, and an individualization search with automorphism orbit
pruning minimizes the refinement trace and, among discrete labelings with
the minimal trace, the reduced echelon form of the fully relabeled code.
That echelon form is the canonical generator matrix, so two codes are
equivalent exactly when their canonical matrices coincide; ties between
labelings are automorphisms, so the search doubles as a generator source
for the automorphism group.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .codes import LinearCode
from .errors import BudgetExceededError, ValidationError
from .perms import PermGroup, Permutation

WORD_CAP = 50000


# -- word structures ----------------------------------------------------


class _WordStructure:
    """Incidence data between coordinates and low-weight codewords."""

    __slots__ = (
        "n",
        "words",
        "weights_used",
        "inc",
        "rows_idx",
        "cols_idx",
        "ccol0",
        "wcol0",
    )

    def __init__(self, code: LinearCode):
        self.n = code.n
        wd = code.weight_distribution()
        present = [w for w in range(1, code.n + 1) if wd[w]]
        words: list[int] = []
        used: list[int] = []
        # Two smallest nonzero weight classes, hard-capped.  Highly
        # symmetric codes may need every weight class up to n to span,
        # so spanning is deliberately not required here; the leaf rule in
        # the search compares whole relabeled codes instead.
        for idx, w in enumerate(present):
            if idx >= 2:
                break
            new = code.words_of_weight(w)
            if idx >= 1 and len(words) + len(new) > WORD_CAP:
                break
            words.extend(new)
            used.append(w)
        self.words = words
        self.weights_used = tuple(used)
        arr = np.array(words, dtype=np.uint64)
        bits = (arr[:, None] >> np.arange(code.n, dtype=np.uint64)[None, :]) & np.uint64(1)
        self.inc = bits.astype(np.uint8)
        self.rows_idx, self.cols_idx = np.nonzero(self.inc)
        gram = self.inc.astype(np.int64).T @ self.inc.astype(np.int64)
        diag = np.diag(gram)
        ckey = np.column_stack([diag, np.sort(gram, axis=1)])
        _, self.ccol0 = np.unique(ckey, axis=0, return_inverse=True)
        weights = self.inc.sum(axis=1)
        _, self.wcol0 = np.unique(weights, return_inverse=True)
        self.ccol0 = self.ccol0.astype(np.int64)
        self.wcol0 = self.wcol0.astype(np.int64)

    @property
    def m(self) -> int:
        return len(self.words)


def _word_structure(code: LinearCode) -> _WordStructure:
    if "wstruct" not in code._cache:
        code._cache["wstruct"] = _WordStructure(code)
    return code._cache["wstruct"]


# -- refinement ---------------------------------------------------------


def _rank_labels(arr: np.ndarray) -> np.ndarray:
    _, inv = np.unique(arr, return_inverse=True)
    return inv.astype(np.int64)


def _refine(ws: _WordStructure, ccol: np.ndarray, wcol: np.ndarray):
    """Counting refinement to a stable pair of colorings."""
    n, m = ws.n, ws.m
    ccol = _rank_labels(ccol)
    wcol = _rank_labels(wcol)
    while True:
        nc = int(ccol.max()) + 1
        nw = int(wcol.max()) + 1
        if nw < m:
            wsig = np.bincount(
                ws.rows_idx * nc + ccol[ws.cols_idx], minlength=m * nc
            ).reshape(m, nc)
            wkey = np.column_stack([wcol, wsig])
            _, wcol2 = np.unique(wkey, axis=0, return_inverse=True)
            wcol2 = wcol2.astype(np.int64)
        else:
            wcol2 = wcol
        nw2 = int(wcol2.max()) + 1
        if nc < n:
            csig = np.bincount(
                ws.cols_idx * nw2 + wcol2[ws.rows_idx], minlength=n * nw2
            ).reshape(n, nw2)
            ckey = np.column_stack([ccol, csig])
            _, ccol2 = np.unique(ckey, axis=0, return_inverse=True)
            ccol2 = ccol2.astype(np.int64)
        else:
            ccol2 = ccol
        if int(ccol2.max()) + 1 == nc and nw2 == nw:
            return ccol2, wcol2
        ccol, wcol = ccol2, wcol2


def _node_invariant(ccol: np.ndarray, wcol: np.ndarray) -> bytes:
    return (
        np.bincount(ccol).astype(np.int64).tobytes()
        + b"|"
        + np.bincount(wcol).astype(np.int64).tobytes()
    )


def _target_cell(ccol: np.ndarray) -> np.ndarray:
    """Vertices of the first largest coordinate cell."""
    sizes = np.bincount(ccol)
    color = int(np.argmax(sizes))
    return np.where(ccol == color)[0]


def _orbit_closure(seeds: Sequence[int], perms: Sequence[tuple]) -> set[int]:
    seen = set(seeds)
    frontier = list(seeds)
    while frontier:
        nxt = []
        for x in frontier:
            for p in perms:
                y = p[x]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _leaf_code_key(code: LinearCode, ccol: np.ndarray) -> tuple[int, ...]:
    """Echelon rows of the code relabeled by a discrete coloring."""
    return tuple(code.permute(tuple(int(x) for x in ccol)).rows)


def _canonical_search(ws: _WordStructure, code: LinearCode):
    """Minimal stable labeling plus automorphism generators.

    Returns (perm_array mapping coordinate -> canonical position,
    list of automorphism image tuples).  A leaf whose trace and relabeled
    code both match the incumbent differs from it by an automorphism, so
    every recorded generator is genuine by construction.
    """
    best: dict = {"trace": None, "key": None, "perm": None}
    autos: list[tuple] = []
    n = ws.n

    ccol0, wcol0 = _refine(ws, ws.ccol0, ws.wcol0)

    def dfs(ccol, wcol, trace, prefix):
        t = tuple(trace)
        if best["trace"] is not None and t > best["trace"][: len(t)]:
            return
        if int(ccol.max()) + 1 == n:
            key = _leaf_code_key(code, ccol)
            value = (t, key)
            if best["trace"] is None or value < (best["trace"], best["key"]):
                best["trace"] = t
                best["key"] = key
                best["perm"] = ccol.copy()
            elif value == (best["trace"], best["key"]):
                inv_best = np.argsort(best["perm"])
                sigma = tuple(int(x) for x in inv_best[ccol])
                if any(sigma[i] != i for i in range(n)) and sigma not in autos:
                    autos.append(sigma)
            return
        cell = _target_cell(ccol)
        tried: list[int] = []
        for u in cell:
            u = int(u)
            if tried:
                fixed = [a for a in autos if all(a[v] == v for v in prefix)]
                if u in _orbit_closure(tried, fixed):
                    continue
            tried.append(u)
            c2 = ccol * 2
            c2[u] -= 1
            rc, rw = _refine(ws, c2, wcol)
            dfs(rc, rw, trace + [_node_invariant(rc, rw)], prefix + (u,))

    dfs(ccol0, wcol0, [_node_invariant(ccol0, wcol0)], ())
    return best["perm"], autos


# -- canonical forms ----------------------------------------------------


@dataclass(frozen=True)
class CanonicalForm:
    """Canonical relabeling of a code.

    perm sends original coordinate i to canonical position perm(i); code is
    the relabeled, re-echelonized result, identical for all codes in one
    equivalence class.
    """

    code: LinearCode
    perm: Permutation
    hash: str
    aut_gens: tuple[Permutation, ...]

    @property
    def gm_bytes(self) -> bytes:
        return self.code.gm().encode()


def canonical_form(code: LinearCode) -> CanonicalForm:
    if "canon" in code._cache:
        return code._cache["canon"]
    if code.k == 0:
        perm = Permutation.identity(code.n)
        canon = LinearCode(code.n, [])
        digest = hashlib.sha256(canon.gm().encode()).hexdigest()
        result = CanonicalForm(canon, perm, digest, ())
        code._cache["canon"] = result
        return result
    ws = _word_structure(code)
    perm_array, autos = _canonical_search(ws, code)
    perm = Permutation(tuple(int(x) for x in perm_array))
    canon = code.permute(perm.images)
    digest = hashlib.sha256(canon.gm().encode()).hexdigest()
    gens = []
    for images in autos:
        p = Permutation(images)
        if code.permute(p.images) != code:
            raise AssertionError("canonical search produced a non-automorphism")
        gens.append(p)
    result = CanonicalForm(canon, perm, digest, tuple(gens))
    code._cache["canon"] = result
    return result


def automorphism_group(code: LinearCode) -> PermGroup:
    """Coordinate permutations preserving the code, as a generated group."""
    if "autgroup" not in code._cache:
        form = canonical_form(code)
        code._cache["autgroup"] = PermGroup(code.n, form.aut_gens)
    return code._cache["autgroup"]


def aut_order(code: LinearCode) -> int:
    return automorphism_group(code).order()


# -- isomorphism search -------------------------------------------------


@dataclass(frozen=True)
class EquivalenceWitness:
    """A verified coordinate permutation carrying one code onto another."""

    perm: Permutation

    def verify(self, source: LinearCode, target: LinearCode) -> bool:
        return source.permute(self.perm.images) == target


def _joint_initial_colors(wa: _WordStructure, wb: _WordStructure):
    def ckey(ws):
        gram = ws.inc.astype(np.int64).T @ ws.inc.astype(np.int64)
        return np.column_stack([np.diag(gram), np.sort(gram, axis=1)])

    ka, kb = ckey(wa), ckey(wb)
    _, inv = np.unique(np.vstack([ka, kb]), axis=0, return_inverse=True)
    ccola, ccolb = inv[: wa.n], inv[wa.n :]
    weights_a = wa.inc.sum(axis=1)
    weights_b = wb.inc.sum(axis=1)
    _, winv = np.unique(np.concatenate([weights_a, weights_b]), return_inverse=True)
    wcola, wcolb = winv[: wa.m], winv[wa.m :]
    return (
        ccola.astype(np.int64),
        wcola.astype(np.int64),
        ccolb.astype(np.int64),
        wcolb.astype(np.int64),
    )


def _refine_pair(wa, wb, ccola, wcola, ccolb, wcolb):
    """Lockstep refinement with jointly ranked colors; None if incompatible."""
    n, ma, mb = wa.n, wa.m, wb.m

    def ranked2(x, y):
        _, inv = np.unique(np.concatenate([x, y]), return_inverse=True)
        return inv[: len(x)].astype(np.int64), inv[len(x) :].astype(np.int64)

    ccola, ccolb = ranked2(ccola, ccolb)
    wcola, wcolb = ranked2(wcola, wcolb)
    while True:
        if not np.array_equal(np.bincount(ccola), np.bincount(ccolb)):
            return None
        if not np.array_equal(np.bincount(wcola), np.bincount(wcolb)):
            return None
        nc = int(ccola.max()) + 1
        nw = int(wcola.max()) + 1

        def wsig(ws, ccol):
            return np.bincount(
                ws.rows_idx * nc + ccol[ws.cols_idx], minlength=ws.m * nc
            ).reshape(ws.m, nc)

        ka = np.column_stack([wcola, wsig(wa, ccola)])
        kb = np.column_stack([wcolb, wsig(wb, ccolb)])
        _, winv = np.unique(np.vstack([ka, kb]), axis=0, return_inverse=True)
        wcola2, wcolb2 = winv[:ma].astype(np.int64), winv[ma:].astype(np.int64)
        nw2 = int(max(wcola2.max(), wcolb2.max())) + 1

        def csig(ws, wcol):
            return np.bincount(
                ws.cols_idx * nw2 + wcol[ws.rows_idx], minlength=ws.n * nw2
            ).reshape(ws.n, nw2)

        ka = np.column_stack([ccola, csig(wa, wcola2)])
        kb = np.column_stack([ccolb, csig(wb, wcolb2)])
        _, cinv = np.unique(np.vstack([ka, kb]), axis=0, return_inverse=True)
        ccola2, ccolb2 = cinv[:n].astype(np.int64), cinv[n:].astype(np.int64)
        nc2 = int(max(ccola2.max(), ccolb2.max())) + 1
        if nc2 == nc and nw2 == nw:
            if not np.array_equal(np.bincount(ccola2), np.bincount(ccolb2)):
                return None
            if not np.array_equal(np.bincount(wcola2), np.bincount(wcolb2)):
                return None
            return ccola2, wcola2, ccolb2, wcolb2
        ccola, wcola, ccolb, wcolb = ccola2, wcola2, ccolb2, wcolb2


def _find_isomorphism(
    a: LinearCode, b: LinearCode, node_budget: int = 10**6
) -> Optional[Permutation]:
    """Backtracking search for a permutation carrying a onto b."""
    if a.n != b.n or a.k != b.k:
        return None
    if a.weight_distribution() != b.weight_distribution():
        return None
    wa, wb = _word_structure(a), _word_structure(b)
    if wa.m != wb.m or wa.weights_used != wb.weights_used:
        return None
    state0 = _refine_pair(wa, wb, *_joint_initial_colors(wa, wb))
    if state0 is None:
        return None
    nodes = [0]
    # A node's refinement pass costs time proportional to the word
    # structure, so the budget is charged in word-row units: pairs with
    # heavy structures trip after a handful of nodes and callers fall
    # back to canonical hashing instead of stalling here.
    node_cost = 1 + (wa.m + wb.m) // 100

    def dfs(state) -> Optional[Permutation]:
        nodes[0] += node_cost
        if nodes[0] > node_budget:
            raise BudgetExceededError(
                f"isomorphism search exceeded {node_budget} nodes"
            )
        ccola, wcola, ccolb, wcolb = state
        if int(ccola.max()) + 1 == a.n:
            # Discrete on both sides: match colors to build the map.
            pos_a = np.argsort(ccola)
            pos_b = np.argsort(ccolb)
            images = [0] * a.n
            for p in range(a.n):
                images[int(pos_a[p])] = int(pos_b[p])
            perm = Permutation(tuple(images))
            if a.permute(perm.images) == b:
                return perm
            return None
        cell_a = _target_cell(ccola)
        color = int(ccola[cell_a[0]])
        cell_b = np.where(ccolb == color)[0]
        v = int(cell_a[0])
        for u in cell_b:
            u = int(u)
            c2a = ccola * 2
            c2a[v] -= 1
            c2b = ccolb * 2
            c2b[u] -= 1
            nxt = _refine_pair(wa, wb, c2a, wcola, c2b, wcolb)
            if nxt is None:
                continue
            found = dfs(nxt)
            if found is not None:
                return found
        return None

    return dfs(state0)


def is_equivalent(
    a: LinearCode, b: LinearCode, node_budget: int = 10**6
) -> Optional[EquivalenceWitness]:
    """A verified witness permutation carrying a onto b, or None."""
    perm = _find_isomorphism(a, b, node_budget)
    if perm is None:
        return None
    witness = EquivalenceWitness(perm)
    if not witness.verify(a, b):
        raise AssertionError("isomorphism search returned an unverified map")
    return witness


# -- invariants ---------------------------------------------------------


@dataclass(frozen=True)
class DesignInvariant:
    """Entry statistics of the Gram matrix of the weight-w codeword matrix.

    n_set drops the constant 57 for extremal length-40 codes, where the
    weight-8 words form a design whose Gram diagonal is identically 57;
    n_set_unfiltered keeps every entry.
    """

    gram: tuple[tuple[int, ...], ...]
    n_set: frozenset[int]
    n_set_unfiltered: frozenset[int]
    a_w_used: int


def design_invariant(code: LinearCode, w: int = 8) -> DesignInvariant:
    words = code.words_of_weight(w)
    n = code.n
    if words:
        arr = np.array(words, dtype=np.uint64)
        bits = ((arr[:, None] >> np.arange(n, dtype=np.uint64)[None, :]) & np.uint64(1)).astype(
            np.int64
        )
        gram = bits.T @ bits
    else:
        gram = np.zeros((n, n), dtype=np.int64)
    entries = frozenset(int(x) for x in np.unique(gram))
    filtered = entries
    if n == 40 and code.is_extremal():
        filtered = entries - {57}
    gram_t = tuple(tuple(int(x) for x in row) for row in gram)
    return DesignInvariant(gram_t, filtered, entries, w)


@dataclass(frozen=True)
class Fingerprint:
    """Cheap invariants used to pre-partition codes before exact dedup.

    aut_order is optional: it is the most expensive slot, so bulk dedup
    leaves it unset and only final catalog records carry it.
    """

    n: int
    a4: int
    max_n: int
    min_n: int
    card_n: int
    weight_dist: tuple[int, ...]
    gram_rows: tuple[tuple[int, ...], ...]
    aut_order: Optional[int] = None

    def key(self) -> tuple:
        return (
            self.n,
            self.a4,
            self.max_n,
            self.min_n,
            self.card_n,
            self.weight_dist,
            self.gram_rows,
        )


def fingerprint(
    code: LinearCode, include_aut: bool = True, gram_weight: int = 8
) -> Fingerprint:
    cache_key = ("fingerprint", gram_weight, include_aut)
    hit = code._cache.get(cache_key)
    if hit is not None:
        return hit
    di = design_invariant(code, gram_weight)
    nset = di.n_set
    wd = code.weight_distribution()
    gram_rows = tuple(sorted(tuple(sorted(row)) for row in di.gram))
    fp = Fingerprint(
        n=code.n,
        a4=wd[4] if code.n >= 4 else 0,
        max_n=max(nset),
        min_n=min(nset),
        card_n=len(nset),
        weight_dist=wd,
        gram_rows=gram_rows,
        aut_order=aut_order(code) if include_aut else None,
    )
    code._cache[cache_key] = fp
    return fp


def dedup(candidates, provenances=None) -> list:
    """Collapse a candidate pool to one catalog record per equivalence class.

    Candidates are partitioned by fingerprint and then by canonical hash;
    each class keeps its canonical representative.  Output order is sorted
    by fingerprint then canonical matrix, so it does not depend on input
    order.
    """
    from .records import make_record

    candidates = list(candidates)
    if provenances is None:
        provenances = ["ingest"] * len(candidates)
    if len(provenances) != len(candidates):
        raise ValidationError("one provenance per candidate required")
    lengths = {c.n for c in candidates}
    if len(lengths) > 1:
        raise ValidationError("dedup input mixes lengths")
    by_hash: dict[str, object] = {}
    for code, prov in zip(candidates, provenances):
        rec = make_record(code, prov)
        old = by_hash.get(rec.canonical_hash)
        if old is None or rec.provenance < old.provenance:
            by_hash[rec.canonical_hash] = rec
    out = list(by_hash.values())
    out.sort(
        key=lambda r: (
            r.fingerprint.key(),
            r.aut_order,
            r.code.rows,
        )
    )
    return out
