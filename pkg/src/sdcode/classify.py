"""Classification pipelines with mass-formula completeness certificates.

A classification run enumerates candidate codes (by neighbor closure,
component gluing, or two-coordinate lifts), identifies each candidate
against the growing catalog, and finally certifies completeness by the
exact identity sum over classes of n!/#Aut = product of (2^i + 1).  The
certificate is the only accepted proof of completeness; runs that fall
short raise a typed error carrying the deficit and the partial catalog.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .codes import (
    LinearCode,
    extended_hamming_code,
    extremal_bound,
    repetition_blocks,
)
from .construct import (
    bp_lift,
    glue_family,
    neighbor,
    neighbor_functional_orbits,
    small_self_orthogonal_classes,
    subtraction_candidates,
)
from .equiv import (
    Fingerprint,
    _find_isomorphism,
    canonical_form,
    fingerprint,
)
from .errors import (
    BudgetExceededError,
    IncompleteCatalogError,
    ValidationError,
)
from .perms import PermGroup, prime_order_types
from .records import (
    CatalogRecord,
    hex_to_row,
    make_record,
    parse_record_line,
    row_to_hex,
    trusted_record_from_stated,
)

MAX_SYNDROME_BITS = 26


def mass(n: int) -> int:
    """Number of distinct doubly even self-dual codes of length n.

    The count is over subspaces, not equivalence classes; dividing the
    coordinate permutations among the classes is what turns this into a
    completeness certificate.
    """
    if n <= 0 or n % 8 != 0:
        raise ValidationError("doubly even self-dual codes need length 0 mod 8")
    return math.prod((1 << i) + 1 for i in range(n // 2 - 1))


@dataclass(frozen=True)
class MassAccount:
    """Orbit-size bookkeeping that certifies a catalog complete."""

    n: int
    expected: int
    terms: tuple[tuple[str, int], ...]
    total: int

    @property
    def complete(self) -> bool:
        return self.total == self.expected

    @classmethod
    def from_records(cls, n: int, records) -> "MassAccount":
        factorial = math.factorial(n)
        terms = []
        total = 0
        for rec in sorted(records, key=lambda r: r.canonical_hash):
            orbit, rem = divmod(factorial, rec.aut_order)
            if rem:
                raise AssertionError(
                    f"aut order {rec.aut_order} does not divide {n}!"
                )
            terms.append((rec.canonical_hash, orbit))
            total += orbit
        return cls(n, mass(n), tuple(terms), total)


@dataclass(frozen=True)
class CoveringRadiusResult:
    """Covering radius together with a deepest-coset witness vector."""

    radius: int
    witness_syndrome: int


def covering_radius(code: LinearCode) -> CoveringRadiusResult:
    """Largest coset leader weight, by breadth-first syndrome layering.

    Every syndrome is labeled with its leader weight by expanding one
    coordinate flip at a time, so the maximum layer is exhaustive.  The
    witness is an actual leader of a deepest coset.
    """
    n = code.n
    dual_rows = code.dual().rows
    r = len(dual_rows)
    if r > MAX_SYNDROME_BITS:
        raise BudgetExceededError(
            f"syndrome space 2^{r} exceeds the 2^{MAX_SYNDROME_BITS} budget"
        )
    if r == 0:
        return CoveringRadiusResult(0, 0)
    sig = np.zeros(n, dtype=np.int64)
    for j, row in enumerate(dual_rows):
        for i in range(n):
            if (row >> i) & 1:
                sig[i] |= 1 << j
    size = 1 << r
    dist = np.full(size, -1, dtype=np.int16)
    dist[0] = 0
    frontier = np.array([0], dtype=np.int64)
    radius = 0
    while frontier.size:
        nxt = np.unique((frontier[:, None] ^ sig[None, :]).ravel())
        nxt = nxt[dist[nxt] < 0]
        if nxt.size == 0:
            break
        radius += 1
        dist[nxt] = radius
        frontier = nxt
    if int((dist < 0).sum()):
        raise AssertionError("syndrome layering failed to cover the space")
    witness = 0
    cur = int(np.flatnonzero(dist == radius)[0])
    for level in range(radius, 0, -1):
        for i in range(n):
            prev = cur ^ int(sig[i])
            if dist[prev] == level - 1 and not (witness >> i) & 1:
                witness |= 1 << i
                cur = prev
                break
        else:
            raise AssertionError("witness reconstruction failed")
    if cur != 0 or witness.bit_count() != radius:
        raise AssertionError("witness is not a coset leader")
    if code.k <= 20:
        words = np.array(code.words(), dtype=object)
        best = min(int(w ^ witness).bit_count() for w in words)
        if best != radius:
            raise AssertionError("witness distance disagrees with its layer")
    total = 0
    for t in range(radius + 1):
        total += math.comb(n, t)
    if total < size:
        raise AssertionError("result violates the sphere-covering bound")
    return CoveringRadiusResult(radius, witness)


def design_check(code: LinearCode, w: int) -> Optional[int]:
    """The replication number if weight-w words form a 1-design, else None."""
    words = code.words_of_weight(w)
    if not words:
        return 0
    counts = [0] * code.n
    for word in words:
        m = word
        while m:
            low = m & -m
            counts[low.bit_length() - 1] += 1
            m ^= low
    lam = counts[0]
    if any(c != lam for c in counts):
        return None
    if lam * code.n != len(words) * w:
        raise AssertionError("design count identity failed")
    return lam


def weight8_subcode_dim(code: LinearCode) -> int:
    """GF(2) rank of the span of the weight-8 codewords."""
    from .gf2 import row_reduce

    return len(row_reduce(code.words_of_weight(8))[0])


# -- classification driver ----------------------------------------------


class _Cataloger:
    """Incremental catalog with a cheap-invariant fast path.

    Candidates are bucketed by an automorphism-free fingerprint; within a
    bucket a short-lease backtracking isomorphism test against each stored
    representative decides duplication.  A candidate that exhausts its
    search lease is settled once by canonical hash, which also covers the
    rest of its bucket, so only genuinely new classes and hard bucket
    collisions pay for a full canonical labeling.
    """

    def __init__(self, n: int):
        self.n = n
        self.by_hash: dict[str, CatalogRecord] = {}
        self.buckets: dict[tuple, list[str]] = {}

    def records(self) -> list[CatalogRecord]:
        return [self.by_hash[h] for h in sorted(self.by_hash)]

    def add_record(self, rec: CatalogRecord) -> None:
        if rec.canonical_hash in self.by_hash:
            raise AssertionError("duplicate canonical hash in catalog")
        self.by_hash[rec.canonical_hash] = rec
        key = _fast_key(rec.fingerprint)
        self.buckets.setdefault(key, []).append(rec.canonical_hash)

    def identify(
        self, code: LinearCode, provenance: str, fast_key: Optional[tuple] = None
    ) -> tuple[str, bool]:
        if fast_key is None:
            fast_key = fingerprint(code, include_aut=False).key()
        canon = None
        for h in self.buckets.get(fast_key, []):
            rec = self.by_hash[h]
            if canon is not None:
                if canon.hash == h:
                    return h, False
                continue
            try:
                # Duplicates almost always resolve within a few hundred
                # nodes; a lease this small makes inequivalent bucket
                # mates fail over to one canonical labeling instead of
                # exhausting a large search per stored representative.
                if _find_isomorphism(code, rec.code, node_budget=2000) is not None:
                    return h, False
            except BudgetExceededError:
                canon = canonical_form(code)
                if canon.hash == h:
                    return h, False
        rec = make_record(code, provenance)
        self.add_record(rec)
        return rec.canonical_hash, True


def _fast_key(fp: Fingerprint) -> tuple:
    return fp.key()


class _Checkpoint:
    """Shard cache plus an atomically rewritten merged-state snapshot."""

    def __init__(self, dirpath, n: int, method: str):
        self.dir = Path(dirpath)
        self.n = n
        self.method = method
        (self.dir / "shards").mkdir(parents=True, exist_ok=True)
        self.state_path = self.dir / "state.txt"

    def _atomic_write(self, path: Path, text: str) -> None:
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(text)
        os.replace(tmp, path)

    def save_state(self, records, done) -> None:
        lines = [f"C {self.n} {self.method}"]
        for rec in sorted(records, key=lambda r: r.canonical_hash):
            lines.append(f"R {rec.line()}")
        for token in sorted(done):
            lines.append(f"X {token}")
        self._atomic_write(self.state_path, "\n".join(lines) + "\n")

    def load_state(self):
        if not self.state_path.exists():
            return None
        records = []
        done = set()
        lines = self.state_path.read_text().splitlines()
        if not lines or lines[0] != f"C {self.n} {self.method}":
            raise ValidationError(
                "checkpoint was created for a different run configuration"
            )
        for ln in lines[1:]:
            if ln.startswith("R "):
                records.append(_record_from_state_line(ln[2:]))
            elif ln.startswith("X "):
                done.add(ln[2:])
        return records, done

    def shard_path(self, token: str) -> Path:
        return self.dir / "shards" / f"shard_{token}.txt"

    def load_shard(self, token: str):
        path = self.shard_path(token)
        if not path.exists():
            return None
        out = []
        lines = path.read_text().splitlines()
        for ln in lines:
            prov, hexrows = ln.split(" ")
            rows = [hex_to_row(h, self.n) for h in hexrows.split(":")]
            out.append((prov, tuple(rows), None))
        return out

    def save_shard(self, token: str, items) -> None:
        lines = []
        for prov, rows, _ in items:
            hexrows = ":".join(row_to_hex(r, self.n) for r in rows)
            lines.append(f"{prov} {hexrows}")
        self._atomic_write(self.shard_path(token), "\n".join(lines) + "\n")


def _record_from_state_line(line: str) -> CatalogRecord:
    return trusted_record_from_stated(parse_record_line(line))


def _seed_code(n: int) -> LinearCode:
    out = extended_hamming_code()
    for _ in range(n // 8 - 1):
        out = out.direct_sum(extended_hamming_code())
    return out


def _neighbor_worker(args):
    n, rows, token = args
    code = LinearCode(n, list(rows))
    out = []
    for phi in neighbor_functional_orbits(code):
        nb = neighbor(code, phi)
        key = fingerprint(nb, include_aut=False).key()
        out.append((f"neighbor({token[:16]},{phi})", nb.rows, key))
    return out


def _glue_worker(args):
    n, payload, token = args
    n1, rows1, rows2 = payload
    c1 = LinearCode(n1, list(rows1))
    c2 = LinearCode(n - n1, list(rows2))
    out = []
    for idx, cand in enumerate(glue_family(c1, c2)):
        key = fingerprint(cand, include_aut=False).key()
        out.append((f"{token},{idx}", cand.rows, key))
    return out


def _lift_worker(args):
    n, payload, token = args
    rows = payload
    source = LinearCode(n - 2, list(rows))
    lifted = bp_lift(source)
    key = fingerprint(lifted, include_aut=False).key()
    return [(f"lift({token})", lifted.rows, key)]


def _resolve_threads(threads: Optional[int]) -> int:
    if threads is None:
        env = os.environ.get("SDCODE_THREADS")
        threads = int(env) if env else 1
    if threads < 1:
        raise ValidationError("threads must be at least 1")
    return threads


_METHOD_ALIASES = {
    "neighbor": "neighbor-closure",
    "neighbor-closure": "neighbor-closure",
    "glue": "glue",
    "lift": "lift-chain",
    "lift-chain": "lift-chain",
}


def classify_doubly_even(
    n: int,
    method: str = "neighbor-closure",
    threads: Optional[int] = None,
    checkpoint=None,
    budget: Optional[int] = None,
) -> tuple[list[CatalogRecord], MassAccount]:
    """Classify doubly even self-dual codes of length n up to equivalence.

    Returns the catalog and its mass account once the certificate holds.
    A run that stops early (shard budget, or a generation method that
    cannot reach every class) raises with the partial catalog attached;
    nothing is ever reported complete on any weaker evidence.

    Lengths 8 through 32 run to completion on a desk machine.  Length 40
    is accepted only with an explicit shard budget and is expected to be
    resumed across many sessions via the checkpoint directory.
    """
    canonical_method = _METHOD_ALIASES.get(method)
    if canonical_method is None:
        raise ValidationError(f"unknown classification method {method!r}")
    if n <= 0 or n % 8 != 0:
        raise ValidationError("doubly even self-dual codes need length 0 mod 8")
    if n >= 40 and budget is None:
        raise BudgetExceededError(
            f"length {n} is beyond desk scale; pass an explicit shard budget "
            "and a checkpoint directory, and expect to resume repeatedly"
        )
    threads = _resolve_threads(threads)

    cp = _Checkpoint(checkpoint, n, canonical_method) if checkpoint else None
    cat = _Cataloger(n)
    done: set[str] = set()
    if cp is not None:
        state = cp.load_state()
        if state is not None:
            records, done = state
            for rec in records:
                cat.add_record(rec)

    if canonical_method == "neighbor-closure":
        worker = _neighbor_worker
        if not cat.by_hash:
            seed = _seed_code(n)
            cat.identify(seed, f"seed(e8^{n // 8})")

        def jobs():
            return [
                (h, cat.by_hash[h].code.rows) for h in sorted(cat.by_hash)
            ]

    elif canonical_method == "glue":
        worker = _glue_worker
        static_jobs = _glue_jobs(n)

        def jobs():
            return static_jobs

    else:
        worker = _lift_worker
        static_jobs = _lift_jobs(n)

        def jobs():
            return static_jobs

    pool = None
    if threads > 1:
        import multiprocessing as mp

        pool = mp.get_context("fork").Pool(threads)
    ram_cache: dict[str, list] = {}
    processed = 0
    truncated = False
    try:
        while True:
            # The mass certificate is the completeness proof: once the
            # accumulated class sizes sum to the full mass, every class
            # is present and the remaining shards can only repeat them.
            if MassAccount.from_records(n, cat.records()).complete:
                break
            todo = [(t, payload) for t, payload in jobs() if t not in done]
            if not todo:
                break
            if budget is not None and processed >= budget:
                truncated = True
                break
            wave = todo[: threads if threads > 1 else 1]
            missing = []
            for token, payload in wave:
                if token in ram_cache:
                    continue
                if cp is not None:
                    cached = cp.load_shard(token)
                    if cached is not None:
                        ram_cache[token] = cached
                        continue
                missing.append((token, payload))
            if missing:
                args = [(n, payload, token) for token, payload in missing]
                if pool is not None and len(missing) > 1:
                    results = pool.map(worker, args)
                else:
                    results = [worker(a) for a in args]
                for (token, _), result in zip(missing, results):
                    ram_cache[token] = result
                    if cp is not None:
                        cp.save_shard(token, result)
            token, _ = todo[0]
            for prov, rows, key in ram_cache.pop(token):
                cat.identify(LinearCode(n, list(rows)), prov, key)
            done.add(token)
            processed += 1
            if cp is not None:
                cp.save_state(cat.records(), done)
    finally:
        if pool is not None:
            pool.close()
            pool.join()

    records = cat.records()
    account = MassAccount.from_records(n, records)
    if truncated or not account.complete:
        raise IncompleteCatalogError(
            f"catalog of {len(records)} classes accounts for {account.total} "
            f"of {account.expected} codes (deficit {account.expected - account.total})",
            expected=account.expected,
            achieved=account.total,
            records=records,
        )
    return records, account


def _glue_jobs(n: int) -> list[tuple[str, tuple]]:
    """One job per component pairing for the 8 + (n-8) coordinate split.

    A component pair qualifies when both contain the all-one vector, both
    are doubly even, and the two quotient spaces have equal dimension.
    Every length-n doubly even self-dual code with a weight-8 codeword is
    a gluing of such a pair, so at lengths 16 and 24 the family is
    exhaustive and the mass certificate confirms it.
    """
    if n < 16:
        raise ValidationError("glue classification needs length at least 16")
    jobs = []
    for d1 in range(1, 5):
        d2 = d1 + (n - 16) // 2
        if d2 < 1 or d2 > (n - 8) // 2:
            continue
        left = small_self_orthogonal_classes(8, d1)
        right = (
            left if n == 16 else small_self_orthogonal_classes(n - 8, d2)
        )
        for i, c1 in enumerate(left):
            h1 = canonical_form(c1).hash
            start = i if n == 16 else 0
            for j in range(start, len(right)):
                c2 = right[j]
                h2 = canonical_form(c2).hash
                token = f"glue({h1[:16]},{h2[:16]})"
                jobs.append((token, (8, c1.rows, c2.rows)))
    jobs.sort()
    return jobs


def _lift_jobs(n: int) -> list[tuple[str, tuple]]:
    """One job per singly even self-dual direct sum at length n - 2.

    Sources are i2 blocks plus one classified doubly even summand.  The
    chain is complete at lengths 8 and 16; from 24 on some classes are
    not lifts of direct sums, and the run reports its deficit honestly.
    """
    jobs = [(f"i2^{(n - 2) // 2}", repetition_blocks((n - 2) // 2).rows)]
    m = n - 8
    while m >= 8:
        summands, _ = classify_doubly_even(m, "neighbor-closure")
        j = (n - 2 - m) // 2
        for rec in summands:
            base = rec.code
            rows = list(base.rows)
            for t in range(j):
                mask = 0b11 << (m + 2 * t)
                rows.append(mask)
            token = f"{rec.ident}+i2^{j}"
            jobs.append((token, tuple(rows)))
        m -= 8
    jobs.sort()
    return jobs


# -- census and reporting ------------------------------------------------


def census(
    records,
    element_budget: int = 10**6,
    include_covering_radius: bool = True,
) -> str:
    """Deterministic TSV digest of a catalog's invariant histograms."""
    lines = ["section\tkey\tvalue"]
    records = sorted(records, key=lambda r: r.canonical_hash)
    lines.append(f"meta\trecords\t{len(records)}")
    if records:
        lines.append(f"meta\tlength\t{records[0].n}")

    def histogram(section, values):
        counts: dict = {}
        for v in values:
            counts[v] = counts.get(v, 0) + 1
        for key in sorted(counts):
            lines.append(f"{section}\t{key}\t{counts[key]}")

    histogram("min_weight", (r.min_weight for r in records))
    histogram("a4", (r.a4 for r in records))
    histogram("aut_order", (r.aut_order for r in records))
    histogram(
        "weight8_dim", (weight8_subcode_dim(r.code) for r in records)
    )
    if include_covering_radius:
        histogram(
            "covering_radius",
            (covering_radius(r.code).radius for r in records),
        )
    primes = sorted(
        {
            p
            for r in records
            for p in _odd_prime_factors(r.aut_order)
        }
    )
    for p in primes:
        type_counts: dict = {}
        all_exact = True
        for rec in records:
            if rec.aut_order % p:
                continue
            group = _record_group(rec)
            types, exact = prime_order_types(group, p, element_budget)
            all_exact = all_exact and exact
            for t in types:
                key = f"{t.p}-({t.c},{t.f})"
                type_counts[key] = type_counts.get(key, 0) + 1
        for key in sorted(type_counts):
            lines.append(f"prime_type\t{key}\t{type_counts[key]}")
        lines.append(f"prime_type_exact\t{p}\t{int(all_exact)}")
    return "\n".join(lines) + "\n"


def _odd_prime_factors(value: int) -> list[int]:
    out = []
    v = value
    while v % 2 == 0:
        v //= 2
    f = 3
    while f * f <= v:
        if v % f == 0:
            out.append(f)
            while v % f == 0:
                v //= f
        f += 2
    if v > 1:
        out.append(v)
    return out


def _record_group(rec: CatalogRecord) -> PermGroup:
    from .equiv import automorphism_group

    return automorphism_group(rec.code)


# -- extremal subtraction pipeline ---------------------------------------


def extremal38_pipeline(records) -> list[CatalogRecord]:
    """Extremal self-dual codes of length n-2 from admissible subtractions.

    Each input of length 40 (or the desk-scale analogs 24 and 32) with at
    most one weight-4 word contributes one candidate per admissible
    coordinate pair; candidates are verified extremal and deduplicated.
    Length-38 outputs are tagged WE1 or WE2 by their weight-8 count, and
    the tag is cross-checked against the shadow: a weight-3 shadow vector
    occurs exactly in the WE2 family.
    """
    catalogers: dict[int, _Cataloger] = {}
    for rec in sorted(records, key=lambda r: r.canonical_hash):
        code = rec.code
        if code.n not in (24, 32, 40):
            raise ValidationError(
                "subtraction pipeline expects length 24, 32 or 40 inputs"
            )
        if rec.a4 > 1:
            raise ValidationError(
                "subtraction pipeline needs inputs with at most one weight-4 word"
            )
        target = extremal_bound(code.n - 2)
        for i, j in subtraction_candidates(code):
            sub = code.subtract(i, j)
            if sub.n != code.n - 2 or not sub.is_self_dual():
                raise AssertionError("subtraction output malformed")
            if sub.min_weight() != target:
                raise AssertionError("subtraction output is not extremal")
            prov = f"subtract({rec.ident},{i + 1},{j + 1})"
            if sub.n == 38:
                a8 = sub.weight_distribution()[8]
                shadow_min = min(
                    w for w, c in enumerate(sub.shadow().shadow_weights) if c
                )
                if a8 == 171:
                    if shadow_min == 3:
                        raise AssertionError(
                            "weight-8 count and shadow disagree on the family"
                        )
                    prov += "|WE1"
                elif a8 == 203:
                    if shadow_min != 3:
                        raise AssertionError(
                            "weight-8 count and shadow disagree on the family"
                        )
                    prov += "|WE2"
                else:
                    raise ValidationError(
                        f"unexpected weight-8 count {a8} at length 38"
                    )
            cat = catalogers.setdefault(sub.n, _Cataloger(sub.n))
            cat.identify(sub, prov)
    out = []
    for n_out in sorted(catalogers):
        out.extend(catalogers[n_out].records())
    return out
