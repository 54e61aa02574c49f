"""Catalog records and their one-line text serialization.

A record pins down one equivalence class: the canonical representative
code, its invariants, and a provenance trace saying how the class was
first constructed.  The line format is

    n k d a4 aut_order canonical_hash hex_rows provenance

with ``hex_rows`` the generator rows of the stored representative, each
written big-endian (coordinate 1 is the most significant bit) and joined
by ':'.  All integers are decimal; provenance is a single token.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codes import LinearCode
from .errors import ParseError, ValidationError


def row_to_hex(mask: int, n: int) -> str:
    value = 0
    for i in range(n):
        if (mask >> i) & 1:
            value |= 1 << (n - 1 - i)
    return format(value, "0{}x".format((n + 3) // 4))


def hex_to_row(text: str, n: int) -> int:
    try:
        value = int(text, 16)
    except ValueError as exc:
        raise ParseError(f"bad hex row {text!r}") from exc
    if value >> n:
        raise ParseError(f"hex row {text!r} does not fit length {n}")
    mask = 0
    for i in range(n):
        if (value >> (n - 1 - i)) & 1:
            mask |= 1 << i
    return mask


@dataclass(frozen=True)
class CatalogRecord:
    """One equivalence class of self-dual codes, canonically represented."""

    code: LinearCode
    fingerprint: object
    canonical_hash: str
    aut_order: int
    min_weight: int
    a4: int
    provenance: str

    @property
    def n(self) -> int:
        return self.code.n

    @property
    def ident(self) -> str:
        """Short identifier used when other records cite this one."""
        return self.canonical_hash[:16]

    def line(self) -> str:
        code = self.code
        hex_rows = ":".join(row_to_hex(r, code.n) for r in code.rows)
        return "{} {} {} {} {} {} {} {}".format(
            code.n,
            code.k,
            self.min_weight,
            self.a4,
            self.aut_order,
            self.canonical_hash,
            hex_rows,
            self.provenance,
        )


def make_record(code: LinearCode, provenance: str) -> CatalogRecord:
    """Build the catalog record for a code's equivalence class.

    The stored representative is the canonical form, so equivalent inputs
    produce byte-identical records no matter how they were constructed.
    """
    from .equiv import aut_order, canonical_form, fingerprint

    if " " in provenance or not provenance:
        raise ValidationError("provenance must be one nonempty token")
    if not code.is_self_dual():
        raise ValidationError("catalog records hold self-dual codes")
    if code.n % 8 == 0 and not code.is_doubly_even():
        raise ValidationError("length 0 mod 8 catalog records must be doubly even")
    cf = canonical_form(code)
    return CatalogRecord(
        code=cf.code,
        fingerprint=fingerprint(code, include_aut=True),
        canonical_hash=cf.hash,
        aut_order=aut_order(code),
        min_weight=code.min_weight(),
        a4=code.a4(),
        provenance=provenance,
    )


def parse_record_line(line: str, lineno: int = 0) -> dict:
    """Split a catalog line into stated fields without re-verification."""
    parts = line.split()
    where = f"line {lineno}: " if lineno else ""
    if len(parts) != 8:
        raise ParseError(f"{where}expected 8 fields, got {len(parts)}")
    try:
        n, k, d, a4, aut = (int(p) for p in parts[:5])
    except ValueError as exc:
        raise ParseError(f"{where}non-integer numeric field") from exc
    digest = parts[5]
    if len(digest) != 64 or any(c not in "0123456789abcdef" for c in digest):
        raise ParseError(f"{where}canonical hash must be 64 hex characters")
    rows = [hex_to_row(h, n) for h in parts[6].split(":")] if parts[6] else []
    if len(rows) != k:
        raise ParseError(f"{where}stated k={k} but {len(rows)} rows present")
    return {
        "n": n,
        "k": k,
        "d": d,
        "a4": a4,
        "aut_order": aut,
        "canonical_hash": digest,
        "rows": rows,
        "provenance": parts[7],
        "lineno": lineno,
    }


def trusted_record_from_stated(stated: dict) -> CatalogRecord:
    """Rebuild a record from a line this process (or trusted peer) wrote.

    Cheap fingerprint slots are recomputed from the rows; the canonical
    hash and automorphism order are taken as stated.  External data must
    go through the verifying path instead.
    """
    from .equiv import Fingerprint, fingerprint

    code = LinearCode(stated["n"], stated["rows"])
    fp = fingerprint(code, include_aut=False)
    fp = Fingerprint(
        n=fp.n,
        a4=fp.a4,
        max_n=fp.max_n,
        min_n=fp.min_n,
        card_n=fp.card_n,
        weight_dist=fp.weight_dist,
        gram_rows=fp.gram_rows,
        aut_order=stated["aut_order"],
    )
    return CatalogRecord(
        code=code,
        fingerprint=fp,
        canonical_hash=stated["canonical_hash"],
        aut_order=stated["aut_order"],
        min_weight=stated["d"],
        a4=stated["a4"],
        provenance=stated["provenance"],
    )


def record_from_stated(stated: dict) -> tuple[CatalogRecord, list[str]]:
    """Rebuild a record from parsed fields, reporting any stated-value drift.

    Every derived quantity is recomputed from the generator rows; the
    stated values are only compared against, never trusted.
    """
    code = LinearCode(stated["n"], stated["rows"])
    if code.k != stated["k"]:
        raise ValidationError(
            f"line {stated['lineno']}: rows are linearly dependent"
        )
    record = make_record(code, stated["provenance"])
    mismatches = []
    where = f"line {stated['lineno']}" if stated["lineno"] else "record"
    for field, got in (
        ("d", record.min_weight),
        ("a4", record.a4),
        ("aut_order", record.aut_order),
        ("canonical_hash", record.canonical_hash),
    ):
        if stated[field] != got:
            mismatches.append(
                f"{where}: stated {field}={stated[field]} but recomputed {got}"
            )
    return record, mismatches
