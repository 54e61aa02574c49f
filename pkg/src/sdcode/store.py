"""On-disk deduplicating catalog store and external database ingest.

A store is a directory holding one catalog file per (length, minimum
weight), one record per line.  The index maps canonical hashes to file
positions; inserting a hash twice is a no-op, so a store never holds two
equivalent codes.  File rewrites go through a temporary file and a
rename, so readers never observe a half-written catalog.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from .codes import LinearCode
from .errors import ParseError, ValidationError
from .records import (
    CatalogRecord,
    make_record,
    parse_record_line,
    record_from_stated,
    trusted_record_from_stated,
)


class CatalogStore:
    def __init__(self, path):
        self.path = Path(path)
        self.path.mkdir(parents=True, exist_ok=True)
        self.index: dict[str, tuple[str, int]] = {}
        self._records: dict[str, CatalogRecord] = {}
        self.reload()

    @staticmethod
    def _file_name(n: int, d: int) -> str:
        return f"catalog_n{n}_d{d}.txt"

    def reload(self) -> None:
        """Rebuild the index from the files; the directory is the truth."""
        self.index.clear()
        self._records.clear()
        for path in sorted(self.path.glob("catalog_n*_d*.txt")):
            for lineno, line in enumerate(path.read_text().splitlines(), 1):
                if not line.strip():
                    continue
                stated = parse_record_line(line, lineno)
                rec = trusted_record_from_stated(stated)
                if rec.canonical_hash in self.index:
                    raise ValidationError(
                        f"{path.name} line {lineno}: duplicate canonical hash"
                    )
                self.index[rec.canonical_hash] = (path.name, lineno)
                self._records[rec.canonical_hash] = rec

    def __len__(self) -> int:
        return len(self.index)

    def __contains__(self, canonical_hash: str) -> bool:
        return canonical_hash in self.index

    def add(self, record: CatalogRecord) -> bool:
        """Append a record unless its class is already present."""
        if record.canonical_hash in self.index:
            return False
        name = self._file_name(record.n, record.min_weight)
        target = self.path / name
        existing = target.read_text() if target.exists() else ""
        tmp = target.with_name(name + ".tmp")
        tmp.write_text(existing + record.line() + "\n")
        os.replace(tmp, target)
        lineno = existing.count("\n") + 1
        self.index[record.canonical_hash] = (name, lineno)
        self._records[record.canonical_hash] = record
        return True

    def records(self) -> list[CatalogRecord]:
        return [
            self._records[h]
            for h in sorted(
                self._records,
                key=lambda h: (
                    self._records[h].n,
                    self._records[h].min_weight,
                    h,
                ),
            )
        ]

    def verify(self) -> list[str]:
        """Recompute every stored record from its rows; report drift."""
        problems: list[str] = []
        for path in sorted(self.path.glob("catalog_n*_d*.txt")):
            for lineno, line in enumerate(path.read_text().splitlines(), 1):
                if not line.strip():
                    continue
                stated = parse_record_line(line, lineno)
                try:
                    _, mismatches = record_from_stated(stated)
                except (ParseError, ValidationError) as exc:
                    problems.append(f"{path.name}: {exc}")
                    continue
                problems.extend(f"{path.name}: {m}" for m in mismatches)
        return problems


@dataclass(frozen=True)
class IngestResult:
    """Re-verified records plus the per-record mismatch report."""

    records: tuple[CatalogRecord, ...]
    mismatches: tuple[str, ...]


def _parse_gm_blocks(text: str) -> list[tuple[int, list[str]]]:
    """Split a file of concatenated generator-matrix blocks.

    Each block is a header line ``n k`` followed by k rows of n characters
    from {0,1}; blank lines between blocks are ignored.
    """
    blocks = []
    lines = text.splitlines()
    pos = 0
    while pos < len(lines):
        if not lines[pos].strip():
            pos += 1
            continue
        header = lines[pos].split()
        if len(header) != 2:
            raise ParseError(f"line {pos + 1}: expected 'n k' header")
        try:
            n, k = int(header[0]), int(header[1])
        except ValueError as exc:
            raise ParseError(f"line {pos + 1}: expected 'n k' header") from exc
        if k < 0 or n < 1:
            raise ParseError(f"line {pos + 1}: bad block dimensions")
        rows = []
        for r in range(k):
            idx = pos + 1 + r
            if idx >= len(lines):
                raise ParseError(f"line {pos + 1}: block runs past end of file")
            row = lines[idx].strip()
            if len(row) != n or any(c not in "01" for c in row):
                raise ParseError(
                    f"line {idx + 1}: expected {n} characters from 0/1"
                )
            rows.append(row)
        blocks.append((pos + 1, n, rows))
        pos += 1 + k
    return blocks


def load_gm_codes(path, allow_dependent: bool = False) -> list[LinearCode]:
    """All codes in a generator-matrix file, in file order."""
    text = Path(path).read_text()
    out = []
    for lineno, n, rows in _parse_gm_blocks(text):
        header = f"{n} {len(rows)}"
        try:
            out.append(
                LinearCode.from_gm(
                    "\n".join([header] + rows),
                    allow_rank_deficient=allow_dependent,
                )
            )
        except (ParseError, ValidationError) as exc:
            raise type(exc)(f"block at line {lineno}: {exc}") from exc
    if not out:
        raise ParseError("no generator matrix found in file")
    return out


def ingest(
    path, format: str = "gm", allow_dependent: bool = False
) -> IngestResult:
    """Read an external code database, re-verifying every record.

    Generator-matrix input is validated (full rank unless overridden,
    self-dual) and every invariant is computed fresh.  Catalog-line input
    additionally compares the stated minimum weight, weight-4 count,
    automorphism order, and canonical hash against recomputation; any
    drift is reported per record, never silently patched.
    """
    records: list[CatalogRecord] = []
    mismatches: list[str] = []
    if format == "gm":
        for code in load_gm_codes(path, allow_dependent):
            records.append(make_record(code, "ingest"))
    elif format in ("catalog-line", "catalog"):
        text = Path(path).read_text()
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            stated = parse_record_line(line, lineno)
            rec, drift = record_from_stated(stated)
            records.append(rec)
            mismatches.extend(drift)
    else:
        raise ValidationError(f"unknown ingest format {format!r}")
    return IngestResult(tuple(records), tuple(mismatches))
