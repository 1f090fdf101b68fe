"""Repository scanning, checksum-based deduplication, and inventory tables.

Every ``.smt2`` file is parsed, normalized, classified, and checksummed over
its canonical serialization.  Duplicates are detected across the whole scan;
the lexicographically first (repository, path) occurrence is retained.  The
table counts, per (repository, track) cell, the total number of conformant
benchmarks and the number of unique (non-duplicate) ones.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .fragment import NonTranslatableError, NormalizeOptions, normalize
from .model import Benchmark
from .parser import parse_file
from .printer import print_canonical
from .tracks import Track, classify


def checksum(b: Benchmark) -> str:
    """Lowercase hex SHA-256 digest of the canonical serialization; equal up
    to alpha-renaming implies equal digests."""
    return hashlib.sha256(print_canonical(b)).hexdigest()


@dataclass(slots=True)
class InventoryEntry:
    repository: str
    path: str
    track: Track
    checksum: Optional[str]
    is_duplicate: bool = False
    duplicate_of: Optional[str] = None
    error: Optional[str] = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "repository": self.repository,
                "path": self.path,
                "track": self.track.value,
                "checksum": self.checksum,
                "is_duplicate": self.is_duplicate,
                "duplicate_of": self.duplicate_of,
                "error": self.error,
            },
            sort_keys=True,
        )


@dataclass
class InventoryTable:
    # (repository, track) -> [total, unique]
    rows: dict[tuple[str, Track], list[int]] = field(default_factory=dict)

    def add(self, repository: str, track: Track, unique: bool) -> None:
        cell = self.rows.setdefault((repository, track), [0, 0])
        cell[0] += 1
        if unique:
            cell[1] += 1

    def cell(self, repository: str, track: Track) -> tuple[int, int]:
        total, unique = self.rows.get((repository, track), (0, 0))
        return total, unique

    def track_totals(self) -> dict[Track, tuple[int, int]]:
        out: dict[Track, list[int]] = {}
        for (_repo, track), (total, unique) in sorted(self.rows.items()):
            cell = out.setdefault(track, [0, 0])
            cell[0] += total
            cell[1] += unique
        return {t: (v[0], v[1]) for t, v in out.items()}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["repository", "track", "total", "unique"])
        for (repo, track), (total, unique) in sorted(self.rows.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
            w.writerow([repo, track.value, total, unique])
        for track, (total, unique) in sorted(self.track_totals().items(), key=lambda kv: kv[0].value):
            w.writerow(["(total)", track.value, total, unique])
        return buf.getvalue()


def scan(
    roots: Sequence[tuple[str, Path]],
    options: NormalizeOptions = NormalizeOptions(),
    write_normalized_to: Optional[Path] = None,
) -> tuple[list[InventoryEntry], InventoryTable]:
    """Scan benchmark repositories.

    Per-file failures become entries with track Unclassified and an error
    message; the scan never aborts on a bad file.  When
    ``write_normalized_to`` is given, the canonical bytes of each retained
    unique benchmark are written to ``<dir>/<repository>/<path>``.
    Unclassified entries are excluded from the table but kept in the entry
    list.
    """
    work: list[tuple[str, Path, Path]] = []
    for repo, root in roots:
        root = Path(root)
        for f in sorted(root.rglob("*.smt2")):
            work.append((repo, f.relative_to(root), f))
    work.sort(key=lambda item: (item[0], str(item[1])))

    entries: list[InventoryEntry] = []
    table = InventoryTable()
    first_seen: dict[str, str] = {}
    for repo, rel, full in work:
        rel_str = rel.as_posix()
        result = parse_file(full, repository=repo)
        if not result.ok:
            entries.append(
                InventoryEntry(repo, rel_str, Track.UNCLASSIFIED, None, error=result.errors[0].render())
            )
            continue
        try:
            bench = normalize(result.benchmark, options)
        except NonTranslatableError as e:
            entries.append(InventoryEntry(repo, rel_str, Track.UNCLASSIFIED, None, error=str(e)))
            continue
        track = classify(bench)
        digest = checksum(bench)
        entry = InventoryEntry(repo, rel_str, track, digest)
        origin_key = f"{repo}/{rel_str}"
        if digest in first_seen:
            entry.is_duplicate = True
            entry.duplicate_of = first_seen[digest]
        else:
            first_seen[digest] = origin_key
            if write_normalized_to is not None and track != Track.UNCLASSIFIED:
                dest = Path(write_normalized_to) / repo / rel_str
                dest.parent.mkdir(parents=True, exist_ok=True)
                dest.write_bytes(print_canonical(bench))
        entries.append(entry)
        if track != Track.UNCLASSIFIED:
            table.add(repo, track, unique=not entry.is_duplicate)
    return entries, table
