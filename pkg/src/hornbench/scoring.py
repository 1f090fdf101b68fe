"""Score tables, rankings with tie-breaks, unique-solve counts, result
inconsistency detection, and version comparison.

Score is the number of sat or unsat answers; CPU and wall-clock totals
include time spent on unknown answers.  Rankings are descending by score,
ties broken by ascending CPU time (wall-clock time in the parallel regime);
hors-concours rows are listed in sort position but carry no place number.
Missing (solver, benchmark) pairs count as unknown with zero time.
"""

from __future__ import annotations

import csv
import io
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .harness import RunResult

CPU_TIEBREAK = "cpu_tiebreak"
WALL_TIEBREAK = "wall_tiebreak"

UNIQUE_SCOPE_ALL = "all"
UNIQUE_SCOPE_COMPETING = "competing"

CSV_COLUMNS = ["Solver", "Score", "#sat", "#unsat", "CPU time/s", "Wall-clock/s", "#unique"]


@dataclass(slots=True)
class ScoreRow:
    solver: str
    score: int
    n_sat: int
    n_unsat: int
    cpu_seconds_total: float
    wall_seconds_total: float
    n_unique: int
    hors_concours: bool = False


@dataclass(slots=True)
class RankedRow:
    row: ScoreRow
    place: Optional[int]  # None for hors-concours rows
    tied: bool  # exact tie on score and tie-break time


@dataclass(slots=True)
class Ranking:
    entries: list[RankedRow]
    track_kind: str  # cpu_tiebreak | wall_tiebreak


@dataclass(slots=True)
class Inconsistency:
    benchmark_checksum: str
    sat_solvers: list[str]
    unsat_solvers: list[str]


@dataclass(slots=True)
class VersionComparison:
    counts_v1: tuple[int, int]  # (#sat, #unsat)
    counts_v2: tuple[int, int]
    transitions: dict[tuple[str, str], int]  # (outcome_v1, outcome_v2) -> count, differing only


def _check_unique_pairs(results: Iterable[RunResult]) -> None:
    seen: set[tuple[str, str]] = set()
    for r in results:
        key = (r.solver, r.benchmark_checksum)
        if key in seen:
            raise ValueError(f"duplicate result for solver '{r.solver}' on benchmark {r.benchmark_checksum}")
        seen.add(key)


def unique_counts(
    results: Sequence[RunResult],
    hors_concours: frozenset[str] = frozenset(),
    scope: str = UNIQUE_SCOPE_ALL,
) -> dict[str, int]:
    """Per solver, the number of answers on benchmarks where every other
    solver returned unknown.  With scope 'competing', hors-concours solvers
    neither block uniqueness nor receive counts."""
    by_benchmark: dict[str, list[RunResult]] = defaultdict(list)
    counts: dict[str, int] = defaultdict(int)
    for r in results:
        if scope == UNIQUE_SCOPE_COMPETING and r.solver in hors_concours:
            continue
        by_benchmark[r.benchmark_checksum].append(r)
    for rs in by_benchmark.values():
        answering = [r.solver for r in rs if r.outcome in ("sat", "unsat")]
        if len(answering) == 1:
            counts[answering[0]] += 1
    return dict(counts)


def score_track(
    results: Sequence[RunResult],
    benchmarks: set[str],
    hors_concours: frozenset[str] = frozenset(),
    unique_scope: str = UNIQUE_SCOPE_ALL,
) -> list[ScoreRow]:
    """One row per solver appearing in the results of a single track.
    A duplicate (solver, benchmark) pair or a result for a benchmark outside
    the expected set indicates a corrupt journal and is a hard error."""
    _check_unique_pairs(results)
    for r in results:
        if r.benchmark_checksum not in benchmarks:
            raise ValueError(f"result for unexpected benchmark {r.benchmark_checksum}")
    uniques = unique_counts(results, hors_concours, unique_scope)
    per_solver: dict[str, list[RunResult]] = defaultdict(list)
    for r in results:
        per_solver[r.solver].append(r)
    rows = []
    for solver in sorted(per_solver):
        rs = per_solver[solver]
        n_sat = sum(1 for r in rs if r.outcome == "sat")
        n_unsat = sum(1 for r in rs if r.outcome == "unsat")
        rows.append(
            ScoreRow(
                solver=solver,
                score=n_sat + n_unsat,
                n_sat=n_sat,
                n_unsat=n_unsat,
                cpu_seconds_total=sum(r.cpu_seconds for r in rs),
                wall_seconds_total=sum(r.wall_seconds for r in rs),
                n_unique=uniques.get(solver, 0),
                hors_concours=solver in hors_concours,
            )
        )
    return rows


def rank(rows: Sequence[ScoreRow], track_kind: str = CPU_TIEBREAK) -> Ranking:
    """Order rows descending by score with the time tie-break; exact ties
    fall back to solver-name order and are flagged."""
    if track_kind not in (CPU_TIEBREAK, WALL_TIEBREAK):
        raise ValueError(f"unknown track kind {track_kind!r}")

    def time_of(row: ScoreRow) -> float:
        return row.cpu_seconds_total if track_kind == CPU_TIEBREAK else row.wall_seconds_total

    ordered = sorted(rows, key=lambda r: (-r.score, time_of(r), r.solver))
    keys = [(r.score, time_of(r)) for r in ordered]
    entries = []
    place = 0
    for i, row in enumerate(ordered):
        tied = (i > 0 and keys[i] == keys[i - 1]) or (i + 1 < len(keys) and keys[i] == keys[i + 1])
        if row.hors_concours:
            entries.append(RankedRow(row, None, tied))
        else:
            place += 1
            entries.append(RankedRow(row, place, tied))
    return Ranking(entries, track_kind)


def find_inconsistencies(results: Sequence[RunResult]) -> list[Inconsistency]:
    """Benchmarks with at least one sat and at least one unsat answer."""
    sat: dict[str, list[str]] = defaultdict(list)
    unsat: dict[str, list[str]] = defaultdict(list)
    for r in results:
        if r.outcome == "sat":
            sat[r.benchmark_checksum].append(r.solver)
        elif r.outcome == "unsat":
            unsat[r.benchmark_checksum].append(r.solver)
    out = []
    for digest in sorted(set(sat) & set(unsat)):
        out.append(Inconsistency(digest, sorted(sat[digest]), sorted(unsat[digest])))
    return out


def compare_versions(results_v1: Sequence[RunResult], results_v2: Sequence[RunResult]) -> VersionComparison:
    """Per-version sat/unsat counts plus the per-benchmark outcome
    transitions between two runs over the same benchmark set."""

    def index(results: Sequence[RunResult], label: str) -> dict[str, str]:
        out: dict[str, str] = {}
        for r in results:
            if r.benchmark_checksum in out:
                raise ValueError(f"duplicate benchmark {r.benchmark_checksum} in {label} results")
            out[r.benchmark_checksum] = r.outcome
        return out

    v1 = index(results_v1, "first")
    v2 = index(results_v2, "second")
    if set(v1) != set(v2):
        raise ValueError("version comparison requires identical benchmark sets")

    def counts(outcomes: Iterable[str]) -> tuple[int, int]:
        c = Counter(outcomes)
        return c.get("sat", 0), c.get("unsat", 0)

    transitions: Counter = Counter()
    for digest, o1 in v1.items():
        o2 = v2[digest]
        if o1 != o2:
            transitions[(o1, o2)] += 1
    return VersionComparison(counts(v1.values()), counts(v2.values()), dict(transitions))


# --- rendering ---


def score_table_csv(rows: Sequence[ScoreRow], track_kind: str = CPU_TIEBREAK) -> str:
    ranking = rank(rows, track_kind)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for e in ranking.entries:
        r = e.row
        w.writerow(
            [
                r.solver,
                r.score,
                r.n_sat,
                r.n_unsat,
                f"{r.cpu_seconds_total:.3f}",
                f"{r.wall_seconds_total:.3f}",
                r.n_unique,
            ]
        )
    return buf.getvalue()


def render_ranking(ranking: Ranking) -> str:
    lines = []
    for e in ranking.entries:
        r = e.row
        place = f"{e.place}." if e.place is not None else "hc"
        tie = "  [exact tie, name order]" if e.tied else ""
        time_col = r.cpu_seconds_total if ranking.track_kind == CPU_TIEBREAK else r.wall_seconds_total
        lines.append(f"{place:>4} {r.solver:<30} score={r.score:<6} time={time_col:.3f}s unique={r.n_unique}{tie}")
    return "\n".join(lines) + "\n"
