"""Benchmark rating from probe runs and per-repository quota selection.

Rating: two short probe runs per benchmark; A when both solve, B when
exactly one solves, C when neither does.  Selection draws up to N benchmarks
per rating class from each repository; when a class has fewer than its quota
the deficit is forwarded to the next-harder class (A toward B toward C), and
an unmet C quota is dropped.  Draws are uniformly random via a seeded
shuffle, so the same seed always reproduces the same selection.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Sequence


class Rating(str, Enum):
    A = "A"
    B = "B"
    C = "C"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class ProbeSpec:
    command: str
    wall_seconds: float

    def __post_init__(self) -> None:
        if self.wall_seconds <= 0:
            raise ValueError("probe timeout must be positive")


@dataclass(frozen=True, slots=True)
class ProbeConfig:
    probes: tuple[ProbeSpec, ProbeSpec]

    def __post_init__(self) -> None:
        if len(self.probes) != 2:
            raise ValueError("exactly two probes are required")


@dataclass(frozen=True, slots=True)
class SelectionQuota:
    repository: str
    n_r: int

    def __post_init__(self) -> None:
        if self.n_r < 1:
            raise ValueError("quota must be at least 1")


def is_solved(outcome: str) -> bool:
    return outcome in ("sat", "unsat")


def rate(first_solved: bool, second_solved: bool) -> Rating:
    """A: both probes solved; B: exactly one; C: neither."""
    solved = int(first_solved) + int(second_solved)
    return {2: Rating.A, 1: Rating.B, 0: Rating.C}[solved]


def quota_plan(a: int, b: int, c: int, n: int) -> tuple[int, int, int]:
    """Per-class take counts for availability (a, b, c) under quota n.

    The quota of each class is n plus the unmet part of the previous
    (easier) class; anything the C class cannot absorb is dropped."""
    take_a = min(a, n)
    deficit_a = n - take_a
    quota_b = n + deficit_a
    take_b = min(b, quota_b)
    deficit_b = quota_b - take_b
    quota_c = n + deficit_b
    take_c = min(c, quota_c)
    return take_a, take_b, take_c


@dataclass(slots=True)
class RepoSelection:
    repository: str
    n_r: Optional[int]  # None for whole-pool selection
    available: Optional[dict[Rating, int]]  # None when the pool is unrated
    taken: Optional[dict[Rating, int]]
    selected: list[str]

    @property
    def total(self) -> int:
        return len(self.selected)


@dataclass(slots=True)
class SelectionResult:
    repos: dict[str, RepoSelection] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(r.total for r in self.repos.values())

    def all_selected(self) -> list[str]:
        out: list[str] = []
        for repo in sorted(self.repos):
            out.extend(self.repos[repo].selected)
        return out


def _draw(ids: Sequence[str], count: int, seed_key: str) -> list[str]:
    pool = sorted(ids)
    rng = random.Random(seed_key)
    rng.shuffle(pool)  # Fisher-Yates
    return pool[:count]


def select(
    pools: Mapping[str, Mapping[Rating, Sequence[str]]],
    quotas: Sequence[SelectionQuota],
    seed: int,
) -> SelectionResult:
    """Quota selection over rated per-repository pools.

    ``pools`` maps repository to rating class to benchmark identifiers.
    Every repository in ``pools`` must have a quota.  Per-class draws are
    keyed by (seed, repository, rating), so adding a repository never
    perturbs another repository's draw.
    """
    quota_by_repo = {q.repository: q.n_r for q in quotas}
    missing = sorted(set(pools) - set(quota_by_repo))
    if missing:
        raise ValueError(f"no quota for repositories: {', '.join(missing)}")

    result = SelectionResult()
    for repo in sorted(pools):
        n = quota_by_repo[repo]
        per_class = {r: list(pools[repo].get(r, ())) for r in Rating}
        a, b, c = (len(per_class[r]) for r in (Rating.A, Rating.B, Rating.C))
        take_a, take_b, take_c = quota_plan(a, b, c, n)
        selected: list[str] = []
        for rating, count in ((Rating.A, take_a), (Rating.B, take_b), (Rating.C, take_c)):
            selected.extend(_draw(per_class[rating], count, f"{seed}:{repo}:{rating.value}"))
        result.repos[repo] = RepoSelection(
            repository=repo,
            n_r=n,
            available={Rating.A: a, Rating.B: b, Rating.C: c},
            taken={Rating.A: take_a, Rating.B: take_b, Rating.C: take_c},
            selected=selected,
        )
    return result


def select_all(pools: Mapping[str, object]) -> SelectionResult:
    """Select the entire pool of every repository (for tracks small enough
    to run in full).  Pools may be rated (mapping rating class to ids), in
    which case take counts equal availability, or plain id sequences."""
    result = SelectionResult()
    for repo in sorted(pools):
        pool = pools[repo]
        if isinstance(pool, Mapping):
            per_class = {r: sorted(pool.get(r, ())) for r in Rating}
            counts = {r: len(per_class[r]) for r in Rating}
            selected = per_class[Rating.A] + per_class[Rating.B] + per_class[Rating.C]
            result.repos[repo] = RepoSelection(repo, None, counts, dict(counts), selected)
        else:
            result.repos[repo] = RepoSelection(repo, None, None, None, sorted(pool))
    return result


def select_random(ids: Sequence[str], count: int, seed: int) -> list[str]:
    """Plain seeded random subset, for test-run style selections."""
    return _draw(ids, count, f"{seed}:random")
