"""Pipeline configuration: a single YAML file with a validated schema.

Top-level keys: seed (required), output_dir, roots (repository name to
directory), probes (exactly two command/timeout pairs, required when any
track selects by quota), probe_parallelism, solvers (name, command template,
hors_concours flag), and tracks.  Each track entry names a run: its
``benchmarks`` field (default: the entry key) picks the benchmark track,
``selection`` is either the string ``all`` or ``{quotas: {repo: N}}``,
``limits`` holds wall/cpu/memory/cores plus worker parallelism, and
``tiebreak`` is cpu or wall (default wall when no cpu limit is set).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from .harness import ResourceLimits
from .selection import ProbeSpec
from .tracks import TRACK_BY_VALUE, Track


class ConfigError(Exception):
    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass(slots=True)
class SolverConfig:
    name: str
    command: str
    hors_concours: bool = False


@dataclass(slots=True)
class TrackPlan:
    name: str  # run name, e.g. "LRA-TS-par"
    source: Track  # benchmark track whose selection this run uses
    quotas: Optional[dict[str, int]]  # None means select the whole pool
    limits: ResourceLimits
    parallelism: int = 1
    tiebreak: str = "cpu"  # cpu | wall
    solvers: Optional[list[str]] = None  # None means all configured solvers


@dataclass(slots=True)
class PipelineConfig:
    seed: int
    output_dir: Path
    roots: dict[str, Path]
    solvers: list[SolverConfig]
    tracks: dict[str, TrackPlan]
    probes: list[ProbeSpec] = field(default_factory=list)
    probe_parallelism: int = 2

    def solver_by_name(self, name: str) -> SolverConfig:
        for s in self.solvers:
            if s.name == name:
                return s
        raise KeyError(name)

    def hors_concours_names(self) -> frozenset[str]:
        return frozenset(s.name for s in self.solvers if s.hors_concours)


def _limits_from(raw: dict, errors: list[str], where: str) -> Optional[ResourceLimits]:
    if not isinstance(raw, dict) or "wall_seconds" not in raw:
        errors.append(f"{where}: limits must set wall_seconds")
        return None
    try:
        return ResourceLimits(
            wall_seconds=float(raw["wall_seconds"]),
            cpu_seconds=float(raw["cpu_seconds"]) if raw.get("cpu_seconds") is not None else None,
            memory_bytes=int(raw["memory_bytes"]) if raw.get("memory_bytes") is not None else None,
            cores=int(raw["cores"]) if raw.get("cores") is not None else None,
        )
    except (ValueError, TypeError) as e:
        errors.append(f"{where}: {e}")
        return None


def parse_config(raw: dict, base_dir: Path) -> PipelineConfig:
    """Validate a loaded YAML document; raises ConfigError listing every
    problem found.  Relative paths resolve against the config file's
    directory."""
    errors: list[str] = []
    if not isinstance(raw, dict):
        raise ConfigError(["config must be a mapping"])

    seed = raw.get("seed")
    if not isinstance(seed, int) or isinstance(seed, bool):
        errors.append("seed is mandatory and must be an integer")
        seed = 0

    out_raw = raw.get("output_dir")
    if not out_raw:
        errors.append("output_dir is mandatory")
        output_dir = base_dir / "out"
    else:
        output_dir = (base_dir / str(out_raw)).resolve()

    roots: dict[str, Path] = {}
    raw_roots = raw.get("roots") or {}
    if not isinstance(raw_roots, dict) or not raw_roots:
        errors.append("roots must be a non-empty mapping of repository name to directory")
    else:
        for name, d in raw_roots.items():
            p = (base_dir / str(d)).resolve()
            if not p.is_dir():
                errors.append(f"root '{name}': directory {p} does not exist")
            roots[str(name)] = p

    solvers: list[SolverConfig] = []
    names_seen: set[str] = set()
    for i, s in enumerate(raw.get("solvers") or []):
        if not isinstance(s, dict) or "name" not in s or "command" not in s:
            errors.append(f"solvers[{i}]: needs name and command")
            continue
        name = str(s["name"])
        if name in names_seen:
            errors.append(f"solvers[{i}]: duplicate solver name '{name}'")
        names_seen.add(name)
        solvers.append(SolverConfig(name, str(s["command"]), bool(s.get("hors_concours", False))))
    if not solvers:
        errors.append("at least one solver is required")

    probes: list[ProbeSpec] = []
    for i, p in enumerate(raw.get("probes") or []):
        if not isinstance(p, dict) or "command" not in p or "wall_seconds" not in p:
            errors.append(f"probes[{i}]: needs command and wall_seconds")
            continue
        try:
            probes.append(ProbeSpec(str(p["command"]), float(p["wall_seconds"])))
        except ValueError as e:
            errors.append(f"probes[{i}]: {e}")

    probe_parallelism = raw.get("probe_parallelism", 2)
    if not isinstance(probe_parallelism, int) or probe_parallelism < 1:
        errors.append("probe_parallelism must be a positive integer")
        probe_parallelism = 1

    tracks: dict[str, TrackPlan] = {}
    any_quota = False
    raw_tracks = raw.get("tracks") or {}
    if not isinstance(raw_tracks, dict) or not raw_tracks:
        errors.append("tracks must be a non-empty mapping")
        raw_tracks = {}
    for name, t in raw_tracks.items():
        where = f"tracks.{name}"
        if not isinstance(t, dict):
            errors.append(f"{where}: must be a mapping")
            continue
        source_name = str(t.get("benchmarks", name))
        source = TRACK_BY_VALUE.get(source_name)
        if source is None or source == Track.UNCLASSIFIED:
            errors.append(f"{where}: unknown benchmark track '{source_name}'")
            continue
        selection = t.get("selection")
        quotas: Optional[dict[str, int]] = None
        if selection == "all":
            quotas = None
        elif isinstance(selection, dict) and isinstance(selection.get("quotas"), dict):
            quotas = {}
            for repo, n in selection["quotas"].items():
                if str(repo) not in roots:
                    errors.append(f"{where}: quota for unknown repository '{repo}'")
                if not isinstance(n, int) or n < 1:
                    errors.append(f"{where}: quota for '{repo}' must be a positive integer")
                else:
                    quotas[str(repo)] = n
            any_quota = True
        else:
            errors.append(f"{where}: selection must be 'all' or {{quotas: {{repo: N}}}}")
            continue
        limits = _limits_from(t.get("limits") or {}, errors, where)
        if limits is None:
            continue
        parallelism = t.get("parallelism", 1)
        if not isinstance(parallelism, int) or parallelism < 1:
            errors.append(f"{where}: parallelism must be a positive integer")
            parallelism = 1
        tiebreak = t.get("tiebreak") or ("cpu" if limits.cpu_seconds is not None else "wall")
        if tiebreak not in ("cpu", "wall"):
            errors.append(f"{where}: tiebreak must be cpu or wall")
            tiebreak = "cpu"
        track_solvers = t.get("solvers")
        if track_solvers is not None:
            track_solvers = [str(s) for s in track_solvers]
            unknown = [s for s in track_solvers if s not in names_seen]
            if unknown:
                errors.append(f"{where}: unknown solvers: {', '.join(unknown)}")
        tracks[str(name)] = TrackPlan(
            name=str(name),
            source=source,
            quotas=quotas,
            limits=limits,
            parallelism=parallelism,
            tiebreak=tiebreak,
            solvers=track_solvers,
        )

    if any_quota and len(probes) != 2:
        errors.append("exactly two probes are required when any track selects by quota")

    if errors:
        raise ConfigError(errors)
    return PipelineConfig(
        seed=seed,
        output_dir=output_dir,
        roots=roots,
        solvers=solvers,
        tracks=tracks,
        probes=probes,
        probe_parallelism=probe_parallelism,
    )


def load_config(path: Path) -> PipelineConfig:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as e:
        raise ConfigError([f"invalid YAML: {e}"])
    return parse_config(raw, path.parent.resolve())
