"""YAML repository and problem files.

Repository::

    events: [a, b, c]
    deps:                 # event -> alternatives; omitted events need nothing
      a: [[b], [c]]
    versions: {b: c}      # optional, lower -> higher
    conflicts: [[a, b]]   # optional

Problem::

    formula: "a[b] | a[c]"
    objective: {kind: cardinality}
    # {kind: weights, weights: {a: 2.5}, default: 0}
    # {kind: conflicts, pairs: [[a, b]]}   pairs default to the repository's
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .dsc import DEFAULT_MAX_SETS, CompletionDelta, Dsc, PreDsc, UnknownEvent, complete_pre_dsc, completion_delta
from .formula import parse_formula
from .solver import Cardinality, ConflictCount, DependencyProblem, WeightedSum
from .versioning import VersionMap, validate_version_map


class RepoFormatError(ValueError):
    pass


class ValidationFailed(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


@dataclass
class Repository:
    dsc: Dsc
    versions: VersionMap = field(default_factory=VersionMap)
    conflicts: frozenset = frozenset()
    delta: CompletionDelta = field(default_factory=CompletionDelta)
    warnings: list[str] = field(default_factory=list)


def _names(x, what: str) -> list[str]:
    if not isinstance(x, list) or not all(isinstance(e, (str, int)) for e in x):
        raise RepoFormatError(f"{what} must be a list of names")
    return [str(e) for e in x]


def parse_repo(data: dict) -> tuple[PreDsc, VersionMap, frozenset]:
    if not isinstance(data, dict):
        raise RepoFormatError("repository file must be a mapping")
    extra = set(data) - {"events", "deps", "versions", "conflicts"}
    if extra:
        raise RepoFormatError(f"unknown keys: {sorted(extra)}")
    events = _names(data.get("events", []), "events")
    raw = data.get("deps") or {}
    if not isinstance(raw, dict):
        raise RepoFormatError("deps must be a mapping")
    deps = {}
    for e, alts in raw.items():
        e = str(e)
        if e not in events:
            raise UnknownEvent(e, "deps")
        if not isinstance(alts, list):
            raise RepoFormatError(f"deps of {e} must be a list of lists")
        deps[e] = [_names(s or [], f"a dependency set of {e}") for s in alts]
    for e in events:
        deps.setdefault(e, [[]])
    pre = PreDsc.from_dict({e: deps[e] for e in events})
    versions = {str(k): str(v) for k, v in (data.get("versions") or {}).items()}
    for name in list(versions) + list(versions.values()):
        if name not in events:
            raise UnknownEvent(name, "versions")
    conflicts = set()
    for pair in data.get("conflicts") or []:
        pair = _names(pair, "a conflict")
        if len(set(pair)) != 2:
            raise RepoFormatError(f"conflict {pair} is not a pair of distinct events")
        for name in pair:
            if name not in events:
                raise UnknownEvent(name, "conflicts")
        conflicts.add(frozenset(pair))
    return pre, VersionMap(versions), frozenset(conflicts)


def load_repo(data: dict, max_sets: int = DEFAULT_MAX_SETS) -> Repository:
    """Parse, complete, validate."""
    pre, versions, conflicts = parse_repo(data)
    d = complete_pre_dsc(pre, max_sets)
    delta = completion_delta(pre, d)
    warnings = [f"event {e} removed by completion" for e in delta.deleted_events]
    kept = {}
    for lo, hi in versions.raise_.items():
        if lo in d.deps and hi in d.deps:
            kept[lo] = hi
        else:
            warnings.append(f"version {lo} -> {hi} dropped: event removed")
    versions = VersionMap(kept)
    rep = validate_version_map(d, versions)
    if not rep.ok:
        raise ValidationFailed(rep.errors)
    warnings += rep.warnings
    dropped = {c for c in conflicts if not c <= set(d.events)}
    for c in sorted(dropped, key=sorted):
        warnings.append(f"conflict {'/'.join(sorted(c))} dropped: event removed")
    return Repository(d, versions, conflicts - dropped, delta, warnings)


def _read_yaml(path: str | Path):
    try:
        return yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as exc:
        raise RepoFormatError(f"{path}: {exc}") from exc


def ingest(path: str | Path, max_sets: int = DEFAULT_MAX_SETS) -> Repository:
    return load_repo(_read_yaml(path), max_sets)


def repo_to_data(repo: Repository) -> dict:
    d = repo.dsc.to_dict()
    data: dict = {"events": list(repo.dsc.events), "deps": d}
    if repo.versions:
        data["versions"] = dict(repo.versions.raise_)
    if repo.conflicts:
        data["conflicts"] = sorted(sorted(c) for c in repo.conflicts)
    return data


def dump_repo(repo: Repository) -> str:
    return yaml.safe_dump(repo_to_data(repo), sort_keys=False, default_flow_style=None)


def parse_problem(data: dict, repo: Repository | None = None) -> DependencyProblem:
    if not isinstance(data, dict) or "formula" not in data:
        raise RepoFormatError("problem file needs a formula")
    formula = parse_formula(str(data["formula"]))
    obj = data.get("objective") or {"kind": "cardinality"}
    kind = obj.get("kind", "cardinality")
    if kind == "cardinality":
        objective = Cardinality()
    elif kind == "weights":
        weights = {str(k): float(v) for k, v in (obj.get("weights") or {}).items()}
        try:
            objective = WeightedSum(weights, float(obj.get("default", 0.0)))
        except ValueError as exc:
            raise RepoFormatError(str(exc)) from exc
    elif kind == "conflicts":
        if "pairs" in obj:
            pairs = frozenset(frozenset(_names(p, "a conflict")) for p in obj["pairs"])
        else:
            pairs = repo.conflicts if repo is not None else frozenset()
        objective = ConflictCount(pairs)
    else:
        raise RepoFormatError(f"unknown objective kind {kind!r}")
    return DependencyProblem(formula, objective)


def load_problem(path: str | Path, repo: Repository | None = None) -> DependencyProblem:
    return parse_problem(_read_yaml(path), repo)
