"""Seeded random hyperparameter search with F1-first model ranking.

Each trial samples the space independently (log-uniform for scale
parameters like C), runs the full cross-validation, and is ranked by
mean F1 with cross-entropy and then positive-class Brier score as
tiebreakers. Per-trial failures are recorded, not fatal. Deterministic
per seed: same space, budget, seed and data give the same trial sequence
and the same ranking.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .crossval import CvResult, run_cv
from .errors import ConfigError, NoSuccessfulTrials
from .pipeline import PipelineSpec, TrainedPipeline, fit_pipeline
from .randomness import stream
from .stratify import FoldAssignment


@dataclass(frozen=True)
class ParamDomain:
    """categorical: values drawn from `choices`; int: inclusive range;
    logreal: log-uniform over [lo, hi]."""

    kind: str
    choices: tuple = ()
    lo: float = 0.0
    hi: float = 0.0

    def validate(self, name: str) -> None:
        if self.kind == "categorical":
            if not self.choices:
                raise ConfigError(f"{name}: empty categorical domain")
        elif self.kind in ("int", "logreal"):
            if not self.lo <= self.hi:
                raise ConfigError(f"{name}: bounds out of order")
            if self.kind == "logreal" and self.lo <= 0:
                raise ConfigError(f"{name}: log-uniform bounds must be positive")
        else:
            raise ConfigError(f"{name}: unknown domain kind {self.kind!r}")

    def sample(self, rng):
        if self.kind == "categorical":
            return self.choices[int(rng.integers(0, len(self.choices)))]
        if self.kind == "int":
            return int(rng.integers(int(self.lo), int(self.hi) + 1))
        return float(math.exp(rng.uniform(math.log(self.lo), math.log(self.hi))))


ParamSpace = dict[str, ParamDomain]


def categorical(*choices) -> ParamDomain:
    return ParamDomain(kind="categorical", choices=tuple(choices))


def int_range(lo: int, hi: int) -> ParamDomain:
    return ParamDomain(kind="int", lo=lo, hi=hi)


def log_uniform(lo: float, hi: float) -> ParamDomain:
    return ParamDomain(kind="logreal", lo=lo, hi=hi)


def default_space(classifier: str, with_svd: bool = False) -> ParamSpace:
    """Search bounds bracketing every winning configuration we target."""
    space: ParamSpace = {}
    if with_svd:
        space["svd_k"] = int_range(50, 300)
    if classifier == "logreg":
        space["C"] = log_uniform(1e-2, 1e5)
        space["penalty"] = categorical("l1", "l2")
        space["class_weight"] = categorical(None, "balanced")
    elif classifier == "svm":
        space["C"] = log_uniform(1e-2, 1e5)
    elif classifier == "forest":
        space["n_estimators"] = int_range(50, 800)
        space["criterion"] = categorical("gini", "entropy")
        space["class_weight"] = categorical(None, "balanced_subsample")
    else:
        raise ConfigError(f"unknown classifier {classifier!r}")
    return space


def load_space(path: str | Path) -> ParamSpace:
    """Read a space from JSON: {"name": {"kind": ..., ...}, ...}."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    space: ParamSpace = {}
    for name, d in raw.items():
        if d.get("kind") == "categorical":
            dom = ParamDomain(kind="categorical",
                              choices=tuple(None if c is None else c for c in d["choices"]))
        else:
            dom = ParamDomain(kind=d["kind"], lo=float(d["lo"]), hi=float(d["hi"]))
        dom.validate(name)
        space[name] = dom
    return space


@dataclass
class Trial:
    index: int
    params: dict
    result: CvResult | None = None
    error: str | None = None

    @property
    def succeeded(self) -> bool:
        return self.result is not None

    def rank_key(self) -> tuple:
        if not self.succeeded:
            return (1, 0.0, 0.0, 0.0, self.index)
        return (
            0,
            -self.result.mean("f1"),
            self.result.mean("cross_entropy"),
            self.result.mean("brier_positive"),
            self.index,
        )

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "params": {k: v for k, v in self.params.items()},
            "rank_key": list(self.rank_key()),
            "result": self.result.to_dict() if self.result else None,
            "error": self.error,
        }


def sample_params(space: ParamSpace, rng) -> dict:
    return {name: domain.sample(rng) for name, domain in sorted(space.items())}


def random_search(
    space: ParamSpace,
    budget: int,
    texts: Sequence[str],
    labels: Sequence[int],
    folds: FoldAssignment,
    base_spec: PipelineSpec,
    seed: int = 0,
) -> list[Trial]:
    """Evaluate `budget` sampled configurations; return trials sorted by
    the F1-then-CE-then-BS+ rank key."""
    if budget < 1:
        raise ConfigError("budget must be >= 1")
    for name, domain in space.items():
        domain.validate(name)
    trials: list[Trial] = []
    for index in range(budget):
        params = sample_params(space, stream(seed, 81, index))
        trial = Trial(index=index, params=params)
        try:
            spec = base_spec.with_params(**params)
            trial.result = run_cv(spec, list(texts), list(labels), folds)
        except Exception as exc:  # recorded, not fatal
            trial.error = f"{type(exc).__name__}: {exc}"
        trials.append(trial)
    trials.sort(key=Trial.rank_key)
    return trials


def best_pipeline(
    trials: Sequence[Trial], texts: Sequence[str], labels: Sequence[int],
    base_spec: PipelineSpec | None = None,
) -> TrainedPipeline:
    """Refit the top-ranked trial's configuration on all examples."""
    winners = [t for t in trials if t.succeeded]
    if not winners:
        raise NoSuccessfulTrials("no trial completed cross-validation")
    top = min(winners, key=Trial.rank_key)
    spec = top.result.spec if base_spec is None else base_spec.with_params(**top.params)
    return fit_pipeline(spec, list(texts), list(labels))
