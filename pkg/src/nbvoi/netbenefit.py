"""Net benefit estimators and decision curves.

Net benefit (NB) at a risk threshold ``z`` weighs true positives against
false positives at the exchange rate z/(1-z) implied by the threshold:

    NB_model = (1/n) * sum_i I(risk_i >= z) * (Y_i - (1 - Y_i) * z/(1-z))
    NB_all   = (1/n) * sum_i (Y_i - (1 - Y_i) * z/(1-z))
    NB_none  = 0

Classification is inclusive at the threshold: ``risk == z`` counts as
treated.  All estimators are plain sample means, so they remain
well-defined for degenerate samples (all events or all non-events).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

DEFAULT_MAX_THRESHOLD = 0.99


@dataclass(frozen=True)
class Threshold:
    """A decision threshold ``z`` strictly inside (0, 1).

    Thresholds at or above ``max_z`` (default 0.99) are rejected because the
    false-positive weight z/(1-z) blows up; pass a larger ``max_z`` to
    override.
    """

    z: float
    max_z: float = field(default=DEFAULT_MAX_THRESHOLD, compare=False)

    def __post_init__(self):
        if not 0.0 < self.z < 1.0:
            raise InputError(f"threshold must lie strictly inside (0, 1), got {self.z}")
        if self.z >= self.max_z:
            raise InputError(
                f"threshold {self.z} >= {self.max_z}; the false-positive weight "
                "z/(1-z) is considered unstable there (raise max_z to override)"
            )

    @property
    def harm_weight(self) -> float:
        """Relative weight z/(1-z) of a false positive vs a true positive."""
        return self.z / (1.0 - self.z)


def make_thresholds(values, max_z: float = DEFAULT_MAX_THRESHOLD) -> tuple[Threshold, ...]:
    """Build a strictly increasing tuple of thresholds from raw values."""
    ts = tuple(Threshold(float(v), max_z=max_z) for v in values)
    if not ts:
        raise InputError("threshold grid must be non-empty")
    zs = [t.z for t in ts]
    if any(b <= a for a, b in zip(zs, zs[1:])):
        raise InputError("threshold grid must be strictly increasing")
    return ts


def default_grid() -> tuple[Threshold, ...]:
    """Default decision-curve grid: 0.001 to 0.200 in steps of 0.001."""
    return make_thresholds(np.arange(1, 201) / 1000.0)


class ValidationSample:
    """Paired binary outcomes and predicted risks from a validation dataset.

    Parameters
    ----------
    outcomes : array-like of {0, 1}
    risks : array-like of floats in [0, 1], same length
    """

    __slots__ = ("outcomes", "risks")

    def __init__(self, outcomes, risks):
        y = np.asarray(outcomes)
        p = np.array(risks, dtype=float)  # copy: the sample owns its storage
        if y.ndim != 1 or p.ndim != 1:
            raise InputError("outcomes and risks must be one-dimensional")
        if y.shape[0] != p.shape[0]:
            raise InputError(
                f"outcomes (n={y.shape[0]}) and risks (n={p.shape[0]}) differ in length"
            )
        if y.shape[0] < 1:
            raise InputError("sample must contain at least one observation")
        if not np.isin(y, (0, 1)).all():
            raise InputError("outcomes must be binary 0/1")
        if not np.isfinite(p).all() or p.min() < 0.0 or p.max() > 1.0:
            raise InputError("risks must lie in [0, 1]")
        y = y.astype(np.int64)
        y.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "outcomes", y)
        object.__setattr__(self, "risks", p)

    def __setattr__(self, name, value):
        raise AttributeError("ValidationSample is immutable")

    def __reduce__(self):
        return (ValidationSample, (self.outcomes, self.risks))

    @property
    def n(self) -> int:
        return self.outcomes.shape[0]

    @property
    def n_events(self) -> int:
        return int(self.outcomes.sum())

    @property
    def prevalence(self) -> float:
        return self.n_events / self.n

    def subset(self, indices) -> "ValidationSample":
        return ValidationSample(self.outcomes[indices], self.risks[indices])

    def __repr__(self):
        return f"ValidationSample(n={self.n}, events={self.n_events})"


def outcome_terms(outcomes: np.ndarray, t: Threshold) -> np.ndarray:
    """Per-row payoff ``Y - (1-Y) * z/(1-z)``: 1.0 for events, -z/(1-z) else."""
    return np.where(outcomes == 1, 1.0, -t.harm_weight)


def nb_model(sample: ValidationSample, t: Threshold) -> float:
    """Net benefit of treating those with ``risk >= z``."""
    a = outcome_terms(sample.outcomes, t)
    b = np.where(sample.risks >= t.z, a, 0.0)
    return float(np.sum(b) / sample.n)


def nb_all(sample: ValidationSample, t: Threshold) -> float:
    """Net benefit of treating everyone: prevalence - (1-prevalence)*z/(1-z)."""
    a = outcome_terms(sample.outcomes, t)
    return float(np.sum(a) / sample.n)


def weighted_nb(sample: ValidationSample, weights, t: Threshold) -> tuple[float, float]:
    """Observation-reweighted ``(nb_model, nb_all)``.

    ``weights`` is a :class:`~nbvoi.resample.WeightVector` or a bare array of
    non-negative weights of length n summing to 1.  A multinomial weight
    vector (one carrying integer resample counts) is evaluated by summing
    over the materialized resample, so its result is bit-identical to
    computing ``nb_model``/``nb_all`` on the resampled dataset.
    """
    counts = getattr(weights, "counts", None)
    w = np.asarray(getattr(weights, "weights", weights), dtype=float)
    if w.shape != (sample.n,):
        raise InputError(
            f"weight vector length {w.shape} does not match sample size {sample.n}"
        )
    if w.min() < 0.0:
        raise InputError("weights must be nonnegative")
    total = float(w.sum())
    if abs(total - 1.0) > 1e-8:
        raise InputError(f"weights must sum to 1, got {total!r}")

    a = outcome_terms(sample.outcomes, t)
    b = np.where(sample.risks >= t.z, a, 0.0)
    if counts is not None:
        counts = np.asarray(counts)
        rep = np.repeat(np.arange(sample.n), counts)
        m = int(counts.sum())
        return float(np.sum(b[rep]) / m), float(np.sum(a[rep]) / m)
    return float(np.dot(w, b)), float(np.dot(w, a))


@dataclass(frozen=True)
class NbEstimate:
    """Point estimates of the three strategies' net benefit at one threshold."""

    nb_model: float
    nb_all: float
    threshold: Threshold
    nb_none: float = 0.0

    def __post_init__(self):
        if self.nb_none != 0.0:
            raise InputError("treat-none net benefit is 0 by definition")


def nb_estimate(sample: ValidationSample, t: Threshold) -> NbEstimate:
    return NbEstimate(nb_model=nb_model(sample, t), nb_all=nb_all(sample, t), threshold=t)


@dataclass(frozen=True)
class DecisionCurve:
    """Net benefit of model / treat-all / treat-none over a threshold grid.

    ``model_ci`` and ``all_ci`` are percentile bootstrap bands of shape
    (T, 2), present when ``n_boot > 0``.  ``degenerate`` flags thresholds at
    which no observation reaches the threshold, where the model NB is 0 in
    every replicate and the interval collapses to a point.
    """

    thresholds: tuple[Threshold, ...]
    nb_model: np.ndarray
    nb_all: np.ndarray
    ci_level: float
    n_boot: int
    method: str | None = None
    seed: int | None = None
    model_ci: np.ndarray | None = None
    all_ci: np.ndarray | None = None
    degenerate: np.ndarray | None = None

    def __post_init__(self):
        zs = [t.z for t in self.thresholds]
        if any(b <= a for a, b in zip(zs, zs[1:])):
            raise InputError("decision curve grid must be strictly increasing")
        for ci in (self.model_ci, self.all_ci):
            if ci is not None and np.any(ci[:, 0] > ci[:, 1]):
                raise InputError("confidence bounds must satisfy lower <= upper")

    @property
    def nb_none(self) -> np.ndarray:
        return np.zeros(len(self.thresholds))

    @property
    def has_ci(self) -> bool:
        return self.model_ci is not None

    def to_records(self) -> list[dict]:
        """Rows for serialization, one per threshold."""
        rows = []
        for i, t in enumerate(self.thresholds):
            row = {
                "threshold": t.z,
                "nb_model": float(self.nb_model[i]),
                "nb_all": float(self.nb_all[i]),
                "nb_none": 0.0,
            }
            if self.has_ci:
                row["nb_model_lo"] = float(self.model_ci[i, 0])
                row["nb_model_hi"] = float(self.model_ci[i, 1])
                row["nb_all_lo"] = float(self.all_ci[i, 0])
                row["nb_all_hi"] = float(self.all_ci[i, 1])
                row["degenerate"] = bool(self.degenerate[i])
            rows.append(row)
        return rows


def decision_curve(
    sample: ValidationSample,
    grid,
    n_boot: int = 10_000,
    ci_level: float = 0.95,
    method: str = "ordinary",
    seed: int = 0,
) -> DecisionCurve:
    """Decision curve with optional percentile bootstrap confidence bands.

    Point estimates come from the original sample.  When ``n_boot > 0``, one
    shared stream of ``n_boot`` bootstrap replicates is evaluated at every
    grid threshold (each replicate re-weights the whole curve), and the
    per-threshold CI is the percentile interval of the replicate NBs.
    ``n_boot = 0`` disables the bands entirely.
    """
    if isinstance(grid, Threshold):
        grid = (grid,)
    grid = tuple(grid)
    if grid and all(isinstance(t, Threshold) for t in grid):
        ts = grid
        zs = [t.z for t in ts]
        if any(b <= a for a, b in zip(zs, zs[1:])):
            raise InputError("threshold grid must be strictly increasing")
    else:
        ts = make_thresholds(grid)
    if not 0.0 < ci_level < 1.0:
        raise InputError("ci_level must lie in (0, 1)")
    if n_boot < 0:
        raise InputError("n_boot must be >= 0")

    point_model = np.array([nb_model(sample, t) for t in ts])
    point_all = np.array([nb_all(sample, t) for t in ts])

    if n_boot == 0:
        return DecisionCurve(
            thresholds=ts, nb_model=point_model, nb_all=point_all,
            ci_level=ci_level, n_boot=0,
        )

    from .resample import bootstrap_nb_draws_grid

    draws = bootstrap_nb_draws_grid(sample, ts, n_reps=n_boot, method=method, seed=seed)
    lo_q, hi_q = 0.5 * (1.0 - ci_level), 0.5 * (1.0 + ci_level)
    # draws.draws has shape (n_boot, T, 2): columns (model, treat_all)
    qs = np.quantile(draws.draws, [lo_q, hi_q], axis=0)
    model_ci = qs[:, :, 0].T.copy()
    all_ci = qs[:, :, 1].T.copy()
    degenerate = np.array([int(np.sum(sample.risks >= t.z)) == 0 for t in ts])
    return DecisionCurve(
        thresholds=ts, nb_model=point_model, nb_all=point_all,
        ci_level=ci_level, n_boot=n_boot, method=method, seed=seed,
        model_ci=model_ci, all_ci=all_ci, degenerate=degenerate,
    )
