"""Simulation studies: synthetic logistic data generation, sample-size
sweeps, without-replacement subsampling sweeps, and sanity metrics.

A sweep runs ``n_sims`` independent outer simulations at each sample size.
Each simulation builds a validation sample (synthetic draw or subsample),
computes EVPI per method and threshold, and the sweep reports the mean and
Monte Carlo standard error over simulations.  Cells are embarrassingly
parallel; the random substream of cell ``(size_index, sim_index)`` depends
only on the sweep seed and those indices, so worker count never changes
results.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy.special import expit
from scipy.stats import rankdata

from .errors import InputError, SmallEffectiveSampleWarning
from .netbenefit import Threshold, ValidationSample
from .resample import DATA_STREAM_ID, SWEEP_N_REPS
from .rng import substream
from .voi import ALL_METHODS, evpi_threshold_sweep


@dataclass(frozen=True)
class LogisticDgm:
    """Logistic outcome model over i.i.d. standard normal covariates:
    logit P(Y=1 | X) = intercept + slopes . X."""

    intercept: float
    slopes: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "slopes", tuple(float(s) for s in self.slopes))
        if len(self.slopes) == 0:
            raise InputError("at least one slope is required")
        vals = (self.intercept, *self.slopes)
        if not all(np.isfinite(v) for v in vals):
            raise InputError("coefficients must be finite")

    def risks(self, x: np.ndarray) -> np.ndarray:
        return expit(self.intercept + x @ np.asarray(self.slopes))


def generate_synthetic(dgm: LogisticDgm, n: int, rng: np.random.Generator) -> ValidationSample:
    """Simulate a validation sample whose predicted risks are the true
    conditional probabilities (the model under validation is correct)."""
    if n < 1:
        raise InputError("sample size must be >= 1")
    x = rng.standard_normal((n, len(dgm.slopes)))
    risks = dgm.risks(x)
    y = (rng.random(n) < risks).astype(np.int64)
    return ValidationSample(y, risks)


def c_statistic(sample: ValidationSample) -> float:
    """Probability a random event outranks a random non-event (ties count
    half); the Mann-Whitney form of the c-statistic."""
    n1 = sample.n_events
    n0 = sample.n - n1
    if n1 == 0 or n0 == 0:
        raise InputError("c-statistic requires at least one event and one non-event")
    ranks = rankdata(sample.risks)
    return float((ranks[sample.outcomes == 1].sum() - n1 * (n1 + 1) / 2.0) / (n1 * n0))


def true_nb_of_dgm(
    dgm: LogisticDgm,
    t: Threshold,
    n_mc: int = 1_000_000,
    *,
    rng: np.random.Generator,
    strategy: str = "model",
) -> float:
    """Monte Carlo estimate of the population net benefit of a strategy
    under the data-generating mechanism.

    The outcome is integrated out analytically given the covariates, so the
    only Monte Carlo error comes from the covariate draw.
    """
    if n_mc < 1:
        raise InputError("n_mc must be >= 1")
    if strategy == "none":
        return 0.0
    x = rng.standard_normal((n_mc, len(dgm.slopes)))
    pi = dgm.risks(x)
    c = t.harm_weight
    payoff = pi - (1.0 - pi) * c
    if strategy == "model":
        return float(np.mean(np.where(pi >= t.z, payoff, 0.0)))
    if strategy == "all":
        return float(np.mean(payoff))
    raise InputError(f"unknown strategy {strategy!r}")


def doubling_sizes(max_size: int, start: int = 250) -> tuple[int, ...]:
    """Default sweep ladder: ``start`` doubling each step, ending at
    ``max_size`` itself."""
    if max_size < 1 or start < 1:
        raise InputError("sizes must be positive")
    if start >= max_size:
        return (max_size,)
    sizes = []
    s = start
    while s < max_size:
        sizes.append(s)
        s *= 2
    sizes.append(max_size)
    return tuple(sizes)


@dataclass(frozen=True)
class SweepConfig:
    """Protocol of a sample-size sweep."""

    sizes: tuple[int, ...]
    thresholds: tuple[Threshold, ...]
    n_sims: int = 100
    n_reps: int = SWEEP_N_REPS
    methods: tuple[str, ...] = ALL_METHODS
    seed: int = 0
    n_workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        object.__setattr__(self, "thresholds", tuple(self.thresholds))
        object.__setattr__(self, "methods", tuple(self.methods))
        if not self.sizes or any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise InputError("sizes must be a non-empty strictly increasing sequence")
        if self.sizes[0] < 1:
            raise InputError("sizes must be positive")
        if not self.thresholds:
            raise InputError("at least one threshold is required")
        if self.n_sims < 1 or self.n_reps < 1:
            raise InputError("n_sims and n_reps must be >= 1")
        for m in self.methods:
            if m not in ALL_METHODS:
                raise InputError(f"unknown EVPI method {m!r}")
        if self.n_workers < 1:
            raise InputError("n_workers must be >= 1")


@dataclass(frozen=True)
class SweepRow:
    """Aggregated EVPI for one (size, threshold, method) sweep cell."""

    size: int
    threshold: float
    method: str
    mean_evpi: float
    mc_se: float
    n_sims: int

    def __post_init__(self):
        if self.mean_evpi < 0 or self.mc_se < 0:
            raise InputError("mean EVPI and its standard error must be nonnegative")


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    config: SweepConfig

    def row(self, size: int, threshold: float, method: str) -> SweepRow:
        for r in self.rows:
            if r.size == size and r.method == method and abs(r.threshold - threshold) < 1e-12:
                return r
        raise KeyError((size, threshold, method))


def _sweep_cell(cell, dgm, dataset, cfg: SweepConfig):
    """Compute one (size_index, sim_index) cell; returns per-(z, method)
    EVPIs plus the thresholds with a thin side of the split."""
    si, sim = cell
    size = cfg.sizes[si]
    data_rng = substream((cfg.seed, si, sim), DATA_STREAM_ID)
    if dgm is not None:
        sample = generate_synthetic(dgm, size, data_rng)
    elif size == dataset.n:
        sample = dataset
    else:
        idx = data_rng.choice(dataset.n, size=size, replace=False)
        sample = dataset.subset(idx)
    rows = evpi_threshold_sweep(
        sample, cfg.thresholds, methods=cfg.methods, n_reps=cfg.n_reps,
        seed=(cfg.seed, si, sim), warn=False,
    )
    evpis = {(t.z, res.method): res.evpi for t, res in rows}
    thin = tuple(
        t.z for t in cfg.thresholds
        if min(int(np.sum(sample.risks >= t.z)), sample.n - int(np.sum(sample.risks >= t.z))) < 20
    )
    return evpis, thin


def _run_sweep(dgm, dataset, cfg: SweepConfig) -> SweepResult:
    from .voi import _METHOD_LABELS

    cells = [(si, sim) for si in range(len(cfg.sizes)) for sim in range(cfg.n_sims)]
    worker = partial(_sweep_cell, dgm=dgm, dataset=dataset, cfg=cfg)
    if cfg.n_workers > 1:
        chunk = max(1, len(cells) // (4 * cfg.n_workers))
        with ProcessPoolExecutor(max_workers=cfg.n_workers) as ex:
            results = list(ex.map(worker, cells, chunksize=chunk))
    else:
        results = [worker(c) for c in cells]

    method_labels = [_METHOD_LABELS[m] for m in cfg.methods]
    rows = []
    thin_cells = set()
    for si, size in enumerate(cfg.sizes):
        sims = [results[si * cfg.n_sims + sim] for sim in range(cfg.n_sims)]
        for evpis, thin in sims:
            for z in thin:
                thin_cells.add((size, z))
        for t in cfg.thresholds:
            for label in method_labels:
                vals = np.array([evpis[(t.z, label)] for evpis, _ in sims])
                se = float(vals.std(ddof=1) / np.sqrt(cfg.n_sims)) if cfg.n_sims > 1 else 0.0
                rows.append(SweepRow(
                    size=size, threshold=t.z, method=label,
                    mean_evpi=float(vals.mean()), mc_se=se, n_sims=cfg.n_sims,
                ))
    for size, z in sorted(thin_cells):
        warnings.warn(
            f"size {size}, threshold {z:g}: fewer than 20 observations on one "
            "side of the threshold in at least one simulation",
            SmallEffectiveSampleWarning,
            stacklevel=3,
        )
    return SweepResult(rows=tuple(rows), config=cfg)


def synthetic_sweep(dgm: LogisticDgm, cfg: SweepConfig) -> SweepResult:
    """EVPI versus sample size for synthetic data from ``dgm``: each cell
    generates a fresh sample of the given size and computes EVPI per method
    and threshold."""
    return _run_sweep(dgm, None, cfg)


def subsample_sweep(dataset: ValidationSample, cfg: SweepConfig) -> SweepResult:
    """EVPI versus sample size over without-replacement subsets of a
    user-supplied dataset.  A size equal to the full dataset uses the whole
    dataset deterministically."""
    if cfg.sizes[-1] > dataset.n:
        raise InputError(
            f"largest sweep size {cfg.sizes[-1]} exceeds the dataset size {dataset.n}"
        )
    return _run_sweep(None, dataset, cfg)
