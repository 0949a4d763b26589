"""Ensemble experiments over disorder: averaged distributions, distance to
the scaling law, moment tables, and return-probability decay.

Determinism contract: every ensemble quantity is a pure function of its
RunConfig.  Realization i draws its disorder and initial qubit from streams
keyed by (master_seed, i), and the ensemble average is accumulated in
realization-index order, so results are bit-identical for any worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .coins import DisorderModel, SeedSpec, sample_disorder, sample_initial_qubit
from .evolution import distribution, evolve_checkpoints
from .limitlaw import LimitLaw, limit_cdf, limit_moment
from . import fileio

THREADS_ENV_VAR = "QDW_THREADS"


@dataclass(frozen=True)
class RunConfig:
    """One ensemble experiment.

    ``init`` is "random" for spherically uniform initial qubits or an
    explicit (alpha, beta) pair.  ``theta0`` overrides the dressing phase;
    by default each realization uses its first disorder draw.
    """

    steps: int
    realizations: int
    model: DisorderModel
    init: object = "random"
    master_seed: int = 0
    checkpoints: tuple[int, ...] = field(default=())
    theta0: float | None = None

    def __post_init__(self):
        if int(self.steps) < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if int(self.realizations) < 1:
            raise ValueError(f"realizations must be >= 1, got {self.realizations}")
        SeedSpec(self.master_seed)  # range check
        cps = tuple(int(c) for c in self.checkpoints) or (int(self.steps),)
        if any(c < 1 for c in cps):
            raise ValueError("checkpoints must be >= 1")
        if any(b <= a for a, b in zip(cps, cps[1:])):
            raise ValueError("checkpoints must be strictly increasing")
        if cps[-1] > int(self.steps):
            raise ValueError("checkpoints must not exceed steps")
        object.__setattr__(self, "checkpoints", cps)
        if isinstance(self.init, str):
            if self.init != "random":
                raise ValueError(f"unknown init spec {self.init!r}")
        else:
            alpha, beta = complex(self.init[0]), complex(self.init[1])
            norm = abs(alpha) ** 2 + abs(beta) ** 2
            if abs(norm - 1.0) > 1e-12:
                raise ValueError("explicit init must be normalized")
            object.__setattr__(self, "init", (alpha, beta))
        if self.theta0 is not None and not math.isfinite(float(self.theta0)):
            raise ValueError("theta0 must be finite")


@dataclass(frozen=True)
class EnsembleDistribution:
    """Mean site probabilities over realizations at one checkpoint."""

    t: int
    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.int64)
        p = np.asarray(self.p, dtype=np.float64)
        if x.shape != p.shape or x.ndim != 1:
            raise ValueError("x and p must be 1-d arrays of equal length")
        if np.any(p < -1e-15):
            raise ValueError("negative ensemble probability")
        total = float(p.sum())
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"ensemble mass {total!r} deviates from 1")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)
        x.flags.writeable = False
        p.flags.writeable = False

    def return_probability(self) -> float:
        idx = np.searchsorted(self.x, 0)
        if idx < len(self.x) and self.x[idx] == 0:
            return float(self.p[idx])
        return 0.0

    def rescaled_moment(self, r: int) -> float:
        """E[(X/t)^r] of the averaged distribution."""
        return float(np.sum(self.p * (self.x / self.t) ** int(r)))


def _realization_checkpoint_probs(cfg: RunConfig, index: int) -> list[np.ndarray]:
    """Checkpoint probability arrays for realization ``index``."""
    seed = SeedSpec(cfg.master_seed, index)
    thetas = sample_disorder(cfg.model, cfg.steps, seed)
    theta0 = float(thetas[0]) if cfg.theta0 is None else float(cfg.theta0)
    qubit = sample_initial_qubit(cfg.init, theta0, seed)
    return [
        distribution(state).p
        for state in evolve_checkpoints(qubit, thetas, cfg.checkpoints)
    ]


def _worker(args) -> list[np.ndarray]:
    cfg, index = args
    return _realization_checkpoint_probs(cfg, index)


def resolve_workers(workers: int | None = None) -> int:
    """Worker count: explicit argument, else QDW_THREADS, else CPU count."""
    if workers is None:
        env = os.environ.get(THREADS_ENV_VAR, "").strip()
        if env:
            workers = int(env)
        else:
            workers = os.cpu_count() or 1
    workers = int(workers)
    if workers < 1:
        raise ValueError(f"worker count must be >= 1, got {workers}")
    return workers


def monte_carlo_run(
    cfg: RunConfig, workers: int | None = None
) -> dict[int, EnsembleDistribution]:
    """Averaged distribution at each checkpoint.

    The accumulation order is realization index 0, 1, ..., N-1 on every
    code path, so the output is byte-stable across worker counts.
    """
    n = cfg.realizations
    workers = min(resolve_workers(workers), n)
    accs = [np.zeros(t + 1, dtype=np.float64) for t in cfg.checkpoints]

    def accumulate(payloads) -> None:
        for payload in payloads:
            for acc, p in zip(accs, payload):
                acc += p

    if workers == 1:
        accumulate(_realization_checkpoint_probs(cfg, i) for i in range(n))
    else:
        chunk = max(1, n // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            accumulate(pool.map(_worker, ((cfg, i) for i in range(n)),
                                chunksize=chunk))

    out = {}
    for t, acc in zip(cfg.checkpoints, accs):
        out[t] = EnsembleDistribution(t, np.arange(-t, t + 1, 2), acc / n)
    return out


def ks_distance(dist: EnsembleDistribution, law: LimitLaw) -> float:
    """sup_x |F_emp(x/t) - F(x/t)| between the rescaled ensemble CDF and the law.

    Evaluated at the atoms from both sides of each jump, which is where the
    supremum of a step-vs-continuous comparison lives.
    """
    if dist.t < 1:
        raise ValueError("distribution must be at a positive time")
    r = dist.x / dist.t
    target = limit_cdf(r, law)
    upper = np.cumsum(dist.p)
    lower = upper - dist.p
    return float(max(np.max(np.abs(upper - target)),
                     np.max(np.abs(lower - target))))


def limit_law_for(cfg: RunConfig) -> LimitLaw:
    """Scaling law matched to the configured ensemble.

    Random initial qubits average the bias to zero.  For an explicit qubit
    the cross term carries the mean dressing phase factor: e^{i theta0} for
    a pinned or fixed phase, the model's E[e^{i theta}] otherwise (0 for
    uniform disorder).  The per-realization laws mix linearly in m, so the
    mean bias is exactly the ensemble's law.
    """
    if isinstance(cfg.init, str):
        return LimitLaw()
    alpha, beta = cfg.init
    if cfg.theta0 is not None:
        t0 = float(cfg.theta0)
        phase = complex(math.cos(t0), math.sin(t0))
    else:
        phase = cfg.model.mean_phase_factor()
    cross = phase * alpha * beta.conjugate()
    m = abs(alpha) ** 2 - abs(beta) ** 2 + 2.0 * cross.real
    return LimitLaw(m=m)


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-checkpoint comparison of the ensemble against a scaling law."""

    config: RunConfig
    law: LimitLaw
    checkpoints: tuple[int, ...]
    ks: np.ndarray
    moments: np.ndarray        # shape (r_max, n_checkpoints)
    limit_moments: np.ndarray  # shape (r_max,)
    p_return: np.ndarray

    @property
    def r_max(self) -> int:
        return self.moments.shape[0]

    def to_csv(self, path) -> None:
        """Rows ``t,ks,m1..m4,limit_m1..limit_m4,p_return``."""
        if self.r_max < 4:
            raise ValueError("report CSV requires moments up to order 4")
        header = (
            "t", "ks", "m1", "m2", "m3", "m4",
            "limit_m1", "limit_m2", "limit_m3", "limit_m4", "p_return",
        )
        rows = []
        for j, t in enumerate(self.checkpoints):
            row = [t, float(self.ks[j])]
            row += [float(self.moments[r][j]) for r in range(4)]
            row += [float(self.limit_moments[r]) for r in range(4)]
            row.append(float(self.p_return[j]))
            rows.append(tuple(row))
        fileio.write_csv(path, header, rows)


def moment_convergence(
    cfg: RunConfig,
    r_max: int = 4,
    law: LimitLaw | None = None,
    workers: int | None = None,
) -> ConvergenceReport:
    """Tabulate KS distance and rescaled moments against the law's moments."""
    r_max = int(r_max)
    if not 1 <= r_max <= 6:
        raise ValueError(f"r_max must be in [1, 6], got {r_max}")
    if law is None:
        law = limit_law_for(cfg)
    dists = monte_carlo_run(cfg, workers=workers)
    cps = cfg.checkpoints
    ks = np.array([ks_distance(dists[t], law) for t in cps])
    moments = np.array(
        [[dists[t].rescaled_moment(r) for t in cps] for r in range(1, r_max + 1)]
    )
    limit_moments = np.array([limit_moment(r, law) for r in range(1, r_max + 1)])
    p_return = np.array([dists[t].return_probability() for t in cps])
    return ConvergenceReport(cfg, law, cps, ks, moments, limit_moments, p_return)


@dataclass(frozen=True)
class ReturnProbabilityReport:
    """Ensemble return probability P(X_t = 0) and its log-log decay slope."""

    config: RunConfig
    checkpoints: tuple[int, ...]
    p_return: np.ndarray
    slope: float
    fit_window: tuple[int, int]

    def to_csv(self, path) -> None:
        fileio.write_csv(
            path, ("t", "p_return"),
            ((t, float(p)) for t, p in zip(self.checkpoints, self.p_return)),
        )


def return_probability(
    cfg: RunConfig, workers: int | None = None
) -> ReturnProbabilityReport:
    """Return-probability series at even checkpoints with a decay fit.

    Odd times have P(X_t = 0) = 0 by parity, so checkpoints must be even.
    The least-squares slope of log P against log t uses the final decade of
    t, but never times below 200 (transient); with fewer than two usable
    points the fit falls back to the whole series.
    """
    if any(t % 2 for t in cfg.checkpoints):
        raise ValueError("return-probability checkpoints must be even")
    dists = monte_carlo_run(cfg, workers=workers)
    cps = cfg.checkpoints
    p0 = np.array([dists[t].return_probability() for t in cps])

    t_max = cps[-1]
    lo = max(200.0, t_max / 10.0)
    mask = np.array([t >= lo and p > 0.0 for t, p in zip(cps, p0)])
    if mask.sum() < 2:
        mask = p0 > 0.0
        lo = float(cps[int(np.argmax(mask))]) if mask.any() else float(cps[0])
    if mask.sum() >= 2:
        slope = float(np.polyfit(np.log(np.asarray(cps, dtype=float)[mask]),
                                 np.log(p0[mask]), 1)[0])
    else:
        slope = float("nan")
    return ReturnProbabilityReport(cfg, cps, p0, slope, (int(lo), int(t_max)))
