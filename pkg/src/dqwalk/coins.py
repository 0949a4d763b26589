"""Phase-family coins, their left/right step split, and disorder sampling.

The walk is driven by the one-parameter coin

    U(theta) = (1/sqrt(2)) [[1,           e^{i theta}],
                            [e^{-i theta}, -1        ]]

together with a phase sequence theta_0, theta_1, ..., theta_T drawn from a
disorder model.  theta_0 dresses the initial qubit; theta_t selects the coin
applied at step t.  All randomness flows through :class:`SeedSpec`, which
derives an independent, order-insensitive stream per realization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_UNITARITY_TOL = 1e-12

# Sub-stream tags for SeedSpec.rng (keep disorder and qubit draws independent).
STREAM_DISORDER = 0
STREAM_QUBIT = 1


@dataclass(frozen=True)
class SeedSpec:
    """Key for one realization's random stream.

    The derived generator is a pure function of (master_seed,
    realization_index, stream): realizations may be evaluated in any order,
    on any number of workers, with identical results.
    """

    master_seed: int
    realization_index: int = 0

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError(f"master_seed must be a u64, got {self.master_seed}")
        if not 0 <= int(self.realization_index) < 2**32:
            raise ValueError(
                f"realization_index must be a u32, got {self.realization_index}"
            )

    def rng(self, stream: int = 0) -> np.random.Generator:
        """Generator for the given sub-stream, independent across keys."""
        seq = np.random.SeedSequence(
            self.master_seed, spawn_key=(self.realization_index, stream)
        )
        return np.random.default_rng(seq)


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class CoinMatrix:
    """A 2x2 unitary coin with its generating phase.

    Entries are row-major ``[[a, b], [c, d]]``.  Construction checks the
    unitarity identities (column norms, column orthogonality, unimodular
    determinant, and the c/d conjugation relations) to 1e-12.
    """

    matrix: np.ndarray
    theta: float

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=np.complex128)
        if mat.shape != (2, 2):
            raise ValueError(f"coin matrix must be 2x2, got shape {mat.shape}")
        if not np.all(np.isfinite(mat.view(np.float64))):
            raise ValueError("coin matrix entries must be finite")
        object.__setattr__(self, "matrix", mat)
        mat.flags.writeable = False
        a, b, c, d = self.a, self.b, self.c, self.d
        det = a * d - b * c
        checks = (
            abs(abs(a) ** 2 + abs(c) ** 2 - 1.0),
            abs(abs(b) ** 2 + abs(d) ** 2 - 1.0),
            abs(a * c.conjugate() + b * d.conjugate()),
            abs(abs(det) - 1.0),
            abs(c + det * b.conjugate()),
            abs(d - det * a.conjugate()),
        )
        worst = max(checks)
        if worst > _UNITARITY_TOL:
            raise ValueError(f"coin matrix is not unitary (residual {worst:.3e})")

    @property
    def a(self) -> complex:
        return complex(self.matrix[0, 0])

    @property
    def b(self) -> complex:
        return complex(self.matrix[0, 1])

    @property
    def c(self) -> complex:
        return complex(self.matrix[1, 0])

    @property
    def d(self) -> complex:
        return complex(self.matrix[1, 1])

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c


@dataclass(frozen=True)
class StepOperators:
    """Upper-row / lower-row split of a coin: P routes left, Q routes right."""

    P: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.P, dtype=np.complex128)
        Q = np.asarray(self.Q, dtype=np.complex128)
        if P.shape != (2, 2) or Q.shape != (2, 2):
            raise ValueError("step operators must be 2x2")
        if np.any(P[1] != 0) or np.any(Q[0] != 0):
            raise ValueError("P must have zero lower row, Q zero upper row")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)
        P.flags.writeable = False
        Q.flags.writeable = False


def make_coin(theta: float) -> CoinMatrix:
    """Build U(theta); at theta=0 this is the Hadamard matrix."""
    theta = _require_finite("theta", theta)
    phase = complex(math.cos(theta), math.sin(theta))
    mat = np.array(
        [[_INV_SQRT2, _INV_SQRT2 * phase],
         [_INV_SQRT2 * phase.conjugate(), -_INV_SQRT2]],
        dtype=np.complex128,
    )
    return CoinMatrix(mat, theta)


def split_coin(coin: CoinMatrix) -> StepOperators:
    """Split U into P (upper row) and Q = U - P (lower row); P + Q == U exactly."""
    P = np.zeros((2, 2), dtype=np.complex128)
    Q = np.zeros((2, 2), dtype=np.complex128)
    P[0] = coin.matrix[0]
    Q[1] = coin.matrix[1]
    return StepOperators(P, Q)


@dataclass(frozen=True)
class DisorderModel:
    """Law of the i.i.d. phase sequence: fixed, uniform on [0, 2pi), or discrete.

    Use the classmethods; the raw constructor validates but is awkward.
    """

    kind: str
    theta: float = 0.0
    values: tuple[float, ...] = field(default=())
    weights: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in ("fixed", "uniform", "discrete"):
            raise ValueError(f"unknown disorder kind {self.kind!r}")
        if self.kind == "fixed":
            _require_finite("fixed theta", self.theta)
        if self.kind == "discrete":
            vals = tuple(float(v) for v in self.values)
            wts = tuple(float(w) for w in self.weights)
            if not vals or len(vals) != len(wts):
                raise ValueError("discrete model needs matching values and weights")
            for v in vals:
                _require_finite("discrete value", v)
            if min(wts) < 0.0:
                raise ValueError("weights must be nonnegative")
            if abs(sum(wts) - 1.0) > 1e-12:
                raise ValueError(f"weights must sum to 1, got {sum(wts)!r}")
            object.__setattr__(self, "values", vals)
            object.__setattr__(self, "weights", wts)

    @classmethod
    def fixed(cls, theta: float) -> "DisorderModel":
        return cls("fixed", theta=float(theta))

    @classmethod
    def uniform(cls) -> "DisorderModel":
        return cls("uniform")

    @classmethod
    def discrete(cls, values, weights) -> "DisorderModel":
        return cls("discrete", values=tuple(values), weights=tuple(weights))

    def mean_phase_factor(self) -> complex:
        """E[e^{i theta}] under the model (0 for uniform)."""
        if self.kind == "fixed":
            return complex(math.cos(self.theta), math.sin(self.theta))
        if self.kind == "uniform":
            return 0.0 + 0.0j
        acc = 0.0 + 0.0j
        for v, w in zip(self.values, self.weights):
            acc += w * complex(math.cos(v), math.sin(v))
        return acc


def sample_disorder(model: DisorderModel, steps: int, seed: SeedSpec) -> np.ndarray:
    """Draw the phase sequence theta_0..theta_T (length steps + 1).

    The result is a pure function of (model, steps, seed); repeated calls
    are bit-identical.  ``fixed`` yields a constant sequence without
    consuming randomness.
    """
    steps = int(steps)
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    n = steps + 1
    if model.kind == "fixed":
        return np.full(n, model.theta, dtype=np.float64)
    rng = seed.rng(STREAM_DISORDER)
    if model.kind == "uniform":
        return rng.uniform(0.0, 2.0 * math.pi, size=n)
    return rng.choice(np.asarray(model.values, dtype=np.float64), size=n,
                      p=np.asarray(model.weights, dtype=np.float64))


@dataclass(frozen=True)
class Qubit:
    """Normalized two-component internal state."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        if not (math.isfinite(a.real) and math.isfinite(a.imag)
                and math.isfinite(b.real) and math.isfinite(b.imag)):
            raise ValueError("qubit amplitudes must be finite")
        norm = abs(a) ** 2 + abs(b) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"qubit must be normalized, |alpha|^2+|beta|^2 = {norm!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)


def haar_qubit(seed: SeedSpec) -> tuple[complex, complex]:
    """Draw (alpha, beta) uniformly from the unit sphere in C^2.

    Satisfies E|alpha|^2 = 1/2 and E(alpha * conj(beta)) = 0.
    """
    rng = seed.rng(STREAM_QUBIT)
    while True:
        v = rng.standard_normal(4)
        norm = math.sqrt(float(v @ v))
        if norm > 1e-12:
            break
    return (complex(v[0], v[1]) / norm, complex(v[2], v[3]) / norm)


def dress_qubit(alpha: complex, beta: complex, theta0: float) -> Qubit:
    """Apply the initial phases: (alpha e^{i theta0/2}, beta e^{-i theta0/2})."""
    theta0 = _require_finite("theta0", theta0)
    half = complex(math.cos(theta0 / 2.0), math.sin(theta0 / 2.0))
    return Qubit(complex(alpha) * half, complex(beta) * half.conjugate())


def sample_initial_qubit(init, theta0: float, seed: SeedSpec) -> Qubit:
    """Resolve an initial-state spec and dress it with theta0.

    ``init`` is either the string ``"random"`` (spherically uniform draw,
    stream independent of the disorder stream) or an explicit pair
    ``(alpha, beta)`` normalized to 1 within 1e-12.
    """
    if isinstance(init, str):
        if init != "random":
            raise ValueError(f"unknown initial-state spec {init!r}")
        alpha, beta = haar_qubit(seed)
    else:
        alpha, beta = (complex(init[0]), complex(init[1]))
        norm = abs(alpha) ** 2 + abs(beta) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(
                f"explicit initial state must be normalized, got |.|^2 = {norm!r}"
            )
    return dress_qubit(alpha, beta, theta0)
