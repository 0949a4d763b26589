"""Exact position-space evolution of the walker, with a Fourier cross-check.

The state at time t lives on positions x in [-t, t] with a 2-component
complex amplitude per site; the step recursion is

    psi_{t+1}(x) = P_t psi_t(x+1) + Q_t psi_t(x-1)

with P/Q the upper/lower-row split of the coin used at step t.  The engine
keeps one dense buffer over [-T, T] and only ever reads/writes inside the
light cone, so off-cone and off-parity amplitudes stay exactly zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .coins import Qubit, StepOperators, make_coin, split_coin
from . import fileio

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class WalkerState:
    """Amplitudes over the light cone at a fixed time.

    ``amplitudes`` has shape (2t+1, 2); row i holds the spinor at position
    x = i - t (component 0 is the one routed leftward).
    """

    t: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2 * self.t + 1, 2):
            raise ValueError(
                f"amplitudes must have shape ({2 * self.t + 1}, 2), got {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)
        amps.flags.writeable = False

    def positions(self) -> np.ndarray:
        return np.arange(-self.t, self.t + 1)

    def amplitude(self, x: int) -> np.ndarray:
        """Spinor at position x (zeros outside [-t, t])."""
        if abs(x) > self.t:
            return np.zeros(2, dtype=np.complex128)
        return self.amplitudes[x + self.t]

    def total_probability(self) -> float:
        a = self.amplitudes
        return float(np.sum(a.real**2 + a.imag**2))

    def validate(self, tol: float = 1e-12) -> None:
        """Check conservation (to tol) and exact parity support."""
        if not np.all(np.isfinite(self.amplitudes.view(np.float64))):
            raise ValueError("non-finite amplitude")
        total = self.total_probability()
        if abs(total - 1.0) > tol:
            raise ValueError(f"probability not conserved: {total!r}")
        # Positions with x + t odd must be exactly zero.
        odd = self.amplitudes[1::2]
        if odd.size and np.any(odd != 0):
            raise ValueError("amplitude present on parity-forbidden site")


@dataclass(frozen=True)
class DistributionTable:
    """P(X_t = x) on the parity-allowed support, sorted by position."""

    t: int
    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.int64)
        p = np.asarray(self.p, dtype=np.float64)
        if x.shape != p.shape or x.ndim != 1:
            raise ValueError("x and p must be 1-d arrays of equal length")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)
        x.flags.writeable = False
        p.flags.writeable = False

    def probability(self, x: int) -> float:
        idx = np.searchsorted(self.x, x)
        if idx < len(self.x) and self.x[idx] == x:
            return float(self.p[idx])
        return 0.0

    def to_csv(self, path) -> None:
        """Write rows ``t,x,p`` (shortest round-trip decimals)."""
        rows = ((self.t, int(xi), float(pi)) for xi, pi in zip(self.x, self.p))
        fileio.write_csv(path, ("t", "x", "p"), rows)


def init_state(q: Qubit) -> WalkerState:
    """Walker localized at the origin with spinor (alpha, beta)."""
    return WalkerState(0, np.array([[q.alpha, q.beta]], dtype=np.complex128))


def _advance_arrays(up: np.ndarray, dn: np.ndarray, phase: complex):
    """One step of the phase-coin recursion on light-cone arrays.

    Inputs cover positions [-t, t]; outputs cover [-(t+1), t+1].
    """
    new_up = np.zeros(up.size + 2, dtype=np.complex128)
    new_dn = np.zeros(dn.size + 2, dtype=np.complex128)
    new_up[:-2] = (up + phase * dn) * _INV_SQRT2
    new_dn[2:] = (phase.conjugate() * up - dn) * _INV_SQRT2
    return new_up, new_dn


def step(state: WalkerState, ops: StepOperators) -> WalkerState:
    """Apply one split-coin step with arbitrary P/Q operators."""
    n = state.amplitudes.shape[0]
    new = np.zeros((n + 2, 2), dtype=np.complex128)
    new[:-2] = state.amplitudes @ ops.P.T
    new[2:] += state.amplitudes @ ops.Q.T
    return WalkerState(state.t + 1, new)


def _phases(thetas: Sequence[float] | np.ndarray, steps: int) -> np.ndarray:
    thetas = np.asarray(thetas, dtype=np.float64)
    if thetas.ndim != 1 or thetas.size < steps + 1:
        raise ValueError(
            f"need at least {steps + 1} phases (theta_0..theta_{steps}), "
            f"got {thetas.size}"
        )
    if not np.all(np.isfinite(thetas)):
        raise ValueError("phases must be finite")
    return np.exp(1j * thetas)


def evolve_checkpoints(
    q: Qubit, thetas, checkpoints: Iterable[int]
) -> Iterator[WalkerState]:
    """Evolve under one realization, yielding the state at each checkpoint.

    Checkpoints must be nonnegative, strictly increasing, and within the
    supplied phase sequence (coin t uses thetas[t]).
    """
    cps = [int(c) for c in checkpoints]
    if not cps:
        return
    if any(c < 0 for c in cps) or any(b <= a for a, b in zip(cps, cps[1:])):
        raise ValueError("checkpoints must be nonnegative and strictly increasing")
    T = cps[-1]
    phases = _phases(thetas, T)

    up = np.zeros(2 * T + 1, dtype=np.complex128)
    dn = np.zeros(2 * T + 1, dtype=np.complex128)
    up[T] = q.alpha
    dn[T] = q.beta

    def snapshot(t: int) -> WalkerState:
        window = slice(T - t, T + t + 1)
        amps = np.stack((up[window], dn[window]), axis=1)
        return WalkerState(t, amps)

    next_cp = 0
    if cps[next_cp] == 0:
        yield snapshot(0)
        next_cp += 1
    for t in range(T):
        lo, hi = T - t, T + t + 1
        phase = phases[t + 1]
        u = up[lo:hi]
        d = dn[lo:hi]
        new_u = (u + phase * d) * _INV_SQRT2
        new_d = (phase.conjugate() * u - d) * _INV_SQRT2
        up[lo - 1:hi - 1] = new_u
        up[hi - 1] = 0.0
        dn[lo + 1:hi + 1] = new_d
        dn[lo] = 0.0
        if next_cp < len(cps) and cps[next_cp] == t + 1:
            yield snapshot(t + 1)
            next_cp += 1


def evolve(q: Qubit, thetas, steps: int) -> WalkerState:
    """State after ``steps`` coin applications of one disorder realization."""
    steps = int(steps)
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    _phases(thetas, steps)  # length/finiteness check even for steps == 0
    if steps == 0:
        return init_state(q)
    for state in evolve_checkpoints(q, thetas, [steps]):
        pass
    return state


def distribution(state: WalkerState) -> DistributionTable:
    """Site probabilities on the parity-allowed support."""
    a = state.amplitudes[::2]
    p = np.sum(a.real**2 + a.imag**2, axis=1)
    x = np.arange(-state.t, state.t + 1, 2)
    return DistributionTable(state.t, x, p)


def empirical_moment(table: DistributionTable, r: int) -> float:
    """Raw moment sum(x^r p(x)); r = 0 returns the total mass."""
    r = int(r)
    if r < 0:
        raise ValueError(f"moment order must be >= 0, got {r}")
    return float(np.sum(table.p * np.float_power(table.x, r)))


def fourier_evolve(q: Qubit, thetas, steps: int, grid: int) -> WalkerState:
    """Evolve in momentum space and transform back; cross-checks ``evolve``.

    The spinor is propagated on a uniform grid of ``grid`` momenta by
    pointwise multiplication with diag(e^{ik}, e^{-ik}) U(theta_t), then
    inverse-transformed.  ``grid`` must be at least 2*steps + 2 so the
    support [-steps, steps] is reconstructed without aliasing.
    """
    steps = int(steps)
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    grid = int(grid)
    if grid < 2 * steps + 2:
        raise ValueError(
            f"grid {grid} too small for support [-{steps}, {steps}]; "
            f"need at least {2 * steps + 2}"
        )
    phases = _phases(thetas, steps)
    k = 2.0 * math.pi * np.arange(grid) / grid
    mk = np.exp(1j * k)
    up = np.full(grid, q.alpha, dtype=np.complex128)
    dn = np.full(grid, q.beta, dtype=np.complex128)
    for t in range(1, steps + 1):
        phase = phases[t]
        u = (up + phase * dn) * _INV_SQRT2
        d = (phase.conjugate() * up - dn) * _INV_SQRT2
        up = mk * u
        dn = mk.conjugate() * d
    pos_up = np.fft.ifft(up)
    pos_dn = np.fft.ifft(dn)
    xs = np.arange(-steps, steps + 1)
    amps = np.stack((pos_up[xs % grid], pos_dn[xs % grid]), axis=1)
    return WalkerState(steps, amps)


def evolve_with_coins(q: Qubit, thetas, steps: int) -> WalkerState:
    """Reference composition of ``step`` with freshly built coins.

    Slower than ``evolve``; useful for validating the fast kernel against
    the generic operator path.
    """
    state = init_state(q)
    thetas = np.asarray(thetas, dtype=np.float64)
    if thetas.size < steps + 1:
        raise ValueError("realization shorter than requested steps")
    for t in range(1, int(steps) + 1):
        state = step(state, split_coin(make_coin(float(thetas[t]))))
    return state
