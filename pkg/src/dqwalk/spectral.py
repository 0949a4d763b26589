"""Momentum-space analysis of the single-step operator.

For the phase coin, the step operator at momentum k is
hat U(k) = diag(e^{ik}, e^{-ik}) U(theta).  Its trace is i sqrt(2) sin k
and its determinant is -1, independent of theta, so the eigenvalues are
{e^{iw(k)}, -e^{-iw(k)}} with the phase function w(k) fixed by
sin w = sin k / sqrt(2).  Group velocities are the momentum derivatives
of the eigenvalue phases; their supremum 1/sqrt(2) is the ballistic front.
The band-flatness report underpins the no-localization diagnostic: a band
whose phase did not move with k would have arg-range 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .coins import make_coin

_SQRT2 = math.sqrt(2.0)


def dispersion(k: float) -> float:
    """Phase function w(k) = arcsin(sin k / sqrt 2), in [-pi/4, pi/4]."""
    return float(np.arcsin(np.sin(k) / _SQRT2))


def dispersion_slope(k: float) -> float:
    """w'(k) = cos k / sqrt(2 - sin^2 k)."""
    s = np.sin(k)
    return float(np.cos(k) / np.sqrt(2.0 - s * s))


def group_velocity(k: float) -> tuple[float, float]:
    """(h1, h2) for the bands lambda1 = -e^{-iw}, lambda2 = e^{iw}.

    h_j is the logarithmic momentum derivative i (d/dk) lambda_j / lambda_j,
    giving h1 = +w'(k) and h2 = -w'(k).
    """
    slope = dispersion_slope(k)
    return (slope, -slope)


@dataclass(frozen=True)
class FourierOperator:
    """hat U(k) = M(k) U(theta) with M(k) = diag(e^{ik}, e^{-ik})."""

    k: float
    theta: float
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=np.complex128)
        if mat.shape != (2, 2):
            raise ValueError("operator must be 2x2")
        res = np.max(np.abs(mat.conj().T @ mat - np.eye(2)))
        if res > 1e-12:
            raise ValueError(f"operator is not unitary (residual {res:.3e})")
        object.__setattr__(self, "matrix", mat)
        mat.flags.writeable = False


@dataclass(frozen=True)
class SpectralPoint:
    """Eigen-decomposition of hat U(k) at one momentum.

    lambda2 = e^{iw} is the band passing through +1 at k = 0;
    lambda1 = -e^{-iw} is the other band.  Eigenvectors are unit vectors
    with their first nonzero component rotated to the positive real axis.
    """

    k: float
    w: float
    lambda1: complex
    lambda2: complex
    h1: float
    h2: float
    v1: np.ndarray
    v2: np.ndarray


def fourier_operator(k: float, theta: float) -> FourierOperator:
    k = float(k)
    if not math.isfinite(k):
        raise ValueError("k must be finite")
    mk = np.array([[np.exp(1j * k), 0.0], [0.0, np.exp(-1j * k)]],
                  dtype=np.complex128)
    return FourierOperator(k, float(theta), mk @ make_coin(theta).matrix)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    for comp in v:
        if abs(comp) > 1e-12:
            return v * (comp.conjugate() / abs(comp))
    raise ValueError("zero eigenvector")


def _eigvec(mat: np.ndarray, lam: complex) -> np.ndarray:
    # Null vector of (mat - lam I): exact for 2x2, no iterative solve needed.
    v = np.array([mat[0, 1], lam - mat[0, 0]], dtype=np.complex128)
    n = np.linalg.norm(v)
    if n < 1e-8:
        v = np.array([lam - mat[1, 1], mat[1, 0]], dtype=np.complex128)
        n = np.linalg.norm(v)
    return _fix_phase(v / n)


def eigensystem(op: FourierOperator) -> SpectralPoint:
    """Solve the 2x2 eigenproblem via the characteristic polynomial.

    The polynomial is lambda^2 - (i sqrt 2 sin k) lambda - 1 = 0; the root
    with positive real part is labeled lambda2.  The two roots are never
    equal (their product is -1 while their midpoint is purely imaginary),
    so the labeling is unambiguous for every k.
    """
    mat = op.matrix
    tau = complex(mat[0, 0] + mat[1, 1])
    disc = np.sqrt(complex(tau * tau + 4.0))
    r1 = (tau + disc) / 2.0
    r2 = (tau - disc) / 2.0
    lam2, lam1 = (r1, r2) if r1.real >= r2.real else (r2, r1)
    h1, h2 = group_velocity(op.k)
    return SpectralPoint(
        k=op.k,
        w=dispersion(op.k),
        lambda1=lam1,
        lambda2=lam2,
        h1=h1,
        h2=h2,
        v1=_eigvec(mat, lam1),
        v2=_eigvec(mat, lam2),
    )


def _tracked_eigenvalue_branches(mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Continuously tracked eigenvalue branches of a matrix family.

    ``mats`` has shape (n, 2, 2).  Pairing between consecutive points
    minimizes total displacement, which suffices when the bands stay
    separated (true here: the gap never closes).
    """
    lams = np.linalg.eigvals(mats)
    branch_a = np.empty(len(mats), dtype=np.complex128)
    branch_b = np.empty(len(mats), dtype=np.complex128)
    a, b = lams[0]
    if a.real > b.real:
        a, b = b, a
    branch_a[0], branch_b[0] = a, b
    for i in range(1, len(mats)):
        c, d = lams[i]
        keep = abs(c - branch_a[i - 1]) + abs(d - branch_b[i - 1])
        swap = abs(d - branch_a[i - 1]) + abs(c - branch_b[i - 1])
        if swap < keep:
            c, d = d, c
        branch_a[i], branch_b[i] = c, d
    return branch_a, branch_b


def flat_band_report(
    grid: int,
    theta: float = 0.0,
    matrix_fn: Callable[[float], np.ndarray] | None = None,
) -> dict[str, float]:
    """Range of each band's unwrapped phase over a uniform momentum grid.

    A localization-supporting flat band would give a range near 0; the
    phase coin gives pi/2 for both bands.  ``matrix_fn`` overrides the
    operator family (used for control cases).
    """
    grid = int(grid)
    if grid < 16:
        raise ValueError(f"grid must be >= 16, got {grid}")
    ks = -math.pi + 2.0 * math.pi * np.arange(grid) / grid
    if matrix_fn is None:
        mats = np.stack([fourier_operator(k, theta).matrix for k in ks])
    else:
        mats = np.stack([np.asarray(matrix_fn(k), dtype=np.complex128) for k in ks])
    branch_a, branch_b = _tracked_eigenvalue_branches(mats)
    out = {}
    for name, branch in (("band_arg_range_1", branch_a),
                         ("band_arg_range_2", branch_b)):
        args = np.unwrap(np.angle(branch))
        out[name] = float(np.max(args) - np.min(args))
    return out


def finite_diff_velocity_check(k: float, eps: float) -> float:
    """|central difference of w - analytic w'(k)|; O(eps^2) when correct."""
    eps = float(eps)
    if not 0.0 < eps <= 1e-4:
        raise ValueError(f"eps must be in (0, 1e-4], got {eps}")
    approx = (dispersion(k + eps) - dispersion(k - eps)) / (2.0 * eps)
    return abs(approx - dispersion_slope(k))
