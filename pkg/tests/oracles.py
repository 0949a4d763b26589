"""Independent reference implementations used to cross-check the package.

Everything here is deliberately written against plain Python/stdlib (dicts,
cmath) or closed forms, not against the array engine under test.
"""

from __future__ import annotations

import cmath
import math


def brute_force_state(alpha, beta, thetas, steps):
    """Dict-based amplitude recursion for the phase-coin walk.

    Returns {position: (up, down)} after ``steps`` applications; coin t
    uses thetas[t].  No numpy, no shared code with the package.
    """
    s = 1.0 / math.sqrt(2.0)
    psi = {0: (complex(alpha), complex(beta))}
    for t in range(1, steps + 1):
        f = cmath.exp(1j * thetas[t])
        g = f.conjugate()
        new: dict[int, tuple[complex, complex]] = {}
        for x, (u, d) in psi.items():
            lu, ld = new.get(x - 1, (0j, 0j))
            new[x - 1] = (lu + (u + f * d) * s, ld)
            ru, rd = new.get(x + 1, (0j, 0j))
            new[x + 1] = (ru, rd + (g * u - d) * s)
        psi = new
    return psi


def brute_force_probabilities(alpha, beta, thetas, steps):
    """{position: probability} from the dict recursion."""
    psi = brute_force_state(alpha, beta, thetas, steps)
    return {x: abs(u) ** 2 + abs(d) ** 2 for x, (u, d) in psi.items()}


# Closed-form integrals of the scaling density f_K(x; a) (1 - m x) with
# f_K = sqrt(1-a^2) / (pi (1-x^2) sqrt(a^2-x^2)) on (-a, a).
#
# Substituting x = a sin(phi) and then u = tan(phi) gives
#   int_{-a}^{x} f_K          = 1/2 + arctan( x sqrt(1-a^2) / sqrt(a^2-x^2) ) / pi
# and substituting u = cos(phi) gives
#   int_{-a}^{x} u f_K(u) du  = -arctan( sqrt(a^2-x^2) / sqrt(1-a^2) ) / pi.

def closed_form_cdf(x: float, m: float, a: float = 1.0 / math.sqrt(2.0)) -> float:
    if x <= -a:
        return 0.0
    if x >= a:
        return 1.0
    root = math.sqrt(a * a - x * x)
    base = 0.5 + math.atan(x * math.sqrt(1.0 - a * a) / root) / math.pi
    tail = -math.atan(root / math.sqrt(1.0 - a * a)) / math.pi
    return base - m * tail


def closed_form_even_moment(r: int, a: float = 1.0 / math.sqrt(2.0)) -> float:
    """int x^r f_K dx for r in {0, 2} (odd moments vanish by symmetry)."""
    if r == 0:
        return 1.0
    if r == 2:
        return 1.0 - math.sqrt(1.0 - a * a)
    raise ValueError("only r = 0 and r = 2 have stored closed forms")
