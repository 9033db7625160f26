"""All-roots polynomial solver by simultaneous (Aberth-Ehrlich) iteration."""

from __future__ import annotations

import cmath
import math
from typing import Sequence

MAX_ITER = 200
RESIDUAL_TOL = 1e-12


class RootFindingError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (max scaled residual {residual:.3e})")
        self.residual = residual


def _horner2(coeffs: Sequence[complex], z: complex) -> tuple[complex, complex, float]:
    """p(z), p'(z) and sum |c_j| |z|^j for residual scaling."""
    p = 0j
    dp = 0j
    scale = 0.0
    az = abs(z)
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
        scale = scale * az + abs(c)
    return p, dp, scale


def find_roots(coeffs: Sequence[complex], max_iter: int = MAX_ITER,
               tol: float = RESIDUAL_TOL) -> list[complex]:
    """Roots of sum coeffs[j] z^j (ascending coefficients, nonzero leading term).

    Meant for squarefree input; clustered roots converge only linearly.
    Raises RootFindingError if the scaled residual |p(z)| / sum|c_j||z|^j
    stays above ``tol`` after ``max_iter`` sweeps.
    """
    coeffs = [complex(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    n = len(coeffs) - 1
    if n < 1:
        return []
    if n == 1:
        return [-coeffs[0] / coeffs[1]]
    lead = coeffs[-1]
    monic = [c / lead for c in coeffs]

    # Fujiwara-type bound for the start circle
    radius = 2 * max(abs(monic[n - j]) ** (1.0 / j) for j in range(1, n + 1))
    radius = max(radius, 1e-3)
    z = [radius * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)]

    def residuals(points):
        worst = 0.0
        for x in points:
            p, _, s = _horner2(monic, x)
            worst = max(worst, abs(p) / s if s else abs(p))
        return worst

    for _ in range(max_iter):
        done = True
        new = list(z)
        for k in range(n):
            p, dp, s = _horner2(monic, new[k])
            if abs(p) <= tol * s * 1e-3:
                continue
            done = False
            ratio = p / dp if dp != 0 else p
            repulsion = sum(1 / (new[k] - new[j]) for j in range(n) if j != k and new[k] != new[j])
            new[k] = new[k] - ratio / (1 - ratio * repulsion)
        z = new
        if done or residuals(z) <= tol * 1e-3:
            break
    res = residuals(z)
    if res > tol:
        raise RootFindingError(f"root finder did not converge in {max_iter} iterations", res)
    return z
