"""Composite Gauss-Legendre rules on graded panels, plus small extrapolation helpers."""

from __future__ import annotations

import os
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

NODES_PER_PANEL = 16
GRADED_PANELS = 24
GRADING_RATIO = 0.5


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace or []


def working_dtypes() -> tuple[type, type]:
    """(real, complex) float types selected by DIVSUM_PRECISION_BITS (53 or 64)."""
    bits = int(os.environ.get("DIVSUM_PRECISION_BITS", "53"))
    if bits == 53:
        return np.float64, np.complex128
    if bits == 64 and np.finfo(np.longdouble).nmant >= 63:
        return np.longdouble, np.clongdouble
    raise ValueError(f"DIVSUM_PRECISION_BITS={bits} is not available on this platform "
                     "(supported: 53, and 64 where long double is 80-bit)")


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def graded_edges(a: float, b: float, n_panels: int = GRADED_PANELS,
                 ratio: float = GRADING_RATIO) -> np.ndarray:
    """Panel edges on [a, b], widths shrinking geometrically toward ``a``."""
    L = b - a
    inner = [a + L * ratio**j for j in range(n_panels - 1, 0, -1)]
    return np.array([a] + inner + [b])


def refine(edges: Sequence[float], h_max: float) -> np.ndarray:
    """Split every panel longer than ``h_max`` into equal pieces."""
    out = [edges[0]]
    for lo, hi in zip(edges[:-1], edges[1:]):
        pieces = max(1, int(np.ceil((hi - lo) / h_max)))
        out.extend(lo + (hi - lo) * np.arange(1, pieces + 1) / pieces)
    return np.array(out)


def panel_rule(edges: Sequence[float], n: int = NODES_PER_PANEL,
               dtype=np.float64) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the composite rule over consecutive ``edges``."""
    x, w = gauss_legendre(n)
    e = np.asarray(edges, dtype=dtype)
    lo, hi = e[:-1, None], e[1:, None]
    half = (hi - lo) / 2
    nodes = (half * x.astype(dtype) + (hi + lo) / 2).ravel()
    weights = (half * w.astype(dtype)).ravel()
    return nodes, weights


def integrate(fn: Callable[[np.ndarray], np.ndarray], edges: Sequence[float],
              n: int = NODES_PER_PANEL, dtype=np.float64):
    nodes, weights = panel_rule(edges, n, dtype)
    return np.sum(weights * fn(nodes))


def richardson_powers(hs: Sequence[float], values: Sequence[complex],
                      powers: Sequence[int]) -> list[complex]:
    """Extrapolants to h = 0 from sliding windows, error model sum c_p h^p.

    Window j uses points j-len(powers)..j and fits value = L + sum c_p h^p
    exactly; one extrapolant per window, in schedule order.
    """
    m = len(powers) + 1
    out = []
    for j in range(m - 1, len(hs)):
        h = np.array(hs[j - m + 1 : j + 1], dtype=float)
        A = np.column_stack([np.ones_like(h)] + [h**p for p in powers]).astype(complex)
        b = np.array(values[j - m + 1 : j + 1], dtype=complex)
        out.append(complex(np.linalg.solve(A, b)[0]))
    return out
