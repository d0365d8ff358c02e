"""The two Poisson hierarchies and the moment / Poisson spectra.

Both hierarchies start from the constant 1 on the interior and iterate
solves against the interior Laplacian L:

    g_0 = 1,  L g_k = k g_{k-1}            (so g_k = k! L^{-k} 1)
    f_0 = 1,  L f_k = k f_{k-1} + sum_{j=2..k} C(k,j) (-1/w_V)^{j-1} f_{k-j}

f_k(x) equals the k-th moment E^x[tau^k] of the first exit time of the
natural random walk; the correction sum accounts for the walk leaving a
vertex in one 1/w_V-sized time step rather than continuously. Pairing
against the interior indicator gives the moment spectrum
A_{1,k} = <f_k, 1>_V and the Poisson spectrum A_{2,k} = <g_k, 1>_V,
the latter being k! times the variational supremum of
Q_k(g) = <1,g>_V^2 / |<g, L^k g>_V|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

import numpy as np

from .domain import Domain
from .errors import SpectralwalkError
from .operators import InteriorOperator, interior_laplacian

K_MAX = 20


def _check_k(k_max: int) -> None:
    if k_max < 0:
        raise SpectralwalkError("k_max must be >= 0")
    if k_max > K_MAX:
        raise SpectralwalkError(f"k_max {k_max} exceeds the supported limit {K_MAX}")


@dataclass(frozen=True)
class HierarchySolution:
    k_max: int
    g_functions: List[np.ndarray]  # g_0 .. g_kmax, indexed by interior position
    f_functions: List[np.ndarray]  # f_0 .. f_kmax

    def exit_moment(self, d: Domain, x: int, k: int) -> float:
        """f_k at an interior vertex, i.e. E^x[tau^k]."""
        return float(self.f_functions[k][d.interior_index[x]])


def solve_hierarchies(d: Domain, k_max: int, op: InteriorOperator | None = None) -> HierarchySolution:
    """Solve both hierarchies up to order k_max on one cached factorization."""
    _check_k(k_max)
    if op is None:
        op = interior_laplacian(d)
    m = op.size
    ones = np.ones(m)
    gs = [ones]
    fs = [ones]
    inv_w = 1.0 / op.aux_weights
    for k in range(1, k_max + 1):
        gs.append(op.solve(k * gs[k - 1]))
        rhs = k * fs[k - 1]
        for j in range(2, k + 1):
            rhs = rhs + math.comb(k, j) * (-inv_w) ** (j - 1) * fs[k - j]
        fs.append(op.solve(rhs))
    return HierarchySolution(k_max=k_max, g_functions=gs, f_functions=fs)


def moment_spectrum(d: Domain, k_max: int) -> List[float]:
    """A_{1,k} = <f_k, 1>_V for k = 0..k_max."""
    op = interior_laplacian(d)
    sol = solve_hierarchies(d, k_max, op=op)
    return [float(op.vertex_weights @ f) for f in sol.f_functions]


def poisson_spectrum(d: Domain, k_max: int) -> List[float]:
    """A_{2,k} = <g_k, 1>_V for k = 0..k_max."""
    op = interior_laplacian(d)
    sol = solve_hierarchies(d, k_max, op=op)
    return [float(op.vertex_weights @ g) for g in sol.g_functions]


def variational_quotient(d: Domain, g, k: int, op: InteriorOperator | None = None) -> float:
    """Q_k(g) = <1, g>_V^2 / |<g, L^k g>_V|.

    Scale invariant in g; k! times its supremum over nonzero g equals
    A_{2,k}, attained in the direction of g_k. A vanishing denominator is
    reported as +inf.
    """
    _check_k(k)
    if op is None:
        op = interior_laplacian(d)
    g = np.asarray(g, dtype=float)
    if g.shape != (op.size,):
        raise SpectralwalkError(f"expected interior vector of length {op.size}")
    if not np.any(g):
        raise SpectralwalkError("trial vector is zero")
    num = float(op.vertex_weights @ g) ** 2
    v = g
    for _ in range(k):
        v = op.L @ v
    den = abs(float((g * op.vertex_weights) @ v))
    if den == 0.0:
        return math.inf if num > 0 else 0.0
    return num / den
