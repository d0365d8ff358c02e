"""Stirling numbers and the moment-spectrum / Poisson-spectrum duality.

Stirling numbers of the second kind S(k, n) and signed first kind
s(k, n) are generated by their recurrences in exact integer arithmetic:

    S(k+1, n) = n S(k, n) + S(k, n-1)
    s(k+1, n) = s(k, n-1) - k s(k, n)

so that x^k = sum_n S(k, n) x^(n) and x^(k) = sum_n s(k, n) x^n for the
falling factorial x^(k), giving the inversion
sum_n S(k, n) s(n, j) = delta_kj.

On an alpha-weight regular domain they convert between the two spectra:

    A_{1,k} = A_{2,k} + sum_{j<k} (-alpha)^(j-k) S(k, j) A_{2,j}
    A_{2,k} = A_{1,k} + sum_{j<k} (-alpha)^(j-k) s(k, j) A_{1,j}

and give every exit-time moment in closed form from the g-hierarchy:
E^x[tau^k] = sum_{n<=k} S(k, n) (-alpha)^(n-k) g_n(x). The generating
polynomial behind these identities is the exit-index power sum
P_k(x) = x * sum_{l>=1} l^k (1-x)^(l-1), whose closed form is
P_k(x) = sum_n S(k, n) n! (-1)^(k+n) x^(-n).
"""

from __future__ import annotations

import math
from typing import List, Sequence

import numpy as np

from .domain import Domain, regularity
from .errors import SpectralwalkError
from .poisson import K_MAX, solve_hierarchies
from .operators import interior_laplacian


def _build_tables(k_top: int):
    second: List[List[int]] = [[1]]
    first: List[List[int]] = [[1]]
    for k in range(1, k_top + 1):
        prev_s, prev_f = second[-1], first[-1]
        get = lambda row, n: row[n] if 0 <= n < len(row) else 0
        second.append([get(prev_s, n - 1) + n * get(prev_s, n) for n in range(k + 1)])
        first.append([get(prev_f, n - 1) - (k - 1) * get(prev_f, n) for n in range(k + 1)])
    return second, first


# small and immutable: build the whole supported range once at import
_SECOND, _FIRST_SIGNED = _build_tables(K_MAX)


def _check_range(k: int, n: int) -> None:
    if not (1 <= n <= k <= K_MAX):
        raise SpectralwalkError(f"need 1 <= n <= k <= {K_MAX}, got k={k}, n={n}")


def stirling_second(k: int, n: int) -> int:
    """Stirling number of the second kind S(k, n): set partitions of k into n blocks."""
    _check_range(k, n)
    return _SECOND[k][n]


def stirling_first_signed(k: int, n: int) -> int:
    """Signed Stirling number of the first kind: coefficient of x^n in the falling factorial."""
    _check_range(k, n)
    return _FIRST_SIGNED[k][n]


def pk_closed(x: float, k: int) -> float:
    """Closed form of P_k(x) = x sum_{l>=1} l^k (1-x)^(l-1), for x in (0, 2)."""
    if not 0.0 < x < 2.0:
        raise SpectralwalkError(f"x={x} outside the convergence interval (0, 2)")
    if k < 0 or k > K_MAX:
        raise SpectralwalkError(f"k must lie in 0..{K_MAX}")
    if k == 0:
        return 1.0
    return math.fsum(
        _SECOND[k][n] * math.factorial(n) * (-1.0) ** (k + n) * x ** (-n)
        for n in range(1, k + 1)
    )


def regular_moments_closed(d: Domain, k_max: int) -> List[np.ndarray]:
    """Exit-time moment vectors of an alpha-regular domain, from the g-hierarchy alone.

    Entry k is the interior vector sum_{n=1..k} S(k, n) (-alpha)^(n-k) g_n
    (with entry 0 the constant 1), which matches the f-hierarchy.
    """
    if k_max > K_MAX:
        raise SpectralwalkError(f"k_max {k_max} exceeds the supported limit {K_MAX}")
    report = regularity(d)
    if not report.is_regular:
        spread = sorted(set(round(v, 9) for v in report.per_vertex.values()))
        raise SpectralwalkError(
            f"domain is not weight regular (interior auxiliary weights {spread[:6]})"
        )
    alpha = report.alpha
    sol = solve_hierarchies(d, k_max, op=interior_laplacian(d))
    out = [np.ones(d.n_interior)]
    for k in range(1, k_max + 1):
        acc = sol.g_functions[k].copy()
        for n in range(1, k):
            acc += _SECOND[k][n] * (-alpha) ** (n - k) * sol.g_functions[n]
        out.append(acc)
    return out


def _check_lengths(values: Sequence[float], k_max: int, name: str) -> None:
    if k_max > K_MAX:
        raise SpectralwalkError(f"k_max {k_max} exceeds the supported limit {K_MAX}")
    if len(values) < k_max + 1:
        raise SpectralwalkError(
            f"{name} needs at least {k_max + 1} entries, got {len(values)}"
        )


def mspec_from_pspec(a2: Sequence[float], alpha: float, k_max: int) -> List[float]:
    """A_{1,k} from A_{2,0..k} on an alpha-regular domain."""
    _check_lengths(a2, k_max, "pspec")
    out = [float(a2[0])]
    for k in range(1, k_max + 1):
        out.append(
            float(a2[k])
            + math.fsum(
                (-alpha) ** (j - k) * _SECOND[k][j] * a2[j] for j in range(1, k)
            )
        )
    return out


def pspec_from_mspec(a1: Sequence[float], alpha: float, k_max: int) -> List[float]:
    """A_{2,k} from A_{1,0..k} on an alpha-regular domain (inverse of mspec_from_pspec)."""
    _check_lengths(a1, k_max, "mspec")
    out = [float(a1[0])]
    for k in range(1, k_max + 1):
        out.append(
            float(a1[k])
            + math.fsum(
                (-alpha) ** (j - k) * _FIRST_SIGNED[k][j] * a1[j] for j in range(1, k)
            )
        )
    return out
