"""Spectral side: eigendecomposition, starred spectrum, heat content, zeta,
and recovery of the starred spectrum from moment sequences.

The interior Laplacian is self-adjoint in <.,.>_V, so its spectrum is
computed from the symmetric similarity S = D^{1/2} L D^{-1/2}
(D = diag(W_V)); eigenvalues mu_j are positive and eigenvectors phi_j
are returned V-orthonormal. Equal eigenvalues are grouped into clusters
and each cluster carries its squared projection onto the interior
indicator, a_hat2 = sum_l <phi_{j,l}, 1>_V^2; clusters with a_hat2 above
tolerance form the starred spectrum. These masses partition the weighted
interior volume and determine

    pspec:        A_{2,k} = k! sum_star a_hat2 mu^(-k)
    heat content: Q(t)    =    sum_star a_hat2 exp(-mu t)
    heat coeffs:  q_n     =    sum_star a_hat2 (-mu)^n / n!
    zeta:         zeta(s) =    sum_star a_hat2 mu^(-s)

Conversely the starred spectrum and masses are recovered from either
moment sequence through the Stieltjes machinery: Hankel matrices
M_{0,n} = (m_{i+j}), M_{1,n} = (m_{i+j+1}) stay positive definite up to
the number of atoms N and degenerate beyond it; the pencil
(M_{1,N}, M_{0,N}) has the support points as eigenvalues, and a
Vandermonde solve in the support points returns the masses.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
import scipy.linalg

from .domain import Domain
from .errors import RecoveryError, SolverError, SpectralwalkError
from .operators import InteriorOperator
from .poisson import K_MAX

CLUSTER_RTOL = 1e-9
STAR_RTOL = 1e-10
RANK_RTOL = 1e-10


@dataclass(frozen=True)
class SpectralData:
    """Eigenpairs of the interior Laplacian plus the starred-spectrum bookkeeping."""

    mu: np.ndarray                 # ascending eigenvalues, all of them
    eigenvectors: np.ndarray       # column j is phi_j, V-orthonormal
    a: np.ndarray                  # <phi_j, 1_iD>_V per eigenvector
    clusters: Tuple[Tuple[int, ...], ...]
    cluster_mu: np.ndarray         # representative eigenvalue per cluster
    a_hat2: np.ndarray             # squared projection mass per cluster
    star: Tuple[int, ...]          # cluster indices in the starred spectrum
    volume: float                  # weighted interior volume <1,1>_V

    @property
    def star_mu(self) -> np.ndarray:
        return self.cluster_mu[list(self.star)]

    @property
    def star_masses(self) -> np.ndarray:
        return self.a_hat2[list(self.star)]


def eigendecompose(
    op: InteriorOperator,
    cluster_rtol: float = CLUSTER_RTOL,
    star_rtol: float = STAR_RTOL,
) -> SpectralData:
    """Full eigendecomposition of the interior Laplacian of a domain."""
    s = op.symmetrized()
    try:
        vals, u = scipy.linalg.eigh(s)
    except scipy.linalg.LinAlgError as exc:
        raise SolverError("eigendecomposition failed", condition=float(np.linalg.cond(s))) from exc

    phi = u / op._sqrt_wv[:, None]
    a = op.vertex_weights @ phi
    # deterministic signs: project positively on the indicator when possible
    for j in range(phi.shape[1]):
        ref = a[j] if abs(a[j]) > 1e-8 * math.sqrt(max(vals[-1], 1.0)) else phi[
            np.argmax(np.abs(phi[:, j])), j
        ]
        if ref < 0:
            phi[:, j] = -phi[:, j]
            a[j] = -a[j]

    gap = cluster_rtol * max(abs(vals[-1]), np.finfo(float).tiny)
    clusters: List[Tuple[int, ...]] = []
    current = [0]
    for j in range(1, len(vals)):
        if vals[j] - vals[j - 1] <= gap:
            current.append(j)
        else:
            clusters.append(tuple(current))
            current = [j]
    clusters.append(tuple(current))

    cluster_mu = np.array([float(np.mean(vals[list(c)])) for c in clusters])
    a_hat2 = np.array([float(np.sum(a[list(c)] ** 2)) for c in clusters])
    volume = float(np.sum(op.vertex_weights))
    star = tuple(i for i, m2 in enumerate(a_hat2) if m2 > star_rtol * volume)
    return SpectralData(
        mu=vals,
        eigenvectors=phi,
        a=a,
        clusters=tuple(clusters),
        cluster_mu=cluster_mu,
        a_hat2=a_hat2,
        star=star,
        volume=volume,
    )


def lemma51_pairing(d: Domain, sd: SpectralData, k: int, j: int) -> float:
    """<g_k, phi_j>_V in closed form: k! mu_j^(-k) a_j."""
    if not 0 <= j < len(sd.mu):
        raise SpectralwalkError(f"eigenvector index {j} out of range 0..{len(sd.mu) - 1}")
    if not 0 <= k <= K_MAX:
        raise SpectralwalkError(f"k must lie in 0..{K_MAX}")
    return math.factorial(k) * float(sd.mu[j]) ** (-k) * float(sd.a[j])


def heat_content(d: Domain, sd: SpectralData, t: float) -> float:
    """Q(t) = sum over the starred spectrum of a_hat2 exp(-mu t); Q(0) is the volume."""
    return float(np.sum(sd.star_masses * np.exp(-sd.star_mu * t)))


def heat_asymptotics(d: Domain, sd: SpectralData, n_max: int) -> List[float]:
    """Taylor coefficients q_n = sum_star a_hat2 (-mu)^n / n!, n = 0..n_max."""
    if not 0 <= n_max <= K_MAX:
        raise SpectralwalkError(f"n_max must lie in 0..{K_MAX}")
    return [
        float(np.sum(sd.star_masses * (-sd.star_mu) ** n)) / math.factorial(n)
        for n in range(n_max + 1)
    ]


def zeta(d: Domain, sd: SpectralData, s: complex) -> complex:
    """zeta_D(s) = sum_star a_hat2 mu^(-s), with principal powers of mu > 0."""
    s = complex(s)
    return complex(
        sum(
            m2 * cmath.exp(-s * math.log(mu))
            for m2, mu in zip(sd.star_masses, sd.star_mu)
        )
    )


def zeta_special_values(d: Domain, sd: SpectralData, n: int) -> Tuple[float, float]:
    """(zeta(n), zeta(-n)) for a positive integer n.

    These encode the Poisson spectrum and the heat coefficients:
    zeta(n) = A_{2,n}/n! and zeta(-n) = (-1)^n n! q_n.
    """
    if not 1 <= n <= K_MAX:
        raise SpectralwalkError(f"n must lie in 1..{K_MAX}")
    masses, mu = sd.star_masses, sd.star_mu
    return float(np.sum(masses * mu ** (-float(n)))), float(np.sum(masses * mu ** float(n)))


# ---------------------------------------------------------------------------
# Stieltjes recovery from moment sequences


@dataclass(frozen=True)
class HankelDiagnostics:
    """Determinant sequences of the (rescaled) Hankel matrices plus conditioning data."""

    det0: Tuple[float, ...]          # det M_{0,n}, n = 1..
    det1: Tuple[float, ...]          # det M_{1,n}
    normalized_det0: Tuple[float, ...]  # det / Hadamard bound, scale-free
    normalized_det1: Tuple[float, ...]
    scale: float                     # geometric rescaling applied to the moments
    condition: float | None = None   # cond_2(M_{0,N}) when a pencil was solved


@dataclass(frozen=True)
class RecoveredMeasure:
    """Atomic measure behind a moment sequence: support points and masses."""

    support_points: Tuple[float, ...]
    masses: Tuple[float, ...]
    n_atoms: int
    kind: str                        # "pspec" (support = 1/mu) or "heat" (support = mu)
    conditioning: HankelDiagnostics = field(repr=False)

    @property
    def recovered_mu(self) -> Tuple[float, ...]:
        """Starred eigenvalues in the positive convention, ascending."""
        if self.kind == "pspec":
            return tuple(sorted(1.0 / x for x in self.support_points))
        return tuple(sorted(self.support_points))

    @property
    def recovered_lambda_paper(self) -> Tuple[float, ...]:
        """The same eigenvalues in the negative sign convention."""
        return tuple(-m for m in self.recovered_mu)

    def masses_by_mu(self) -> Tuple[float, ...]:
        """Masses ordered to match recovered_mu."""
        pairs = zip(self.recovered_mu_raw(), self.masses)
        return tuple(m for _, m in sorted(pairs))

    def recovered_mu_raw(self):
        if self.kind == "pspec":
            return [1.0 / x for x in self.support_points]
        return list(self.support_points)


def _hankel(moments: Sequence[float], first: int, n: int) -> np.ndarray:
    col = [moments[first + i] for i in range(n)]
    row = [moments[first + n - 1 + j] for j in range(n)]
    return scipy.linalg.hankel(col, row)


def _normalized_det(m: np.ndarray) -> Tuple[float, float]:
    det = float(np.linalg.det(m))
    hadamard = float(np.prod(np.linalg.norm(m, axis=1)))
    return det, det / hadamard if hadamard > 0 else 0.0


def _detect_rank(scaled: Sequence[float], rank_rtol: float):
    """Largest order at which both Hankel matrices look numerically positive.

    Advances from order n to n+1 while both normalized determinants stay
    positive and det M_{0,n+1} keeps at least rank_rtol of det M_{0,n};
    at the true rank the next determinant vanishes (roundoff magnitude,
    random sign), which trips one of the two conditions.
    """
    n_avail = len(scaled) // 2
    det0, det1, norm0, norm1 = [], [], [], []
    n_detected = 0
    stopped = False
    prev0 = 1.0
    for n in range(1, n_avail + 1):
        d0, r0 = _normalized_det(_hankel(scaled, 0, n))
        d1, r1 = _normalized_det(_hankel(scaled, 1, n))
        det0.append(d0)
        det1.append(d1)
        norm0.append(r0)
        norm1.append(r1)
        if not stopped and r0 > rank_rtol * prev0 and r1 > 0.0:
            n_detected = n
            prev0 = r0
        else:
            stopped = True
    return n_detected, det0, det1, norm0, norm1


def _recover(
    moments: Sequence[float], kind: str, rank_rtol: float, n_atoms: int | None = None
) -> RecoveredMeasure:
    moments = [float(m) for m in moments]
    if len(moments) < 2:
        raise RecoveryError(f"need at least 2 moments, got {len(moments)}")
    bad = [n for n, m in enumerate(moments) if not (m > 0 and math.isfinite(m))]
    if bad:
        raise RecoveryError(f"moments must be positive and finite; offending indices {bad[:6]}")

    # rescale so the support sits near 1; detection and pencil run on the
    # rescaled sequence and results are mapped back afterwards
    scale = moments[1] / moments[0]
    scaled = [m / scale**n for n, m in enumerate(moments)]

    detected, det0, det1, norm0, norm1 = _detect_rank(scaled, rank_rtol)
    diagnostics = HankelDiagnostics(
        det0=tuple(det0),
        det1=tuple(det1),
        normalized_det0=tuple(norm0),
        normalized_det1=tuple(norm1),
        scale=scale,
    )
    if n_atoms is None:
        n_atoms = detected
    elif not 1 <= n_atoms <= len(moments) // 2:
        raise RecoveryError(
            f"requested atom count {n_atoms} needs {2 * n_atoms} moments, "
            f"got {len(moments)}",
            diagnostics=diagnostics,
        )
    elif n_atoms > detected:
        raise RecoveryError(
            f"Hankel matrices are singular at the requested order {n_atoms} "
            f"(rank detection stopped at {detected})",
            diagnostics=diagnostics,
        )
    if n_atoms == 0:
        raise RecoveryError(
            "no atoms detectable: leading Hankel determinants are not positive",
            diagnostics=diagnostics,
        )

    m0 = _hankel(scaled, 0, n_atoms)
    m1 = _hankel(scaled, 1, n_atoms)
    try:
        support_scaled = scipy.linalg.eigh(m1, m0, eigvals_only=True)
    except scipy.linalg.LinAlgError as exc:
        raise RecoveryError(
            "Hankel pencil is numerically singular", diagnostics=diagnostics
        ) from exc
    condition = float(np.linalg.cond(m0))
    diagnostics = HankelDiagnostics(
        det0=diagnostics.det0,
        det1=diagnostics.det1,
        normalized_det0=diagnostics.normalized_det0,
        normalized_det1=diagnostics.normalized_det1,
        scale=scale,
        condition=condition,
    )

    if np.any(support_scaled <= 0):
        raise RecoveryError(
            f"pencil produced non-positive support points {support_scaled.tolist()}",
            diagnostics=diagnostics,
        )
    vander = np.vander(support_scaled, N=n_atoms, increasing=True).T
    try:
        masses = np.linalg.solve(vander, np.array(scaled[:n_atoms]))
    except np.linalg.LinAlgError as exc:
        raise RecoveryError(
            "Vandermonde system for the masses is singular (coincident support points)",
            diagnostics=diagnostics,
        ) from exc
    if np.any(masses <= 0):
        raise RecoveryError(
            f"recovered masses are not all positive: {masses.tolist()}",
            diagnostics=diagnostics,
        )
    support = support_scaled * scale
    order = np.argsort(support)
    return RecoveredMeasure(
        support_points=tuple(float(x) for x in support[order]),
        masses=tuple(float(w) for w in masses[order]),
        n_atoms=n_atoms,
        kind=kind,
        conditioning=diagnostics,
    )


def recover_from_pspec(
    a2: Sequence[float], rank_rtol: float = RANK_RTOL, n_atoms: int | None = None
) -> RecoveredMeasure:
    """Recover the starred spectrum and masses from the Poisson spectrum.

    The Stieltjes moments are m_n = A_{2,n}/n!; the support points are the
    reciprocals 1/mu of the starred eigenvalues and the masses are the
    spectral volume partition. ``n_atoms`` overrides rank detection.
    """
    moments = [float(v) / math.factorial(n) for n, v in enumerate(a2)]
    return _recover(moments, "pspec", rank_rtol, n_atoms=n_atoms)


def recover_from_heat(
    q: Sequence[float], rank_rtol: float = RANK_RTOL, n_atoms: int | None = None
) -> RecoveredMeasure:
    """Recover the starred spectrum and masses from heat-content coefficients.

    The Stieltjes moments are m_n = (-1)^n n! q_n; the support points are
    the starred eigenvalues mu directly. ``n_atoms`` overrides rank detection.
    """
    moments = [(-1.0) ** n * math.factorial(n) * float(v) for n, v in enumerate(q)]
    return _recover(moments, "heat", rank_rtol, n_atoms=n_atoms)


def hankel_determinants(moments: Sequence[float], rank_rtol: float = RANK_RTOL) -> HankelDiagnostics:
    """Determinant diagnostics for a prospective Stieltjes moment sequence."""
    moments = [float(m) for m in moments]
    if len(moments) < 2 or moments[0] <= 0 or moments[1] <= 0:
        raise RecoveryError("need at least two positive moments")
    scale = moments[1] / moments[0]
    scaled = [m / scale**n for n, m in enumerate(moments)]
    _, det0, det1, norm0, norm1 = _detect_rank(scaled, rank_rtol)
    return HankelDiagnostics(
        det0=tuple(det0),
        det1=tuple(det1),
        normalized_det0=tuple(norm0),
        normalized_det1=tuple(norm1),
        scale=scale,
    )


def star_polynomial(a2: Sequence[float], n_atoms: int, rank_rtol: float = RANK_RTOL) -> np.ndarray:
    """Monic polynomial (descending coefficients) whose roots are the pspec support points.

    This is the characteristic polynomial of M_{1,N} M_{0,N}^{-1} for the
    moments m_n = A_{2,n}/n!.
    """
    if n_atoms < 1:
        raise SpectralwalkError("need at least one atom")
    moments = [float(v) / math.factorial(n) for n, v in enumerate(a2)]
    if len(moments) < 2 * n_atoms:
        raise RecoveryError(
            f"need {2 * n_atoms} pspec entries for {n_atoms} atoms, got {len(moments)}"
        )
    scale = moments[1] / moments[0]
    scaled = [m / scale**n for n, m in enumerate(moments)]
    detected, _, _, norm0, _ = _detect_rank(scaled, rank_rtol)
    if n_atoms > detected:
        raise RecoveryError(
            f"M_0 at order {n_atoms} is numerically singular "
            f"(normalized det {norm0[n_atoms - 1]:.3e}, rank detection stopped at {detected})"
        )
    m0 = _hankel(scaled, 0, n_atoms)
    m1 = _hankel(scaled, 1, n_atoms)
    roots = scipy.linalg.eigh(m1, m0, eigvals_only=True) * scale
    return np.poly(roots)
