"""Dense interior operators over a domain's interior vertices.

The interior Laplacian L has L[i][i] = w_V(x_i) and L[i][j] = -W_E(x_i, x_j)
for interior pairs; it factors as L = diag(w_V) (I - T_D) where T_D is the
transition operator of the walk killed on leaving the interior. L is
positive definite whenever the boundary is nonempty, and diag(W_V) L is
symmetric, which the solver exploits through the similarity transform
S = D^{1/2} L D^{-1/2}, D = diag(W_V): S is symmetric positive definite
and is factorized once (Cholesky) at construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np
import scipy.linalg

from .domain import Domain
from .errors import SolverError, SpectralwalkError

NEUMANN_TAIL = 1e-12


@dataclass(frozen=True)
class InteriorOperator:
    domain: Domain
    L: np.ndarray                    # m x m, positive definite
    vertex_weights: np.ndarray       # W_V restricted to the interior
    aux_weights: np.ndarray          # w_V restricted to the interior
    _chol: tuple = field(repr=False)
    _sqrt_wv: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.L.shape[0]

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solve L x = rhs through the cached SPD factorization."""
        rhs = np.asarray(rhs, dtype=float)
        y = scipy.linalg.cho_solve(self._chol, self._sqrt_wv * rhs)
        return y / self._sqrt_wv

    def symmetrized(self) -> np.ndarray:
        """S = D^{1/2} L D^{-1/2}, numerically symmetrized."""
        s = (self.L * self._sqrt_wv[:, None]) / self._sqrt_wv[None, :]
        return 0.5 * (s + s.T)


def interior_laplacian(d: Domain) -> InteriorOperator:
    """Assemble the interior Laplacian of a domain with nonempty boundary."""
    d.require_boundary("the interior Laplacian")
    g = d.parent
    m = d.n_interior
    L = np.zeros((m, m))
    for v, i in d.interior_index.items():
        L[i, i] = g.aux_weights[v]
        for u in g.neighbors[v]:
            j = d.interior_index.get(u)
            if j is not None:
                L[i, j] = -g.edge_weights[(v, u)]
    wv = np.array([g.vertex_weights[v] for v in d.interior])
    aux = np.array([g.aux_weights[v] for v in d.interior])
    sqrt_wv = np.sqrt(wv)
    s = (L * sqrt_wv[:, None]) / sqrt_wv[None, :]
    s = 0.5 * (s + s.T)
    try:
        chol = scipy.linalg.cho_factor(s)
    except scipy.linalg.LinAlgError as exc:
        raise SolverError(
            "interior Laplacian is not positive definite",
            condition=float(np.linalg.cond(s)),
        ) from exc
    return InteriorOperator(
        domain=d, L=L, vertex_weights=wv, aux_weights=aux, _chol=chol, _sqrt_wv=sqrt_wv
    )


def killed_transition(d: Domain) -> np.ndarray:
    """Transition matrix of the killed walk: T_D[i][j] = p(x_i, x_j), interior pairs."""
    d.require_boundary("the killed transition operator")
    g = d.parent
    m = d.n_interior
    T = np.zeros((m, m))
    for v, i in d.interior_index.items():
        wv = g.aux_weights[v]
        for u in g.neighbors[v]:
            j = d.interior_index.get(u)
            if j is not None:
                T[i, j] = g.edge_weights[(v, u)] / wv
    return T


def green_apply(op: InteriorOperator, f) -> np.ndarray:
    """Apply the Green operator (I - T_D)^{-1} = L^{-1} diag(w_V) by direct solve."""
    f = np.asarray(f, dtype=float)
    if f.shape != (op.size,):
        raise SpectralwalkError(
            f"expected an interior vector of length {op.size}, got shape {f.shape}"
        )
    return op.solve(op.aux_weights * f)


def exit_index_distribution(d: Domain, x: int, l_max: int) -> List[float]:
    """P^x(eta = l) for l = 1..l_max: [T_D^{l-1} (I - T_D)] 1_iD at x.

    Entries are nonnegative with partial sums increasing to 1.
    """
    if x not in d.interior_index:
        raise SpectralwalkError(f"vertex {x} is not interior")
    if l_max < 1:
        raise SpectralwalkError("l_max must be >= 1")
    T = killed_transition(d)
    v = np.ones(d.n_interior) - T @ np.ones(d.n_interior)  # (I - T_D) 1
    i = d.interior_index[x]
    out = [float(v[i])]
    for _ in range(l_max - 1):
        v = T @ v
        out.append(float(v[i]))
    return out
