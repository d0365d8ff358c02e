"""Domains: connected subgraphs with interior/boundary vertex classification.

A domain is a finite connected subgraph whose edges are the induced
ones. A vertex of the domain is interior when its entire parent
neighborhood lies inside the domain; every other domain vertex is
boundary. The induced weighting coincides with the parent weighting at
interior vertices, so interior quantities (auxiliary weights, transition
rows, the interior Laplacian) can be computed from the parent graph
directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Tuple

from .errors import DomainError, EmptyBoundaryError
from .graph import GraphWithGeometry, VertexFunction

STRICT_REGULARITY_RTOL = 1e-12


@dataclass(frozen=True)
class Domain:
    parent: GraphWithGeometry
    vertex_set: FrozenSet[int]
    interior: Tuple[int, ...]  # sorted
    boundary: FrozenSet[int]
    interior_index: Dict[int, int] = field(repr=False)

    @property
    def has_boundary(self) -> bool:
        return len(self.boundary) > 0

    @property
    def n_interior(self) -> int:
        return len(self.interior)

    def edges(self) -> FrozenSet[Tuple[int, int]]:
        """Induced edge set (both directions of every pair)."""
        return frozenset(
            (t, h) for (t, h) in self.parent.edge_weights
            if t in self.vertex_set and h in self.vertex_set
        )

    def require_boundary(self, what: str) -> None:
        if not self.has_boundary:
            raise EmptyBoundaryError(
                f"{what} needs a nonempty boundary (interior operator would be singular)"
            )


@dataclass(frozen=True)
class RegularityReport:
    is_regular: bool
    alpha: float | None
    per_vertex: Dict[int, float]


def make_domain(g: GraphWithGeometry, vertex_set) -> Domain:
    """Classify a vertex set of g into a Domain.

    Raises DomainError when the induced subgraph is disconnected or the
    interior is empty. A domain with empty boundary is allowed here;
    operations that need invertibility check ``require_boundary``.
    """
    vs = frozenset(vertex_set)
    unknown = [v for v in vs if not (isinstance(v, int) and 0 <= v < g.n_vertices)]
    if unknown:
        raise DomainError(f"vertex set contains unknown ids {sorted(unknown)[:8]}")
    if not vs:
        raise DomainError("vertex set is empty")

    # connectivity of the induced subgraph
    start = next(iter(vs))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in g.neighbors[v]:
            if u in vs and u not in seen:
                seen.add(u)
                stack.append(u)
    if seen != vs:
        raise DomainError(
            f"induced subgraph is disconnected ({len(vs) - len(seen)} of {len(vs)} "
            "vertices unreachable)"
        )

    interior = tuple(sorted(v for v in vs if all(u in vs for u in g.neighbors[v])))
    if not interior:
        raise DomainError("domain has empty interior")
    boundary = vs - set(interior)
    return Domain(
        parent=g,
        vertex_set=vs,
        interior=interior,
        boundary=frozenset(boundary),
        interior_index={v: i for i, v in enumerate(interior)},
    )


def regularity(d: Domain, rtol: float = STRICT_REGULARITY_RTOL) -> RegularityReport:
    """Check whether all interior auxiliary weights agree (alpha-weight regularity)."""
    per_vertex = {v: d.parent.aux_weights[v] for v in d.interior}
    values = list(per_vertex.values())
    top = max(values)
    if all(abs(v - top) <= rtol * top for v in values):
        return RegularityReport(True, top, per_vertex)
    return RegularityReport(False, None, per_vertex)


def indicator(d: Domain) -> VertexFunction:
    """The indicator of the interior, as a vertex function."""
    return {v: 1.0 for v in d.interior}
