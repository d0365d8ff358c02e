"""Weighted bidirected graphs with geometry.

A graph with geometry is a connected bidirected graph together with an
orientation (one direction chosen per adjacent pair) and a weighting
``(W_V, W_E)`` whose vertex and edge weights satisfy the reversibility
condition

    W_E(x, y) * W_V(x) == W_E(y, x) * W_V(y)

for every edge. The weighting induces inner products on vertex and edge
functions, a coboundary operator ``d`` and its adjoint, the vertex
Laplacian, and the transition probabilities of the natural random walk
``p(x, y) = W_E(x, y) / w_V(x)`` where ``w_V`` is the sum of outgoing
edge weights.

Vertex functions are plain ``{vertex_id: value}`` dicts over a finite
support; edge functions are ``{(tail, head): value}`` dicts keyed by
oriented edges.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Mapping, Optional, Tuple

from .errors import SpectralwalkError

VertexFunction = Dict[int, float]
EdgeFunction = Dict[Tuple[int, int], float]

REVERSIBILITY_RTOL = 1e-12


@dataclass(frozen=True)
class Violation:
    """One validation failure: which condition, where, and how badly."""

    condition: str
    subject: tuple
    message: str
    discrepancy: Optional[float] = None

    def __str__(self):
        s = f"[{self.condition}] {self.subject}: {self.message}"
        if self.discrepancy is not None:
            s += f" (discrepancy {self.discrepancy:.3e})"
        return s


@dataclass(frozen=True)
class GraphWithGeometry:
    """Immutable weighted bidirected graph with orientation.

    Vertex ids are dense ``0..n-1``; ``original_ids`` maps back to the
    ids a file supplied (identity for programmatically built graphs).
    Construct through :func:`make_graph`, which performs the remap and
    the structural checks.
    """

    vertex_weights: Tuple[float, ...]
    edge_weights: Mapping[Tuple[int, int], float]
    orientation: FrozenSet[Tuple[int, int]]
    original_ids: Tuple[int, ...]
    coords: Optional[Mapping[int, Tuple[float, ...]]] = None
    neighbors: Mapping[int, Tuple[int, ...]] = field(default=None, repr=False)
    aux_weights: Tuple[float, ...] = field(default=None, repr=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_weights)

    @property
    def vertices(self) -> range:
        return range(len(self.vertex_weights))

    def vertex_weight(self, x: int) -> float:
        self._check_vertex(x)
        return self.vertex_weights[x]

    def edge_weight(self, x: int, y: int) -> float:
        """W_E(x, y); zero when (x, y) is not an edge."""
        return self.edge_weights.get((x, y), 0.0)

    def _check_vertex(self, x):
        if not (isinstance(x, (int,)) and 0 <= x < len(self.vertex_weights)):
            raise SpectralwalkError(f"unknown vertex id {x!r}")


def make_graph(vertex_weights, edge_weights, orientation=None, coords=None) -> GraphWithGeometry:
    """Build a :class:`GraphWithGeometry` from id -> weight mappings.

    ``vertex_weights`` maps vertex ids (any non-negative ints) to positive
    vertex weights; ``edge_weights`` maps ordered pairs of those ids to
    positive edge weights. Non-dense ids are remapped to ``0..n-1`` in
    ascending order and the originals kept for reporting. The default
    orientation keeps ``(x, y)`` with ``x < y``.

    Raises on structural problems only (unknown ids, non-positive
    weights, duplicate ids); semantic conditions such as reversibility
    or connectivity are reported by :func:`validate_weighting`.
    """
    ids = sorted(vertex_weights)
    if not ids:
        raise SpectralwalkError("graph has no vertices")
    if any((not isinstance(i, int)) or i < 0 for i in ids):
        raise SpectralwalkError("vertex ids must be non-negative integers")
    index = {orig: i for i, orig in enumerate(ids)}
    weights = []
    for orig in ids:
        w = float(vertex_weights[orig])
        if not (w > 0.0) or not math.isfinite(w):
            raise SpectralwalkError(f"vertex {orig} has non-positive weight {w}")
        weights.append(w)

    remapped_edges = {}
    for (t, h), w in edge_weights.items():
        if t not in index or h not in index:
            raise SpectralwalkError(f"edge ({t},{h}) references unknown vertex")
        w = float(w)
        if not (w > 0.0) or not math.isfinite(w):
            raise SpectralwalkError(f"edge ({t},{h}) has non-positive weight {w}")
        remapped_edges[(index[t], index[h])] = w

    if orientation is None:
        oriented = frozenset(
            (x, y) for (x, y) in remapped_edges if x < y or (y, x) not in remapped_edges
        )
        oriented = frozenset((x, y) for (x, y) in oriented if x != y)
    else:
        oriented = frozenset((index[t], index[h]) for (t, h) in orientation)

    nbrs: Dict[int, list] = {i: [] for i in range(len(ids))}
    for (t, h) in remapped_edges:
        if t != h:
            nbrs[t].append(h)
    neighbor_map = {i: tuple(sorted(v)) for i, v in nbrs.items()}
    aux = tuple(
        math.fsum(remapped_edges[(i, j)] for j in neighbor_map[i]) for i in range(len(ids))
    )
    remapped_coords = None
    if coords is not None:
        remapped_coords = {index[i]: tuple(float(c) for c in p) for i, p in coords.items()}

    return GraphWithGeometry(
        vertex_weights=tuple(weights),
        edge_weights=remapped_edges,
        orientation=oriented,
        original_ids=tuple(ids),
        coords=remapped_coords,
        neighbors=neighbor_map,
        aux_weights=aux,
    )


def validate_weighting(g: GraphWithGeometry) -> list:
    """Check every graph-with-geometry invariant; return violation reports.

    Returns an empty list iff the graph is a valid graph with geometry:
    no self edges, bidirected, connected, reversible weighting (to
    relative 1e-12), and an orientation containing exactly one direction
    of every edge. Never raises.
    """
    out = []
    edges = g.edge_weights
    for (x, y) in sorted(edges):
        if x == y:
            out.append(Violation("self-edge", (x, y), "self edges are not allowed"))
            continue
        if (y, x) not in edges:
            out.append(Violation("bidirected", (x, y), "reverse edge missing"))
            continue
        if x < y:
            lhs = edges[(x, y)] * g.vertex_weights[x]
            rhs = edges[(y, x)] * g.vertex_weights[y]
            scale = max(abs(lhs), abs(rhs))
            if abs(lhs - rhs) > REVERSIBILITY_RTOL * scale:
                out.append(
                    Violation(
                        "reversibility",
                        (x, y),
                        f"W_E(x,y)W_V(x)={lhs!r} != W_E(y,x)W_V(y)={rhs!r}",
                        discrepancy=abs(lhs - rhs) / scale,
                    )
                )

    pairs = {(min(x, y), max(x, y)) for (x, y) in edges if x != y}
    for (x, y) in sorted(pairs):
        fwd = (x, y) in g.orientation
        bwd = (y, x) in g.orientation
        if fwd and bwd:
            out.append(Violation("orientation", (x, y), "both directions oriented"))
        elif not fwd and not bwd:
            out.append(Violation("orientation", (x, y), "neither direction oriented"))
    for (x, y) in sorted(g.orientation):
        if (x, y) not in edges and (y, x) not in edges:
            out.append(Violation("orientation", (x, y), "oriented pair is not an edge"))

    if g.n_vertices > 1:
        # treat the graph as undirected for connectivity
        undirected = {i: set(g.neighbors[i]) for i in g.vertices}
        for (t, h) in edges:
            if t != h:
                undirected[t].add(h)
                undirected[h].add(t)
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for u in undirected[v]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        if len(seen) != g.n_vertices:
            missing = sorted(set(g.vertices) - seen)
            out.append(
                Violation(
                    "connected",
                    tuple(missing[:8]),
                    f"{len(missing)} vertices unreachable from vertex 0",
                )
            )
    return out


def auxiliary_weight(g: GraphWithGeometry, x: int) -> float:
    """w_V(x): sum of outgoing edge weights at x."""
    g._check_vertex(x)
    return g.aux_weights[x]


def vertex_inner_product(g: GraphWithGeometry, f: VertexFunction, h: VertexFunction) -> float:
    """<f, h>_V = sum over x of f(x) h(x) W_V(x)."""
    support = set(f) & set(h)
    return math.fsum(f[x] * h[x] * g.vertex_weights[x] for x in support)


def edge_inner_product(g: GraphWithGeometry, F: EdgeFunction, H: EdgeFunction) -> float:
    """<F, H>_E = sum over oriented edges (x,y) of F H W_E(x,y) W_V(x)."""
    support = set(F) & set(H)
    bad = support - g.orientation
    if bad:
        raise SpectralwalkError(f"edge function supported off the orientation: {sorted(bad)[:4]}")
    return math.fsum(
        F[e] * H[e] * g.edge_weights[e] * g.vertex_weights[e[0]] for e in support
    )


def coboundary(g: GraphWithGeometry, f: VertexFunction) -> EdgeFunction:
    """df(e) = f(head) - f(tail), on every oriented edge touching supp(f)."""
    for x in f:
        g._check_vertex(x)
    df: EdgeFunction = {}
    for x in f:
        for y in g.neighbors[x]:
            e = (x, y) if (x, y) in g.orientation else (y, x)
            if e not in df:
                df[e] = f.get(e[1], 0.0) - f.get(e[0], 0.0)
    return df


def coboundary_adjoint(g: GraphWithGeometry, F: EdgeFunction) -> VertexFunction:
    """d*_W F, the adjoint of the coboundary: <df, F>_E == <f, d*_W F>_V.

    Concretely, using reversibility,

        d*_W F(v) = sum over oriented (x,v) of F(x,v) W_E(v,x)
                  - sum over oriented (v,y) of F(v,y) W_E(v,y).
    """
    out: VertexFunction = {}
    for (t, h), val in F.items():
        if (t, h) not in g.orientation:
            raise SpectralwalkError(f"edge function key ({t},{h}) is not an oriented edge")
        out[h] = out.get(h, 0.0) + val * g.edge_weights[(h, t)]
        out[t] = out.get(t, 0.0) - val * g.edge_weights[(t, h)]
    return out


def laplacian_apply(g: GraphWithGeometry, f: VertexFunction, x: int) -> float:
    """(d*_W d f)(x) = w_V(x) f(x) - sum over y of W_E(x,y) f(y).

    Positive-operator convention: constants map to zero and the operator
    is positive semidefinite in <.,.>_V.
    """
    g._check_vertex(x)
    acc = g.aux_weights[x] * f.get(x, 0.0)
    return acc - math.fsum(g.edge_weights[(x, y)] * f[y] for y in g.neighbors[x] if y in f)


def transition_probability(g: GraphWithGeometry, x: int, y: int) -> float:
    """p(x, y) = W_E(x, y) / w_V(x); zero for non-adjacent pairs."""
    g._check_vertex(x)
    w = g.edge_weights.get((x, y))
    if w is None:
        return 0.0
    return w / g.aux_weights[x]
