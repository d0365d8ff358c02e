"""Canonical graph constructors: lattice boxes, paths, cycles, point clouds.

Lattice boxes and point clouds carry the inverse-square edge weighting
``W_E = 1/dist^2`` with unit vertex weights, so that the graph Laplacian
is the usual finite-difference operator. Lattices connect points at
distance <= spacing (nearest neighbors); point clouds connect points at
distance strictly below the cutoff.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from .errors import SpectralwalkError
from .graph import GraphWithGeometry, make_graph


@dataclass(frozen=True)
class LatticeSpec:
    """An axis-aligned box of integer lattice points, scaled by ``spacing``."""

    dimension: int
    extents: Tuple[Tuple[int, int], ...]  # inclusive (lo, hi) per axis
    spacing: float = 1.0

    def __post_init__(self):
        if self.dimension < 1:
            raise SpectralwalkError("lattice dimension must be >= 1")
        if len(self.extents) != self.dimension:
            raise SpectralwalkError(
                f"expected {self.dimension} extents, got {len(self.extents)}"
            )
        for lo, hi in self.extents:
            if hi < lo:
                raise SpectralwalkError(f"empty extent ({lo}, {hi})")
        if not self.spacing > 0:
            raise SpectralwalkError("spacing must be positive")

    def points(self) -> List[Tuple[int, ...]]:
        ranges = [range(lo, hi + 1) for lo, hi in self.extents]
        return list(itertools.product(*ranges))


@dataclass(frozen=True)
class PointCloudSpec:
    """A finite point cloud with a connectivity cutoff."""

    points: Tuple[Tuple[float, ...], ...]
    cutoff: float

    def __post_init__(self):
        if not self.cutoff > 0:
            raise SpectralwalkError("cutoff must be positive")
        if len(self.points) < 1:
            raise SpectralwalkError("point cloud is empty")


def build_lattice(spec: LatticeSpec) -> GraphWithGeometry:
    """Lattice box graph: W_V = 1, W_E = 1/dist^2 between points at distance <= spacing.

    Vertices are numbered in lexicographic order of their integer
    coordinates; coordinates (scaled by spacing) are attached for
    box-style domain selection.
    """
    pts = spec.points()
    index = {p: i for i, p in enumerate(pts)}
    s = spec.spacing
    w_edge = 1.0 / (s * s)
    edges = {}
    for p, i in index.items():
        for axis in range(spec.dimension):
            q = list(p)
            q[axis] += 1
            j = index.get(tuple(q))
            if j is not None:
                edges[(i, j)] = w_edge
                edges[(j, i)] = w_edge
    coords = {i: tuple(c * s for c in p) for p, i in index.items()}
    return make_graph({i: 1.0 for i in index.values()}, edges, coords=coords)


def build_path(n: int, spacing: float = 1.0) -> GraphWithGeometry:
    """Path on n vertices (a 1-d lattice box)."""
    if n < 2:
        raise SpectralwalkError("path needs at least 2 vertices")
    return build_lattice(LatticeSpec(1, ((0, n - 1),), spacing))


def build_cycle(n: int) -> GraphWithGeometry:
    """Cycle on n vertices with unit weights."""
    if n < 3:
        raise SpectralwalkError("cycle needs at least 3 vertices")
    edges = {}
    for i in range(n):
        j = (i + 1) % n
        edges[(i, j)] = 1.0
        edges[(j, i)] = 1.0
    coords = {
        i: (math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n)) for i in range(n)
    }
    return make_graph({i: 1.0 for i in range(n)}, edges, coords=coords)


def build_point_cloud(spec: PointCloudSpec) -> GraphWithGeometry:
    """Point-cloud graph: W_V = 1, W_E = 1/dist^2 for pairs at distance < cutoff.

    Raises when two points coincide or when the cutoff leaves the graph
    disconnected.
    """
    pts = [tuple(float(c) for c in p) for p in spec.points]
    n = len(pts)
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            d2 = math.fsum((a - b) ** 2 for a, b in zip(pts[i], pts[j]))
            if d2 == 0.0:
                raise SpectralwalkError(f"coincident points at indices {i} and {j}")
            if math.sqrt(d2) < spec.cutoff:
                edges[(i, j)] = 1.0 / d2
                edges[(j, i)] = 1.0 / d2

    # connectivity under the chosen cutoff
    adjacency = {i: set() for i in range(n)}
    for (a, b) in edges:
        adjacency[a].add(b)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in adjacency[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    if len(seen) != n:
        raise SpectralwalkError(
            f"point cloud is disconnected at cutoff {spec.cutoff}: "
            f"{n - len(seen)} of {n} points unreachable"
        )
    return make_graph({i: 1.0 for i in range(n)}, edges, coords=dict(enumerate(pts)))
