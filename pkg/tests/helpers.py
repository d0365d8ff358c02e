"""Shared constructions for the test suite: reference domains and oracles."""

import math

import numpy as np

from spectralwalk import (
    LatticeSpec,
    build_cycle,
    build_lattice,
    make_domain,
    make_graph,
)


def relerr(got, want):
    got = np.asarray(got, dtype=float)
    want = np.asarray(want, dtype=float)
    scale = np.maximum(np.abs(want), 1e-300)
    return float(np.max(np.abs(got - want) / scale))


def comb_domain(spoke_weights):
    """Domain whose interior Laplacian is exactly diag(spoke_weights).

    Interior vertices are spokes hanging off a boundary rail; an anchor
    vertex outside the domain keeps every rail vertex boundary. With unit
    vertex weights the starred spectrum is the spoke weights, each with
    mass 1.
    """
    m = len(spoke_weights)
    anchor = 2 * m
    vw = {anchor: 1.0}
    edges = {}
    for i, w in enumerate(spoke_weights):
        rail, spoke = i, m + i
        vw[rail] = 1.0
        vw[spoke] = 1.0
        edges[(rail, spoke)] = w
        edges[(spoke, rail)] = w
        edges[(rail, anchor)] = 1.0
        edges[(anchor, rail)] = 1.0
        if i + 1 < m:
            edges[(i, i + 1)] = 1.0
            edges[(i + 1, i)] = 1.0
    g = make_graph(vw, edges)
    return make_domain(g, set(range(2 * m)))


def box_domain(dim, inner_width, margin=1):
    """Sub-box domain of a lattice box parent; regular with alpha = 2*dim."""
    lo = 0
    hi = inner_width + 2 * margin - 1
    g = build_lattice(LatticeSpec(dim, ((lo, hi),) * dim))
    sel = {
        i
        for i, c in g.coords.items()
        if all(margin <= x <= hi - margin for x in c)
    }
    return make_domain(g, sel)


def cycle_arc_domain(n, arc_len, offset=0):
    """Arc of a cycle; interior is the arc minus its endpoints (alpha = 2)."""
    g = build_cycle(n)
    arc = {(offset + i) % n for i in range(arc_len)}
    return make_domain(g, arc)


def tree_domain(branching, levels):
    """Truncated regular tree: interior vertices all have degree `branching`.

    The parent tree has `levels` levels; the domain drops the deepest
    level, so the next level becomes boundary and everything above is
    interior with auxiliary weight alpha = branching.
    """
    assert levels >= 3
    vw = {0: 1.0}
    edges = {}
    level = [0]
    next_id = 1
    domain = {0}
    for depth in range(1, levels):
        new_level = []
        for parent in level:
            n_children = branching if parent == 0 else branching - 1
            for _ in range(n_children):
                c = next_id
                next_id += 1
                vw[c] = 1.0
                edges[(parent, c)] = 1.0
                edges[(c, parent)] = 1.0
                new_level.append(c)
                if depth <= levels - 2:
                    domain.add(c)
        level = new_level
    g = make_graph(vw, edges)
    return make_domain(g, domain)


def random_reversible_graph(rng, n=8, extra_edges=6):
    """Connected graph with random positive weights satisfying reversibility.

    Edge weights come from a symmetric auxiliary S via W_E(x,y) = S/W_V(x),
    which satisfies the detailed-balance condition by construction.
    """
    wv = rng.uniform(0.5, 2.0, n)
    pairs = set()
    order = rng.permutation(n)
    for k in range(1, n):
        v = int(order[k])
        u = int(order[int(rng.integers(0, k))])
        pairs.add((min(u, v), max(u, v)))
    while len(pairs) < n - 1 + extra_edges:
        u, v = (int(x) for x in rng.integers(0, n, 2))
        if u != v:
            pairs.add((min(u, v), max(u, v)))
    edges = {}
    for (u, v) in pairs:
        s = float(rng.uniform(0.5, 2.0))
        edges[(u, v)] = s / wv[u]
        edges[(v, u)] = s / wv[v]
    return make_graph({i: float(wv[i]) for i in range(n)}, edges)


def random_domain(g, rng, max_tries=50):
    """A random ball-shaped domain of g with nonempty interior and boundary."""
    for _ in range(max_tries):
        center = int(rng.integers(0, g.n_vertices))
        radius = int(rng.integers(1, 4))
        ball = {center}
        frontier = {center}
        for _ in range(radius):
            frontier = {u for v in frontier for u in g.neighbors[v]} - ball
            ball |= frontier
        if len(ball) == g.n_vertices:
            continue
        interior = [v for v in ball if all(u in ball for u in g.neighbors[v])]
        if interior:
            return make_domain(g, ball)
    raise AssertionError("could not sample a usable domain")


def assert_histogram_matches(histogram, probabilities, n_walks, sigma=4.0, min_expected=25):
    """Binomial band check of an exit-index histogram against exact bin masses."""
    checked = 0
    for l, p in enumerate(probabilities, start=1):
        expected = n_walks * p
        if expected < min_expected:
            continue
        observed = histogram.get(l, 0)
        band = sigma * math.sqrt(n_walks * p * (1.0 - p))
        assert abs(observed - expected) <= band, (
            f"eta={l}: observed {observed}, expected {expected:.1f} +- {band:.1f}"
        )
        checked += 1
    assert checked > 0, "no bin had enough mass to check"
