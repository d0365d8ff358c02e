"""Monte Carlo simulation of the natural random walk and its exit statistics.

Walks start at an interior vertex, step with probabilities
p(x, y) = W_E(x, y) / w_V(x), and stop on the first vertex outside the
interior. The exit index eta counts interior positions visited; the exit
time tau accumulates 1/w_V at each of them (compensated summation, so
that eta == alpha * tau holds to roundoff on alpha-regular domains).

Reproducibility: walk i draws from its own Philox substream jumped i
times from the seed, so results are independent of execution order and
of the number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .domain import Domain
from .errors import SpectralwalkError
from .poisson import HierarchySolution

MOMENT_K_MAX = 6
DEFAULT_MAX_STEPS = 10**8


@dataclass(frozen=True)
class WalkConfig:
    start_vertex: int
    num_walks: int
    seed: int
    k_max: int = 3
    max_steps: int = DEFAULT_MAX_STEPS

    def __post_init__(self):
        if self.num_walks < 1:
            raise SpectralwalkError("num_walks must be >= 1")
        if not 1 <= self.k_max <= MOMENT_K_MAX:
            raise SpectralwalkError(f"k_max must lie in 1..{MOMENT_K_MAX}")
        if self.max_steps < 1:
            raise SpectralwalkError("max_steps must be >= 1")


@dataclass(frozen=True)
class ExitStats:
    config: WalkConfig
    empirical_moments: Tuple[float, ...]   # E[tau^k] estimates, k = 0..k_max
    standard_errors: Tuple[float, ...]     # per k; entry 0 is 0 by convention
    eta_histogram: Dict[int, int]          # exit index -> count
    walks_run: int
    complete: bool                          # False when the step cap truncated the run


def _sampling_tables(d: Domain):
    """Per interior vertex: cumulative outgoing weights and step targets.

    Targets are interior indices, or -1 for an exit step. Only interior
    rows are needed: interior neighborhoods lie inside the domain.
    """
    g = d.parent
    cums, targets, inv_w = [], [], []
    for v in d.interior:
        nbrs = g.neighbors[v]
        w = np.array([g.edge_weights[(v, u)] for u in nbrs])
        cums.append(np.cumsum(w))
        targets.append(np.array([d.interior_index.get(u, -1) for u in nbrs], dtype=np.int64))
        inv_w.append(1.0 / g.aux_weights[v])
    return cums, targets, np.array(inv_w)


def _simulate_range(d: Domain, cfg: WalkConfig, lo: int, hi: int, budget: int):
    """Run walks lo..hi-1; returns (taus, etas, steps_used, completed_walks)."""
    cums, targets, inv_w = _sampling_tables(d)
    start = d.interior_index[cfg.start_vertex]
    totals = [c[-1] for c in cums]
    taus = np.empty(hi - lo)
    etas = np.empty(hi - lo, dtype=np.int64)
    steps = 0
    for n, i in enumerate(range(lo, hi)):
        rng = np.random.Generator(np.random.Philox(key=cfg.seed).jumped(i))
        pos = start
        eta = 0
        tau = 0.0
        comp = 0.0  # Kahan compensation
        while True:
            term = inv_w[pos] - comp
            total = tau + term
            comp = (total - tau) - term
            tau = total
            eta += 1
            steps += 1
            if steps > budget:
                return taus[:n], etas[:n], steps - 1, n
            u = rng.random() * totals[pos]
            nxt = targets[pos][np.searchsorted(cums[pos], u, side="right")]
            if nxt < 0:
                break
            pos = nxt
        taus[n] = tau
        etas[n] = eta
    return taus, etas, steps, hi - lo


def run_walks(d: Domain, cfg: WalkConfig, workers: Optional[int] = None) -> ExitStats:
    """Simulate cfg.num_walks exits and aggregate moments with standard errors.

    Deterministic for a fixed (domain, config); a worker pool only
    changes wall time, not results, because each walk owns a substream.
    When the global step cap is hit the stats cover the completed walks
    and ``complete`` is False.
    """
    d.require_boundary("walk simulation")
    if cfg.start_vertex not in d.interior_index:
        raise SpectralwalkError(f"start vertex {cfg.start_vertex} is not interior")

    if workers is not None and workers > 1:
        n_chunks = min(workers * 4, cfg.num_walks)
        bounds = np.linspace(0, cfg.num_walks, n_chunks + 1, dtype=int)
        budget = cfg.max_steps // n_chunks
        parts = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [
                pool.submit(_simulate_range, d, cfg, int(a), int(b), budget)
                for a, b in zip(bounds[:-1], bounds[1:])
                if b > a
            ]
            parts = [f.result() for f in futs]
        taus = np.concatenate([p[0] for p in parts])
        etas = np.concatenate([p[1] for p in parts])
        complete = all(p[3] == (b - a) for p, (a, b) in zip(parts, zip(bounds[:-1], bounds[1:])))
    else:
        taus, etas, _, done = _simulate_range(d, cfg, 0, cfg.num_walks, cfg.max_steps)
        complete = done == cfg.num_walks

    walks_run = len(taus)
    if walks_run == 0:
        raise SpectralwalkError("step cap exhausted before any walk finished")

    moments = [1.0]
    errors = [0.0]
    for k in range(1, cfg.k_max + 1):
        powers = taus**k
        moments.append(float(np.mean(powers)))
        if walks_run > 1:
            errors.append(float(np.std(powers, ddof=1) / math.sqrt(walks_run)))
        else:
            errors.append(float("inf"))
    counts = np.bincount(etas)
    histogram = {int(l): int(c) for l, c in enumerate(counts) if c > 0}
    return ExitStats(
        config=cfg,
        empirical_moments=tuple(moments),
        standard_errors=tuple(errors),
        eta_histogram=histogram,
        walks_run=walks_run,
        complete=complete,
    )


def compare_exact(d: Domain, stats: ExitStats, hierarchy: HierarchySolution) -> List[float]:
    """z-scores of the empirical moments against the hierarchy solution.

    z_k = (empirical E[tau^k] - f_k(start)) / SE_k for k = 1..k_max; an
    exact match with zero standard error scores 0.
    """
    if hierarchy.k_max < stats.config.k_max:
        raise SpectralwalkError(
            f"hierarchy solved to k={hierarchy.k_max} but stats carry k={stats.config.k_max}"
        )
    start = stats.config.start_vertex
    if start not in d.interior_index:
        raise SpectralwalkError(f"start vertex {start} is not interior in this domain")
    out = []
    for k in range(1, stats.config.k_max + 1):
        exact = hierarchy.exit_moment(d, start, k)
        diff = stats.empirical_moments[k] - exact
        se = stats.standard_errors[k]
        if se == 0.0:
            out.append(0.0 if diff == 0.0 else math.copysign(math.inf, diff))
        else:
            out.append(diff / se)
    return out
