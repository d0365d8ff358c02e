import math

import numpy as np
import pytest

from spectralwalk import (
    SpectralwalkError,
    WalkConfig,
    compare_exact,
    interior_laplacian,
    moment_spectrum,
    poisson_spectrum,
    run_walks,
    solve_hierarchies,
    variational_quotient,
)

from helpers import box_domain, random_domain, random_reversible_graph, relerr


def test_hierarchies_fixture_a(fixture_a):
    sol = solve_hierarchies(fixture_a, 3)
    assert sol.g_functions[1] == pytest.approx([0.5], rel=1e-12)
    assert sol.g_functions[2] == pytest.approx([0.5], rel=1e-12)
    assert sol.f_functions[1] == pytest.approx([0.5], rel=1e-12)
    # deterministic walk: tau = 1/2 always, so E[tau^k] = 2^-k
    assert sol.f_functions[2] == pytest.approx([0.25], rel=1e-12)
    assert sol.f_functions[3] == pytest.approx([0.125], rel=1e-12)


def test_hierarchies_fixture_b(fixture_b):
    sol = solve_hierarchies(fixture_b, 2)
    assert sol.g_functions[1] == pytest.approx([1.0, 1.0], rel=1e-12)
    assert sol.g_functions[2] == pytest.approx([2.0, 2.0], rel=1e-12)
    assert sol.f_functions[1] == pytest.approx([1.0, 1.0], rel=1e-12)
    assert sol.f_functions[2] == pytest.approx([1.5, 1.5], rel=1e-12)


def test_f1_equals_g1_exactly():
    rng = np.random.default_rng(2)
    g = random_reversible_graph(rng, n=10, extra_edges=6)
    d = random_domain(g, rng)
    sol = solve_hierarchies(d, 1)
    assert np.array_equal(sol.f_functions[1], sol.g_functions[1])


def test_hierarchy_positivity():
    rng = np.random.default_rng(7)
    for _ in range(5):
        g = random_reversible_graph(rng, n=10, extra_edges=6)
        d = random_domain(g, rng)
        sol = solve_hierarchies(d, 8)
        for k in range(9):
            assert np.all(sol.g_functions[k] > 0)
            assert np.all(sol.f_functions[k] > 0)


def test_f_recursion_residual():
    # L f_k == k f_{k-1} + sum_j C(k,j)(-1/w_V)^(j-1) f_{k-j}, re-applied forward
    rng = np.random.default_rng(13)
    g = random_reversible_graph(rng, n=10, extra_edges=6)
    d = random_domain(g, rng)
    op = interior_laplacian(d)
    sol = solve_hierarchies(d, 6)
    inv_w = 1.0 / op.aux_weights
    for k in range(1, 7):
        rhs = k * sol.f_functions[k - 1]
        for j in range(2, k + 1):
            rhs = rhs + math.comb(k, j) * (-inv_w) ** (j - 1) * sol.f_functions[k - j]
        res = op.L @ sol.f_functions[k] - rhs
        assert np.max(np.abs(res)) < 1e-10 * max(1.0, np.max(np.abs(rhs)))


def test_moment_spectrum_values(fixture_a, fixture_b):
    assert moment_spectrum(fixture_a, 2) == pytest.approx([1.0, 0.5, 0.25], rel=1e-12)
    assert moment_spectrum(fixture_b, 2) == pytest.approx([2.0, 2.0, 3.0], rel=1e-12)


def test_poisson_spectrum_values(fixture_a, fixture_b):
    assert poisson_spectrum(fixture_a, 2) == pytest.approx([1.0, 0.5, 0.5], rel=1e-12)
    assert poisson_spectrum(fixture_b, 2) == pytest.approx([2.0, 2.0, 4.0], rel=1e-12)


def test_order_zero_is_weighted_volume():
    rng = np.random.default_rng(19)
    g = random_reversible_graph(rng, n=9, extra_edges=5)
    d = random_domain(g, rng)
    vol = sum(g.vertex_weights[v] for v in d.interior)
    assert moment_spectrum(d, 0)[0] == pytest.approx(vol, rel=1e-13)
    assert poisson_spectrum(d, 0)[0] == pytest.approx(vol, rel=1e-13)


def test_variational_quotient_examples(fixture_b):
    assert variational_quotient(fixture_b, [1.0, 1.0], 1) == pytest.approx(2.0, rel=1e-12)
    assert variational_quotient(fixture_b, [1.0, -1.0], 1) == 0.0
    q = variational_quotient(fixture_b, [0.3, 1.7], 2)
    assert q == pytest.approx(variational_quotient(fixture_b, [-0.6, -3.4], 2), rel=1e-12)
    with pytest.raises(SpectralwalkError):
        variational_quotient(fixture_b, [0.0, 0.0], 1)


def test_variational_supremum(fixture_b):
    # 200 random trials never beat the Poisson spectrum; g_k attains it
    rng = np.random.default_rng(23)
    domains = [fixture_b, box_domain(2, inner_width=3)]
    for d in domains:
        kmax = 4
        a2 = poisson_spectrum(d, kmax)
        sol = solve_hierarchies(d, kmax)
        op = interior_laplacian(d)
        for k in range(1, kmax + 1):
            bound = a2[k] * (1 + 1e-9)
            for _ in range(200):
                trial = rng.normal(size=d.n_interior)
                if not np.any(trial):
                    continue
                assert math.factorial(k) * variational_quotient(d, trial, k, op=op) <= bound
            attained = math.factorial(k) * variational_quotient(d, sol.g_functions[k], k, op=op)
            assert attained == pytest.approx(a2[k], rel=1e-9)


def test_monte_carlo_bridge(fixture_b):
    stats = run_walks(fixture_b, WalkConfig(start_vertex=2, num_walks=20_000, seed=101, k_max=3))
    sol = solve_hierarchies(fixture_b, 3)
    z = compare_exact(fixture_b, stats, sol)
    assert all(abs(v) < 4.0 for v in z)


def test_kmax_cap():
    with pytest.raises(SpectralwalkError):
        moment_spectrum(box_domain(1, inner_width=3), 21)
    with pytest.raises(SpectralwalkError):
        poisson_spectrum(box_domain(1, inner_width=3), 21)


def test_dynkin_identity_on_deterministic_domain(fixture_a):
    # interior vertex exits in one step of size 1/w_V: the recursion collapses
    # to L f_k = w_V (E[tau^k] - E[(tau - 1/w_V)^k]) with tau = 1/w_V a.s.
    sol = solve_hierarchies(fixture_a, 4)
    op = interior_laplacian(fixture_a)
    w = op.aux_weights[0]
    tau = 1.0 / w
    for k in range(1, 5):
        lhs = (op.L @ sol.f_functions[k])[0]
        rhs = w * (tau**k - 0.0**k)
        assert lhs == pytest.approx(rhs, rel=1e-12)
