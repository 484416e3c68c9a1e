"""Unit tests for the greedy decomposition building blocks.

Closed-form expectations are derived where used. One worth noting: the
discrete norm of the normalized kernel e_a picks up a lattice-aliasing term,
    <e_a, e_a> = 1 + 2 Re(conj(a)^N / (1 - conj(a)^N)),
which for real a = r collapses to (1 + r^N)/(1 - r^N). Tests that rely on
exact unit norms therefore use a = 0, where the kernel is the constant 1.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fastafd import core, oracle, signals, transform


def _random_hardy(n, seed):
    return signals.synth_random_hardy(n, seed=seed)


def _grid(n, radii=(0.0, 0.3, 0.6)):
    return core.ParameterGrid(radii, n)


# ---------------------------------------------------------------------------
# grids and ranges


def test_radius_range_examples():
    assert core.radius_range(0.0, 0.1, 0.8) == tuple(k * 0.1 for k in range(9))
    assert core.radius_range(0.5, 0.2, 0.5) == (0.5,)
    # Endpoint included despite accumulated float error in the step.
    assert len(core.radius_range(0.1, 0.1, 0.9)) == 9


def test_radius_range_rejects():
    with pytest.raises(ValueError):
        core.radius_range(0.0, 0.0, 0.5)
    with pytest.raises(ValueError):
        core.radius_range(0.5, 0.1, 0.2)


def test_grid_constructors():
    g = core.ParameterGrid.experiment_default(64)
    assert g.radii == core.radius_range(0.0, 0.1, 0.8)
    assert g.angular_count == 64
    assert core.ParameterGrid.evenly_spaced(4, 64).radii == (0.2, 0.4, 0.6, 0.8)
    p = g.point(3, 16)
    assert p.radius == g.radii[3]
    assert p.angle_index == 16
    assert abs(p.value - 0.3 * 1j) < 1e-15


def test_grid_validation():
    with pytest.raises(ValueError):
        core.ParameterGrid((0.5, 0.3), 64)
    with pytest.raises(ValueError):
        core.ParameterGrid((0.5, 1.0), 64)
    with pytest.raises(ValueError):
        core.ParameterGrid((), 64)
    with pytest.raises(ValueError):
        core.ParameterGrid((0.5,), 48)
    with pytest.warns(UserWarning):
        core.ParameterGrid((0.5, 0.97), 64)


def test_parameter_point_validation():
    with pytest.raises(ValueError):
        core.ParameterPoint(1.0, 0, 1.0 + 0j)
    with pytest.raises(ValueError):
        core.ParameterPoint(0.5, 0, 1.2 + 0j)


# ---------------------------------------------------------------------------
# energies, projection, sampled atoms


def test_discrete_energy_examples():
    n = 32
    assert core.discrete_energy(np.ones(n, dtype=np.complex128)) == 1.0
    z = np.exp(2j * np.pi * np.arange(n) / n)
    assert abs(core.discrete_energy(z) - 1.0) < 1e-15
    g = _random_hardy(n, seed=2)
    assert abs(core.discrete_energy(2.0 * g) - 4.0 * core.discrete_energy(g)) \
        < 1e-12 * core.discrete_energy(g)
    ip = oracle.quadrature_inner_product(g, g)
    assert abs(core.discrete_energy(g) - ip.real) < 1e-14 * abs(ip)


def test_analytic_projection_of_cosine():
    # cos t = (e^{it} + e^{-it})/2; folding the negative bin onto the
    # positive one gives exactly e^{it}.
    n = 64
    t = 2.0 * np.pi * np.arange(n) / n
    out = core.analytic_projection(np.cos(t))
    assert np.max(np.abs(out - np.exp(1j * t))) < 1e-12


@given(k=st.integers(min_value=3, max_value=9), seed=st.integers(0, 2 ** 31))
@settings(max_examples=30, deadline=None)
def test_analytic_projection_preserves_real_part(k, seed):
    n = 2 ** k
    rng = np.random.Generator(np.random.Philox(seed))
    x = rng.standard_normal(n)
    out = core.analytic_projection(x)
    scale = max(np.max(np.abs(x)), 1.0)
    assert np.max(np.abs(out.real - x)) < 1e-11 * scale


def test_analytic_projection_rejects_complex_input():
    with pytest.raises(ValueError):
        core.analytic_projection(np.full(8, 1j))
    # A complex dtype carrying only real values is fine.
    out = core.analytic_projection(np.ones(8, dtype=np.complex128))
    assert np.max(np.abs(out - 1.0)) < 1e-14


def test_kernel_samples_at_origin_is_constant_one():
    assert np.array_equal(core.kernel_samples(0j, 16), np.ones(16))


def test_kernel_discrete_norm_closed_form():
    # (1 + r^N)/(1 - r^N) for a real pole; see the module docstring.
    n = 8
    r = 0.5
    e = core.kernel_samples(r + 0j, n)
    expected = (1.0 + r ** n) / (1.0 - r ** n)
    assert abs(core.discrete_energy(e) - expected) < 1e-13


@given(r=st.floats(0.0, 0.9), frac=st.floats(0.0, 1.0))
@settings(max_examples=50, deadline=None)
def test_blaschke_samples_unimodular(r, frac):
    a = r * np.exp(2j * np.pi * frac)
    b = core.blaschke_samples(a, 64)
    assert np.max(np.abs(np.abs(b) - 1.0)) < 1e-14


def test_blaschke_at_origin_is_identity_map():
    z = np.exp(2j * np.pi * np.arange(16) / 16)
    assert np.max(np.abs(core.blaschke_samples(0j, 16) - z)) < 1e-15


def test_pole_outside_disc_rejected():
    for bad in (1.0 + 0j, 1.2j, -2.0 + 0j):
        with pytest.raises(ValueError):
            core.kernel_samples(bad, 16)
        with pytest.raises(ValueError):
            core.blaschke_samples(bad, 16)


def test_spectral_coefficients_match_forward_transform():
    g = _random_hardy(64, seed=9)
    assert np.array_equal(core.spectral_coefficients(g), transform.dft_forward(g))
    with pytest.raises(ValueError):
        core.spectral_coefficients(np.ones(12))


# ---------------------------------------------------------------------------
# field evaluation and selection


def test_field_matches_direct_oracle():
    n = 64
    grid = _grid(n)
    for seed in range(5):
        g = _random_hardy(n, seed=seed)
        fft_field = core.inner_product_field(core.spectral_coefficients(g), grid)
        direct = oracle.field_direct(g, grid)
        scale = np.max(np.abs(direct))
        assert np.max(np.abs(fft_field - direct)) < 1e-10 * scale


def test_parallel_field_is_bit_identical(monkeypatch):
    monkeypatch.setenv("AFD_THREADS", "3")
    n = 256
    grid = _grid(n, radii=core.radius_range(0.0, 0.1, 0.8))
    c = core.spectral_coefficients(_random_hardy(n, seed=4))
    sequential = core.inner_product_field(c, grid, parallel=False)
    threaded = core.inner_product_field(c, grid, parallel=True)
    assert np.array_equal(sequential, threaded)


def test_field_rejects_mismatched_grid():
    with pytest.raises(ValueError):
        core.inner_product_field(np.ones(32, dtype=np.complex128), _grid(64))


def test_maximal_selection_constant_signal_picks_origin():
    # For G = 1, |<G, e_a>| = sqrt(1-r^2)/(1-r^N) on every circle, strictly
    # decreasing in r, and radius 0 maps every angle to the same pole; the
    # deterministic tie-break must return angle index 0.
    n = 32
    grid = _grid(n)
    g = np.ones(n, dtype=np.complex128)
    field = core.inner_product_field(core.spectral_coefficients(g), grid)
    point, coeff = core.maximal_selection(field, grid)
    assert point.radius == 0.0
    assert point.angle_index == 0
    assert abs(coeff - 1.0) < 1e-13


def test_maximal_selection_tie_breaks_row_major():
    grid = _grid(8, radii=(0.0, 0.2, 0.4))
    field = np.zeros((3, 8), dtype=np.complex128)
    field[1, 3] = 2.0
    field[2, 0] = -2.0  # same squared magnitude, later row
    point, coeff = core.maximal_selection(field, grid)
    assert (point.radius, point.angle_index) == (0.2, 3)
    assert coeff == 2.0


def test_maximal_selection_rejects_bad_shape():
    with pytest.raises(ValueError):
        core.maximal_selection(np.zeros((2, 8)), _grid(8))


# ---------------------------------------------------------------------------
# remainder algebra


def test_remainder_update_kills_single_atom():
    n = 64
    a = 0.4 * np.exp(2j * np.pi * 5 / n)
    c = 1.7 - 0.3j
    g = c * core.kernel_samples(a, n)
    out = core.remainder_update(g, a, c)
    assert np.max(np.abs(out)) < 1e-12


def test_remainder_update_with_zero_coefficient_preserves_modulus():
    n = 64
    g = _random_hardy(n, seed=6)
    out = core.remainder_update(g, 0.3 + 0.2j, 0.0)
    assert np.max(np.abs(np.abs(out) - np.abs(g))) < 1e-12
    assert abs(core.discrete_energy(out) - core.discrete_energy(g)) \
        < 1e-12 * core.discrete_energy(g)


def test_remainder_update_mean_removal_energy_budget():
    # At a = 0 the kernel is exactly unit-norm on the lattice, so removing
    # the mean drops the energy by |mean|^2 exactly (up to roundoff).
    n = 64
    g = _random_hardy(n, seed=8)
    mean = complex(np.mean(g))
    out = core.remainder_update(g, 0j, mean)
    expected = core.discrete_energy(g) - abs(mean) ** 2
    assert abs(core.discrete_energy(out) - expected) < 1e-13 * core.discrete_energy(g)


# ---------------------------------------------------------------------------
# decompose


def test_decompose_recovers_single_atom():
    n = 256
    grid = core.ParameterGrid.experiment_default(n)
    point = grid.point(5, 17)  # radius 0.5
    c = 2.5 * np.exp(0.3j)
    g = c * core.kernel_samples(point, n)
    d = core.decompose(g, grid, max_terms=1)
    step = d.steps[0]
    assert (step.point.radius, step.point.angle_index) == (0.5, 17)
    assert abs(step.coefficient - c) < 1e-12
    assert step.residual_energy < 1e-20 * d.initial_energy


def test_decompose_zero_signal_is_empty():
    n = 32
    d = core.decompose(np.zeros(n, dtype=np.complex128), _grid(n))
    assert len(d) == 0
    assert d.initial_energy == 0.0
    assert np.array_equal(d.remainder, np.zeros(n))


def test_decompose_constant_signal_stops_at_exact_zero():
    # One mean atom annihilates a constant; the loop must stop early even
    # with max_terms much larger.
    n = 32
    d = core.decompose(np.full(n, 2.0 + 1.0j), _grid(n), max_terms=5)
    assert len(d) == 1
    assert d.steps[0].point.value == 0j
    assert d.steps[0].residual_energy == 0.0


def test_decompose_threshold_stops_early():
    g = signals.synth_f1(1024)
    grid = core.ParameterGrid.experiment_default(1024)
    d = core.decompose(g, grid, max_terms=10, threshold=0.05)
    assert 0 < len(d) < 10
    energies = [s.residual_energy for s in d.steps]
    assert energies[-1] <= 0.05 * d.initial_energy
    if len(energies) > 1:
        assert energies[-2] > 0.05 * d.initial_energy


@pytest.mark.parametrize("seed", [0, 1])
def test_decompose_energy_identity(seed):
    n = 128
    g = _random_hardy(n, seed=seed)
    grid = core.ParameterGrid.experiment_default(n)
    d = core.decompose(g, grid, max_terms=8)
    e0 = d.initial_energy
    spent = 0.0
    for step in d.steps:
        spent += abs(step.coefficient) ** 2
        assert abs((e0 - spent) - step.residual_energy) < 1e-10 * e0
    assert abs(core.discrete_energy(d.remainder) - d.steps[-1].residual_energy) \
        < 1e-12 * e0


@pytest.mark.parametrize("seed", [3, 11, 42])
def test_decompose_engines_agree(seed):
    # Signals with complex random coefficients avoid the conjugate-symmetric
    # field ties a real-coefficient signal would produce.
    n = 128
    g = _random_hardy(n, seed=seed)
    grid = core.ParameterGrid.experiment_default(n)
    d_fft = core.decompose(g, grid, max_terms=6, engine="fft")
    d_direct = core.decompose(g, grid, max_terms=6, engine="direct")
    for s_f, s_d in zip(d_fft.steps, d_direct.steps):
        assert s_f.point.radius == s_d.point.radius
        assert s_f.point.angle_index == s_d.point.angle_index
        assert abs(s_f.coefficient - s_d.coefficient) < 1e-9 * abs(s_d.coefficient)
        assert abs(s_f.residual_energy - s_d.residual_energy) < 1e-9 * d_fft.initial_energy


def test_decompose_residuals_non_increasing():
    for seed in range(4):
        g = _random_hardy(64, seed=seed)
        d = core.decompose(g, core.ParameterGrid.experiment_default(64), max_terms=6)
        energies = [d.initial_energy] + [s.residual_energy for s in d.steps]
        for before, after in zip(energies, energies[1:]):
            assert after <= before * (1.0 + 1e-12)


def test_decompose_dc_first_pins_mean_atom():
    n = 64
    g = _random_hardy(n, seed=5)
    grid = core.ParameterGrid.experiment_default(n)
    d = core.decompose(g, grid, max_terms=3, dc_first=True)
    first = d.steps[0]
    assert first.point.value == 0j
    assert first.point.radius == 0.0
    assert first.point.angle_index == 0
    assert abs(first.coefficient - np.mean(g)) < 1e-15 * abs(np.mean(g))


@pytest.mark.parametrize("scale", [1e-6, 1.0, 137.0, 1e6])
def test_decompose_selection_is_scale_invariant(scale):
    n = 64
    g = _random_hardy(n, seed=13)
    grid = core.ParameterGrid.experiment_default(n)
    base = core.decompose(g, grid, max_terms=4)
    scaled = core.decompose(scale * g, grid, max_terms=4)
    for s_b, s_s in zip(base.steps, scaled.steps):
        assert s_b.point.value == s_s.point.value
        assert abs(s_s.coefficient - scale * s_b.coefficient) \
            < 1e-12 * scale * abs(s_b.coefficient)


def test_decompose_argument_validation():
    n = 32
    g = _random_hardy(n, seed=0)
    grid = _grid(n)
    with pytest.raises(ValueError):
        core.decompose(g, _grid(64))
    with pytest.raises(ValueError):
        core.decompose(g, grid, max_terms=0)
    with pytest.raises(ValueError):
        core.decompose(g, grid, engine="fastest")
    with pytest.raises(ValueError):
        core.decompose(g, grid, threshold=0.0)
    with pytest.raises(ValueError):
        core.decompose(g, grid, threshold=1.5)
    with pytest.raises(ValueError):
        core.decompose(np.full(n, np.nan + 0j), grid)


# ---------------------------------------------------------------------------
# basis, reconstruction, errors


def test_tm_basis_first_function_is_kernel():
    a = 0.4 + 0.2j
    assert np.array_equal(core.tm_basis_samples([a], 32),
                          core.kernel_samples(a, 32))
    with pytest.raises(ValueError):
        core.tm_basis_samples([], 32)


def test_tm_basis_gram_matrix_near_identity():
    n = 256
    rng = np.random.Generator(np.random.Philox(21))
    poles = rng.uniform(0.0, 0.8, size=6) * np.exp(2j * np.pi * rng.uniform(size=6))
    basis = [core.tm_basis_samples(poles[: k + 1], n) for k in range(len(poles))]
    gram = np.array([[oracle.quadrature_inner_product(bi, bj) for bj in basis]
                     for bi in basis])
    assert np.max(np.abs(gram - np.eye(len(poles)))) < 1e-9


def test_reconstruct_zero_terms_is_zero_signal():
    g = _random_hardy(64, seed=1)
    d = core.decompose(g, core.ParameterGrid.experiment_default(64), max_terms=3)
    assert np.array_equal(core.reconstruct(d, 0), np.zeros(64))
    with pytest.raises(ValueError):
        core.reconstruct(d, len(d.steps) + 1)
    with pytest.raises(ValueError):
        core.reconstruct(d, -1)


def test_reconstruction_plus_remainder_restores_signal():
    # G = S_n + G_{n+1} prod_k B_{a_k} exactly, by construction of the
    # remainder recursion.
    n = 128
    g = _random_hardy(n, seed=17)
    grid = core.ParameterGrid.experiment_default(n)
    d = core.decompose(g, grid, max_terms=6)
    tail = d.remainder.copy()
    for step in d.steps:
        tail *= core.blaschke_samples(step.point, n)
    rebuilt = core.reconstruct(d, len(d.steps)) + tail
    assert np.max(np.abs(rebuilt - g)) < 1e-10 * np.max(np.abs(g))


def test_relative_error_trivial_cases():
    g = _random_hardy(32, seed=2)
    assert core.relative_error(g, g.copy()) == 0.0
    assert abs(core.relative_error(g, np.zeros(32)) - 1.0) < 1e-15
    with pytest.raises(ValueError):
        core.relative_error(np.zeros(32), g)
    with pytest.raises(ValueError):
        core.relative_error(g, _random_hardy(64, seed=2))


def test_error_trace_matches_reconstruct_loop():
    n = 128
    g = _random_hardy(n, seed=23)
    grid = core.ParameterGrid.experiment_default(n)
    d = core.decompose(g, grid, max_terms=6)
    trace = core.error_trace(d, g)
    assert len(trace) == len(d.steps)
    rebuilt = [core.relative_error(g, core.reconstruct(d, k))
               for k in range(1, len(d.steps) + 1)]
    assert np.max(np.abs(np.array(trace) - np.array(rebuilt))) < 1e-15
    with pytest.raises(ValueError):
        core.error_trace(d, _random_hardy(64, seed=23))
