import numpy as np
import pytest

from rieszlab.errors import (
    DivergenceDetected,
    IndexOutOfWindow,
    InvalidStrip,
    SeparationViolation,
    UnwrapFailure,
    WeightViolation,
)
from rieszlab.inner import (
    BlaschkeExpInner,
    TailPolicy,
    boundary_derivative,
    boundary_profile,
    clark_derivative,
    clark_inner,
    eval_inner,
    min_modulus_strip,
    validate_sequence,
)


def lattice_seq(M, nu=1.0 / np.pi):
    lam = np.arange(-M, M + 1, dtype=float)
    return validate_sequence(lam, np.full(len(lam), nu), first_index=-M)


class TestValidateSequence:
    def test_integer_window(self):
        seq = validate_sequence(np.arange(-3, 4), np.full(7, 1 / np.pi))
        assert seq.delta == 1.0
        assert np.isfinite(seq.discrepancy)

    def test_alternating_perturbation(self):
        n = np.arange(-20, 21)
        seq = validate_sequence(n + 0.3 * (-1.0) ** n, np.ones(41))
        assert seq.delta == pytest.approx(0.4, abs=1e-12)

    def test_sqrt_nodes_small_delta_reported(self):
        n = np.arange(1, 101)
        seq = validate_sequence(np.sqrt(n), np.ones(100))
        assert seq.delta == pytest.approx(np.sqrt(100) - np.sqrt(99), abs=1e-12)

    def test_coincident_nodes_rejected(self):
        with pytest.raises(SeparationViolation):
            validate_sequence([0.0, 1.0, 1.0], [1, 1, 1])

    def test_negative_weight_rejected(self):
        with pytest.raises(WeightViolation):
            validate_sequence([0.0, 1.0], [1.0, -2.0])

    def test_unsorted_input_sorted_with_permutation(self):
        seq = validate_sequence([2.0, 0.0, 1.0], [3.0, 1.0, 2.0])
        assert np.all(np.diff(seq.lambdas) > 0)
        assert seq.permutation is not None
        assert np.allclose(seq.nus, [1.0, 2.0, 3.0])


class TestEvalInner:
    def test_zero_of_blaschke_factor(self):
        theta = BlaschkeExpInner(0.0, [1j])
        assert abs(theta(1j)) < 1e-15

    def test_single_factor_at_origin(self):
        theta = BlaschkeExpInner(0.0, [1j])
        assert theta(0.0) == pytest.approx(-1.0)

    def test_pure_exponential(self):
        theta = BlaschkeExpInner(1.0, [])
        assert theta(1j) == pytest.approx(np.exp(-1.0))

    def test_unimodular_on_axis(self):
        theta = BlaschkeExpInner(0.7, [1j, -2 + 0.5j, 3 + 2j])
        t = np.linspace(-20, 20, 401)
        assert np.max(np.abs(np.abs(theta(t.astype(complex))) - 1.0)) < 1e-10

    def test_contractive_above_axis(self):
        rng = np.random.default_rng(7)
        theta = BlaschkeExpInner(0.3, [0.5 + 1j, -1 + 0.25j])
        z = rng.uniform(-5, 5, 200) + 1j * rng.uniform(0, 5, 200)
        assert np.all(np.abs(theta(z)) <= 1.0 + 1e-10)

    def test_reflection_identity_below_axis(self):
        theta = BlaschkeExpInner(0.5, [1j, 2 + 2j])
        depth = theta.continuation_depth()
        rng = np.random.default_rng(3)
        z = rng.uniform(-3, 3, 50) + 1j * rng.uniform(-0.9 * depth, 0, 50)
        prod = theta(z) * np.conj(theta(np.conj(z)))
        assert np.max(np.abs(prod - 1.0)) < 1e-9

    def test_spec_dispatch(self):
        theta = BlaschkeExpInner(1.0, [])
        assert eval_inner(theta.spec, 1j) == pytest.approx(np.exp(-1.0))


class TestClarkInner:
    def test_lattice_matches_exponential(self):
        # independent oracle: the partial-fraction identity G = -cot(pi z),
        # hence I = e^{2 pi i z}; truncation error ~ 2|z|/(pi M)
        seq = lattice_seq(1000)
        inner = clark_inner(seq)
        z = 0.25 + 0.5j
        assert abs(inner(z) - np.exp(2j * np.pi * z)) < 5e-4

    def test_tail_compensation_hits_machine_precision(self):
        seq = lattice_seq(100)
        inner = clark_inner(seq, TailPolicy(compensate=True))
        z = 0.25 + 0.5j
        assert abs(inner(z) - np.exp(2j * np.pi * z)) < 1e-12

    def test_cot_oracle_brute_force(self):
        # brute-force partial sums of the cotangent expansion converge to
        # -cot(pi z): guards the analytic identity behind the lattice test
        z = 0.25 + 0.5j
        for M, tol in ((100, 1e-2), (10000, 1e-4)):
            k = np.arange(-M, M + 1, dtype=float)
            s = np.sum(1.0 / (k - z)) / np.pi
            assert abs(s - (-1.0 / np.tan(np.pi * z))) < tol

    def test_node_values_exactly_one(self):
        seq = lattice_seq(50)
        inner = clark_inner(seq)
        vals = inner(np.arange(-10.0, 11.0))
        assert np.max(np.abs(vals - 1.0)) == 0.0

    def test_herglotz_positive_imag_upper(self):
        seq = lattice_seq(50)
        inner = clark_inner(seq)
        rng = np.random.default_rng(11)
        z = rng.uniform(-5, 5, 100) + 1j * rng.uniform(1e-3, 10, 100)
        assert inner.herglotz_positivity(z)

    def test_clark_derivative_exact(self):
        seq = validate_sequence([0.0, 1.0, 2.5], [1 / np.pi, 2.0, 0.5])
        assert clark_derivative(seq, 0) == pytest.approx(2 * np.pi)
        assert clark_derivative(seq, 1) == pytest.approx(1.0)
        with pytest.raises(IndexOutOfWindow):
            clark_derivative(seq, 3)

    def test_clark_derivative_matches_argument_slope(self):
        seq = lattice_seq(1000)
        inner = clark_inner(seq)
        h = 1e-3
        for n in (0, 3):
            ratio = inner(np.array(n + h, dtype=complex)) / inner(
                np.array(n - h, dtype=complex)
            )
            fd = np.angle(ratio) / (2 * h)
            assert fd == pytest.approx(clark_derivative(seq, n), rel=1e-3)

    def test_divergent_weights_detected(self):
        lam = np.arange(-20, 21, dtype=float)
        with pytest.raises(DivergenceDetected):
            clark_inner(validate_sequence(lam, 1.0 + lam**2))


class TestBoundaryDerivative:
    def test_constant_for_pure_exponential(self):
        theta = BlaschkeExpInner(2 * np.pi, [])
        t = np.linspace(-5, 5, 11)
        assert np.allclose(boundary_derivative(theta, t), 2 * np.pi)

    def test_single_zero_values(self):
        theta = BlaschkeExpInner(0.0, [1j])
        assert boundary_derivative(theta, 0.0) == pytest.approx(2.0)
        assert boundary_derivative(theta, 1.0) == pytest.approx(1.0)


class TestBoundaryProfile:
    def test_pure_exponential_profile(self):
        theta = BlaschkeExpInner(1.0, [])
        grid = np.linspace(-3, 3, 301)
        prof = boundary_profile(theta, grid)
        assert np.allclose(prof.modulus_derivative, 1.0)
        assert np.allclose(np.diff(prof.argument), np.diff(grid), atol=1e-12)
        assert prof.comparable_flag

    def test_clark_lattice_profile_flat(self):
        inner = clark_inner(lattice_seq(2000))
        grid = np.linspace(-5, 5, 2001) + 1e-4  # avoid exact nodes
        prof = boundary_profile(inner, grid)
        assert prof.sup_derivative == pytest.approx(2 * np.pi, rel=0.01)
        assert prof.min_derivative == pytest.approx(2 * np.pi, rel=0.01)

    def test_argument_monotone(self):
        theta = BlaschkeExpInner(0.5, [1j, 1 + 2j])
        prof = boundary_profile(theta, np.linspace(-10, 10, 4001))
        assert np.all(np.diff(prof.argument) >= -1e-12)

    def test_fd_consistency(self):
        theta = BlaschkeExpInner(0.0, [10j])
        prof = boundary_profile(theta, np.linspace(-5, 5, 2001))
        assert prof.fd_max_deviation < 1e-5

    def test_unwrap_failure_on_coarse_grid(self):
        theta = BlaschkeExpInner(100.0, [])
        with pytest.raises(UnwrapFailure):
            boundary_profile(theta, np.linspace(0, 1, 11))


class TestMinModulusStrip:
    def test_pure_exponential_strip(self):
        theta = BlaschkeExpInner(1.0, [])
        grid = np.linspace(-5, 5, 101)
        m = min_modulus_strip(theta, 0.1, grid)
        assert m == pytest.approx(np.exp(-0.1), rel=1e-9)
        assert m >= 1 - 0.1

    def test_zero_epsilon_returns_boundary(self):
        theta = BlaschkeExpInner(0.0, [2j, -1 + 1j])
        m = min_modulus_strip(theta, 0.0, np.linspace(-4, 4, 101))
        assert m == pytest.approx(1.0, abs=1e-12)

    def test_clark_lattice_strip(self):
        inner = clark_inner(lattice_seq(800))
        grid = np.linspace(-3, 3, 240) + 1e-3
        m = min_modulus_strip(inner, 0.01, grid)
        assert m >= 1 - 0.01 * 2 * np.pi - 1e-6
        assert m == pytest.approx(np.exp(-0.02 * np.pi), abs=5e-3)

    def test_invalid_strip(self):
        theta = BlaschkeExpInner(10.0, [])
        with pytest.raises(InvalidStrip):
            min_modulus_strip(theta, 0.2, np.linspace(-1, 1, 11))

    def test_mean_value_bound_randomized(self):
        rng = np.random.default_rng(2024)
        for _ in range(20):
            nz = rng.integers(0, 9)
            zeros = rng.uniform(-5, 5, nz) + 1j * rng.uniform(0.3, 3.0, nz)
            theta = BlaschkeExpInner(rng.uniform(0, 2), zeros)
            sup = theta.sup_boundary_derivative(refine=True)
            ub = theta.sup_boundary_derivative(refine=False)
            eps = 0.5 / ub if ub > 0 else 0.25
            grid = np.linspace(-12, 12, 481)
            m = min_modulus_strip(theta, eps, grid)
            assert m >= 1 - eps * sup - 1e-6
