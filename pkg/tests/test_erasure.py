import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwalk_eraser.dicke import DickeDiagonalState, canonical_phi_T, gamma_coefficients, spatial_marginal
from qwalk_eraser.erasure import (
    DickeProjector,
    complement_distribution,
    conditional_distribution,
    hadamard_amplitudes,
    hadamard_closed_form,
    pi_state,
    projector_from_target,
)
from qwalk_eraser.errors import DimensionError, ImpossibleOutcomeError
from qwalk_eraser.walk import (
    CoinInit,
    ProbabilityDistribution,
    classical_distribution,
    dtqw_distribution,
    dtqw_evolve,
    path_sum_oracle,
    total_variation,
)

INITS = list(CoinInit)
# even mixture at T=5 from path_sum_oracle(5, "symmetric"), times 32
PI5_TARGET = np.array([1, 11, 4, 4, 11, 1]) / 32


def uniform_projector(T):
    return DickeProjector(T, np.full(T + 1, 1 / math.sqrt(T + 1)), 1 / (T + 1))


class TestConditional:
    def test_uniform_alpha_keeps_binomial(self):
        for T in (1, 4, 17):
            state = canonical_phi_T(T)
            proj = DickeProjector.for_state(state, np.full(T + 1, 1 / math.sqrt(T + 1)))
            d = conditional_distribution(state, proj)
            assert np.max(np.abs(d.weights - classical_distribution(T).weights)) < 1e-12

    def test_point_mass(self):
        d = conditional_distribution(canonical_phi_T(4), DickeProjector(4, [1, 0, 0, 0, 0], 1 / 16))
        assert d.weights[0] == pytest.approx(1.0)
        assert d.positions[0] == -4

    def test_pi5(self):
        np.testing.assert_allclose(path_sum_oracle(5, "symmetric").weights, PI5_TARGET, atol=1e-15)
        d = conditional_distribution(canonical_phi_T(5), pi_state(5, "symmetric"))
        assert np.max(np.abs(d.weights - PI5_TARGET)) < 1e-12

    def test_orthogonal_projector(self):
        state = DickeDiagonalState(2, [1, 0, 0])
        with pytest.raises(ImpossibleOutcomeError):
            conditional_distribution(state, DickeProjector(2, [0, 1, 0], 0.5))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            conditional_distribution(canonical_phi_T(3), uniform_projector(4))


class TestProjectorFromTarget:
    def test_classical_target(self):
        for T in (1, 6, 33):
            proj = projector_from_target(T, classical_distribution(T))
            np.testing.assert_allclose(proj.alpha, 1 / math.sqrt(T + 1), atol=1e-12)
            # rank-1 with uniform alpha: N = sum_k gamma_k^2 / (T+1)
            assert proj.success_prob == pytest.approx(1 / (T + 1), abs=1e-12)

    def test_pi5_golden(self):
        proj = projector_from_target(5, ProbabilityDistribution(5, PI5_TARGET))
        assert abs(proj.success_prob - 5 / 36) < 1e-12
        ratios = np.array([1, math.sqrt(11 / 5), math.sqrt(2 / 5), math.sqrt(2 / 5), math.sqrt(11 / 5), 1])
        np.testing.assert_allclose(proj.alpha.real, math.sqrt(5 / 36) * ratios, atol=1e-12)
        assert np.all(proj.alpha.imag == 0)

    def test_t1(self):
        proj = pi_state(1, "symmetric")
        assert abs(proj.success_prob - 0.5) < 1e-12
        np.testing.assert_allclose(proj.alpha, [1 / math.sqrt(2)] * 2, atol=1e-12)

    def test_zero_bins_allowed(self):
        target = ProbabilityDistribution(4, [0, 0.5, 0, 0.5, 0])
        proj = projector_from_target(4, target)
        assert proj.alpha[0] == 0 and proj.alpha[2] == 0
        d = conditional_distribution(canonical_phi_T(4), proj)
        assert total_variation(d, target) < 1e-12

    def test_success_identity(self):
        for T in (2, 7, 20):
            proj = pi_state(T)
            independent = float(np.sum(gamma_coefficients(T) ** 2 * np.abs(proj.alpha) ** 2))
            assert abs(proj.success_prob - independent) < 1e-12

    def test_sweep_values(self):
        values = [pi_state(T).success_prob for T in range(1, 11)]
        assert all(0 < v <= 1 for v in values)
        assert values[0] == pytest.approx(0.5)
        assert values[4] == pytest.approx(5 / 36)


class TestHadamardClosedForm:
    def test_endpoints(self):
        for T in (1, 4, 9, 40):
            for init in INITS:
                w = hadamard_closed_form(T, init).weights
                assert w[0] == pytest.approx(2.0**-T, rel=1e-14)
                assert w[-1] == pytest.approx(2.0**-T, rel=1e-14)

    def test_t2(self):
        np.testing.assert_allclose(hadamard_closed_form(2, "zero").weights, [0.25, 0.5, 0.25], atol=1e-15)

    @pytest.mark.parametrize("init", INITS)
    def test_against_oracles(self, init):
        for T in range(1, 15):
            cf = hadamard_closed_form(T, init).weights
            assert np.max(np.abs(cf - path_sum_oracle(T, init).weights)) < 1e-12
        for T in range(1, 26):
            cf = hadamard_closed_form(T, init).weights
            assert np.max(np.abs(cf - dtqw_distribution(dtqw_evolve(T, init)).weights)) < 1e-12

    def test_large_T_against_simulation(self):
        T = 150
        cf = hadamard_closed_form(T, "zero").weights
        assert np.max(np.abs(cf - dtqw_distribution(dtqw_evolve(T, "zero")).weights)) < 1e-12

    def test_mirror_and_mixture(self):
        for T in range(1, 26):
            zero = hadamard_closed_form(T, "zero").weights
            one = hadamard_closed_form(T, "one").weights
            sym = hadamard_closed_form(T, "symmetric").weights
            assert np.max(np.abs(one - zero[::-1])) < 1e-12
            assert np.max(np.abs(sym - 0.5 * (zero + one))) < 1e-12

    def test_amplitudes(self):
        for T in (2, 5, 12, 30):
            amps = hadamard_amplitudes(T)
            p = hadamard_closed_form(T, "zero").weights
            inner = slice(1, T)
            np.testing.assert_allclose((amps.psi0**2 + amps.psi1**2)[inner], p[inner], atol=1e-14)


class TestComplement:
    def test_mixture_identity(self):
        for T in range(2, 26):
            state = canonical_phi_T(T)
            proj = pi_state(T)
            if proj.success_prob >= 1 - 1e-15:
                continue
            p = spatial_marginal(state).weights
            q = conditional_distribution(state, proj).weights
            r = complement_distribution(state, proj).weights
            N = proj.success_prob
            assert np.max(np.abs(N * q + (1 - N) * r - p)) < 1e-12

    def test_point_mass_alpha(self):
        T = 5
        state = canonical_phi_T(T)
        proj = DickeProjector.for_state(state, [1, 0, 0, 0, 0, 0])
        r = complement_distribution(state, proj).weights
        b = classical_distribution(T).weights.copy()
        b[0] = 0
        np.testing.assert_allclose(r, b / b.sum(), atol=1e-12)

    def test_t1_degenerate(self):
        state = canonical_phi_T(1)
        proj = pi_state(1)
        np.testing.assert_allclose(complement_distribution(state, proj).weights, [0.5, 0.5], atol=1e-12)
        np.testing.assert_allclose(conditional_distribution(state, proj).weights, [0.5, 0.5], atol=1e-12)

    def test_certain_outcome(self):
        state = DickeDiagonalState(3, [1, 0, 0, 0])
        proj = DickeProjector.for_state(state, [1, 0, 0, 0])
        assert proj.success_prob == 1.0
        with pytest.raises(ImpossibleOutcomeError):
            complement_distribution(state, proj)


@settings(max_examples=50, deadline=None)
@given(T=st.integers(1, 64), data=st.data())
def test_round_trip_inversion(T, data):
    raw = np.array(data.draw(st.lists(st.floats(0.01, 1.0), min_size=T + 1, max_size=T + 1)))
    target = ProbabilityDistribution(T, raw / raw.sum())
    proj = projector_from_target(T, target)
    assert abs(np.sum(np.abs(proj.alpha) ** 2) - 1) < 1e-12
    d = conditional_distribution(canonical_phi_T(T), proj)
    assert np.max(np.abs(d.weights - target.weights)) < 1e-12
