"""OMFC：速率推导、散射模型、不完美与热噪声判据"""

from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from omfc_budget.constants import HBAR, K_B
from omfc_budget.core import SqueezedState, dagger
from omfc_budget.errors import InvalidParameterError, NumericalError, SingularSystemError
from omfc_budget.omfc import (
    ConversionModel,
    CriterionScheme,
    OmfcParams,
    OmfcRates,
    Verdict,
    adiabatic_conversion_rate,
    adiabatic_in_out,
    bound_coefficient,
    conversion_phase_error,
    conversion_rate_leading_order,
    conversion_rotation,
    conversion_transfer,
    converted_squeeze_level,
    derive_rates,
    effective_loss,
    exact_conversion_rate,
    full_three_mode_solve,
    ideal_conversion,
    small_parameters,
    thermal_channel,
    thermal_criterion,
    thermal_noise_spectrum,
    thermal_occupation,
    three_mode_without_damping,
)


def _rates(gamma_opt_a: float, gamma_opt_c: float) -> OmfcRates:
    return OmfcRates(x_zpf=1.0, g_a=0.0, g_c=0.0, gamma_opt_a=gamma_opt_a, gamma_opt_c=gamma_opt_c)


# ---------- 参数与速率 ----------


class TestRates:
    def test_override_sets_both_sides(self, omfc_params, omfc_rates):
        assert omfc_rates.overridden
        assert omfc_rates.gamma_opt_a == 1e5
        assert omfc_rates.gamma_opt_c == 1e5
        assert omfc_rates.is_matched
        assert omfc_rates.g_a == pytest.approx(np.sqrt(1e5 * omfc_params.gamma_a))

    def test_derived_rates_are_consistent(self):
        p = OmfcParams()
        r = derive_rates(p)
        assert not r.overridden
        assert r.photons_a > 0
        assert r.x_zpf == pytest.approx(np.sqrt(HBAR / (2 * p.mass * p.omega_m)))
        assert r.gamma_opt_a == pytest.approx(r.g_a**2 / p.gamma_a)
        assert r.is_matched

    def test_asymmetric_power_is_unmatched(self):
        r = derive_rates(OmfcParams(power_c=100.0))
        assert not r.is_matched
        with pytest.raises(InvalidParameterError):
            ideal_conversion(r, 1.0)
        with pytest.raises(InvalidParameterError):
            exact_conversion_rate(OmfcParams(power_c=100.0), r, 1.0)

    def test_mechanical_damping_and_sideband_ratio(self, omfc_params):
        assert omfc_params.gamma_m == pytest.approx(2 * np.pi * 1e6 / (2 * 5e7))
        assert omfc_params.resolved_sideband_ratio == pytest.approx(1.5e5 / (2 * np.pi * 1e6))

    @pytest.mark.parametrize(
        ("field", "value", "key"),
        [
            ("mass", -1.0, "omfc.mass"),
            ("gamma_a", 0.0, "omfc.gamma_a"),
            ("temperature", -1.0, "omfc.temperature"),
            ("round_trip_loss", 1.0, "omfc.round_trip_loss"),
            ("gamma_opt_override", 0.0, "omfc.gamma_opt_override"),
        ],
    )
    def test_invalid_params_name_key(self, field, value, key):
        with pytest.raises(InvalidParameterError) as exc:
            OmfcParams(**{field: value})
        assert exc.value.key == key


# ---------- 散射 ----------


class TestAdiabaticScattering:
    def test_unitarity_for_random_rates(self, rng):
        """|对角|² + |非对角|² = 1，且整个矩阵幺正"""
        for _ in range(1000):
            g_a, g_c = rng.uniform(1e3, 1e6, size=2)
            omega = rng.uniform(0.0, 1e6)
            s = adiabatic_in_out(_rates(g_a, g_c), omega)[0]
            assert abs(s[0, 0]) ** 2 + abs(s[0, 1]) ** 2 == pytest.approx(1.0, abs=1e-12)
            assert abs(s[1, 1]) ** 2 + abs(s[1, 0]) ** 2 == pytest.approx(1.0, abs=1e-12)
            assert_allclose(s @ dagger(s), np.eye(2), atol=1e-12)

    def test_dc_matched_is_perfect_swap(self, omfc_rates):
        s = adiabatic_in_out(omfc_rates, 0.0)[0]
        assert_allclose(s, [[0.0, 1.0], [1.0, 0.0]], atol=1e-15)

    def test_conversion_rate_is_off_diagonal(self, omfc_rates):
        omega = np.geomspace(1.0, 1e6, 20)
        assert_allclose(adiabatic_conversion_rate(omfc_rates, omega), adiabatic_in_out(omfc_rates, omega)[:, 1, 0])

    def test_low_frequency_matches_ideal(self, omfc_rates):
        omega = np.array([0.1, 1.0, 10.0])
        assert_allclose(ideal_conversion(omfc_rates, omega), adiabatic_in_out(omfc_rates, omega), atol=1e-4)

    def test_conversion_near_unity_at_low_frequency(self, omfc_rates):
        t = adiabatic_conversion_rate(omfc_rates, 2 * np.pi * np.array([1.0, 10.0, 100.0]))
        assert np.all(np.abs(t) > 0.9999)

    def test_zero_total_rate_rejected(self):
        with pytest.raises(InvalidParameterError):
            adiabatic_in_out(_rates(0.0, 0.0), 1.0)

    def test_thermal_channel_scaling(self, omfc_params, omfc_rates):
        c_coeff, a_coeff = thermal_channel(omfc_rates, omfc_params.gamma_m, 0.0)
        expected = omfc_params.gamma_m / omfc_rates.gamma_opt
        assert abs(c_coeff[0]) ** 2 == pytest.approx(expected)
        assert abs(a_coeff[0]) ** 2 == pytest.approx(expected)
        with pytest.raises(InvalidParameterError):
            thermal_channel(omfc_rates, -1.0, 0.0)


class TestThreeModeSolve:
    def test_adiabatic_elimination_validity(self, omfc_params, omfc_rates):
        gamma = omfc_params.gamma_mean
        omega = np.geomspace(gamma / 1e4, gamma / 1e2, 50)
        exact = three_mode_without_damping(omfc_params, omfc_rates, omega).optical_ports()
        approx = adiabatic_in_out(omfc_rates, omega)
        err = np.max(np.abs(exact - approx), axis=(-2, -1)) / np.max(np.abs(approx), axis=(-2, -1))
        assert np.all(err <= 2 * omega / gamma)

    def test_full_solution_is_unitary(self, omfc_params, omfc_rates):
        omega = np.geomspace(1.0, 1e6, 30)
        s = full_three_mode_solve(omfc_params, omfc_rates, omega).matrix
        assert_allclose(s @ dagger(s), np.broadcast_to(np.eye(3), s.shape), atol=1e-9)

    def test_conversion_rate_close_to_adiabatic(self, omfc_params, omfc_rates):
        omega = np.array([10.0, 100.0])
        solved = full_three_mode_solve(omfc_params, omfc_rates, omega).conversion_rate()
        assert_allclose(solved, adiabatic_conversion_rate(omfc_rates, omega), atol=1e-2)

    def test_singular_system_reports_frequency(self, omfc_params):
        uncoupled = OmfcRates(x_zpf=1.0, g_a=0.0, g_c=0.0, gamma_opt_a=0.0, gamma_opt_c=0.0)
        with pytest.raises(SingularSystemError) as exc:
            three_mode_without_damping(omfc_params, uncoupled, np.array([0.0]))
        assert exc.value.omega == 0.0
        assert exc.value.exit_code == 3

    def test_ill_conditioned_system_rejected(self, omfc_params):
        uncoupled = OmfcRates(x_zpf=1.0, g_a=0.0, g_c=0.0, gamma_opt_a=0.0, gamma_opt_c=0.0)
        with pytest.raises(SingularSystemError) as exc:
            three_mode_without_damping(omfc_params, uncoupled, np.array([10.0, 1e-9]))
        assert exc.value.omega == 1e-9

    def test_coupled_system_is_well_conditioned(self, omfc_params, omfc_rates):
        omega = 2 * np.pi * np.array([0.0, 1e-3, 1.0, 1e3])
        assert np.all(np.isfinite(three_mode_without_damping(omfc_params, omfc_rates, omega).matrix))


class TestExactConversion:
    def test_epsilon_one(self, omfc_params):
        e1, _, _ = small_parameters(omfc_params, 0.0)
        assert e1 == pytest.approx(1.194e-2, abs=1e-5)

    def test_dc_value(self, omfc_params, omfc_rates):
        e1 = omfc_params.gamma_mean / (2 * omfc_params.omega_m)
        t0 = exact_conversion_rate(omfc_params, omfc_rates, 0.0)[0]
        assert t0 == pytest.approx(1 + 1j * e1)
        assert abs(t0) == pytest.approx(np.sqrt(1 + e1**2))

    def test_rotation_tends_to_epsilon_one(self, omfc_params, omfc_rates):
        e1 = omfc_params.gamma_mean / (2 * omfc_params.omega_m)
        assert conversion_rotation(omfc_params, omfc_rates, 2 * np.pi * 1.0)[0] == pytest.approx(e1, rel=1e-4)

    def test_leading_order_is_close(self, omfc_params, omfc_rates):
        omega = 2 * np.pi * np.geomspace(1.0, 1e3, 20)
        exact = exact_conversion_rate(omfc_params, omfc_rates, omega)
        approx = conversion_rate_leading_order(omfc_params, omfc_rates, omega)
        e1, e2, e3 = small_parameters(omfc_params, omega)
        assert np.all(np.abs(exact - approx) <= 5 * (e1 + e2 + e3) ** 2)
        assert np.abs(exact - approx)[0] < 1e-5

    def test_leading_order_error_is_second_order(self, omfc_params, omfc_rates):
        """γ → sγ、Ω → s²Ω（ω_m 不变）时 ε₁, ε₃ ∝ s，误差按 s² 缩小"""

        def error(scale: float) -> float:
            p = replace(
                omfc_params,
                gamma_a=omfc_params.gamma_a * scale,
                gamma_c=omfc_params.gamma_c * scale,
            )
            r = derive_rates(p)
            omega = 2 * np.pi * 10.0 * scale**2
            return abs(exact_conversion_rate(p, r, omega)[0] - conversion_rate_leading_order(p, r, omega)[0])

        ratio = error(1.0) / error(0.5)
        assert 3.0 <= ratio <= 5.0

    def test_transfer_models(self, omfc_params, omfc_rates):
        omega = 2 * np.pi * np.array([1.0, 10.0])
        unity, idle = conversion_transfer(ConversionModel.UNITY, omfc_params, omfc_rates, omega)
        assert idle is None
        assert_allclose(unity, np.broadcast_to(np.eye(2), (2, 2, 2)))

        adiabatic, idle = conversion_transfer("adiabatic", omfc_params, omfc_rates, omega)
        assert idle is not None
        total = adiabatic @ dagger(adiabatic) + idle @ dagger(idle)
        assert_allclose(total, np.broadcast_to(np.eye(2), total.shape), atol=1e-12)

    def test_phase_error_only_for_exact(self, omfc_params, omfc_rates):
        omega = 2 * np.pi * np.array([1.0, 10.0])
        assert_allclose(conversion_phase_error("unity", omfc_params, omfc_rates, omega), 0.0)
        assert_allclose(conversion_phase_error("adiabatic", omfc_params, omfc_rates, omega), 0.0)
        assert np.all(conversion_phase_error("exact", omfc_params, omfc_rates, omega) > 0.01)


# ---------- 不完美 ----------


class TestImperfections:
    def test_effective_loss_dc(self, omfc_params, omfc_rates):
        assert effective_loss(omfc_params, omfc_rates, 0.0)[0] == pytest.approx(0.0200, abs=1e-4)

    def test_effective_loss_rolls_off(self, omfc_params, omfc_rates):
        eps = effective_loss(omfc_params, omfc_rates, np.array([0.0, 1e5]))
        assert eps[1] == pytest.approx(eps[0] / 2)

    def test_effective_loss_above_one_fails(self, omfc_rates):
        p = OmfcParams(gamma_opt_override=1e5, round_trip_loss=1e-3)
        with pytest.raises(NumericalError):
            effective_loss(p, omfc_rates, 0.0)

    def test_thermal_spectrum_dc(self, omfc_params, omfc_rates):
        assert thermal_noise_spectrum(omfc_params, omfc_rates, 0.0)[0] == pytest.approx(0.209, abs=0.01)

    def test_thermal_spectrum_zero_temperature(self, omfc_params, omfc_rates):
        p = replace(omfc_params, temperature=0.0)
        assert_allclose(thermal_noise_spectrum(p, omfc_rates, np.array([0.0, 10.0])), 0.0)

    def test_thermal_occupation(self, omfc_params):
        assert thermal_occupation(omfc_params) == pytest.approx(K_B / (HBAR * 2 * np.pi * 1e6))

    def test_squeeze_preserved_without_imperfections(self, omfc_params, omfc_rates):
        p = replace(omfc_params, temperature=0.0, round_trip_loss=0.0)
        level = converted_squeeze_level(p, omfc_rates, SqueezedState.from_db(12.0), 2 * np.pi * np.array([1.0, 10.0]))
        assert_allclose(level, 12.0, atol=1e-3)

    def test_squeeze_degraded_by_table_values(self, omfc_params, omfc_rates):
        level = converted_squeeze_level(omfc_params, omfc_rates, SqueezedState.from_db(12.0), 2 * np.pi * 10.0)
        assert 0.0 < level[0] < 12.0

    def test_squeeze_degrades_monotonically_with_round_trip_loss(self, omfc_params, omfc_rates):
        state = SqueezedState.from_db(12.0)
        omega = 2 * np.pi * np.array([1.0, 10.0, 100.0])
        levels = [
            converted_squeeze_level(replace(omfc_params, round_trip_loss=eps), omfc_rates, state, omega)
            for eps in (0.0, 1e-5, 1e-4)
        ]
        assert np.all(levels[0] > levels[1])
        assert np.all(levels[1] > levels[2])

    @pytest.mark.parametrize(
        "changes",
        [
            [{"temperature": t} for t in (0.0, 0.5, 1.0, 10.0, 300.0)],
            [{"q_m": q} for q in (5e9, 5e8, 5e7, 5e6, 5e5)],
        ],
    )
    def test_squeeze_never_improves_with_thermal_ratio(self, omfc_params, omfc_rates, changes):
        """T/Q_m 增大时转换后压缩量单调不增"""
        state = SqueezedState.from_db(12.0)
        omega = 2 * np.pi * np.array([1.0, 10.0, 100.0, 1000.0])
        levels = [converted_squeeze_level(replace(omfc_params, **c), omfc_rates, state, omega) for c in changes]
        for better, worse in zip(levels, levels[1:]):
            assert np.all(worse <= better + 1e-12)
        assert np.all(levels[-1] < levels[0])

    def test_vacuum_input_is_not_squeezed(self, omfc_params, omfc_rates):
        level = converted_squeeze_level(omfc_params, omfc_rates, SqueezedState(), 2 * np.pi * 10.0)
        assert level[0] <= 0.0


# ---------- 判据 ----------


class TestCriterion:
    def test_bound_coefficient(self):
        assert bound_coefficient(0.05) == pytest.approx(3.8e-13, rel=0.05)

    def test_fd_squeezing_table_values(self, omfc_params, omfc_rates):
        report = thermal_criterion(
            omfc_params, omfc_rates, CriterionScheme.FD_SQUEEZING, squeeze=SqueezedState.from_db(12.0)
        )
        assert report.t_over_q == pytest.approx(2e-8)
        assert report.s_ref == pytest.approx(10**-1.2)
        assert report.bound == pytest.approx(HBAR * 1e5 * 10**-1.2 / K_B)
        assert report.ratio == pytest.approx(0.415, abs=0.005)
        assert report.verdict is Verdict.MARGINAL
        assert report.quoted_bound == pytest.approx(5e-8)

    def test_variational_bound(self, omfc_params, omfc_rates):
        report = thermal_criterion(omfc_params, omfc_rates, "variational")
        assert report.bound == pytest.approx(7.6e-7, rel=0.01)
        assert report.verdict is Verdict.PASS
        assert report.quoted_bound == 5e-6
        assert report.to_dict()["verdict"] == "PASS"

    def test_zero_temperature_passes(self, omfc_params, omfc_rates):
        p = replace(omfc_params, temperature=0.0)
        for scheme in CriterionScheme:
            report = thermal_criterion(p, omfc_rates, scheme, squeeze=SqueezedState.from_db(12.0))
            assert report.ratio == 0.0
            assert report.verdict is Verdict.PASS

    def test_hot_environment_fails(self, omfc_params, omfc_rates):
        p = replace(omfc_params, temperature=300.0)
        assert thermal_criterion(p, omfc_rates, "variational").verdict is Verdict.FAIL

    def test_fd_requires_squeeze(self, omfc_params, omfc_rates):
        with pytest.raises(InvalidParameterError):
            thermal_criterion(omfc_params, omfc_rates, CriterionScheme.FD_SQUEEZING)

    def test_thresholds_validated(self, omfc_params, omfc_rates):
        with pytest.raises(InvalidParameterError):
            thermal_criterion(omfc_params, omfc_rates, "variational", pass_ratio=2.0, fail_ratio=1.0)
