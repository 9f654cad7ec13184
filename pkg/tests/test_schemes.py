"""探测器方案：读出链、噪声预算与方案注册"""

from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from omfc_budget.core import IDENTITY, SqueezedState, make_frequency_grid, vacuum
from omfc_budget.errors import InvalidParameterError
from omfc_budget.interferometer import (
    FilterMode,
    FilterSpec,
    kimble_kappa,
    lossy_ifo_in_out,
    loss_sensitivity,
    sql_psd,
    variational_angle,
)
from omfc_budget.omfc import ConversionModel
from omfc_budget.schemes import (
    COMPONENT_KEYS,
    FdSqueezingScheme,
    InputField,
    ReadoutChain,
    SchemeConfig,
    SchemeMode,
    SchemeRegistry,
    baseline_budget,
    compute_budget,
    fd_squeezing_budget,
    residual_angle_error,
    signed_angle_residual,
    variational_readout_budget,
    wrap_half_pi,
)

PERFECT = FilterSpec(mode=FilterMode.PERFECT)


def total_at(cfg: SchemeConfig, omega) -> np.ndarray:
    return SchemeRegistry.get_or_raise(cfg.mode).total(cfg, omega)


# ---------- 读出链 ----------


class TestReadoutChain:
    def test_chain_reproduces_loss_sensitivity(self, ifo, grid):
        w = grid.omega
        for eps in (0.0, 0.005, 0.05):
            chain = ReadoutChain(w, vacuum())
            chain.mark_reference()
            chain.inject(lossy_ifo_in_out(ifo, w, eps), "external_loss")
            parts = chain.readout(variational_angle(ifo, w), sql_psd(ifo, w))
            total = sum(parts[key] for key in COMPONENT_KEYS)
            assert_allclose(total, loss_sensitivity(ifo, w, eps), rtol=1e-10)

    def test_unknown_label_rejected(self, grid):
        chain = ReadoutChain(grid.omega, vacuum())
        with pytest.raises(InvalidParameterError):
            chain.add_noise("seismic", IDENTITY)

    def test_zero_loss_is_noop(self, grid):
        chain = ReadoutChain(grid.omega, vacuum())
        chain.add_loss(0.0, "external_loss")
        assert chain.stages == []

    def test_stages_recorded_in_order(self, ifo, grid):
        w = grid.omega
        chain = ReadoutChain(w, vacuum())
        chain.add_loss(0.01, "external_loss", stage="injection")
        chain.mark_reference()
        chain.inject(lossy_ifo_in_out(ifo, w, 0.0), "external_loss")
        assert chain.stages == ["injection", "reference", "interferometer"]

    def test_output_spectrum_is_hermitian(self, ifo, grid):
        w = grid.omega
        chain = ReadoutChain(w, vacuum())
        chain.inject(lossy_ifo_in_out(ifo, w, 0.1), "external_loss")
        out = chain.output_spectrum()
        assert_allclose(out, np.conj(np.swapaxes(out, -1, -2)))

    @pytest.mark.parametrize("theta", [np.pi / 2, -np.pi / 2, 3 * np.pi / 2])
    def test_nulled_signal_rejected(self, ifo, theta):
        w = 2 * np.pi * np.array([3.0, 10.0])
        chain = ReadoutChain(w, vacuum())
        chain.inject(lossy_ifo_in_out(ifo, w, 0.0), "external_loss")
        with pytest.raises(InvalidParameterError):
            chain.readout(theta, sql_psd(ifo, w))

    def test_nearly_nulled_signal_accepted(self, ifo):
        w = 2 * np.pi * np.array([10.0])
        chain = ReadoutChain(w, vacuum())
        chain.inject(lossy_ifo_in_out(ifo, w, 0.0), "external_loss")
        parts = chain.readout(np.pi / 2 - 1e-6, sql_psd(ifo, w))
        assert np.all(np.isfinite(parts["quantum_shot"]))


# ---------- 理想极限 ----------


class TestIdealLimits:
    def test_fd_squeezing_reaches_full_squeeze(self, fd_config, grid, make_ideal):
        cfg = make_ideal(fd_config)
        budget = compute_budget(cfg, grid)
        assert_allclose(budget.total, budget.references["baseline"] * 10**-1.2, rtol=1e-9)

    def test_variational_vacuum_is_shot_limited(self, vr_config, grid, make_ideal):
        cfg = make_ideal(vr_config)
        w = grid.omega
        expected = sql_psd(cfg.ifo, w) / (2 * kimble_kappa(cfg.ifo, w))
        assert_allclose(compute_budget(cfg, grid).total, expected, rtol=1e-9)

    def test_variational_squeezed_input(self, vr_config, grid, make_ideal):
        cfg = replace(make_ideal(vr_config), variational_input=InputField.SQUEEZED)
        w = grid.omega
        expected = sql_psd(cfg.ifo, w) / (2 * kimble_kappa(cfg.ifo, w)) * 10**-1.2
        assert_allclose(compute_budget(cfg, grid).total, expected, rtol=1e-9)

    @pytest.mark.parametrize("model", [ConversionModel.UNITY, ConversionModel.ADIABATIC])
    def test_variational_evades_backaction(self, vr_config, grid, model):
        cfg = replace(vr_config, filter=PERFECT, conversion_model=model)
        parts = compute_budget(cfg, grid).components
        assert np.all(parts["quantum_backaction"] == 0.0)
        assert np.all(parts["angle_error"] < 1e-12 * parts["quantum_shot"])

    def test_fixed_squeeze_baseline_at_high_frequency(self, make_ideal, fd_config):
        cfg = make_ideal(fd_config)
        w = np.array([2 * np.pi * 1000.0])
        squeezed = total_at(replace(cfg, mode=SchemeMode.BASELINE_FIXED_SQUEEZE), w)
        plain = total_at(replace(cfg, mode=SchemeMode.BASELINE_VACUUM), w)
        assert squeezed[0] / plain[0] == pytest.approx(10**-1.2, rel=1e-3)


# ---------- 不完美 ----------


class TestImperfections:
    def test_forced_loss_inflates_variational_noise(self, vr_config):
        """ε_OMFC = 0.05、T = 1 K 时，10 Hz 处噪声幅度比散粒极限高一个量级"""
        cfg = replace(
            vr_config,
            filter=PERFECT,
            conversion_model=ConversionModel.ADIABATIC,
            omfc_loss_override=0.05,
            omfc=replace(vr_config.omfc, temperature=1.0),
        )
        w = np.array([2 * np.pi * 10.0])
        shot = sql_psd(cfg.ifo, w) / (2 * kimble_kappa(cfg.ifo, w))
        inflation = np.sqrt(total_at(cfg, w) / shot)[0]
        assert 5.0 <= inflation <= 20.0

    @pytest.mark.parametrize("mode", [SchemeMode.FD_SQUEEZING, SchemeMode.VARIATIONAL_READOUT])
    def test_monotone_in_imperfections(self, omfc_params, ifo, rng, mode):
        base = SchemeConfig(mode=mode, omfc=omfc_params, ifo=ifo, filter=PERFECT)
        w = 2 * np.pi * np.array([3.0, 10.0, 30.0, 100.0])

        def check(high, build):
            for a, b in rng.uniform(0.0, high, size=(20, 2)):
                lo, hi = total_at(build(min(a, b)), w), total_at(build(max(a, b)), w)
                assert np.all(hi >= lo * (1 - 1e-12))

        check(4e-4, lambda v: replace(base, omfc=replace(base.omfc, round_trip_loss=v)))
        check(300.0, lambda v: replace(base, omfc=replace(base.omfc, temperature=v)))
        check(0.09, lambda v: replace(base, angle_jitter=v))
        check(0.3, lambda v: replace(base, ifo=replace(base.ifo, ext_loss=v)))

    def test_theta_dc_offset_shows_as_angle_error(self, vr_config, grid):
        cfg = replace(vr_config, filter=PERFECT, conversion_model=ConversionModel.UNITY)
        tuned = compute_budget(cfg, grid).components["angle_error"]
        offset = compute_budget(replace(cfg, theta_dc=0.01), grid).components["angle_error"]
        assert np.all(offset > tuned)

    def test_jitter_only_feeds_angle_error(self, fd_config, grid):
        quiet = compute_budget(fd_config, grid).components
        noisy = compute_budget(replace(fd_config, angle_jitter=0.02), grid).components
        assert np.all(noisy["angle_error"] > quiet["angle_error"])
        assert_allclose(noisy["quantum_shot"], quiet["quantum_shot"])

    @pytest.mark.parametrize(
        ("changes", "key"),
        [
            ({"angle_jitter": 0.1}, "scheme.angle_jitter_rad"),
            ({"theta_dc": np.inf}, "scheme.theta_dc_rad"),
            ({"omfc_loss_override": 1.0}, "omfc.loss_override"),
        ],
    )
    def test_invalid_config_names_key(self, vr_config, changes, key):
        with pytest.raises(InvalidParameterError) as exc:
            replace(vr_config, **changes)
        assert exc.value.key == key


# ---------- 噪声预算 ----------


class TestNoiseBudget:
    def test_total_is_sum_of_components(self, fd_config, grid):
        budget = compute_budget(fd_config, grid)
        frame = budget.to_frame()
        summed = sum(frame[f"S_{key}_per_Hz"] for key in COMPONENT_KEYS)
        assert_allclose(frame["S_total_per_Hz"], summed, rtol=1e-12)
        assert all(np.all(budget.components[key] >= 0) for key in COMPONENT_KEYS)

    def test_frame_columns(self, vr_config, grid):
        frame = compute_budget(vr_config, grid).to_frame()
        expected = ["frequency_Hz", "S_total_per_Hz"]
        expected += [f"S_{key}_per_Hz" for key in COMPONENT_KEYS]
        expected += ["S_sql_per_Hz", "S_baseline_per_Hz"]
        assert list(frame.columns) == expected
        assert len(frame) == len(grid)
        assert frame["frequency_Hz"].is_monotonic_increasing

    def test_frame_subset_of_components(self, vr_config, grid):
        frame = compute_budget(vr_config, grid).to_frame(("quantum_shot",))
        assert "S_omfc_loss_per_Hz" not in frame.columns
        assert "S_quantum_shot_per_Hz" in frame.columns

    def test_scheme_budget_functions(self, fd_config, vr_config, grid):
        assert_allclose(fd_squeezing_budget(fd_config, grid).total, compute_budget(fd_config, grid).total)
        assert_allclose(variational_readout_budget(vr_config, grid).total, compute_budget(vr_config, grid).total)
        with pytest.raises(InvalidParameterError):
            fd_squeezing_budget(vr_config, grid)
        with pytest.raises(InvalidParameterError):
            variational_readout_budget(fd_config, grid)

    def test_baseline_reference(self, vr_config, grid):
        budget = compute_budget(vr_config, grid)
        plain = baseline_budget(vr_config, grid)
        assert plain.metadata["scheme"] == "baseline_vacuum"
        assert_allclose(budget.references["baseline"], plain.total)

    def test_metadata(self, vr_config, grid):
        meta = compute_budget(vr_config, grid).metadata
        assert meta["scheme"] == "variational_readout"
        assert meta["gamma_opt_rad_s"] == 1e5
        assert meta["gamma_opt_overridden"] is True
        assert meta["filter_mode"] == "matched"

    def test_default_squeeze(self):
        assert SchemeConfig().input_squeeze == SqueezedState.from_db(12.0)

    def test_budget_is_deterministic(self, fd_config):
        grid = make_frequency_grid(1.0, 100.0, 30)
        a = compute_budget(fd_config, grid).to_frame()
        b = compute_budget(fd_config, grid).to_frame()
        assert a.equals(b)


# ---------- 角度残差 ----------


class TestResidual:
    def test_wrap_half_pi(self):
        assert wrap_half_pi(np.pi) == pytest.approx(0.0, abs=1e-15)
        assert wrap_half_pi(np.pi / 2) == pytest.approx(np.pi / 2)
        assert wrap_half_pi(-np.pi / 2) == pytest.approx(np.pi / 2)
        assert wrap_half_pi(0.3 + np.pi) == pytest.approx(0.3)
        assert wrap_half_pi(-0.3 - 2 * np.pi) == pytest.approx(-0.3)

    def test_perfect_filter_has_no_residual(self, vr_config, grid):
        cfg = replace(vr_config, filter=PERFECT, conversion_model=ConversionModel.UNITY)
        assert_allclose(residual_angle_error(cfg, grid), 0.0, atol=1e-15)

    def test_theta_dc_enters_variational_residual(self, vr_config, grid):
        cfg = replace(vr_config, filter=PERFECT, conversion_model=ConversionModel.UNITY, theta_dc=0.01)
        assert_allclose(signed_angle_residual(cfg, grid.omega), 0.01, atol=1e-12)
        fd = replace(cfg, mode=SchemeMode.FD_SQUEEZING)
        assert_allclose(signed_angle_residual(fd, grid.omega), 0.0, atol=1e-12)

    def test_exact_conversion_adds_rotation(self, vr_config):
        cfg = replace(vr_config, filter=PERFECT, conversion_model=ConversionModel.EXACT)
        residual = residual_angle_error(cfg, np.array([2 * np.pi * 1.0]))
        assert residual[0] == pytest.approx(1.194e-2, rel=1e-2)

    def test_baseline_has_no_residual(self, vr_config, grid):
        with pytest.raises(InvalidParameterError):
            residual_angle_error(replace(vr_config, mode=SchemeMode.BASELINE_VACUUM), grid)


# ---------- 注册表 ----------


class TestRegistry:
    def test_all_modes_registered(self):
        for mode in SchemeMode:
            assert SchemeRegistry.is_registered(mode)
        assert set(SchemeRegistry.list_schemes()) == {m.value for m in SchemeMode}

    def test_lookup_by_string(self):
        assert isinstance(SchemeRegistry.get_or_raise("fd_squeezing"), FdSqueezingScheme)

    def test_unknown_scheme(self):
        assert not SchemeRegistry.is_registered("squeezed_light_v2")
        with pytest.raises(InvalidParameterError) as exc:
            SchemeRegistry.get_or_raise("squeezed_light_v2")
        assert exc.value.key == "scheme.mode"
        assert "fd_squeezing" in str(exc.value)

    def test_scheme_rejects_foreign_mode(self, vr_config, grid):
        with pytest.raises(InvalidParameterError):
            FdSqueezingScheme().components(vr_config, grid.omega)

    def test_description(self):
        scheme = SchemeRegistry.get_or_raise(SchemeMode.FD_SQUEEZING)
        assert scheme.scheme_id == "fd_squeezing"
        assert scheme.description
