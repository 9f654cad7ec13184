"""把 RunConfig 解析为各模块的领域对象"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from loguru import logger

from ..constants import C, TWO_PI
from ..core.grid import FrequencyGrid, make_frequency_grid
from ..core.quadrature import SqueezedState
from ..interferometer.calibration import arm_only_gamma, calibrate_gamma_ifo, ponderomotive_constant
from ..interferometer.filter import matched_filter, resolve_filter
from ..interferometer.models import FilterMode, FilterParams, FilterSpec, IfoParams
from ..omfc.imperfections import thermal_occupation
from ..omfc.models import OmfcParams
from ..schemes.models import ReadoutKind, ReadoutPolicy, SchemeConfig, SchemeMode
from ..tuning.models import ObjectiveKind, TuneSpec, TuneVariable, TuneVariableName
from .settings import FilterSettings, IfoSettings, OmfcSettings, RunConfig, TuneSettings


@dataclass(frozen=True)
class ResolvedRun:
    """一次运行所需的全部领域对象

    Attributes:
        config: 原始（已补全默认值）配置
        grid: 频率网格
        scheme: 方案配置
        metadata: 推导量，写入输出头部
    """

    config: RunConfig
    grid: FrequencyGrid
    scheme: SchemeConfig
    metadata: dict[str, Any] = field(default_factory=dict)


def resolve_omfc(settings: OmfcSettings) -> OmfcParams:
    return OmfcParams(
        mass=settings.mass,
        omega_m=TWO_PI * settings.mechanical_frequency_hz,
        q_m=settings.q_m,
        length_a=settings.length_a,
        length_c=settings.length_c,
        gamma_a=settings.gamma_a,
        gamma_c=settings.gamma_c,
        power_a=settings.power_a,
        power_c=settings.power_c,
        pump_wavelength=settings.pump_wavelength_m,
        temperature=settings.temperature,
        round_trip_loss=settings.round_trip_loss,
        gamma_opt_override=settings.gamma_opt_override,
    )


def resolve_ifo(settings: IfoSettings) -> IfoParams:
    """按 gamma_ifo_mode 确定 γ_ifo 后构造 IfoParams"""
    omega_0 = TWO_PI * C / settings.wavelength_m
    if settings.gamma_ifo_mode == "explicit":
        gamma = settings.gamma_ifo
    elif settings.gamma_ifo_mode == "arm_only":
        gamma = arm_only_gamma(settings.t_itm, settings.arm_length)
    else:
        k0 = ponderomotive_constant(omega_0, settings.arm_power, settings.mass, settings.arm_length)
        gamma = calibrate_gamma_ifo(k0, settings.kappa_target_sq, settings.kappa_calibration_hz)
    logger.info("γ_ifo ({}) = {:.6e} rad/s", settings.gamma_ifo_mode, gamma)

    return IfoParams(
        mass=settings.mass,
        arm_length=settings.arm_length,
        arm_power=settings.arm_power,
        omega_0=omega_0,
        gamma_ifo=gamma,
        t_itm=settings.t_itm,
        t_srm=settings.t_srm,
        circ_loss=settings.circ_loss,
        ext_loss=settings.ext_loss,
        frequency_offset=TWO_PI * settings.frequency_offset_hz,
    )


def resolve_filter_spec(settings: FilterSettings, ifo: IfoParams) -> FilterSpec:
    params = None
    if settings.mode is FilterMode.EXPLICIT:
        params = FilterParams(
            detuning=TWO_PI * settings.detuning_hz,
            bandwidth=TWO_PI * settings.bandwidth_hz,
        )
    return resolve_filter(settings.mode, ifo, params)


def resolve_scheme(run: RunConfig) -> SchemeConfig:
    omfc = resolve_omfc(run.omfc)
    ifo = resolve_ifo(run.ifo)
    readout_kind = run.scheme.readout
    if readout_kind is None:
        readout_kind = (
            ReadoutKind.VARIATIONAL if run.scheme.mode is SchemeMode.VARIATIONAL_READOUT else ReadoutKind.FIXED
        )
    return SchemeConfig(
        mode=run.scheme.mode,
        omfc=omfc,
        ifo=ifo,
        filter=resolve_filter_spec(run.filter, ifo),
        input_squeeze=SqueezedState.from_db(run.squeeze.level_db, run.squeeze.angle_rad),
        readout=ReadoutPolicy(kind=readout_kind, angle=run.scheme.readout_angle_rad),
        conversion_model=run.omfc.conversion_model,
        angle_jitter=run.scheme.angle_jitter_rad,
        theta_dc=run.scheme.theta_dc_rad,
        omfc_loss_override=run.omfc.loss_override,
        variational_input=run.scheme.variational_input,
    )


def resolve_tune_spec(settings: TuneSettings, scheme: SchemeConfig) -> TuneSpec:
    """自由变量边界：滤波腔边界为 null 时取当前（或匹配）值 ±relative_span"""
    base = scheme.filter.params if scheme.filter.params is not None else matched_filter(scheme.ifo)
    span = settings.relative_span

    def _around(value: float) -> tuple[float, float]:
        low, high = sorted((value * (1 - span), value * (1 + span)))
        return low, high

    variables = []
    for name in settings.variables:
        if name is TuneVariableName.DETUNING:
            bounds = (
                tuple(TWO_PI * b for b in settings.detuning_bounds_hz)
                if settings.detuning_bounds_hz is not None
                else _around(base.detuning)
            )
        elif name is TuneVariableName.BANDWIDTH:
            bounds = (
                tuple(TWO_PI * b for b in settings.bandwidth_bounds_hz)
                if settings.bandwidth_bounds_hz is not None
                else _around(base.bandwidth)
            )
        else:
            bounds = settings.theta_dc_bounds_rad
        variables.append(TuneVariable(name=name, lower=bounds[0], upper=bounds[1]))

    return TuneSpec(
        variables=tuple(variables),
        objective=ObjectiveKind(settings.objective),
        f_ref_hz=settings.f_ref_hz,
        band_hz=(settings.band_lo_hz, settings.band_hi_hz),
        band_points=settings.band_points,
        tolerance=settings.tolerance,
        x_tolerance=settings.x_tolerance,
        max_evals=settings.max_evals,
        scan_points=settings.scan_points,
    )


def run_metadata(scheme: SchemeConfig, gamma_ifo_mode: str) -> dict[str, Any]:
    """推导量：γ_ifo 及其来源、γ_opt 是否指定、泵浦波长假设、可分辨边带比、n̄"""
    rates = scheme.rates
    return {
        "gamma_ifo_rad_s": scheme.ifo.gamma_ifo,
        "gamma_ifo_mode": gamma_ifo_mode,
        "gamma_opt_rad_s": rates.gamma_opt,
        "gamma_opt_source": "override" if rates.overridden else "derived",
        "pump_wavelength_m": scheme.omfc.pump_wavelength,
        "resolved_sideband_ratio": scheme.omfc.resolved_sideband_ratio,
        "thermal_occupation": thermal_occupation(scheme.omfc),
    }


def resolve_run(run: RunConfig) -> ResolvedRun:
    grid = make_frequency_grid(run.grid.f_min_hz, run.grid.f_max_hz, run.grid.points, run.grid.spacing)
    scheme = resolve_scheme(run)
    return ResolvedRun(
        config=run,
        grid=grid,
        scheme=scheme,
        metadata=run_metadata(scheme, run.ifo.gamma_ifo_mode),
    )
