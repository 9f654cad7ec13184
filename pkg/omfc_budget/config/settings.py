"""运行配置

配置文档为 YAML；本工具输出的 CSV 也可作为配置，
其中 `# config.<点分键> = <json>` 头部行会被还原成同一文档。
所有字段都有样例参数表的默认值，未知键一律报错。
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Literal, Optional

import yaml
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..core.grid import Spacing
from ..errors import ConfigError
from ..interferometer.models import FilterMode
from ..omfc.models import ConversionModel
from ..schemes.models import InputField, ReadoutKind, SchemeMode
from ..tuning.models import ObjectiveKind, TuneVariableName

CONFIG_PREFIX = "config."
META_PREFIX = "meta."


class _Settings(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GridSettings(_Settings):
    """频率网格"""

    f_min_hz: float = Field(default=1.0, gt=0, description="最低频率 (Hz)")
    f_max_hz: float = Field(default=1000.0, gt=0, description="最高频率 (Hz)")
    points: int = Field(default=200, ge=2, description="网格点数")
    spacing: Spacing = Field(default=Spacing.LOGARITHMIC, description="linear / logarithmic")

    @model_validator(mode="after")
    def _ordered(self) -> "GridSettings":
        if self.f_min_hz >= self.f_max_hz:
            raise ValueError("f_min_hz 必须小于 f_max_hz")
        return self


class OmfcSettings(_Settings):
    """频率转换器（样例参数表上半部分）"""

    mass: float = Field(default=1e-6, gt=0, description="振子质量 (kg)")
    mechanical_frequency_hz: float = Field(default=1e6, gt=0, description="机械频率 ω_m/2π (Hz)")
    q_m: float = Field(default=5e7, gt=0, description="机械品质因子")
    length_a: float = Field(default=1.0, gt=0, description="腔 a 长度 (m)")
    length_c: float = Field(default=1.0, gt=0, description="腔 c 长度 (m)")
    gamma_a: float = Field(default=1.5e5, gt=0, description="腔 a 半带宽 (rad/s)")
    gamma_c: float = Field(default=1.5e5, gt=0, description="腔 c 半带宽 (rad/s)")
    power_a: float = Field(default=170.0, gt=0, description="腔 a 循环功率 (W)")
    power_c: float = Field(default=170.0, gt=0, description="腔 c 循环功率 (W)")
    pump_wavelength_m: float = Field(default=1064e-9, gt=0, description="泵浦波长 (m)，参数表未给出")
    temperature: float = Field(default=1.0, ge=0, description="环境温度 (K)")
    round_trip_loss: float = Field(default=1e-5, ge=0, lt=1, description="单次往返损耗")
    gamma_opt_override: Optional[float] = Field(
        default=1e5, gt=0, description="光学阻尼率 (rad/s)；null 时由功率推导"
    )
    conversion_model: ConversionModel = Field(default=ConversionModel.EXACT, description="unity / adiabatic / exact")
    loss_override: Optional[float] = Field(default=None, ge=0, lt=1, description="强制的 ε_OMFC")


class IfoSettings(_Settings):
    """主干涉仪（样例参数表下半部分）"""

    mass: float = Field(default=40.0, gt=0, description="测试质量 (kg)")
    arm_length: float = Field(default=4000.0, gt=0, description="臂长 (m)")
    arm_power: float = Field(default=8e5, gt=0, description="臂腔循环功率 (W)")
    wavelength_m: float = Field(default=1064e-9, gt=0, description="载波波长 (m)")
    t_itm: float = Field(default=0.014, ge=0, lt=1, description="ITM 功率透射率")
    t_srm: float = Field(default=0.35, ge=0, lt=1, description="SRM 功率透射率")
    circ_loss: float = Field(default=0.005, ge=0, lt=1, description="环行器损耗")
    ext_loss: float = Field(default=0.005, ge=0, lt=1, description="外部损耗")
    gamma_ifo_mode: Literal["calibrated", "arm_only", "explicit"] = Field(
        default="calibrated", description="γ_ifo 的确定方式"
    )
    gamma_ifo: Optional[float] = Field(default=None, gt=0, description="explicit 模式下的 γ_ifo (rad/s)")
    kappa_target_sq: float = Field(default=4.5e4, gt=0, description="标定目标 κ²")
    kappa_calibration_hz: float = Field(default=3.1, gt=0, description="标定频率 (Hz)")
    frequency_offset_hz: float = Field(default=15e6, gt=0, description="两载波频差 (Hz)，仅作记录")

    @model_validator(mode="after")
    def _explicit_gamma(self) -> "IfoSettings":
        if self.gamma_ifo_mode == "explicit" and self.gamma_ifo is None:
            raise ValueError("gamma_ifo_mode=explicit 时必须给出 gamma_ifo")
        return self


class FilterSettings(_Settings):
    """滤波旋转"""

    mode: FilterMode = Field(default=FilterMode.MATCHED, description="matched / perfect / explicit")
    detuning_hz: Optional[float] = Field(default=None, description="失谐 Δ_f/2π (Hz)")
    bandwidth_hz: Optional[float] = Field(default=None, gt=0, description="半带宽 γ_f/2π (Hz)")

    @model_validator(mode="after")
    def _explicit_params(self) -> "FilterSettings":
        if self.mode is FilterMode.EXPLICIT and (self.detuning_hz is None or self.bandwidth_hz is None):
            raise ValueError("mode=explicit 时必须给出 detuning_hz 与 bandwidth_hz")
        return self


class SqueezeSettings(_Settings):
    level_db: float = Field(default=12.0, ge=0, description="注入压缩度 (dB)")
    angle_rad: float = Field(default=0.0, description="压缩角 (rad)")


class SchemeSettings(_Settings):
    mode: SchemeMode = Field(default=SchemeMode.VARIATIONAL_READOUT, description="探测器方案")
    readout: Optional[ReadoutKind] = Field(
        default=None, description="variational / fixed；null 时按方案选择"
    )
    readout_angle_rad: float = Field(default=0.0, description="固定零差角 (rad)")
    theta_dc_rad: float = Field(default=0.0, description="直流零差角偏置 (rad)")
    angle_jitter_rad: float = Field(default=0.0, ge=0, lt=0.1, description="本振角度均方根抖动 (rad)")
    variational_input: InputField = Field(default=InputField.VACUUM, description="变分读出输入场")


class CriterionSettings(_Settings):
    pass_ratio: float = Field(default=0.1, gt=0, description="PASS 阈值 (T/Q_m)/B")
    fail_ratio: float = Field(default=1.0, gt=0, description="FAIL 阈值 (T/Q_m)/B")

    @model_validator(mode="after")
    def _ordered(self) -> "CriterionSettings":
        if self.pass_ratio > self.fail_ratio:
            raise ValueError("pass_ratio 不能大于 fail_ratio")
        return self


class TuneSettings(_Settings):
    """调参；滤波腔边界为 null 时取匹配值 ±20%"""

    variables: list[TuneVariableName] = Field(
        default_factory=lambda: list(TuneVariableName), description="自由变量"
    )
    detuning_bounds_hz: Optional[tuple[float, float]] = Field(default=None, description="失谐边界 (Hz)")
    bandwidth_bounds_hz: Optional[tuple[float, float]] = Field(default=None, description="带宽边界 (Hz)")
    theta_dc_bounds_rad: tuple[float, float] = Field(default=(-0.05, 0.05), description="θ_dc 边界 (rad)")
    relative_span: float = Field(default=0.2, gt=0, lt=1, description="默认滤波腔边界的相对宽度")
    objective: ObjectiveKind = Field(default=ObjectiveKind.DEGRADATION_AT, description="目标函数")
    f_ref_hz: float = Field(default=3.0, gt=0, description="参考频率 (Hz)")
    band_lo_hz: float = Field(default=1.0, gt=0, description="频带下限 (Hz)")
    band_hi_hz: float = Field(default=30.0, gt=0, description="频带上限 (Hz)")
    band_points: int = Field(default=30, ge=2, description="频带采样点数")
    tolerance: float = Field(default=1e-4, gt=0, description="目标函数容差")
    x_tolerance: float = Field(default=1e-4, gt=0, description="归一化变量容差")
    max_evals: int = Field(default=400, ge=1, description="最大评估次数")
    scan_points: int = Field(default=5, ge=1, description="粗扫描每维点数")


class RunConfig(_Settings):
    """完整运行配置"""

    grid: GridSettings = Field(default_factory=GridSettings)
    omfc: OmfcSettings = Field(default_factory=OmfcSettings)
    ifo: IfoSettings = Field(default_factory=IfoSettings)
    filter: FilterSettings = Field(default_factory=FilterSettings)
    squeeze: SqueezeSettings = Field(default_factory=SqueezeSettings)
    scheme: SchemeSettings = Field(default_factory=SchemeSettings)
    criterion: CriterionSettings = Field(default_factory=CriterionSettings)
    tune: TuneSettings = Field(default_factory=TuneSettings)

    @classmethod
    def from_document(cls, data: Optional[dict[str, Any]]) -> "RunConfig":
        """校验嵌套字典；失败时抛出以点分键开头的 ConfigError"""
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError("配置文档顶层必须是映射", key="config")
        try:
            return cls.model_validate(data)
        except ValidationError as exc:
            raise _config_error(exc) from exc

    def to_document(self) -> dict[str, Any]:
        return self.model_dump(mode="json")

    def flatten(self) -> dict[str, Any]:
        """点分键 → JSON 值，顺序与字段声明一致"""
        return flatten_document(self.to_document())

    def with_override(self, dotted_key: str, value: Any) -> "RunConfig":
        """返回修改了一个标量字段的新配置

        Raises:
            ConfigError: 键不存在，或新值校验失败
        """
        data = self.to_document()
        parts = dotted_key.split(".")
        node: Any = data
        for part in parts[:-1]:
            if not isinstance(node, dict) or part not in node:
                raise ConfigError("未知配置键", key=dotted_key)
            node = node[part]
        if not isinstance(node, dict) or parts[-1] not in node or isinstance(node[parts[-1]], dict):
            raise ConfigError("未知配置键", key=dotted_key)
        node[parts[-1]] = value
        return RunConfig.from_document(data)


def _config_error(exc: ValidationError) -> ConfigError:
    errors = exc.errors()
    for err in errors:
        logger.warning("配置校验失败: {} - {}", ".".join(str(p) for p in err["loc"]), err["msg"])
    first = errors[0]
    key = ".".join(str(p) for p in first["loc"]) or "config"
    return ConfigError(first["msg"], key=key)


def flatten_document(data: dict[str, Any], prefix: str = "") -> dict[str, Any]:
    flat: dict[str, Any] = {}
    for key, value in data.items():
        dotted = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten_document(value, prefix=f"{dotted}."))
        else:
            flat[dotted] = value
    return flat


def unflatten_document(flat: dict[str, Any]) -> dict[str, Any]:
    data: dict[str, Any] = {}
    for dotted, value in flat.items():
        parts = dotted.split(".")
        node = data
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError("配置键与其父键冲突", key=dotted)
        node[parts[-1]] = value
    return data


def parse_header_lines(lines: list[str]) -> dict[str, Any]:
    """从 `# config.<键> = <json>` 头部行还原配置文档（忽略 meta 行）"""
    flat: dict[str, Any] = {}
    for line in lines:
        if not line.startswith("#"):
            break
        body = line[1:].strip()
        if not body.startswith(CONFIG_PREFIX) or " = " not in body:
            continue
        key, raw = body.split(" = ", 1)
        key = key[len(CONFIG_PREFIX):].strip()
        try:
            flat[key] = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"头部值不是合法 JSON: {raw!r}", key=key) from exc
    return unflatten_document(flat)


def load_config(path: Optional[str | Path] = None) -> RunConfig:
    """读取配置文件；path 为 None 时返回默认配置

    .csv 文件按头部行解析，其余按 YAML 解析。
    """
    if path is None:
        return RunConfig()

    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"配置文件不存在: {p}", key="config")

    text = p.read_text(encoding="utf-8")
    if p.suffix.lower() == ".csv":
        data = parse_header_lines(text.splitlines())
    else:
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"YAML 解析失败: {exc}", key="config") from exc

    cfg = RunConfig.from_document(data)
    logger.info("已加载配置: {}", p)
    return cfg
