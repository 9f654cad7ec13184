"""共享夹具：样例参数、方案配置与常用网格"""

from dataclasses import replace

import numpy as np
import pytest

from omfc_budget.config import RunConfig, resolve_run
from omfc_budget.core import make_frequency_grid
from omfc_budget.interferometer import FilterMode, FilterSpec, IfoParams
from omfc_budget.omfc import ConversionModel, OmfcParams, derive_rates
from omfc_budget.schemes import SchemeConfig, SchemeMode


@pytest.fixture
def omfc_params() -> OmfcParams:
    """样例参数，γ_opt 取 1e5 rad/s"""
    return OmfcParams(gamma_opt_override=1e5)


@pytest.fixture
def omfc_rates(omfc_params):
    return derive_rates(omfc_params)


@pytest.fixture
def ifo() -> IfoParams:
    return IfoParams()


@pytest.fixture
def grid():
    return make_frequency_grid(1.0, 1000.0, 200)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def run_config() -> RunConfig:
    return RunConfig()


@pytest.fixture
def resolved(run_config):
    return resolve_run(run_config)


@pytest.fixture
def vr_config(omfc_params, ifo) -> SchemeConfig:
    return SchemeConfig(mode=SchemeMode.VARIATIONAL_READOUT, omfc=omfc_params, ifo=ifo)


@pytest.fixture
def fd_config(omfc_params, ifo) -> SchemeConfig:
    return SchemeConfig(mode=SchemeMode.FD_SQUEEZING, omfc=omfc_params, ifo=ifo)


def ideal(cfg: SchemeConfig, lossless: bool = True) -> SchemeConfig:
    """去掉全部不完美（lossless 时外部损耗也置零）"""
    ifo = replace(cfg.ifo, circ_loss=0.0, ext_loss=0.0) if lossless else cfg.ifo
    return replace(
        cfg,
        ifo=ifo,
        filter=FilterSpec(mode=FilterMode.PERFECT),
        conversion_model=ConversionModel.UNITY,
        omfc=replace(cfg.omfc, temperature=0.0, round_trip_loss=0.0),
        omfc_loss_override=None,
        angle_jitter=0.0,
        theta_dc=0.0,
    )


@pytest.fixture
def make_ideal():
    return ideal
