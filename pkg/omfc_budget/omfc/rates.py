"""耦合速率推导"""

from __future__ import annotations

import numpy as np
from loguru import logger

from ..constants import C, HBAR, TWO_PI
from .models import OmfcParams, OmfcRates


def zero_point_displacement(mass: float, omega_m: float) -> float:
    """x_zpf = √(ħ/(2 m ω_m))"""
    return float(np.sqrt(HBAR / (2.0 * mass * omega_m)))


def pump_photon_number(power: float, length: float, wavelength: float) -> float:
    """腔内光子数 N = P·(2L/c)/(ħ ω_pump)，P 按腔内循环功率理解"""
    omega_pump = TWO_PI * C / wavelength
    return power * (2.0 * length / C) / (HBAR * omega_pump)


def derive_rates(p: OmfcParams) -> OmfcRates:
    """由 OmfcParams 推导 x_zpf、Ḡ 与 γ_opt

    设置 gamma_opt_override 时两侧 γ_opt 都取该值，
    Ḡ 反推为 √(γ_opt·γ) 以便三模求解与之一致。
    """
    x_zpf = zero_point_displacement(p.mass, p.omega_m)

    if p.gamma_opt_override is not None:
        g_opt = float(p.gamma_opt_override)
        rates = OmfcRates(
            x_zpf=x_zpf,
            g_a=float(np.sqrt(g_opt * p.gamma_a)),
            g_c=float(np.sqrt(g_opt * p.gamma_c)),
            gamma_opt_a=g_opt,
            gamma_opt_c=g_opt,
            overridden=True,
        )
        logger.debug("γ_opt 使用指定值 {:.4e} rad/s", g_opt)
        return rates

    omega_pump = TWO_PI * C / p.pump_wavelength
    n_a = pump_photon_number(p.power_a, p.length_a, p.pump_wavelength)
    n_c = pump_photon_number(p.power_c, p.length_c, p.pump_wavelength)
    g_a = omega_pump / p.length_a * np.sqrt(n_a) * x_zpf
    g_c = omega_pump / p.length_c * np.sqrt(n_c) * x_zpf

    rates = OmfcRates(
        x_zpf=x_zpf,
        g_a=float(g_a),
        g_c=float(g_c),
        gamma_opt_a=float(g_a**2 / p.gamma_a),
        gamma_opt_c=float(g_c**2 / p.gamma_c),
        photons_a=float(n_a),
        photons_c=float(n_c),
    )
    logger.debug(
        "推导速率: x_zpf={:.4e} m, Ḡ_a={:.4e}, γ_opta={:.4e}, γ_optc={:.4e} rad/s",
        rates.x_zpf,
        rates.g_a,
        rates.gamma_opt_a,
        rates.gamma_opt_c,
    )
    return rates
