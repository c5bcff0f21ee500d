import logging

import numpy as np
import pytest
from scipy import signal

from TransducerSimulator.models.piezo_data import BvdParams
from TransducerSimulator.services.piezo_service import (
    ExtractionError,
    adiabatic_parameter,
    admittance,
    bvd_from_config,
    config_g_em,
    config_port_rates,
    effective_mechanics,
    extract_bvd,
    g_em,
    port_rates,
    s11,
)

from conftest import random_config_data
from TransducerSimulator.services.config_loader import parse_config

TWO_PI = 2.0 * np.pi


def _resonance_grid(config, points=100_001):
    half_width = 10.0 * config.gamma_0 + config.k_eff2 * config.omega_m
    return np.linspace(config.omega_m - half_width, config.omega_m + half_width, points)


def test_coupling_rate_of_reference_device(device):
    assert config_g_em(device) / TWO_PI == pytest.approx(100e6, rel=0.1)
    assert config_g_em(device) == pytest.approx(0.5 * np.sqrt(4.3e-3) * device.omega_m)


def test_coupling_rate_vanishes_without_piezoelectricity():
    assert g_em(0.0, 1.0, 1.0) == 0.0
    with pytest.raises(ValueError):
        g_em(-1e-3, 1.0, 1.0)
    with pytest.raises(ValueError):
        g_em(1e-3, 0.0, 1.0)


def test_port_rates_of_reference_device(device):
    rates = config_port_rates(device)
    assert rates.Gamma_ex == pytest.approx(1e11)
    assert rates.Gamma_0 == pytest.approx(5e8)
    assert rates.overcoupling > 0.95


def test_open_circuit_has_no_internal_loss():
    rates = port_rates(200e-15, np.inf, 50.0)
    assert rates.Gamma_0 == 0.0
    assert rates.overcoupling == 1.0


def test_port_rates_reject_non_positive_values():
    with pytest.raises(ValueError):
        port_rates(0.0, 1e4, 50.0)


def test_bvd_circuit_from_coupling(device):
    bvd = bvd_from_config(device)
    assert bvd.k_eff2 == pytest.approx(device.k_eff2)
    assert 1.0 / np.sqrt(bvd.Lm * bvd.Cm) == pytest.approx(device.omega_m)
    assert bvd.Rm / bvd.Lm == pytest.approx(device.gamma_0)


def test_extraction_recovers_the_circuit(device):
    bvd = bvd_from_config(device)
    spectrum = admittance(bvd, device.omega_m, device.gamma_0, _resonance_grid(device))
    result = extract_bvd(spectrum, C0_hint=device.C0)

    assert result.k_eff2 == pytest.approx(device.k_eff2, rel=1e-2)
    assert result.omega_m == pytest.approx(device.omega_m, rel=1e-4)
    assert result.gamma_0 == pytest.approx(device.gamma_0, rel=1e-2)
    assert result.bvd.C0 == pytest.approx(device.C0, rel=1e-3)
    assert result.omega_s < result.omega_mid < result.omega_p
    assert result.quality_factor == pytest.approx(device.omega_m / device.gamma_0, rel=1e-2)


def test_conductance_is_the_motional_branch(device):
    bvd = bvd_from_config(device)
    omega = np.array([device.omega_m])
    Y = admittance(bvd, device.omega_m, device.gamma_0, omega).values[0]
    assert Y.real == pytest.approx(1.0 / bvd.Rm, rel=1e-9)
    assert Y.imag == pytest.approx(device.omega_m * bvd.C0, rel=1e-9)


def test_extraction_fails_without_a_resonance(device):
    bvd = bvd_from_config(device)
    omega = np.linspace(0.5 * device.omega_m, 0.6 * device.omega_m, 1001)
    with pytest.raises(ExtractionError):
        extract_bvd(admittance(bvd, device.omega_m, device.gamma_0, omega))


def test_admittance_rejects_negative_frequencies():
    bvd = BvdParams.from_coupling(1e-12, 1e-2, 1.0, 0.1)
    with pytest.raises(ValueError):
        admittance(bvd, 1.0, 0.1, [-1.0, 0.0, 1.0])


def test_effective_mechanics_of_reference_device(device):
    mechanics = effective_mechanics(device, complex(0.0, -device.omega_m))
    assert mechanics.gamma_m_res / TWO_PI == pytest.approx(8.2e6, rel=0.05)
    assert mechanics.gamma_ex_res / TWO_PI == pytest.approx(2.9e6, rel=0.05)
    assert mechanics.gamma_m == pytest.approx(mechanics.gamma_m_res, rel=1e-12)


def test_noise_rate_is_the_internally_dissipated_part(device):
    mechanics = effective_mechanics(device, complex(0.0, -device.omega_m))
    rates = config_port_rates(device)
    g = config_g_em(device)
    expected = device.gamma_0 + 4.0 * g ** 2 * rates.Gamma_0 / rates.Gamma ** 2
    assert mechanics.gamma_noise == pytest.approx(expected, rel=1e-12)


def test_no_piezoelectric_coupling_leaves_intrinsic_mechanics(device):
    mechanics = effective_mechanics(device.replace(k_eff2=0.0), complex(0.0, -device.omega_m))
    assert mechanics.gamma_m_res == pytest.approx(device.gamma_0)
    assert mechanics.gamma_ex_res == 0.0
    assert mechanics.gamma_noise == pytest.approx(device.gamma_0)


def test_adiabatic_parameter_of_reference_device(device):
    assert 0.0 < adiabatic_parameter(device) < 1e-3


def test_slow_microwave_mode_logs_a_warning(device, caplog):
    slow = device.replace(Z0=1e6)
    with caplog.at_level(logging.WARNING):
        effective_mechanics(slow, complex(0.0, -slow.omega_m))
    assert "not fast compared with the mechanics" in caplog.text


def test_reflection_at_resonance(device):
    value = s11(device, [device.omega_m]).values[0]
    rates = config_port_rates(device)
    g = config_g_em(device)
    cooperativity = 4.0 * g ** 2 / (rates.Gamma * device.gamma_0)
    expected = -1.0 + 2.0 * rates.overcoupling / (1.0 + cooperativity)
    assert value == pytest.approx(expected, rel=1e-9)


def test_reflection_is_passive():
    rng = np.random.default_rng(11)
    for _ in range(25):
        config = parse_config(random_config_data(rng))
        omega = _resonance_grid(config, points=2001)
        assert np.all(np.abs(s11(config, omega).values) <= 1.0 + 1e-12)


def test_admittance_vanishes_at_dc(device):
    bvd = bvd_from_config(device)
    Y = admittance(bvd, device.omega_m, device.gamma_0, [0.0, device.omega_m]).values
    assert Y[0] == 0.0
    assert Y[1] != 0.0


def test_admittance_has_one_resonance_and_one_antiresonance(device):
    bvd = bvd_from_config(device)
    magnitude = np.abs(admittance(bvd, device.omega_m, device.gamma_0, _resonance_grid(device, 20_001)).values)
    maxima, _ = signal.find_peaks(magnitude)
    minima, _ = signal.find_peaks(-magnitude)
    assert maxima.size == 1
    assert minima.size == 1
    assert maxima[0] < minima[0]


def test_extraction_error_shrinks_with_grid_density(device):
    bvd = bvd_from_config(device)
    errors = []
    for points in (1_001, 10_001, 100_001):
        spectrum = admittance(bvd, device.omega_m, device.gamma_0, _resonance_grid(device, points))
        result = extract_bvd(spectrum)
        errors.append((abs(result.k_eff2 / device.k_eff2 - 1.0), abs(result.gamma_0 / device.gamma_0 - 1.0)))
    k_errors, gamma_errors = zip(*errors)
    assert k_errors[0] > k_errors[1] > k_errors[2]
    assert gamma_errors[0] > gamma_errors[1] > gamma_errors[2]
