import numpy as np
import pytest

from TransducerSimulator.services.config_loader import parse_config
from TransducerSimulator.services.optics_service import (
    dimer_fields,
    hybridization,
    laser_spectrum,
    mean_fields,
    optical_susceptibilities,
    resolve_placement,
    spectral_photon_flux,
    static_shift,
    supermodes,
    transmission_spectrum,
)

from conftest import random_config_data

TWO_PI = 2.0 * np.pi


def test_symmetric_pump_sits_on_lower_supermode(device):
    placement = resolve_placement(device)
    assert placement.target == "symmetric"
    assert placement.Delta_1 == pytest.approx(-device.J)
    assert placement.Delta_2 == pytest.approx(-device.J)


def test_asymmetric_pump_sits_on_upper_supermode(device):
    placement = resolve_placement(device, "asymmetric")
    assert placement.Delta_1 == pytest.approx(device.J)
    assert placement.Delta_2 == pytest.approx(device.J)


def test_explicit_placement_defaults_to_the_laser(device):
    placement = resolve_placement(device, "explicit")
    assert placement.Delta_1 == 0.0
    assert placement.Delta_2 == 0.0
    placement = resolve_placement(device, "explicit", delta_1=1.0, delta_2=2.0)
    assert (placement.Delta_1, placement.Delta_2) == (1.0, 2.0)


def test_unknown_pump_target(device):
    with pytest.raises(ValueError):
        resolve_placement(device, "sideways")


def test_detuned_rings_hybridize_with_the_larger_splitting(device):
    detuned = device.replace(omega_c_2=device.omega_c_1 - 2.0 * device.J)
    mean, half_detuning, root = hybridization(detuned)
    assert half_detuning == pytest.approx(device.J)
    assert root == pytest.approx(np.sqrt(2.0) * device.J)
    placement = resolve_placement(detuned)
    assert placement.Delta_1 - placement.Delta_2 == pytest.approx(detuned.omega_c_2 - detuned.omega_c_1)


def test_supermodes_of_identical_rings(device):
    modes = supermodes(device)
    assert modes.splitting == pytest.approx(2.0 * device.J)
    assert modes.omega_S == pytest.approx(device.omega_c_1 - device.J)
    assert modes.Delta_S == pytest.approx(0.0, abs=1e-3)
    assert modes.Delta_A / TWO_PI == pytest.approx(3.267e9)


def test_mean_fields_of_reference_pump(device):
    fields = mean_fields(device)
    assert fields.photons_2 == pytest.approx(2.03e9, rel=0.01)
    assert abs(fields.g_om) / TWO_PI == pytest.approx(18.03e6, rel=0.01)
    assert abs(fields.g_om) / TWO_PI == pytest.approx(20e6, rel=0.25)
    assert abs(fields.g_om) == pytest.approx(device.g0 * np.sqrt(fields.photons_2))


def test_mean_fields_with_unit_hbar(device):
    config = device.replace(hbar=1.0)
    kappa_1, kappa_2, J = config.kappa_1, config.kappa_2, config.J
    per_flux = J ** 2 * config.kappa_ex / (J ** 2 * (kappa_1 + kappa_2) ** 2 / 4.0 + kappa_1 ** 2 * kappa_2 ** 2 / 16.0)
    flux = config.P_in / config.omega_L
    assert mean_fields(config).photons_2 == pytest.approx(flux * per_flux, rel=1e-12)


def test_no_pump_no_fields(device):
    fields = mean_fields(device.replace(P_in=0.0))
    assert fields.photons_1 == 0.0
    assert fields.g_om == 0.0


def test_transmission_conserves_energy():
    rng = np.random.default_rng(3)
    for _ in range(20):
        config = parse_config(random_config_data(rng))
        omega = np.linspace(-3.0 * config.J, 3.0 * config.J, 1001)
        spectrum = dimer_fields(config, omega)
        lost = config.kappa_0_1 * np.abs(spectrum.a_1) ** 2 + config.kappa_0_2 * np.abs(spectrum.a_2) ** 2
        np.testing.assert_allclose(np.abs(spectrum.t) ** 2 + lost, 1.0, atol=1e-9)


def test_transmission_far_from_the_rings_is_unity(device):
    spectrum = transmission_spectrum(device, [-1e3 * device.J, 1e3 * device.J])
    np.testing.assert_allclose(spectrum.abs2, 1.0, atol=1e-3)


def test_transmission_rejects_unsorted_grid(device):
    with pytest.raises(ValueError):
        dimer_fields(device, [1.0, 0.0])


def test_laser_spectrum_carries_the_photon_flux(device):
    kappa_L = device.kappa_L
    omega = np.linspace(device.omega_L - 2000.0 * kappa_L, device.omega_L + 2000.0 * kappa_L, 80_001)
    spectrum = laser_spectrum(device.P_in, device.omega_L, kappa_L, 0.3, omega)
    assert spectral_photon_flux(spectrum) == pytest.approx(device.photon_flux, rel=1e-3)


def test_laser_phase_only_rotates_the_amplitude(device):
    omega = [device.omega_L]
    first = laser_spectrum(device.P_in, device.omega_L, device.kappa_L, 0.0, omega).values[0]
    second = laser_spectrum(device.P_in, device.omega_L, device.kappa_L, np.pi / 2, omega).values[0]
    assert second == pytest.approx(1j * first)


def test_laser_linewidth_must_be_positive(device):
    with pytest.raises(ValueError):
        laser_spectrum(device.P_in, device.omega_L, 0.0, 0.0, [device.omega_L])


def test_static_shift(device):
    shift = static_shift(device, 1e8)
    assert shift.detuning_shift / TWO_PI == pytest.approx(9.8e3, rel=0.01)
    assert shift.delta_x_norm == pytest.approx(2.0 * device.g0 * 1e8 / device.omega_m)
    with pytest.raises(ValueError):
        static_shift(device, -1.0)


def test_susceptibility_peaks_at_the_ring_detuning(device):
    placement = resolve_placement(device)
    chi_1, chi_2 = optical_susceptibilities(device, placement, 1j * placement.Delta_1)
    assert chi_1 == pytest.approx(2.0 / device.kappa_1, rel=1e-12)
    _, chi_2 = optical_susceptibilities(device, placement, 1j * placement.Delta_2)
    assert chi_2 == pytest.approx(2.0 / device.kappa_2, rel=1e-12)


def test_susceptibility_modulus_is_even_in_detuning(device):
    placement = resolve_placement(device)
    offsets = np.linspace(0.0, 5.0 * device.kappa_1, 51)
    above, _ = optical_susceptibilities(device, placement, 1j * (placement.Delta_1 + offsets))
    below, _ = optical_susceptibilities(device, placement, 1j * (placement.Delta_1 - offsets))
    np.testing.assert_allclose(np.abs(above), np.abs(below), rtol=1e-12)


def test_susceptibility_half_width_is_half_the_linewidth(device):
    placement = resolve_placement(device)
    kappa_1 = device.kappa_1
    peak, _ = optical_susceptibilities(device, placement, 1j * placement.Delta_1)
    edge, _ = optical_susceptibilities(device, placement, 1j * (placement.Delta_1 + kappa_1 / 2.0))
    assert abs(edge) ** 2 == pytest.approx(abs(peak) ** 2 / 2.0, rel=1e-12)

    offsets = np.linspace(-2.0 * kappa_1, 2.0 * kappa_1, 40_001)
    chi_1, _ = optical_susceptibilities(device, placement, 1j * (placement.Delta_1 + offsets))
    power = np.abs(chi_1) ** 2
    inside = offsets[power >= power.max() / 2.0]
    step = offsets[1] - offsets[0]
    assert inside[-1] == pytest.approx(kappa_1 / 2.0, abs=step)
    assert inside[0] == pytest.approx(-kappa_1 / 2.0, abs=step)


def test_asymmetric_pump_mirrors_the_symmetric_one_under_coupling_sign(device):
    asymmetric = mean_fields(device, resolve_placement(device, "asymmetric"))
    flipped = device.replace(J=-device.J)
    symmetric = mean_fields(flipped, resolve_placement(flipped))
    assert symmetric.placement.Delta_1 == pytest.approx(asymmetric.placement.Delta_1, rel=1e-12)
    assert symmetric.photons_1 == pytest.approx(asymmetric.photons_1, rel=1e-12)
    assert symmetric.photons_2 == pytest.approx(asymmetric.photons_2, rel=1e-12)


def test_single_ring_at_critical_coupling_extinguishes_the_bus(device):
    single = device.replace(J=0.0, kappa_ex=device.kappa_0_1)
    spectrum = transmission_spectrum(single, [0.0])
    assert spectrum.abs2[0] == pytest.approx(0.0, abs=1e-20)


def test_uncoupled_ring_photons_follow_the_lorentzian(device):
    single = device.replace(J=0.0, hbar=1.0)
    for delta in (0.0, 0.3 * single.kappa_1, -2.0 * single.kappa_1):
        fields = mean_fields(single, resolve_placement(single, "explicit", delta_1=delta))
        expected = single.kappa_ex * single.photon_flux / (delta ** 2 + single.kappa_1 ** 2 / 4.0)
        assert fields.photons_1 == pytest.approx(expected, rel=1e-12)
        assert fields.photons_2 == 0.0
