import numpy as np
import pytest

from TransducerSimulator.services.network_service import conversion_efficiency, operating_point
from TransducerSimulator.services.sweep_runner import conversion_window, peak_efficiency, sweep

TWO_PI = 2.0 * np.pi


def test_window_is_centred_on_the_mechanics(device):
    op = operating_point(device)
    omega = conversion_window(op, 101)
    assert omega.size == 101
    assert omega[50] == pytest.approx(device.omega_m)
    assert omega[0] > 0.0


def test_refined_peak_is_not_below_the_grid_maximum(device):
    op = operating_point(device)
    omega = conversion_window(op, 101)
    omega_peak, eta_peak = peak_efficiency(op, omega)
    assert eta_peak >= conversion_efficiency(op, omega).values.max()
    assert omega[0] <= omega_peak <= omega[-1]


def test_single_cell_reproduces_the_efficiency_peak(device):
    surface = sweep(device, [device.P_in], [device.kappa_ex])
    op = operating_point(device)
    omega_peak, eta_peak = peak_efficiency(op, conversion_window(op))
    assert surface.eta_peak.shape == (1, 1)
    assert surface.eta_peak[0, 0] == pytest.approx(eta_peak, rel=1e-12)
    assert surface.omega_peak[0, 0] == pytest.approx(omega_peak, rel=1e-12)


def test_optimal_power_grows_with_bus_coupling(device):
    kappas = TWO_PI * np.linspace(25e6, 250e6, 10)
    powers = np.geomspace(1e-3, 0.3, 30)
    surface = sweep(device, powers, kappas)

    best = surface.optimal_power_index()
    assert np.all(np.diff(best) >= 0)
    peaks = surface.eta_peak.max(axis=1)
    assert np.all(np.diff(peaks) >= 0)
    assert best[-1] > best[0]


def test_sweep_frame_is_row_major(device):
    powers = [1e-3, 1e-2]
    kappas = TWO_PI * np.array([50e6, 100e6, 150e6])
    frame = sweep(device, powers, kappas).to_frame()
    assert list(frame.columns) == ["p_in_w", "kappa_ex_hz", "eta_peak", "omega_peak_hz"]
    assert len(frame) == 6
    np.testing.assert_allclose(frame["p_in_w"], [1e-3, 1e-2] * 3)
    np.testing.assert_allclose(frame["kappa_ex_hz"], [50e6, 50e6, 100e6, 100e6, 150e6, 150e6])


def test_worker_pool_gives_the_same_surface(device):
    powers = [1e-2, 0.1]
    kappas = TWO_PI * np.array([75e6, 125e6])
    serial = sweep(device, powers, kappas, jobs=1)
    parallel = sweep(device, powers, kappas, jobs=2)
    np.testing.assert_array_equal(serial.eta_peak, parallel.eta_peak)
    np.testing.assert_array_equal(serial.omega_peak, parallel.omega_peak)


def test_shared_grid(device):
    op = operating_point(device)
    omega = conversion_window(op, 501)
    surface = sweep(device, [device.P_in], [device.kappa_ex], omega_grid=omega)
    assert surface.eta_peak[0, 0] == pytest.approx(peak_efficiency(op, omega)[1], rel=1e-12)


@pytest.mark.parametrize("powers, kappas, message", [
    ([], [1e9], "empty power range"),
    ([0.1], [], "empty kappa_ex range"),
    ([-0.1], [1e9], "finite and positive"),
])
def test_invalid_ranges(device, powers, kappas, message):
    with pytest.raises(ValueError, match=message):
        sweep(device, powers, kappas)


def test_unknown_mode(device):
    with pytest.raises(ValueError):
        sweep(device, [0.1], [1e9], mode="exact")
