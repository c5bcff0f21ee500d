import numpy as np
import pytest

from TransducerSimulator.models.network_data import INPUT_PORTS, OUTPUT_PORTS, RWA_STATES, StateSpaceModel
from TransducerSimulator.services.config_loader import parse_config
from TransducerSimulator.services.network_service import (
    SingularNetworkError,
    build_state_space,
    closed_form_rwa,
    conversion_efficiency,
    efficiency_ceiling,
    efficiency_full,
    efficiency_rwa,
    full_numerator_denominator,
    network_functions,
    operating_point,
    scattering_matrix,
    transfer_matrix,
)
from TransducerSimulator.services.sweep_runner import conversion_window, peak_efficiency

from conftest import random_config_data

TWO_PI = 2.0 * np.pi


@pytest.fixture
def op(device):
    return operating_point(device)


@pytest.fixture
def window(op):
    return conversion_window(op, 1001)


def _model(op, rwa=True):
    return build_state_space(op.config, op.mean_fields, op.mechanics, rwa=rwa)


def test_state_space_shapes(op):
    model = _model(op)
    assert model.rwa
    assert model.A.shape == (3, 3) and model.B.shape == (3, 5)
    full = _model(op, rwa=False)
    assert not full.rwa
    assert full.A.shape == (6, 6) and full.D.shape == (4, 10)


def test_state_space_rejects_bad_shapes():
    with pytest.raises(ValueError):
        StateSpaceModel(A=np.eye(2), B=np.zeros((3, 5)), C=np.zeros((2, 3)), D=np.zeros((2, 5)),
                        state_labels=RWA_STATES, input_labels=INPUT_PORTS, output_labels=OUTPUT_PORTS)


def test_closed_form_matches_state_space(op, window):
    G = transfer_matrix(_model(op), window)
    closed = closed_form_rwa(op.config, window, network_functions(op, window))
    for i, output in enumerate(OUTPUT_PORTS, start=1):
        for j, port in enumerate(INPUT_PORTS, start=1):
            numeric = G.entry(output, port).values
            formula = closed[f"G{i}{j}"]
            if (i, j) in ((1, 1), (2, 2)):
                np.testing.assert_allclose(formula, numeric, rtol=1e-9, atol=1e-12)
            else:
                np.testing.assert_allclose(np.abs(formula), np.abs(numeric), rtol=1e-9, atol=1e-12)


def test_closed_form_refuses_functions_from_another_grid(op, window):
    with pytest.raises(ValueError):
        closed_form_rwa(op.config, window[:-1], network_functions(op, window))


def test_rwa_efficiency_is_the_conversion_entry(op, window):
    G = transfer_matrix(_model(op), window)
    eta = conversion_efficiency(op, window, mode="rwa").values
    np.testing.assert_allclose(eta, np.abs(G.entry("a_out", "c_in").values) ** 2, rtol=1e-9, atol=1e-15)


def test_full_efficiency_is_the_six_mode_entry(op, window):
    G = transfer_matrix(_model(op, rwa=False), window)
    eta = conversion_efficiency(op, window, mode="full", terms="exact").values
    np.testing.assert_allclose(eta, np.abs(G.entry("a_out", "c_in").values) ** 2, rtol=1e-8, atol=1e-15)


def test_displayed_terms_stay_close_to_exact(op, window):
    exact = conversion_efficiency(op, window, mode="full", terms="exact").values
    displayed = conversion_efficiency(op, window, mode="full", terms="displayed").values
    assert np.max(np.abs(displayed - exact)) < 1e-3 * np.max(np.abs(exact))


def test_counter_rotating_terms_barely_move_the_peak(op, window):
    rwa = conversion_efficiency(op, window, mode="rwa").values.max()
    full = conversion_efficiency(op, window, mode="full").values.max()
    assert abs(full - rwa) < 1e-2 * rwa


def test_reference_peak_efficiency(op, window):
    _, eta_peak = peak_efficiency(op, window)
    ceiling = efficiency_ceiling(op)
    assert ceiling == pytest.approx(0.2496, rel=1e-2)
    assert 0.2 < eta_peak <= ceiling * (1.0 + 1e-9)


def test_weak_pump_converts_poorly(device):
    op = operating_point(device.replace(P_in=1e-4))
    _, eta_peak = peak_efficiency(op, conversion_window(op))
    assert eta_peak < 0.05


def test_efficiency_wrappers(device, op, window):
    np.testing.assert_allclose(efficiency_rwa(device, window).values,
                               conversion_efficiency(op, window).values, rtol=1e-12)
    np.testing.assert_allclose(efficiency_full(device, window).values,
                               conversion_efficiency(op, window, mode="full").values, rtol=1e-12)


def test_single_point_grid(op, device):
    assert conversion_efficiency(op, [device.omega_m]).values.shape == (1,)


def test_unknown_mode_and_terms(op, window):
    with pytest.raises(ValueError):
        conversion_efficiency(op, window, mode="exact")
    with pytest.raises(ValueError):
        full_numerator_denominator(op, window, terms="approximate")


def test_scattering_matrix_is_unitary():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        op = operating_point(parse_config(random_config_data(rng)))
        omega = conversion_window(op, 200)
        S = scattering_matrix(_model(op), omega)
        assert S.values.shape == (200, 5, 5)
        np.testing.assert_allclose(S.row_power(), 1.0, atol=1e-9)


def test_scattering_matrix_needs_the_rwa_model(op, window):
    with pytest.raises(ValueError):
        scattering_matrix(_model(op, rwa=False), window)


def test_singular_pencil_reports_its_frequency():
    A = np.diag([-1j, -1.0, -1.0])
    model = StateSpaceModel(A=A, B=np.ones((3, 5)), C=np.ones((2, 3)), D=np.zeros((2, 5)),
                            state_labels=RWA_STATES, input_labels=INPUT_PORTS, output_labels=OUTPUT_PORTS)
    with pytest.raises(SingularNetworkError) as excinfo:
        transfer_matrix(model, [0.5, 1.0, 1.5])
    assert excinfo.value.omega == 1.0


def test_rwa_matrix_is_the_three_mode_coupling(op):
    config, placement = op.config, op.mean_fields.placement
    g = op.mean_fields.g_om
    expected = np.array([
        [1j * placement.Delta_1 - config.kappa_1 / 2.0, 1j * config.J, 0.0],
        [1j * config.J, 1j * placement.Delta_2 - config.kappa_2 / 2.0, 1j * g],
        [0.0, 1j * np.conj(g), -1j * config.omega_m - op.mechanics.gamma_m_res / 2.0],
    ])
    np.testing.assert_array_equal(_model(op).A, expected)


def test_full_matrix_blocks(op):
    A = _model(op).A
    full = _model(op, rwa=False).A
    np.testing.assert_array_equal(full[:3, :3], A)
    np.testing.assert_array_equal(full[3:, 3:], np.conj(A))

    g = op.mean_fields.g_om
    coupling = np.zeros((6, 6), dtype=complex)
    coupling[1, 5] = coupling[2, 4] = 1j * g
    coupling[4, 2] = coupling[5, 1] = -1j * np.conj(g)
    off_diagonal = full.copy()
    off_diagonal[:3, :3] = 0.0
    off_diagonal[3:, 3:] = 0.0
    np.testing.assert_array_equal(off_diagonal, coupling)


def test_conversion_is_reciprocal_in_modulus(op, window):
    G = transfer_matrix(_model(op), window)
    np.testing.assert_allclose(np.abs(G.entry("a_out", "c_in").values),
                               np.abs(G.entry("c_out", "a_in").values), rtol=1e-9, atol=1e-15)


def test_efficiency_never_exceeds_one():
    rng = np.random.default_rng(77)
    for _ in range(100):
        op = operating_point(parse_config(random_config_data(rng)))
        omega = conversion_window(op, 200)
        assert np.all(conversion_efficiency(op, omega, mode="rwa").values <= 1.0 + 1e-12)
        assert np.all(conversion_efficiency(op, omega).values >= 0.0)


@pytest.mark.parametrize("mode", ["rwa", "full"])
def test_no_pump_no_conversion(device, mode):
    op = operating_point(device.replace(P_in=0.0))
    assert op.g_om == 0.0
    eta = conversion_efficiency(op, conversion_window(op, 201), mode=mode).values
    np.testing.assert_array_equal(eta, 0.0)


@pytest.mark.parametrize("changes", [{"g0": 0.0}, {"J": 0.0}])
def test_conversion_vanishes_without_a_coupling(device, changes):
    op = operating_point(device.replace(**changes))
    omega = conversion_window(op, 201)
    closed = closed_form_rwa(op.config, omega, network_functions(op, omega))
    np.testing.assert_array_equal(closed["G12"], 0.0)
    G = transfer_matrix(_model(op), omega)
    assert np.max(np.abs(G.entry("a_out", "c_in").values)) < 1e-15
