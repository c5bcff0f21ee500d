"""
Signal-flow graphs of the transducer and of the microwave reflection.

Each mode's self-loop is folded into its susceptibility, which multiplies
every edge entering that mode.
"""
import math
from typing import Optional

import numpy as np

from ..models.flow_graph import SignalFlowGraph
from ..models.network_data import OperatingPoint, conjugate_labels, RWA_STATES
from ..models.optics_data import MeanFields, PumpPlacement
from ..models.piezo_data import EffectiveMechanics
from ..models.spectrum import ComplexSpectrum, validate_omega_grid
from ..models.transducer_config import TransducerConfig, laplace_axis
from .mason_service import build_graph, mason_gain
from .network_service import mode_susceptibilities, operating_point
from .piezo_service import config_g_em, config_port_rates, microwave_susceptibility

A1, A2, B = RWA_STATES
A1C, A2C, BC = conjugate_labels(RWA_STATES)


def build_transducer_graph(
    config: TransducerConfig,
    fields: MeanFields,
    mechanics: EffectiveMechanics,
    s: complex,
    rwa: bool = True,
) -> SignalFlowGraph:
    """
    Graph of the linearized network at one s.

    Ports a_in/c_in feed a1/b, a1/b feed a_out/c_out. Without rwa the
    conjugate modes a1†, a2†, b† are added together with the
    counter-rotating optomechanical edges.
    """
    op = OperatingPoint(config=config, mean_fields=fields, mechanics=mechanics, g_em=config_g_em(config))
    chi = mode_susceptibilities(op, complex(s))
    g = fields.g_om
    g_c = np.conj(g)
    J = config.J
    sqrt_kappa_ex = math.sqrt(config.kappa_ex)
    sqrt_gamma_ex = mechanics.sqrt_gamma_ex_res

    edges = [
        ("a_in", A1, sqrt_kappa_ex * chi[A1]),
        ("c_in", B, sqrt_gamma_ex * chi[B]),
        (A1, A2, 1j * J * chi[A2]),
        (A2, A1, 1j * J * chi[A1]),
        (A2, B, 1j * g_c * chi[B]),
        (B, A2, 1j * g * chi[A2]),
        (A1, "a_out", -sqrt_kappa_ex),
        (B, "c_out", np.conj(sqrt_gamma_ex)),
        ("a_in", "a_out", 1.0),
        ("c_in", "c_out", -1.0),
    ]
    if not rwa:
        edges += [
            (A1C, A2C, -1j * J * chi[A2C]),
            (A2C, A1C, -1j * J * chi[A1C]),
            (A2C, BC, -1j * g * chi[BC]),
            (BC, A2C, -1j * g_c * chi[A2C]),
            # counter-rotating
            (BC, A2, 1j * g * chi[A2]),
            (A2C, B, 1j * g * chi[B]),
            (B, A2C, -1j * g_c * chi[A2C]),
            (A2, BC, -1j * g_c * chi[BC]),
        ]
    # drop zero edges so decoupled parts do not create spurious loops
    return build_graph([edge for edge in edges if edge[2] != 0])


def build_reflection_graph(config: TransducerConfig, s: complex) -> SignalFlowGraph:
    """Two-mode microwave/mechanics graph; its c_in -> c_out gain is S11."""
    rates = config_port_rates(config)
    g = config_g_em(config)
    chi_mw = microwave_susceptibility(config, complex(s), rates)
    chi_m = 1.0 / (complex(s) + 1j * config.omega_m + config.gamma_0 / 2.0)
    sqrt_gamma = math.sqrt(rates.Gamma_ex)
    edges = [
        ("c_in", "c", sqrt_gamma * chi_mw),
        ("b", "c", 1j * g * chi_mw),
        ("c", "b", 1j * g * chi_m),
        ("c", "c_out", sqrt_gamma),
        ("c_in", "c_out", -1.0),
    ]
    return build_graph([edge for edge in edges if edge[2] != 0], nodes=("c_in", "c", "b", "c_out"))


def mason_transfer(
    config: TransducerConfig,
    omega_grid,
    source: str = "c_in",
    sink: str = "a_out",
    rwa: bool = True,
    placement: Optional[PumpPlacement] = None,
) -> ComplexSpectrum:
    """Mason's gain between two ports, rebuilding the graph at every grid point."""
    omega = validate_omega_grid(omega_grid)
    op: OperatingPoint = operating_point(config, placement)
    values = np.empty(omega.size, dtype=complex)
    for k, s in enumerate(laplace_axis(omega)):
        graph = build_transducer_graph(config, op.mean_fields, op.mechanics, s, rwa=rwa)
        values[k] = mason_gain(graph, source, sink) if source in graph.graph and sink in graph.graph else 0.0
    return ComplexSpectrum(omega, values, quantity=f"G[{sink},{source}]")
