"""
Signal-flow-graph containers. Gains are complex numbers evaluated at one s.
"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, Tuple

import networkx as nx


@dataclass(frozen=True)
class SignalFlowGraph:
    """Frozen directed multigraph; every edge carries a complex `gain` attribute."""
    graph: nx.MultiDiGraph

    @property
    def nodes(self) -> Tuple[Hashable, ...]:
        return tuple(self.graph.nodes)

    @property
    def edges(self) -> Tuple[Tuple[Hashable, Hashable, complex], ...]:
        return tuple((u, v, data["gain"]) for u, v, data in self.graph.edges(data=True))

    def gain_digraph(self) -> nx.DiGraph:
        """Simple digraph with parallel edge gains summed."""
        merged = nx.DiGraph()
        merged.add_nodes_from(self.graph.nodes)
        for u, v, data in self.graph.edges(data=True):
            if merged.has_edge(u, v):
                merged[u][v]["gain"] += data["gain"]
            else:
                merged.add_edge(u, v, gain=complex(data["gain"]))
        return merged

    def edge_gain(self, u: Hashable, v: Hashable) -> complex:
        return sum((data["gain"] for data in self.graph.get_edge_data(u, v, default={}).values()), 0j)


@dataclass(frozen=True)
class Loop:
    """Simple cycle in canonical rotation (smallest label first)."""
    nodes: Tuple[Hashable, ...]
    gain: complex

    @property
    def node_set(self) -> FrozenSet[Hashable]:
        return frozenset(self.nodes)


@dataclass(frozen=True)
class ForwardPath:
    nodes: Tuple[Hashable, ...]
    gain: complex

    @property
    def node_set(self) -> FrozenSet[Hashable]:
        return frozenset(self.nodes)


@dataclass(frozen=True)
class MasonDecomposition:
    """
    Everything Mason's rule needs for one source/sink pair.

    nontouching_sets maps the set size k >= 2 to tuples of loop indices
    whose loops are pairwise node-disjoint.
    """
    source: Hashable
    sink: Hashable
    forward_paths: Tuple[ForwardPath, ...]
    loops: Tuple[Loop, ...]
    nontouching_sets: Dict[int, Tuple[Tuple[int, ...], ...]] = field(default_factory=dict)
    determinant: complex = 1.0 + 0j
    cofactors: Tuple[complex, ...] = field(default_factory=tuple)

    @property
    def numerator(self) -> complex:
        return sum((path.gain * cofactor for path, cofactor in zip(self.forward_paths, self.cofactors)), 0j)

    @property
    def gain(self) -> complex:
        return self.numerator / self.determinant
