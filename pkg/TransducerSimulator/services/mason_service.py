"""
Mason's gain formula over signal-flow graphs.

Loops come from networkx's bounded simple-cycle search, non-touching loop
sets are cliques of the loop-disjointness graph.
"""
import cmath
import logging
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from ..models.flow_graph import ForwardPath, Loop, MasonDecomposition, SignalFlowGraph
from .network_service import SingularNetworkError

LOOP_CAP = 10_000


class GraphError(Exception):
    """Signal-flow graph rejected at build or query time"""
    pass


class LoopOverflowError(GraphError):
    """Cycle enumeration exceeded the loop cap"""

    def __init__(self, message: str, cap: int):
        super().__init__(message)
        self.cap = cap


def _sort_key(nodes: Sequence[Hashable]) -> Tuple:
    return len(nodes), tuple(str(node) for node in nodes)


def build_graph(edges: Iterable[Tuple[Hashable, Hashable, complex]], nodes: Iterable[Hashable] = ()) -> SignalFlowGraph:
    """
    Build an immutable signal-flow graph from (from, to, gain) triples.

    Raises:
        GraphError: self-loops or non-finite gains
    """
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(nodes)
    for u, v, gain in edges:
        if u == v:
            raise GraphError(f"self-loop on {u!r}: split it into a susceptibility factor on the inbound edges")
        gain = complex(gain)
        if not cmath.isfinite(gain):
            raise GraphError(f"non-finite gain on edge {u!r} -> {v!r}")
        graph.add_edge(u, v, gain=gain)
    return SignalFlowGraph(graph=nx.freeze(graph))


def _canonical_rotation(cycle: List[Hashable]) -> Tuple[Hashable, ...]:
    start = min(range(len(cycle)), key=lambda i: str(cycle[i]))
    return tuple(cycle[start:] + cycle[:start])


def _path_gain(digraph: nx.DiGraph, nodes: Sequence[Hashable], closed: bool) -> complex:
    gain = 1.0 + 0j
    pairs = list(zip(nodes, nodes[1:]))
    if closed:
        pairs.append((nodes[-1], nodes[0]))
    for u, v in pairs:
        gain *= digraph[u][v]["gain"]
    return gain


def enumerate_loops(graph: SignalFlowGraph, max_length: Optional[int] = None, cap: int = LOOP_CAP) -> List[Loop]:
    """
    All simple directed cycles, each once, ordered by length then labels.

    Raises:
        LoopOverflowError: more than `cap` cycles
    """
    digraph = graph.gain_digraph()
    loops = []
    for cycle in nx.simple_cycles(digraph, length_bound=max_length):
        if len(loops) >= cap:
            raise LoopOverflowError(f"more than {cap} loops in the graph", cap=cap)
        nodes = _canonical_rotation(list(cycle))
        loops.append(Loop(nodes=nodes, gain=_path_gain(digraph, nodes, closed=True)))
    loops.sort(key=lambda loop: _sort_key(loop.nodes))
    return loops


def nontouching_sets(loops: Sequence[Loop]) -> Dict[int, Tuple[Tuple[int, ...], ...]]:
    """
    Index sets of pairwise node-disjoint loops, keyed by set size (k >= 2).
    """
    disjoint = nx.Graph()
    disjoint.add_nodes_from(range(len(loops)))
    for i in range(len(loops)):
        for j in range(i + 1, len(loops)):
            if loops[i].node_set.isdisjoint(loops[j].node_set):
                disjoint.add_edge(i, j)

    sets: Dict[int, List[Tuple[int, ...]]] = {}
    for clique in nx.enumerate_all_cliques(disjoint):
        if len(clique) >= 2:
            sets.setdefault(len(clique), []).append(tuple(sorted(clique)))
    return {order: tuple(sorted(members)) for order, members in sorted(sets.items())}


def determinant(loops: Sequence[Loop], max_order: Optional[int] = None) -> complex:
    """
    Graph determinant 1 - sum L_i + sum L_i L_j - ... over non-touching sets.

    max_order truncates the expansion at that set size.
    """
    delta = 1.0 + 0j
    delta -= sum((loop.gain for loop in loops), 0j)
    for order, members in nontouching_sets(loops).items():
        if max_order is not None and order > max_order:
            break
        sign = 1.0 if order % 2 == 0 else -1.0
        for indices in members:
            product = 1.0 + 0j
            for index in indices:
                product *= loops[index].gain
            delta += sign * product
    return delta


def forward_paths(graph: SignalFlowGraph, source: Hashable, sink: Hashable) -> List[ForwardPath]:
    """
    Simple source-to-sink paths with their gains.

    Raises:
        GraphError: unknown nodes, source == sink, or a source with inbound edges
    """
    for node in (source, sink):
        if node not in graph.graph:
            raise GraphError(f"unknown node {node!r}")
    if source == sink:
        raise GraphError("source and sink must differ")
    if graph.graph.in_degree(source) > 0:
        raise GraphError(f"source {source!r} has inbound edges")

    digraph = graph.gain_digraph()
    paths = [
        ForwardPath(nodes=tuple(nodes), gain=_path_gain(digraph, nodes, closed=False))
        for nodes in nx.all_simple_paths(digraph, source, sink)
    ]
    paths.sort(key=lambda path: _sort_key(path.nodes))
    return paths


def decompose(graph: SignalFlowGraph, source: Hashable, sink: Hashable,
              max_loop_length: Optional[int] = None) -> MasonDecomposition:
    paths = forward_paths(graph, source, sink)
    loops = enumerate_loops(graph, max_length=max_loop_length)
    cofactors = tuple(
        determinant([loop for loop in loops if loop.node_set.isdisjoint(path.node_set)])
        for path in paths
    )
    return MasonDecomposition(
        source=source,
        sink=sink,
        forward_paths=tuple(paths),
        loops=tuple(loops),
        nontouching_sets=nontouching_sets(loops),
        determinant=determinant(loops),
        cofactors=cofactors,
    )


def mason_gain(graph: SignalFlowGraph, source: Hashable, sink: Hashable) -> complex:
    """
    Transfer gain from source to sink, sum(P_k Delta_k) / Delta.

    Raises:
        SingularNetworkError: Delta == 0
    """
    decomposition = decompose(graph, source, sink)
    if decomposition.determinant == 0:
        logging.error(f"Mason determinant vanished for {source!r} -> {sink!r}")
        raise SingularNetworkError(f"graph determinant is zero for {source!r} -> {sink!r}")
    return decomposition.gain


def describe(decomposition: MasonDecomposition, graph: Optional[SignalFlowGraph] = None) -> str:
    """Plain-text dump of nodes, edges, loops, non-touching sets and the determinant."""
    lines = [f"source: {decomposition.source}", f"sink: {decomposition.sink}"]
    if graph is not None:
        lines.append(f"nodes: {', '.join(str(node) for node in graph.nodes)}")
        lines.append("edges:")
        for u, v, gain in graph.edges:
            lines.append(f"  {u} -> {v}: {gain:.6e}")
    lines.append("forward paths:")
    for k, (path, cofactor) in enumerate(zip(decomposition.forward_paths, decomposition.cofactors), start=1):
        lines.append(f"  P{k} = {' -> '.join(map(str, path.nodes))}: {path.gain:.6e} (Delta_{k} = {cofactor:.6e})")
    lines.append("loops:")
    for i, loop in enumerate(decomposition.loops, start=1):
        lines.append(f"  L{i} = {' -> '.join(map(str, loop.nodes))}: {loop.gain:.6e}")
    for order, members in decomposition.nontouching_sets.items():
        labels = ", ".join("".join(f"L{i + 1}" for i in indices) for indices in members)
        lines.append(f"non-touching sets of {order}: {labels}")
    lines.append(f"Delta = {decomposition.determinant:.6e}")
    return "\n".join(lines)
