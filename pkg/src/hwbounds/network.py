"""End-to-end converse bounds for repeater chains and quantum networks.

Every edge of a network is a Holevo-Werner channel. Single-path routing is
bounded by the minimum over A/B cuts of the largest per-edge bound in the
cut-set; multi-path (flooding) routing by the minimum over cuts of the
per-edge sum. Each is computed by brute-force cut enumeration and by its
graph-algorithm dual (widest path and max-flow respectively).
"""

from __future__ import annotations

import heapq
import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

from .errors import NetworkError, ParameterError
from .measures import K_POOL, Measure, measure_value
from .werner import WernerParams

MAX_ENUM_NODES = 20
# cut enumeration is used automatically up to this many non-terminal nodes
AUTO_ENUM_NODES = 14
FLOW_EPS = 1e-12

SINGLE_PATH_MEASURES = (
    Measure.E_R,
    Measure.E_R2,
    Measure.ESQ_TILDE,
    Measure.ESQ_STAR,
    Measure.E_P_INF,
    Measure.K_BEST,
)
MULTI_PATH_MEASURES = SINGLE_PATH_MEASURES


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    params: WernerParams


@dataclass(frozen=True)
class QuantumNetwork:
    """Undirected multigraph of Holevo-Werner channels between terminals A and B."""

    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    terminals: tuple[str, str]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "terminals", tuple(self.terminals))
        if len(set(self.nodes)) != len(self.nodes):
            raise NetworkError("duplicate node identifiers")
        a, b = self.terminals
        if a == b:
            raise NetworkError("terminals must be distinct")
        known = set(self.nodes)
        for t in (a, b):
            if t not in known:
                raise NetworkError(f"terminal {t!r} is not a node")
        for i, e in enumerate(self.edges):
            for end in (e.u, e.v):
                if end not in known:
                    raise NetworkError(f"edges[{i}]: unknown node {end!r}")
            if e.u == e.v:
                raise NetworkError(f"edges[{i}]: self-loop on {e.u!r}")

    @property
    def inner_nodes(self) -> list[str]:
        return sorted(n for n in self.nodes if n not in self.terminals)

    def adjacency(self) -> dict[str, list[tuple[str, int]]]:
        adj = {n: [] for n in self.nodes}
        for i, e in enumerate(self.edges):
            adj[e.u].append((e.v, i))
            adj[e.v].append((e.u, i))
        return adj

    def reachable(self, start: str, allowed=None) -> set[str]:
        """Nodes reachable from ``start`` using edge indices in ``allowed`` (all by default)."""
        adj = self.adjacency()
        seen, queue = {start}, deque([start])
        while queue:
            n = queue.popleft()
            for m, i in adj[n]:
                if m not in seen and (allowed is None or i in allowed):
                    seen.add(m)
                    queue.append(m)
        return seen

    def terminals_connected(self) -> bool:
        return self.terminals[1] in self.reachable(self.terminals[0])

    def edge_weights(self, measure: Measure | str) -> list[float]:
        cache: dict[WernerParams, float] = {}
        out = []
        for e in self.edges:
            if e.params not in cache:
                cache[e.params] = measure_value(measure, e.params)
            out.append(cache[e.params])
        return out

    # --- (de)serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [
                {"u": e.u, "v": e.v, "eta": e.params.eta, "d": e.params.d} for e in self.edges
            ],
            "terminals": {"A": self.terminals[0], "B": self.terminals[1]},
        }

    @classmethod
    def from_json(cls, data) -> QuantumNetwork:
        """Build a network from its parsed JSON form, naming the offending field on error."""
        if not isinstance(data, dict):
            raise NetworkError("top level: expected an object")
        extra = set(data) - {"nodes", "edges", "terminals"}
        if extra:
            raise NetworkError(f"top level: unknown keys {sorted(extra)}")
        for key in ("nodes", "edges", "terminals"):
            if key not in data:
                raise NetworkError(f"top level: missing key {key!r}")

        nodes = data["nodes"]
        if not isinstance(nodes, list) or not nodes:
            raise NetworkError("nodes: expected a non-empty list")
        for i, n in enumerate(nodes):
            if not isinstance(n, str) or not n:
                raise NetworkError(f"nodes[{i}]: expected a non-empty string")
        if len(set(nodes)) != len(nodes):
            raise NetworkError("nodes: duplicate identifiers")

        terms = data["terminals"]
        if not isinstance(terms, dict) or set(terms) != {"A", "B"}:
            raise NetworkError('terminals: expected an object with keys "A" and "B"')
        for key in ("A", "B"):
            if terms[key] not in nodes:
                raise NetworkError(f"terminals.{key}: unknown node {terms[key]!r}")
        if terms["A"] == terms["B"]:
            raise NetworkError("terminals: A and B must differ")

        raw_edges = data["edges"]
        if not isinstance(raw_edges, list):
            raise NetworkError("edges: expected a list")
        known = set(nodes)
        edges = []
        for i, e in enumerate(raw_edges):
            where = f"edges[{i}]"
            if not isinstance(e, dict):
                raise NetworkError(f"{where}: expected an object")
            extra = set(e) - {"u", "v", "eta", "d"}
            if extra:
                raise NetworkError(f"{where}: unknown keys {sorted(extra)}")
            for key in ("u", "v", "eta", "d"):
                if key not in e:
                    raise NetworkError(f"{where}.{key}: missing")
            for key in ("u", "v"):
                if e[key] not in known:
                    raise NetworkError(f"{where}.{key}: unknown node {e[key]!r}")
            if e["u"] == e["v"]:
                raise NetworkError(f"{where}: self-loop on {e['u']!r}")
            eta, d = e["eta"], e["d"]
            if isinstance(eta, bool) or not isinstance(eta, (int, float)):
                raise NetworkError(f"{where}.eta: expected a number")
            if isinstance(d, bool) or not isinstance(d, int):
                raise NetworkError(f"{where}.d: expected an integer")
            try:
                params = WernerParams(float(eta), d)
            except ParameterError as exc:
                raise NetworkError(f"{where}: {exc}") from None
            edges.append(Edge(e["u"], e["v"], params))
        return cls(tuple(nodes), tuple(edges), (terms["A"], terms["B"]))

    @classmethod
    def loads(cls, text: str) -> QuantumNetwork:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise NetworkError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls.from_json(data)

    @classmethod
    def load(cls, path) -> QuantumNetwork:
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())


@dataclass(frozen=True)
class CutResult:
    """A cut of the network, optionally carrying its bound value.

    ``certificate`` holds the value found by the dual graph algorithm and
    ``path`` the widest A-B path for single-path bounds.
    """

    cut_value: float
    cut_edges: tuple[int, ...]
    partition: tuple[frozenset, frozenset]
    certificate: float | None = None
    path: tuple[str, ...] = field(default=())

    def sort_key(self):
        return tuple(sorted(self.partition[0]))


def path_network(etas, d: int) -> QuantumNetwork:
    """A repeater chain ``A - r1 - ... - rN - B`` with one edge per eta."""
    etas = list(etas)
    if not etas:
        raise ParameterError("a chain needs at least one edge")
    names = ["A"] + [f"r{i}" for i in range(1, len(etas))] + ["B"]
    edges = [Edge(names[i], names[i + 1], WernerParams(eta, d)) for i, eta in enumerate(etas)]
    return QuantumNetwork(tuple(names), tuple(edges), ("A", "B"))


def diamond_network(etas, d: int) -> QuantumNetwork:
    """Diamond with a cross link; ``etas`` are for A-r1, A-r2, r1-r2, r1-B, r2-B."""
    etas = list(etas)
    if len(etas) != 5:
        raise ParameterError("diamond network takes five eta values")
    pairs = [("A", "r1"), ("A", "r2"), ("r1", "r2"), ("r1", "B"), ("r2", "B")]
    edges = [Edge(u, v, WernerParams(eta, d)) for (u, v), eta in zip(pairs, etas)]
    return QuantumNetwork(("A", "r1", "r2", "B"), tuple(edges), ("A", "B"))


def random_network(rng: np.random.Generator, max_nodes: int = 8, max_edges: int = 16) -> QuantumNetwork:
    """Connected random multigraph with eta uniform on [-1, 0) and one d in {3, 4, 5}."""
    k = int(rng.integers(2, max_nodes + 1))
    names = ["A", "B"] + [f"n{i}" for i in range(k - 2)]
    order = list(rng.permutation(names))
    d = int(rng.choice([3, 4, 5]))
    pairs = []
    for i in range(1, k):
        pairs.append((order[i], order[int(rng.integers(0, i))]))
    n_edges = int(rng.integers(k - 1, max(k - 1, max_edges) + 1))
    while len(pairs) < n_edges:
        u, v = rng.choice(k, size=2, replace=False)
        pairs.append((names[u], names[v]))
    edges = [Edge(u, v, WernerParams(float(rng.uniform(-1.0, 0.0)), d)) for u, v in pairs]
    return QuantumNetwork(tuple(names), tuple(edges), ("A", "B"))


class ChainBounds(NamedTuple):
    k_bound: float
    q2_bound: float
    bottleneck_index: int
    k_source: Measure | None


def chain_bounds(etas, d: int) -> ChainBounds:
    """Bounds for a repeater chain of iso-dimensional Holevo-Werner channels.

    All measures decrease with eta, so the edge with the largest eta is the
    bottleneck and fixes both bounds.
    """
    etas = [float(e) for e in etas]
    if not etas:
        raise ParameterError("a chain needs at least one edge")
    params = [WernerParams(e, d) for e in etas]
    idx = max(range(len(etas)), key=lambda i: (etas[i], -i))
    worst = params[idx]
    if worst.eta >= 0:
        return ChainBounds(0.0, 0.0, idx, None)
    values = {m: measure_value(m, worst) for m in K_POOL}
    source = min(K_POOL, key=lambda m: values[m])
    return ChainBounds(values[source], measure_value(Measure.E_P_INF, worst), idx, source)


def enumerate_cuts(net: QuantumNetwork) -> Iterator[CutResult]:
    """Every bipartition with A and B on opposite sides, with its cut-set.

    The yielded results carry ``cut_value = nan``.
    """
    inner = net.inner_nodes
    if len(inner) > MAX_ENUM_NODES:
        raise NetworkError(
            f"{len(inner)} non-terminal nodes exceed the enumeration limit of "
            f"{MAX_ENUM_NODES}; use the flow-based bounds instead"
        )
    a, b = net.terminals
    for mask in range(2 ** len(inner)):
        a_side = {a} | {n for j, n in enumerate(inner) if mask >> j & 1}
        b_side = set(net.nodes) - a_side
        crossing = tuple(
            i for i, e in enumerate(net.edges) if (e.u in a_side) != (e.v in a_side)
        )
        yield CutResult(math.nan, crossing, (frozenset(a_side), frozenset(b_side)))


def _best_cut(net: QuantumNetwork, weights, combine) -> CutResult:
    best = None
    for cut in enumerate_cuts(net):
        value = combine([weights[i] for i in cut.cut_edges])
        cand = CutResult(value, cut.cut_edges, cut.partition)
        if best is None or value < best.cut_value or (
            value == best.cut_value and cand.sort_key() < best.sort_key()
        ):
            best = cand
    return best


def _max_or_zero(values) -> float:
    return max(values, default=0.0)


def widest_path(net: QuantumNetwork, weights) -> tuple[float, list[str]]:
    """Maximum-bottleneck A-B path by a max-min variant of Dijkstra.

    Returns ``(0.0, [])`` if the terminals are disconnected.
    """
    a, b = net.terminals
    adj = net.adjacency()
    width = {a: math.inf}
    prev: dict[str, str] = {}
    heap = [(-math.inf, a)]
    done = set()
    while heap:
        neg_w, n = heapq.heappop(heap)
        if n in done:
            continue
        done.add(n)
        if n == b:
            break
        for m, i in adj[n]:
            cand = min(-neg_w, weights[i])
            if m not in done and cand > width.get(m, -math.inf):
                width[m] = cand
                prev[m] = n
                heapq.heappush(heap, (-cand, m))
    if b not in done:
        return 0.0, []
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return width[b], path[::-1]


def max_flow(net: QuantumNetwork, weights) -> tuple[float, frozenset]:
    """Edmonds-Karp max-flow from A to B; each undirected edge is a pair of
    opposite arcs of equal capacity.

    Returns the flow value and the source side of a minimum cut.
    """
    index = {n: i for i, n in enumerate(net.nodes)}
    size = len(net.nodes)
    cap = np.zeros((size, size))
    for e, w in zip(net.edges, weights):
        cap[index[e.u], index[e.v]] += w
        cap[index[e.v], index[e.u]] += w
    s, t = index[net.terminals[0]], index[net.terminals[1]]
    flow = 0.0
    while True:
        parent = [-1] * size
        parent[s] = s
        queue = deque([s])
        while queue and parent[t] == -1:
            u = queue.popleft()
            for v in range(size):
                if parent[v] == -1 and cap[u, v] > FLOW_EPS:
                    parent[v] = u
                    queue.append(v)
        if parent[t] == -1:
            break
        push, v = math.inf, t
        while v != s:
            push = min(push, cap[parent[v], v])
            v = parent[v]
        v = t
        while v != s:
            u = parent[v]
            cap[u, v] -= push
            cap[v, u] += push
            v = u
        flow += push
    source_side = frozenset(net.nodes[i] for i in range(size) if parent[i] != -1)
    return flow, source_side


def _cut_from_side(net: QuantumNetwork, a_side, weights, combine, certificate, path=()) -> CutResult:
    a_side = frozenset(a_side)
    crossing = tuple(i for i, e in enumerate(net.edges) if (e.u in a_side) != (e.v in a_side))
    value = combine([weights[i] for i in crossing])
    return CutResult(
        value, crossing, (a_side, frozenset(net.nodes) - a_side), certificate, tuple(path)
    )


def _use_enumeration(net: QuantumNetwork, enumerate_: bool | None) -> bool:
    if enumerate_ is None:
        return len(net.inner_nodes) <= AUTO_ENUM_NODES
    return enumerate_


def single_path_bound(
    net: QuantumNetwork, measure: Measure | str = Measure.E_R2, *, enumerate_: bool | None = None
) -> CutResult:
    """``min_C max_{e in C} E(e)``: enumeration value with widest-path certificate.

    When enumeration is off, the cut is read off the widest path: the nodes
    reachable from A through edges strictly wider than the bottleneck.
    """
    measure = Measure(measure)
    if measure not in SINGLE_PATH_MEASURES:
        raise ParameterError(f"measure {measure.value} is not available for single-path routing")
    weights = net.edge_weights(measure)
    width, path = widest_path(net, weights)
    if not path:
        side = net.reachable(net.terminals[0])
        return _cut_from_side(net, side, weights, _max_or_zero, 0.0)
    if _use_enumeration(net, enumerate_):
        best = _best_cut(net, weights, _max_or_zero)
        return CutResult(best.cut_value, best.cut_edges, best.partition, width, tuple(path))
    wider = {i for i, w in enumerate(weights) if w > width}
    side = net.reachable(net.terminals[0], allowed=wider)
    return _cut_from_side(net, side, weights, _max_or_zero, width, path)


def multi_path_bound(
    net: QuantumNetwork, measure: Measure | str = Measure.E_P_INF, *, enumerate_: bool | None = None
) -> CutResult:
    """``min_C sum_{e in C} E(e)``: enumeration value with max-flow certificate."""
    measure = Measure(measure)
    if measure not in MULTI_PATH_MEASURES:
        raise ParameterError(f"measure {measure.value} is not available for multi-path routing")
    weights = net.edge_weights(measure)
    flow, side = max_flow(net, weights)
    if not net.terminals_connected():
        return _cut_from_side(net, net.reachable(net.terminals[0]), weights, sum, 0.0)
    if _use_enumeration(net, enumerate_):
        best = _best_cut(net, weights, sum)
        return CutResult(best.cut_value, best.cut_edges, best.partition, flow)
    return _cut_from_side(net, side, weights, sum, flow)


def ordering_chain_check(net: QuantumNetwork, tol: float = 1e-10) -> bool:
    """Whether every cut satisfies ``sum E_P^inf <= sum E_R2 <= sum E_R``."""
    w_p = net.edge_weights(Measure.E_P_INF)
    w_r2 = net.edge_weights(Measure.E_R2)
    w_r = net.edge_weights(Measure.E_R)
    for cut in enumerate_cuts(net):
        s_p = sum(w_p[i] for i in cut.cut_edges)
        s_r2 = sum(w_r2[i] for i in cut.cut_edges)
        s_r = sum(w_r[i] for i in cut.cut_edges)
        if not (s_p <= s_r2 + tol and s_r2 <= s_r + tol):
            return False
    return True
