"""Citation-graph influence scores: a damped, finite-step random walk whose
restart distribution is the in-degree share of each node (teleport lands on
the target of a uniformly random edge)."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from figmine.errors import EmptyGraph, ParseError


@dataclass(frozen=True)
class AlefParams:
    alpha: float = 0.85
    steps: int = 2

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must be in (0, 1)")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")


@dataclass
class CitationGraph:
    nodes: list  # sorted paper ids
    edges: list  # deduplicated (citing, cited) pairs
    index: dict = field(default_factory=dict)

    @property
    def n_nodes(self):
        return len(self.nodes)

    @property
    def n_edges(self):
        return len(self.edges)


def parse_edge_line(line, lineno):
    parts = line.rstrip("\n").split("\t")
    if len(parts) != 2 or not parts[0] or not parts[1]:
        raise ParseError(f"line {lineno}: expected 'citing<TAB>cited', got {line!r}",
                         line_number=lineno)
    return parts[0], parts[1]


def build_graph(edge_list, extra_nodes=()):
    """Graph from (citing, cited) pairs or tab-separated lines.

    Self-loops are dropped with a warning; duplicate edges collapse; every
    id mentioned becomes a node.
    """
    pairs = []
    for lineno, item in enumerate(edge_list, start=1):
        if isinstance(item, str):
            if not item.strip():
                continue
            pairs.append(parse_edge_line(item, lineno))
        else:
            citing, cited = item
            pairs.append((str(citing), str(cited)))
    loops = sum(1 for a, b in pairs if a == b)
    if loops:
        warnings.warn(f"dropped {loops} self-loop edge(s)")
    edges = sorted({(a, b) for a, b in pairs if a != b})
    ids = set(extra_nodes)
    for a, b in pairs:
        ids.add(a)
        ids.add(b)
    nodes = sorted(ids)
    return CitationGraph(nodes=nodes, edges=edges, index={p: i for i, p in enumerate(nodes)})


def alef_scores(graph, params=AlefParams()):
    """Influence score per paper; scores sum to 1.

    Seed pi0[v] = in-degree(v) / total edges. Each step follows citations
    backward with uniform out-edge choice, redistributes dangling mass via
    pi0, damps by alpha, and mixes (1 - alpha) of pi0 back in. A graph with
    no edges scores uniformly.
    """
    n = graph.n_nodes
    if n == 0:
        raise EmptyGraph("graph has no nodes")
    if graph.n_edges == 0:
        u = 1.0 / n
        return {p: u for p in graph.nodes}
    citing = np.array([graph.index[a] for a, _ in graph.edges], dtype=np.int64)
    cited = np.array([graph.index[b] for _, b in graph.edges], dtype=np.int64)
    outdeg = np.bincount(citing, minlength=n).astype(np.float64)
    pi0 = np.bincount(cited, minlength=n).astype(np.float64) / graph.n_edges
    dangling = outdeg == 0
    inv_out = np.where(dangling, 0.0, 1.0 / np.where(outdeg > 0, outdeg, 1.0))

    pi = pi0
    for _ in range(params.steps):
        flow = np.bincount(cited, weights=pi[citing] * inv_out[citing], minlength=n)
        flow += pi[dangling].sum() * pi0
        pi = params.alpha * flow + (1.0 - params.alpha) * pi0
    pi = pi / pi.sum()
    return {p: float(pi[i]) for i, p in enumerate(graph.nodes)}


def citation_count_scores(graph):
    """Fallback scorer behind the same interface: normalized in-degree."""
    n = graph.n_nodes
    if n == 0:
        raise EmptyGraph("graph has no nodes")
    if graph.n_edges == 0:
        u = 1.0 / n
        return {p: u for p in graph.nodes}
    indeg = {p: 0 for p in graph.nodes}
    for _, b in graph.edges:
        indeg[b] += 1
    total = graph.n_edges
    return {p: indeg[p] / total for p in graph.nodes}


def journal_aggregate(scores, papers, key="journal"):
    """Mean score per journal (or per `key` field); empty groups absent."""
    groups = {}
    for paper in papers:
        if paper.paper_id not in scores:
            continue
        g = getattr(paper, key)
        if g is None:
            continue
        groups.setdefault(g, []).append(scores[paper.paper_id])
    return {g: float(np.mean(v)) for g, v in sorted(groups.items())}
