"""Graph parsing and influence scores against a dense-walk oracle."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from figmine.alef import (
    AlefParams,
    alef_scores,
    build_graph,
    citation_count_scores,
    journal_aggregate,
    parse_edge_line,
)
from figmine.errors import EmptyGraph, ParseError
from figmine.records import PaperRecord


def oracle_scores(nodes, edges, alpha=0.85, steps=2):
    """Dense, loop-based reference implementation of the damped walk."""
    n = len(nodes)
    idx = {p: i for i, p in enumerate(nodes)}
    out = [[] for _ in range(n)]
    indeg = [0] * n
    for a, b in edges:
        out[idx[a]].append(idx[b])
        indeg[idx[b]] += 1
    total = len(edges)
    pi0 = [d / total for d in indeg]
    pi = list(pi0)
    for _ in range(steps):
        nxt = [0.0] * n
        dangling = 0.0
        for v in range(n):
            if out[v]:
                share = pi[v] / len(out[v])
                for w in out[v]:
                    nxt[w] += share
            else:
                dangling += pi[v]
        flow = [nxt[v] + dangling * pi0[v] for v in range(n)]
        pi = [alpha * flow[v] + (1 - alpha) * pi0[v] for v in range(n)]
    s = sum(pi)
    return {p: pi[idx[p]] / s for p in nodes}


def random_graph(rng, n_nodes, n_edges):
    nodes = [f"n{i}" for i in range(n_nodes)]
    edges = set()
    for _ in range(n_edges):
        a, b = rng.integers(0, n_nodes, size=2)
        if a != b:
            edges.add((f"n{a}", f"n{b}"))
    return nodes, sorted(edges)


class TestParsing:
    def test_parse_valid_line(self):
        assert parse_edge_line("a\tb\n", 1) == ("a", "b")

    def test_parse_errors_carry_line_number(self):
        for bad in ("a b", "a\t", "\tb", "a\tb\tc"):
            with pytest.raises(ParseError) as e:
                parse_edge_line(bad, 17)
            assert e.value.line_number == 17

    def test_build_graph_from_lines(self):
        g = build_graph(["b\ta\n", "c\ta\n", "", "b\tc\n"])
        assert g.nodes == ["a", "b", "c"]
        assert g.edges == [("b", "a"), ("b", "c"), ("c", "a")]

    def test_duplicates_collapse(self):
        g = build_graph([("x", "y"), ("x", "y"), ("y", "x")])
        assert g.n_edges == 2

    def test_self_loops_dropped_with_warning(self):
        with pytest.warns(UserWarning, match="self-loop"):
            g = build_graph([("a", "a"), ("a", "b")])
        assert g.edges == [("a", "b")]
        assert "a" in g.nodes  # the node itself survives

    def test_extra_nodes_included(self):
        g = build_graph([("a", "b")], extra_nodes=["z"])
        assert g.nodes == ["a", "b", "z"]


class TestScores:
    def test_empty_graph_raises(self):
        with pytest.raises(EmptyGraph):
            alef_scores(build_graph([]))

    def test_no_edges_uniform(self):
        g = build_graph([], extra_nodes=["a", "b", "c", "d"])
        s = alef_scores(g)
        assert all(v == 0.25 for v in s.values())

    def test_two_node_cycle_exact(self):
        s = alef_scores(build_graph([("a", "b"), ("b", "a")]))
        assert s["a"] == 0.5 and s["b"] == 0.5  # exact, not approximate

    def test_star_graph_favors_center(self):
        s = alef_scores(build_graph([(f"leaf{i}", "hub") for i in range(5)]))
        assert s["hub"] > 0.9
        assert s["hub"] + sum(s[f"leaf{i}"] for i in range(5)) == pytest.approx(1.0)

    def test_scores_sum_to_one(self, rng):
        nodes, edges = random_graph(rng, 50, 200)
        s = alef_scores(build_graph(edges, extra_nodes=nodes))
        assert sum(s.values()) == pytest.approx(1.0, abs=1e-12)

    def test_matches_dense_oracle(self, rng):
        for trial in range(25):
            n = int(rng.integers(2, 9))
            nodes, edges = random_graph(rng, n, int(rng.integers(1, 3 * n)))
            if not edges:
                continue
            g = build_graph(edges, extra_nodes=nodes)
            got = alef_scores(g)
            want = oracle_scores(g.nodes, g.edges)
            for p in g.nodes:
                assert got[p] == pytest.approx(want[p], abs=1e-12)

    @given(st.integers(1, 6), st.floats(0.05, 0.95), st.integers(0, 10**6))
    @settings(max_examples=30)
    def test_oracle_property_any_params(self, steps, alpha, seed):
        rng = np.random.default_rng(seed)
        nodes, edges = random_graph(rng, int(rng.integers(2, 9)), 10)
        if not edges:
            return
        g = build_graph(edges, extra_nodes=nodes)
        got = alef_scores(g, AlefParams(alpha=alpha, steps=steps))
        want = oracle_scores(g.nodes, g.edges, alpha=alpha, steps=steps)
        for p in g.nodes:
            assert got[p] == pytest.approx(want[p], abs=1e-12)

    def test_dangling_mass_redistributed(self):
        # b has no out-edges: its mass flows back through pi0
        g = build_graph([("a", "b"), ("c", "b"), ("c", "a")])
        s = alef_scores(g)
        assert s["b"] > s["a"] > 0
        assert sum(s.values()) == pytest.approx(1.0)

    def test_params_validation(self):
        with pytest.raises(ValueError):
            AlefParams(alpha=1.0)
        with pytest.raises(ValueError):
            AlefParams(steps=0)


class TestFallbackScorer:
    def test_normalized_in_degree(self):
        g = build_graph([("a", "b"), ("c", "b"), ("a", "c")])
        s = citation_count_scores(g)
        assert s == {"a": 0.0, "b": 2 / 3, "c": 1 / 3}

    def test_same_interface_empty(self):
        g = build_graph([], extra_nodes=["a", "b"])
        assert citation_count_scores(g) == {"a": 0.5, "b": 0.5}


class TestJournalAggregate:
    def test_group_means(self):
        papers = [
            PaperRecord(paper_id="p1", journal="A", year=2000, page_count=1),
            PaperRecord(paper_id="p2", journal="A", year=2000, page_count=1),
            PaperRecord(paper_id="p3", journal="B", year=2000, page_count=1),
        ]
        got = journal_aggregate({"p1": 0.2, "p2": 0.4, "p3": 0.1}, papers)
        assert got == {"A": pytest.approx(0.3), "B": pytest.approx(0.1)}

    def test_unscored_papers_skipped(self):
        papers = [PaperRecord(paper_id="p1", journal="A", year=2000, page_count=1)]
        assert journal_aggregate({}, papers) == {}
