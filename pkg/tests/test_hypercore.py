import io

import numpy as np
import pytest

from hypermoments.errors import FormatError, ParseError
from hypermoments.hypercore import (
    Hypergraph,
    canonical_text,
    hyperdegree,
    parse_benson,
    parse_hyperedges,
    split_layers,
)
from synthgen import brute_hyperdegree, random_hypergraph


class TestParseHyperedges:
    def test_smallest_cycle(self):
        hg = parse_hyperedges("1 2\n2 3\n1 3")
        assert hg.n_vertices == 3
        assert hg.n_edges == 3
        assert all(len(e) == 2 for e in hg.edges)

    def test_set_semantics_dedup(self):
        hg = parse_hyperedges("1 2 3\n3 2 1")
        assert hg.n_edges == 1
        assert len(hg.edges[0]) == 3

    def test_repeated_vertex_rejected(self):
        with pytest.raises(ParseError):
            parse_hyperedges("1 1 2")

    def test_malformed_token_reports_line(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_hyperedges("1 2\n1 x\n")

    def test_comments_and_commas(self):
        hg = parse_hyperedges("# header\n1,2\n2, 3  # trailing\n\n")
        assert hg.n_edges == 2

    def test_dense_relabel_first_appearance(self):
        hg = parse_hyperedges("5 7\n7 9")
        assert hg.labels == (5, 7, 9)
        assert hg.edges == ((0, 1), (1, 2))

    def test_accepts_stream(self):
        hg = parse_hyperedges(io.StringIO("1 2\n"))
        assert hg.n_edges == 1


class TestParseBenson:
    def test_single_edge(self):
        hg, report = parse_benson("2\n", "1\n2\n")
        assert hg.n_edges == 1
        assert report.n_vertices == 2
        assert report.max_order == 2

    def test_dedup_identical_sets(self):
        hg, report = parse_benson("3\n3\n", "1\n2\n3\n3\n1\n2\n")
        assert hg.n_edges == 1
        assert report.n_raw_edges == 2

    def test_length_mismatch(self):
        with pytest.raises(FormatError, match="mismatch"):
            parse_benson("2\n2\n", "1\n2\n3\n")

    def test_nonpositive_size(self):
        with pytest.raises(FormatError, match="non-positive"):
            parse_benson("0\n", "")

    def test_times_stream_ignored(self):
        hg, _ = parse_benson("2\n2\n", "1\n2\n2\n3\n", "100\n200\n")
        assert hg.n_edges == 2

    def test_report_stats(self):
        _, report = parse_benson("2\n3\n1\n", "1\n2\n1\n2\n3\n9\n")
        assert report.n_unique_edges == 3
        assert report.max_order == 3
        assert report.mean_order == pytest.approx(2.0)


class TestSplitLayers:
    def test_two_orders(self):
        hg = parse_hyperedges("1 2\n1 2 3")
        split = split_layers(hg, 3)
        assert split.layer(2).n_edges == 1
        assert split.layer(3).n_edges == 1
        assert split.excluded == 0

    def test_empty_high_layers(self):
        hg = parse_hyperedges("1 2\n2 3")
        split = split_layers(hg, 5)
        for r in (3, 4, 5):
            assert split.layer(r).n_edges == 0

    def test_exclusion_counts(self):
        hg, _ = parse_benson("1\n2\n6\n", "1\n1\n2\n1\n2\n3\n4\n5\n6\n")
        split = split_layers(hg, 5)
        assert split.excluded_low == 1
        assert split.excluded_high == 1
        assert sum(l.n_edges for l in split.layers) + split.excluded == hg.n_edges

    def test_partition_property_random(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            hg = random_hypergraph(rng, r_max=7)
            split = split_layers(hg, 5)
            assert sum(l.n_edges for l in split.layers) + split.excluded == hg.n_edges

    def test_rmax_validation(self):
        with pytest.raises(ValueError):
            split_layers(parse_hyperedges("1 2"), 1)


class TestHyperdegree:
    def setup_method(self):
        hg = parse_hyperedges("1 2 3\n1 2 4")
        self.layer = split_layers(hg, 3).layer(3)

    def test_shared_pair(self):
        assert hyperdegree(self.layer, {0, 1}) == 2

    def test_absent_pair(self):
        assert hyperdegree(self.layer, {2, 3}) == 0

    def test_oversized_set_rejected(self):
        with pytest.raises(ValueError):
            hyperdegree(self.layer, {0, 1, 2, 3})

    def test_handshake_identity_random(self):
        # sum of singleton degrees = r * |E_r| for every layer
        rng = np.random.default_rng(11)
        for _ in range(100):
            hg = random_hypergraph(rng)
            for layer in split_layers(hg, 5).layers:
                total = sum(
                    hyperdegree(layer, {v}) for v in range(layer.n_vertices)
                )
                assert total == layer.r * layer.n_edges

    def test_matches_brute_force(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            hg = random_hypergraph(rng)
            for layer in split_layers(hg, 5).layers:
                if layer.n_edges == 0:
                    continue
                for _ in range(5):
                    k = int(rng.integers(1, layer.r + 1))
                    nodes = rng.choice(layer.n_vertices, size=k, replace=False)
                    assert hyperdegree(layer, nodes) == brute_hyperdegree(layer, nodes)


class TestCanonicalSerialization:
    def test_round_trip_bit_exact(self):
        hg = parse_hyperedges("9 4\n4 2 9\n2 9")
        text = canonical_text(hg)
        again = parse_hyperedges(text)
        assert canonical_text(again) == text
        assert again.labeled_edges() == hg.labeled_edges()

    def test_round_trip_random(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            hg = random_hypergraph(rng)
            if hg.n_edges == 0:
                continue
            text = canonical_text(hg)
            again = parse_hyperedges(text)
            assert again.labeled_edges() == hg.labeled_edges()
            assert canonical_text(again) == text

    def test_lines_sorted(self):
        hg = parse_hyperedges("3 7\n1 2\n1 2 5")
        lines = canonical_text(hg).splitlines()
        assert lines == sorted(lines, key=lambda s: [int(t) for t in s.split()])


class TestImmutability:
    def test_frozen_dataclasses(self):
        hg = parse_hyperedges("1 2")
        with pytest.raises(AttributeError):
            hg.n_vertices = 5
        layer = split_layers(hg, 2).layer(2)
        with pytest.raises(AttributeError):
            layer.r = 3

    def test_layer_order_validation(self):
        from hypermoments.hypercore import UniformLayer

        with pytest.raises(ValueError):
            UniformLayer(r=3, n_vertices=2, edges=((0, 1),))
