"""The synthetic figure generators that back the quantitative tests."""

import numpy as np
import pytest

from figmine import synthetic
from figmine.records import Rect, SINGLETON_CLASSES


class TestSingletonGenerators:
    def test_all_classes_covered(self):
        assert set(synthetic.GENERATORS) == set(SINGLETON_CLASSES)

    @pytest.mark.parametrize("kind", sorted(synthetic.GENERATORS))
    def test_output_contract(self, kind, rng):
        img = synthetic.generate_figure(kind, rng)
        assert img.ndim == 2
        assert img.dtype == np.float64
        assert img.min() >= 0.0 and img.max() <= 1.0
        assert (img < 0.95).any()  # some content

    @pytest.mark.parametrize("kind", sorted(synthetic.GENERATORS))
    def test_requested_size_respected(self, kind, rng):
        img = synthetic.generate_figure(kind, rng, 180, 140)
        assert img.shape == (140, 180)

    def test_deterministic_under_seed(self):
        a = synthetic.generate_figure("plot", np.random.default_rng(5))
        b = synthetic.generate_figure("plot", np.random.default_rng(5))
        assert np.array_equal(a, b)

    def test_labeled_corpus_balanced(self):
        images, labels = synthetic.generate_labeled_corpus(7, seed=0)
        assert len(images) == 35
        for c in SINGLETON_CLASSES:
            assert labels.count(c) == 7
        assert labels == sorted(labels)


class TestContentBbox:
    def test_known_box(self):
        img = np.ones((50, 60))
        img[10:20, 15:45] = 0.0
        assert synthetic.content_bbox(img) == Rect(15, 10, 45, 20)

    def test_blank_is_none(self):
        assert synthetic.content_bbox(np.ones((10, 10))) is None


class TestMontage:
    def test_ground_truth_disjoint_and_in_bounds(self, rng):
        for _ in range(20):
            img, gt, kinds = synthetic.generate_montage(rng)
            bounds = Rect(0, 0, img.shape[1], img.shape[0])
            assert 2 <= len(gt) <= 9
            assert len(kinds) == len(gt)
            for i, r in enumerate(gt):
                assert bounds.contains(r)
                assert not r.is_empty()
                for j in range(i + 1, len(gt)):
                    assert not r.overlaps(gt[j])

    def test_fixed_grid_shape(self, rng):
        img, gt, kinds = synthetic.generate_montage(rng, rows=2, cols=3)
        assert len(gt) == 6

    def test_montage_kinds_exclude_equations(self, rng):
        for _ in range(5):
            _, _, kinds = synthetic.generate_montage(rng)
            assert set(kinds) <= set(synthetic.MONTAGE_KINDS)
            assert "equation" not in kinds

    def test_gutters_respected(self, rng):
        # neighboring ground-truth boxes are separated by >= the gutter the
        # montage was built with (content can only shrink panels)
        img, gt, _ = synthetic.generate_montage(rng, rows=1, cols=2, gutter=12)
        a, b = sorted(gt, key=lambda r: r.x0)
        assert b.x0 - a.x1 >= 12


class TestAuxAndSets:
    def test_fragment_set_labels(self):
        images, labels = synthetic.generate_fragment_set(9, seed=0)
        assert set(labels) == {"standalone", "auxiliary"}
        assert labels.count("standalone") == labels.count("auxiliary")

    def test_aux_pieces_are_thin_or_small(self, rng):
        for gen in synthetic.AUX_GENERATORS:
            img = gen(rng)
            assert min(img.shape) < 100

    def test_gate_set_composition(self):
        images, labels = synthetic.generate_gate_set(5, 7, seed=0)
        assert labels.count("singleton") == 5
        assert labels.count("multichart") == 7
        assert len(images) == 12

    def test_gate_set_deterministic(self):
        a, _ = synthetic.generate_gate_set(3, 3, seed=4)
        b, _ = synthetic.generate_gate_set(3, 3, seed=4)
        assert all(np.array_equal(x, y) for x, y in zip(a, b))
