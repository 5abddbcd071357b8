"""Density-map features and the multichart/singleton routing model."""

import numpy as np
import pytest

from figmine import gate, synthetic
from figmine.errors import InsufficientData, InvalidRegion
from figmine.gate import (
    CorpusStats,
    GateModel,
    compute_efr_mask,
    efr_density_map,
    gate_feature,
)
from figmine.records import Rect


class TestCorpusStats:
    def test_averages(self):
        s = CorpusStats.from_shapes([(100, 200), (300, 400)])
        assert s.height_avg == 200.0 and s.width_avg == 300.0

    def test_empty_raises(self):
        with pytest.raises(InsufficientData):
            CorpusStats.from_shapes([])


class TestEfrMask:
    def test_single_box(self):
        img = np.ones((60, 80))
        img[10:30, 20:50] = 0.0
        regions = compute_efr_mask(img)
        assert regions == [Rect(20, 10, 50, 30)]

    def test_two_panels_two_regions(self):
        img = np.ones((100, 200))
        img[10:90, 10:90] = 0.2
        img[10:90, 110:190] = 0.2
        regions = compute_efr_mask(img)
        assert sorted(regions, key=lambda r: r.x0) == [
            Rect(10, 10, 90, 90), Rect(110, 10, 190, 90)]

    def test_blank_image_no_regions(self):
        assert compute_efr_mask(np.ones((50, 50))) == []


class TestDensityMap:
    def test_hand_oracle_full_cover(self):
        m = efr_density_map([Rect(0, 0, 100, 100)], (100, 100), n=10)
        assert np.array_equal(m.densities, np.ones((10, 10)))

    def test_hand_oracle_quarter(self):
        # cover the top-left quadrant of a 100x100 image exactly
        m = efr_density_map([Rect(0, 0, 50, 50)], (100, 100), n=10)
        expect = np.zeros((10, 10))
        expect[:5, :5] = 1.0
        assert np.array_equal(m.densities, expect)

    def test_hand_oracle_partial_block(self):
        # region covers half of block (0,0) only: 5x10 of the 10x10 block
        m = efr_density_map([Rect(0, 0, 10, 5)], (100, 100), n=10)
        assert m.densities[0, 0] == 0.5
        assert m.densities.sum() == 0.5

    def test_remainder_goes_to_last_blocks(self):
        # 105x103: last row blocks are 15 px tall, last col blocks 13 px wide
        m = efr_density_map([Rect(90, 90, 103, 105)], (105, 103), n=10)
        assert m.densities[9, 9] == 1.0
        assert m.densities.sum() == 1.0

    def test_out_of_bounds_region(self):
        with pytest.raises(InvalidRegion):
            efr_density_map([Rect(0, 0, 200, 10)], (100, 100))

    def test_overlapping_regions_count_once(self):
        a = efr_density_map([Rect(0, 0, 50, 50), Rect(0, 0, 50, 50)], (100, 100))
        b = efr_density_map([Rect(0, 0, 50, 50)], (100, 100))
        assert np.array_equal(a.densities, b.densities)


class TestGateFeature:
    def test_layout(self, rng):
        img = synthetic.generate_figure("plot", rng, 200, 150)
        stats = CorpusStats(height_avg=100.0, width_avg=100.0)
        feat = gate_feature(img, stats)
        assert feat.shape == (102,)
        assert feat[0] == pytest.approx(img.shape[0] / 100.0)
        assert feat[1] == pytest.approx(img.shape[1] / 100.0)
        assert (feat[2:] >= 0).all() and (feat[2:] <= 1).all()

    def test_stats_change_feature(self, rng):
        img = synthetic.generate_figure("plot", rng, 200, 150)
        f1 = gate_feature(img, CorpusStats(height_avg=100.0, width_avg=100.0))
        f2 = gate_feature(img, CorpusStats(height_avg=200.0, width_avg=50.0))
        assert not np.allclose(f1[:2], f2[:2])
        assert np.array_equal(f1[2:], f2[2:])  # densities unaffected


class TestGateModel:
    def test_train_and_accuracy(self, gate_model):
        rng = np.random.default_rng(77)
        images, labels = synthetic.generate_gate_set(40, 40, seed=99)
        correct = 0
        for img, lbl in zip(images, labels):
            got, prob = gate.classify_with(gate_model, img)
            assert 0.0 <= prob <= 1.0
            correct += got == lbl
        assert correct / len(labels) >= 0.85

    def test_save_load_round_trip(self, gate_model, tmp_path, rng):
        path = tmp_path / "gate.bin"
        gate_model.save(path)
        got = GateModel.load(path)
        assert got.stats == gate_model.stats
        assert got.n == gate_model.n
        assert got.threshold == gate_model.threshold
        img = synthetic.generate_figure("diagram", rng, 160, 140)
        assert gate.classify_with(got, img) == gate.classify_with(gate_model, img)

    def test_stats_frozen_at_training(self, gate_model):
        # the model carries its training-corpus stats; classifying a new image
        # must not depend on any other corpus
        assert gate_model.stats.height_avg > 0
        assert gate_model.stats.width_avg > 0
