"""SVM training against QP oracles, prediction invariants, CV mechanics."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from figmine.errors import InvalidFeature, InvalidParameter, InvalidTrainingSet
from figmine.svm import (
    ConfusionMatrix,
    SvmModel,
    SvmParams,
    cross_validate,
    grid_search,
    predict,
    predict_batch,
    train,
)
from figmine.svm.evaluate import make_folds
from figmine.svm.kernel import kernel_matrix


def blobs(rng, n_per, centers, spread=0.3):
    X, y = [], []
    for i, c in enumerate(centers):
        X.append(rng.standard_normal((n_per, len(c))) * spread + c)
        y += [f"c{i}"] * n_per
    return np.vstack(X), y


class TestKernelMatrix:
    def test_linear(self, rng):
        X = rng.random((5, 3))
        Z = rng.random((4, 3))
        assert np.allclose(kernel_matrix(X, Z, "linear", 0.1), X @ Z.T)

    def test_rbf_known_values(self):
        X = np.array([[0.0, 0.0], [1.0, 0.0]])
        K = kernel_matrix(X, X, "rbf", 0.5)
        assert K[0, 0] == pytest.approx(1.0)
        assert K[0, 1] == pytest.approx(np.exp(-0.5))

    def test_rbf_bounds(self, rng):
        X = rng.random((20, 4))
        K = kernel_matrix(X, X, "rbf", 2.0)
        assert (K <= 1.0 + 1e-12).all() and (K > 0).all()
        assert np.allclose(np.diag(K), 1.0)

    def test_bad_kernel_name(self, rng):
        with pytest.raises(InvalidParameter):
            kernel_matrix(rng.random((2, 2)), rng.random((2, 2)), "poly", 1.0)


class TestParams:
    def test_defaults(self):
        p = SvmParams()
        assert p.kernel == "rbf" and p.gamma == 0.001 and p.penalty_c == 1000.0

    def test_validation(self):
        with pytest.raises(InvalidParameter):
            SvmParams(gamma=0.0)
        with pytest.raises(InvalidParameter):
            SvmParams(penalty_c=-1.0)
        with pytest.raises(InvalidParameter):
            SvmParams(kernel="poly")

    def test_dict_round_trip(self):
        p = SvmParams(kernel="linear", gamma=0.5, penalty_c=2.0)
        assert SvmParams.from_dict(p.to_dict()) == p


class TestTrain:
    def test_input_validation(self, rng):
        X = rng.random((6, 3))
        with pytest.raises(InvalidTrainingSet):
            train(np.zeros((0, 3)), [], SvmParams())
        with pytest.raises(InvalidTrainingSet):
            train(X, ["a"] * 6, SvmParams())
        bad = X.copy()
        bad[0, 0] = np.nan
        with pytest.raises(InvalidFeature):
            train(bad, ["a", "a", "a", "b", "b", "b"], SvmParams())

    def test_separable_two_class(self, rng):
        X, y = blobs(rng, 30, [(0, 0), (5, 5)])
        model = train(X, y, SvmParams(gamma=0.5, penalty_c=10.0))
        pred, probs = predict_batch(model, X)
        assert pred == y
        assert probs.shape == (60, 2)

    def test_three_class_ovr(self, rng):
        X, y = blobs(rng, 25, [(0, 0), (6, 0), (0, 6)])
        model = train(X, y, SvmParams(gamma=0.5, penalty_c=10.0))
        assert model.classes == ["c0", "c1", "c2"]
        pred, _ = predict_batch(model, X)
        acc = np.mean([p == t for p, t in zip(pred, y)])
        assert acc == 1.0

    def test_xor_rbf(self):
        X = np.array([[0, 0], [1, 1], [0, 1], [1, 0]], dtype=float)
        y = ["a", "a", "b", "b"]
        model = train(X, y, SvmParams(gamma=1.0, penalty_c=100.0))
        pred, _ = predict_batch(model, X)
        assert pred == y

    def test_scaling_invariance_with_scaler(self, rng):
        X, y = blobs(rng, 20, [(0, 0), (3, 3)])
        stretched = X * np.array([1000.0, 0.001])
        m1 = train(X, y, SvmParams(gamma=0.1, penalty_c=5.0), scale=True)
        m2 = train(stretched, y, SvmParams(gamma=0.1, penalty_c=5.0), scale=True)
        p1, _ = predict_batch(m1, X)
        p2, _ = predict_batch(m2, stretched)
        assert p1 == p2

    def test_deterministic(self, rng):
        X, y = blobs(rng, 15, [(0, 0), (2, 2), (4, 0)])
        m1 = train(X, y, SvmParams())
        m2 = train(X, y, SvmParams())
        p1 = predict_batch(m1, X)[1]
        p2 = predict_batch(m2, X)[1]
        assert np.array_equal(p1, p2)


class TestPredict:
    @pytest.fixture(scope="class")
    def model(self):
        rng = np.random.default_rng(7)
        X, y = blobs(rng, 20, [(0, 0), (4, 4), (8, 0)])
        return train(X, y, SvmParams(gamma=0.3, penalty_c=10.0)), X

    def test_probs_are_distribution(self, model, rng):
        m, X = model
        _, probs = predict_batch(m, rng.random((10, 2)) * 8)
        assert np.allclose(probs.sum(axis=1), 1.0)
        assert (probs >= 0).all()

    def test_argmax_matches_decision(self, model, rng):
        m, X = model
        Q = rng.random((25, 2)) * 8
        pred, probs = predict_batch(m, Q)
        D = m.decision_matrix(Q)
        for i, p in enumerate(pred):
            assert m.classes[int(D[i].argmax())] == p
            assert m.classes[int(probs[i].argmax())] == p

    def test_single_predict_consistent(self, model):
        m, X = model
        batch_pred, batch_probs = predict_batch(m, X[:3])
        for i in range(3):
            label, probs = predict(m, X[i])
            assert label == batch_pred[i]
            assert np.allclose(probs, batch_probs[i])


class TestSaveLoad:
    def test_round_trip_bitwise_predictions(self, tmp_path, rng):
        X, y = blobs(rng, 20, [(0, 0), (3, 3), (6, 0)])
        model = train(X, y, SvmParams(), scale=True)
        path = tmp_path / "m.bin"
        model.save(path)
        got = SvmModel.load(path)
        assert got.classes == model.classes
        assert got.params == model.params
        a = predict_batch(model, X)
        b = predict_batch(got, X)
        assert a[0] == b[0]
        assert np.array_equal(a[1], b[1])

    def test_sidecar_has_hyperparameters(self, tmp_path, rng):
        import json

        X, y = blobs(rng, 10, [(0, 0), (3, 3)])
        model = train(X, y, SvmParams(kernel="linear", gamma=0.01, penalty_c=2.0))
        path = tmp_path / "m.bin"
        model.save(path)
        meta = json.loads((tmp_path / "m.bin.json").read_text())
        assert meta["params"] == {"kernel": "linear", "gamma": 0.01, "penalty_c": 2.0}
        assert meta["classes"] == ["c0", "c1"]


class TestFolds:
    @given(st.lists(st.sampled_from(["a", "b", "c"]), min_size=10, max_size=60),
           st.integers(2, 6), st.integers(0, 100))
    @settings(max_examples=40)
    def test_partition_properties(self, labels, folds, seed):
        fold_of = make_folds(labels, folds, seed=seed)
        assert len(fold_of) == len(labels)
        assert fold_of.min() >= 0 and fold_of.max() < folds
        # stratification: per class, fold sizes differ by at most 1
        arr = np.asarray(labels, dtype=object)
        for c in set(labels):
            counts = np.bincount(fold_of[arr == c], minlength=folds)
            assert counts.max() - counts.min() <= 1

    def test_deterministic(self):
        labels = ["a"] * 12 + ["b"] * 8
        assert np.array_equal(make_folds(labels, 4, seed=1), make_folds(labels, 4, seed=1))

    def test_small_class_warns(self):
        with pytest.warns(UserWarning, match="one sample per fold"):
            make_folds(["a"] * 20 + ["b"] * 2, 5)

    def test_bad_fold_count(self):
        with pytest.raises(InvalidTrainingSet):
            make_folds(["a", "b"], 1)


class TestCrossValidate:
    def test_pooled_confusion_total(self, rng):
        X, y = blobs(rng, 30, [(0, 0), (4, 4)])
        r = cross_validate(X, y, SvmParams(gamma=0.5, penalty_c=10.0), folds=5)
        assert r.confusion.total == len(y)
        assert 0.9 <= r.accuracy <= 1.0
        assert set(r.precision) == {"c0", "c1"}
        assert len(r.fold_accuracies) == 5

    def test_confusion_metrics_hand_checked(self):
        cm = ConfusionMatrix.from_pairs(
            ["a", "a", "a", "b", "b", "c"],
            ["a", "a", "b", "b", "b", "a"],
        )
        assert cm.accuracy() == pytest.approx(4 / 6)
        assert cm.precision("a") == pytest.approx(2 / 3)
        assert cm.recall("a") == pytest.approx(2 / 3)
        assert cm.precision("b") == pytest.approx(2 / 3)
        assert cm.recall("b") == pytest.approx(1.0)
        assert cm.recall("c") == 0.0


class TestGridSearch:
    def test_picks_better_cell(self, rng):
        # XOR layout: linear kernel cannot separate it, rbf can
        X, y = blobs(rng, 15, [(0, 0), (4, 4), (0, 4), (4, 0)], spread=0.3)
        y = ["pos" if lbl in ("c0", "c1") else "neg" for lbl in y]
        grid = [
            SvmParams(kernel="linear", gamma=1.0, penalty_c=10.0),
            SvmParams(kernel="rbf", gamma=0.5, penalty_c=10.0),
        ]
        best, accs = grid_search(X, y, grid, folds=4)
        assert best == grid[1]
        assert accs[1] > accs[0]

    def test_tie_goes_to_first(self, rng):
        X, y = blobs(rng, 20, [(0, 0), (8, 8)], spread=0.1)
        grid = [SvmParams(gamma=0.5, penalty_c=10.0), SvmParams(gamma=0.5, penalty_c=10.0)]
        best, accs = grid_search(X, y, grid, folds=4)
        assert accs[0] == accs[1]
        assert best is grid[0]

    def test_empty_grid(self, rng):
        with pytest.raises(InvalidTrainingSet):
            grid_search(rng.random((4, 2)), ["a", "a", "b", "b"], [])
