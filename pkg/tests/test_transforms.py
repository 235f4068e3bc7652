import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import chisquare, kstest

from tempobench.classifiers import nn1
from tempobench.core import Prng, derive_seed
from tempobench.transforms import (
    AugmentSpec,
    RandomWalkPadding,
    SharedPermutation,
    apply_shared_permutation,
    augment_dataset,
    augment_instance,
    make_permutation,
    padding_length,
    random_walk_pad,
)

from .conftest import random_dataset


class TestPermutation:
    def test_rejects_short(self):
        with pytest.raises(ValueError):
            make_permutation(1, 0)

    @given(st.integers(2, 200), st.integers(0, 2 ** 64 - 1))
    def test_is_permutation(self, n, seed):
        assert sorted(make_permutation(n, seed).tolist()) == list(range(n))

    def test_deterministic(self):
        assert make_permutation(8, 7).tolist() == make_permutation(8, 7).tolist()

    def test_direct_indexing(self):
        ds = random_dataset(0, n=3)
        ds = ds.with_panels(np.tile([1.0, 2.0, 3.0], (ds.X_train.shape[0], 1)), ds.X_test)
        out = apply_shared_permutation(ds, [2, 0, 1])
        assert out.X_train[0].tolist() == [3.0, 1.0, 2.0]

    def test_identity_permutation(self, toy):
        assert apply_shared_permutation(toy, np.arange(toy.series_length)).equals(toy)

    def test_length_mismatch(self, toy):
        with pytest.raises(ValueError):
            apply_shared_permutation(toy, [0, 1, 2])

    def test_not_a_permutation(self, toy):
        with pytest.raises(ValueError):
            apply_shared_permutation(toy, [0] * toy.series_length)

    def test_labels_and_order_kept(self, toy):
        out = apply_shared_permutation(toy, make_permutation(toy.series_length, 3))
        assert out.y_train.tolist() == toy.y_train.tolist()
        assert out.y_test.tolist() == toy.y_test.tolist()
        for a, b in zip(out.X_test, toy.X_test):
            assert sorted(a) == sorted(b)

    @given(st.integers(0, 10_000), st.integers(0, 2 ** 64 - 1))
    def test_nn1_euclid_predictions_unchanged(self, data_seed, perm_seed):
        ds = random_dataset(data_seed, n=15, n_train=10, n_test=10, n_classes=3)
        per = apply_shared_permutation(ds, make_permutation(ds.series_length, perm_seed))
        before = nn1(ds.X_train, ds.y_train, ds.X_test)
        after = nn1(per.X_train, per.y_train, per.X_test)
        assert before.tolist() == after.tolist()

    def test_transformer_api(self, toy):
        t = SharedPermutation(random_state=4).fit(toy.X_train)
        assert np.array_equal(t.transform(toy.X_test), toy.X_test[:, t.permutation_])
        with pytest.raises(ValueError):
            t.transform(toy.X_test[:, :5])


class TestRandomWalk:
    def test_empty(self):
        assert random_walk_pad(1.0, 0, 0.01, Prng(0)).size == 0

    def test_zero_sigma(self):
        assert random_walk_pad(2.5, 6, 0.0, Prng(0)).tolist() == [2.5] * 6

    def test_negative_length(self):
        with pytest.raises(ValueError):
            random_walk_pad(0.0, -1, 0.01, Prng(0))

    def test_anchor_not_emitted(self):
        rng, ref = Prng(3), Prng(3)
        pad = random_walk_pad(1.0, 3, 0.5, rng)
        steps = ref.gaussian_array(3, 0.0, 0.5)
        np.testing.assert_allclose(pad, 1.0 + np.cumsum(steps), rtol=0, atol=1e-15)

    def test_step_distribution(self):
        pad = random_walk_pad(0.0, 10_001, 0.01, Prng(8))
        steps = np.diff(np.concatenate(([0.0], pad)))
        assert abs(steps.mean()) <= 0.0005
        assert abs(steps.std(ddof=1) - 0.01) <= 0.001


class TestAugmentInstance:
    x = np.array([0.5, -1.0, 2.0, 0.25])

    def test_no_padding(self):
        out, rec = augment_instance(self.x, 0, Prng(0))
        assert out.tolist() == self.x.tolist() and rec == (0, 0)

    def test_negative_length(self):
        with pytest.raises(ValueError):
            augment_instance(self.x, -1, Prng(0))

    def test_zero_sigma_head(self):
        seed = next(s for s in range(1000) if Prng(s).next_int(0, 5) == 2)
        out, rec = augment_instance(self.x, 5, Prng(seed), sigma=0.0)
        assert rec == (2, 3)
        assert out[:4].tolist() == [0.5, 0.5, 0.5, -1.0]
        assert out[-3:].tolist() == [0.25] * 3

    def test_head_is_reversed_walk(self):
        rng = Prng(21)
        n_head = rng.next_int(0, 8)
        head = random_walk_pad(self.x[0], n_head, 0.3, rng)
        tail = random_walk_pad(self.x[-1], 8 - n_head, 0.3, rng)
        out, _ = augment_instance(self.x, 8, Prng(21), sigma=0.3)
        assert out.tolist() == head[::-1].tolist() + self.x.tolist() + tail.tolist()

    def test_twenty_percent_padding(self):
        x = Prng(0).gaussian_array(100)
        l = padding_length(0.2, 100)
        out, (h, t) = augment_instance(x, l, Prng(1))
        assert l == 20 and out.shape == (120,) and h + t == 20

    @pytest.mark.parametrize("fraction, n, expected", [(0.1, 128, 13), (0.5, 15, 8), (0.25, 10, 3), (0.3, 128, 38), (0.0, 50, 0)])
    def test_padding_length_rounds_half_up(self, fraction, n, expected):
        assert padding_length(fraction, n) == expected


class TestAugmentDataset:
    def test_zero_length_is_identity(self, toy):
        assert augment_dataset(toy, AugmentSpec(0.01, seed=1)).equals(toy)

    def test_containment_and_length(self, toy):
        spec = AugmentSpec(0.5, seed=9)
        out, records = augment_dataset(toy, spec, return_records=True)
        l = padding_length(0.5, toy.series_length)
        assert out.series_length == toy.series_length + l
        for X_new, X_old, recs in ((out.X_train, toy.X_train, records["train"]), (out.X_test, toy.X_test, records["test"])):
            for new, old, (h, t) in zip(X_new, X_old, recs):
                assert h + t == l
                assert new[h:h + toy.series_length].tolist() == old.tolist()

    def test_deterministic(self, toy):
        spec = AugmentSpec(0.3, seed=2)
        assert augment_dataset(toy, spec).equals(augment_dataset(toy, spec))

    def test_instances_independent_of_order(self, toy):
        spec = AugmentSpec(0.3, seed=2)
        full = augment_dataset(toy, spec)
        head = augment_dataset(toy.with_panels(toy.X_train[:3], toy.X_test, y_train=toy.y_train[:3]), spec)
        assert np.array_equal(full.X_train[:3], head.X_train)

    def test_head_split_uniform(self):
        ds = random_dataset(1, n=100, n_train=500, n_test=500)
        _, records = augment_dataset(ds, AugmentSpec(0.2, seed=0), return_records=True)
        heads = [h for split in ("train", "test") for h, _ in records[split]]
        counts = np.bincount(heads, minlength=21)
        assert counts.size == 21
        assert chisquare(counts).pvalue > 0.01

    def test_head_split_pvalues_calibrated(self):
        # one chi-square draw fails 1% of the time by design; over many seeds
        # the p-values themselves must look uniform
        pvalues = []
        for seed in range(200):
            heads = [Prng(derive_seed(seed, split, i)).next_int(0, 20) for split in ("train", "test") for i in range(500)]
            pvalues.append(chisquare(np.bincount(heads, minlength=21)).pvalue)
        pvalues = np.array(pvalues)
        assert np.mean(pvalues < 0.01) <= 0.03
        assert kstest(pvalues, "uniform").pvalue > 0.01

    def test_junction_step(self):
        ds = random_dataset(2, n=20, n_train=5000, n_test=5000)
        out, records = augment_dataset(ds.z_normalized(), AugmentSpec(0.5, seed=6), return_records=True)
        steps = []
        for X_new, X_old, recs in ((out.X_train, ds.z_normalized().X_train, records["train"]), (out.X_test, ds.z_normalized().X_test, records["test"])):
            for new, old, (h, _) in zip(X_new, X_old, recs):
                if h:
                    steps.append(abs(new[h - 1] - old[0]))
        assert len(steps) > 9000
        assert max(steps) < 0.06

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            AugmentSpec(1.5)
        with pytest.raises(ValueError):
            AugmentSpec(0.2, sigma=-0.1)

    def test_transformer_records(self, toy):
        t = RandomWalkPadding(l_fraction=0.25, random_state=3).fit(toy.X_train)
        out = t.transform(toy.X_train)
        assert out.shape[1] == toy.series_length + 6
        assert all(h + tl == 6 for h, tl in t.records_)
