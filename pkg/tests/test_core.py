import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tempobench.core import Prng, SplitDataset, accuracy, derive_seed, load_dataset, save_dataset, z_normalize
from tempobench.core.data import intern_labels, read_split_tsv

from .oracles import splitmix64_uniforms, splitmix64_words

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


class TestPrng:
    def test_uniforms_match_reference_seed_42(self):
        rng = Prng(42)
        assert [rng.next_uniform() for _ in range(3)] == splitmix64_uniforms(42, 3)

    @given(st.integers(0, 2 ** 64 - 1))
    def test_raw_words_match_reference(self, seed):
        rng = Prng(seed)
        assert [rng.next_u64() for _ in range(5)] == splitmix64_words(seed, 5)

    @given(st.integers(0, 2 ** 64 - 1), st.integers(0, 40))
    def test_bulk_draws_equal_scalar_calls(self, seed, size):
        a, b = Prng(seed), Prng(seed)
        assert a.uniform_array(size).tolist() == [b.next_uniform() for _ in range(size)]
        assert a.next_u64() == b.next_u64()
        assert a.int_array(-3, 7, size).tolist() == [b.next_int(-3, 7) for _ in range(size)]

    @given(st.integers(0, 2 ** 64 - 1), st.lists(st.integers(1, 5), max_size=6))
    def test_gaussian_array_equals_consecutive_calls(self, seed, chunks):
        a, b = Prng(seed), Prng(seed)
        bulk = np.concatenate([a.gaussian_array(c) for c in chunks] + [np.empty(0)])
        single = [b.next_gaussian() for _ in range(int(sum(chunks)))]
        assert bulk.tolist() == single

    def test_gaussian_pair_is_cached(self):
        rng = Prng(9)
        u1, u2 = splitmix64_uniforms(9, 2)
        r = np.sqrt(-2.0 * np.log1p(-u1))
        assert rng.next_gaussian() == pytest.approx(r * np.cos(2 * np.pi * u2), abs=1e-15)
        assert rng.next_gaussian() == pytest.approx(r * np.sin(2 * np.pi * u2), abs=1e-15)
        assert rng.state == (9 + 2 * 0x9E3779B97F4A7C15) % 2 ** 64

    def test_degenerate_calls(self):
        rng = Prng(1)
        assert rng.next_gaussian(5.0, 0.0) == 5.0
        assert rng.next_int(3, 3) == 3

    def test_argument_errors(self):
        rng = Prng(1)
        with pytest.raises(ValueError):
            rng.next_int(4, 3)
        with pytest.raises(ValueError):
            rng.next_gaussian(0.0, -1.0)

    def test_next_int_is_scaled_floor(self):
        rng = Prng(123)
        u = splitmix64_uniforms(123, 20)
        assert [rng.next_int(2, 9) for _ in range(20)] == [2 + int(v * 8) for v in u]

    def test_mixed_stream_determinism(self):
        def stream(seed):
            rng = Prng(seed)
            out = []
            for k in range(10_000):
                op = k % 4
                if op == 0:
                    out.append(rng.next_uniform())
                elif op == 1:
                    out.append(rng.next_gaussian(1.0, 2.0))
                elif op == 2:
                    out.append(rng.next_int(-5, 5))
                else:
                    out.append(tuple(rng.shuffle(range(4))))
            return out

        assert stream(2024) == stream(2024)
        assert stream(2024) != stream(2025)

    @given(st.integers(0, 2 ** 64 - 1), st.lists(st.integers(), max_size=30))
    def test_shuffle_is_permutation(self, seed, items):
        assert sorted(Prng(seed).shuffle(items)) == sorted(items)

    def test_shuffle_frequencies(self):
        rng = Prng(7)
        counts = Counter(tuple(rng.shuffle([0, 1, 2])) for _ in range(10_000))
        assert set(counts) == set(itertools.permutations([0, 1, 2]))
        for c in counts.values():
            assert abs(c / 10_000 - 1 / 6) <= 0.02

    def test_shuffle_runs_from_last_index(self):
        u = splitmix64_uniforms(5, 3)
        items = list(range(4))
        for i, v in zip((3, 2, 1), u):
            j = int(v * (i + 1))
            items[i], items[j] = items[j], items[i]
        assert Prng(5).shuffle(range(4)) == items

    def test_gaussian_moments(self):
        z = Prng(11).gaussian_array(200_000, 2.0, 0.5)
        assert abs(z.mean() - 2.0) < 0.005
        assert abs(z.std() - 0.5) < 0.005


class TestDeriveSeed:
    def test_field_separation(self):
        assert derive_seed("ab", "c") != derive_seed("a", "bc")

    def test_negative_integers_wrap(self):
        assert derive_seed(-1) == derive_seed(2 ** 64 - 1)


class TestZNormalize:
    def test_hand_example(self):
        np.testing.assert_allclose(z_normalize([1, 2, 3]), [-1.22474487, 0, 1.22474487], atol=1e-8)

    def test_constant_series(self):
        assert z_normalize([7, 7, 7, 7]).tolist() == [0, 0, 0, 0]

    def test_rejects_short(self):
        with pytest.raises(ValueError):
            z_normalize([1.0])

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            z_normalize([1.0, np.nan, 2.0])

    @given(arrays(np.float64, st.integers(2, 50), elements=finite))
    def test_moments_and_idempotence(self, x):
        z = z_normalize(x)
        np.testing.assert_allclose(z_normalize(z), z, atol=1e-12)
        if x.std() >= 1e-6 * max(1.0, np.abs(x).max()):
            assert abs(z.mean()) < 1e-10
            assert abs(z.std() - 1) < 1e-10


class TestAccuracy:
    @pytest.mark.parametrize(
        "pred, truth, expected",
        [([0, 1, 1], [0, 1, 1], 1.0), ([0, 0, 0, 0], [1, 1, 1, 1], 0.0), ([0, 1, 0, 1], [0, 1, 1, 1], 0.75)],
    )
    def test_examples(self, pred, truth, expected):
        assert accuracy(pred, truth) == expected

    def test_errors(self):
        with pytest.raises(ValueError):
            accuracy([0, 1], [0])
        with pytest.raises(ValueError):
            accuracy([], [])


class TestSplitDataset:
    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            SplitDataset("x", np.zeros((2, 5)), [0, 1], np.zeros((2, 4)), [0, 1])

    def test_unseen_test_class(self):
        with pytest.raises(ValueError):
            SplitDataset("x", np.zeros((2, 5)), [0, 0], np.zeros((1, 5)), [1])

    def test_intern_labels_numeric_order(self):
        classes, (a, b) = intern_labels(["10", "2", "2"], ["10"])
        assert classes == ("2", "10")
        assert a.tolist() == [1, 0, 0] and b.tolist() == [1]

    def test_tsv_round_trip(self, tmp_path, toy):
        save_dataset(toy, tmp_path)
        back = load_dataset(tmp_path)
        assert back.equals(toy)

    def test_tsv_string_labels(self, tmp_path):
        (tmp_path / "S_TRAIN.tsv").write_text("cat\t1\t2\t3\ndog\t3\t2\t1\n")
        (tmp_path / "S_TEST.tsv").write_text("dog\t0\t0\t1\n")
        ds = load_dataset(tmp_path, "S")
        assert ds.classes == ("cat", "dog")
        assert ds.y_test.tolist() == [1]

    def test_tsv_ragged_rejected(self, tmp_path):
        path = tmp_path / "R_TRAIN.tsv"
        path.write_text("1\t1\t2\n2\t1\n")
        with pytest.raises(ValueError):
            read_split_tsv(path)
