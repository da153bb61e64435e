import threading

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from miamix.core import (
    RngStream,
    apply_mask,
    blend_labels,
    make_one_hot,
    mask_mean,
    validate_image,
    validate_label,
    validate_mask,
)
from miamix.errors import ArgumentError

unit_floats = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


def unit_array(shape):
    return arrays(np.float64, shape, elements=unit_floats)


class TestMakeOneHot:
    def test_basic(self):
        assert make_one_hot(2, 4).tolist() == [0, 0, 1, 0]

    def test_single_class(self):
        assert make_one_hot(0, 1).tolist() == [1.0]

    def test_last_index(self):
        vec = make_one_hot(9, 10)
        assert vec[9] == 1.0 and vec.sum() == 1.0

    def test_out_of_range(self):
        with pytest.raises(ArgumentError):
            make_one_hot(4, 4)
        with pytest.raises(ArgumentError):
            make_one_hot(-1, 4)
        with pytest.raises(ArgumentError):
            make_one_hot(0, 0)


class TestMaskMean:
    def test_constant(self):
        assert mask_mean(np.full((32, 32), 0.7)) == 0.7

    def test_half_ones(self):
        mask = np.zeros((4, 8))
        mask[:2] = 1.0
        assert mask_mean(mask) == 0.5

    def test_cutmix_block(self):
        # brute-force pixel count oracle: 16x16 zero block inside 32x32
        mask = np.ones((32, 32))
        mask[5:21, 7:23] = 0.0
        zeros = int(np.count_nonzero(mask == 0))
        assert zeros == 256
        assert mask_mean(mask) == (1024 - zeros) / 1024

    def test_empty(self):
        with pytest.raises(ArgumentError):
            mask_mean(np.zeros((0, 4)))

    @given(unit_array((13, 9)))
    def test_complement_identity(self, mask):
        assert abs(mask_mean(1.0 - mask) - (1.0 - mask_mean(mask))) <= 1e-12


class TestApplyMask:
    def setup_method(self):
        gen = np.random.default_rng(5)
        self.first = gen.random((8, 8, 3))
        self.second = gen.random((8, 8, 3))

    def test_all_ones_gives_first(self):
        out = apply_mask(np.ones((8, 8)), self.first, self.second)
        assert np.array_equal(out, self.first)

    def test_all_zeros_gives_second(self):
        out = apply_mask(np.zeros((8, 8)), self.first, self.second)
        assert np.array_equal(out, self.second)

    def test_half_blend(self):
        out = apply_mask(np.full((8, 8), 0.5), np.ones((8, 8, 3)), np.zeros((8, 8, 3)))
        assert np.array_equal(out, np.full((8, 8, 3), 0.5))

    def test_dim_mismatch(self):
        with pytest.raises(ArgumentError):
            apply_mask(np.ones((4, 4)), self.first, self.second)
        with pytest.raises(ArgumentError):
            apply_mask(np.ones((8, 8)), self.first, self.second[:, :, :1])

    @given(unit_array((6, 5)), unit_array((6, 5, 3)), unit_array((6, 5, 3)))
    def test_output_within_pixel_hull(self, mask, first, second):
        out = apply_mask(mask, first, second)
        lo = np.minimum(first, second)
        hi = np.maximum(first, second)
        assert np.all(out >= lo - 1e-12) and np.all(out <= hi + 1e-12)


class TestBlendLabels:
    def test_lambda_one_identity(self):
        a, b = make_one_hot(0, 3), make_one_hot(2, 3)
        assert np.array_equal(blend_labels(1.0, a, b), a)

    def test_lambda_zero_identity(self):
        a, b = make_one_hot(0, 3), make_one_hot(2, 3)
        assert np.array_equal(blend_labels(0.0, a, b), b)

    def test_symmetric_blend(self):
        out = blend_labels(0.5, make_one_hot(0, 2), make_one_hot(1, 2))
        assert out.tolist() == [0.5, 0.5]

    def test_equal_one_hot_invariance(self):
        y = make_one_hot(3, 7)
        for lam in (0.0, 0.1, 0.3, 0.5, 0.77, 1.0):
            assert np.array_equal(blend_labels(lam, y, y), y)

    def test_errors(self):
        with pytest.raises(ArgumentError):
            blend_labels(0.5, make_one_hot(0, 2), make_one_hot(0, 3))
        with pytest.raises(ArgumentError):
            blend_labels(1.5, make_one_hot(0, 2), make_one_hot(0, 2))

    @given(st.floats(min_value=0, max_value=1), st.integers(min_value=0, max_value=4),
           st.integers(min_value=0, max_value=4))
    def test_simplex_preserved(self, lam, i, j):
        out = blend_labels(lam, make_one_hot(i, 5), make_one_hot(j, 5))
        assert np.all(out >= 0.0)
        assert abs(out.sum() - 1.0) <= 1e-12


class TestRngStream:
    def test_identical_keys_identical_sequences(self):
        a = RngStream(123, 45).gen(1, 2).random(100)
        b = RngStream(123, 45).gen(1, 2).random(100)
        assert np.array_equal(a, b)

    def test_key_separation(self):
        base = RngStream(123, 45).gen(1).random(8)
        assert not np.array_equal(base, RngStream(123, 46).gen(1).random(8))
        assert not np.array_equal(base, RngStream(124, 45).gen(1).random(8))
        assert not np.array_equal(base, RngStream(123, 45).gen(2).random(8))

    def test_thread_schedule_independence(self):
        sequential = [RngStream(9, i).gen(0).random(64) for i in range(16)]
        results = [None] * 16

        def worker(i):
            results[i] = RngStream(9, i).gen(0).random(64)

        threads = [threading.Thread(target=worker, args=(i,)) for i in range(16)]
        for t in reversed(threads):
            t.start()
        for t in threads:
            t.join()
        for a, b in zip(sequential, results):
            assert np.array_equal(a, b)

    def test_key_validation(self):
        with pytest.raises(ArgumentError):
            RngStream(-1, 0)
        with pytest.raises(ArgumentError):
            RngStream(0, 2**64)


class TestValidators:
    def test_image(self):
        validate_image(np.zeros((4, 4, 3)))
        with pytest.raises(ArgumentError):
            validate_image(np.zeros((4, 4, 2)))
        with pytest.raises(ArgumentError):
            validate_image(np.full((4, 4, 3), 1.5))

    def test_mask(self):
        validate_mask(np.zeros((4, 4)))
        with pytest.raises(ArgumentError):
            validate_mask(np.zeros((4, 4, 1)))
        with pytest.raises(ArgumentError):
            validate_mask(np.full((4, 4), -0.1))

    def test_label(self):
        validate_label(np.array([0.25, 0.75]))
        with pytest.raises(ArgumentError):
            validate_label(np.array([0.5, 0.6]))
        with pytest.raises(ArgumentError):
            validate_label(np.array([-0.1, 1.1]))
