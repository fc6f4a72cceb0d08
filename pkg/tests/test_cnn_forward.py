import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

import naive_cnn
from signstream import DEFAULT_ARCHITECTURE, Architecture, ConvSpec, GestureNet
from signstream.cnn.model import log_softmax, parameter_shapes, softmax

SMALL = Architecture(conv=(ConvSpec(4, pool=True), ConvSpec(4)), hidden=8)


def randomized_model(arch, seed, dtype=np.float64):
    """Seeded model with non-zero biases so every term participates."""
    model = GestureNet(arch, seed=seed, dtype=dtype)
    rng = np.random.default_rng(seed + 500)
    for name, p in model.params.items():
        if name.endswith("_b"):
            p[:] = rng.uniform(-0.2, 0.2, p.shape)
    return model


def conv_pools(arch):
    return [spec.pool for spec in arch.conv]


class TestSoftmax:
    @given(arrays(np.float64, (5,), elements=st.floats(-1e6, 1e6)))
    def test_distribution(self, logits):
        p = softmax(logits)
        assert np.all(p >= 0)
        assert abs(p.sum() - 1.0) < 1e-6

    @given(
        arrays(np.float64, (5,), elements=st.floats(-100, 100)),
        st.floats(-1e5, 1e5),
    )
    def test_shift_invariance(self, logits, shift):
        assert np.allclose(softmax(logits), softmax(logits + shift), atol=1e-12)

    def test_extreme_logits_stay_finite(self):
        for logits in ([1000.0, -1000.0, 0.0], [-1e308, 0.0, 1e308], [1e308] * 3):
            p = softmax(np.array(logits))
            assert np.all(np.isfinite(p))
            assert abs(p.sum() - 1.0) < 1e-9
            lp = log_softmax(np.array(logits))
            assert np.all(lp <= 0)

    def test_rowwise_on_batches(self):
        rng = np.random.default_rng(0)
        batch = rng.normal(size=(7, 11))
        p = softmax(batch)
        for i in range(7):
            assert np.allclose(p[i], softmax(batch[i]))


class TestNaiveEquivalence:
    def test_small_architecture(self, rng):
        model = randomized_model(SMALL, seed=1)
        pools = conv_pools(SMALL)
        for _ in range(20):
            x = rng.uniform(0, 255, SMALL.input_shape)
            got = model.forward(x)
            want = naive_cnn.forward_logits(x, model.params, pools)
            assert np.max(np.abs(got - want)) < 1e-5

    def test_default_architecture(self, rng):
        model = randomized_model(DEFAULT_ARCHITECTURE, seed=2)
        pools = conv_pools(DEFAULT_ARCHITECTURE)
        for _ in range(4):
            x = rng.uniform(0, 255, DEFAULT_ARCHITECTURE.input_shape)
            got = model.forward(x)
            want = naive_cnn.forward_logits(x, model.params, pools)
            assert np.max(np.abs(got - want)) < 1e-5

    def test_pool_tie_handling_matches(self):
        # Constant input plus constant kernels force pooling ties everywhere;
        # both implementations must pick the same (first) cell.
        model = randomized_model(SMALL, seed=3)
        x = np.full(SMALL.input_shape, 100.0)
        want = naive_cnn.forward_logits(x, model.params, conv_pools(SMALL))
        assert np.allclose(model.forward(x), want, atol=1e-8)


class TestForwardApi:
    def test_single_and_batch_agree(self, rng):
        model = randomized_model(SMALL, seed=4)
        x = rng.uniform(0, 255, (3, *SMALL.input_shape))
        batch_logits = model.forward(x)
        assert batch_logits.shape == (3, SMALL.classes)
        for i in range(3):
            # BLAS blocking may differ between batch sizes; allow rounding.
            assert np.allclose(model.forward(x[i]), batch_logits[i], atol=1e-9)

    def test_predict_is_argmax_of_proba(self, rng):
        model = randomized_model(SMALL, seed=5)
        x = rng.uniform(0, 255, (6, *SMALL.input_shape))
        p = model.predict_proba(x)
        labels = model.predict(x)
        assert np.array_equal(labels, p.argmax(axis=1))
        single = model.predict(x[0])
        assert isinstance(single, int)
        assert single == labels[0]

    def test_bad_input_shape_rejected(self):
        model = GestureNet(SMALL, seed=0)
        with pytest.raises(ValueError):
            model.forward(np.zeros((21, 90)))
        with pytest.raises(ValueError):
            model.forward(np.zeros((0, 90, 21)))

    def test_product_dtype_is_float32(self):
        model = GestureNet(SMALL, seed=0)
        logits = model.forward(np.zeros(SMALL.input_shape))
        assert logits.dtype == np.float32
        # Probabilities are always float64 regardless of the model dtype.
        assert model.predict_proba(np.zeros(SMALL.input_shape)).dtype == np.float64


class TestShapeAudit:
    def test_default_intermediate_shapes(self):
        # Independent arithmetic: 90x21 -> conv3x3 88x19 -> pool 44x9
        # -> conv3x3 42x7 -> conv3x3 40x5; flat 40*5*64 = 12800.
        assert DEFAULT_ARCHITECTURE.feature_shapes() == [
            (44, 9, 33),
            (42, 7, 64),
            (40, 5, 64),
        ]
        assert DEFAULT_ARCHITECTURE.flat_size == 12800

        model = GestureNet(seed=0)
        batch, _ = model._as_batch(np.zeros((2, 90, 21)))
        logits, cache, dense = model._forward_full(batch)
        assert cache[0]["pre"].shape == (2, 88, 19, 33)
        assert cache[1]["pre"].shape == (2, 42, 7, 64)
        assert cache[2]["pre"].shape == (2, 40, 5, 64)
        assert dense["flat"].shape == (2, 12800)
        assert dense["hidden_act"].shape == (2, 64)
        assert logits.shape == (2, 11)

    def test_parameter_count(self):
        # 33*(9+1) + 64*(297+1) + 64*(576+1) + 64*(12800+1) + 11*(64+1)
        assert DEFAULT_ARCHITECTURE.parameter_count() == 876_309
        model = GestureNet(seed=0)
        assert model.parameter_count() == 876_309
        shapes = parameter_shapes(DEFAULT_ARCHITECTURE)
        assert sum(math.prod(s) for s in shapes.values()) == 876_309

    def test_impossible_architectures_rejected(self):
        with pytest.raises(ValueError):
            Architecture(input_shape=(4, 4), conv=(ConvSpec(2, kernel=5),))
        with pytest.raises(ValueError):
            Architecture(input_shape=(3, 3), conv=(ConvSpec(2, pool=True),))


class TestLoss:
    def test_zero_weights_give_uniform_loss(self):
        shapes = parameter_shapes(SMALL)
        zeros = {n: np.zeros(s) for n, s in shapes.items()}
        model = GestureNet.from_params(SMALL, zeros)
        x = np.random.default_rng(0).uniform(0, 255, (4, *SMALL.input_shape))
        assert abs(model.loss(x, [0, 3, 7, 10]) - math.log(11)) < 1e-12
        assert np.allclose(model.predict_proba(x), 1.0 / 11)

    def test_loss_matches_probability_recomputation(self, rng):
        # Mean -log p[label] recomputed from predict_proba, plus the L1 term.
        # Inputs stay order-one: with untrained weights, 0..255 inputs push
        # logit spreads past 700 and the probabilities underflow to zero,
        # which only the log-softmax path survives.
        model = randomized_model(SMALL, seed=6, dtype=np.float32)
        lam = 1e-4
        for _ in range(50):
            x = rng.uniform(0, 2, (4, *SMALL.input_shape))
            y = rng.integers(0, 11, 4)
            p = model.predict_proba(x)
            recomputed = -np.log(p[np.arange(4), y]).mean() + model.regularization_term(lam)
            assert abs(model.loss(x, y, lam) - recomputed) < 1e-7

    def test_loss_matches_naive_reference(self, rng):
        model = randomized_model(SMALL, seed=7)
        lam = 1e-4
        x = rng.uniform(0, 2, (3, *SMALL.input_shape))
        y = [1, 5, 9]
        want = naive_cnn.cross_entropy_with_l1(
            list(x), y, model.params, conv_pools(SMALL), lam, list(model.l1_param_names())
        )
        assert abs(model.loss(x, y, lam) - want) < 1e-9

    def test_l1_term_never_decreases_with_lambda(self, rng):
        model = randomized_model(SMALL, seed=8)
        lambdas = [0.0, 1e-6, 1e-4, 1e-2, 1.0]
        terms = [model.regularization_term(lam) for lam in lambdas]
        assert terms == sorted(terms)
        assert terms[0] == 0.0

    def test_l1_covers_late_conv_kernels_and_hidden_only(self):
        model = GestureNet(seed=0)
        assert model.l1_param_names() == ("conv1_w", "conv2_w", "hidden_w")
        small = GestureNet(SMALL, seed=0)
        assert small.l1_param_names() == ("conv1_w", "hidden_w")


class TestFromParams:
    def test_round_trip(self):
        model = randomized_model(SMALL, seed=9)
        clone = GestureNet.from_params(SMALL, model.params, dtype=np.float64)
        x = np.random.default_rng(1).uniform(0, 255, SMALL.input_shape)
        assert np.array_equal(clone.forward(x), model.forward(x))

    def test_name_and_shape_validation(self):
        shapes = parameter_shapes(SMALL)
        params = {n: np.zeros(s) for n, s in shapes.items()}
        missing = dict(params)
        missing.pop("out_b")
        with pytest.raises(ValueError):
            GestureNet.from_params(SMALL, missing)
        bad = dict(params)
        bad["out_b"] = np.zeros(12)
        with pytest.raises(ValueError):
            GestureNet.from_params(SMALL, bad)
