import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from statviz import crf
from statviz.crf import (
    LABELS,
    N_LABELS,
    START_MASK,
    TRANS_MASK,
    TaggerModel,
    corpus_objective,
    decode,
    forward_backward,
    is_valid_iob,
    marginals,
    sequence_log_likelihood,
    train_model,
)
from statviz.errors import CorpusEmpty, DimensionMismatch
from statviz.features import FeatureConfig

from .oracles import (
    brute_force_decode,
    brute_force_log_partition,
    brute_force_marginals,
)

CONFIG = FeatureConfig(embedding_dim=3)  # small width keeps these tests quick


def random_model(rng, kernel_count=4, kernel_width=3):
    model = TaggerModel(CONFIG, kernel_width, kernel_count, rng=rng)
    model.trans = rng.normal(0.0, 1.0, (N_LABELS, N_LABELS))
    model.conv_b = rng.normal(0.0, 0.5, kernel_count)
    return model


def random_features(rng, t):
    return rng.normal(0.0, 1.0, (t, CONFIG.width))


def masked_trans(model):
    return model.trans + TRANS_MASK


def test_start_and_transition_masks():
    assert np.isneginf(START_MASK[LABELS.index("I-M")])
    assert np.isfinite(START_MASK[LABELS.index("B-M")])
    assert np.isfinite(TRANS_MASK[LABELS.index("B-N"), LABELS.index("I-N")])
    assert np.isneginf(TRANS_MASK[LABELS.index("O"), LABELS.index("I-N")])
    assert np.isneginf(TRANS_MASK[LABELS.index("B-M"), LABELS.index("I-N")])


@pytest.mark.parametrize("t", [1, 2, 3, 4, 5, 6])
def test_viterbi_matches_brute_force(t):
    rng = np.random.default_rng(100 + t)
    for _ in range(20):
        model = random_model(rng)
        x = random_features(rng, t)
        emissions = model.emissions(x)
        got = decode(model, x)
        want_labels, want_score = brute_force_decode(emissions, masked_trans(model))
        assert got.labels == want_labels
        logz = brute_force_log_partition(emissions, masked_trans(model))
        assert got.score == pytest.approx(want_score - logz, abs=1e-9)


@pytest.mark.parametrize("t", [1, 2, 3, 5, 6])
def test_log_partition_matches_brute_force(t):
    rng = np.random.default_rng(200 + t)
    for _ in range(10):
        model = random_model(rng)
        emissions = model.emissions(random_features(rng, t))
        _, _, log_z, _ = forward_backward(model, emissions)
        assert log_z == pytest.approx(
            brute_force_log_partition(emissions, masked_trans(model)), abs=1e-6
        )


@pytest.mark.parametrize("t", [1, 2, 4, 6])
def test_marginals_match_brute_force(t):
    rng = np.random.default_rng(300 + t)
    for _ in range(10):
        model = random_model(rng)
        x = random_features(rng, t)
        got = marginals(model, x)
        want = brute_force_marginals(model.emissions(x), masked_trans(model))
        assert np.abs(got - want).max() < 1e-6
        assert np.allclose(got.sum(axis=1), 1.0, atol=1e-9)


def test_zero_weights_single_token_tiebreak():
    model = TaggerModel(CONFIG)  # all-zero parameters
    x = np.zeros((1, CONFIG.width))
    assert decode(model, x).labels == ("B-M",)  # lowest enum index among valid starts
    marg = marginals(model, x)[0]
    valid = np.isfinite(START_MASK)
    assert np.allclose(marg[valid], 1.0 / valid.sum())
    assert np.allclose(marg[~valid], 0.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_decode_always_valid_iob(t, seed):
    rng = np.random.default_rng(seed)
    model = random_model(rng)
    model.trans = rng.normal(0.0, 5.0, (N_LABELS, N_LABELS))
    got = decode(model, random_features(rng, t))
    assert is_valid_iob(got.labels)


def test_dimension_mismatch():
    model = TaggerModel(CONFIG)
    with pytest.raises(DimensionMismatch):
        decode(model, np.zeros((3, CONFIG.width + 1)))
    with pytest.raises(DimensionMismatch):
        marginals(model, np.zeros((3, 2)))


def micro_corpus(rng, n_sentences=3, max_t=5):
    xs, ys = [], []
    for _ in range(n_sentences):
        t = int(rng.integers(2, max_t + 1))
        xs.append(random_features(rng, t))
        labels = [int(rng.choice(np.flatnonzero(np.isfinite(START_MASK))))]
        for _ in range(t - 1):
            allowed = np.flatnonzero(np.isfinite(TRANS_MASK[labels[-1]]))
            labels.append(int(rng.choice(allowed)))
        ys.append(np.array(labels, dtype=np.intp))
    return xs, ys


def test_gradients_match_finite_differences():
    rng = np.random.default_rng(7)
    model = random_model(rng)
    xs, ys = micro_corpus(rng)
    l2 = 1e-3
    _, grads = corpus_objective(model, xs, ys, l2)

    h = 1e-5
    for name, param in model.param_groups().items():
        flat = param.reshape(-1)
        g_flat = grads[name].reshape(-1)
        idx = rng.choice(flat.size, size=min(40, flat.size), replace=False)
        for i in idx:
            orig = flat[i]
            flat[i] = orig + h
            up, _ = corpus_objective(model, xs, ys, l2)
            flat[i] = orig - h
            down, _ = corpus_objective(model, xs, ys, l2)
            flat[i] = orig
            fd = (up - down) / (2 * h)
            denom = max(abs(fd), abs(g_flat[i]), 1e-8)
            assert abs(fd - g_flat[i]) / denom < 1e-4, f"{name}[{i}]: fd={fd} analytic={g_flat[i]}"


def test_gold_likelihood_is_log_probability():
    rng = np.random.default_rng(11)
    model = random_model(rng)
    x = random_features(rng, 4)
    y = np.array([LABELS.index(l) for l in ("B-N", "I-N", "O", "B-W")], dtype=np.intp)
    ll, _ = sequence_log_likelihood(model, x, y)
    emissions = model.emissions(x)
    seq_score = emissions[np.arange(4), y].sum() + masked_trans(model)[y[:-1], y[1:]].sum()
    logz = brute_force_log_partition(emissions, masked_trans(model))
    assert ll == pytest.approx(float(seq_score - logz), abs=1e-9)
    assert ll <= 0.0


def test_training_improves_loss_and_is_deterministic(tmp_path):
    rng = np.random.default_rng(3)
    xs, ys = micro_corpus(rng, n_sentences=6)
    model_a, report_a = train_model(xs, ys, CONFIG, kernel_count=4, max_epochs=10, seed=42)
    assert report_a.losses[1] < report_a.losses[0]
    assert all(b <= a + 1e-12 for a, b in zip(report_a.losses, report_a.losses[1:]))

    model_b, _ = train_model(xs, ys, CONFIG, kernel_count=4, max_epochs=10, seed=42)
    pa = model_a.param_groups()
    pb = model_b.param_groups()
    for k in pa:
        assert np.array_equal(pa[k], pb[k])

    fa, fb = tmp_path / "a.model", tmp_path / "b.model"
    model_a.save(fa)
    model_b.save(fb)
    assert fa.read_bytes() == fb.read_bytes()


def test_train_empty_corpus():
    with pytest.raises(CorpusEmpty):
        train_model([], [], CONFIG)


def test_save_load_bit_identical_decode(tmp_path):
    rng = np.random.default_rng(5)
    model = random_model(rng)
    path = tmp_path / "m.model"
    model.save(path)
    loaded = TaggerModel.load(path)
    for k, v in model.param_groups().items():
        assert np.array_equal(v, loaded.param_groups()[k])
    x = random_features(rng, 6)
    a, b = decode(model, x), decode(loaded, x)
    assert a.labels == b.labels
    assert a.score == b.score  # bit-identical, not approx
