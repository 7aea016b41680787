"""Convolution + linear-chain CRF tagger.

A single 1-D convolution (identity activation) turns the per-token
feature matrix into kernel activations; a linear map turns those into
per-label emission scores; a transition matrix couples neighboring
labels. Invalid IOB transitions (and I-* starts) carry -inf score, so
every decoded sequence is valid IOB by construction.

All inference runs in log space. Gradients of the regularized
conditional log-likelihood are exact and are checked against finite
differences in the test suite.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CorpusEmpty, DimensionMismatch, NonFiniteLoss
from .features import FeatureConfig, FeatureMatrix

LABELS = ("B-M", "I-M", "B-N", "I-N", "B-P", "I-P", "B-W", "I-W", "O")
LABEL_INDEX = {lab: i for i, lab in enumerate(LABELS)}
N_LABELS = len(LABELS)

MODEL_MAGIC = "statviz-tagger v1"


def _iob_masks() -> tuple[np.ndarray, np.ndarray]:
    """(start_mask, transition_mask): 0 where allowed, -inf where invalid IOB."""
    start = np.zeros(N_LABELS)
    trans = np.zeros((N_LABELS, N_LABELS))
    for j, lab in enumerate(LABELS):
        if lab.startswith("I-"):
            start[j] = -np.inf
            ent = lab[2:]
            for i, prev in enumerate(LABELS):
                if prev not in (f"B-{ent}", f"I-{ent}"):
                    trans[i, j] = -np.inf
    return start, trans


START_MASK, TRANS_MASK = _iob_masks()


def is_valid_iob(labels: list[str] | tuple[str, ...]) -> bool:
    prev = None
    for lab in labels:
        if lab.startswith("I-"):
            ent = lab[2:]
            if prev not in (f"B-{ent}", f"I-{ent}"):
                return False
        prev = lab
    return True


@dataclass(frozen=True)
class TagSequence:
    labels: tuple[str, ...]
    score: float  # log-probability of this sequence under the model
    marginals: np.ndarray | None = None  # (tokens, labels), rows sum to 1

    def __len__(self) -> int:
        return len(self.labels)


class TaggerModel:
    """Conv kernel bank + CRF emission/transition weights."""

    def __init__(
        self,
        config: FeatureConfig,
        kernel_width: int = 3,
        kernel_count: int = 32,
        rng: np.random.Generator | None = None,
    ):
        if kernel_count <= 0:
            raise ValueError("kernel_count must be positive")
        if kernel_width % 2 != 1:
            raise ValueError("kernel_width must be odd (same-padding conv)")
        self.config = config
        self.kernel_width = kernel_width
        self.kernel_count = kernel_count
        n = config.width
        if rng is None:
            self.conv_w = np.zeros((kernel_count, kernel_width, n))
            self.emit = np.zeros((kernel_count, N_LABELS))
        else:
            self.conv_w = rng.normal(0.0, 1.0 / np.sqrt(kernel_width * n), (kernel_count, kernel_width, n))
            self.emit = rng.normal(0.0, 0.1, (kernel_count, N_LABELS))
        self.conv_b = np.zeros(kernel_count)
        self.trans = np.zeros((N_LABELS, N_LABELS))

    # -- parameter plumbing ------------------------------------------------

    def param_groups(self) -> dict[str, np.ndarray]:
        return {"conv_w": self.conv_w, "conv_b": self.conv_b, "emit": self.emit, "trans": self.trans}

    def copy_params(self) -> dict[str, np.ndarray]:
        return {k: v.copy() for k, v in self.param_groups().items()}

    def set_params(self, params: dict[str, np.ndarray]) -> None:
        self.conv_w = params["conv_w"].copy()
        self.conv_b = params["conv_b"].copy()
        self.emit = params["emit"].copy()
        self.trans = params["trans"].copy()

    # -- forward pieces ----------------------------------------------------

    def _check_width(self, x: np.ndarray) -> None:
        if x.ndim != 2 or x.shape[1] != self.config.width:
            raise DimensionMismatch(
                f"feature width {x.shape[1] if x.ndim == 2 else '?'} != model width {self.config.width}"
            )

    def conv_forward(self, x: np.ndarray) -> np.ndarray:
        """(T, n) -> (T, m) with zero same-padding."""
        t = x.shape[0]
        pad = self.kernel_width // 2
        xp = np.zeros((t + 2 * pad, x.shape[1]))
        xp[pad : pad + t] = x
        h = np.tile(self.conv_b, (t, 1))
        for d in range(self.kernel_width):
            h += xp[d : d + t] @ self.conv_w[:, d, :].T
        return h

    def emissions(self, features: FeatureMatrix | np.ndarray) -> np.ndarray:
        x = features.values if isinstance(features, FeatureMatrix) else features
        self._check_width(x)
        return self.conv_forward(x) @ self.emit

    # -- persistence ---------------------------------------------------------

    def save(self, path: str | Path) -> None:
        path = Path(path)
        header = {
            "config": self.config.to_dict(),
            "labels": list(LABELS),
            "kernel_width": self.kernel_width,
            "kernel_count": self.kernel_count,
            "feature_width": self.config.width,
        }
        with path.open("w", encoding="utf-8") as fh:
            fh.write(MODEL_MAGIC + "\n")
            fh.write(json.dumps(header, sort_keys=True) + "\n")
            for name, arr in self.param_groups().items():
                flat = arr.reshape(-1)
                fh.write(f"{name} {' '.join(str(v.hex()) for v in map(float, flat))}\n")

    @classmethod
    def load(cls, path: str | Path) -> "TaggerModel":
        path = Path(path)
        with path.open(encoding="utf-8") as fh:
            magic = fh.readline().strip()
            if magic != MODEL_MAGIC:
                raise ValueError(f"{path}: not a tagger model file (got {magic!r})")
            header = json.loads(fh.readline())
            if tuple(header["labels"]) != LABELS:
                raise ValueError(f"{path}: label set mismatch")
            model = cls(
                FeatureConfig.from_dict(header["config"]),
                kernel_width=header["kernel_width"],
                kernel_count=header["kernel_count"],
            )
            shapes = {k: v.shape for k, v in model.param_groups().items()}
            params = {}
            for line in fh:
                name, _, rest = line.partition(" ")
                values = np.array([float.fromhex(v) for v in rest.split()])
                params[name] = values.reshape(shapes[name])
            model.set_params(params)
        return model


# -- inference ---------------------------------------------------------------


def _logsumexp(a: np.ndarray, axis: int) -> np.ndarray:
    m = np.max(a, axis=axis, keepdims=True)
    m_safe = np.where(np.isfinite(m), m, 0.0)
    out = np.log(np.sum(np.exp(a - m_safe), axis=axis)) + np.squeeze(m_safe, axis=axis)
    return np.where(np.isfinite(np.squeeze(m, axis=axis)), out, -np.inf)


def _scored_transitions(model: TaggerModel) -> np.ndarray:
    return model.trans + TRANS_MASK


def forward_backward(model: TaggerModel, emissions: np.ndarray):
    """Log alpha/beta tables, log-partition, and per-position marginals."""
    t, n_lab = emissions.shape
    trans = _scored_transitions(model)
    alpha = np.full((t, n_lab), -np.inf)
    alpha[0] = emissions[0] + START_MASK
    for i in range(1, t):
        alpha[i] = _logsumexp(alpha[i - 1][:, None] + trans, axis=0) + emissions[i]
    beta = np.zeros((t, n_lab))
    for i in range(t - 2, -1, -1):
        beta[i] = _logsumexp(trans + emissions[i + 1][None, :] + beta[i + 1][None, :], axis=1)
    log_z = float(_logsumexp(alpha[-1][None, :], axis=1)[0])
    marg = np.exp(alpha + beta - log_z)
    marg /= marg.sum(axis=1, keepdims=True)  # squeeze residual fp error
    return alpha, beta, log_z, marg


def decode(model: TaggerModel, features: FeatureMatrix | np.ndarray) -> TagSequence:
    """Exact argmax label sequence (Viterbi); ties go to the lowest label index."""
    emissions = model.emissions(features)
    t = emissions.shape[0]
    trans = _scored_transitions(model)
    v = emissions[0] + START_MASK
    back = np.zeros((t, N_LABELS), dtype=np.intp)
    for i in range(1, t):
        scores = v[:, None] + trans
        back[i] = np.argmax(scores, axis=0)
        v = scores[back[i], np.arange(N_LABELS)] + emissions[i]
    best_last = int(np.argmax(v))
    path = [best_last]
    for i in range(t - 1, 0, -1):
        path.append(int(back[i][path[-1]]))
    path.reverse()
    _, _, log_z, _ = forward_backward(model, emissions)
    return TagSequence(
        labels=tuple(LABELS[j] for j in path),
        score=float(v[best_last]) - log_z,
    )


def marginals(model: TaggerModel, features: FeatureMatrix | np.ndarray) -> np.ndarray:
    """Per-position label distributions; each row sums to 1."""
    emissions = model.emissions(features)
    _, _, _, marg = forward_backward(model, emissions)
    return marg


def tag(model: TaggerModel, features: FeatureMatrix | np.ndarray, with_marginals: bool = False) -> TagSequence:
    seq = decode(model, features)
    if with_marginals:
        seq = TagSequence(seq.labels, seq.score, marginals(model, features))
    return seq


# -- learning ------------------------------------------------------------------


def sequence_log_likelihood(model: TaggerModel, x: np.ndarray, y: np.ndarray):
    """log P(y | x) and gradients w.r.t. every parameter group."""
    t = x.shape[0]
    pad = model.kernel_width // 2
    xp = np.zeros((t + 2 * pad, x.shape[1]))
    xp[pad : pad + t] = x
    h = model.conv_forward(x)
    emissions = h @ model.emit

    trans = _scored_transitions(model)
    alpha, beta, log_z, marg = forward_backward(model, emissions)

    gold = emissions[np.arange(t), y].sum() + START_MASK[y[0]]
    if t > 1:
        gold += trans[y[:-1], y[1:]].sum()
    ll = float(gold - log_z)

    # d ll / d emissions = onehot(gold) - marginals
    d_s = -marg
    d_s[np.arange(t), y] += 1.0

    d_trans = np.zeros_like(model.trans)
    if t > 1:
        pair = np.exp(
            alpha[:-1, :, None] + trans[None, :, :] + emissions[1:, None, :] + beta[1:, None, :] - log_z
        )
        d_trans -= pair.sum(axis=0)
        np.add.at(d_trans, (y[:-1], y[1:]), 1.0)

    d_emit = h.T @ d_s
    d_h = d_s @ model.emit.T
    d_b = d_h.sum(axis=0)
    d_w = np.zeros_like(model.conv_w)
    for d in range(model.kernel_width):
        d_w[:, d, :] = d_h.T @ xp[d : d + t]

    return ll, {"conv_w": d_w, "conv_b": d_b, "emit": d_emit, "trans": d_trans}


def corpus_objective(model: TaggerModel, xs: list[np.ndarray], ys: list[np.ndarray], l2: float):
    """Regularized mean log-likelihood and its gradient (fixed summation order)."""
    total = 0.0
    grads = {k: np.zeros_like(v) for k, v in model.param_groups().items()}
    for x, y in zip(xs, ys):
        ll, g = sequence_log_likelihood(model, x, y)
        total += ll
        for k in grads:
            grads[k] += g[k]
    n = len(xs)
    total /= n
    for k in grads:
        grads[k] /= n
    for k, p in model.param_groups().items():
        total -= 0.5 * l2 * float(np.sum(p * p))
        grads[k] -= l2 * p
    return total, grads


@dataclass
class TrainReport:
    losses: list[float]  # negative objective per accepted epoch
    heldout_f1: list[tuple[int, float]]  # (epoch, mean entity F1) when evaluated
    epochs_run: int
    stopped_early: bool


def train_model(
    xs: list[np.ndarray],
    ys: list[np.ndarray],
    config: FeatureConfig,
    kernel_width: int = 3,
    kernel_count: int = 32,
    l2: float = 1e-3,
    step: float = 0.5,
    max_epochs: int = 200,
    seed: int = 0,
    heldout_scorer=None,
    eval_every: int = 10,
    patience: int = 4,
) -> tuple[TaggerModel, TrainReport]:
    """Gradient ascent on the regularized conditional log-likelihood.

    The step is fixed, except that an epoch whose update worsens the
    objective is rolled back and retried with a halved step (so the loss
    history is monotone). Optional early stop when ``heldout_scorer``
    (model -> mean entity F1) stops improving.
    """
    if not xs:
        raise CorpusEmpty("no training sentences")
    rng = np.random.default_rng(seed)
    model = TaggerModel(config, kernel_width, kernel_count, rng=rng)

    objective, grads = corpus_objective(model, xs, ys, l2)
    if not np.isfinite(objective):
        raise NonFiniteLoss(f"objective at init is {objective}")
    losses = [-objective]
    f1_history: list[tuple[int, float]] = []
    best_f1, best_params, since_best = -1.0, model.copy_params(), 0
    stopped = False

    epoch = 0
    for epoch in range(1, max_epochs + 1):
        previous = model.copy_params()
        while True:
            for k, p in model.param_groups().items():
                p += step * grads[k]
            new_obj, new_grads = corpus_objective(model, xs, ys, l2)
            if not np.isfinite(new_obj):
                raise NonFiniteLoss(f"objective became {new_obj} at epoch {epoch}")
            if new_obj >= objective or step < 1e-12:
                objective, grads = new_obj, new_grads
                break
            model.set_params(previous)
            step *= 0.5
        losses.append(-objective)

        if heldout_scorer is not None and epoch % eval_every == 0:
            f1 = heldout_scorer(model)
            f1_history.append((epoch, f1))
            if f1 > best_f1 + 1e-9:
                best_f1, best_params, since_best = f1, model.copy_params(), 0
            else:
                since_best += 1
                if since_best >= patience:
                    model.set_params(best_params)
                    stopped = True
                    break

    if heldout_scorer is not None and not stopped and best_f1 >= 0 and f1_history:
        if f1_history[-1][1] < best_f1:
            model.set_params(best_params)
    return model, TrainReport(losses, f1_history, epoch, stopped)
