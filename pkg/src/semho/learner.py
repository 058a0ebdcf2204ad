"""Desk-scale classifier: featurized scenarios into 41 logits.

The featurizer and classifier follow the scikit-learn estimator API
(fit/transform/predict, get_params) so they compose with pipelines and
model-selection tooling.  The network is a hand-rolled one-hidden-layer
rectifier MLP trained with mini-batch SGD + momentum (decoupled-style L2
on the weight matrices) on binary cross-entropy with logits, mean-reduced
over batch and labels; analytic gradients are verified against central
finite differences (:func:`gradient_check`).

Input encoding: 21 z-scored base features plus a thermometer expansion
(one indicator per integer step of each measurement-valued dimension over
its legal range).  The expansion plays the role subword digit tokenization
plays for a text model: it exposes integer-level granularity, which is
what makes sharp threshold rules learnable at this scale.  The grid is
uniform and range-derived, so it carries no knowledge of the labeling
rules themselves.
"""

from __future__ import annotations

import json
import struct
from typing import IO, Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import metrics as metrics_mod
from .errors import DivergenceError, ModelFormatError
from .labels import canonical_schema
from .postprocess import decide_matrix, sigmoid
from .scenario import (
    BUFFER_LEGAL,
    CQI_LEGAL,
    MISSIONS,
    RSRP_LEGAL,
    RSRQ_LEGAL,
    SPEED_LEGAL,
    Scenario,
)

FEATURE_NAMES = (
    "speed",
    "buffer",
    "serving_rsrp",
    "serving_rsrq",
    "serving_cqi",
    "target_rsrp",
    "target_rsrq",
    "target_cqi",
    "neighbor_rsrp",
    "neighbor_rsrq",
    "neighbor_cqi",
    "d_rsrp_target_serving",
    "d_rsrp_neighbor_serving",
    "d_rsrp_neighbor_target",
    "d_rsrq_target_serving",
    "d_rsrq_neighbor_serving",
    "d_rsrq_neighbor_target",
    "d_cqi_target_serving",
    "mission_low_latency",
    "mission_standard",
    "mission_high_throughput",
)
N_FEATURES = len(FEATURE_NAMES)
_NUMERIC = slice(0, 18)  # mission one-hot dims are never scaled


def raw_features(s: Scenario) -> np.ndarray:
    """Unscaled 21-entry feature vector for one scenario."""
    sv, tg, nb = s.serving, s.target, s.neighbor
    mission = [0.0, 0.0, 0.0]
    mission[MISSIONS.index(s.mission)] = 1.0
    return np.array(
        [
            s.speed,
            s.buffer,
            sv.rsrp,
            sv.rsrq,
            sv.cqi,
            tg.rsrp,
            tg.rsrq,
            tg.cqi,
            nb.rsrp,
            nb.rsrq,
            nb.cqi,
            tg.rsrp - sv.rsrp,
            nb.rsrp - sv.rsrp,
            nb.rsrp - tg.rsrp,
            tg.rsrq - sv.rsrq,
            nb.rsrq - sv.rsrq,
            nb.rsrq - tg.rsrq,
            tg.cqi - sv.cqi,
            *mission,
        ],
        dtype=np.float64,
    )


def _grid(lo: float, hi: float) -> np.ndarray:
    return np.arange(lo, hi + 0.5, 1.0)


def _delta_grid(lo: float, hi: float) -> np.ndarray:
    return _grid(lo - hi, hi - lo)


# per-feature integer thresholds (None: one-hot dims pass through unexpanded)
THERMOMETER_GRIDS: tuple = (
    _grid(*SPEED_LEGAL),
    _grid(*BUFFER_LEGAL),
    _grid(*RSRP_LEGAL),
    _grid(*RSRQ_LEGAL),
    _grid(*CQI_LEGAL),
    _grid(*RSRP_LEGAL),
    _grid(*RSRQ_LEGAL),
    _grid(*CQI_LEGAL),
    _grid(*RSRP_LEGAL),
    _grid(*RSRQ_LEGAL),
    _grid(*CQI_LEGAL),
    _delta_grid(*RSRP_LEGAL),
    _delta_grid(*RSRP_LEGAL),
    _delta_grid(*RSRP_LEGAL),
    _delta_grid(*RSRQ_LEGAL),
    _delta_grid(*RSRQ_LEGAL),
    _delta_grid(*RSRQ_LEGAL),
    _delta_grid(*CQI_LEGAL),
    None,
    None,
    None,
)
N_THERMOMETER = sum(len(g) for g in THERMOMETER_GRIDS if g is not None)


def thermometer_bits(raw: np.ndarray) -> np.ndarray:
    """Expand raw feature rows into per-integer-threshold indicators."""
    cols = [
        (raw[:, j : j + 1] >= grid[None, :]).astype(np.float64)
        for j, grid in enumerate(THERMOMETER_GRIDS)
        if grid is not None
    ]
    return np.hstack(cols)


class ScenarioFeaturizer(TransformerMixin, BaseEstimator):
    """Z-scores the numeric dims with statistics from the training split.

    One-hot mission dims pass through unscaled; a zero-variance numeric
    dim is scaled by 1 instead of 0 and recorded in ``constant_features_``.
    With ``expanded=True`` (the training default) the thermometer bits are
    appended after the 21 base features.
    """

    def __init__(self, expanded: bool = True):
        self.expanded = expanded

    def fit(self, X: Sequence[Scenario], y=None):
        raw = np.stack([raw_features(s) for s in X])
        mean = np.zeros(N_FEATURES)
        scale = np.ones(N_FEATURES)
        mean[_NUMERIC] = raw[:, _NUMERIC].mean(axis=0)
        std = raw[:, _NUMERIC].std(axis=0)
        constant = np.flatnonzero(std == 0.0)
        std[constant] = 1.0
        scale[_NUMERIC] = std
        self.mean_ = mean
        self.scale_ = scale
        self.constant_features_ = tuple(FEATURE_NAMES[i] for i in constant)
        return self

    def transform(self, X: Sequence[Scenario]) -> np.ndarray:
        if not hasattr(self, "mean_"):
            raise NotFittedError("ScenarioFeaturizer is not fitted")
        raw = np.stack([raw_features(s) for s in X])
        base = (raw - self.mean_) / self.scale_
        if not self.expanded:
            return base
        return np.hstack([base, thermometer_bits(raw)])

    @property
    def n_output_features_(self) -> int:
        return N_FEATURES + (N_THERMOMETER if self.expanded else 0)


def bce_with_logits(z: np.ndarray, y: np.ndarray) -> float:
    """Numerically stable mean binary cross-entropy with logits."""
    per_cell = np.maximum(z, 0.0) - z * y + np.log1p(np.exp(-np.abs(z)))
    return float(np.mean(per_cell))


class MlpTagClassifier(BaseEstimator):
    """One-hidden-layer rectifier network emitting one logit per label.

    Deterministic for a fixed seed: initialization, epoch shuffles and
    checkpoint selection are all driven by one ``numpy`` generator, so two
    runs produce byte-identical parameters.  The learning rate follows a
    fixed two-step decay (/5 at 70% of the epochs, /25 at 90%).  When an
    eval set is given, the epoch with the best validation main-decision
    accuracy is kept, mirroring best-checkpoint selection.
    """

    LR_SCHEDULE = ((0.7, 1.0), (0.9, 0.2), (1.0, 0.04))

    def __init__(
        self,
        hidden_width: int = 128,
        epochs: int = 1000,
        batch_size: int = 64,
        learning_rate: float = 0.1,
        momentum: float = 0.9,
        weight_decay: float = 5e-5,
        seed: int = 0,
        threshold: float = 0.5,
    ):
        self.hidden_width = hidden_width
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.momentum = momentum
        self.weight_decay = weight_decay
        self.seed = seed
        self.threshold = threshold

    # -- forward / backward ------------------------------------------------

    def _forward(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        z1 = X @ self.w1_ + self.b1_
        a1 = np.maximum(z1, 0.0)
        z2 = a1 @ self.w2_ + self.b2_
        return z1, a1, z2

    def _loss_and_grads(self, X: np.ndarray, Y: np.ndarray):
        """Loss and analytic gradients of the data term (no L2 part)."""
        z1, a1, z2 = self._forward(X)
        loss = bce_with_logits(z2, Y)
        g2 = (sigmoid(z2) - Y) / Y.size  # mean reduction over batch and labels
        gw2 = a1.T @ g2
        gb2 = g2.sum(axis=0)
        g1 = (g2 @ self.w2_.T) * (z1 > 0.0)
        gw1 = X.T @ g1
        gb1 = g1.sum(axis=0)
        return loss, (gw1, gb1, gw2, gb2)

    def _lr_at(self, epoch: int) -> float:
        progress = epoch / self.epochs
        for limit, factor in self.LR_SCHEDULE:
            if progress < limit:
                return self.learning_rate * factor
        return self.learning_rate * self.LR_SCHEDULE[-1][1]

    # -- estimator API -----------------------------------------------------

    def fit(
        self,
        X,
        Y,
        eval_set: Optional[tuple] = None,
        log_stream: Optional[IO[str]] = None,
    ):
        """Train on features X (n, d) and multi-hot labels Y (n, 41).

        With ``eval_set`` (X_val, Y_val): per-epoch validation metrics are
        computed, one JSON line per epoch goes to ``log_stream`` when
        given, and the best-validation-accuracy checkpoint is restored at
        the end.  Raises :class:`DivergenceError` on a non-finite loss.
        """
        X = np.asarray(X, dtype=np.float64)
        Y = np.asarray(Y, dtype=np.float64)
        if X.ndim != 2 or Y.ndim != 2 or X.shape[0] != Y.shape[0] or X.shape[0] == 0:
            raise ValueError(f"bad training shapes: X {X.shape}, Y {Y.shape}")
        n, n_features = X.shape
        n_labels = Y.shape[1]
        rng = np.random.default_rng(self.seed)
        h = self.hidden_width
        self.w1_ = rng.standard_normal((n_features, h)) * np.sqrt(2.0 / n_features)
        self.b1_ = np.zeros(h)
        self.w2_ = rng.standard_normal((h, n_labels)) * np.sqrt(2.0 / h)
        self.b2_ = np.zeros(n_labels)
        velocity = [np.zeros_like(p) for p in (self.w1_, self.b1_, self.w2_, self.b2_)]
        self.loss_curve_ = []
        best_acc, best_params, best_epoch = -1.0, None, -1

        for epoch in range(self.epochs):
            lr = self._lr_at(epoch)
            order = rng.permutation(n)
            batch_losses = []
            for start in range(0, n, self.batch_size):
                rows = order[start : start + self.batch_size]
                loss, grads = self._loss_and_grads(X[rows], Y[rows])
                if not np.isfinite(loss):
                    raise DivergenceError(epoch)
                batch_losses.append(loss)
                gw1, gb1, gw2, gb2 = grads
                gw1 += self.weight_decay * self.w1_
                gw2 += self.weight_decay * self.w2_
                params = (self.w1_, self.b1_, self.w2_, self.b2_)
                for v, p, g in zip(velocity, params, (gw1, gb1, gw2, gb2)):
                    v *= self.momentum
                    v += g
                    p -= lr * v
            epoch_loss = float(np.mean(batch_losses))
            self.loss_curve_.append(epoch_loss)
            entry = {"epoch": epoch, "lr": lr, "train_loss": epoch_loss}
            if eval_set is not None:
                entry.update(self._eval_entry(*eval_set))
                if entry["val_main_accuracy"] > best_acc:
                    best_acc = entry["val_main_accuracy"]
                    best_epoch = epoch
                    best_params = [
                        p.copy() for p in (self.w1_, self.b1_, self.w2_, self.b2_)
                    ]
            if log_stream is not None:
                log_stream.write(json.dumps(entry) + "\n")
        if best_params is not None:
            self.w1_, self.b1_, self.w2_, self.b2_ = best_params
            self.best_epoch_ = best_epoch
            self.best_val_accuracy_ = best_acc
        self.n_iter_ = self.epochs
        return self

    def _eval_entry(self, X_val, Y_val) -> dict:
        schema = canonical_schema()
        logits = self.decision_function(X_val)
        processed = decide_matrix(logits, schema, self.threshold)
        _, _, f1 = metrics_mod.micro_prf(Y_val, processed)
        _, _, reason_f1 = metrics_mod.micro_prf(Y_val, processed, schema.reason_range)
        return {
            "val_loss": bce_with_logits(logits, np.asarray(Y_val, dtype=np.float64)),
            "val_main_accuracy": metrics_mod.main_accuracy(Y_val, processed),
            "val_overall_f1": f1,
            "val_reason_f1": reason_f1,
        }

    def decision_function(self, X) -> np.ndarray:
        """Raw logits, one row per sample."""
        if not hasattr(self, "w1_"):
            raise NotFittedError("MlpTagClassifier is not fitted")
        X = np.asarray(X, dtype=np.float64)
        return self._forward(X)[2]

    def predict_proba(self, X) -> np.ndarray:
        return sigmoid(self.decision_function(X))

    def predict(self, X) -> np.ndarray:
        """Post-processed multi-hot label matrix (always structurally valid)."""
        return decide_matrix(self.decision_function(X), canonical_schema(), self.threshold)


def gradient_check(
    clf: MlpTagClassifier,
    X,
    Y,
    num_params: int = 64,
    step: float = 1e-4,
    seed: int = 0,
) -> float:
    """Max relative error between analytic and central-difference gradients.

    Samples ``num_params`` parameters across all four tensors and perturbs
    each by ±step on a small batch (the data term only, which is what
    ``_loss_and_grads`` computes).
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    params = (clf.w1_, clf.b1_, clf.w2_, clf.b2_)
    _, grads = clf._loss_and_grads(X, Y)
    sizes = [p.size for p in params]
    rng = np.random.default_rng(seed)
    picks = rng.choice(sum(sizes), size=min(num_params, sum(sizes)), replace=False)

    worst = 0.0
    for flat_index in picks:
        tensor = 0
        local = int(flat_index)
        while local >= sizes[tensor]:
            local -= sizes[tensor]
            tensor += 1
        p = params[tensor].reshape(-1)
        analytic = grads[tensor].reshape(-1)[local]
        original = p[local]
        p[local] = original + step
        up = bce_with_logits(clf._forward(X)[2], Y)
        p[local] = original - step
        down = bce_with_logits(clf._forward(X)[2], Y)
        p[local] = original
        numeric = (up - down) / (2.0 * step)
        denom = max(abs(analytic), abs(numeric), 1e-8)
        worst = max(worst, abs(analytic - numeric) / denom)
    return worst


MODEL_MAGIC = b"SHM1"


def save_model(path, featurizer: ScenarioFeaturizer, clf: MlpTagClassifier) -> None:
    """Write the fitted pair as one binary frame.

    Layout: magic "SHM1"; four little-endian uint32 dims (base features,
    network inputs, hidden width, labels); then float64 little-endian
    arrays in row-major order: mean, scale, w1, b1, w2, b2.  The network
    input count exceeding the base feature count marks an expanded
    (thermometer) featurizer; the grids are constants, not serialized.
    """
    n_inputs, hidden = clf.w1_.shape
    n_labels = clf.w2_.shape[1]
    with open(path, "wb") as fh:
        fh.write(MODEL_MAGIC)
        fh.write(struct.pack("<IIII", N_FEATURES, n_inputs, hidden, n_labels))
        for arr in (
            featurizer.mean_,
            featurizer.scale_,
            clf.w1_,
            clf.b1_,
            clf.w2_,
            clf.b2_,
        ):
            fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def load_model(path) -> tuple[ScenarioFeaturizer, MlpTagClassifier]:
    """Read a frame written by :func:`save_model`."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != MODEL_MAGIC:
        raise ModelFormatError(f"bad magic {blob[:4]!r}")
    try:
        n_base, n_inputs, hidden, n_labels = struct.unpack_from("<IIII", blob, 4)
    except struct.error as exc:
        raise ModelFormatError("truncated header") from exc
    if n_base != N_FEATURES:
        raise ModelFormatError(f"unsupported base feature count {n_base}")
    if n_inputs not in (N_FEATURES, N_FEATURES + N_THERMOMETER):
        raise ModelFormatError(f"unsupported input width {n_inputs}")
    shapes = [
        (n_base,),
        (n_base,),
        (n_inputs, hidden),
        (hidden,),
        (hidden, n_labels),
        (n_labels,),
    ]
    expected = 20 + 8 * sum(int(np.prod(s)) for s in shapes)
    if len(blob) != expected:
        raise ModelFormatError(f"expected {expected} bytes, got {len(blob)}")
    offset = 20
    arrays = []
    for shape in shapes:
        count = int(np.prod(shape))
        arrays.append(
            np.frombuffer(blob, dtype="<f8", count=count, offset=offset)
            .astype(np.float64)
            .reshape(shape)
        )
        offset += 8 * count

    featurizer = ScenarioFeaturizer(expanded=n_inputs > n_base)
    featurizer.mean_, featurizer.scale_ = arrays[0], arrays[1]
    featurizer.constant_features_ = ()
    clf = MlpTagClassifier(hidden_width=hidden)
    clf.w1_, clf.b1_, clf.w2_, clf.b2_ = arrays[2:]
    return featurizer, clf
