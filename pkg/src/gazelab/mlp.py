"""One-hidden-layer perceptron baseline (tanh hidden layer, softmax output).

Trained by mini-batch gradient descent on cross-entropy loss.  Weights are
initialized from seeded uniform(-r, r) with r = 1/sqrt(fan_in) (W1 drawn
first, then W2; biases start at zero), so training is a pure function of
(data, params, seed).  ``loss_and_gradients`` is the exact function the
training loop steps on, exposed so gradient correctness can be checked
against finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientData, SchemaError
from .features import FEATURE_DIM, FeatureVector
from .model import BEHAVIOUR_ORDER, BehaviourClass

__all__ = [
    "MlpParams",
    "MlpModel",
    "train_mlp",
    "forward",
    "loss_and_gradients",
    "predict_mlp",
    "predict_mlp_batch",
    "mlp_to_text",
    "mlp_from_text",
]

_N_CLASSES = len(BEHAVIOUR_ORDER)
_CLASS_INDEX = {c: i for i, c in enumerate(BEHAVIOUR_ORDER)}


@dataclass(frozen=True)
class MlpParams:
    hidden: int = 32
    learning_rate: float = 0.5
    epochs: int = 600
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.hidden < 1:
            raise SchemaError(f"hidden size must be >= 1, got {self.hidden}")
        if not (self.learning_rate > 0):
            raise SchemaError(
                f"learning rate must be > 0, got {self.learning_rate}"
            )
        if self.epochs < 0:
            raise SchemaError(f"epochs must be >= 0, got {self.epochs}")
        if self.batch_size < 1:
            raise SchemaError(f"batch size must be >= 1, got {self.batch_size}")
        if self.seed < 0:
            raise SchemaError(f"seed must be >= 0, got {self.seed}")


@dataclass(frozen=True)
class MlpModel:
    """Parameters: hidden layer (W1: hidden x 34, b1) and output layer
    (W2: 3 x hidden, b2)."""

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    params: MlpParams


def _as_arrays(data) -> tuple[np.ndarray, np.ndarray]:
    if any(fv.label is None for fv in data):
        raise InsufficientData("every training vector needs a label")
    x = np.ascontiguousarray(np.stack([fv.values for fv in data]), dtype=np.float64)
    y = np.asarray([_CLASS_INDEX[fv.label] for fv in data], dtype=np.int64)
    return x, y


def forward(model: MlpModel, x: np.ndarray) -> np.ndarray:
    """Class probabilities, one row per input row.

    The hidden tanh bounds activations in [-1, 1], so logits are bounded by
    the output-layer weights and the shifted softmax never overflows.
    """
    hidden = np.tanh(x @ model.w1.T + model.b1)
    logits = hidden @ model.w2.T + model.b2
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def loss_and_gradients(
    model: MlpModel, x: np.ndarray, y: np.ndarray
) -> tuple[float, dict[str, np.ndarray]]:
    """Mean cross-entropy over the batch and its gradients w.r.t. every
    parameter — the exact quantities the training loop uses."""
    n = x.shape[0]
    hidden = np.tanh(x @ model.w1.T + model.b1)
    logits = hidden @ model.w2.T + model.b2
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    probs = exp / exp.sum(axis=1, keepdims=True)

    loss = float(-np.mean(np.log(probs[np.arange(n), y])))

    dlogits = probs.copy()
    dlogits[np.arange(n), y] -= 1.0
    dlogits /= n
    dw2 = dlogits.T @ hidden
    db2 = dlogits.sum(axis=0)
    dhidden = dlogits @ model.w2
    dpre = dhidden * (1.0 - hidden * hidden)  # tanh'
    dw1 = dpre.T @ x
    db1 = dpre.sum(axis=0)
    return loss, {"w1": dw1, "b1": db1, "w2": dw2, "b2": db2}


def train_mlp(data, params: MlpParams | None = None) -> MlpModel:
    """Fit the MLP. Needs >= 1 labelled sample."""
    if params is None:
        params = MlpParams()
    if len(data) < 1:
        raise InsufficientData("MLP training needs at least 1 sample")
    x, y = _as_arrays(data)
    n = x.shape[0]

    rng = np.random.default_rng(np.random.SeedSequence(params.seed))
    r1 = 1.0 / np.sqrt(FEATURE_DIM)
    w1 = rng.uniform(-r1, r1, size=(params.hidden, FEATURE_DIM))
    b1 = np.zeros(params.hidden)
    r2 = 1.0 / np.sqrt(params.hidden)
    w2 = rng.uniform(-r2, r2, size=(_N_CLASSES, params.hidden))
    b2 = np.zeros(_N_CLASSES)
    model = MlpModel(w1=w1, b1=b1, w2=w2, b2=b2, params=params)

    lr = params.learning_rate
    for _ in range(params.epochs):
        order = rng.permutation(n)
        for start in range(0, n, params.batch_size):
            batch = order[start : start + params.batch_size]
            _, grads = loss_and_gradients(model, x[batch], y[batch])
            model = MlpModel(
                w1=model.w1 - lr * grads["w1"],
                b1=model.b1 - lr * grads["b1"],
                w2=model.w2 - lr * grads["w2"],
                b2=model.b2 - lr * grads["b2"],
                params=params,
            )
    return model


def predict_mlp_batch(model: MlpModel, x: np.ndarray) -> np.ndarray:
    """Class indices: argmax probability, first max on exact ties (S < L < O)."""
    return np.argmax(forward(model, np.ascontiguousarray(x, dtype=np.float64)), axis=1)


def predict_mlp(model: MlpModel, fv: FeatureVector) -> BehaviourClass:
    return BEHAVIOUR_ORDER[int(predict_mlp_batch(model, fv.values[np.newaxis, :])[0])]


# ---------------------------------------------------------------------------
# Structured-text serialization
# ---------------------------------------------------------------------------


def _matrix_lines(name: str, array: np.ndarray) -> list[str]:
    array = np.atleast_2d(array)
    lines = [f"{name} {array.shape[0]} {array.shape[1]}"]
    for row in array:
        lines.append(" ".join(repr(float(v)) for v in row))
    return lines


def mlp_to_text(model: MlpModel) -> str:
    p = model.params
    lines = [
        "mlp v1",
        f"params hidden={p.hidden} learning_rate={p.learning_rate!r} "
        f"epochs={p.epochs} batch_size={p.batch_size} seed={p.seed}",
    ]
    lines += _matrix_lines("w1", model.w1)
    lines += _matrix_lines("b1", model.b1)
    lines += _matrix_lines("w2", model.w2)
    lines += _matrix_lines("b2", model.b2)
    return "".join(line + "\n" for line in lines)


def mlp_from_text(text: str) -> MlpModel:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "mlp v1":
        raise SchemaError("not a serialized MLP (missing 'mlp v1' header)")
    kv = dict(part.split("=") for part in lines[1].split()[1:])
    params = MlpParams(
        hidden=int(kv["hidden"]),
        learning_rate=float(kv["learning_rate"]),
        epochs=int(kv["epochs"]),
        batch_size=int(kv["batch_size"]),
        seed=int(kv["seed"]),
    )
    arrays: dict[str, np.ndarray] = {}
    i = 2
    for _ in range(4):
        name, rows_s, cols_s = lines[i].split()
        rows, cols = int(rows_s), int(cols_s)
        i += 1
        data = np.empty((rows, cols), dtype=np.float64)
        for r in range(rows):
            data[r] = [float(tok) for tok in lines[i].split()]
            i += 1
        arrays[name] = data
    return MlpModel(
        w1=arrays["w1"],
        b1=arrays["b1"][0],
        w2=arrays["w2"],
        b2=arrays["b2"][0],
        params=params,
    )
