#!/usr/bin/env python3
"""Reference objective evaluator speaking the tuning wire protocol.

Reads one JSON request per line from stdin, trains a small dense classifier
on a bundled synthetic 3-class dataset with the requested hyperparameters,
and replies with one JSON line carrying the scalar loss: held-out
cross-entropy plus an L2 weight penalty (lower is better).

Protocol:
    startup   -> {"protocol": 1}
    request   <- {"trial_id": int, "neurons": int, "learning_rate": float,
                  "batch_size": int, "epochs": int, "activation": str}
    reply     -> {"trial_id": int, "fitness": float}
              or {"trial_id": int, "error": str}

Malformed lines produce an error reply (trial_id -1 when unparseable) and
the process stays alive. Fitness is deterministic for a given request: the
dataset and every training run are seeded from a fixed recipe.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

PROTOCOL_VERSION = 1
L2_WEIGHT = 1e-4
GRAD_CLIP = 5.0  # max global gradient norm per step; keeps high rates finite

_SELU_LAMBDA = 1.0507009873554805
_SELU_ALPHA = 1.6732632423543772


def _selu(z):
    return _SELU_LAMBDA * np.where(z > 0.0, z, _SELU_ALPHA * (np.exp(z) - 1.0))


def _selu_grad(z):
    return _SELU_LAMBDA * np.where(z > 0.0, 1.0, _SELU_ALPHA * np.exp(z))


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


# activation name -> (forward, gradient in terms of pre-activation)
ACTIVATIONS = {
    "relu": (lambda z: np.maximum(z, 0.0), lambda z: (z > 0.0).astype(float)),
    "sigmoid": (_sigmoid, lambda z: _sigmoid(z) * (1.0 - _sigmoid(z))),
    "softplus": (lambda z: np.logaddexp(0.0, z), _sigmoid),
    "softsign": (
        lambda z: z / (1.0 + np.abs(z)),
        lambda z: 1.0 / (1.0 + np.abs(z)) ** 2,
    ),
    "tanh": (np.tanh, lambda z: 1.0 - np.tanh(z) ** 2),
    "selu": (_selu, _selu_grad),
    "elu": (
        lambda z: np.where(z > 0.0, z, np.expm1(z)),
        lambda z: np.where(z > 0.0, 1.0, np.exp(z)),
    ),
    "exponential": (np.exp, np.exp),
    "leakyrelu": (
        lambda z: np.where(z > 0.0, z, 0.01 * z),
        lambda z: np.where(z > 0.0, 1.0, 0.01),
    ),
    # fixed 0.25 slope; the slope is not trained in this reference model
    "prelu": (
        lambda z: np.where(z > 0.0, z, 0.25 * z),
        lambda z: np.where(z > 0.0, 1.0, 0.25),
    ),
}

N_CLASSES = 3
N_FEATURES = 8
N_SAMPLES = 1500
TRAIN_FRACTION = 0.8


def make_dataset(data_seed: int = 0):
    """Seeded synthetic 3-class problem: noisy class rings lifted to 8-d.

    Returns ((x_train, y_train), (x_test, y_test)) with an 80/20 split.
    """
    rng = np.random.default_rng(data_seed)
    per_class = N_SAMPLES // N_CLASSES
    xs, ys = [], []
    for cls in range(N_CLASSES):
        angles = rng.uniform(0.0, 2.0 * np.pi, per_class)
        radius = 1.0 + cls + rng.normal(0.0, 0.18, per_class)
        base = np.stack([radius * np.cos(angles), radius * np.sin(angles)], axis=1)
        lifted = np.concatenate(
            [
                base,
                np.sin(2.0 * base),
                base**2 / 3.0,
                rng.normal(0.0, 0.35, (per_class, N_FEATURES - 6)),
            ],
            axis=1,
        )
        xs.append(lifted)
        ys.append(np.full(per_class, cls))
    x = np.concatenate(xs)
    y = np.concatenate(ys)
    order = rng.permutation(x.shape[0])
    x, y = x[order], y[order]
    x = (x - x.mean(axis=0)) / (x.std(axis=0) + 1e-9)
    split = int(TRAIN_FRACTION * x.shape[0])
    return (x[:split], y[:split]), (x[split:], y[split:])


def _log_softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.sum(np.exp(shifted), axis=1, keepdims=True))


def _cross_entropy(logits, labels):
    return float(-np.mean(_log_softmax(logits)[np.arange(labels.size), labels]))


class TrainingDiverged(RuntimeError):
    pass


def train_and_score(request, dataset, init_seed: int = 12345) -> float:
    """Train the requested model and return held-out CE + L2 penalty."""
    forward, grad = ACTIVATIONS[request["activation"]]
    (x_train, y_train), (x_test, y_test) = dataset
    n_train = x_train.shape[0]
    hidden = int(request["neurons"])
    rate = float(request["learning_rate"])
    batch = min(int(request["batch_size"]), n_train)
    epochs = int(request["epochs"])

    rng = np.random.default_rng(init_seed)
    w1 = rng.normal(0.0, 1.0 / np.sqrt(N_FEATURES), (N_FEATURES, hidden))
    b1 = np.zeros(hidden)
    w2 = rng.normal(0.0, 1.0 / np.sqrt(hidden), (hidden, N_CLASSES))
    b2 = np.zeros(N_CLASSES)

    for _ in range(epochs):
        order = rng.permutation(n_train)
        for start in range(0, n_train, batch):
            idx = order[start : start + batch]
            xb, yb = x_train[idx], y_train[idx]
            z1 = xb @ w1 + b1
            h = forward(z1)
            logits = h @ w2 + b2
            # softmax gradient
            probs = np.exp(_log_softmax(logits))
            probs[np.arange(yb.size), yb] -= 1.0
            probs /= yb.size
            gw2 = h.T @ probs + 2.0 * L2_WEIGHT * w2
            gb2 = probs.sum(axis=0)
            dh = probs @ w2.T * grad(z1)
            gw1 = xb.T @ dh + 2.0 * L2_WEIGHT * w1
            gb1 = dh.sum(axis=0)
            norm = np.sqrt(
                np.sum(gw1**2) + np.sum(gb1**2) + np.sum(gw2**2) + np.sum(gb2**2)
            )
            if not np.isfinite(norm):
                raise TrainingDiverged("non-finite gradient")
            if norm > GRAD_CLIP:
                scale = GRAD_CLIP / norm
                gw1, gb1, gw2, gb2 = gw1 * scale, gb1 * scale, gw2 * scale, gb2 * scale
            w1 -= rate * gw1
            b1 -= rate * gb1
            w2 -= rate * gw2
            b2 -= rate * gb2

    logits = forward(x_test @ w1 + b1) @ w2 + b2
    fitness = _cross_entropy(logits, y_test) + L2_WEIGHT * float(
        np.sum(w1**2) + np.sum(w2**2)
    )
    if not np.isfinite(fitness):
        raise TrainingDiverged("non-finite loss")
    return fitness


_REQUIRED_FIELDS = ("trial_id", "neurons", "learning_rate", "batch_size", "epochs", "activation")


def handle_line(line: str, dataset) -> dict:
    """One request line -> one reply dict (never raises)."""
    trial_id = -1
    try:
        request = json.loads(line)
        if not isinstance(request, dict):
            raise ValueError("request must be a JSON object")
        missing = [field for field in _REQUIRED_FIELDS if field not in request]
        if missing:
            raise ValueError(f"missing fields: {', '.join(missing)}")
        trial_id = int(request["trial_id"])
        if request["activation"] not in ACTIVATIONS:
            raise ValueError(f"unknown activation {request['activation']!r}")
        fitness = train_and_score(request, dataset)
        return {"trial_id": trial_id, "fitness": fitness}
    except TrainingDiverged as exc:
        return {"trial_id": trial_id, "error": f"training diverged: {exc}"}
    except (ValueError, TypeError, KeyError, json.JSONDecodeError) as exc:
        return {"trial_id": trial_id, "error": f"bad request: {exc}"}


def serve(stdin, stdout, data_seed: int = 0):
    """Handshake, then answer one reply line per request line until EOF."""
    print(json.dumps({"protocol": PROTOCOL_VERSION}), file=stdout, flush=True)
    dataset = make_dataset(data_seed)
    for line in stdin:
        if not line.strip():
            continue
        print(json.dumps(handle_line(line, dataset)), file=stdout, flush=True)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--data-seed", type=int, default=0)
    args = parser.parse_args()
    serve(sys.stdin, sys.stdout, data_seed=args.data_seed)
    return 0


if __name__ == "__main__":
    sys.exit(main())
