"""Restricted Boltzmann machine trained with one-step contrastive divergence."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class RbmModel:
    weights: np.ndarray  # (visible, hidden)
    visible_bias: np.ndarray  # (visible,)
    hidden_bias: np.ndarray  # (hidden,)

    @property
    def visible(self) -> int:
        return self.weights.shape[0]

    @property
    def hidden(self) -> int:
        return self.weights.shape[1]


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-z))


def rbm_fit(
    features: np.ndarray,
    hidden: int = 6,
    epochs: int = 100,
    learning_rate: float = 0.1,
    seed: int = 0,
) -> RbmModel:
    """Train with CD-1: sigmoid units, full-batch updates.

    Weights start from a seed-driven Gaussian (sigma 0.01), biases from zero;
    the same seed and input reproduce the model exactly. Visible inputs must
    lie in [0, 1] and are treated as activation probabilities.
    """
    x = np.asarray(features, dtype=float)
    if x.ndim != 2 or x.shape[0] < 1:
        raise ValueError("features must be a non-empty 2-d matrix")
    if not np.all(np.isfinite(x)):
        raise ValueError("features must be finite")

    m, visible = x.shape
    rng = np.random.default_rng(seed)
    w = rng.normal(0.0, 0.01, size=(visible, hidden))
    vb = np.zeros(visible)
    hb = np.zeros(hidden)

    for _ in range(epochs):
        h_prob = _sigmoid(x @ w + hb)
        h_state = (rng.random((m, hidden)) < h_prob).astype(float)
        v_recon = _sigmoid(h_state @ w.T + vb)
        h_recon = _sigmoid(v_recon @ w + hb)

        w += learning_rate * (x.T @ h_prob - v_recon.T @ h_recon) / m
        vb += learning_rate * (x - v_recon).mean(axis=0)
        hb += learning_rate * (h_prob - h_recon).mean(axis=0)

    return RbmModel(weights=w, visible_bias=vb, hidden_bias=hb)


def rbm_enhance(model: RbmModel, feature: np.ndarray) -> np.ndarray:
    """Hidden activation probabilities sigmoid(W^T x + hidden_bias), each in (0, 1)."""
    x = np.asarray(feature, dtype=float)
    if x.shape != (model.visible,):
        raise ValueError(f"expected feature of length {model.visible}, got shape {x.shape}")
    return _sigmoid(model.weights.T @ x + model.hidden_bias)


def reconstruction_error(model: RbmModel, features: np.ndarray) -> float:
    """Mean squared error of the deterministic one-step reconstruction."""
    x = np.asarray(features, dtype=float)
    h = _sigmoid(x @ model.weights + model.hidden_bias)
    v = _sigmoid(h @ model.weights.T + model.visible_bias)
    return float(((x - v) ** 2).mean())
