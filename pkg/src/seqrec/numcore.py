"""Dense numeric kernel with explicit forward/backward operations.

Vectors and matrices are plain float64 numpy arrays. Everything that needs a
gradient in this package (embedding paths, MLP head, projections) goes through
the functions here, so attention-path and representation-path gradients stay
separable by construction instead of being entangled inside an autodiff graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError

Array = np.ndarray


def as_f64(x) -> Array:
    return np.asarray(x, dtype=np.float64)


def dot(a, b) -> float:
    """Inner product of two equal-length vectors."""
    a = as_f64(a)
    b = as_f64(b)
    if a.ndim != 1 or b.ndim != 1:
        raise DimensionError(f"dot expects 1-D vectors, got shapes {a.shape} and {b.shape}")
    if a.shape[0] != b.shape[0]:
        raise DimensionError(f"dot length mismatch: {a.shape[0]} vs {b.shape[0]}")
    return float(a @ b)


def softmax_scaled(logits, scale_dim: int) -> Array:
    """Softmax of logits / sqrt(scale_dim), computed with max subtraction.

    The scaling keeps the distribution calibrated as the underlying vector
    dimension changes; max subtraction keeps exp() in range even for widely
    dispersed logits (projection variants produce |logit| > 10).
    """
    logits = as_f64(logits)
    if logits.size == 0:
        raise DimensionError("softmax_scaled: empty logits")
    if scale_dim <= 0:
        raise DimensionError(f"softmax_scaled: scale_dim must be positive, got {scale_dim}")
    z = logits / math.sqrt(scale_dim)
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def softmax(logits) -> Array:
    """Plain stable softmax along the last axis."""
    z = as_f64(logits)
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def relu(x: Array) -> Array:
    return np.maximum(x, 0.0)


@dataclass
class MlpParams:
    """Fully connected layers; ReLU on hidden layers, linear output."""

    weights: list[Array]  # each (out, in)
    biases: list[Array]  # each (out,)
    activation: str = "relu"

    @property
    def num_layers(self) -> int:
        return len(self.weights)

    def parameters(self) -> list[Array]:
        out = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            out.append(b)
        return out


def mlp_init(input_dim: int, layer_dims, rng: np.random.Generator, activation: str = "relu") -> MlpParams:
    """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) init for each layer."""
    weights, biases = [], []
    fan_in = input_dim
    for out_dim in layer_dims:
        bound = 1.0 / math.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(out_dim, fan_in)))
        biases.append(rng.uniform(-bound, bound, size=out_dim))
        fan_in = out_dim
    return MlpParams(weights=weights, biases=biases, activation=activation)


def _apply_activation(kind: str, z: Array) -> Array:
    if kind == "relu":
        return relu(z)
    if kind == "tanh":
        return np.tanh(z)
    raise DimensionError(f"unknown activation {kind!r}")


def _activation_grad(kind: str, z: Array) -> Array:
    if kind == "relu":
        return (z > 0.0).astype(np.float64)
    if kind == "tanh":
        t = np.tanh(z)
        return 1.0 - t * t
    raise DimensionError(f"unknown activation {kind!r}")


def mlp_forward(p: MlpParams, x) -> tuple[Array, list]:
    """Forward pass; x may carry any leading batch dims, last dim = input.

    Returns the output and a cache of (layer inputs, pre-activations) for
    mlp_backward.
    """
    x = as_f64(x)
    if x.shape[-1] != p.weights[0].shape[1]:
        raise DimensionError(
            f"mlp_forward: input dim {x.shape[-1]} != first layer in-dim {p.weights[0].shape[1]}"
        )
    h = x
    cache = []
    last = p.num_layers - 1
    for i, (w, b) in enumerate(zip(p.weights, p.biases)):
        z = h @ w.T + b
        cache.append((h, z))
        h = z if i == last else _apply_activation(p.activation, z)
    return h, cache


def mlp_backward(p: MlpParams, cache: list, grad_out) -> tuple[list[tuple[Array, Array]], Array]:
    """Exact gradients of sum(grad_out * output) w.r.t. params and input.

    grad_out must match the forward output shape; batch dims are summed into
    the parameter gradients and preserved in the returned input gradient.
    """
    if len(cache) != p.num_layers:
        raise DimensionError(f"mlp_backward: cache has {len(cache)} layers, params have {p.num_layers}")
    g = as_f64(grad_out)
    if g.shape[-1] != p.weights[-1].shape[0]:
        raise DimensionError("mlp_backward: grad_out dim does not match output layer")
    grads: list[tuple[Array, Array]] = [None] * p.num_layers  # type: ignore[list-item]
    last = p.num_layers - 1
    for i in range(last, -1, -1):
        h_in, z = cache[i]
        if i != last:
            g = g * _activation_grad(p.activation, z)
        gm = g.reshape(-1, g.shape[-1])
        hm = h_in.reshape(-1, h_in.shape[-1])
        grads[i] = (gm.T @ hm, gm.sum(axis=0))
        g = g @ p.weights[i]
    return grads, g


@dataclass
class AdamState:
    """Classic Adam with L2 weight decay folded into the gradient."""

    lr: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    weight_decay: float = 0.0
    step: int = 0
    m: list[Array] = field(default_factory=list)
    v: list[Array] = field(default_factory=list)


def adam_init(params: list[Array], lr: float = 0.01, weight_decay: float = 0.0,
              beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8) -> AdamState:
    return AdamState(
        lr=lr, beta1=beta1, beta2=beta2, eps=eps, weight_decay=weight_decay,
        m=[np.zeros_like(p) for p in params],
        v=[np.zeros_like(p) for p in params],
    )


def adam_step(state: AdamState, params: list[Array], grads: list[Array]) -> None:
    """One in-place update with bias-corrected moments. g <- g + wd * theta."""
    if len(params) != len(state.m) or len(grads) != len(params):
        raise DimensionError("adam_step: parameter/gradient/moment counts differ")
    state.step += 1
    t = state.step
    bc1 = 1.0 - state.beta1 ** t
    bc2 = 1.0 - state.beta2 ** t
    for p, g, m, v in zip(params, grads, state.m, state.v):
        if p.shape != g.shape or p.shape != m.shape:
            raise DimensionError(f"adam_step: shape mismatch {p.shape} vs {g.shape}")
        if state.weight_decay != 0.0:
            g = g + state.weight_decay * p
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * (g * g)
        m_hat = m / bc1
        v_hat = v / bc2
        p -= state.lr * m_hat / (np.sqrt(v_hat) + state.eps)


def check_gradients(loss_fn, params: list[Array], grads: list[Array], h: float = 1e-5) -> float:
    """Max relative error between analytic grads and central differences.

    loss_fn() is re-evaluated with each parameter component perturbed in
    place; params must be the live arrays loss_fn reads.
    """
    max_err = 0.0
    for p, g in zip(params, grads):
        flat = p.reshape(-1)
        gflat = as_f64(g).reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            lp = loss_fn()
            flat[i] = orig - h
            lm = loss_fn()
            flat[i] = orig
            fd = (lp - lm) / (2.0 * h)
            err = abs(fd - gflat[i]) / max(abs(fd), abs(gflat[i]), 1e-4)
            max_err = max(max_err, err)
    return max_err
