"""Numeric inner loops for training, in two interchangeable flavors.

The numba-jitted kernels are used by default; set POSTERFUSE_NO_NUMBA=1
before import to force the pure-numpy path (same math, same results).
Both flavors are kept importable (NUMPY_KERNELS / NUMBA_KERNELS) so tests
and benchmarks/bench_kernels.py can compare them directly.

All kernels operate on C-contiguous float64 arrays. Weight matrices are
(in_dim, out_dim) so the batch forward is a plain row-major matmul.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLE = os.environ.get("POSTERFUSE_NO_NUMBA", "") not in ("", "0")

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dep, but keep the fallback honest
    _HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# pure-numpy reference implementations
# ---------------------------------------------------------------------------

def _np_affine(a, w, b):
    """z = a @ w + b for a (B, in), w (in, out), b (out,)."""
    return np.dot(a, w) + b


def _np_relu(z):
    return np.maximum(z, 0.0)


def _np_relu_backward(delta, z):
    """Zero the incoming gradient wherever the pre-activation was <= 0."""
    return np.where(z > 0.0, delta, 0.0)


def _np_affine_grads(a, delta):
    """Parameter gradients of an affine layer: (a.T @ delta, column sums)."""
    gw = np.dot(np.ascontiguousarray(a.T), delta)
    gb = delta.sum(axis=0)
    return gw, gb


def _np_delta_backward(delta, w):
    """Propagate delta through the affine layer: delta @ w.T."""
    return np.dot(delta, np.ascontiguousarray(w.T))


def _np_sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0.0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _np_bce_from_logits(z, y):
    """Mean binary cross-entropy, computed in the stable logit form."""
    return float(np.mean(np.maximum(z, 0.0) - z * y + np.log1p(np.exp(-np.abs(z)))))


def _np_adam_update(p, g, m, v, t, lr, beta1, beta2, eps):
    """In-place bias-corrected Adam step on flat arrays."""
    m *= beta1
    m += (1.0 - beta1) * g
    v *= beta2
    v += (1.0 - beta2) * g * g
    mhat = m / (1.0 - beta1**t)
    vhat = v / (1.0 - beta2**t)
    p -= lr * mhat / (np.sqrt(vhat) + eps)


# ---------------------------------------------------------------------------
# numba-jitted versions (identical math, fastmath off for determinism)
# ---------------------------------------------------------------------------

if _HAVE_NUMBA:

    @njit(cache=True)
    def _nb_affine(a, w, b):
        return np.dot(a, w) + b

    @njit(cache=True)
    def _nb_relu(z):
        return np.maximum(z, 0.0)

    @njit(cache=True)
    def _nb_relu_backward(delta, z):
        out = np.zeros_like(delta)
        for i in range(delta.shape[0]):
            for j in range(delta.shape[1]):
                if z[i, j] > 0.0:
                    out[i, j] = delta[i, j]
        return out

    @njit(cache=True)
    def _nb_affine_grads(a, delta):
        gw = np.dot(np.ascontiguousarray(a.T), delta)
        gb = np.zeros(delta.shape[1])
        for i in range(delta.shape[0]):
            for j in range(delta.shape[1]):
                gb[j] += delta[i, j]
        return gw, gb

    @njit(cache=True)
    def _nb_delta_backward(delta, w):
        return np.dot(delta, np.ascontiguousarray(w.T))

    @njit(cache=True)
    def _nb_sigmoid(z):
        out = np.empty_like(z)
        flat_z = z.ravel()
        flat_out = out.ravel()
        for i in range(flat_z.size):
            zi = flat_z[i]
            if zi >= 0.0:
                flat_out[i] = 1.0 / (1.0 + np.exp(-zi))
            else:
                ez = np.exp(zi)
                flat_out[i] = ez / (1.0 + ez)
        return out

    @njit(cache=True)
    def _nb_bce_from_logits(z, y):
        total = 0.0
        for i in range(z.size):
            zi = z[i]
            total += max(zi, 0.0) - zi * y[i] + np.log1p(np.exp(-abs(zi)))
        return total / z.size

    @njit(cache=True)
    def _nb_adam_update(p, g, m, v, t, lr, beta1, beta2, eps):
        c1 = 1.0 - beta1**t
        c2 = 1.0 - beta2**t
        for i in range(p.size):
            m[i] = beta1 * m[i] + (1.0 - beta1) * g[i]
            v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i]
            p[i] -= lr * (m[i] / c1) / (np.sqrt(v[i] / c2) + eps)


NUMPY_KERNELS = {
    "affine": _np_affine,
    "relu": _np_relu,
    "relu_backward": _np_relu_backward,
    "affine_grads": _np_affine_grads,
    "delta_backward": _np_delta_backward,
    "sigmoid": _np_sigmoid,
    "bce_from_logits": _np_bce_from_logits,
    "adam_update": _np_adam_update,
}

NUMBA_KERNELS = (
    {
        "affine": _nb_affine,
        "relu": _nb_relu,
        "relu_backward": _nb_relu_backward,
        "affine_grads": _nb_affine_grads,
        "delta_backward": _nb_delta_backward,
        "sigmoid": _nb_sigmoid,
        "bce_from_logits": _nb_bce_from_logits,
        "adam_update": _nb_adam_update,
    }
    if _HAVE_NUMBA
    else None
)

USING_NUMBA = _HAVE_NUMBA and not _DISABLE
ACTIVE_KERNELS = NUMBA_KERNELS if USING_NUMBA else NUMPY_KERNELS

affine = ACTIVE_KERNELS["affine"]
relu = ACTIVE_KERNELS["relu"]
relu_backward = ACTIVE_KERNELS["relu_backward"]
affine_grads = ACTIVE_KERNELS["affine_grads"]
delta_backward = ACTIVE_KERNELS["delta_backward"]
sigmoid_vec = ACTIVE_KERNELS["sigmoid"]
bce_from_logits = ACTIVE_KERNELS["bce_from_logits"]
adam_update = ACTIVE_KERNELS["adam_update"]
