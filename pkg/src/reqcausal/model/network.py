"""Encoder forward pass, loss, and hand-derived gradients.

All math is float64 numpy. The encoder is a post-norm transformer: each
block applies masked multi-head self-attention and a ReLU feed-forward, both
with residual connections followed by layer normalization. Position 0 (CLS)
of the final hidden state is the sentence embedding; a single linear head
maps it to two logits.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import ConfigurationError, InvalidInputError, NumericError
from ..syntax import SUM_EMBEDDING
from ..tokenizer import TokenSequence
from .params import ModelParameters

LN_EPS = 1e-5
# Additive attention bias at masked key positions; large enough that the
# softmax weight underflows to exactly zero.
MASK_BIAS = 1e30

PROB_FLOOR = 1e-12


def softmax(logits) -> np.ndarray:
    """Exponential normalization over the last axis, stabilized by max-subtraction.

    Outputs sum to 1 within 1e-12 and never overflow; the losing class
    underflows to exactly 0.0 once the logit gap exceeds ~745.
    """
    z = np.asarray(logits, dtype=np.float64)
    if not np.all(np.isfinite(z)):
        raise NumericError("softmax received non-finite logits")
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def cross_entropy(probabilities, true_label: int) -> float:
    """Negative log-likelihood of the true class, clamped at 1e-12."""
    if true_label not in (0, 1):
        raise InvalidInputError(f"label must be 0 or 1, got {true_label!r}")
    p = float(np.asarray(probabilities, dtype=np.float64)[true_label])
    return float(-np.log(max(p, PROB_FLOOR)))


def _split_heads(t: np.ndarray, n_heads: int) -> np.ndarray:
    b, length, d = t.shape
    return t.reshape(b, length, n_heads, d // n_heads).transpose(0, 2, 1, 3)


def _merge_heads(t: np.ndarray) -> np.ndarray:
    b, h, length, hd = t.shape
    return t.transpose(0, 2, 1, 3).reshape(b, length, h * hd)


def _layernorm_forward(x: np.ndarray, g: np.ndarray, b: np.ndarray):
    mu = x.mean(axis=-1, keepdims=True)
    centered = x - mu
    var = (centered * centered).mean(axis=-1, keepdims=True)
    inv = 1.0 / np.sqrt(var + LN_EPS)
    xhat = centered * inv
    return g * xhat + b, xhat, inv


def _layernorm_backward(dy: np.ndarray, xhat: np.ndarray, inv: np.ndarray, g: np.ndarray):
    dg = (dy * xhat).sum(axis=(0, 1))
    db = dy.sum(axis=(0, 1))
    dxhat = dy * g
    dx = inv * (
        dxhat
        - dxhat.mean(axis=-1, keepdims=True)
        - xhat * (dxhat * xhat).mean(axis=-1, keepdims=True)
    )
    return dx, dg, db


def _as_batch(seqs: Sequence[TokenSequence]):
    ids = np.asarray([s.ids for s in seqs], dtype=np.int64)
    mask = np.asarray([s.mask for s in seqs], dtype=np.float64)
    dep = np.asarray([s.dep_ids for s in seqs], dtype=np.int64)
    return ids, mask, dep


def _forward_batch(params: ModelParameters, ids: np.ndarray, mask: np.ndarray,
                   dep: np.ndarray, keep_cache: bool):
    cfg = params.config
    b, length = ids.shape
    if length > cfg.seq_len:
        raise ConfigurationError(
            f"sequence length {length} exceeds the model's position table ({cfg.seq_len})"
        )
    if ids.min() < 0 or ids.max() >= cfg.vocab_size:
        raise ConfigurationError("token id outside the embedding table")
    if dep.min() < 0 or dep.max() >= cfg.tagset_size:
        raise ConfigurationError("dependency tag id outside the tag embedding table")

    x = params["tok_emb"][ids] + params["pos_emb"][:length][None, :, :]
    if cfg.enrichment_mode == SUM_EMBEDDING:
        x = x + params["tag_emb"][dep]

    # (b, 1, 1, length): -MASK_BIAS at padded key positions, 0 elsewhere
    key_bias = (mask[:, None, None, :] - 1.0) * MASK_BIAS
    inv_sqrt = 1.0 / np.sqrt(cfg.head_dim)

    layers = []
    for i in range(cfg.n_layers):
        p = f"layer{i}."
        x_in = x
        q = _split_heads(x_in @ params[p + "attn.Wq"] + params[p + "attn.bq"], cfg.n_heads)
        k = _split_heads(x_in @ params[p + "attn.Wk"] + params[p + "attn.bk"], cfg.n_heads)
        v = _split_heads(x_in @ params[p + "attn.Wv"] + params[p + "attn.bv"], cfg.n_heads)
        scores = q @ k.transpose(0, 1, 3, 2) * inv_sqrt + key_bias
        scores -= scores.max(axis=-1, keepdims=True)
        e = np.exp(scores)
        attn = e / e.sum(axis=-1, keepdims=True)
        ctx = _merge_heads(attn @ v)
        attn_out = ctx @ params[p + "attn.Wo"] + params[p + "attn.bo"]
        h1, ln1_xhat, ln1_inv = _layernorm_forward(
            x_in + attn_out, params[p + "ln1.g"], params[p + "ln1.b"]
        )
        z = h1 @ params[p + "ff.W1"] + params[p + "ff.b1"]
        f = np.maximum(z, 0.0)
        ff_out = f @ params[p + "ff.W2"] + params[p + "ff.b2"]
        x, ln2_xhat, ln2_inv = _layernorm_forward(
            h1 + ff_out, params[p + "ln2.g"], params[p + "ln2.b"]
        )
        if keep_cache:
            layers.append({
                "x_in": x_in, "q": q, "k": k, "v": v, "attn": attn, "ctx": ctx,
                "ln1_xhat": ln1_xhat, "ln1_inv": ln1_inv, "h1": h1, "z": z, "f": f,
                "ln2_xhat": ln2_xhat, "ln2_inv": ln2_inv,
            })

    cls = x[:, 0, :]
    logits = cls @ params["head.W"] + params["head.b"]
    if not np.all(np.isfinite(logits)):
        raise NumericError("forward pass produced non-finite logits")
    cache = {"ids": ids, "dep": dep, "length": length, "layers": layers, "cls": cls} if keep_cache else None
    return logits, cls, cache


def forward(params: ModelParameters, seq: TokenSequence):
    """Run one sequence through the encoder.

    Returns the pair of class logits and the CLS sentence embedding.
    """
    ids, mask, dep = _as_batch([seq])
    logits, cls, _ = _forward_batch(params, ids, mask, dep, keep_cache=False)
    return logits[0], cls[0]


def _backward_batch(params: ModelParameters, cache: dict, dlogits: np.ndarray) -> dict[str, np.ndarray]:
    cfg = params.config
    length = cache["length"]
    d = cfg.d_model
    inv_sqrt = 1.0 / np.sqrt(cfg.head_dim)
    grads: dict[str, np.ndarray] = {}

    cls = cache["cls"]
    grads["head.W"] = cls.T @ dlogits
    grads["head.b"] = dlogits.sum(axis=0)
    dx = np.zeros((dlogits.shape[0], length, d))
    dx[:, 0, :] = dlogits @ params["head.W"].T

    for i in reversed(range(cfg.n_layers)):
        p = f"layer{i}."
        c = cache["layers"][i]
        dr2, dg2, db2 = _layernorm_backward(dx, c["ln2_xhat"], c["ln2_inv"], params[p + "ln2.g"])
        grads[p + "ln2.g"], grads[p + "ln2.b"] = dg2, db2

        dff_out = dr2
        grads[p + "ff.W2"] = np.tensordot(c["f"], dff_out, axes=([0, 1], [0, 1]))
        grads[p + "ff.b2"] = dff_out.sum(axis=(0, 1))
        dz = (dff_out @ params[p + "ff.W2"].T) * (c["z"] > 0.0)
        grads[p + "ff.W1"] = np.tensordot(c["h1"], dz, axes=([0, 1], [0, 1]))
        grads[p + "ff.b1"] = dz.sum(axis=(0, 1))
        dh1 = dr2 + dz @ params[p + "ff.W1"].T

        dr1, dg1, db1 = _layernorm_backward(dh1, c["ln1_xhat"], c["ln1_inv"], params[p + "ln1.g"])
        grads[p + "ln1.g"], grads[p + "ln1.b"] = dg1, db1

        dattn_out = dr1
        grads[p + "attn.Wo"] = np.tensordot(c["ctx"], dattn_out, axes=([0, 1], [0, 1]))
        grads[p + "attn.bo"] = dattn_out.sum(axis=(0, 1))
        dctx = _split_heads(dattn_out @ params[p + "attn.Wo"].T, cfg.n_heads)

        dattn = dctx @ c["v"].transpose(0, 1, 3, 2)
        dv = c["attn"].transpose(0, 1, 3, 2) @ dctx
        dscores = c["attn"] * (dattn - (dattn * c["attn"]).sum(axis=-1, keepdims=True))
        dq = dscores @ c["k"] * inv_sqrt
        dk = dscores.transpose(0, 1, 3, 2) @ c["q"] * inv_sqrt

        dq, dk, dv = _merge_heads(dq), _merge_heads(dk), _merge_heads(dv)
        x_in = c["x_in"]
        dx_in = dr1.copy()
        for name, dproj in (("q", dq), ("k", dk), ("v", dv)):
            grads[p + f"attn.W{name}"] = np.tensordot(x_in, dproj, axes=([0, 1], [0, 1]))
            grads[p + f"attn.b{name}"] = dproj.sum(axis=(0, 1))
            dx_in += dproj @ params[p + f"attn.W{name}"].T
        dx = dx_in

    grads["tok_emb"] = np.zeros_like(params["tok_emb"])
    np.add.at(grads["tok_emb"], cache["ids"].reshape(-1), dx.reshape(-1, d))
    grads["pos_emb"] = np.zeros_like(params["pos_emb"])
    grads["pos_emb"][:length] = dx.sum(axis=0)
    grads["tag_emb"] = np.zeros_like(params["tag_emb"])
    if cfg.enrichment_mode == SUM_EMBEDDING:
        np.add.at(grads["tag_emb"], cache["dep"].reshape(-1), dx.reshape(-1, d))
    return grads


def loss_and_grads(params: ModelParameters, ids: np.ndarray, mask: np.ndarray,
                   dep: np.ndarray, labels: np.ndarray):
    """Mean cross-entropy over a batch plus gradients for every tensor."""
    logits, _, cache = _forward_batch(params, ids, mask, dep, keep_cache=True)
    probs = softmax(logits)
    n = len(labels)
    picked = np.maximum(probs[np.arange(n), labels], PROB_FLOOR)
    loss = float(-np.log(picked).mean())
    dlogits = probs.copy()
    dlogits[np.arange(n), labels] -= 1.0
    dlogits /= n
    grads = _backward_batch(params, cache, dlogits)
    return loss, grads


def _loss_only(params, ids, mask, dep, labels) -> float:
    logits, _, _ = _forward_batch(params, ids, mask, dep, keep_cache=False)
    probs = softmax(logits)
    picked = np.maximum(probs[np.arange(len(labels)), labels], PROB_FLOOR)
    return float(-np.log(picked).mean())


def gradient_check(params: ModelParameters, seq: TokenSequence, label: int,
                   step: float, indices: Sequence[tuple[str, int]]) -> float:
    """Worst relative disagreement between analytic and central finite-difference
    gradients of the loss, over the selected (tensor name, flat index) scalars.

    Parameters are restored after probing; use double precision and a step
    around 1e-5.
    """
    if not np.isfinite(step) or step <= 0:
        raise InvalidInputError("finite-difference step must be positive")
    if not indices:
        raise InvalidInputError("no parameter indices to check")
    ids, mask, dep = _as_batch([seq])
    labels = np.asarray([label])
    _, grads = loss_and_grads(params, ids, mask, dep, labels)

    worst = 0.0
    for name, flat in indices:
        tensor = params[name]
        original = tensor.flat[flat]
        tensor.flat[flat] = original + step
        loss_plus = _loss_only(params, ids, mask, dep, labels)
        tensor.flat[flat] = original - step
        loss_minus = _loss_only(params, ids, mask, dep, labels)
        tensor.flat[flat] = original
        g_fd = (loss_plus - loss_minus) / (2.0 * step)
        g_an = float(grads[name].flat[flat])
        rel = abs(g_an - g_fd) / max(1e-8, abs(g_an) + abs(g_fd))
        worst = max(worst, rel)
    return worst


def spread_indices(params: ModelParameters, per_tensor: int = 1) -> list[tuple[str, int]]:
    """Deterministic probe points covering every tensor kind."""
    out: list[tuple[str, int]] = []
    for name, arr in params.items():
        n = arr.size
        for j in range(min(per_tensor, n)):
            out.append((name, (j * n) // per_tensor + (n // (2 * per_tensor))))
    return out
