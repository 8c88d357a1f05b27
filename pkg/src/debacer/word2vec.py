"""Skip-gram word embeddings with negative sampling.

Single-worker numpy trainer. One SGD step per token position: the
position's contexts (reduced-window) and their negatives form one true
gradient, applied before the next position is touched - so frequent
tokens take steps at the same cadence as classic sequential SGNS and
norms stay bounded. Negatives come from the unigram^0.75 table.
Deterministic per seed.
"""

from __future__ import annotations

import numpy as np

from .errors import EmptyCorpus
from .features import EmbeddingTable
from .randomness import stream

_NEG_TABLE_POWER = 0.75


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def train_word2vec(
    token_docs,
    dim: int = 100,
    window: int = 5,
    negatives: int = 5,
    epochs: int = 5,
    min_count: int = 2,
    learning_rate: float = 0.025,
    seed: int = 0,
) -> EmbeddingTable:
    """Train embeddings on tokenized documents.

    The returned table records the hyperparameters and the per-epoch mean
    pair loss under ``hyperparams["loss_curve"]``.
    """
    counts: dict[str, int] = {}
    for tokens in token_docs:
        for t in tokens:
            counts[t] = counts.get(t, 0) + 1
    vocab = sorted(t for t, c in counts.items() if c >= min_count)
    if not vocab:
        raise EmptyCorpus("no token occurs at least min_count times")
    idx = {t: i for i, t in enumerate(vocab)}
    v = len(vocab)

    encoded = []
    for tokens in token_docs:
        ids = np.array([idx[t] for t in tokens if t in idx], dtype=np.int64)
        if ids.size >= 2:
            encoded.append(ids)
    if not encoded:
        raise EmptyCorpus("no document has two in-vocabulary tokens")

    freq = np.array([counts[t] for t in vocab], dtype=np.float64)
    neg_cdf = np.cumsum(freq**_NEG_TABLE_POWER)
    neg_cdf /= neg_cdf[-1]

    rng = stream(seed, 41)
    w_in = (rng.random((v, dim)) - 0.5) / dim
    w_out = np.zeros((v, dim))

    # schedule on the expected pair count (window widths are sampled)
    n_positions = sum(len(ids) for ids in encoded)
    total_steps = max(epochs * n_positions * (window + 1), 1)
    lr_min = learning_rate * 1e-4
    step = 0
    loss_curve: list[float] = []
    eps = 1e-10

    for epoch in range(epochs):
        erng = stream(seed, 42, epoch)
        epoch_loss = 0.0
        epoch_pairs = 0
        for di in erng.permutation(len(encoded)):
            ids = encoded[di]
            n = ids.size
            spans = erng.integers(1, window + 1, size=n)
            for i in range(n):
                lo = max(0, i - spans[i])
                hi = min(n, i + spans[i] + 1)
                ctx = np.concatenate([ids[lo:i], ids[i + 1 : hi]])
                m = ctx.size
                if m == 0:
                    continue
                neg = np.searchsorted(neg_cdf, erng.random((m, negatives)))

                lr = max(learning_rate * (1.0 - step / total_steps), lr_min)
                step += m

                center = ids[i]
                vc = w_in[center]
                uo = w_out[ctx]  # (m, dim)
                un = w_out[neg]  # (m, negatives, dim)

                pos_sig = _sigmoid(uo @ vc)
                neg_sig = _sigmoid(np.einsum("mkd,d->mk", un, vc))

                epoch_loss += float(
                    -np.log(pos_sig + eps).sum() - np.log(1.0 - neg_sig + eps).sum()
                )
                epoch_pairs += m

                g_pos = pos_sig - 1.0  # (m,)
                grad_v = g_pos @ uo + np.einsum("mk,mkd->d", neg_sig, un)
                # vc is a view into w_in: update w_out first (uo/un are
                # fancy-indexed copies, so grad_v is unaffected), then the
                # center row
                np.add.at(w_out, ctx, -lr * g_pos[:, None] * vc)
                np.add.at(
                    w_out,
                    neg.ravel(),
                    (-lr * neg_sig[:, :, None] * vc).reshape(-1, dim),
                )
                w_in[center] = vc - lr * grad_v

        loss_curve.append(epoch_loss / max(epoch_pairs, 1))

    return EmbeddingTable(
        vectors={t: w_in[idx[t]].copy() for t in vocab},
        dim=dim,
        hyperparams={
            "architecture": "skip-gram negative sampling",
            "dim": dim,
            "window": window,
            "negatives": negatives,
            "epochs": epochs,
            "min_count": min_count,
            "learning_rate": learning_rate,
            "seed": seed,
            "loss_curve": loss_curve,
        },
    )
