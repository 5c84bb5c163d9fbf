"""Objective terms for the autoencoder family."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..autodiff import Tensor, no_grad
from ..autodiff import ops as F
from ..corpus import PAD, make_batch
from .network import AutoEncoder


def reconstruction_loss(logits: Tensor, targets: np.ndarray, per_sentence: int | None = None) -> Tensor:
    """Negative log-likelihood of ``targets``, padding excluded.

    Averaged per token by default.  With ``per_sentence=B`` the token sum is
    divided by the number of sentences instead, giving the sentence-level
    NLL that the training objective weighs against the adversarial term.
    """
    nll = F.softmax_cross_entropy(logits, targets, ignore_id=PAD)
    if per_sentence is None:
        return nll
    return F.scale(nll, int((np.asarray(targets) != PAD).sum()) / per_sentence)


def adversarial_losses(
    model: AutoEncoder, z_post: Tensor, rng: np.random.Generator | None = None, z_prior: Tensor | None = None
) -> tuple[Tensor, Tensor]:
    """(discriminator loss, encoder loss).

    The discriminator minimises -log D(prior) - log(1 - D(posterior)); the
    encoder minimises the non-saturating -log D(posterior).  Prior samples
    are drawn from N(0, I) to match the posterior batch unless given.
    """
    if z_prior is None:
        z_prior = sample_prior(z_post.shape[0], z_post.shape[1], rng, z_post.dtype)
    return discriminator_loss(model, z_post, z_prior), encoder_adversarial_loss(model, z_post)


def discriminator_loss(model: AutoEncoder, z_post: Tensor, z_prior: Tensor) -> Tensor:
    d_prior = model.discriminate(z_prior)
    d_post = model.discriminate(z_post)
    return -F.mean(F.log(d_prior)) - F.mean(F.log(1.0 - d_post))


def encoder_adversarial_loss(model: AutoEncoder, z_post: Tensor) -> Tensor:
    return -F.mean(F.log(model.discriminate(z_post)))


def kl_loss(mu: Tensor, logvar: Tensor) -> Tensor:
    """KL(N(mu, sigma^2) || N(0, I)), summed over latent dims, averaged over the batch."""
    if mu.shape != logvar.shape:
        raise ValueError("mu and logvar shapes differ")
    per_elem = mu * mu + F.exp(logvar) - 1.0 - logvar
    return F.scale(F.sum(per_elem), 0.5 / mu.shape[0])


def laae_latent_noise(
    mu: Tensor, logvar: Tensor, lambda1: float, rng: np.random.Generator | None = None, eps=None
) -> tuple[Tensor, Tensor]:
    """Gaussian latent noise and the penalty that keeps its variance from vanishing.

    penalty = lambda1 * mean(max(0, -logvar)); zero once sigma >= 1.
    """
    if eps is None:
        eps = rng.standard_normal(mu.shape)
    eps = np.asarray(eps, dtype=mu.dtype)
    z = mu + F.exp(F.scale(logvar, 0.5)) * Tensor(eps)
    penalty = F.scale(F.mean(F.clip(-logvar, 0.0, None)), lambda1)
    return z, penalty


def sample_prior(n: int, dim: int, rng: np.random.Generator, dtype) -> Tensor:
    return Tensor(rng.standard_normal((n, dim)).astype(dtype))


def autoencoder_losses(
    model: AutoEncoder, rows: Sequence[Sequence[int]], rng: np.random.Generator, noise: bool = True
) -> dict[str, Tensor]:
    """Encoder/decoder objective for one batch of token-id rows.

    Returns ``total`` plus the parts: ``rec`` (per token), ``adv_enc`` and
    ``aux`` (KL for the beta-VAE, variance penalty for the LAAE).  ``total``
    uses the per-sentence reconstruction NLL.  Input noise is applied
    when ``noise`` is set and the config asks for it.
    """
    cfg = model.config
    spec = cfg.noise if noise and cfg.noise.active else None
    batch = make_batch(rows)
    enc = model.encode(rows, noise=spec, rng=rng)
    out: dict[str, Tensor] = {}
    z = enc.mu
    if cfg.model_kind == "laae":
        z, out["aux"] = laae_latent_noise(enc.mu, enc.logvar, cfg.lambda1, rng)
    elif cfg.model_kind == "betavae":
        eps = rng.standard_normal(enc.mu.shape).astype(model.dtype)
        z = enc.mu + F.exp(F.scale(enc.logvar, 0.5)) * Tensor(eps)
        out["aux"] = kl_loss(enc.mu, enc.logvar)
    logits = model.decode_logits(z, batch.ids)
    targets = model.decoder_targets(batch.ids)
    out["rec"] = reconstruction_loss(logits, targets)
    total = F.scale(out["rec"], int((targets != PAD).sum()) / len(rows))
    if cfg.model_kind == "betavae":
        total = total + F.scale(out["aux"], cfg.beta)
    else:
        if cfg.lambda_adv > 0:
            out["adv_enc"] = encoder_adversarial_loss(model, z)
            total = total + F.scale(out["adv_enc"], cfg.lambda_adv)
        if "aux" in out:
            total = total + out["aux"]
    out["total"] = total
    out["z"] = z
    return out


def token_accuracy(model: AutoEncoder, rows: Sequence[Sequence[int]]) -> tuple[int, int]:
    """Teacher-forced argmax hits and token count (eos included) on clean input."""
    batch = make_batch(rows)
    with no_grad():
        z = model.encode(rows).mu
        logits = model.decode_logits(z, batch.ids).data
    targets = model.decoder_targets(batch.ids)
    keep = targets != PAD
    hits = int(((logits.argmax(axis=1) == targets) & keep).sum())
    return hits, int(keep.sum())
