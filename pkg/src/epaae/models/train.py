from __future__ import annotations

import csv
import logging
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Callable

import numpy as np

from ..autodiff import Adam, NonFiniteError, no_grad
from ..corpus import Corpus, Vocab, batches, build_vocab
from .config import ModelConfig
from .losses import autoencoder_losses, discriminator_loss, sample_prior, token_accuracy
from .network import AutoEncoder

log = logging.getLogger(__name__)


class TrainingError(RuntimeError):
    pass


@dataclass
class EpochLog:
    epoch: int
    rec: float
    adv_disc: float
    adv_enc: float
    aux: float


def write_loss_log(rows: list[EpochLog], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f.name for f in fields(EpochLog)])
        for row in rows:
            writer.writerow([row.epoch, *(f"{v:.8g}" for v in astuple(row)[1:])])


def train(
    corpus: Corpus,
    config: ModelConfig,
    seed: int = 0,
    vocab: Vocab | None = None,
    on_epoch: Callable[[EpochLog], None] | None = None,
) -> tuple[AutoEncoder, list[EpochLog]]:
    """Alternate a discriminator step and an encoder/decoder step per batch.

    Input noise is applied only in the encoder/decoder step.  The beta-VAE
    has no discriminator, so its first step is skipped.
    """
    if len(corpus) == 0:
        raise TrainingError("training corpus is empty")
    vocab = vocab or build_vocab(corpus)
    model = AutoEncoder(config, vocab, seed=seed)
    order_rng = np.random.default_rng([seed, 1])
    noise_rng = np.random.default_rng([seed, config.noise.seed, 2])
    prior_rng = np.random.default_rng([seed, 3])

    ae_opt = Adam(model.parameters("ae"), lr=config.lr, betas=config.adam_betas)
    disc_opt = Adam(model.parameters("disc"), lr=config.lr, betas=config.adam_betas) if config.adversarial else None

    history: list[EpochLog] = []
    for epoch in range(1, config.epochs + 1):
        sums = np.zeros(4)
        n_batches = 0
        for b, batch in enumerate(batches(corpus, vocab, config.batch_size, order_rng)):
            rows = [[int(t) for t in r[1 : n - 1]] for r, n in zip(batch.ids, batch.lengths)]
            try:
                disc_value = 0.0
                if disc_opt is not None:
                    with no_grad():
                        enc = model.encode(rows, rng=noise_rng, sample=config.model_kind == "laae")
                    z_post = enc.z.detach()
                    z_prior = sample_prior(len(rows), config.latent_dim, prior_rng, model.dtype)
                    disc_opt.zero_grad()
                    d_loss = discriminator_loss(model, z_post, z_prior)
                    d_loss.backward()
                    disc_opt.step()
                    disc_value = d_loss.item()

                ae_opt.zero_grad()
                losses = autoencoder_losses(model, rows, noise_rng)
                losses["total"].backward()
                ae_opt.step()
            except NonFiniteError as exc:
                raise TrainingError(f"non-finite loss at epoch {epoch}, batch {b}: {exc}") from exc
            sums += [
                losses["rec"].item(),
                disc_value,
                losses["adv_enc"].item() if "adv_enc" in losses else 0.0,
                losses["aux"].item() if "aux" in losses else 0.0,
            ]
            n_batches += 1
        entry = EpochLog(epoch, *(float(v) for v in sums / n_batches))
        history.append(entry)
        log.info("epoch %d rec %.4f adv_disc %.4f adv_enc %.4f aux %.4f", *astuple(entry))
        if on_epoch is not None:
            on_epoch(entry)
    return model, history


def reconstruction_accuracy(model: AutoEncoder, corpus: Corpus, batch_size: int = 256) -> float:
    """Teacher-forced next-token accuracy (eos included) with noise off."""
    rows = [model.vocab.encode(s.tokens) for s in corpus]
    hits = total = 0
    for start in range(0, len(rows), batch_size):
        h, n = token_accuracy(model, rows[start : start + batch_size])
        hits += h
        total += n
    return hits / total
