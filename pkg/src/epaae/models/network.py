"""GRU autoencoder shared by the AAE, LAAE and beta-VAE objectives."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..autodiff import Tensor, no_grad
from ..autodiff import ops as F
from ..corpus import BOS, EOS, PAD, Vocab, pad_rows
from ..noise import NoiseSpec, drop_tokens, sample_perturbation
from .config import ModelConfig

ADV_EPS = 1e-7
GATES = ("r", "u", "n")
LATENT_INIT_GAIN = 4.0


@dataclass
class LatentOut:
    mu: Tensor
    logvar: Tensor | None
    z: Tensor


def _uniform(rng, shape, bound, dtype):
    return rng.uniform(-bound, bound, size=shape).astype(dtype)


def init_params(config: ModelConfig, vocab_size: int, rng: np.random.Generator) -> dict[str, Tensor]:
    """Fresh parameters; every shape follows from ``config`` and ``vocab_size``."""
    dt = np.dtype(config.dtype)
    E, H, Z, Dh = config.emb_dim, config.hidden_dim, config.latent_dim, config.disc_hidden
    shapes: dict[str, tuple[tuple[int, ...], float]] = {}
    gru_bound = 1.0 / np.sqrt(H)
    for prefix in ("enc_fwd", "enc_bwd", "dec"):
        for g in GATES:
            shapes[f"{prefix}.wx_{g}"] = ((E, H), gru_bound)
            shapes[f"{prefix}.wh_{g}"] = ((H, H), gru_bound)
            shapes[f"{prefix}.b_{g}"] = ((H,), gru_bound)
            if prefix == "dec":
                shapes[f"dec.wz_{g}"] = ((Z, H), gru_bound)
        shapes[f"{prefix}.bh_n"] = ((H,), gru_bound)
    # wide latent head: initial codes spread on the prior's scale, which keeps
    # the early adversarial gradient from swamping the reconstruction signal
    shapes["enc.mu.w"] = ((2 * H, Z), LATENT_INIT_GAIN / np.sqrt(2 * H))
    shapes["enc.mu.b"] = ((Z,), 1.0 / np.sqrt(2 * H))
    if config.stochastic_latent:
        shapes["enc.logvar.w"] = ((2 * H, Z), 1.0 / np.sqrt(2 * H))
        shapes["enc.logvar.b"] = ((Z,), 1.0 / np.sqrt(2 * H))
    shapes["dec.init.w"] = ((Z, H), 1.0 / np.sqrt(Z))
    shapes["dec.init.b"] = ((H,), 1.0 / np.sqrt(Z))
    shapes["dec.out.w"] = ((H, vocab_size), 1.0 / np.sqrt(H))
    shapes["dec.out.b"] = ((vocab_size,), 1.0 / np.sqrt(H))
    if config.adversarial:
        shapes["disc.w1"] = ((Z, Dh), 1.0 / np.sqrt(Z))
        shapes["disc.b1"] = ((Dh,), 1.0 / np.sqrt(Z))
        shapes["disc.w2"] = ((Dh, 1), 1.0 / np.sqrt(Dh))
        shapes["disc.b2"] = ((1,), 1.0 / np.sqrt(Dh))
    params = {"embedding": Tensor(rng.standard_normal((vocab_size, E)).astype(dt), requires_grad=True, dtype=dt)}
    for name, (shape, bound) in shapes.items():
        params[name] = Tensor(_uniform(rng, shape, bound, dt), requires_grad=True, dtype=dt)
    return params


class AutoEncoder:
    """Bi-GRU encoder, GRU decoder conditioned on z, optional discriminator.

    The decoder sees z twice: a linear map of z sets its initial state, and
    z is concatenated to every input embedding (implemented as a separate
    z-projection added to each gate).
    """

    def __init__(self, config: ModelConfig, vocab: Vocab, params: dict[str, Tensor] | None = None, seed: int = 0):
        self.config = config
        self.vocab = vocab
        self.params = params if params is not None else init_params(config, len(vocab), np.random.default_rng(seed))
        self.dtype = np.dtype(config.dtype)

    def __getitem__(self, name: str) -> Tensor:
        return self.params[name]

    def parameter_names(self, group: str) -> list[str]:
        if group == "disc":
            return [n for n in self.params if n.startswith("disc.")]
        return [n for n in self.params if not n.startswith("disc.")]

    def parameters(self, group: str) -> list[Tensor]:
        return [self.params[n] for n in self.parameter_names(group)]

    # ------------------------------------------------------------ encoder

    def _gru_inputs(self, x: Tensor, prefix: str) -> dict[str, Tensor]:
        p = self.params
        return {g: F.matmul(x, p[f"{prefix}.wx_{g}"]) + p[f"{prefix}.b_{g}"] for g in GATES}

    def _gru_step(self, prefix: str, h: Tensor, xr: Tensor, xu: Tensor, xn: Tensor) -> Tensor:
        p = self.params
        r = F.sigmoid(xr + F.matmul(h, p[f"{prefix}.wh_r"]))
        u = F.sigmoid(xu + F.matmul(h, p[f"{prefix}.wh_u"]))
        n = F.tanh(xn + r * (F.matmul(h, p[f"{prefix}.wh_n"]) + p[f"{prefix}.bh_n"]))
        return n + u * (h - n)

    def embed(
        self,
        rows: Sequence[Sequence[int]],
        noise: NoiseSpec | None = None,
        rng: np.random.Generator | None = None,
    ) -> tuple[Tensor, np.ndarray]:
        """Time-major embeddings (T*B, E) of ``rows + eos`` and the (T, B) mask.

        With ``noise`` set, tokens are deleted first and the surviving
        embeddings are perturbed.
        """
        if not rows or any(len(r) == 0 for r in rows):
            raise ValueError("cannot encode an empty sentence")
        rows = [list(r) for r in rows]
        if noise is not None and noise.drop_p > 0:
            rows = [drop_tokens(r, noise.drop_p, rng) for r in rows]
        ids, lengths = pad_rows([[*r, EOS] for r in rows])
        B, T = ids.shape
        mask = (np.arange(T)[:, None] < lengths[None, :]).astype(self.dtype)
        e = F.gather(self.params["embedding"], ids.T.reshape(-1))
        if noise is not None and noise.zeta > 0:
            s, z_hat = sample_perturbation(T * B, self.config.emb_dim, noise, rng)
            direction = (s * z_hat * mask.reshape(-1, 1)).astype(self.dtype)
            e = e + F.row_norm(e) * Tensor(direction)
        return e, mask

    def encode_embedded(self, e: Tensor, mask: np.ndarray) -> Tensor:
        """Final forward/backward states, concatenated: (B, 2H)."""
        T, B = mask.shape
        H = self.config.hidden_dim
        finals = []
        for prefix, steps in (("enc_fwd", range(T)), ("enc_bwd", range(T - 1, -1, -1))):
            x = self._gru_inputs(e, prefix)
            h = Tensor(np.zeros((B, H), dtype=self.dtype))
            for t in steps:
                sl = slice(t * B, (t + 1) * B)
                h_new = self._gru_step(prefix, h, x["r"][sl], x["u"][sl], x["n"][sl])
                m = mask[t][:, None]
                h = h_new if m.all() else h + Tensor(m) * (h_new - h)
            finals.append(h)
        return F.concat(finals, axis=1)

    def encode(
        self,
        rows: Sequence[Sequence[int]],
        noise: NoiseSpec | None = None,
        rng: np.random.Generator | None = None,
        sample: bool = False,
    ) -> LatentOut:
        """Encode token-id rows. ``z`` is ``mu`` unless ``sample`` asks for the
        reparameterised draw of a stochastic-latent model."""
        e, mask = self.embed(rows, noise, rng)
        h = self.encode_embedded(e, mask)
        p = self.params
        mu = F.matmul(h, p["enc.mu.w"]) + p["enc.mu.b"]
        logvar = None
        if self.config.stochastic_latent:
            logvar = F.matmul(h, p["enc.logvar.w"]) + p["enc.logvar.b"]
        z = mu
        if sample and logvar is not None:
            eps = rng.standard_normal(mu.shape).astype(self.dtype)
            z = mu + F.exp(F.scale(logvar, 0.5)) * Tensor(eps)
        return LatentOut(mu, logvar, z)

    # ------------------------------------------------------------ decoder

    def _decoder_start(self, z: Tensor) -> tuple[Tensor, dict[str, Tensor]]:
        p = self.params
        h0 = F.matmul(z, p["dec.init.w"]) + p["dec.init.b"]
        zproj = {g: F.matmul(z, p[f"dec.wz_{g}"]) for g in GATES}
        return h0, zproj

    def decode_logits(self, z: Tensor, ids: np.ndarray) -> Tensor:
        """Teacher-forced logits, time-major (T*B, V), for ``ids`` = bos+tokens+eos rows.

        Row ``t*B + b`` predicts ``ids[b, t + 1]``.
        """
        ids = np.asarray(ids)
        B = ids.shape[0]
        inputs = ids[:, :-1]
        T = inputs.shape[1]
        h, zproj = self._decoder_start(z)
        x = self._gru_inputs(F.gather(self.params["embedding"], inputs.T.reshape(-1)), "dec")
        x = {g: x[g] + F.concat([zproj[g]] * T, axis=0) for g in GATES}
        states = []
        for t in range(T):
            sl = slice(t * B, (t + 1) * B)
            h = self._gru_step("dec", h, x["r"][sl], x["u"][sl], x["n"][sl])
            states.append(h)
        hs = F.concat(states, axis=0)
        return F.matmul(hs, self.params["dec.out.w"]) + self.params["dec.out.b"]

    @staticmethod
    def decoder_targets(ids: np.ndarray) -> np.ndarray:
        return np.asarray(ids)[:, 1:].T.reshape(-1)

    def greedy(self, z: np.ndarray, max_len: int = 20) -> list[list[int]]:
        """Argmax decoding from latent rows; stops at eos or ``max_len`` tokens."""
        if max_len < 1:
            raise ValueError("max_len must be at least 1")
        z = np.atleast_2d(np.asarray(z, dtype=self.dtype))
        B = z.shape[0]
        p = self.params
        with no_grad():
            zt = Tensor(z)
            h, zproj = self._decoder_start(zt)
            prev = np.full(B, BOS, dtype=np.int64)
            out = np.full((B, max_len), PAD, dtype=np.int64)
            done = np.zeros(B, dtype=bool)
            for t in range(max_len):
                x = self._gru_inputs(F.gather(p["embedding"], prev), "dec")
                h = self._gru_step("dec", h, *(x[g] + zproj[g] for g in GATES))
                logits = F.matmul(h, p["dec.out.w"]) + p["dec.out.b"]
                prev = logits.data.argmax(axis=1)
                out[:, t] = np.where(done, PAD, prev)
                done |= prev == EOS
                if done.all():
                    break
        result = []
        for row in out:
            toks = []
            for i in row:
                if i in (EOS, PAD):
                    break
                toks.append(int(i))
            result.append(toks)
        return result

    # ------------------------------------------------------------ discriminator

    def discriminate(self, z: Tensor) -> Tensor:
        """Probability (B, 1) that ``z`` was drawn from the prior, clipped away from 0 and 1."""
        p = self.params
        hidden = F.relu(F.matmul(z, p["disc.w1"]) + p["disc.b1"])
        prob = F.sigmoid(F.matmul(hidden, p["disc.w2"]) + p["disc.b2"])
        return F.clip(prob, ADV_EPS, 1.0 - ADV_EPS)

    # ------------------------------------------------------------ inference helpers

    def encode_texts(self, texts: Sequence[str | Sequence[str]], batch_size: int = 256) -> np.ndarray:
        """Deterministic latent codes (mu) for raw sentences, noise off."""
        rows = [self.vocab.encode(t) for t in texts]
        out = []
        with no_grad():
            for start in range(0, len(rows), batch_size):
                out.append(self.encode(rows[start : start + batch_size]).mu.data)
        if not out:
            raise ValueError("nothing to encode")
        return np.concatenate(out, axis=0)

    def decode_texts(self, z: np.ndarray, max_len: int = 20, batch_size: int = 256) -> list[str]:
        z = np.atleast_2d(z)
        texts = []
        for start in range(0, len(z), batch_size):
            texts.extend(self.vocab.decode(r) for r in self.greedy(z[start : start + batch_size], max_len))
        return texts

    def reconstruct(self, texts: Sequence[str], max_len: int = 20) -> list[str]:
        return self.decode_texts(self.encode_texts(texts), max_len)
