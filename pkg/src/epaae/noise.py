"""Input perturbations: token deletion and norm-scaled embedding noise."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .corpus import BOS, EOS, PAD

SCALE_DISTS = ("gaussian", "uniform")
_PROTECTED = (PAD, BOS, EOS)


@dataclass(frozen=True)
class NoiseSpec:
    zeta: float = 0.0
    drop_p: float = 0.0
    scale_dist: str = "gaussian"
    seed: int = 0
    clamp: bool = False

    def __post_init__(self):
        if self.zeta < 0:
            raise ValueError(f"zeta must be non-negative, got {self.zeta}")
        if not 0.0 <= self.drop_p <= 1.0:
            raise ValueError(f"drop_p must lie in [0, 1], got {self.drop_p}")
        if self.scale_dist not in SCALE_DISTS:
            raise ValueError(f"scale_dist must be one of {SCALE_DISTS}")

    @property
    def sigma(self) -> float:
        # three standard deviations of the scale distribution span zeta
        return self.zeta / 3.0

    @property
    def active(self) -> bool:
        return self.zeta > 0 or self.drop_p > 0

    def to_dict(self) -> dict:
        return asdict(self)


def drop_tokens(tokens: Sequence[int], drop_p: float, rng: np.random.Generator) -> list[int]:
    """Delete each content token independently with probability ``drop_p``.

    pad/bos/eos are never deleted.  If every content token would go, one of
    them, chosen uniformly, survives.
    """
    tokens = list(tokens)
    if not tokens:
        raise ValueError("cannot drop from an empty sequence")
    if drop_p <= 0:
        return tokens
    content = [i for i, t in enumerate(tokens) if t not in _PROTECTED]
    if not content:
        return tokens
    dropped = rng.random(len(content)) < drop_p
    if dropped.all():
        dropped[rng.integers(len(content))] = False
    removed = {content[i] for i in np.flatnonzero(dropped)}
    return [t for i, t in enumerate(tokens) if i not in removed]


def sample_perturbation(n: int, dim: int, spec: NoiseSpec, rng: np.random.Generator):
    """Draw per-row scales ``s`` (n, 1) and unit directions ``z_hat`` (n, dim).

    The noise for a row ``e`` is then ``s * |e| * z_hat``.
    """
    if dim < 1:
        raise ValueError("embedding dimension must be at least 1")
    z = rng.standard_normal((n, dim))
    norms = np.linalg.norm(z, axis=1, keepdims=True)
    while np.any(norms == 0):
        bad = norms[:, 0] == 0
        z[bad] = rng.standard_normal((int(bad.sum()), dim))
        norms = np.linalg.norm(z, axis=1, keepdims=True)
    z_hat = z / norms
    if spec.scale_dist == "gaussian":
        s = rng.normal(0.0, spec.sigma, size=(n, 1))
    else:
        s = rng.uniform(-spec.zeta, spec.zeta, size=(n, 1))
    if spec.clamp:
        s = np.clip(s, -spec.zeta, spec.zeta)
    return s, z_hat


def perturb_embeddings(e: np.ndarray, spec: NoiseSpec, rng: np.random.Generator) -> np.ndarray:
    """Blur every row of ``e`` inside a hypersphere of radius ~ zeta * |row|.

    ``e`` may be (L, E) or (..., E); all rows are perturbed in one pass.
    """
    e = np.asarray(e)
    if e.shape[-1] < 1:
        raise ValueError("embedding dimension must be at least 1")
    if spec.zeta == 0:
        return e.copy()
    flat = e.reshape(-1, e.shape[-1])
    s, z_hat = sample_perturbation(flat.shape[0], flat.shape[1], spec, rng)
    noise = s * np.linalg.norm(flat, axis=1, keepdims=True) * z_hat
    out = (flat + noise).astype(e.dtype)
    if not np.all(np.isfinite(out)):
        raise FloatingPointError("embedding perturbation produced non-finite values")
    return out.reshape(e.shape)


def expected_radius(e: np.ndarray, zeta: float) -> np.ndarray:
    """Diagnostic radius ``zeta * |e|`` per row; not used when sampling."""
    return zeta * np.linalg.norm(np.asarray(e), axis=-1)


def apply_input_noise(
    tokens: Sequence[int],
    embedding_table: np.ndarray,
    spec: NoiseSpec,
    rng: np.random.Generator,
    training: bool = True,
) -> np.ndarray:
    """Token deletion followed by embedding perturbation; clean lookup when not training."""
    if not training:
        return np.asarray(embedding_table)[list(tokens)]
    kept = drop_tokens(tokens, spec.drop_p, rng)
    return perturb_embeddings(np.asarray(embedding_table)[kept], spec, rng)
