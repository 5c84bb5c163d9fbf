from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace

from ..noise import NoiseSpec

MODEL_KINDS = ("aae", "laae", "betavae")


@dataclass(frozen=True)
class ModelConfig:
    """Architecture, objective and optimiser settings.

    Defaults are the full-size settings; ``ModelConfig.desk()`` shrinks the
    network to something that trains on one CPU core in about a minute.
    """

    emb_dim: int = 300
    hidden_dim: int = 256
    latent_dim: int = 128
    disc_hidden: int = 512
    lambda_adv: float = 10.0
    lr: float = 1e-3
    adam_betas: tuple[float, float] = (0.5, 0.999)
    epochs: int = 30
    batch_size: int = 32
    model_kind: str = "aae"
    beta: float = 0.15
    lambda1: float = 0.05
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    dtype: str = "float32"

    def __post_init__(self):
        for name in ("emb_dim", "hidden_dim", "latent_dim", "disc_hidden", "epochs", "batch_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.lambda_adv < 0 or self.beta < 0 or self.lambda1 < 0:
            raise ValueError("loss weights must be non-negative")
        if self.lr <= 0:
            raise ValueError("lr must be positive")
        if self.model_kind not in MODEL_KINDS:
            raise ValueError(f"model_kind must be one of {MODEL_KINDS}")
        if self.dtype not in ("float32", "float64"):
            raise ValueError("dtype must be float32 or float64")
        object.__setattr__(self, "adam_betas", tuple(float(b) for b in self.adam_betas))

    @classmethod
    def desk(cls, **overrides) -> ModelConfig:
        base = dict(emb_dim=64, hidden_dim=64, latent_dim=16, batch_size=16)
        base.update(overrides)
        return cls(**base)

    @property
    def adversarial(self) -> bool:
        return self.model_kind in ("aae", "laae")

    @property
    def stochastic_latent(self) -> bool:
        return self.model_kind in ("laae", "betavae")

    def with_noise(self, **kw) -> ModelConfig:
        return replace(self, noise=replace(self.noise, **kw))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["adam_betas"] = list(self.adam_betas)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ModelConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown model config keys: {sorted(unknown)}")
        d = dict(d)
        if "noise" in d and isinstance(d["noise"], dict):
            d["noise"] = NoiseSpec(**d["noise"])
        if "adam_betas" in d:
            d["adam_betas"] = tuple(d["adam_betas"])
        return cls(**d)
