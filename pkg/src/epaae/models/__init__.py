from .checkpoint import CheckpointError, load, save
from .config import MODEL_KINDS, ModelConfig
from .losses import (
    adversarial_losses,
    autoencoder_losses,
    kl_loss,
    laae_latent_noise,
    reconstruction_loss,
)
from .network import AutoEncoder
from .train import EpochLog, TrainingError, reconstruction_accuracy, train, write_loss_log

__all__ = [
    "MODEL_KINDS",
    "AutoEncoder",
    "CheckpointError",
    "EpochLog",
    "ModelConfig",
    "TrainingError",
    "adversarial_losses",
    "autoencoder_losses",
    "kl_loss",
    "laae_latent_noise",
    "load",
    "reconstruction_accuracy",
    "reconstruction_loss",
    "save",
    "train",
    "write_loss_log",
]
