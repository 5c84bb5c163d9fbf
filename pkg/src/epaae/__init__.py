"""Embedding-perturbed adversarial autoencoders for text style transfer."""

__version__ = "0.1.0"
