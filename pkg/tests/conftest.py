import numpy as np
import pytest

from epaae.corpus import Corpus, build_vocab
from epaae.models import AutoEncoder, ModelConfig

TINY_TEXTS = ["the man said the food is good", "the girl said the place is bad", "the wife said the meal is great"]

MODEL_VARIANTS = {
    "aae": dict(model_kind="aae"),
    "epaae": dict(model_kind="aae", noise=dict(zeta=2.5)),
    "daae": dict(model_kind="aae", noise=dict(drop_p=0.3)),
    "laae": dict(model_kind="laae"),
    "betavae": dict(model_kind="betavae"),
}


def tiny_model(variant: str = "aae", seed: int = 0, **overrides) -> AutoEncoder:
    """A float64 model with every dimension at most 8."""
    spec = dict(MODEL_VARIANTS[variant])
    noise = spec.pop("noise", {})
    dims = dict(emb_dim=6, hidden_dim=5, latent_dim=4, disc_hidden=8, batch_size=2, epochs=1, dtype="float64")
    cfg = ModelConfig(**{**dims, **spec, **overrides}).with_noise(**noise)
    return AutoEncoder(cfg, build_vocab(Corpus.from_texts(TINY_TEXTS), max_size=8), seed=seed)


@pytest.fixture
def tiny_rows():
    vocab = tiny_model().vocab
    return [vocab.encode(t) for t in TINY_TEXTS[:2]] + [vocab.encode("the man said")]


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, detail = RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
