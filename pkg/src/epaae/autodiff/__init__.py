from . import tensor as ops
from .optim import Adam, AdamState, adam_step
from .tensor import (
    GraphConsumedError,
    NonFiniteError,
    ShapeError,
    Tensor,
    backward,
    default_dtype,
    get_default_dtype,
    is_grad_enabled,
    no_grad,
    set_default_dtype,
    topological_order,
)

__all__ = [
    "Adam",
    "AdamState",
    "GraphConsumedError",
    "NonFiniteError",
    "ShapeError",
    "Tensor",
    "adam_step",
    "backward",
    "default_dtype",
    "get_default_dtype",
    "is_grad_enabled",
    "no_grad",
    "ops",
    "set_default_dtype",
    "topological_order",
]
