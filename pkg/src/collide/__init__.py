"""Recovering one-dimensional orderings from collision data."""

from .core import (
    CollideError,
    CollisionEvent,
    CollisionGraph,
    DominanceRelation,
    InstanceTooLarge,
    InvalidHistory,
    LayerDecomposition,
    NotConnected,
    NotFunctionGraph,
    OrderedHistory,
    OrderingTimeline,
)
from .ordered_recovery import recover_end_position, recover_timeline, recover_timeline_by_swapping
from .funcgraph import layer_decomposition, recognize_function_graph
from .completion import InterleavingInstance, solve_interleaving

__version__ = "0.1.0"

__all__ = [
    "CollideError",
    "CollisionEvent",
    "CollisionGraph",
    "DominanceRelation",
    "InstanceTooLarge",
    "InterleavingInstance",
    "InvalidHistory",
    "LayerDecomposition",
    "NotConnected",
    "NotFunctionGraph",
    "OrderedHistory",
    "OrderingTimeline",
    "layer_decomposition",
    "recognize_function_graph",
    "recover_end_position",
    "recover_timeline",
    "recover_timeline_by_swapping",
    "solve_interleaving",
]
