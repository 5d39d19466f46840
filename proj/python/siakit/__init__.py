"""Service-to-interface assignment: exact and heuristic solvers.

Instances and allocations are plain dicts in the same JSON schema the
``sia`` command-line tool reads and writes.
"""

import json

from . import _core
from ._core import InfeasibleError, SchemaError

__all__ = [
    "InfeasibleError",
    "SchemaError",
    "solve",
    "brute_force",
    "bounds",
    "validate",
    "decompose",
    "partition_instance",
]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def solve(instance, solver="exact", seed=None, rounds=1, node_budget=None):
    """Returns {"solver", "rounds", "proven_optimal", "x", "cost"}."""
    return json.loads(_core.solve(_text(instance), solver, seed, rounds, node_budget))


def brute_force(instance, rounds=1):
    return json.loads(_core.brute_force(_text(instance), rounds))


def bounds(instance):
    return json.loads(_core.bounds(_text(instance)))


def validate(instance, allocation, rounds=1):
    return json.loads(_core.validate(_text(instance), _text(allocation), rounds))


def decompose(instance, allocation, rounds):
    """Per-round x tensors that sum to allocation["x"]."""
    return json.loads(_core.decompose(_text(instance), _text(allocation), rounds))


def partition_instance(values):
    return json.loads(_core.partition_instance(list(values)))
