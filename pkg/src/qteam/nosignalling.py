"""No-signalling checks and the 24-vertex binary no-signalling polytope."""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .classical import TIE_TOL, DeterministicStrategy, to_table
from .problem import DecisionProblem, StrategyTable, batch_costs


def check_no_signalling(q, tol: float = 1e-9) -> bool:
    """True when neither agent's action marginal depends on the other's observation."""
    arr = np.asarray(q, dtype=float)
    marg_b = arr.sum(axis=1)  # [u_b, xi_b, xi_h]
    marg_h = arr.sum(axis=0)  # [u_h, xi_b, xi_h]
    gap_b = np.abs(marg_b[:, :, 0] - marg_b[:, :, 1]).max()
    gap_h = np.abs(marg_h[:, 0, :] - marg_h[:, 1, :]).max()
    return bool(gap_b <= tol and gap_h <= tol)


@dataclass(frozen=True, order=True)
class NsVertexId:
    """``local`` carries (alpha, eta, beta, delta); ``nonlocal`` carries (alpha, beta, delta)."""

    kind: Literal["local", "nonlocal"]
    labels: tuple[int, ...]

    def __post_init__(self):
        expected = {"local": 4, "nonlocal": 3}.get(self.kind)
        if expected is None:
            raise ValueError(f"unknown vertex kind {self.kind!r}")
        labels = tuple(int(x) for x in self.labels)
        if len(labels) != expected or any(x not in (0, 1) for x in labels):
            raise ValueError(f"{self.kind} vertex needs {expected} bit labels, got {self.labels!r}")
        object.__setattr__(self, "labels", labels)

    @property
    def is_local(self) -> bool:
        return self.kind == "local"

    def __str__(self):
        tag = "pi" if self.is_local else "Q"
        return f"{tag}^{''.join(map(str, self.labels))}"


def all_vertices() -> list[NsVertexId]:
    """Locals first, then nonlocals, each in lexicographic label order."""
    local = [NsVertexId("local", lab) for lab in itertools.product((0, 1), repeat=4)]
    nonlocal_ = [NsVertexId("nonlocal", lab) for lab in itertools.product((0, 1), repeat=3)]
    return local + nonlocal_


def vertex_table(vid: NsVertexId) -> StrategyTable:
    if vid.is_local:
        return to_table(DeterministicStrategy.from_vertex_labels(*vid.labels))
    alpha, beta, delta = vid.labels
    q = np.zeros((2, 2, 2, 2))
    for xb, xh, ub, uh in itertools.product((0, 1), repeat=4):
        if ub ^ uh == (xb & xh) ^ (alpha & xb) ^ (beta & xh) ^ delta:
            q[ub, uh, xb, xh] = 0.5
    return StrategyTable(q)


@functools.lru_cache(maxsize=None)
def _vertex_stack() -> np.ndarray:
    stack = np.stack([vertex_table(v).q for v in all_vertices()])
    stack.flags.writeable = False
    return stack


class NsOptimum(NamedTuple):
    cost: float
    vertex: NsVertexId


def ns_optimum(d: DecisionProblem) -> NsOptimum:
    """Minimum expected cost over the no-signalling polytope, by vertex enumeration."""
    vertices = all_vertices()
    costs = batch_costs(_vertex_stack(), d)
    best = min(costs)
    for c, v in zip(costs, vertices):
        if c <= best + TIE_TOL:
            return NsOptimum(c, v)
    raise AssertionError("unreachable")
