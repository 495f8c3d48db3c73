"""Deterministic strategies, common-randomness mixtures and the classical optimum."""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvalidMixture
from .problem import DecisionProblem, StrategyTable, batch_costs, joint_prior

TIE_TOL = 1e-12


@dataclass(frozen=True)
class DeterministicStrategy:
    """A pair of maps {0,1} -> {0,1}, stored as ``(gamma(0), gamma(1))`` per agent."""

    gamma_b: tuple[int, int]
    gamma_h: tuple[int, int]

    def __post_init__(self):
        for name in ("gamma_b", "gamma_h"):
            g = tuple(int(x) for x in getattr(self, name))
            if len(g) != 2 or any(x not in (0, 1) for x in g):
                raise ValueError(f"{name} must be a pair of bits, got {getattr(self, name)!r}")
            object.__setattr__(self, name, g)

    @classmethod
    def from_vertex_labels(cls, alpha: int, eta: int, beta: int, delta: int) -> DeterministicStrategy:
        """Strategy ``u_b = alpha*xi_b ^ beta``, ``u_h = eta*xi_h ^ delta``."""
        return cls((beta, alpha ^ beta), (delta, eta ^ delta))

    @property
    def vertex_labels(self) -> tuple[int, int, int, int]:
        """Inverse of :meth:`from_vertex_labels`, as ``(alpha, eta, beta, delta)``."""
        b0, b1 = self.gamma_b
        h0, h1 = self.gamma_h
        return (b0 ^ b1, h0 ^ h1, b0, h0)

    def act(self, xi_b: int, xi_h: int) -> tuple[int, int]:
        return self.gamma_b[xi_b], self.gamma_h[xi_h]

    def swapped(self) -> DeterministicStrategy:
        return DeterministicStrategy(self.gamma_h, self.gamma_b)


def all_deterministic() -> list[DeterministicStrategy]:
    """The 16 strategies in lexicographic order of ``(gb(0), gb(1), gh(0), gh(1))``."""
    return [DeterministicStrategy((b0, b1), (h0, h1)) for b0, b1, h0, h1 in itertools.product((0, 1), repeat=4)]


def to_table(s: DeterministicStrategy) -> StrategyTable:
    q = np.zeros((2, 2, 2, 2))
    for xb in (0, 1):
        for xh in (0, 1):
            ub, uh = s.act(xb, xh)
            q[ub, uh, xb, xh] = 1.0
    return StrategyTable(q)


@dataclass(frozen=True, eq=False)
class LocalMixture:
    """Shared randomness over behavioural strategies.

    Each component is a pair of arrays ``(Q_b, Q_h)`` with ``Q_i[xi, u]`` the
    probability agent i plays ``u`` after observing ``xi``.
    """

    weights: tuple[float, ...]
    components: tuple[tuple[np.ndarray, np.ndarray], ...]

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        comps = tuple((np.array(b, dtype=float), np.array(h, dtype=float)) for b, h in self.components)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "components", comps)

    @classmethod
    def of_deterministic(cls, weights: Sequence[float], strategies: Sequence[DeterministicStrategy]) -> LocalMixture:
        comps = []
        for s in strategies:
            qb = np.zeros((2, 2))
            qh = np.zeros((2, 2))
            for xi in (0, 1):
                qb[xi, s.gamma_b[xi]] = 1.0
                qh[xi, s.gamma_h[xi]] = 1.0
            comps.append((qb, qh))
        return cls(tuple(weights), tuple(comps))

    def check(self, tol: float = 1e-12) -> str | None:
        if len(self.weights) == 0 or len(self.weights) != len(self.components):
            return "weights and components must be non-empty and of equal length"
        w = np.asarray(self.weights)
        if np.any(w < -tol):
            return f"negative mixture weight {w.min():g}"
        if abs(w.sum() - 1.0) > tol:
            return f"mixture weights sum to {w.sum():g}"
        for k, (qb, qh) in enumerate(self.components):
            for agent, rows in (("b", qb), ("h", qh)):
                if rows.shape != (2, 2):
                    return f"component {k} agent {agent} has shape {rows.shape}"
                if np.any(rows < -tol) or np.any(np.abs(rows.sum(axis=1) - 1.0) > tol):
                    return f"component {k} agent {agent} rows are not distributions"
        return None


def mixture_table(m: LocalMixture) -> StrategyTable:
    problem = m.check()
    if problem is not None:
        raise InvalidMixture(problem)
    q = np.zeros((2, 2, 2, 2))
    for w, (qb, qh) in zip(m.weights, m.components):
        # q[u_b, u_h, xi_b, xi_h] += w * Qb[xi_b, u_b] * Qh[xi_h, u_h]
        q += w * np.einsum("xu,yv->uvxy", qb, qh)
    return StrategyTable(q)


class ClassicalOptimum(NamedTuple):
    cost: float
    strategy: DeterministicStrategy


@functools.lru_cache(maxsize=None)
def _deterministic_stack() -> np.ndarray:
    stack = np.stack([to_table(s).q for s in all_deterministic()])
    stack.flags.writeable = False
    return stack


def deterministic_optimum(d: DecisionProblem) -> ClassicalOptimum:
    """Exhaustive minimum over the 16 deterministic strategies.

    Costs within 1e-12 of the minimum count as ties; the first in
    enumeration order wins.
    """
    strategies = all_deterministic()
    costs = batch_costs(_deterministic_stack(), d)
    best = min(costs)
    for c, s in zip(costs, strategies):
        if c <= best + TIE_TOL:
            return ClassicalOptimum(c, s)
    raise AssertionError("unreachable")


_CONST0 = DeterministicStrategy((0, 0), (0, 0))
_CONST1 = DeterministicStrategy((0, 0), (1, 1))
_FOLLOW = DeterministicStrategy((0, 0), (0, 1))


def closed_form_optimum(d: DecisionProblem) -> ClassicalOptimum:
    """Classical optimum without search.

    Only the better-informed agent ever uses its observation; the other
    plays a constant. When B is strictly better informed the roles are
    swapped, solved, and swapped back.
    """
    if d.lambda_b > d.lambda_h:
        inner = closed_form_optimum(d.swapped())
        return ClassicalOptimum(inner.cost, inner.strategy.swapped())
    p0, p1 = (float(p) for p in joint_prior(d).table.sum(axis=(0, 1)))
    branches = [
        (-d.chi0 * p0, _CONST0),
        (-d.chi1 * p1, _CONST1),
        (-d.lambda_h * (p0 * d.chi0 + p1 * d.chi1), _FOLLOW),
    ]
    best = min(c for c, _ in branches)
    for c, s in branches:
        if c <= best + TIE_TOL:
            return ClassicalOptimum(c, s)
    raise AssertionError("unreachable")
