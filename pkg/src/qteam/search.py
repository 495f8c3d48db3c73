"""Numerical quantum optimum over real-plane measurements on the Bell state.

Each agent measures, for each observation, along a direction at angle
``phi`` in a real plane:

    P0(phi) = [[cos^2(phi/2), cos(phi/2) sin(phi/2)],
               [cos(phi/2) sin(phi/2), sin^2(phi/2)]],   P1 = I - P0.

On the Bell state the actions agree (XOR 0) with probability
``(1 + cos(phi_b - phi_h)) / 2``, so the expected cost is affine in the four
cosines ``cos(phi_b[xi_b] - phi_h[xi_h])``. The grid search exploits that form;
:func:`quantum_value` goes through the full density-matrix kernel instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .classical import deterministic_optimum
from .problem import DecisionProblem, StrategyTable, expected_cost, joint_prior
from .quantum import PovmElement, QuantumStrategy, bell_state, binary_povm, strategy_table

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AngleVector:
    phi_b0: float
    phi_b1: float
    phi_h0: float
    phi_h1: float

    def __post_init__(self):
        for name in ("phi_b0", "phi_b1", "phi_h0", "phi_h1"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            value = math.fmod(value, TWO_PI)
            if value < 0:
                value += TWO_PI
            if value >= TWO_PI:
                value = 0.0
            object.__setattr__(self, name, value)

    @classmethod
    def from_array(cls, x) -> AngleVector:
        return cls(*(float(v) for v in x))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.phi_b0, self.phi_b1, self.phi_h0, self.phi_h1)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple())


@dataclass(frozen=True)
class SearchConfig:
    grid_resolution: int = 32
    restarts: int = 16
    refine_tolerance: float = 1e-10
    max_refine_iters: int = 500

    def __post_init__(self):
        if int(self.grid_resolution) < 8:
            raise ValueError(f"grid_resolution must be at least 8, got {self.grid_resolution}")
        if int(self.restarts) < 1:
            raise ValueError(f"restarts must be positive, got {self.restarts}")
        if not self.refine_tolerance > 0:
            raise ValueError(f"refine_tolerance must be positive, got {self.refine_tolerance}")
        if int(self.max_refine_iters) < 1:
            raise ValueError(f"max_refine_iters must be positive, got {self.max_refine_iters}")


def real_projector(phi: float) -> PovmElement:
    c, s = math.cos(phi / 2), math.sin(phi / 2)
    return PovmElement.proj(np.array([[c * c, c * s], [c * s, s * s]]))


def angle_strategy(v: AngleVector) -> QuantumStrategy:
    povm_b = binary_povm(real_projector(v.phi_b0), real_projector(v.phi_b1))
    povm_h = binary_povm(real_projector(v.phi_h0), real_projector(v.phi_h1))
    return QuantumStrategy(2, 2, bell_state(), povm_b, povm_h)


def table_from_angles(v: AngleVector) -> StrategyTable:
    return strategy_table(angle_strategy(v))


def quantum_value(v: AngleVector, d: DecisionProblem) -> float:
    return expected_cost(table_from_angles(v), d)


def correlation_form(d: DecisionProblem) -> tuple[np.ndarray, float]:
    """``(coeffs, offset)`` with cost ``offset + sum coeffs[x, y] * cos(phi_bx - phi_hy)``."""
    prior = joint_prior(d).table
    reward0 = prior[:, :, 0] * d.chi0
    reward1 = prior[:, :, 1] * d.chi1
    coeffs = -(reward0 - reward1) / 2.0
    offset = -float((reward0 + reward1).sum()) / 2.0
    return coeffs, offset


def _fast_cost(x, coeffs, offset) -> float:
    b0, b1, h0, h1 = x
    return (
        offset
        + coeffs[0, 0] * math.cos(b0 - h0)
        + coeffs[0, 1] * math.cos(b0 - h1)
        + coeffs[1, 0] * math.cos(b1 - h0)
        + coeffs[1, 1] * math.cos(b1 - h1)
    )


class Candidate(NamedTuple):
    seed: AngleVector
    seed_cost: float
    angles: AngleVector
    cost: float


class QuantumOptimum(NamedTuple):
    cost: float
    angles: AngleVector


def _grid_seeds(coeffs, offset, cfg: SearchConfig) -> list[tuple[tuple[int, ...], float]]:
    """Best grid points, one per class of global rotations, cheapest first.

    Adding the same angle to all four coordinates leaves the cost unchanged,
    so restarts are spread over distinct rotation classes. Ties go to the
    lexicographically smallest grid index.
    """
    g = cfg.grid_resolution
    costs = kernels.grid_costs(coeffs, offset, kernels.cos_difference_table(g))
    pool = min(costs.size, cfg.restarts * g * 4)
    idx = np.argpartition(costs, pool - 1)[:pool] if pool < costs.size else np.arange(costs.size)
    idx = idx[np.lexsort((idx, costs[idx]))]
    seeds = []
    seen = set()
    for flat in idx:
        point = np.unravel_index(int(flat), (g,) * 4)
        key = tuple((p - point[0]) % g for p in point)
        if key in seen:
            continue
        seen.add(key)
        seeds.append((tuple(int(p) for p in point), float(costs[flat])))
        if len(seeds) == cfg.restarts:
            break
    return seeds


def _refine(x0: np.ndarray, coeffs, offset, cfg: SearchConfig) -> tuple[np.ndarray, float]:
    step = math.pi / cfg.grid_resolution
    simplex = np.vstack([x0] + [x0 + step * e for e in np.eye(4)])
    res = minimize(
        _fast_cost,
        x0,
        args=(coeffs, offset),
        method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "xatol": cfg.refine_tolerance,
            "fatol": 1e-15,
            "maxiter": cfg.max_refine_iters,
            "maxfev": 4 * cfg.max_refine_iters,
        },
    )
    return np.asarray(res.x), float(res.fun)


def search_candidates(d: DecisionProblem, cfg: SearchConfig = SearchConfig()) -> list[Candidate]:
    """Grid seeds with their refined endpoints."""
    coeffs, offset = correlation_form(d)
    step = TWO_PI / cfg.grid_resolution
    out = []
    for point, grid_cost in _grid_seeds(coeffs, offset, cfg):
        x0 = np.array(point, dtype=float) * step
        x, fx = _refine(x0, coeffs, offset, cfg)
        if not fx <= grid_cost:
            x, fx = x0, grid_cost
        out.append(Candidate(AngleVector.from_array(x0), grid_cost, AngleVector.from_array(x), fx))
    return out


def quantum_optimum(d: DecisionProblem, cfg: SearchConfig = SearchConfig()) -> QuantumOptimum:
    """Best cost over Bell-state strategies: grid, simplex refinement, plus the 16 deterministic strategies.

    A deterministic strategy ``gamma`` is reproduced by angles ``pi * gamma``,
    so the classical optimum is always among the candidates.
    """
    classical = deterministic_optimum(d)
    s = classical.strategy
    pool = [(classical.cost, AngleVector(*(math.pi * g for g in s.gamma_b + s.gamma_h)))]
    pool += [(c.cost, c.angles) for c in search_candidates(d, cfg)]
    cost, angles = min(pool, key=lambda item: (item[0], item[1].as_tuple()))
    return QuantumOptimum(cost, angles)
