"""The binary estimation team: prior, cost and expected cost of a strategy table.

Two agents B and H each see a noisy copy of a fair bit ``xi_w`` and each emit
one bit. The team is rewarded ``chi(xi_w)`` (cost ``-chi(xi_w)``) when the
XOR of their actions equals ``xi_w``.

Strategy tables are indexed ``q[u_b, u_h, xi_b, xi_h]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidProblem, InvalidStrategyTable

TABLE_SHAPE = (2, 2, 2, 2)
NORM_TOL = 1e-9


@dataclass(frozen=True)
class DecisionProblem:
    lambda_b: float
    lambda_h: float
    chi0: float
    chi1: float

    def __post_init__(self):
        for name in ("lambda_b", "lambda_h", "chi0", "chi1"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidProblem(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        for name in ("lambda_b", "lambda_h"):
            value = getattr(self, name)
            if not 0.5 <= value <= 1.0:
                raise InvalidProblem(f"{name} must lie in [1/2, 1], got {value}")
        for name in ("chi0", "chi1"):
            if getattr(self, name) < 0:
                raise InvalidProblem(f"{name} must be nonnegative, got {getattr(self, name)}")

    @property
    def chi(self) -> tuple[float, float]:
        return (self.chi0, self.chi1)

    def swapped(self) -> DecisionProblem:
        """The same problem with the agents' roles exchanged."""
        return DecisionProblem(self.lambda_h, self.lambda_b, self.chi0, self.chi1)


@dataclass(frozen=True)
class JointPrior:
    """Probabilities ``table[xi_b, xi_h, xi_w]``."""

    table: np.ndarray

    def __getitem__(self, key):
        return self.table[key]


@dataclass(frozen=True, eq=False)
class StrategyTable:
    """Conditional law ``q[u_b, u_h, xi_b, xi_h]`` of joint actions given observations.

    Construction does not validate; use :func:`validate_strategy_table`.
    """

    q: np.ndarray

    def __post_init__(self):
        arr = np.array(self.q, dtype=float)
        if arr.shape != TABLE_SHAPE:
            raise InvalidStrategyTable(f"strategy table must have shape {TABLE_SHAPE}, got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "q", arr)

    def __getitem__(self, key):
        return self.q[key]

    def __array__(self, dtype=None, copy=None):
        return self.q if dtype is None else self.q.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, StrategyTable):
            return NotImplemented
        return bool(np.array_equal(self.q, other.q))

    def __hash__(self):
        return hash(self.q.tobytes())

    def allclose(self, other, atol: float = 1e-9) -> bool:
        return bool(np.allclose(self.q, np.asarray(other, dtype=float), rtol=0.0, atol=atol))

    def marginal_b(self) -> np.ndarray:
        """``m[u_b, xi_b, xi_h]``, the law of B's action."""
        return self.q.sum(axis=1)

    def marginal_h(self) -> np.ndarray:
        """``m[u_h, xi_b, xi_h]``, the law of H's action."""
        return self.q.sum(axis=0)

    def xor_law(self) -> np.ndarray:
        """``p[x, xi_b, xi_h]``: probability that ``u_b ^ u_h == x``."""
        return np.stack([self.q[0, 0] + self.q[1, 1], self.q[0, 1] + self.q[1, 0]])


def _channel(x: int, w: int, lam: float) -> float:
    return lam if x == w else 1.0 - lam


def joint_prior(d: DecisionProblem) -> JointPrior:
    table = np.empty((2, 2, 2))
    for xb in (0, 1):
        for xh in (0, 1):
            for xw in (0, 1):
                table[xb, xh, xw] = 0.5 * _channel(xb, xw, d.lambda_b) * _channel(xh, xw, d.lambda_h)
    table.setflags(write=False)
    return JointPrior(table)


def cost(u_b: int, u_h: int, xi_w: int, d: DecisionProblem) -> float:
    return -d.chi[xi_w] if (u_b ^ u_h) == xi_w else 0.0


def _loss_tensor(d: DecisionProblem) -> np.ndarray:
    loss = np.zeros((2, 2, 2))
    for ub in (0, 1):
        for uh in (0, 1):
            for xw in (0, 1):
                loss[ub, uh, xw] = cost(ub, uh, xw, d)
    return loss


def cost_weights(d: DecisionProblem) -> np.ndarray:
    """Coefficients ``w[u_b, u_h, xi_b, xi_h]`` with ``J(q) = sum(w * q)``."""
    prior = joint_prior(d).table
    loss = _loss_tensor(d)
    return np.einsum("bhw,uvw->uvbh", prior, loss)


def validate_strategy_table(q, tol: float = NORM_TOL) -> str | None:
    """Return None when ``q`` is a valid conditional law, else a message naming the first bad cell."""
    arr = np.asarray(q, dtype=float)
    if arr.shape != TABLE_SHAPE:
        return f"table has shape {arr.shape}, expected {TABLE_SHAPE}"
    for xb in (0, 1):
        for xh in (0, 1):
            for ub in (0, 1):
                for uh in (0, 1):
                    value = arr[ub, uh, xb, xh]
                    if not math.isfinite(value):
                        return f"entry q({ub},{uh}|{xb},{xh}) is not finite"
                    if value < -tol:
                        return f"entry q({ub},{uh}|{xb},{xh}) = {value:g} is negative"
            total = math.fsum(arr[:, :, xb, xh].ravel())
            if abs(total - 1.0) > tol:
                return f"row ({xb},{xh}) sums to {total:g}"
    return None


def expected_cost(q, d: DecisionProblem) -> float:
    """Expected team cost of strategy table ``q`` under problem ``d``."""
    arr = np.asarray(q, dtype=float)
    problem = validate_strategy_table(arr)
    if problem is not None:
        raise InvalidStrategyTable(problem)
    return batch_costs(arr[None], d)[0]


def batch_costs(stack: np.ndarray, d: DecisionProblem) -> list[float]:
    """Costs of a stack ``[n, u_b, u_h, xi_b, xi_h]`` of tables already known to be valid."""
    prior = joint_prior(d).table
    loss = _loss_tensor(d)
    # terms[n, u_b, u_h, xi_b, xi_h, xi_w]; fsum makes each total independent of order
    terms = stack[..., None] * prior[None, None, None, :, :, :] * loss[None, :, :, None, None, :]
    return [math.fsum(row) for row in terms.reshape(len(stack), -1)]
