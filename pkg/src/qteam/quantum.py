"""Finite-dimensional quantum strategies for the two-agent team.

Operators are dense ``complex128`` numpy arrays. A strategy is a shared
density matrix on ``H_b (x) H_h`` plus, for each agent and observation, a
two-outcome projective measurement.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Literal, Mapping

import numpy as np

from . import kernels
from .classical import DeterministicStrategy
from .errors import ConstraintViolation, DegenerateCollapse, NumericalInconsistency
from .problem import StrategyTable

TOL = 1e-9
COLLAPSE_EPS = 1e-12

Order = Literal["B-first", "H-first"]
ORDERS: tuple[Order, Order] = ("B-first", "H-first")


def _as_matrix(m) -> np.ndarray:
    arr = np.array(m, dtype=np.complex128)
    if arr.ndim != 2 or min(arr.shape) < 1:
        raise ValueError(f"expected a non-empty 2-d matrix, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def _hermitian_gap(m: np.ndarray) -> float:
    return float(np.abs(m - m.conj().T).max())


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    mat: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mat", _as_matrix(self.mat))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def check(self, tol: float = TOL) -> str | None:
        m = self.mat
        if m.shape[0] != m.shape[1]:
            return f"density matrix is not square: {m.shape}"
        if not np.all(np.isfinite(m)):
            return "density matrix has non-finite entries"
        gap = _hermitian_gap(m)
        if gap > tol:
            return f"density matrix is not Hermitian (gap {gap:.3g})"
        tr = np.trace(m)
        if abs(tr - 1.0) > tol:
            return f"density matrix trace is {tr.real:.12g}, expected 1"
        low = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min())
        if low < -tol:
            return f"density matrix has negative eigenvalue {low:.3g}"
        return None


@dataclass(frozen=True, eq=False)
class PovmElement:
    """A projector: exactly zero, exactly identity, or an explicit matrix."""

    kind: Literal["zero", "identity", "proj"]
    mat: np.ndarray | None = None

    def __post_init__(self):
        if self.kind == "proj":
            if self.mat is None:
                raise ValueError("proj element needs a matrix")
            object.__setattr__(self, "mat", _as_matrix(self.mat))
        elif self.kind in ("zero", "identity"):
            if self.mat is not None:
                raise ValueError(f"{self.kind} element takes no matrix")
        else:
            raise ValueError(f"unknown POVM element kind {self.kind!r}")

    @classmethod
    def zero(cls) -> PovmElement:
        return cls("zero")

    @classmethod
    def identity(cls) -> PovmElement:
        return cls("identity")

    @classmethod
    def proj(cls, m) -> PovmElement:
        return cls("proj", m)

    def matrix(self, dim: int) -> np.ndarray:
        if self.kind == "zero":
            return np.zeros((dim, dim), dtype=np.complex128)
        if self.kind == "identity":
            return np.eye(dim, dtype=np.complex128)
        if self.mat.shape != (dim, dim):
            raise ValueError(f"projector has shape {self.mat.shape}, expected {(dim, dim)}")
        return self.mat

    def complement(self) -> PovmElement:
        if self.kind == "zero":
            return PovmElement.identity()
        if self.kind == "identity":
            return PovmElement.zero()
        return PovmElement.proj(np.eye(self.mat.shape[0]) - self.mat)

    def check(self, dim: int, tol: float = TOL) -> str | None:
        if self.kind != "proj":
            return None
        m = self.mat
        if m.shape != (dim, dim):
            return f"projector has shape {m.shape}, expected {(dim, dim)}"
        if not np.all(np.isfinite(m)):
            return "projector has non-finite entries"
        if _hermitian_gap(m) > tol:
            return "projector is not Hermitian"
        if np.abs(m @ m - m).max() > tol:
            return "projector is not idempotent"
        return None


Povm = Mapping[tuple[int, int], PovmElement]


@dataclass(frozen=True, eq=False)
class QuantumStrategy:
    """Shared state ``rho`` and measurements keyed ``(xi, u)`` for each agent."""

    dim_b: int
    dim_h: int
    rho: DensityMatrix
    povm_b: Povm = field(default_factory=dict)
    povm_h: Povm = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.rho, DensityMatrix):
            object.__setattr__(self, "rho", DensityMatrix(self.rho))
        object.__setattr__(self, "povm_b", dict(self.povm_b))
        object.__setattr__(self, "povm_h", dict(self.povm_h))

    def op_b(self, xi: int, u: int) -> np.ndarray:
        return self.povm_b[(xi, u)].matrix(self.dim_b)

    def op_h(self, xi: int, u: int) -> np.ndarray:
        return self.povm_h[(xi, u)].matrix(self.dim_h)


def binary_povm(p0_given_0: PovmElement, p0_given_1: PovmElement) -> dict[tuple[int, int], PovmElement]:
    """Two-outcome measurements from the outcome-0 projector for each observation."""
    out = {}
    for xi, p0 in ((0, p0_given_0), (1, p0_given_1)):
        out[(xi, 0)] = p0
        out[(xi, 1)] = p0.complement()
    return out


def bell_state() -> DensityMatrix:
    m = np.zeros((4, 4))
    m[0, 0] = m[0, 3] = m[3, 0] = m[3, 3] = 0.5
    return DensityMatrix(m)


def projector_family(mu: float, a: float, b: float, theta: float, tol: float = TOL) -> PovmElement:
    """``(1/mu) [[a, e^{-i theta}], [e^{i theta}, b]]`` under ``mu = a + b``, ``mu a = 1 + a^2``, ``mu b = 1 + b^2``.

    Two limits are accepted with infinite arguments: ``(inf, inf, 0, 0)``
    gives ``diag(1, 0)`` and ``(inf, 0, inf, pi)`` gives ``diag(0, 1)``.
    """
    if any(math.isinf(x) for x in (mu, a, b)):
        if math.isinf(mu) and math.isinf(a) and b == 0 and theta == 0:
            return PovmElement.proj(np.diag([1.0, 0.0]))
        if math.isinf(mu) and math.isinf(b) and a == 0 and math.isclose(theta, math.pi):
            return PovmElement.proj(np.diag([0.0, 1.0]))
        raise ConstraintViolation(f"unsupported limit form ({mu}, {a}, {b}, {theta})")
    if any(math.isnan(x) for x in (mu, a, b, theta)) or mu == 0:
        raise ConstraintViolation(f"invalid parameters ({mu}, {a}, {b}, {theta})")
    residuals = (mu - (a + b), mu * a - (1 + a * a), mu * b - (1 + b * b))
    if max(abs(r) for r in residuals) > tol:
        raise ConstraintViolation(f"parameters ({mu}, {a}, {b}, {theta}) violate the idempotence constraints")
    phase = complex(math.cos(theta), math.sin(theta))
    m = np.array([[a, phase.conjugate()], [phase, b]], dtype=np.complex128) / mu
    return PovmElement.proj(m)


def advantage_strategy() -> QuantumStrategy:
    """Bell state with the measurement set that beats every classical strategy at (0.8, 0.8, 1, 3).

    B's projector for ``xi_b = 1`` carries phase ``3*pi/2`` so that
    ``cos(theta_b + theta_h) = -1`` against both of H's projectors; with
    phase ``pi/2`` the outcome law for ``xi_b = 1`` would be the mirror image.
    """
    s3 = math.sqrt(3.0)
    mu = 4.0 / s3
    inf = math.inf
    povm_b = binary_povm(
        projector_family(inf, inf, 0.0, 0.0),
        projector_family(mu, s3, 1.0 / s3, 3 * math.pi / 2),
    )
    povm_h = binary_povm(
        projector_family(mu, s3, 1.0 / s3, 3 * math.pi / 2),
        projector_family(mu, 1.0 / s3, s3, 3 * math.pi / 2),
    )
    return QuantumStrategy(2, 2, bell_state(), povm_b, povm_h)


def validate_quantum_strategy(s: QuantumStrategy, tol: float = TOL) -> str | None:
    if s.dim_b < 1 or s.dim_h < 1:
        return "Hilbert space dimensions must be positive"
    if s.rho.dim != s.dim_b * s.dim_h:
        return f"density matrix dimension {s.rho.dim} != {s.dim_b}*{s.dim_h}"
    problem = s.rho.check(tol)
    if problem is not None:
        return problem
    for agent, povm, dim in (("B", s.povm_b, s.dim_b), ("H", s.povm_h, s.dim_h)):
        for xi in (0, 1):
            total = np.zeros((dim, dim), dtype=np.complex128)
            for u in (0, 1):
                elem = povm.get((xi, u))
                if elem is None:
                    return f"agent {agent} has no measurement for (xi={xi}, u={u})"
                problem = elem.check(dim, tol)
                if problem is not None:
                    return f"agent {agent} (xi={xi}, u={u}): {problem}"
                total = total + elem.matrix(dim)
            gap = float(np.abs(total - np.eye(dim)).max())
            if gap > tol:
                return f"agent {agent} measurement for xi={xi} is incomplete (gap {gap:.3g})"
    return None


def _probability(z: complex, what: str) -> float:
    if abs(z.imag) > TOL:
        raise NumericalInconsistency(f"{what} has imaginary part {z.imag:.3g}")
    p = z.real
    if p < -TOL:
        raise NumericalInconsistency(f"{what} is negative ({p:.3g})")
    return max(p, 0.0)


def _expect(rho: np.ndarray, op: np.ndarray) -> complex:
    return complex(np.einsum("ij,ji->", rho, op))


def strategy_table(s: QuantumStrategy) -> StrategyTable:
    """Outcome law ``Tr(rho (P_b (x) P_h))`` for every action and observation pair."""
    rho = s.rho.mat
    q = np.empty((2, 2, 2, 2))
    for xb, xh, ub, uh in itertools.product((0, 1), repeat=4):
        op = np.kron(s.op_b(xb, ub), s.op_h(xh, uh))
        q[ub, uh, xb, xh] = _probability(_expect(rho, op), f"q({ub},{uh}|{xb},{xh})")
    return StrategyTable(q)


def embed_deterministic(s: DeterministicStrategy) -> QuantumStrategy:
    """A deterministic strategy as a quantum one on one-dimensional spaces."""

    def povm(gamma):
        return {
            (xi, u): PovmElement.identity() if gamma[xi] == u else PovmElement.zero()
            for xi in (0, 1)
            for u in (0, 1)
        }

    return QuantumStrategy(1, 1, DensityMatrix(np.ones((1, 1))), povm(s.gamma_b), povm(s.gamma_h))


def _direct_sum(e1: PovmElement, d1: int, e2: PovmElement, d2: int) -> PovmElement:
    if e1.kind == e2.kind and e1.kind in ("zero", "identity"):
        return e1
    m = np.zeros((d1 + d2, d1 + d2), dtype=np.complex128)
    m[:d1, :d1] = e1.matrix(d1)
    m[d1:, d1:] = e2.matrix(d2)
    return PovmElement.proj(m)


def direct_sum_mix(s1: QuantumStrategy, s2: QuantumStrategy, theta: float) -> QuantumStrategy:
    """A strategy whose table is ``theta*T1 + (1 - theta)*T2``.

    Each agent's space is the direct sum of its two spaces; the state lives
    on the block ``(H_b1 (x) H_h1) + (H_b2 (x) H_h2)`` of the joint space.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    b1, h1, b2, h2 = s1.dim_b, s1.dim_h, s2.dim_b, s2.dim_h
    dim_b, dim_h = b1 + b2, h1 + h2
    idx1 = [i * dim_h + j for i in range(b1) for j in range(h1)]
    idx2 = [(b1 + i) * dim_h + (h1 + j) for i in range(b2) for j in range(h2)]
    rho = np.zeros((dim_b * dim_h, dim_b * dim_h), dtype=np.complex128)
    rho[np.ix_(idx1, idx1)] = theta * s1.rho.mat
    rho[np.ix_(idx2, idx2)] = (1.0 - theta) * s2.rho.mat
    povm_b = {k: _direct_sum(s1.povm_b[k], b1, s2.povm_b[k], b2) for k in s1.povm_b}
    povm_h = {k: _direct_sum(s1.povm_h[k], h1, s2.povm_h[k], h2) for k in s1.povm_h}
    return QuantumStrategy(dim_b, dim_h, DensityMatrix(rho), povm_b, povm_h)


def _snap(p: float) -> float:
    if p < COLLAPSE_EPS:
        return 0.0
    if p > 1.0 - COLLAPSE_EPS:
        return 1.0
    return p


def branch_law(s: QuantumStrategy, xi_b: int, xi_h: int, order: Order) -> tuple[np.ndarray, np.ndarray]:
    """Exact two-stage law of a sequential measurement.

    Returns ``(p_first, p_second)`` where ``p_first[k]`` is the probability the
    first agent reads k and ``p_second[k, m]`` the probability the second reads
    m from the state collapsed on k. Outcomes are indexed by the measuring
    agent, not by (u_b, u_h). Branches below 1e-12 get probability 0 and a
    uniform placeholder conditional row.
    """
    if order not in ORDERS:
        raise ValueError(f"order must be one of {ORDERS}, got {order!r}")
    eye_b = np.eye(s.dim_b)
    eye_h = np.eye(s.dim_h)
    if order == "B-first":
        first_ops = [np.kron(s.op_b(xi_b, u), eye_h) for u in (0, 1)]
        second_ops = [np.kron(eye_b, s.op_h(xi_h, u)) for u in (0, 1)]
    else:
        first_ops = [np.kron(eye_b, s.op_h(xi_h, u)) for u in (0, 1)]
        second_ops = [np.kron(s.op_b(xi_b, u), eye_h) for u in (0, 1)]
    rho = s.rho.mat
    p_first = np.zeros(2)
    p_second = np.full((2, 2), 0.5)
    for k, proj in enumerate(first_ops):
        pk = _probability(_expect(rho, proj), f"first-stage outcome {k}")
        if pk < COLLAPSE_EPS:
            continue
        p_first[k] = pk
        collapsed = proj @ rho @ proj / pk
        for m, op in enumerate(second_ops):
            p_second[k, m] = _probability(_expect(collapsed, op), f"second-stage outcome {m} after {k}")
    return p_first, p_second


def _rng(seed: int, xi_b: int, xi_h: int) -> np.random.Generator:
    # counter-based stream, split per observation pair
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(2 * xi_b + xi_h,))
    return np.random.Generator(np.random.Philox(ss))


def _counts(s: QuantumStrategy, xi_b: int, xi_h: int, order: Order, n: int, seed: int) -> np.ndarray:
    """Counts ``c[u_b, u_h]`` of ``n`` sequential shots at one observation pair."""
    p_first, p_second = branch_law(s, xi_b, xi_h, order)
    first0 = _snap(p_first[0] / p_first.sum())
    second0 = np.array([_snap(p_second[k, 0] / p_second[k].sum()) for k in (0, 1)])
    uniforms = _rng(seed, xi_b, xi_h).random((n, 2))
    counts = kernels.sample_counts(first0, second0, uniforms)
    for k in (0, 1):
        if counts[k].sum() > 0 and p_first[k] < COLLAPSE_EPS:
            raise DegenerateCollapse(f"sampled first-stage outcome {k} whose probability is {p_first[k]:.3g}")
    return counts if order == "B-first" else counts.T


def sample_sequential(
    s: QuantumStrategy, xi_b: int, xi_h: int, order: Order = "B-first", seed: int = 0
) -> tuple[int, int]:
    """One shot of measuring one agent, collapsing, then measuring the other.

    Equals the first shot of :func:`empirical_table` with the same seed.
    """
    counts = _counts(s, xi_b, xi_h, order, 1, seed)
    ub, uh = np.argwhere(counts == 1)[0]
    return int(ub), int(uh)


def empirical_table(s: QuantumStrategy, n: int, order: Order = "B-first", seed: int = 0) -> StrategyTable:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    q = np.empty((2, 2, 2, 2))
    for xb in (0, 1):
        for xh in (0, 1):
            q[:, :, xb, xh] = _counts(s, xb, xh, order, n, seed) / n
    return StrategyTable(q)
