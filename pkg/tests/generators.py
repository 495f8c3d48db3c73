"""Random valid objects for property tests, driven by a numpy Generator."""
import numpy as np

from qteam import DecisionProblem, DensityMatrix, LocalMixture, PovmElement, QuantumStrategy
from qteam.classical import all_deterministic
from qteam.quantum import binary_povm


def random_problem(rng, chi_max=10.0):
    lb, lh = rng.uniform(0.5, 1.0, size=2)
    chi0, chi1 = rng.uniform(0.0, chi_max, size=2)
    return DecisionProblem(lb, lh, chi0, chi1)


def random_mixture(rng, max_components=64):
    k = int(rng.integers(1, max_components + 1))
    weights = rng.dirichlet(np.ones(k))
    comps = []
    for _ in range(k):
        qb = rng.dirichlet(np.ones(2), size=2)
        qh = rng.dirichlet(np.ones(2), size=2)
        comps.append((qb, qh))
    return LocalMixture(tuple(weights), tuple(comps))


def random_unit(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_projector(rng, dim=2):
    kind = rng.integers(0, 6)
    if kind == 0:
        return PovmElement.zero()
    if kind == 1:
        return PovmElement.identity()
    v = random_unit(rng, dim)
    return PovmElement.proj(np.outer(v, v.conj()))


def random_quantum_strategy(rng, dim_b=2, dim_h=2):
    psi = random_unit(rng, dim_b * dim_h)
    rho = DensityMatrix(np.outer(psi, psi.conj()))
    povm_b = binary_povm(random_projector(rng, dim_b), random_projector(rng, dim_b))
    povm_h = binary_povm(random_projector(rng, dim_h), random_projector(rng, dim_h))
    return QuantumStrategy(dim_b, dim_h, rho, povm_b, povm_h)


def random_deterministic(rng):
    return all_deterministic()[int(rng.integers(0, 16))]
