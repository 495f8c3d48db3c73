import itertools
import math

import numpy as np
import pytest

from generators import random_deterministic, random_quantum_strategy, random_unit
from qteam import (
    ConstraintViolation,
    DegenerateCollapse,
    DensityMatrix,
    NumericalInconsistency,
    PovmElement,
    QuantumStrategy,
    advantage_strategy,
    bell_state,
    check_no_signalling,
    direct_sum_mix,
    embed_deterministic,
    empirical_table,
    projector_family,
    sample_sequential,
    strategy_table,
    to_table,
    validate_quantum_strategy,
    validate_strategy_table,
)
from qteam.classical import DeterministicStrategy, all_deterministic
from qteam.harness import reference_table
from qteam.quantum import ORDERS, binary_povm, branch_law

S3 = math.sqrt(3.0)
MU = 4 / S3


def test_bell_state():
    rho = bell_state()
    assert np.trace(rho.mat) == pytest.approx(1.0)
    assert np.allclose(np.linalg.eigvalsh(rho.mat), [0, 0, 0, 1], atol=1e-15)
    assert rho.mat[0, 3] == 0.5
    assert rho.check() is None


def test_projector_family_examples():
    p = projector_family(MU, S3, 1 / S3, math.pi / 2).mat
    expected = np.array([[S3, -1j], [1j, 1 / S3]]) / MU
    assert np.allclose(p, expected, atol=1e-15)
    assert np.array_equal(projector_family(math.inf, math.inf, 0, 0).mat, np.diag([1.0, 0.0]))
    assert np.array_equal(projector_family(math.inf, 0, math.inf, math.pi).mat, np.diag([0.0, 1.0]))
    assert np.allclose(projector_family(2, 1, 1, 0).mat, 0.5 * np.ones((2, 2)), atol=1e-15)


@pytest.mark.parametrize("args", [(2, 1, 1.5, 0), (3, 1, 2, 0), (math.inf, 1, 0, 0), (0, 0, 0, 0)])
def test_projector_family_rejects(args):
    with pytest.raises(ConstraintViolation):
        projector_family(*args)


def _family_params(rng):
    # any a > 0 fixes b = 1/a and mu = a + 1/a
    a = float(rng.uniform(0.05, 20))
    return a + 1 / a, a, 1 / a, float(rng.uniform(0, 2 * math.pi))


def test_projector_family_idempotent_and_complement():
    rng = np.random.default_rng(1)
    for _ in range(100):
        elem = projector_family(*_family_params(rng))
        assert elem.check(2) is None
        comp = elem.complement().mat
        assert np.abs(comp @ comp - comp).max() <= 1e-9


def test_bell_trace_closed_form():
    rho = bell_state().mat
    rng = np.random.default_rng(2)
    for _ in range(100):
        mu, a, b, t = _family_params(rng)
        mu2, a2, b2, t2 = _family_params(rng)
        op = np.kron(projector_family(mu, a, b, t).mat, projector_family(mu2, a2, b2, t2).mat)
        lhs = np.trace(rho @ op)
        rhs = ((a * a2 + b * b2) / 2 + math.cos(t + t2)) / (mu * mu2)
        assert abs(lhs - rhs) <= 1e-9


def test_advantage_strategy_reproduces_reference_table():
    s = advantage_strategy()
    assert validate_quantum_strategy(s) is None
    q = strategy_table(s)
    assert np.abs(q.q - reference_table()).max() <= 1e-9
    assert q[0, 0, 0, 0] == pytest.approx(3 / 8, abs=1e-12)
    assert q[0, 0, 1, 1] == pytest.approx(0.0, abs=1e-12)


def test_printed_phase_gives_mirrored_rows():
    # with phase pi/2 on B's xi_b = 1 projector the xi_b = 1 rows differ from the reference table
    s = advantage_strategy()
    povm_b = binary_povm(s.povm_b[(0, 0)], projector_family(MU, S3, 1 / S3, math.pi / 2))
    q = strategy_table(QuantumStrategy(2, 2, s.rho, povm_b, s.povm_h)).q
    assert q[0, 0, 1, 0] == pytest.approx(1 / 2, abs=1e-12)
    assert q[0, 0, 1, 1] == pytest.approx(3 / 8, abs=1e-12)


def test_validate_quantum_strategy_failures():
    s = advantage_strategy()
    bad_povm = {(xi, u): PovmElement.identity() for xi in (0, 1) for u in (0, 1)}
    msg = validate_quantum_strategy(QuantumStrategy(2, 2, s.rho, bad_povm, s.povm_h))
    assert "incomplete" in msg
    msg = validate_quantum_strategy(QuantumStrategy(2, 2, DensityMatrix(2 * s.rho.mat), s.povm_b, s.povm_h))
    assert "trace" in msg
    neg = DensityMatrix(np.diag([1.5, -0.5, 0, 0]))
    assert "negative eigenvalue" in validate_quantum_strategy(QuantumStrategy(2, 2, neg, s.povm_b, s.povm_h))
    skew = s.povm_b[(1, 0)].mat + 0.1
    povm_b = {**s.povm_b, (1, 0): PovmElement.proj(skew)}
    assert "idempotent" in validate_quantum_strategy(QuantumStrategy(2, 2, s.rho, povm_b, s.povm_h))
    assert "dimension" in validate_quantum_strategy(QuantumStrategy(2, 1, s.rho, s.povm_b, s.povm_h))


def test_strategy_table_flags_inconsistent_trace():
    s = advantage_strategy()
    rho = DensityMatrix(s.rho.mat + np.diag([0, 0.5j, 0, 0]))
    with pytest.raises(NumericalInconsistency):
        strategy_table(QuantumStrategy(2, 2, rho, s.povm_b, s.povm_h))


def test_random_strategies_are_valid_and_no_signalling():
    rng = np.random.default_rng(3)
    for _ in range(100):
        s = random_quantum_strategy(rng)
        assert validate_quantum_strategy(s) is None
        q = strategy_table(s)
        assert validate_strategy_table(q) is None
        assert check_no_signalling(q, 1e-8)


def test_product_state_gives_behavioural_strategy():
    rng = np.random.default_rng(4)
    for _ in range(20):
        a, b = random_unit(rng, 2), random_unit(rng, 2)
        rho_b, rho_h = np.outer(a, a.conj()), np.outer(b, b.conj())
        s = random_quantum_strategy(rng)
        s = QuantumStrategy(2, 2, DensityMatrix(np.kron(rho_b, rho_h)), s.povm_b, s.povm_h)
        q = strategy_table(s).q
        for xb, xh, ub, uh in itertools.product((0, 1), repeat=4):
            pb = np.trace(rho_b @ s.op_b(xb, ub)).real
            ph = np.trace(rho_h @ s.op_h(xh, uh)).real
            assert q[ub, uh, xb, xh] == pytest.approx(pb * ph, abs=1e-12)


def test_embed_deterministic_round_trip_exact():
    for g in all_deterministic():
        s = embed_deterministic(g)
        assert validate_quantum_strategy(s) is None
        assert strategy_table(s) == to_table(g)


def test_direct_sum_examples():
    s = advantage_strategy()
    t = strategy_table(s).q
    assert np.abs(strategy_table(direct_sum_mix(s, s, 0.5)).q - t).max() <= 1e-9
    g1, g2 = DeterministicStrategy((0, 1), (1, 1)), DeterministicStrategy((1, 0), (0, 1))
    mixed = strategy_table(direct_sum_mix(embed_deterministic(g1), embed_deterministic(g2), 0.3)).q
    assert np.abs(mixed - (0.3 * to_table(g1).q + 0.7 * to_table(g2).q)).max() <= 1e-12
    const = embed_deterministic(DeterministicStrategy((0, 0), (0, 0)))
    mixed = direct_sum_mix(s, const, 0.5)
    assert validate_quantum_strategy(mixed) is None
    expected = 0.5 * reference_table() + 0.5 * to_table(DeterministicStrategy((0, 0), (0, 0))).q
    assert np.abs(strategy_table(mixed).q - expected).max() <= 1e-9


def test_direct_sum_linearity_random_and_nested():
    rng = np.random.default_rng(6)
    for _ in range(20):
        s1 = random_quantum_strategy(rng)
        s2 = embed_deterministic(random_deterministic(rng)) if rng.random() < 0.5 else random_quantum_strategy(rng)
        theta = float(rng.random())
        mixed = direct_sum_mix(s1, s2, theta)
        assert validate_quantum_strategy(mixed) is None
        expected = theta * strategy_table(s1).q + (1 - theta) * strategy_table(s2).q
        assert np.abs(strategy_table(mixed).q - expected).max() <= 1e-9
    # three-way mixing by folding
    a, b, c = (random_quantum_strategy(rng) for _ in range(3))
    folded = direct_sum_mix(direct_sum_mix(a, b, 0.5), c, 0.6)
    expected = 0.3 * strategy_table(a).q + 0.3 * strategy_table(b).q + 0.4 * strategy_table(c).q
    assert np.abs(strategy_table(folded).q - expected).max() <= 1e-9


def test_direct_sum_rejects_bad_weight():
    s = advantage_strategy()
    with pytest.raises(ValueError):
        direct_sum_mix(s, s, 1.5)


def test_branch_laws_agree_between_orders():
    rng = np.random.default_rng(7)
    strategies = [advantage_strategy()] + [random_quantum_strategy(rng) for _ in range(30)]
    strategies.append(direct_sum_mix(advantage_strategy(), random_quantum_strategy(rng), 0.4))
    for s in strategies:
        exact = strategy_table(s).q
        for xb, xh in itertools.product((0, 1), repeat=2):
            pb, cb = branch_law(s, xb, xh, "B-first")
            ph, ch = branch_law(s, xb, xh, "H-first")
            joint_b = pb[:, None] * cb  # [u_b, u_h]
            joint_h = (ph[:, None] * ch).T  # [u_h, u_b] -> [u_b, u_h]
            assert np.abs(joint_b - joint_h).max() <= 1e-9
            assert np.abs(joint_b - exact[:, :, xb, xh]).max() <= 1e-9


def test_sample_sequential_deterministic_point_mass():
    for g in all_deterministic():
        s = embed_deterministic(g)
        for xb, xh, order in itertools.product((0, 1), (0, 1), ORDERS):
            assert sample_sequential(s, xb, xh, order, seed=xb + 7 * xh) == g.act(xb, xh)


def test_sample_sequential_respects_forbidden_outcomes():
    s = advantage_strategy()
    for seed in range(300):
        for order in ORDERS:
            ub, uh = sample_sequential(s, 1, 1, order, seed)
            assert ub != uh


def test_sample_sequential_matches_first_empirical_shot():
    s = advantage_strategy()
    for seed in range(20):
        shot = sample_sequential(s, 0, 1, "H-first", seed)
        one = empirical_table(s, 1, "H-first", seed).q[:, :, 0, 1]
        assert one[shot] == 1.0


def test_empirical_table_single_shot_shape():
    q = empirical_table(advantage_strategy(), 1, seed=5).q
    assert set(np.unique(q)) <= {0.0, 1.0}
    assert np.all(q.sum(axis=(0, 1)) == 1.0)


def test_empirical_table_is_seed_deterministic():
    s = advantage_strategy()
    a = empirical_table(s, 5000, "B-first", 42)
    assert a == empirical_table(s, 5000, "B-first", 42)
    assert a != empirical_table(s, 5000, "B-first", 43)


def test_empirical_table_converges():
    s = advantage_strategy()
    n = 200_000
    for order in ORDERS:
        q = empirical_table(s, n, order, seed=9).q
        tv = 0.5 * np.abs(q - reference_table()).sum(axis=(0, 1))
        assert tv.max() <= 0.01


def test_zero_frequency_at_three_eighths_is_within_three_sigma():
    n = 200_000
    q = empirical_table(advantage_strategy(), n, seed=10).q
    p = 3 / 8
    assert abs(q[0, 0, 0, 0] - p) <= 3 * math.sqrt(p * (1 - p) / n)


def test_degenerate_collapse_detected(monkeypatch):
    from qteam import quantum

    s = advantage_strategy()

    def fake_counts(p_first0, p_second0, uniforms):
        return np.array([[0, 0], [len(uniforms), 0]])

    # a kernel that puts every shot on first outcome 1, which the point mass never produces
    g = embed_deterministic(DeterministicStrategy((0, 0), (0, 0)))
    monkeypatch.setattr(quantum.kernels, "sample_counts", fake_counts)
    with pytest.raises(DegenerateCollapse):
        empirical_table(g, 10, "B-first", 0)
    # first outcome 1 has probability 1/2 for the advantage strategy
    empirical_table(s, 10, "B-first", 0)


def test_order_validation():
    with pytest.raises(ValueError):
        sample_sequential(advantage_strategy(), 0, 0, "sideways")
    with pytest.raises(ValueError):
        empirical_table(advantage_strategy(), 0)
