import math

import numpy as np
import pytest

from mpmsa.configspace import MultiBall, classify_interactivity
from mpmsa.disorder import (
    InteractionPotential,
    ZERO_INTERACTION,
    sample_potential,
    uniform_distribution,
)
from mpmsa.errors import BudgetExceeded, ContractViolation
from mpmsa.graphs import build_graph
from mpmsa.hamiltonian import (
    VolumeIndex,
    assemble,
    assemble_ball,
    decouple,
    laplacian,
    norm_bound,
)

DIST = uniform_distribution(0, 1)


def test_laplacian_middle_vertex():
    g = build_graph("path:3")
    vol = VolumeIndex(g, [(1,)])
    assert (-laplacian(vol)) == pytest.approx(np.array([[2.0]]))


def test_laplacian_row_sums_full_volume():
    g = build_graph("cycle:7")
    vol = VolumeIndex(g, [(i,) for i in range(7)])
    rows = (-laplacian(vol)).sum(axis=1)
    assert rows == pytest.approx(np.zeros(7))


def test_two_particle_laplacian_kronecker_oracle():
    g = build_graph("path:3")
    vol1 = VolumeIndex(g, [(i,) for i in range(3)])
    lap1 = laplacian(vol1)
    vol2 = VolumeIndex(g, [(a, b) for a in range(3) for b in range(3)])
    lap2 = laplacian(vol2)
    eye = np.eye(3)
    oracle = np.kron(lap1, eye) + np.kron(eye, lap1)
    assert np.abs(lap2 - oracle).max() == 0.0


def test_assemble_g_zero_no_interaction():
    g = build_graph("path:5")
    vol = VolumeIndex(g, [(i,) for i in range(5)])
    smp = sample_potential(DIST, g, 3)
    ham = assemble(vol, 0.0, smp, ZERO_INTERACTION)
    assert np.array_equal(ham.matrix, -laplacian(vol))


def test_assemble_single_configuration_value():
    g = build_graph("path:3")
    smp = sample_potential(DIST, g, 9)
    u = InteractionPotential(0.7, 1.0)
    for gval in (0.0, 2.5, -1.0):
        ham = assemble(VolumeIndex(g, [(1, 1)]), gval, smp, u)
        expected = 4.0 + 2 * gval * smp.value(1) + u.value(0)
        assert ham.matrix == pytest.approx(np.array([[expected]]))


def test_assemble_symmetric_and_reproducible():
    g = build_graph("grid:3x3")
    ball = MultiBall(g, (4, 0), 1)
    smp = sample_potential(DIST, g, 21)
    u = InteractionPotential(1.0, 0.5)
    h1 = assemble_ball(ball, 1.3, smp, u)
    h2 = assemble_ball(ball, 1.3, sample_potential(DIST, g, 21), u)
    assert np.array_equal(h1.matrix, h2.matrix)
    assert np.abs(h1.matrix - h1.matrix.T).max() == 0.0
    assert h1.provenance.seed == 21 and h1.provenance.g == 1.3


def test_submatrix_consistency_nested_volumes():
    g = build_graph("path:8")
    smp = sample_potential(DIST, g, 4)
    u = InteractionPotential(0.4, 0.8)
    rng = np.random.default_rng(2)
    big = MultiBall(g, (3, 4), 3)
    ham = assemble_ball(big, 1.1, smp, u)
    members = big.members()
    for _ in range(10):
        pick = rng.choice(len(members), size=rng.integers(2, 12), replace=False)
        sub_cfgs = [members[i] for i in sorted(pick)]
        direct = assemble(VolumeIndex(g, sub_cfgs), 1.1, smp, u)
        via_sub = ham.submatrix(sub_cfgs)
        assert np.array_equal(direct.matrix, via_sub.matrix)


def test_constant_potential_shift_moves_spectrum_rigidly():
    g = build_graph("path:6")
    ball = MultiBall(g, (2, 3), 2)
    smp = sample_potential(DIST, g, 8)
    u = InteractionPotential(0.5, 1.0)
    gval, t = 1.7, 0.37
    base = np.linalg.eigvalsh(assemble_ball(ball, gval, smp, u).matrix)
    shifted_sample = smp.shifted_on(range(g.n_vertices), t)
    shifted = np.linalg.eigvalsh(assemble_ball(ball, gval, shifted_sample, u).matrix)
    n = 2
    assert np.abs(shifted - (base + n * gval * t)).max() < 1e-10


def test_norm_bound_contains_spectrum():
    g = build_graph("grid:4x4")
    u = InteractionPotential(2.0, 0.5)
    for seed in range(5):
        smp = sample_potential(DIST, g, seed)
        ball = MultiBall(g, (5, 10), 2)
        lam = np.linalg.eigvalsh(assemble_ball(ball, 3.0, smp, u).matrix)
        bound = norm_bound(g, 2, 3.0, DIST.sup_abs, u)
        assert np.abs(lam).max() <= bound


def test_volume_budget_guard():
    g = build_graph("path:80")
    ball = MultiBall(g, (40, 40), 40)
    with pytest.raises(BudgetExceeded):
        assemble_ball(ball, 1.0, sample_potential(DIST, g, 0), ZERO_INTERACTION)


def test_decouple_exact_and_bounded():
    g = build_graph("path:30")
    smp = sample_potential(DIST, g, 13)
    u = InteractionPotential(1.0, 0.5)
    ball = MultiBall(g, (2, 22), 2)
    kind, split = classify_interactivity(ball)
    assert kind == "WI"
    dec = decouple(ball, split, 1.0, smp, u)
    ham = assemble_ball(ball, 1.0, smp, u)
    perm = dec.permutation
    dev = np.abs(ham.matrix[np.ix_(perm, perm)] - dec.reassembled()).max()
    assert dev <= 1e-12
    assert dec.coupling_norm <= dec.coupling_norm_bound
    assert dec.coupling_norm_bound == pytest.approx(
        u.c_u * 4 * math.exp(-(2.0**u.zeta))
    )


def test_decouple_zero_interaction_tensor_spectrum():
    g = build_graph("path:30")
    smp = sample_potential(DIST, g, 14)
    ball = MultiBall(g, (1, 25), 1)
    _, split = classify_interactivity(ball)
    dec = decouple(ball, split, 2.0, smp, ZERO_INTERACTION)
    assert np.abs(dec.coupling).max() == 0.0
    lam_p = np.linalg.eigvalsh(dec.h_prime.matrix)
    lam_s = np.linalg.eigvalsh(dec.h_second.matrix)
    sums = np.sort((lam_p[:, None] + lam_s[None, :]).ravel())
    full = np.linalg.eigvalsh(dec.reassembled())
    assert np.abs(full - sums).max() < 1e-10


def test_decouple_kron_eigenvalue_sum_oracle_2x2():
    # endpoint vertex balls give genuine 2x2 (x) 2x2 factors; the eigenvalues
    # of the non-interacting part are all four pairwise sums
    g = build_graph("path:40")
    smp = sample_potential(DIST, g, 15)
    ball = MultiBall(g, (0, 39), 1)
    kind, split = classify_interactivity(ball)
    assert kind == "WI"
    dec = decouple(ball, split, 1.0, smp, ZERO_INTERACTION)
    assert dec.h_prime.size == 2 and dec.h_second.size == 2
    lam_p = np.linalg.eigvalsh(dec.h_prime.matrix)
    lam_s = np.linalg.eigvalsh(dec.h_second.matrix)
    ni = dec.noninteracting_matrix()
    assert np.abs(
        np.sort(np.linalg.eigvalsh(ni)) - np.sort((lam_p[:, None] + lam_s[None, :]).ravel())
    ).max() < 1e-10


def test_decouple_rejects_trivial_split():
    g = build_graph("path:30")
    smp = sample_potential(DIST, g, 16)
    ball = MultiBall(g, (2, 22), 2)
    _, split = classify_interactivity(ball)
    from mpmsa.configspace import CanonicalSplit

    with pytest.raises(ContractViolation):
        decouple(ball, CanonicalSplit(J=(1, 2), Jc=(), separation=99), 1.0, smp, ZERO_INTERACTION)


def test_decouple_bound_radius_four_exponential_tail():
    g = build_graph("path:40")
    smp = sample_potential(DIST, g, 17)
    u = InteractionPotential(1.0, 1.0)
    ball = MultiBall(g, (2, 32), 4)  # diam 30 > 3*2*4
    kind, split = classify_interactivity(ball)
    assert kind == "WI"
    dec = decouple(ball, split, 1.0, smp, u)
    assert dec.coupling_norm <= u.c_u * 2**2 * math.exp(-4.0)
