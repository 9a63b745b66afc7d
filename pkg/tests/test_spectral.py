import numpy as np
import pytest

from mpmsa.configspace import MultiBall
from mpmsa.disorder import (
    ZERO_INTERACTION,
    InteractionPotential,
    sample_potential,
    uniform_distribution,
)
from mpmsa.errors import ContractViolation, ResonanceError
from mpmsa.graphs import build_graph, certify_growth
from mpmsa.hamiltonian import HamiltonianMatrix, Provenance, VolumeIndex, assemble, assemble_ball
from mpmsa.rng import CounterRng
from mpmsa.spectral import (
    boundary_functional,
    efc,
    efc_test_function_value,
    eigendecompose,
    green,
    green_row,
    gri_check,
    localization_profile,
)

DIST = uniform_distribution(0, 1)


def _matrix_ham(graph, volume_configs, matrix):
    vol = VolumeIndex(graph, volume_configs)
    prov = Provenance(graph.name, vol.label, 0.0, 0, "direct", "none")
    return HamiltonianMatrix(vol, np.asarray(matrix, dtype=float), prov)


def test_diagonal_matrix_spectrum():
    g = build_graph("path:3")
    ham = _matrix_ham(g, [(0,), (1,), (2,)], np.diag([3.0, -1.0, 2.0]))
    spec = eigendecompose(ham)
    assert spec.eigenvalues == pytest.approx([-1.0, 2.0, 3.0])


def test_path3_laplacian_closed_form():
    # independent oracle: characteristic polynomial of the tridiagonal matrix
    # with diagonal (1,2,1) expands to -lam*(lam-1)*(lam-3), so {0, 1, 3}
    import sympy

    lam = sympy.symbols("lam")
    m = sympy.Matrix([[1, -1, 0], [-1, 2, -1], [0, -1, 1]])
    roots = sympy.solve(sympy.det(m - lam * sympy.eye(3)), lam)
    expected = sorted(float(r) for r in roots)
    assert expected == pytest.approx([0.0, 1.0, 3.0])

    g = build_graph("path:3")
    vol = VolumeIndex(g, [(i,) for i in range(3)])
    smp = sample_potential(DIST, g, 0)
    spec = eigendecompose(assemble(vol, 0.0, smp, ZERO_INTERACTION))
    assert spec.eigenvalues == pytest.approx(expected, abs=1e-12)


def test_eigendecompose_contracts():
    g = build_graph("grid:3x3")
    ball = MultiBall(g, (4, 4), 2)
    smp = sample_potential(DIST, g, 5)
    ham = assemble_ball(ball, 2.0, smp, InteractionPotential(1.0, 0.5))
    spec = eigendecompose(ham)
    resid = np.abs(ham.matrix @ spec.eigenvectors - spec.eigenvectors * spec.eigenvalues).max()
    assert resid <= 1e-9 * max(spec.h_norm, 1.0)
    gram = spec.eigenvectors.T @ spec.eigenvectors
    assert np.abs(gram - np.eye(len(spec.volume))).max() <= 1e-10


def test_green_one_by_one():
    g = build_graph("path:3")
    ham = _matrix_ham(g, [(1,)], [[2.5]])
    spec = eigendecompose(ham)
    assert green(spec, 1.0, (1,), (1,)) == pytest.approx(1.0 / (2.5 - 1.0))


def test_green_two_by_two_closed_form():
    g = build_graph("path:2")
    m = np.array([[1.0, -1.0], [-1.0, 3.0]])
    spec = eigendecompose(_matrix_ham(g, [(0,), (1,)], m))
    e = 0.35
    inv = np.linalg.inv(m - e * np.eye(2))
    for i, x in enumerate([(0,), (1,)]):
        for j, y in enumerate([(0,), (1,)]):
            assert green(spec, e, x, y) == pytest.approx(inv[i, j], rel=1e-12)


def test_resolvent_identity_columnwise():
    g = build_graph("path:10")
    ball = MultiBall(g, (4,), 4)
    smp = sample_potential(DIST, g, 7)
    ham = assemble_ball(ball, 1.5, smp, ZERO_INTERACTION)
    spec = eigendecompose(ham)
    e = spec.eigenvalues.max() + 0.5
    for x in ham.volume.configs:
        col = green_row(spec, e, x)
        unit = np.zeros(len(ham.volume))
        unit[ham.volume.position(x)] = 1.0
        assert np.abs((ham.matrix - e * np.eye(len(ham.volume))) @ col - unit).max() <= 1e-9


def test_resonance_guard():
    g = build_graph("path:3")
    spec = eigendecompose(_matrix_ham(g, [(0,), (1,), (2,)], np.diag([1.0, 2.0, 3.0])))
    with pytest.raises(ResonanceError) as err:
        green(spec, 2.0 + 1e-13, (0,), (0,))
    assert err.value.dist_to_spectrum <= 1e-12


def test_boundary_functional_prefactor_linearity_and_empty():
    g = build_graph("path:9")
    cert = certify_growth(g, 1.0, 8)
    smp = sample_potential(DIST, g, 2)
    ball = MultiBall(g, (4,), 2)
    spec = eigendecompose(assemble_ball(ball, 1.0, smp, ZERO_INTERACTION))
    e = spec.eigenvalues.max() + 1.0
    f1 = boundary_functional(spec, ball, e, cert)
    doubled = certify_growth(g, 1.0, 8)
    doubled = type(doubled)(d=doubled.d, C=doubled.C * 2 ** 0.5, lmax=doubled.lmax)
    # prefactor C^2 L^d doubles when C grows by sqrt(2) at N=1
    assert boundary_functional(spec, ball, e, doubled) == pytest.approx(2 * f1)

    whole = MultiBall(g, (4,), 8)
    spec_whole = eigendecompose(assemble_ball(whole, 1.0, smp, ZERO_INTERACTION))
    with pytest.raises(ContractViolation):
        boundary_functional(spec_whole, whole, e, cert)


def test_boundary_functional_matches_direct_enumeration():
    g = build_graph("path:11")
    cert = certify_growth(g, 1.0, 10)
    smp = sample_potential(DIST, g, 3)
    ball = MultiBall(g, (5,), 3)
    spec = eigendecompose(assemble_ball(ball, 2.0, smp, ZERO_INTERACTION))
    e = 0.123
    direct = max(abs(green(spec, e, (5,), z)) for z in [(2,), (8,)])
    pref = cert.C ** 2 * 3.0
    assert boundary_functional(spec, ball, e, cert) == pytest.approx(pref * direct)


def test_efc_diagonal_and_bounds():
    g = build_graph("path:4")
    ham = _matrix_ham(g, [(i,) for i in range(4)], np.diag([0.3, 1.2, 2.0, 5.5]))
    spec = eigendecompose(ham)
    for i in range(4):
        for j in range(4):
            val = efc(spec, (i,), (j,)).value
            assert val == pytest.approx(1.0 if i == j else 0.0, abs=1e-12)


def test_efc_closed_form_dominates_random_functions():
    g = build_graph("path:6")
    smp = sample_potential(DIST, g, 11)
    vol = VolumeIndex(g, [(i,) for i in range(6)])
    spec = eigendecompose(assemble(vol, 2.0, smp, ZERO_INTERACTION))
    rng = CounterRng(99)
    x, y = (1,), (4,)
    closed = efc(spec, x, y)
    n_clusters = len(closed.contributions)
    for _ in range(2000):
        f_vals = np.asarray([rng.uniform(-1, 1) for _ in range(n_clusters)])
        assert efc_test_function_value(spec, x, y, f_vals) <= closed.value + 1e-12
    # the sign pattern of the projections attains the sup exactly
    per = spec.component(x) * spec.component(y)
    sign_vals = []
    for block in spec.clusters():
        s = per[block].sum()
        sign_vals.append(1.0 if s >= 0 else -1.0)
    attained = efc_test_function_value(spec, x, y, np.asarray(sign_vals))
    assert attained == pytest.approx(closed.value, abs=1e-10)
    assert closed.value <= 1.0 + 1e-12
    assert efc(spec, y, x).value == pytest.approx(closed.value, abs=1e-12)
    assert efc(spec, x, x).value == pytest.approx(1.0, abs=1e-10)


def test_gri_holds_on_random_instances():
    from mpmsa.experiments import off_spectrum_energy, random_gri_instance
    from mpmsa.hamiltonian import spectral_window

    u = InteractionPotential(1.0, 0.5)
    for graph_spec, n in [("path:12", 1), ("path:8", 2), ("cycle:9", 1), ("grid:3x4", 1)]:
        g = build_graph(graph_spec)
        window = spectral_window(g, n, 1.0, DIST.sup_abs, u)
        for i in range(25):
            rng = CounterRng(1000 * n + i)
            volume, sub, x, y = random_gri_instance(g, n, rng, max_volume=200)
            smp = sample_potential(DIST, g, 555 + i)
            ham = assemble(VolumeIndex(g, volume), 1.0, smp, u)
            spec_v = eigendecompose(ham)
            spec_w = eigendecompose(ham.submatrix(sub))
            e = off_spectrum_energy((spec_v, spec_w), window, rng)
            rep = gri_check(ham, sub, x, y, e)
            assert rep.holds


def test_gri_degenerate_subset():
    # W = V minus a single boundary configuration
    g = build_graph("path:9")
    ball = MultiBall(g, (4,), 3)
    volume = ball.members()
    sub = volume[:-1]
    smp = sample_potential(DIST, g, 6)
    ham = assemble(VolumeIndex(g, volume), 1.0, smp, ZERO_INTERACTION)
    spec = eigendecompose(ham)
    e = spec.eigenvalues.max() + 0.8
    rep = gri_check(ham, sub, sub[0], volume[-1], e)
    assert rep.holds


def test_localization_profile_strong_disorder():
    g = build_graph("path:20")
    vol = VolumeIndex(g, [(i,) for i in range(20)])
    smp = sample_potential(DIST, g, 31)
    spec = eigendecompose(assemble(vol, 1e3, smp, ZERO_INTERACTION))
    prof = localization_profile(spec)
    masses = prof.masses()
    assert np.all(masses[np.isfinite(masses)] > 0)
    assert sum(f.point_support for f in prof.fits) == 0


def test_localization_profile_point_support():
    g = build_graph("path:4")
    ham = _matrix_ham(g, [(i,) for i in range(4)], np.diag([1.0, 2.0, 3.0, 4.0]))
    prof = localization_profile(eigendecompose(ham))
    assert all(f.point_support for f in prof.fits)


def test_localization_profile_extended_state():
    g = build_graph("cycle:12")
    vol = VolumeIndex(g, [(i,) for i in range(12)])
    smp = sample_potential(DIST, g, 1)
    spec = eigendecompose(assemble(vol, 0.0, smp, ZERO_INTERACTION))
    prof = localization_profile(spec)
    ground = prof.fits[0]  # constant eigenfunction of the cycle Laplacian
    assert abs(ground.mass) < 1e-8


def test_parseval_per_configuration():
    g = build_graph("grid:3x3")
    ball = MultiBall(g, (4, 2), 1)
    smp = sample_potential(DIST, g, 8)
    spec = eigendecompose(assemble_ball(ball, 1.0, smp, InteractionPotential(0.5, 1.0)))
    sums = (spec.eigenvectors**2).sum(axis=1)
    assert np.abs(sums - 1.0).max() <= 1e-10
