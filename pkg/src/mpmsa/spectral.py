"""Exact diagonalization, Green functions, the boundary functional, the
eigenfunction correlator and the geometric resolvent inequality check."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .configspace import Config, MultiBall, ball_inner_boundary, edge_boundary, rho_s
from .errors import ContractViolation, DataError, ResonanceError
from .graphs import GrowthCertificate
from .hamiltonian import HamiltonianMatrix, VolumeIndex

RESOLVENT_GUARD = 1e-12
DEGENERACY_GAP = 1e-10


@dataclass(frozen=True)
class SpectralData:
    """Ascending eigenvalues with orthonormal eigenvector columns."""

    volume: VolumeIndex
    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)
    h_norm: float

    def dist_to_spectrum(self, energy: float) -> float:
        return float(np.abs(self.eigenvalues - energy).min())

    def component(self, config: Config) -> np.ndarray:
        """Row of the eigenvector matrix at a configuration (values psi_j(x))."""
        return self.eigenvectors[self.volume.position(config), :]

    def clusters(self, gap: float = DEGENERACY_GAP) -> list[slice]:
        """Maximal runs of eigenvalues whose consecutive gaps are <= gap."""
        lam = self.eigenvalues
        out = []
        start = 0
        for i in range(1, len(lam)):
            if lam[i] - lam[i - 1] > gap:
                out.append(slice(start, i))
                start = i
        out.append(slice(start, len(lam)))
        return out


def eigendecompose(ham: HamiltonianMatrix) -> SpectralData:
    """Full spectrum with orthonormal eigenvectors and a fixed sign convention.

    Ordering is ascending; each eigenvector is flipped so its largest-magnitude
    entry (smallest index on ties) is positive.  Residual and orthonormality
    contracts are enforced here rather than trusted.
    """
    if not np.isfinite(ham.matrix).all():
        raise DataError("matrix has non-finite entries")
    lam, vec = np.linalg.eigh(ham.matrix)
    anchor = np.argmax(np.abs(vec), axis=0)
    signs = np.sign(vec[anchor, np.arange(vec.shape[1])])
    signs[signs == 0] = 1.0
    vec = vec * signs
    h_norm = float(np.abs(lam).max()) if lam.size else 0.0
    resid = np.abs(ham.matrix @ vec - vec * lam).max()
    if resid > 1e-9 * max(h_norm, 1.0):
        raise DataError(f"eigensolve residual {resid:.3e} too large")
    gram_err = np.abs(vec.T @ vec - np.eye(vec.shape[1])).max()
    if gram_err > 1e-10:
        raise DataError(f"eigenvector gram deviation {gram_err:.3e} too large")
    return SpectralData(volume=ham.volume, eigenvalues=lam, eigenvectors=vec, h_norm=h_norm)


def _check_resonance(spec: SpectralData, energy: float, guard: float) -> None:
    dist = spec.dist_to_spectrum(energy)
    if dist <= guard:
        raise ResonanceError(dist, guard)


def green(
    spec: SpectralData, energy: float, x: Config, y: Config, guard: float = RESOLVENT_GUARD
) -> float:
    """Matrix entry of (H - E I)^{-1}: sum_j psi_j(x) psi_j(y) / (lambda_j - E)."""
    _check_resonance(spec, energy, guard)
    cx = spec.component(x)
    cy = spec.component(y)
    return float(np.sum(cx * cy / (spec.eigenvalues - energy)))


def green_row(
    spec: SpectralData, energy: float, x: Config, guard: float = RESOLVENT_GUARD
) -> np.ndarray:
    """G(x, .; E) over the whole volume as one vector."""
    _check_resonance(spec, energy, guard)
    weights = spec.component(x) / (spec.eigenvalues - energy)
    return spec.eigenvectors @ weights


@dataclass(frozen=True)
class BoundaryProfile:
    """Reusable data for evaluating F_u(E) on many energies.

    F_u(E) = prefactor * max over boundary z of |sum_j c_j(z) / (lambda_j - E)|
    with c_j(z) = psi_j(u) psi_j(z).
    """

    eigenvalues: np.ndarray = field(repr=False)
    coefficients: np.ndarray = field(repr=False)  # (n_eigs, n_boundary)
    boundary: tuple[Config, ...]
    prefactor: float
    center: Config

    def green_values(self, energies: np.ndarray) -> np.ndarray:
        """(n_energies, n_boundary) array of G(center, z; E); no resonance guard."""
        energies = np.atleast_1d(np.asarray(energies, dtype=np.float64))
        with np.errstate(divide="ignore", invalid="ignore"):
            weights = 1.0 / (self.eigenvalues[None, :] - energies[:, None])
            return weights @ self.coefficients

    def evaluate(self, energies, guard: float = 0.0) -> np.ndarray:
        """F values per energy; energies within `guard` of a pole give +inf."""
        energies = np.atleast_1d(np.asarray(energies, dtype=np.float64))
        vals = self.prefactor * np.abs(self.green_values(energies)).max(axis=1)
        if guard > 0.0:
            dist = np.abs(self.eigenvalues[None, :] - energies[:, None]).min(axis=1)
            vals = np.where(dist <= guard, np.inf, vals)
        return vals


def boundary_profile(
    spec: SpectralData, ball: MultiBall, cert: GrowthCertificate
) -> BoundaryProfile:
    if ball.radius < 1:
        raise ContractViolation("boundary functional needs radius >= 1")
    boundary = ball_inner_boundary(ball)
    if not boundary:
        raise ContractViolation("ball has empty inner boundary (it exhausts the graph)")
    center_row = spec.component(ball.center)
    coeff = np.stack([center_row * spec.component(z) for z in boundary], axis=1)
    pref = cert.prefactor(ball.n_particles, ball.radius)
    return BoundaryProfile(
        eigenvalues=spec.eigenvalues,
        coefficients=coeff,
        boundary=tuple(boundary),
        prefactor=pref,
        center=ball.center,
    )


def boundary_functional(
    spec: SpectralData,
    ball: MultiBall,
    energy: float,
    cert: GrowthCertificate,
    guard: float = RESOLVENT_GUARD,
) -> float:
    """F_u(E) = C^(2N) L^(Nd) * max over inner-boundary z of |G_ball(u, z; E)|."""
    _check_resonance(spec, energy, guard)
    prof = boundary_profile(spec, ball, cert)
    return float(prof.evaluate(np.asarray([energy]))[0])


@dataclass(frozen=True)
class EfcResult:
    """Eigenfunction correlator sup over |f| <= 1 of |<1_y| f(H) |1_x>|."""

    value: float
    contributions: tuple[float, ...]  # |<1_y P_lambda 1_x>| per eigenvalue cluster
    cluster_energies: tuple[float, ...]


def efc(spec: SpectralData, x: Config, y: Config, gap: float = DEGENERACY_GAP) -> EfcResult:
    """Closed form: sum over distinct-eigenvalue clusters of |<1_y P 1_x>|.

    The sup over bounded test functions is attained by the sign pattern of the
    per-cluster projections, so no optimization is needed.
    """
    cx = spec.component(x)
    cy = spec.component(y)
    per_state = cx * cy
    contribs = []
    energies = []
    for block in spec.clusters(gap):
        contribs.append(abs(float(per_state[block].sum())))
        energies.append(float(spec.eigenvalues[block].mean()))
    return EfcResult(
        value=float(sum(contribs)),
        contributions=tuple(contribs),
        cluster_energies=tuple(energies),
    )


def efc_test_function_value(
    spec: SpectralData, x: Config, y: Config, f_values: np.ndarray, gap: float = DEGENERACY_GAP
) -> float:
    """|<1_y| f(H) |1_x>| for f given by its values on the cluster energies."""
    cx = spec.component(x)
    cy = spec.component(y)
    per_state = cx * cy
    total = 0.0
    for f_val, block in zip(f_values, spec.clusters(gap)):
        total += f_val * float(per_state[block].sum())
    return abs(total)


@dataclass(frozen=True)
class GriReport:
    lhs: float
    rhs: float
    holds: bool
    n_boundary_edges: int


def gri_check(
    h_big: HamiltonianMatrix,
    subset,
    x: Config,
    y: Config,
    energy: float,
    guard: float = RESOLVENT_GUARD,
    slack: float = 1e-9,
) -> GriReport:
    """Geometric resolvent inequality over (V, W):

        |G_V(x,y)| <= sum over boundary edges (u,v) of |G_W(x,u)| |G_V(v,y)|

    for x in W, y in V \\ W, E off both spectra.  The inequality is exact
    mathematics; a failure beyond the tolerance indicates an implementation
    bug.  Small Green values
    come out of strongly canceling spectral sums, so on near-equality
    instances the relative slack is topped up with a machine-noise floor
    proportional to the cancellation mass sum_j |psi_j(x) psi_j(y)| / |l_j - E|.
    """
    sub_cfgs = sorted(set(map(tuple, subset)))
    if tuple(x) not in set(sub_cfgs):
        raise ContractViolation("x must lie in W")
    if tuple(y) in set(sub_cfgs) or tuple(y) not in h_big.volume:
        raise ContractViolation("y must lie in V \\ W")
    h_sub = h_big.submatrix(sub_cfgs)
    spec_big = eigendecompose(h_big)
    spec_sub = eigendecompose(h_sub)
    _check_resonance(spec_big, energy, guard)
    _check_resonance(spec_sub, energy, guard)

    edges = edge_boundary(h_big.volume.graph, h_big.volume.configs, sub_cfgs)
    g_big_y = green_row(spec_big, energy, y, guard)
    g_sub_x = green_row(spec_sub, energy, x, guard)
    lhs = abs(float(g_big_y[h_big.volume.position(x)]))
    rhs = 0.0
    for u, v in edges:
        rhs += abs(float(g_sub_x[h_sub.volume.position(u)])) * abs(
            float(g_big_y[h_big.volume.position(v)])
        )
    cancel_mass = float(
        np.sum(
            np.abs(spec_big.component(x) * spec_big.component(y))
            / np.abs(spec_big.eigenvalues - energy)
        )
    )
    noise_floor = 1e-12 * (1.0 + cancel_mass)
    return GriReport(
        lhs=lhs,
        rhs=rhs,
        holds=lhs <= rhs * (1.0 + slack) + noise_floor,
        n_boundary_edges=len(edges),
    )


@dataclass(frozen=True)
class EigenfunctionFit:
    center: Config
    mass: float
    amplitude: float
    residual: float
    n_points: int
    point_support: bool


@dataclass(frozen=True)
class LocalizationProfile:
    fits: tuple[EigenfunctionFit, ...]

    def masses(self) -> np.ndarray:
        return np.asarray([f.mass for f in self.fits])


def localization_profile(
    spec: SpectralData, floor: float = 1e-14
) -> LocalizationProfile:
    """Per eigenfunction: localization center and least-squares decay mass.

    Fits log|psi(x)| = log(amplitude) - mass * rho_S(x, center) over entries
    above the floor; entries at or below the floor are treated as numerically
    zero, and fits with fewer than two distinct radii are flagged point_support.
    """
    vol = spec.volume
    if len(vol) < 2:
        raise ContractViolation("localization profile needs >= 2 configurations")
    g = vol.graph
    fits = []
    for j in range(spec.eigenvectors.shape[1]):
        psi = np.abs(spec.eigenvectors[:, j])
        center_idx = int(np.argmax(psi))  # argmax takes the smallest index on ties
        center = vol.configs[center_idx]
        mask = psi > floor
        radii = np.asarray([rho_s(g, center, c) for c in vol.configs], dtype=np.float64)
        r, v = radii[mask], np.log(psi[mask])
        if np.unique(r).size < 2:
            fits.append(EigenfunctionFit(center, float("nan"), float("nan"), 0.0, int(mask.sum()), True))
            continue
        coeffs, res = np.polyfit(r, v, 1, full=True)[:2]
        slope, intercept = coeffs
        residual = float(res[0]) if len(res) else 0.0
        fits.append(
            EigenfunctionFit(
                center=center,
                mass=float(-slope),
                amplitude=float(np.exp(intercept)),
                residual=residual,
                n_points=int(mask.sum()),
                point_support=False,
            )
        )
    return LocalizationProfile(fits=tuple(fits))
