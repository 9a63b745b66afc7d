"""IID external potential, the two-body interaction, and sample-mean splits.

Per-vertex draws come from a counter-based stream (see rng.mix64), so a sample
is a pure function of (seed, distribution, vertex index): sampling order,
chunking and thread counts cannot change values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import ConfigurationError, ContractViolation
from .graphs import Graph
from .rng import uniform01


@dataclass(frozen=True)
class PotentialDistribution:
    """Bounded-support marginal with density bounds and a derivative bound.

    kind 'uniform' on [a, b]; kind 'tgauss' is a Gaussian(mu, sigma) truncated
    to [a, b] and renormalized (C^1 on its support).  p_lower/p_upper bound the
    density on the support and deriv_bound bounds |p'| there; for tgauss they
    are computed numerically at construction.  The degenerate case a == b is
    allowed for deterministic controls and carries no density bounds.
    """

    kind: str
    a: float
    b: float
    mu: float = 0.0
    sigma: float = 1.0
    p_lower: float = 0.0
    p_upper: float = 0.0
    deriv_bound: float = 0.0

    @property
    def spec(self) -> str:
        if self.kind == "uniform":
            return f"uniform:{self.a:g}:{self.b:g}"
        return f"tgauss:{self.mu:g}:{self.sigma:g}:{self.a:g}:{self.b:g}"

    @property
    def sup_abs(self) -> float:
        return max(abs(self.a), abs(self.b))

    def sample_values(self, seed: int, count: int) -> np.ndarray:
        u = np.asarray(uniform01(seed, np.arange(count, dtype=np.uint64)))
        if self.kind == "uniform":
            return self.a + (self.b - self.a) * u
        lo = ndtr((self.a - self.mu) / self.sigma)
        hi = ndtr((self.b - self.mu) / self.sigma)
        return self.mu + self.sigma * ndtri(lo + u * (hi - lo))


def uniform_distribution(a: float, b: float) -> PotentialDistribution:
    if b < a:
        raise ConfigurationError("uniform needs a <= b")
    if b == a:
        return PotentialDistribution("uniform", a, b, p_lower=math.inf, p_upper=math.inf)
    dens = 1.0 / (b - a)
    return PotentialDistribution("uniform", a, b, p_lower=dens, p_upper=dens, deriv_bound=0.0)


def truncated_gaussian(mu: float, sigma: float, a: float, b: float) -> PotentialDistribution:
    if sigma <= 0:
        raise ConfigurationError("tgauss needs sigma > 0")
    if b <= a:
        raise ConfigurationError("tgauss needs a < b")
    mass = ndtr((b - mu) / sigma) - ndtr((a - mu) / sigma)
    grid = np.linspace(a, b, 4001)
    pdf = np.exp(-0.5 * ((grid - mu) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi) * mass)
    dpdf = np.abs(pdf * (grid - mu) / sigma**2)
    return PotentialDistribution(
        "tgauss", a, b, mu=mu, sigma=sigma,
        p_lower=float(pdf.min()), p_upper=float(pdf.max()), deriv_bound=float(dpdf.max()),
    )


def parse_distribution_spec(spec: str) -> PotentialDistribution:
    parts = spec.strip().split(":")
    try:
        if parts[0] == "uniform" and len(parts) == 3:
            return uniform_distribution(float(parts[1]), float(parts[2]))
        if parts[0] == "tgauss" and len(parts) == 5:
            return truncated_gaussian(*(float(p) for p in parts[1:]))
    except ConfigurationError:
        raise
    except ValueError as exc:
        raise ConfigurationError(f"bad distribution spec '{spec}': {exc}") from exc
    raise ConfigurationError(f"bad distribution spec '{spec}'")


@dataclass(frozen=True)
class DisorderSample:
    """One realization of the external potential over a graph's vertices."""

    values: np.ndarray
    seed: int
    distribution: PotentialDistribution
    graph_name: str

    def value(self, vertex: int) -> float:
        return float(self.values[vertex])

    def shifted_on(self, vertices, t: float) -> "DisorderSample":
        """Sample with V + t * indicator(vertices); used by spectral-shift checks."""
        vals = self.values.copy()
        vals[np.asarray(sorted(vertices), dtype=np.int64)] += t
        return DisorderSample(vals, self.seed, self.distribution, self.graph_name + "+shift")


def sample_potential(dist: PotentialDistribution, graph: Graph, seed: int) -> DisorderSample:
    """One independent draw per vertex of the graph."""
    values = dist.sample_values(seed, graph.n_vertices)
    return DisorderSample(values=values, seed=seed, distribution=dist, graph_name=graph.name)


@dataclass(frozen=True)
class InteractionPotential:
    """Two-body potential u(r) = C_U * exp(-r**zeta) for r >= 1, u(0) = C_U.

    The bound defines u only for r >= 1; two distinguishable particles can
    share a vertex, so u(0) extends the bound by continuity.  Values vanish
    beyond truncation_radius (math.inf keeps the full range).
    """

    c_u: float
    zeta: float
    truncation_radius: float = math.inf

    def __post_init__(self):
        if self.c_u < 0 or self.zeta <= 0:
            raise ConfigurationError("interaction needs C_U >= 0 and zeta > 0")

    @property
    def spec(self) -> str:
        rcut = "inf" if math.isinf(self.truncation_radius) else f"{self.truncation_radius:g}"
        return f"u:C={self.c_u:g}:zeta={self.zeta:g}:rcut={rcut}"

    def value(self, r: int | float) -> float:
        if r < 0:
            raise ContractViolation("interaction distance must be >= 0")
        if r > self.truncation_radius:
            return 0.0
        if r == 0:
            return self.c_u
        return self.c_u * math.exp(-float(r) ** self.zeta)

    def values(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=np.float64)
        if (r < 0).any():
            raise ContractViolation("interaction distance must be >= 0")
        out = self.c_u * np.exp(-np.where(r == 0, 0.0, r) ** self.zeta)
        out[r == 0] = self.c_u
        out[r > self.truncation_radius] = 0.0
        return out


ZERO_INTERACTION = InteractionPotential(c_u=0.0, zeta=1.0)


def parse_interaction_spec(spec: str) -> InteractionPotential:
    parts = spec.strip().split(":")
    if not parts or parts[0] != "u":
        raise ConfigurationError(f"bad interaction spec '{spec}'")
    fields = {}
    for part in parts[1:]:
        if "=" not in part:
            raise ConfigurationError(f"bad interaction spec '{spec}'")
        key, val = part.split("=", 1)
        fields[key.strip().lower()] = val.strip()
    try:
        c_u = float(fields.pop("c"))
        zeta = float(fields.pop("zeta"))
        rcut_raw = fields.pop("rcut", "inf")
        rcut = math.inf if rcut_raw == "inf" else float(rcut_raw)
    except (KeyError, ValueError) as exc:
        raise ConfigurationError(f"bad interaction spec '{spec}': {exc}") from exc
    if fields:
        raise ConfigurationError(f"unknown interaction fields {sorted(fields)} in '{spec}'")
    return InteractionPotential(c_u=c_u, zeta=zeta, truncation_radius=rcut)


@dataclass(frozen=True)
class MeanFluctuationSplit:
    """V restricted to Q decomposed as sample mean xi plus fluctuations eta."""

    vertices: tuple[int, ...]
    xi: float
    eta: dict[int, float]


def mean_fluctuation_split(sample: DisorderSample, vertices) -> MeanFluctuationSplit:
    verts = tuple(sorted(vertices))
    if not verts:
        raise ContractViolation("Q must be nonempty")
    vals = sample.values[np.asarray(verts, dtype=np.int64)]
    xi = float(vals.mean())
    return MeanFluctuationSplit(
        vertices=verts, xi=xi, eta={v: float(sample.values[v] - xi) for v in verts}
    )
