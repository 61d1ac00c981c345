"""Potential families a(x) and numerical validators for the standing hypotheses.

Supported families (all with inf a > 0 and a -> a_inf at infinity):

* ``constant``       a(x) = a_inf
* ``powerlaw``       a(x) = a_inf + A (1+|x|)^-m,  A > 0, m > 0
* ``angular``        a(x) = a_inf + A (1+|x|)^-m (1 + eps e^{-eta_tilde |x|} g(x/|x|))
* ``expdecay``       a(x) = a_inf + A e^{-m |x|}   (diagnostic only: decays too fast)

``powerlaw`` and ``angular`` approach a_inf from above slower than every
exponential; ``expdecay`` exists as a negative control for the slow-decay
check.  The angular profile is g(theta) = theta_1 (the cosine of the first
angular coordinate), bounded and smooth, and |eps| < 1 keeps a > a_inf.

The two validators turn the asymptotic hypotheses into monotone-trend
checks on sampled radii: slow decay means (a(r theta)-a_inf) e^{eta r} is
eventually increasing for every eta > 0; bounded angular oscillation means
osc(rho) e^{eta_tilde rho} decreases toward zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .fields import Field, Grid

FAMILIES = ("constant", "powerlaw", "angular", "expdecay")


@dataclass(frozen=True)
class Potential:
    family: str
    a_inf: float
    A: float = 1.0
    m: float = 2.0
    eps: float = 0.0
    eta_tilde: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown potential family {self.family!r}")
        if not self.a_inf > 0:
            raise ValueError("a_inf must be positive")
        if self.family != "constant":
            if not (self.A > 0 and self.m > 0):
                raise ValueError("families with decay need A > 0 and m > 0")
        if self.family == "angular":
            if not abs(self.eps) < 1:
                raise ValueError("|eps| < 1 required to keep a > a_inf")
            if not self.eta_tilde > 0:
                raise ValueError("eta_tilde must be positive")

    @property
    def is_radial(self) -> bool:
        return self.family != "angular" or self.eps == 0.0

    def __call__(self, *coords) -> np.ndarray:
        """Evaluate a(x); accepts coordinate arrays (meshgrid style)."""
        r = np.sqrt(sum(np.asarray(c, dtype=float) ** 2 for c in coords))
        if self.family == "constant":
            return np.broadcast_to(self.a_inf, r.shape).copy() if r.ndim else float(self.a_inf)
        if self.family == "expdecay":
            return self.a_inf + self.A * np.exp(-self.m * r)
        tail = self.A * (1.0 + r) ** (-self.m)
        if self.family == "powerlaw":
            return self.a_inf + tail
        # angular: g(theta) = first component of x/|x|
        with np.errstate(invalid="ignore", divide="ignore"):
            g = np.where(r > 0, np.asarray(coords[0], dtype=float) / np.where(r > 0, r, 1.0), 0.0)
        return self.a_inf + tail * (1.0 + self.eps * np.exp(-self.eta_tilde * r) * g)

    def eval_point(self, x) -> float:
        return float(self(*np.asarray(x, dtype=float)))

    def tail_point(self, x) -> float:
        """a(x) - a_inf evaluated without cancellation (exact per family)."""
        x = np.asarray(x, dtype=float)
        r = float(np.sqrt((x**2).sum()))
        if self.family == "constant":
            return 0.0
        if self.family == "expdecay":
            return self.A * np.exp(-self.m * r)
        t = self.A * (1.0 + r) ** (-self.m)
        if self.family == "powerlaw":
            return t
        g = x[0] / r if r > 0 else 0.0
        return t * (1.0 + self.eps * np.exp(-self.eta_tilde * r) * g)

    def sample(self, grid: Grid) -> Field:
        return Field(grid, self(*grid.coords))

    def min_on_box(self, grid: Grid) -> float:
        """a0 cached per call: minimum of the sampled values on the grid."""
        return float(self.sample(grid).values.min())

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "a_inf": self.a_inf,
            "A": self.A,
            "m": self.m,
            "eps": self.eps,
            "eta_tilde": self.eta_tilde,
        }


@dataclass
class DecayReport:
    """Per-eta slow-decay proxy: is (a - a_inf) e^{eta r} eventually increasing?"""

    eta_results: dict = dc_field(default_factory=dict)

    def passes(self, eta: float) -> bool:
        return self.eta_results[eta]["passes"]

    def onset_radius(self, eta: float):
        return self.eta_results[eta]["onset"]


def _directions(dim: int, count: int, rng=None) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        phi = np.linspace(0.0, 2 * np.pi, count, endpoint=False)
        return np.column_stack([np.cos(phi), np.sin(phi)])
    # Fibonacci sphere
    i = np.arange(count)
    z = 1.0 - 2.0 * (i + 0.5) / count
    phi = np.pi * (1 + 5**0.5) * i
    s = np.sqrt(1.0 - z**2)
    return np.column_stack([s * np.cos(phi), s * np.sin(phi), z])


def check_slow_decay(pot: Potential, eta_list, radii, dim: int = 2, sample_count: int = 32) -> DecayReport:
    """Check the divergence proxy for (a(x)-a_inf) e^{eta |x|} on sampled radii.

    For each eta the worst direction is used (min of a - a_inf over a
    direction sample), and the report records whether the sequence is
    increasing from some onset radius on.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.size == 0:
        raise ValueError("radii list must not be empty")
    if np.any(np.diff(radii) <= 0):
        raise ValueError("radii must be strictly increasing")
    dirs = _directions(dim, sample_count)
    # min over directions of (a - a_inf) at each radius, cancellation-free
    diff = np.array([min(pot.tail_point(r * d) for d in dirs) for r in radii])
    report = DecayReport()
    for eta in eta_list:
        seq = diff * np.exp(eta * radii)
        inc = np.diff(seq) > 0
        if inc.all():
            onset, ok = float(radii[0]), True
        elif inc.any() and inc[-1]:
            # increasing from the first index after the last violation
            last_bad = np.max(np.where(~inc)[0])
            onset, ok = float(radii[last_bad + 1]), True
        else:
            onset, ok = None, False
        report.eta_results[eta] = {"passes": ok, "onset": onset, "sequence": seq}
    return report


@dataclass
class OscillationReport:
    eta_tilde: float
    radii: np.ndarray
    osc: np.ndarray
    weighted: np.ndarray
    passes: bool


def check_angular_oscillation(
    pot: Potential, eta_tilde: float, radii, dim: int = 2, sample_count: int = 64
) -> OscillationReport:
    """Estimate osc(rho) = max over direction pairs of a(rho t1) - a(rho t2),
    and check that osc(rho) e^{eta_tilde rho} decreases toward 0."""
    if sample_count < 8:
        raise ValueError("need at least 8 directions per radius")
    radii = np.asarray(radii, dtype=float)
    dirs = _directions(dim, sample_count)
    osc = np.empty(radii.shape)
    for i, r in enumerate(radii):
        vals = np.array([pot.eval_point(r * d) for d in dirs])
        osc[i] = vals.max() - vals.min()
    weighted = osc * np.exp(eta_tilde * radii)
    tol = 1e-12 * max(pot.a_inf, 1.0)
    flat = np.all(osc <= tol)  # radial potentials oscillate not at all
    decreasing = bool(np.all(np.diff(weighted) <= tol)) and weighted[-1] <= weighted[0]
    return OscillationReport(eta_tilde, radii, osc, weighted, flat or decreasing)
