"""Radial ground state of the limit problem -Delta w + a_inf w = w^p.

The profile solves  w'' + (N-1)/r w' - a_inf w + w^p = 0,  w'(0) = 0,
w > 0, w -> 0.  It is computed by shooting on w(0): too small an initial
height makes the solution turn back up, too large makes it cross zero, and
bisection pins the separatrix to machine precision.  Past the radius where
the unstable mode would contaminate the tail, the profile is spliced onto
the asymptotic law  w(r) ~ d0 r^{-(N-1)/2} e^{-sqrt(a_inf) r}  with the
fitted decay rate, so the stored table is positive, strictly decreasing and
accurate out to r_max.

The energy of the limit functional and the threshold delta with its
localization radius R_delta are derived from the profile by radial
quadrature (with surface-measure weight) and a root find.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .fields import Field, Grid

SURFACE_MEASURE = {1: 2.0, 2: 2.0 * np.pi, 3: 4.0 * np.pi}


class GroundStateError(Exception):
    pass


def validate_exponent(p: float, dim: int) -> None:
    if not p > 1:
        raise GroundStateError(f"need p > 1, got {p}")
    if dim >= 3 and not p < (dim + 2) / (dim - 2):
        raise GroundStateError(f"need p < {(dim + 2) / (dim - 2)} for N={dim}, got {p}")


@dataclass(frozen=True)
class GroundState:
    p: float
    a_inf: float
    dim: int
    r: np.ndarray = field(repr=False)       # radial mesh, r[0] = 0
    w: np.ndarray = field(repr=False)       # profile values on the mesh
    dw: np.ndarray = field(repr=False)      # radial derivative on the mesh
    w0: float                                # w(0)
    d0: float                                # fitted decay amplitude
    decay_rate: float                        # fitted exponent, ~ sqrt(a_inf)
    splice_radius: float                     # asymptotic tail beyond this r
    delta: float | None = None
    R_delta: float | None = None

    @property
    def r_max(self) -> float:
        return float(self.r[-1])

    def _spline(self) -> CubicSpline:
        if not hasattr(self, "_cached_spline"):
            object.__setattr__(self, "_cached_spline", CubicSpline(self.r, self.w))
        return self._cached_spline

    def w_at(self, r) -> np.ndarray:
        """Profile at arbitrary radii; asymptotic tail beyond the stored mesh."""
        r = np.asarray(r, dtype=float)
        inside = np.minimum(r, self.r_max)
        vals = self._spline()(inside)
        far = r > self.r_max
        if np.any(far):
            wend = self.w[-1]
            m = (self.dim - 1) / 2.0
            tail = wend * (r[far] / self.r_max) ** (-m) * np.exp(
                -self.decay_rate * (r[far] - self.r_max)
            )
            vals = np.where(far, 0.0, vals)
            vals[far] = tail
        return np.maximum(vals, 0.0)

    def lift(self, grid: Grid, center) -> Field:
        """Translate the radial profile to an N-dimensional grid field."""
        if grid.dim != self.dim:
            raise GroundStateError(f"profile is {self.dim}-d, grid is {grid.dim}-d")
        return Field(grid, self.w_at(grid.radius_from(center)))

    def with_delta(self, a0: float, safety: float = 0.9) -> "GroundState":
        d, R = derive_delta(self, a0, safety)
        return replace(self, delta=d, R_delta=R)

    def summary(self) -> dict:
        return {
            "p": self.p,
            "a_inf": self.a_inf,
            "dim": self.dim,
            "w0": self.w0,
            "d0": self.d0,
            "decay_rate": self.decay_rate,
            "E_inf": energy_limit(self),
            "delta": self.delta,
            "R_delta": self.R_delta,
        }

    def write_profile_csv(self, path) -> None:
        np.savetxt(path, np.column_stack([self.r, self.w]), delimiter=",",
                   header="r,w", comments="")

    def write_summary_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.summary(), fh, indent=2)


def _rhs(p, a_inf, dim):
    def rhs(r, y):
        w, dw = y
        fric = (dim - 1) / r if r > 0 else 0.0
        return (dw, -fric * dw + a_inf * w - np.abs(w) ** (p - 1) * w)

    return rhs


def _classify(w0, p, a_inf, dim, r_max, rtol):
    """+1: crosses zero (w0 too large), -1: turns back up (too small)."""
    def cross(r, y):
        return y[0]

    cross.terminal = True
    cross.direction = -1

    def turn(r, y):
        return y[1]

    turn.terminal = True
    turn.direction = 1

    sol = solve_ivp(
        _rhs(p, a_inf, dim), (1e-12, r_max), [w0, 0.0],
        events=[cross, turn], rtol=rtol, atol=1e-14 * w0, method="DOP853",
    )
    if len(sol.t_events[0]):
        return 1
    if len(sol.t_events[1]):
        return -1
    # made it to r_max without misbehaving; treat residual sign as the verdict
    return 1 if sol.y[0, -1] < 0 else -1


def solve_radial(
    p: float,
    a_inf: float,
    dim: int,
    r_max: float | None = None,
    tol: float = 1e-10,
    mesh_points: int | None = None,
) -> GroundState:
    """Shoot + bisect for the radial ground state; splice the asymptotic tail.

    The returned mesh is uniform on [0, r_max].  `tol` bounds |w(r_max)|
    and controls the ODE integration tolerances.
    """
    validate_exponent(p, dim)
    if not a_inf > 0:
        raise GroundStateError("a_inf must be positive")
    rate = np.sqrt(a_inf)
    if r_max is None:
        r_max = max(24.0 / rate, 20.0 / a_inf)
    if a_inf * r_max < 20.0:
        raise GroundStateError("r_max too small: need a_inf * r_max >= 20")

    # classification can stop early, so a loose tolerance is enough there
    rtol_cls = 1e-9
    # the 1-d soliton height is an exact lower bound for w(0); scan upward
    scale = ((p + 1) / 2.0 * a_inf) ** (1.0 / (p - 1))
    lo = hi = None
    for f in np.geomspace(0.6, 20.0, 64):
        c = _classify(scale * f, p, a_inf, dim, r_max, rtol_cls)
        if c < 0:
            lo = scale * f
        else:
            hi = scale * f
            if lo is not None:
                break
    if lo is None or hi is None or hi < lo:
        raise GroundStateError("bisection bracket not found for w(0)")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _classify(mid, p, a_inf, dim, r_max, rtol_cls) < 0:
            lo = mid
        else:
            hi = mid
    w0 = 0.5 * (lo + hi)

    sol = solve_ivp(
        _rhs(p, a_inf, dim), (1e-12, r_max), [w0, 0.0],
        rtol=min(tol, 1e-11), atol=1e-15 * w0, method="DOP853", dense_output=True,
    )
    if mesh_points is None:
        mesh_points = int(r_max / 2e-3) + 1
    r = np.linspace(0.0, r_max, mesh_points)
    y = sol.sol(np.maximum(r, 1e-12))
    w, dw = y[0], y[1]

    # trust the integration down to a small fraction of the peak, then splice
    splice_level = max(1e-7 * w0, 50 * np.finfo(float).eps * w0 * np.exp(rate * r_max))
    below = np.where(w < splice_level)[0]
    if len(below) == 0:
        raise GroundStateError("profile did not decay below the splice level; increase r_max")
    i_s = below[0]
    r_s = r[i_s]

    # decay fit on a window ending at the splice radius
    d0, decay = fit_decay_window(r, w, dim, max(r_s - 6.0 / rate, 2.0 / rate), r_s)

    m = (dim - 1) / 2.0
    tail_r = r[i_s:]
    with np.errstate(divide="ignore"):
        geo = (tail_r / r_s) ** (-m) if r_s > 0 else np.ones_like(tail_r)
    w[i_s:] = w[i_s] * geo * np.exp(-decay * (tail_r - r_s))
    dw[i_s:] = w[i_s:] * (-decay - (m / tail_r if r_s > 0 else 0.0))

    if abs(w[-1]) >= tol:
        raise GroundStateError(f"|w(r_max)| = {abs(w[-1]):.3e} >= tol = {tol}")
    if np.any(w <= 0):
        raise GroundStateError("postcondition violation: profile not positive")
    if np.any(np.diff(w) >= 0):
        raise GroundStateError("postcondition violation: profile not strictly decreasing")

    return GroundState(
        p=p, a_inf=a_inf, dim=dim, r=r, w=w, dw=dw,
        w0=float(w[0]), d0=float(d0), decay_rate=float(decay), splice_radius=float(r_s),
    )


def fit_decay_window(r, w, dim, r_lo, r_hi):
    """Linear fit of log w + (N-1)/2 log r against -r on [r_lo, r_hi]."""
    mask = (r >= r_lo) & (r <= r_hi) & (w > 0)
    if mask.sum() < 8:
        raise GroundStateError("fewer than 8 samples in the fit window")
    rr, ww = r[mask], w[mask]
    y = np.log(ww) + 0.5 * (dim - 1) * np.log(rr)
    A = np.vstack([np.ones(rr.size), -rr]).T
    (logd0, rate), *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(np.exp(logd0)), float(rate)


def fit_decay(gs: GroundState, r_lo: float, r_hi: float) -> tuple[float, float]:
    """Decay-law fit (d0, exponent) on [r_lo, r_hi]; exponent ~ sqrt(a_inf)."""
    if not r_lo < r_hi <= gs.r_max:
        raise GroundStateError("need r_lo < r_hi <= r_max")
    noise_floor = 1e3 * np.finfo(float).eps * gs.w0
    i_hi = np.searchsorted(gs.r, r_hi)
    if gs.w[min(i_hi, len(gs.w) - 1)] < noise_floor:
        raise GroundStateError("w(r_hi) below the quadrature noise floor")
    return fit_decay_window(gs.r, gs.w, gs.dim, r_lo, r_hi)


def energy_limit(gs: GroundState) -> float:
    """E_inf(w) by radial quadrature with surface-measure weight."""
    surf = SURFACE_MEASURE[gs.dim]
    weight = gs.r ** (gs.dim - 1)
    grad = np.trapezoid(gs.dw**2 * weight, gs.r)
    mass = np.trapezoid(gs.w**2 * weight, gs.r)
    pp1 = np.trapezoid(gs.w ** (gs.p + 1) * weight, gs.r)
    return float(surf * (0.5 * (grad + gs.a_inf * mass) - pp1 / (gs.p + 1)))


def h1_norm_sq_limit(gs: GroundState) -> float:
    """int (|Dw|^2 + a_inf w^2) by radial quadrature."""
    surf = SURFACE_MEASURE[gs.dim]
    weight = gs.r ** (gs.dim - 1)
    grad = np.trapezoid(gs.dw**2 * weight, gs.r)
    mass = np.trapezoid(gs.w**2 * weight, gs.r)
    return float(surf * (grad + gs.a_inf * mass))


def emerging_mass_sq(gs: GroundState, delta: float) -> float:
    """int ((w - delta)^+)^2, used by the interaction surrogate."""
    surf = SURFACE_MEASURE[gs.dim]
    v = np.maximum(gs.w - delta, 0.0)
    return float(surf * np.trapezoid(v**2 * gs.r ** (gs.dim - 1), gs.r))


def derive_delta(gs: GroundState, a0: float, safety: float = 0.9) -> tuple[float, float]:
    """Threshold below every barrier in the admissibility list, and the radius
    R_delta with w < delta outside B(0, R_delta / 2)."""
    if not 0 < safety < 1:
        raise GroundStateError("safety must lie in (0, 1)")
    pm1 = gs.p - 1.0
    delta = safety * min(
        1.0,
        (a0 / gs.p) ** (1.0 / pm1),
        (a0 / 2.0) ** (1.0 / pm1),
        a0 ** (1.0 / pm1) / 2.0,
        gs.w0 / 3.0,
    )
    if gs.w[-1] >= delta:
        raise GroundStateError("profile never drops below delta; increase r_max")
    spline = gs._spline()
    r_half = brentq(lambda t: spline(t) - delta, 0.0, gs.r_max)
    return float(delta), float(2.0 * r_half)


def ode_residual(gs: GroundState) -> float:
    """Max centered-difference residual of the radial ODE on (0, r_max)."""
    r, w = gs.r, gs.w
    h = r[1] - r[0]
    wpp = (w[2:] - 2 * w[1:-1] + w[:-2]) / h**2
    wp = (w[2:] - w[:-2]) / (2 * h)
    res = wpp + (gs.dim - 1) / r[1:-1] * wp - gs.a_inf * w[1:-1] + w[1:-1] ** gs.p
    return float(np.max(np.abs(res)))
