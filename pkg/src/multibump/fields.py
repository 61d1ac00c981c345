"""Grids, sampled fields and discrete operators on the truncated box [-L, L]^N.

The unbounded domain is truncated to a symmetric box with homogeneous
Dirichlet data (fields are extended by zero outside the box).  All
differential operators are second-order finite differences:

* ``laplacian`` is the standard (2N+1)-point stencil with zero extension,
* ``dirichlet_form`` is the edge sum ``sum h^{N-2} (u_j - u_i)^2`` over all
  grid edges including the half-edges to the zero boundary; it satisfies
  ``dirichlet_form(u) == <u, -laplacian(u)> h^N`` exactly, so energies built
  from it have the stencil Laplacian as their exact discrete gradient,
* ``gradient`` returns centered differences (used for norms/diagnostics,
  not inside the energy).

Quadrature of node values is the trapezoidal rule (``integrate``); the
energy module uses plain ``h^N`` node weights instead, which agree with the
trapezoidal rule up to the boundary ring, where admissible fields vanish.

Fields are immutable values; every operation returns a new Field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class FieldError(Exception):
    """Structural error: mismatched grids, invalid values."""


@dataclass(frozen=True)
class Grid:
    """Uniform grid on [-L, L]^N with M points per axis, h = 2L/(M-1)."""

    dim: int
    half_width: float
    points: int

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise FieldError(f"unsupported dimension {self.dim}")
        if self.points < 16:
            raise FieldError(f"need at least 16 points per axis, got {self.points}")
        if not self.half_width > 0:
            raise FieldError(f"half_width must be positive, got {self.half_width}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.points - 1)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points,) * self.dim

    @property
    def node_count(self) -> int:
        return self.points**self.dim

    @cached_property
    def axis(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.points)

    @cached_property
    def coords(self) -> tuple[np.ndarray, ...]:
        """Meshgrid coordinate arrays, one per axis, shape == self.shape."""
        return tuple(np.meshgrid(*([self.axis] * self.dim), indexing="ij"))

    @cached_property
    def trapezoid_weights(self) -> np.ndarray:
        w1 = np.full(self.points, self.spacing)
        w1[0] *= 0.5
        w1[-1] *= 0.5
        out = w1
        for _ in range(self.dim - 1):
            out = np.multiply.outer(out, w1)
        return out

    def radius_from(self, center) -> np.ndarray:
        """|x - center| at every node."""
        c = np.asarray(center, dtype=float)
        if c.shape != (self.dim,):
            raise FieldError(f"center must have {self.dim} components")
        r2 = np.zeros(self.shape)
        for ax, x in enumerate(self.coords):
            r2 += (x - c[ax]) ** 2
        return np.sqrt(r2)


@dataclass(frozen=True)
class Field:
    """Scalar values at the nodes of a Grid."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != self.grid.shape:
            raise FieldError(f"value shape {v.shape} != grid shape {self.grid.shape}")
        object.__setattr__(self, "values", v)

    def check_finite(self) -> "Field":
        if not np.all(np.isfinite(self.values)):
            raise FieldError("field contains NaN/Inf")
        return self

    # small arithmetic surface so solver code stays readable
    def __add__(self, other):
        return Field(self.grid, self.values + _vals(other, self.grid))

    def __sub__(self, other):
        return Field(self.grid, self.values - _vals(other, self.grid))

    def __mul__(self, c: float):
        return Field(self.grid, self.values * c)

    __rmul__ = __mul__

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def from_function(cls, grid: Grid, fn) -> "Field":
        return cls(grid, np.asarray(fn(*grid.coords), dtype=float))


def _vals(other, grid: Grid) -> np.ndarray:
    if isinstance(other, Field):
        if other.grid != grid:
            raise FieldError("fields live on different grids")
        return other.values
    return np.asarray(other, dtype=float)


def same_grid(*fields: Field) -> Grid:
    g = fields[0].grid
    for f in fields[1:]:
        if f.grid != g:
            raise FieldError("fields live on different grids")
    return g


def laplacian(u: Field) -> Field:
    """Second-order centered Laplacian, zero extension outside the box."""
    v = u.values
    h2 = u.grid.spacing**2
    out = -2.0 * u.grid.dim * v.copy()
    for ax in range(u.grid.dim):
        padded = np.pad(v, [(1, 1) if a == ax else (0, 0) for a in range(u.grid.dim)])
        sl_lo = tuple(slice(0, -2) if a == ax else slice(None) for a in range(u.grid.dim))
        sl_hi = tuple(slice(2, None) if a == ax else slice(None) for a in range(u.grid.dim))
        out += padded[sl_lo] + padded[sl_hi]
    return Field(u.grid, out / h2)


def gradient(u: Field) -> list[Field]:
    """Centered-difference gradient components, zero extension at the boundary."""
    v = u.values
    h = u.grid.spacing
    comps = []
    for ax in range(u.grid.dim):
        padded = np.pad(v, [(1, 1) if a == ax else (0, 0) for a in range(u.grid.dim)])
        sl_lo = tuple(slice(0, -2) if a == ax else slice(None) for a in range(u.grid.dim))
        sl_hi = tuple(slice(2, None) if a == ax else slice(None) for a in range(u.grid.dim))
        comps.append(Field(u.grid, (padded[sl_hi] - padded[sl_lo]) / (2.0 * h)))
    return comps


def integrate(u: Field) -> float:
    """Trapezoidal-rule integral over the box."""
    return float(np.sum(u.grid.trapezoid_weights * u.values))


def integrate_nodes(values: np.ndarray, grid: Grid) -> float:
    """Plain h^N node-weight quadrature (energy-consistent weights)."""
    return float(values.sum() * grid.spacing**grid.dim)


def dirichlet_form(u: Field, v: Field | None = None) -> float:
    """Edge-sum Dirichlet form  sum_edges h^{N-2} du dv, zero boundary extension.

    With v omitted this is the discrete version of int |Du|^2; it pairs
    exactly with the stencil Laplacian: dirichlet_form(u, v) ==
    integrate_nodes(-laplacian(u).values * v.values).
    """
    g = u.grid if v is None else same_grid(u, v)
    a = u.values
    b = a if v is None else v.values
    hfac = g.spacing ** (g.dim - 2)
    total = 0.0
    for ax in range(g.dim):
        da = np.diff(a, axis=ax)
        db = da if v is None else np.diff(b, axis=ax)
        total += np.sum(da * db)
        # half-edges to the zero extension
        first = tuple(0 if x == ax else slice(None) for x in range(g.dim))
        last = tuple(-1 if x == ax else slice(None) for x in range(g.dim))
        total += np.sum(a[first] * b[first]) + np.sum(a[last] * b[last])
    return float(hfac * total)


def h1_norm_sq(u: Field, a_inf: float) -> float:
    """int (|Du|^2 + a_inf u^2) with centered gradients and trapezoid quadrature."""
    if not a_inf > 0:
        raise ValueError(f"a_inf must be positive, got {a_inf}")
    total = a_inf * integrate(Field(u.grid, u.values**2))
    for comp in gradient(u):
        total += integrate(Field(u.grid, comp.values**2))
    return float(total)


def restrict_to_ball(u: Field, center, radius: float) -> Field:
    """Zero the field outside the closed ball B(center, radius)."""
    r = u.grid.radius_from(center)
    if not np.any(r <= radius):
        raise FieldError("ball does not intersect the box")
    return Field(u.grid, np.where(r <= radius, u.values, 0.0))
