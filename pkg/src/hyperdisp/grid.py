"""Structured cell-centred meshes, ghost layers and geometric sources."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import model
from .model import MX, MY, NVAR, QETA, QW, RHO, ModelClosure

LINE = "line"
PLANE = "plane"
RADIAL = "radial"

PERIODIC = "periodic"
TRANSMISSIVE = "transmissive"
REFLECTIVE = "reflective"
_BC_KINDS = (PERIODIC, TRANSMISSIVE, REFLECTIVE)

N_GHOST = 2


@dataclass(frozen=True)
class BoundaryCondition:
    left: str = TRANSMISSIVE
    right: str = TRANSMISSIVE
    bottom: str = TRANSMISSIVE
    top: str = TRANSMISSIVE

    def __post_init__(self):
        for side in ("left", "right", "bottom", "top"):
            if getattr(self, side) not in _BC_KINDS:
                raise ValueError(f"unknown boundary kind {getattr(self, side)!r} on {side}")
        if (self.left == PERIODIC) != (self.right == PERIODIC):
            raise ValueError("periodic x boundaries must come in pairs")
        if (self.bottom == PERIODIC) != (self.top == PERIODIC):
            raise ValueError("periodic y boundaries must come in pairs")

    @classmethod
    def uniform(cls, kind: str) -> "BoundaryCondition":
        return cls(kind, kind, kind, kind)


@dataclass
class Grid:
    """Cell-centred mesh plus its conserved field.

    ``U`` has shape (5, NY, NX) where ``NX = nx + 2*n_ghost`` and, for 2-D
    grids, ``NY = ny + 2*n_ghost``; 1-D grids keep a single row.
    Radial grids start at ``r = 0`` so the first centre sits at ``dr/2``.
    """

    geometry: str
    nx: int
    dx: float
    x0: float = 0.0
    ny: int = 1
    dy: float = 1.0
    y0: float = 0.0
    bc: BoundaryCondition = field(default_factory=BoundaryCondition)
    n_ghost: int = N_GHOST
    U: np.ndarray = None

    def __post_init__(self):
        if self.geometry not in (LINE, PLANE, RADIAL):
            raise ValueError(f"unknown geometry {self.geometry!r}")
        if self.nx < 1 or self.ny < 1:
            raise ValueError("cell counts must be >= 1")
        if not (self.dx > 0 and self.dy > 0):
            raise ValueError("spacings must be positive")
        if self.n_ghost < 2:
            raise ValueError("MUSCL needs at least two ghost layers")
        if self.geometry != PLANE and self.ny != 1:
            raise ValueError("1-D grids have ny == 1")
        if self.geometry == RADIAL and self.x0 != 0.0:
            raise ValueError("radial grids start at r = 0")
        if self.U is None:
            self.U = np.zeros(self.shape)
        elif self.U.shape != self.shape:
            raise ValueError(f"field shape {self.U.shape} != {self.shape}")

    # construction -----------------------------------------------------
    @classmethod
    def line(cls, x0: float, x1: float, nx: int, bc: BoundaryCondition | None = None) -> "Grid":
        return cls(LINE, nx=nx, dx=(x1 - x0) / nx, x0=x0, bc=bc or BoundaryCondition())

    @classmethod
    def plane(cls, x0: float, x1: float, nx: int, y0: float, y1: float, ny: int,
              bc: BoundaryCondition | None = None) -> "Grid":
        return cls(PLANE, nx=nx, dx=(x1 - x0) / nx, x0=x0, ny=ny, dy=(y1 - y0) / ny, y0=y0,
                   bc=bc or BoundaryCondition())

    @classmethod
    def radial(cls, r1: float, nr: int, outer: str = TRANSMISSIVE) -> "Grid":
        return cls(RADIAL, nx=nr, dx=r1 / nr, x0=0.0, bc=BoundaryCondition(REFLECTIVE, outer))

    # layout -------------------------------------------------------------
    @property
    def ndim(self) -> int:
        return 2 if self.geometry == PLANE else 1

    @property
    def shape(self) -> tuple:
        g = self.n_ghost
        ny_tot = self.ny + 2 * g if self.ndim == 2 else 1
        return (NVAR, ny_tot, self.nx + 2 * g)

    @property
    def interior_slices(self) -> tuple:
        g = self.n_ghost
        rows = slice(g, g + self.ny) if self.ndim == 2 else slice(0, 1)
        return (slice(None), rows, slice(g, g + self.nx))

    @property
    def interior(self) -> np.ndarray:
        """View of the interior cells, shape (5, ny, nx)."""
        return self.U[self.interior_slices]

    @interior.setter
    def interior(self, values):
        self.U[self.interior_slices] = values

    def copy(self) -> "Grid":
        return Grid(self.geometry, self.nx, self.dx, self.x0, self.ny, self.dy, self.y0,
                    self.bc, self.n_ghost, self.U.copy())

    # geometry -----------------------------------------------------------
    @property
    def x(self) -> np.ndarray:
        """Cell centres along x (radius for radial grids)."""
        # midpoint form keeps centres exactly antisymmetric about the domain centre
        mid = self.x0 + 0.5 * self.nx * self.dx
        return mid + (np.arange(self.nx) + 0.5 - 0.5 * self.nx) * self.dx

    @property
    def y(self) -> np.ndarray:
        if self.ndim == 1:
            return np.zeros(1)
        mid = self.y0 + 0.5 * self.ny * self.dy
        return mid + (np.arange(self.ny) + 0.5 - 0.5 * self.ny) * self.dy

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Centre coordinates broadcast to (ny, nx)."""
        X, Y = np.meshgrid(self.x, self.y)
        return X, Y

    def cell_volumes(self) -> np.ndarray:
        """Cell measures, shape (ny, nx): ``dx``, ``dx*dy`` or ``2 pi r dr``."""
        if self.geometry == PLANE:
            return np.full((self.ny, self.nx), self.dx * self.dy)
        if self.geometry == RADIAL:
            return (2.0 * math.pi * self.x * self.dx)[None, :]
        return np.full((1, self.nx), self.dx)

    # fields -------------------------------------------------------------
    def set_primitive(self, P: model.PrimitiveState):
        self.interior = model.prim_to_cons(P).reshape(NVAR, self.ny, self.nx)

    def primitive(self) -> model.PrimitiveState:
        return model.cons_to_prim(self.interior)

    def total_mass(self) -> float:
        return float(np.sum(self.interior[RHO] * self.cell_volumes()))


def apply_boundary_conditions(grid: Grid, bc: BoundaryCondition | None = None, U=None):
    """Fill ghost layers in place (x sides first, then y sides incl. corners)."""
    bc = bc or grid.bc
    U = grid.U if U is None else U
    g = grid.n_ghost
    nx = grid.nx
    _fill_axis(U, 2, g, nx, bc.left, bc.right, MX)
    if grid.ndim == 2:
        _fill_axis(U, 1, g, grid.ny, bc.bottom, bc.top, MY)
    return U


def _fill_axis(U, axis, g, n, lo_kind, hi_kind, normal):
    def sl(i):
        idx = [slice(None)] * 3
        idx[axis] = i
        return tuple(idx)

    if lo_kind == PERIODIC:
        U[sl(slice(0, g))] = U[sl(slice(n, n + g))]
        U[sl(slice(n + g, n + 2 * g))] = U[sl(slice(g, 2 * g))]
        return
    for m in range(g):
        # lower side: ghost g-1-m mirrors interior g+m
        if lo_kind == TRANSMISSIVE:
            U[sl(g - 1 - m)] = U[sl(g)]
        else:
            U[sl(g - 1 - m)] = U[sl(g + m)]
            U[normal][sl(g - 1 - m)[1:]] *= -1.0
        # upper side: ghost n+g+m mirrors interior n+g-1-m
        if hi_kind == TRANSMISSIVE:
            U[sl(n + g + m)] = U[sl(n + g - 1)]
        else:
            U[sl(n + g + m)] = U[sl(n + g - 1 - m)]
            U[normal][sl(n + g + m)[1:]] *= -1.0


def polar_geometric_source(closure: ModelClosure, U, r):
    """Axisymmetric source ``-(hu, hu^2, 0, hu eta, hu w) / r`` for the radial system.

    ``closure`` is accepted for interface symmetry; the term is purely
    kinematic.
    """
    U = np.asarray(U, dtype=float)
    r = np.asarray(r, dtype=float)
    rho = model._check_rho(U[RHO])
    m = U[MX]
    S = np.zeros_like(U)
    S[RHO] = -m / r
    S[MX] = -m * (m / rho) / r
    S[QETA] = -m * (U[QETA] / rho) / r
    S[QW] = -m * (U[QW] / rho) / r
    return S


def integrate_total_energy(grid: Grid, closure: ModelClosure) -> float:
    E = model.total_energy(closure, grid.primitive())
    return float(np.sum(E * grid.cell_volumes()))
