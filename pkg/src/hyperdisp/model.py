"""Model closures for the relaxed (hyperbolic) SGN and IKW systems.

Conserved vectors are arrays with a leading axis of length 5 laid out as
``(rho, rho*u, rho*v, rho*eta, rho*w)``; for the shallow-water closure
``rho`` is the water depth ``h``. One-dimensional runs keep the ``v``
slot at zero. Every function accepts scalars or arrays and broadcasts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NonPositiveBubbleVolume, NonPositiveDepth

RHO_FLOOR = 1e-12

# conserved component indices
RHO, MX, MY, QETA, QW = range(5)
NVAR = 5

SGN = "sgn"
IKW = "ikw"

# closure kind codes used by the compiled kernels
KIND_CODES = {SGN: 0, IKW: 1}


class PrimitiveState(NamedTuple):
    rho: np.ndarray | float
    u: np.ndarray | float
    v: np.ndarray | float
    eta: np.ndarray | float
    w: np.ndarray | float


@dataclass(frozen=True)
class ModelClosure:
    """Constants of one closure.

    Build with :meth:`sgn` or :meth:`ikw`. ``a`` and ``beta`` are derived
    from the kind and never stored independently.
    """

    kind: str
    lam: float
    g: float = 9.81
    p0: float = 1.0e5
    R0: float = 1.0e-3
    gamma: float = 1.4
    n: float = 1.0e8
    rho10: float = 1000.0
    Y1: float = 0.999

    def __post_init__(self):
        if self.kind not in (SGN, IKW):
            raise ValueError(f"unknown closure kind {self.kind!r}")
        if not (self.lam >= 0.0 and math.isfinite(self.lam)):
            raise ValueError("lambda must be finite and >= 0")
        if self.kind == SGN:
            if not self.g > 0:
                raise ValueError("g must be positive")
        else:
            if not self.gamma > 1:
                raise ValueError("gamma must exceed 1")
            for name in ("p0", "R0", "n", "rho10"):
                if not getattr(self, name) > 0:
                    raise ValueError(f"{name} must be positive")
            if not 0.0 < self.Y1 < 1.0:
                raise ValueError("Y1 must lie in (0, 1)")

    @classmethod
    def sgn(cls, lam: float, g: float = 9.81) -> "ModelClosure":
        return cls(kind=SGN, lam=float(lam), g=float(g))

    @classmethod
    def ikw(cls, lam: float, p0: float, R0: float, gamma: float, n: float,
            rho10: float, Y1: float) -> "ModelClosure":
        return cls(kind=IKW, lam=float(lam), p0=float(p0), R0=float(R0),
                   gamma=float(gamma), n=float(n), rho10=float(rho10), Y1=float(Y1))

    @property
    def a(self) -> float:
        return 1.0 / 3.0 if self.kind == SGN else 1.0

    @property
    def beta(self) -> float:
        return 1.0 / 3.0 if self.kind == SGN else 4.0 * math.pi * self.n * self.rho10

    def reference_density(self) -> float:
        """Density at which the bubble radius equals ``R0`` (IKW only)."""
        self._require_ikw()
        v0 = 4.0 / 3.0 * math.pi * self.R0**3 * self.n
        return 1.0 / (self.Y1 / self.rho10 + v0)

    def params(self) -> np.ndarray:
        """Flat float vector consumed by the compiled kernels."""
        return np.array([KIND_CODES[self.kind], self.g, self.lam, self.a, self.beta,
                         self.p0, self.R0, self.gamma, self.n, self.rho10, self.Y1],
                        dtype=np.float64)

    def with_lambda(self, lam: float) -> "ModelClosure":
        return ModelClosure(**{**self.__dict__, "lam": float(lam)})

    def _require_ikw(self):
        if self.kind != IKW:
            raise ValueError("operation defined for the IKW closure only")


def _check_rho(rho):
    rho = np.asarray(rho, dtype=float)
    if np.any(~(rho > RHO_FLOOR)):
        raise NonPositiveDepth(f"density/depth below floor {RHO_FLOOR}: min={np.min(rho)!r}")
    return rho


def _gas_specific_volume(closure: ModelClosure, rho):
    vol = 1.0 / np.asarray(rho, dtype=float) - closure.Y1 / closure.rho10
    if np.any(~(vol > 0.0)):
        raise NonPositiveBubbleVolume("1/rho - Y1/rho10 must be positive")
    return vol


def bubble_radius(closure: ModelClosure, rho):
    """Bubble radius from ``4/3 pi R^3 n = 1/rho - Y1/rho10``."""
    closure._require_ikw()
    vol = _gas_specific_volume(closure, rho)
    return np.cbrt(3.0 * vol / (4.0 * math.pi * closure.n))


def q_of_rho(closure: ModelClosure, rho):
    """Equilibrium value of the relaxation variable, ``eta -> Q(rho)``."""
    if closure.kind == SGN:
        return np.asarray(rho, dtype=float) * 1.0
    return 0.4 * bubble_radius(closure, rho) ** 2.5


def penalty_f(closure: ModelClosure, eta):
    """``f = Q^{-1}``: the density that ``eta`` relaxes toward."""
    eta = np.asarray(eta, dtype=float)
    if closure.kind == SGN:
        return eta * 1.0
    if np.any(~(eta > 0.0)):
        raise DomainError("IKW penalty function needs eta > 0")
    s = 2.5 * eta
    return 1.0 / (closure.Y1 / closure.rho10 + (4.0 * math.pi * closure.n / 3.0) * s**1.2)


def penalty_f_prime(closure: ModelClosure, eta):
    eta = np.asarray(eta, dtype=float)
    if closure.kind == SGN:
        return np.ones_like(eta)
    if np.any(~(eta > 0.0)):
        raise DomainError("IKW penalty function needs eta > 0")
    s = 2.5 * eta
    d = closure.Y1 / closure.rho10 + (4.0 * math.pi * closure.n / 3.0) * s**1.2
    dd = 4.0 * math.pi * closure.n * s**0.2
    return -dd / d**2


def penalty_f_second(closure: ModelClosure, eta):
    eta = np.asarray(eta, dtype=float)
    if closure.kind == SGN:
        return np.zeros_like(eta)
    s = 2.5 * eta
    d = closure.Y1 / closure.rho10 + (4.0 * math.pi * closure.n / 3.0) * s**1.2
    dd = 4.0 * math.pi * closure.n * s**0.2
    ddd = 2.0 * math.pi * closure.n * s**-0.8
    return -ddd / d**2 + 2.0 * dd**2 / d**3


def specific_energy(closure: ModelClosure, rho):
    rho = np.asarray(rho, dtype=float)
    if closure.kind == SGN:
        return 0.5 * closure.g * rho
    vol = _gas_specific_volume(closure, rho)
    R = np.cbrt(3.0 * vol / (4.0 * math.pi * closure.n))
    return vol * closure.p0 * (closure.R0 / R) ** (3.0 * closure.gamma) / (closure.gamma - 1.0)


def pressure(closure: ModelClosure, rho, eta):
    """Relaxed pressure ``rho^2 eps'(rho) - a lam f(eta) (f(eta)/rho - 1)``."""
    rho = np.asarray(rho, dtype=float)
    eta = np.asarray(eta, dtype=float)
    lam = closure.lam
    if closure.kind == SGN:
        return 0.5 * closure.g * rho * rho - lam * eta / 3.0 * (eta / rho - 1.0)
    R = bubble_radius(closure, rho)
    f = penalty_f(closure, eta)
    return closure.p0 * (closure.R0 / R) ** (3.0 * closure.gamma) - lam * f * (f / rho - 1.0)


def sound_speed_sq(closure: ModelClosure, rho, eta):
    """``dp/drho`` at fixed ``eta``; positive whenever ``lam > 0``."""
    rho = np.asarray(rho, dtype=float)
    eta = np.asarray(eta, dtype=float)
    lam = closure.lam
    if closure.kind == SGN:
        return closure.g * rho + lam / 3.0 * eta * eta / (rho * rho)
    R = bubble_radius(closure, rho)
    f = penalty_f(closure, eta)
    gas = (3.0 * closure.gamma * closure.p0 / (4.0 * math.pi * closure.n * rho * rho * R**3)
           * (closure.R0 / R) ** (3.0 * closure.gamma))
    return gas + lam * f * f / (rho * rho)


def equilibrium_sound_speed_sq(closure: ModelClosure, rho):
    """Slope of ``p(rho, Q(rho))``: the long-wave speed squared."""
    rho = np.asarray(rho, dtype=float)
    if closure.kind == SGN:
        return closure.g * rho
    return sound_speed_sq(closure.with_lambda(0.0), rho, q_of_rho(closure, rho))


def _axis_index(axis) -> int:
    if axis in ("x", "X", 0):
        return 0
    if axis in ("y", "Y", 1):
        return 1
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


def physical_flux(closure: ModelClosure, U, axis="x"):
    """Flux ``F`` (axis x) or ``G`` (axis y) of a conserved state."""
    U = np.asarray(U, dtype=float)
    rho = _check_rho(U[RHO])
    m = U[MX] if _axis_index(axis) == 0 else U[MY]
    eta = U[QETA] / rho
    p = pressure(closure, rho, eta)
    F = np.stack([m, m * U[MX] / rho, m * U[MY] / rho, m * eta, m * U[QW] / rho])
    F[1 + _axis_index(axis)] += p
    return F


def relaxation_source(closure: ModelClosure, U):
    """Source vector ``(0, 0, 0, rho w, -a lam f'(eta)/beta (f(eta)/rho - 1))``."""
    U = np.asarray(U, dtype=float)
    rho = _check_rho(U[RHO])
    eta = U[QETA] / rho
    S = np.zeros_like(U)
    S[QETA] = U[QW]
    if closure.kind == SGN:
        S[QW] = -closure.lam * (eta / rho - 1.0)
    else:
        f = penalty_f(closure, eta)
        fp = penalty_f_prime(closure, eta)
        S[QW] = -closure.a * closure.lam * fp / closure.beta * (f / rho - 1.0)
    return S


def total_energy(closure: ModelClosure, P: PrimitiveState):
    """Energy density of the relaxed system, with ``w`` standing for ``deta/dt``."""
    rho = _check_rho(P.rho)
    u, v, eta, w = (np.asarray(c, dtype=float) for c in (P.u, P.v, P.eta, P.w))
    f = penalty_f(closure, eta)
    return (0.5 * rho * (u * u + v * v)
            + 0.5 * closure.beta * rho * w * w
            + rho * specific_energy(closure, rho)
            + 0.5 * closure.a * closure.lam * rho * (f / rho - 1.0) ** 2)


def cons_to_prim(U) -> PrimitiveState:
    U = np.asarray(U, dtype=float)
    rho = _check_rho(U[RHO])
    return PrimitiveState(rho * 1.0, U[MX] / rho, U[MY] / rho, U[QETA] / rho, U[QW] / rho)


def prim_to_cons(P: PrimitiveState) -> np.ndarray:
    rho, u, v, eta, w = np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in P))
    return np.stack([rho, rho * u, rho * v, rho * eta, rho * w])
