"""Time stepping: first-order splitting and the ARS(2,2,2) IMEX scheme."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, model
from .errors import ConfigError, NonPositiveDepth, ZeroWaveSpeed
from .grid import RADIAL, Grid, apply_boundary_conditions, integrate_total_energy, polar_geometric_source
from .model import IKW, MX, MY, QETA, QW, RHO, RHO_FLOOR, SGN, ModelClosure
from .riemann import solver_code

SPLITTING1 = "splitting1"
IMEX_ARS222 = "imex_ars222"

ARS_ALPHA = 1.0 - 1.0 / math.sqrt(2.0)
ARS_DELTA = ARS_ALPHA - 1.0


@dataclass(frozen=True)
class SchemeConfig:
    integrator: str = IMEX_ARS222
    solver: str = "hllc"
    cfl: float = 0.9
    muscl: bool | None = None
    allow_cfl_above_one: bool = False

    def __post_init__(self):
        if self.integrator not in (SPLITTING1, IMEX_ARS222):
            raise ConfigError(f"unknown integrator {self.integrator!r}")
        if self.solver not in ("rusanov", "hllc"):
            raise ConfigError(f"unknown Riemann solver {self.solver!r}")
        if not self.cfl > 0:
            raise ConfigError("cfl must be positive")
        if self.cfl > 1 and not self.allow_cfl_above_one:
            raise ConfigError("cfl above 1 requires allow_cfl_above_one")

    @property
    def use_muscl(self) -> bool:
        if self.muscl is None:
            return self.integrator == IMEX_ARS222
        return bool(self.muscl)


@dataclass
class StepReport:
    dt: float
    max_wave_speed: float
    mass: float
    energy: float | None = None


# ---------------------------------------------------------------------------
# time step

def max_wave_rate(grid: Grid, closure: ModelClosure, U=None) -> tuple[float, float]:
    """Return ``max((|u|+c)/dx + (|v|+c)/dy)`` and the largest ``|u|+c``."""
    U = grid.U if U is None else U
    model._check_rho(U[grid.interior_slices][RHO])
    rate, speed = kernels.max_wave_rate(U, closure.params(), grid.n_ghost, grid.ndim == 2,
                                        grid.dx, grid.dy)
    return float(rate), float(speed)


def cfl_dt(grid: Grid, closure: ModelClosure, cfl: float) -> float:
    rate, _ = max_wave_rate(grid, closure)
    if not rate > 0.0:
        raise ZeroWaveSpeed("maximal characteristic speed is zero")
    return cfl / rate


# ---------------------------------------------------------------------------
# pointwise relaxation solvers

def ode_exact_relax(h, eta0, w0, lam, dt):
    """Exact solution of ``eta' = w, w' = -(lam/h)(eta/h - 1)`` over ``dt``."""
    h, eta0, w0 = (np.asarray(a, dtype=float) for a in (h, eta0, w0))
    if lam == 0.0:
        return eta0 + w0 * dt, w0 * 1.0
    sq = math.sqrt(lam)
    theta = sq * dt / h
    c, s = np.cos(theta), np.sin(theta)
    eta = h + (eta0 - h) * c + (h * w0 / sq) * s
    w = -sq * (eta0 / h - 1.0) * s + w0 * c
    return eta, w


def implicit_relax_solve(h0, u0, eta0, w0, alpha_dt, lam):
    """Solve ``U = U0 + alpha_dt S(U)`` for the SGN relaxation source.

    ``u0`` is carried unchanged and accepted only to mirror the state
    layout. The closed form is written as a correction to ``h0`` so the
    equilibrium ``eta0 = h0, w0 = 0`` is reproduced exactly.
    """
    h0, eta0, w0 = (np.asarray(a, dtype=float) for a in (h0, eta0, w0))
    k = np.asarray(alpha_dt, dtype=float)
    h2 = h0 * h0
    den = h2 + lam * k * k
    eta = h0 + h2 * (eta0 - h0 + k * w0) / den
    w = (h2 * w0 + lam * k * (h0 - eta0)) / den
    return eta, w


def _ikw_relax_rhs(closure, rho, eta):
    f = model.penalty_f(closure, eta)
    fp = model.penalty_f_prime(closure, eta)
    return -closure.a * closure.lam * fp / (closure.beta * rho) * (f / rho - 1.0)


def _ikw_implicit_solve(closure, rho, eta0, w0, k, tol=1e-14, maxiter=60):
    # Newton on eta for  eta - eta0 - k w0 - k^2 phi(eta) = 0,  phi = dw/dt
    eta = eta0 + k * w0
    coef = closure.a * closure.lam / (closure.beta * rho)
    for _ in range(maxiter):
        f = model.penalty_f(closure, eta)
        fp = model.penalty_f_prime(closure, eta)
        fpp = model.penalty_f_second(closure, eta)
        phi = -coef * fp * (f / rho - 1.0)
        dphi = -coef * (fpp * (f / rho - 1.0) + fp * fp / rho)
        res = eta - eta0 - k * w0 - k * k * phi
        step = res / (1.0 - k * k * dphi)
        eta = eta - step
        if np.all(np.abs(step) <= tol * np.abs(eta)):
            break
    w = w0 + k * _ikw_relax_rhs(closure, rho, eta)
    return eta, w


def _ikw_ode(closure, rho, eta, w, dt):
    # classical RK4 sub-cycling resolving the local oscillator period
    fp = model.penalty_f_prime(closure, eta)
    omega = np.sqrt(closure.a * closure.lam * fp * fp / (closure.beta * rho * rho))
    nsub = max(1, int(math.ceil(float(np.max(omega)) * dt / 0.05)))
    h = dt / nsub
    for _ in range(nsub):
        k1e, k1w = w, _ikw_relax_rhs(closure, rho, eta)
        k2e, k2w = w + 0.5 * h * k1w, _ikw_relax_rhs(closure, rho, eta + 0.5 * h * k1e)
        k3e, k3w = w + 0.5 * h * k2w, _ikw_relax_rhs(closure, rho, eta + 0.5 * h * k2e)
        k4e, k4w = w + h * k3w, _ikw_relax_rhs(closure, rho, eta + h * k3e)
        eta = eta + h / 6.0 * (k1e + 2 * k2e + 2 * k3e + k4e)
        w = w + h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w)
    return eta, w


def relax_implicit(closure: ModelClosure, U0, k):
    """Conserved-variable form of the implicit source stage."""
    rho = model._check_rho(U0[RHO])
    eta0 = U0[QETA] / rho
    w0 = U0[QW] / rho
    if closure.kind == SGN:
        eta, w = implicit_relax_solve(rho, U0[MX] / rho, eta0, w0, k, closure.lam)
    else:
        eta, w = _ikw_implicit_solve(closure, rho, eta0, w0, k)
    U = U0.copy()
    U[QETA] = rho * eta
    U[QW] = rho * w
    return U


def relax_ode(closure: ModelClosure, U0, dt):
    rho = model._check_rho(U0[RHO])
    eta0 = U0[QETA] / rho
    w0 = U0[QW] / rho
    if closure.kind == SGN:
        eta, w = ode_exact_relax(rho, eta0, w0, closure.lam, dt)
    else:
        eta, w = _ikw_ode(closure, rho, eta0, w0, dt)
    U = U0.copy()
    U[QETA] = rho * eta
    U[QW] = rho * w
    return U


# ---------------------------------------------------------------------------
# reconstruction and the hyperbolic operator

def muscl_reconstruct(U_prev, U_cell, U_next):
    """Unlimited central slopes; returns the (left, right) face values of the cell."""
    U_prev, U_cell, U_next = (np.asarray(a, dtype=float) for a in (U_prev, U_cell, U_next))
    delta = 0.5 * (U_next - U_prev)
    return U_cell - 0.5 * delta, U_cell + 0.5 * delta


def hyperbolic_operator(grid: Grid, closure: ModelClosure, scheme: SchemeConfig, U=None,
                        geometric: bool = True) -> np.ndarray:
    """``-(flux divergence)`` on interior cells, plus the radial source when asked.

    Ghost cells of ``U`` (default ``grid.U``) are refreshed first.
    """
    U = grid.U if U is None else U
    apply_boundary_conditions(grid, U=U)
    cp = closure.params()
    solver = solver_code(scheme.solver)
    muscl = scheme.use_muscl
    g = grid.n_ghost
    NY, NX = U.shape[1], U.shape[2]
    rows = grid.interior_slices[1]
    cols = grid.interior_slices[2]

    Fx = np.empty((5, NY, grid.nx + 1))
    bad = kernels.sweep_x(U, cp, solver, muscl, g, RHO_FLOOR, Fx)
    if grid.ndim == 2:
        Gy = np.empty((5, grid.ny + 1, NX))
        bad += kernels.sweep_y(U, cp, solver, muscl, g, RHO_FLOOR, Gy)
    else:
        Gy = np.empty((5, 0, NX))
    if bad:
        raise NonPositiveDepth(f"{bad} reconstructed face states below the depth floor")
    L = np.empty((5, grid.ny, grid.nx))
    kernels.flux_divergence(Fx, Gy, grid.dx, grid.dy, g, L)
    if geometric and grid.geometry == RADIAL:
        L += polar_geometric_source(closure, U[:, rows, cols], grid.x[None, :])
    return L


def _guard(U):
    if not np.all(U[RHO] > RHO_FLOOR):
        raise NonPositiveDepth(f"depth fell below floor: min={float(np.min(U[RHO]))!r}")
    if not np.all(np.isfinite(U)):
        raise NonPositiveDepth("non-finite state encountered")


def _report(grid, closure, dt, with_energy):
    _, speed = max_wave_rate(grid, closure)
    energy = integrate_total_energy(grid, closure) if with_energy else None
    return StepReport(dt=dt, max_wave_speed=speed, mass=grid.total_mass(), energy=energy)


# ---------------------------------------------------------------------------
# integrators

def step_splitting1(grid: Grid, closure: ModelClosure, scheme: SchemeConfig, dt: float | None = None,
                    with_energy: bool = True) -> StepReport:
    """Hyperbolic update from U^n, oscillator solve from U^n, then an Euler source step
    evaluated at the oscillator result (this ordering is deliberate)."""
    apply_boundary_conditions(grid)
    if dt is None:
        dt = cfl_dt(grid, closure, scheme.cfl)
    Un = grid.interior.copy()
    U1 = Un + dt * hyperbolic_operator(grid, closure, scheme, geometric=False)
    U2 = relax_ode(closure, Un, dt)
    S = model.relaxation_source(closure, U2)
    if grid.geometry == RADIAL:
        S += polar_geometric_source(closure, U2, grid.x[None, :])
    Unew = U1 + dt * S
    _guard(Unew)
    grid.interior = Unew
    apply_boundary_conditions(grid)
    return _report(grid, closure, dt, with_energy)


def step_imex_ars222(grid: Grid, closure: ModelClosure, scheme: SchemeConfig, dt: float | None = None,
                     with_energy: bool = True) -> StepReport:
    """Two-stage ARS(2,2,2): explicit fluxes (and radial terms), implicit relaxation."""
    apply_boundary_conditions(grid)
    if dt is None:
        dt = cfl_dt(grid, closure, scheme.cfl)
    a, d = ARS_ALPHA, ARS_DELTA
    k = a * dt
    Un = grid.interior.copy()

    L0 = hyperbolic_operator(grid, closure, scheme)
    U1 = relax_implicit(closure, Un + k * L0, k)
    _guard(U1)

    work = grid.U.copy()
    work[grid.interior_slices] = U1
    L1 = hyperbolic_operator(grid, closure, scheme, U=work)
    S1 = model.relaxation_source(closure, U1)
    U0 = Un + dt * (d * L0 + (1.0 - d) * L1) + (1.0 - a) * dt * S1
    Unew = relax_implicit(closure, U0, k)
    _guard(Unew)
    grid.interior = Unew
    apply_boundary_conditions(grid)
    return _report(grid, closure, dt, with_energy)


def step(grid: Grid, closure: ModelClosure, scheme: SchemeConfig, dt: float | None = None,
         with_energy: bool = True) -> StepReport:
    if scheme.integrator == SPLITTING1:
        return step_splitting1(grid, closure, scheme, dt, with_energy)
    return step_imex_ars222(grid, closure, scheme, dt, with_energy)


def advance(grid: Grid, closure: ModelClosure, scheme: SchemeConfig, t_end: float, t: float = 0.0,
            callback=None, with_energy: bool = False) -> tuple[float, int]:
    """Step until ``t_end`` (last step clamped). ``callback(step_index, t, report)``
    may return True to stop early. Returns the final time and step count."""
    nsteps = 0
    while t < t_end:
        dt = cfl_dt(grid, closure, scheme.cfl)
        if t + dt >= t_end:
            dt = t_end - t
        report = step(grid, closure, scheme, dt, with_energy)
        nsteps += 1
        t = t_end if dt == t_end - t else t + dt
        if callback is not None and callback(nsteps, t, report):
            break
    return t, nsteps
