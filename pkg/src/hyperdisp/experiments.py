"""Reproduction experiments shared by ``scripts/`` and the acceptance tests.

Each function runs a desk-scale version of one study and returns plain
numbers; tolerances are left to the caller.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import model
from .grid import BoundaryCondition, Grid, integrate_total_energy
from .integrators import IMEX_ARS222, SPLITTING1, SchemeConfig, advance, implicit_relax_solve, ode_exact_relax, step
from .model import ModelClosure, PrimitiveState
from .scenarios import IKW_DEFAULTS, get_scenario
from .validation import (
    SolitonParams,
    dambreak_asymptotics,
    dambreak_metrics,
    eigenstructure_check,
    random_admissible_states,
    rotate90,
    sgn_soliton_state,
)

SOLITON = SolitonParams(h0=1.0, a=0.2, g=9.81, x_center=50.0)
SOLITON_LENGTH = 100.0


def soliton_period() -> float:
    return SOLITON_LENGTH / SOLITON.speed


# ---------------------------------------------------------------------------
# soliton family

@dataclass
class SolitonRun:
    x: np.ndarray
    h: np.ndarray
    h_exact: np.ndarray
    runtime_s: float
    steps: int
    mass: list = field(default_factory=list)
    energy: list = field(default_factory=list)
    max_eta_minus_h: float = 0.0

    @property
    def amplitude(self) -> float:
        return float(np.max(self.h) - SOLITON.h0)

    @property
    def linf(self) -> float:
        return float(np.max(np.abs(self.h - self.h_exact)))

    @property
    def l2(self) -> float:
        dx = SOLITON_LENGTH / self.h.size
        return float(math.sqrt(np.sum((self.h - self.h_exact) ** 2) * dx))


def soliton_run(nx: int, lam: float = 1200.0, integrator: str = IMEX_ARS222, solver: str = "rusanov",
                t_end: float | None = None, cfl: float = 0.9, track: bool = False) -> SolitonRun:
    """Periodic solitary-wave run on the 100 m channel.

    With ``track`` the mass, energy and ``max|eta - h|`` are recorded after
    every step (slower).
    """
    closure = ModelClosure.sgn(lam, SOLITON.g)
    grid = Grid.line(0.0, SOLITON_LENGTH, nx, BoundaryCondition.uniform("periodic"))
    grid.set_primitive(sgn_soliton_state(SOLITON, grid.x, 0.0, period=SOLITON_LENGTH))
    t_end = soliton_period() if t_end is None else t_end
    res = SolitonRun(grid.x, None, None, 0.0, 0)
    if track:
        res.mass.append(grid.total_mass())
        res.energy.append(integrate_total_energy(grid, closure))

    def cb(n, t, report):
        res.mass.append(report.mass)
        res.energy.append(report.energy)
        P = grid.primitive()
        res.max_eta_minus_h = max(res.max_eta_minus_h, float(np.max(np.abs(P.eta - P.rho))))

    t0 = time.perf_counter()
    _, res.steps = advance(grid, closure, SchemeConfig(integrator, solver, cfl), t_end,
                           callback=cb if track else None, with_energy=track)
    res.runtime_s = time.perf_counter() - t0
    res.h = grid.interior[model.RHO, 0].copy()
    res.h_exact = sgn_soliton_state(SOLITON, grid.x, t_end, period=SOLITON_LENGTH).rho
    return res


def _restrict(fine: np.ndarray, factor: int) -> np.ndarray:
    return fine.reshape(-1, factor).mean(axis=1)


@dataclass
class ConvergenceStudy:
    meshes: tuple
    self_differences: tuple
    self_order: float
    exact_errors: tuple
    exact_orders: tuple


def convergence_study(integrator: str, solver: str = "hllc", meshes=(500, 1000, 2000),
                      t_end: float = 5.0, lam: float = 1200.0) -> ConvergenceStudy:
    """Three-mesh refinement: ``log2(|h_N - h_2N| / |h_2N - h_4N|)`` with cell-average
    restriction and volume-weighted L2 norms. Errors against the SGN solitary
    wave are reported alongside."""
    runs = [soliton_run(n, lam, integrator, solver, t_end) for n in meshes]
    diffs = []
    for coarse, fine in zip(runs[:-1], runs[1:]):
        f = fine.h.size // coarse.h.size
        dx = SOLITON_LENGTH / coarse.h.size
        diffs.append(math.sqrt(np.sum((coarse.h - _restrict(fine.h, f)) ** 2) * dx))
    exact = [math.sqrt(np.sum((r.h - r.h_exact) ** 2) * SOLITON_LENGTH / r.h.size) for r in runs]
    exact_orders = tuple(math.log2(a / b) for a, b in zip(exact[:-1], exact[1:]))
    return ConvergenceStudy(tuple(meshes), tuple(diffs), math.log2(diffs[0] / diffs[1]),
                            tuple(exact), exact_orders)


def lambda_sweep(lams=(300.0, 1200.0, 4800.0), nx: int = 1000) -> list[SolitonRun]:
    """One tracked soliton period per penalty value; read ``max_eta_minus_h``
    and the shape error from the returned runs."""
    return [soliton_run(nx, lam, track=True) for lam in lams]


# ---------------------------------------------------------------------------
# dam breaks

@dataclass
class DamBreakResult:
    h_plateau: float
    u_plateau: float
    lead_amp: float
    h_star: float
    u_star: float
    a_plus: float
    runtime_s: float
    steps: int
    x: np.ndarray = None
    h: np.ndarray = None
    u: np.ndarray = None


def dam_break_1d(nx: int = 8000, t_end: float = 47.434, integrator: str = IMEX_ARS222,
                 solver: str = "hllc", cfl: float = 0.95) -> DamBreakResult:
    spec = get_scenario("dam1d").with_overrides({
        "mesh.nx": nx, "run.t_end": t_end, "scheme.integrator": integrator,
        "scheme.solver": solver, "scheme.cfl": cfl})
    grid, closure = spec.initial_grid()
    t0 = time.perf_counter()
    _, steps = advance(grid, closure, spec.scheme, spec.t_end)
    runtime = time.perf_counter() - t0
    P = grid.primitive()
    h_L, h_R = spec.ic["h_L"], spec.ic["h_R"]
    m = dambreak_metrics(grid.x, P.rho[0], P.u[0], h_L, h_R, closure.g)
    ref = dambreak_asymptotics(h_L, h_R, closure.g)
    return DamBreakResult(m.h_plateau, m.u_plateau, m.lead_amp, ref.h_star, ref.u_star, ref.a_plus,
                          runtime, steps, grid.x, P.rho[0], P.u[0])


def _crest(x, h):
    """Sub-cell crest position by a parabola through the three highest samples."""
    i = int(np.argmax(h))
    if 0 < i < h.size - 1:
        a, b, c = h[i - 1], h[i], h[i + 1]
        den = a - 2 * b + c
        off = 0.5 * (a - c) / den if den != 0 else 0.0
        peak = b - (a - c) ** 2 / (8.0 * den) if den != 0 else b
        return float(x[i] + off * (x[1] - x[0])), float(peak)
    return float(x[i]), float(h[i])


@dataclass
class CollisionResult:
    amp_right: float
    amp_left: float
    amp_single: float
    lag_right: float
    lag_left: float
    width: float
    runtime_s: float


def collision(nx: int = 4000, t_end: float = 200.0) -> CollisionResult:
    """Head-on collision vs a single non-interacting wave on the same mesh.

    Lags are positive when the interacting wave trails the free one.
    """
    spec = get_scenario("collision").with_overrides({"mesh.nx": nx, "run.t_end": t_end})
    ic = spec.ic
    t0 = time.perf_counter()
    grid, closure = spec.initial_grid()
    advance(grid, closure, spec.scheme, t_end)
    h = grid.interior[model.RHO, 0]
    x = grid.x
    mid = 0.5 * (ic["x_left"] + ic["x_right"])

    single = spec.with_recipe("soliton", h0=ic["h0"], a=ic["a"], x_center=ic["x_left"], direction=1.0)
    g1, _ = single.initial_grid()
    advance(g1, closure, single.scheme, t_end)
    h1 = g1.interior[model.RHO, 0]
    runtime = time.perf_counter() - t0

    right = x > mid
    xr, ar = _crest(x[right], h[right])
    xl, al = _crest(x[~right], h[~right])
    xs, as_ = _crest(x, h1)
    # the free left-going wave is the mirror image of the free right-going one
    xs_left = 2.0 * mid - xs
    p = SolitonParams(ic["h0"], ic["a"], closure.g)
    return CollisionResult(ar - ic["h0"], al - ic["h0"], as_ - ic["h0"], xs - xr, xl - xs_left,
                           1.0 / p.kappa, runtime)


# ---------------------------------------------------------------------------
# two-dimensional checks

@dataclass
class PolarComparison:
    linf: float
    relative: float
    n2d: int
    nr: int
    runtime_2d_s: float
    runtime_radial_s: float
    symmetry_error: float = float("nan")
    symmetry_checks: int = 0
    x: np.ndarray = None
    section: np.ndarray = None
    radial: np.ndarray = None


def _symmetry_deviation(U) -> float:
    scale = np.max(np.abs(U), axis=(1, 2), keepdims=True)
    scale[scale == 0] = 1.0
    return float(np.max(np.abs(rotate90(U) - U) / scale))


def circle_vs_radial(n2d: int = 800, t_end: float = 40.0, symmetry_every: int = 100) -> PolarComparison:
    """y = 0 section of the 2-D circular dam break against the radial solver
    on the matched spacing. With an even mesh the section is the mean of the
    two rows straddling y = 0, compared against the radial profile at the
    same off-axis distance.

    The 2-D field is also checked for 90-degree rotation symmetry every
    ``symmetry_every`` steps and at the end (0 disables the periodic check).
    """
    base = get_scenario("circle2d").with_overrides({"mesh.nx": n2d, "mesh.ny": n2d, "run.t_end": t_end})
    radial = get_scenario("radial1d").with_overrides({"mesh.nx": n2d // 2, "run.t_end": t_end,
                                                      "domain.x1": base.x1})
    g2, closure = base.initial_grid()
    sym = [0.0, 0]

    def cb(nstep, t, report):
        if symmetry_every and nstep % symmetry_every == 0:
            sym[0] = max(sym[0], _symmetry_deviation(g2.interior))
            sym[1] += 1

    t0 = time.perf_counter()
    advance(g2, closure, base.scheme, t_end, callback=cb)
    rt2 = time.perf_counter() - t0
    sym[0] = max(sym[0], _symmetry_deviation(g2.interior))
    gr, rclosure = radial.initial_grid()
    t0 = time.perf_counter()
    advance(gr, rclosure, radial.scheme, t_end)
    rtr = time.perf_counter() - t0

    H = g2.interior[model.RHO]
    j = n2d // 2
    rows = (H[j - 1] + H[j]) * 0.5 if n2d % 2 == 0 else H[j]
    y_cut = 0.5 * g2.dy if n2d % 2 == 0 else 0.0
    r = np.sqrt(g2.x**2 + y_cut**2)
    href = np.interp(r, gr.x, gr.interior[model.RHO, 0])
    linf = float(np.max(np.abs(rows - href)))
    jump = base.ic["h_in"] - base.ic["h_out"]
    return PolarComparison(linf, linf / jump, n2d, n2d // 2, rt2, rtr, sym[0], sym[1] + 1,
                           g2.x, rows, href)


def rotation_symmetry(n: int = 200, t_end: float = 40.0, every: int = 100,
                      integrator: str = IMEX_ARS222) -> tuple[float, int]:
    """Largest relative deviation from 90-degree rotation symmetry, checked every
    ``every`` steps and at the end. Returns (deviation, number of checks)."""
    spec = get_scenario("circle2d").with_overrides({"mesh.nx": n, "mesh.ny": n,
                                                    "scheme.integrator": integrator})
    grid, closure = spec.initial_grid()
    worst, checks = 0.0, 0

    def cb(nstep, t, report):
        nonlocal worst, checks
        if nstep % every == 0:
            worst = max(worst, _symmetry_deviation(grid.interior))
            checks += 1

    advance(grid, closure, spec.scheme, t_end, callback=cb)
    worst = max(worst, _symmetry_deviation(grid.interior))
    return worst, checks + 1


# ---------------------------------------------------------------------------
# structural suites

def eigen_suite(closure: ModelClosure, n: int = 1000, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    stats = dict(n=0, failures=0, eig_error=0.0, eigvec_residual=0.0, min_rank=5,
                 min_abs_gnl=math.inf, contact=0.0)
    for P in random_admissible_states(closure, n, rng):
        r = eigenstructure_check(closure, P, raise_on_fail=False)
        stats["n"] += 1
        stats["failures"] += 0 if r.passed else 1
        stats["eig_error"] = max(stats["eig_error"], r.eig_error)
        stats["eigvec_residual"] = max(stats["eigvec_residual"], r.eigvec_residual)
        stats["min_rank"] = min(stats["min_rank"], r.eigvec_rank)
        stats["min_abs_gnl"] = min(stats["min_abs_gnl"], abs(r.gnl))
        stats["contact"] = max(stats["contact"], r.contact_degeneracy)
    return stats


def ode_invariant_suite(n: int = 1_000_000, seed: int = 0) -> dict:
    """Relative drift of ``w^2 + lam (eta/h - 1)^2`` under the exact oscillator, and
    the relative residual of the implicit stage solve, over random samples."""
    rng = np.random.default_rng(seed)
    h = rng.uniform(0.05, 10.0, n)
    eta0 = h * rng.uniform(0.5, 1.5, n)
    w0 = rng.uniform(-5.0, 5.0, n)
    lam = 10.0 ** rng.uniform(0.0, 4.0)
    dt = 10.0 ** rng.uniform(-4.0, 1.0, n)
    inv0 = w0**2 + lam * (eta0 / h - 1.0) ** 2
    eta1, w1 = ode_exact_relax(h, eta0, w0, lam, dt)
    inv1 = w1**2 + lam * (eta1 / h - 1.0) ** 2
    # absolute floor: a near-zero invariant carries round-off of its terms
    floor = np.finfo(float).eps * (w0**2 + lam * (eta0 / h) ** 2 + lam)
    ode_drift = float(np.max(np.abs(inv1 - inv0) / np.maximum(inv0, floor)))

    k = dt
    eta, w = implicit_relax_solve(h, None, eta0, w0, k, lam)
    # componentwise backward error of the 2x2 system in (eta, w):
    #   eta - k w = eta0,   w + (k lam / h^2) eta = w0 + k lam / h
    c = k * lam / (h * h)
    r1 = np.abs(eta - k * w - eta0) / (np.abs(eta) + np.abs(k * w) + np.abs(eta0))
    r2 = np.abs(w + c * eta - (w0 + c * h)) / (np.abs(w) + c * np.abs(eta) + np.abs(w0) + c * h)
    return dict(n=n, lam=lam, ode_drift=ode_drift, implicit_residual=float(max(r1.max(), r2.max())))


# ---------------------------------------------------------------------------
# bubbly fluid

def ikw_closure(lam: float = 2.0e6) -> ModelClosure:
    return ModelClosure.ikw(lam=lam, **IKW_DEFAULTS)


def ikw_fixed_point(nx: int = 200, steps: int = 50, u: float = 0.0) -> float:
    """Largest relative change of a uniform R = R0 equilibrium after ``steps`` steps
    of each integrator."""
    closure = ikw_closure()
    worst = 0.0
    for integ in (IMEX_ARS222, SPLITTING1):
        grid = Grid.line(0.0, 1.0, nx, BoundaryCondition.uniform("periodic"))
        rho = np.full(nx, closure.reference_density())
        grid.set_primitive(PrimitiveState(rho, np.full(nx, u), 0 * rho, model.q_of_rho(closure, rho), 0 * rho))
        U0 = grid.interior.copy()
        scheme = SchemeConfig(integ, "hllc", 0.9)
        for _ in range(steps):
            step(grid, closure, scheme, with_energy=False)
        scale = np.max(np.abs(U0), axis=(1, 2), keepdims=True)
        scale[scale == 0] = 1.0
        worst = max(worst, float(np.max(np.abs(grid.interior - U0) / scale)))
    return worst


@dataclass
class PulseResult:
    measured_speed: float
    equilibrium_speed: float
    frozen_speed: float
    distance: float
    runtime_s: float

    @property
    def relative_error(self) -> float:
        return abs(self.measured_speed - self.equilibrium_speed) / self.equilibrium_speed


def ikw_pulse(nx: int = 1000, t_end: float = 0.01) -> PulseResult:
    """Track the crest of a small right-going density pulse."""
    spec = get_scenario("ikw_pulse").with_overrides({"mesh.nx": nx, "run.t_end": t_end})
    grid, closure = spec.initial_grid()
    rho0 = closure.reference_density()
    x0, _ = _crest(grid.x, grid.interior[model.RHO, 0] - rho0)
    t0 = time.perf_counter()
    advance(grid, closure, spec.scheme, t_end)
    runtime = time.perf_counter() - t0
    x1, _ = _crest(grid.x, grid.interior[model.RHO, 0] - rho0)
    c_eq = math.sqrt(float(model.equilibrium_sound_speed_sq(closure, rho0)))
    c_fr = math.sqrt(float(model.sound_speed_sq(closure, rho0, model.q_of_rho(closure, rho0))))
    return PulseResult((x1 - x0) / t_end, c_eq, c_fr, x1 - x0, runtime)
