"""Reference solutions and structural checks used by tests and experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import model
from .errors import HyperbolicityViolation, PlateauNotFound, ShapeMismatch
from .model import MX, MY, ModelClosure, PrimitiveState


# ---------------------------------------------------------------------------
# solitary wave

@dataclass(frozen=True)
class SolitonParams:
    h0: float = 1.0
    a: float = 0.2
    g: float = 9.81
    x_center: float = 0.0
    direction: int = 1

    def __post_init__(self):
        if not (self.h0 > 0 and self.a > 0):
            raise ValueError("soliton needs h0 > 0 and a > 0")
        if self.direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")

    @property
    def speed(self) -> float:
        return math.sqrt(self.g * (self.h0 + self.a))

    @property
    def kappa(self) -> float:
        return math.sqrt(3.0 * self.a / (4.0 * self.h0**2 * (self.h0 + self.a)))


def sgn_soliton_state(p: SolitonParams, x, t: float = 0.0, period: float | None = None) -> PrimitiveState:
    """Exact SGN solitary wave, with ``eta = h`` and ``w = -h u_x``.

    When ``period`` is given the profile is evaluated on the nearest
    periodic image, which is what a periodic run converges to.
    """
    x = np.asarray(x, dtype=float)
    D = p.speed * p.direction
    xi = x - p.x_center - D * t
    if period is not None:
        xi = xi - period * np.round(xi / period)
    k = p.kappa
    e = np.exp(-2.0 * np.abs(k * xi))  # overflow-free sech^2
    sech2 = 4.0 * e / (1.0 + e) ** 2
    h = p.h0 + p.a * sech2
    hx = -2.0 * p.a * k * sech2 * np.tanh(k * xi)
    u = D * (1.0 - p.h0 / h)
    w = -D * p.h0 * hx / h
    return PrimitiveState(h, u, np.zeros_like(h), h.copy(), w)


# ---------------------------------------------------------------------------
# dam-break asymptotics

class DamBreakAsymptotics(NamedTuple):
    h_star: float
    u_star: float
    a_plus: float


def whitham_plateau(h_L: float, h_R: float, g: float = 9.81) -> tuple[float, float]:
    """Mean-flow plateau between the rarefaction and the dispersive shock."""
    if not (h_L >= h_R > 0):
        raise ValueError("need h_L >= h_R > 0")
    h_star = (math.sqrt(h_L) + math.sqrt(h_R)) ** 2 / 4.0
    u_star = 2.0 * (math.sqrt(g * h_star) - math.sqrt(g * h_R))
    return h_star, u_star


def lead_soliton_amplitude(delta0: float) -> float:
    """Second-order estimate of the leading solitary wave above the downstream level."""
    if not delta0 > 0:
        raise ValueError("delta0 must be positive")
    return delta0 - delta0 * delta0 / 12.0


def dambreak_asymptotics(h_L: float, h_R: float, g: float = 9.81) -> DamBreakAsymptotics:
    hs, us = whitham_plateau(h_L, h_R, g)
    return DamBreakAsymptotics(hs, us, lead_soliton_amplitude(h_L - h_R))


class DamBreakMetrics(NamedTuple):
    h_plateau: float
    u_plateau: float
    lead_amp: float
    window: tuple[int, int]


def dambreak_metrics(x, h, u, h_L: float, h_R: float, g: float = 9.81,
                     margin: float = 0.1, min_cells: int = 10) -> DamBreakMetrics:
    """Measure plateau depth/velocity and the lead-wave amplitude of a 1-D run.

    Scanning from the deep side, the rarefaction tail is the first local
    minimum of ``h`` once the depth has left ``h_L`` by ``margin * (h_L - h_R)``.
    The leading crest is the highest point beyond it. The plateau values are
    medians over that window, which also absorbs the small trailing ripples
    of the dispersive front. Data with the deep side on the right are mirrored
    (the velocity sign flips with it).
    """
    x, h, u = (np.asarray(a, dtype=float).ravel() for a in (x, h, u))
    if h[0] < h[-1]:
        x, h, u = -x[::-1], h[::-1], -u[::-1]
    jump = h_L - h_R
    if not jump > 0:
        raise ValueError("need h_L > h_R")
    below = np.flatnonzero(h < h_L - margin * jump)
    if below.size == 0:
        raise PlateauNotFound("depth never leaves the upstream level")
    tail = int(below[0])
    while tail + 1 < h.size and h[tail + 1] < h[tail]:
        tail += 1
    if not h[tail] > h_R + margin * jump:
        raise PlateauNotFound("rarefaction runs straight into the downstream level")
    crest = tail + int(np.argmax(h[tail:]))
    if crest - tail < min_cells:
        raise PlateauNotFound("no window between rarefaction tail and leading crest")
    h_p = float(np.median(h[tail:crest]))
    u_p = float(np.median(u[tail:crest]))
    return DamBreakMetrics(h_p, u_p, float(h[crest] - h_R), (tail, crest))


# ---------------------------------------------------------------------------
# norms and symmetry helpers

def error_norms(field_num, field_ref, grid=None, cell_volume=None) -> tuple[float, float, float]:
    """Volume-weighted (L1, L2, Linf) of the difference.

    The weights come from ``grid.cell_volumes()`` or an explicit
    ``cell_volume`` (scalar or array); without either they are 1.
    """
    a = np.asarray(field_num, dtype=float)
    b = np.asarray(field_ref, dtype=float)
    if a.shape != b.shape:
        raise ShapeMismatch(f"{a.shape} vs {b.shape}")
    if grid is not None:
        vol = grid.cell_volumes().reshape(a.shape) if np.size(grid.cell_volumes()) == a.size \
            else grid.cell_volumes()
    elif cell_volume is not None:
        vol = cell_volume
    else:
        vol = 1.0
    d = np.abs(a - b)
    vol = np.broadcast_to(vol, d.shape)
    return float(np.sum(d * vol)), float(math.sqrt(np.sum(d * d * vol))), float(np.max(d, initial=0.0))


def rotate90(U):
    """Rotate a (5, n, n) conserved field by 90 degrees counter-clockwise.

    ``out[:, j, i] = U[:, n-1-i, j]`` with momenta rotated as vectors.
    """
    U = np.asarray(U)
    if U.shape[-1] != U.shape[-2]:
        raise ShapeMismatch("rotation needs a square field")
    out = np.ascontiguousarray(U[:, ::-1, :].transpose(0, 2, 1))
    out[MX] = -U[MY][::-1, :].T
    out[MY] = U[MX][::-1, :].T
    return out


# ---------------------------------------------------------------------------
# eigenstructure

@dataclass
class EigenReport:
    eigenvalues: np.ndarray
    expected: np.ndarray
    eig_error: float
    eigvec_rank: int
    eigvec_residual: float
    gnl: float
    contact_degeneracy: float
    passed: bool
    failures: tuple = ()


def _fd_steps(closure: ModelClosure, V, rel: float = 1e-6):
    # relative steps; eta is tiny for bubbly media, and the IKW gas pressure
    # varies on the scale of the gas volume rather than of rho itself
    rho_scale = V[0]
    if closure.kind == model.IKW:
        rho_scale = V[0] * min(1.0, V[0] * float(model._gas_specific_volume(closure, V[0])))
    scale = np.array([rho_scale, 1.0, 1.0, abs(V[3]) if V[3] != 0 else V[0], 1.0])
    eps = rel * np.maximum(np.abs(V), scale)
    eps[0] = rel * rho_scale
    return eps


def quasilinear_matrix(closure: ModelClosure, P: PrimitiveState) -> np.ndarray:
    """Finite-difference ``A = (dU/dV)^-1 dF/dV`` for ``V = (rho, u, v, eta, w)`` along x."""
    V = np.array([float(c) for c in P])
    # fourth-order central differences: the rho u^2 part of the momentum flux
    # dwarfs the pressure variation, so a larger step keeps round-off down
    eps = _fd_steps(closure, V, 1e-4)

    def flux(Vs):
        return model.physical_flux(closure, model.prim_to_cons(PrimitiveState(*Vs)), "x")

    dF = np.empty((5, 5))
    for k in range(5):
        e = np.zeros(5)
        e[k] = eps[k]
        dF[:, k] = (8.0 * (flux(V + e) - flux(V - e)) - (flux(V + 2 * e) - flux(V - 2 * e))) / (12.0 * eps[k])
    rho, u, v, eta, w = V
    dU = np.eye(5) * rho
    dU[:, 0] = [1.0, u, v, eta, w]
    return np.linalg.solve(dU, dF)


def eigenstructure_check(closure: ModelClosure, P: PrimitiveState, rtol: float = 1e-6,
                         contact_tol: float = 1e-8, raise_on_fail: bool = True) -> EigenReport:
    """Verify the characteristic structure of the x-direction system at one state.

    Checks the spectrum ``{u, u, u, u - c, u + c}``, rank of the analytic
    eigenvectors (and that they really are eigenvectors of the numerical
    matrix), genuine nonlinearity of the acoustic fields and linear
    degeneracy of the contact fields.
    """
    rho, u = float(P.rho), float(P.u)
    eta = float(P.eta)
    c2 = float(model.sound_speed_sq(closure, rho, eta))
    if not c2 > 0:
        raise HyperbolicityViolation(f"non-positive dp/drho = {c2!r}")
    c = math.sqrt(c2)
    scale = abs(u) + c
    A = quasilinear_matrix(closure, P)

    mu = np.linalg.eigvals(A)
    if np.max(np.abs(mu.imag)) > rtol * scale:
        eig_err = float(np.max(np.abs(mu.imag))) / scale
        mu_sorted = np.sort(mu.real)
    else:
        mu_sorted = np.sort(mu.real)
        eig_err = 0.0
    expected = np.sort(np.array([u - c, u, u, u, u + c]))
    eig_err = max(eig_err, float(np.max(np.abs(mu_sorted - expected))) / scale)

    # analytic right eigenvectors
    f = float(model.penalty_f(closure, eta))
    p_eta = -closure.a * closure.lam * float(model.penalty_f_prime(closure, eta)) * (2.0 * f / rho - 1.0)
    R = np.zeros((5, 5))
    R[:, 0] = [rho, -c, 0.0, 0.0, 0.0]
    R[:, 1] = [rho, c, 0.0, 0.0, 0.0]
    R[2, 2] = 1.0
    R[:, 3] = [-p_eta / c2, 0.0, 0.0, 1.0, 0.0]
    R[4, 4] = 1.0
    mus = np.array([u - c, u + c, u, u, u])
    rank = int(np.linalg.matrix_rank(R / np.linalg.norm(R, axis=0)))
    resid = A @ R - R * mus
    eigvec_res = float(np.max(np.linalg.norm(resid, axis=0) / (np.linalg.norm(R, axis=0) * scale)))

    # genuine nonlinearity with r = (1, c/rho, ...): (c/(2 rho)) (2 + rho p_rr / p_r)
    drho = _fd_steps(closure, np.array([float(c) for c in P]))[0]
    p_rr = float(model.sound_speed_sq(closure, rho + drho, eta) - model.sound_speed_sq(closure, rho - drho, eta)) / (2 * drho)
    gnl = 0.5 * (c / rho) * (2.0 + rho * p_rr / c2)

    # contact fields travel with mu = u; its gradient along each contact vector
    grad_u = np.array([0.0, 1.0, 0.0, 0.0, 0.0])
    contact = float(max(abs(grad_u @ R[:, k]) / np.linalg.norm(R[:, k]) for k in (2, 3, 4)))

    failures = []
    if eig_err > rtol:
        failures.append(f"eigenvalue mismatch {eig_err:.3e}")
    if rank < 5:
        failures.append(f"eigenvector rank {rank}")
    if eigvec_res > rtol:
        failures.append(f"eigenvector residual {eigvec_res:.3e}")
    if not abs(gnl) > 1e-10 * c / rho:
        failures.append("acoustic field not genuinely nonlinear")
    if contact > contact_tol:
        failures.append(f"contact field not degenerate {contact:.3e}")
    report = EigenReport(mu_sorted, expected, eig_err, rank, eigvec_res, gnl, contact,
                         not failures, tuple(failures))
    if failures and raise_on_fail:
        raise HyperbolicityViolation("; ".join(failures))
    return report


def random_admissible_states(closure: ModelClosure, n: int, rng: np.random.Generator) -> list[PrimitiveState]:
    """Draw states inside the closure's admissible set (used by property suites)."""
    out = []
    if closure.kind == model.SGN:
        h = rng.uniform(0.05, 10.0, n)
        eta = h * rng.uniform(0.5, 1.5, n)
        spd = np.sqrt(closure.g * h)
    else:
        rho_ref = closure.reference_density()
        rho_max = closure.rho10 / closure.Y1
        # perturb the gas volume by up to a factor 2 either way
        vol_ref = 1.0 / rho_ref - closure.Y1 / closure.rho10
        vol = vol_ref * np.exp(rng.uniform(-np.log(2.0), np.log(2.0), n))
        h = 1.0 / (closure.Y1 / closure.rho10 + vol)
        assert np.all(h < rho_max)
        eta = model.q_of_rho(closure, h) * rng.uniform(0.5, 1.5, n)
        spd = np.sqrt(model.equilibrium_sound_speed_sq(closure, h))
    u = rng.uniform(-1.0, 1.0, n) * spd
    v = rng.uniform(-1.0, 1.0, n) * spd
    w = rng.uniform(-1.0, 1.0, n) * eta
    for k in range(n):
        out.append(PrimitiveState(h[k], u[k], v[k], eta[k], w[k]))
    return out


def spot_check_field(closure: ModelClosure, U, samples: int = 8, rng=None) -> int:
    """Run the eigenstructure check on a few cells of a conserved field; returns the count checked."""
    rng = rng or np.random.default_rng(0)
    flat = np.asarray(U).reshape(5, -1)
    idx = rng.choice(flat.shape[1], size=min(samples, flat.shape[1]), replace=False)
    for i in idx:
        eigenstructure_check(closure, model.cons_to_prim(flat[:, i]))
    return len(idx)
