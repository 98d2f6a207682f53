"""Rusanov and HLLC interface fluxes with Davis wave-speed bounds.

These wrappers accept single conserved states of shape (5,) or batches of
shape (5, ...) and dispatch to the compiled scalar solver used by the
sweeps, so a flux checked here is the flux the integrators use.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import DegenerateStarState
from .model import ModelClosure, _axis_index, _check_rho

SOLVERS = {"rusanov": kernels.RUSANOV, "hllc": kernels.HLLC}


class WaveSpeeds(NamedTuple):
    s_left: np.ndarray | float
    s_right: np.ndarray | float
    s_star: np.ndarray | float


def _prepare(UL, UR):
    UL = np.asarray(UL, dtype=float)
    UR = np.asarray(UR, dtype=float)
    UL, UR = np.broadcast_arrays(UL, UR)
    if UL.shape[0] != 5:
        raise ValueError("states need a leading axis of length 5")
    _check_rho(UL[0])
    _check_rho(UR[0])
    shape = UL.shape[1:]
    flat = (np.ascontiguousarray(UL.reshape(5, -1)), np.ascontiguousarray(UR.reshape(5, -1)))
    return flat, shape


def solver_code(solver) -> int:
    if isinstance(solver, str):
        try:
            return SOLVERS[solver.lower()]
        except KeyError:
            raise ValueError(f"unknown Riemann solver {solver!r}") from None
    return int(solver)


def numerical_flux(closure: ModelClosure, UL, UR, axis="x", solver="hllc"):
    (ul, ur), shape = _prepare(UL, UR)
    out = np.empty_like(ul)
    kernels.pointwise_flux(closure.params(), solver_code(solver), ul, ur, _axis_index(axis), out)
    out = out.reshape((5,) + shape)
    return out


def rusanov_flux(closure: ModelClosure, UL, UR, axis="x"):
    """``0.5 (F_L + F_R) - 0.5 S+ (U_R - U_L)`` with the Davis bound ``S+``."""
    return numerical_flux(closure, UL, UR, axis, "rusanov")


def hllc_flux(closure: ModelClosure, UL, UR, axis="x"):
    """HLLC flux; tangential velocity, eta and w ride on the contact.

    Falls back to Rusanov where the contact-speed denominator degenerates.
    """
    return numerical_flux(closure, UL, UR, axis, "hllc")


def hllc_speeds(closure: ModelClosure, UL, UR, axis="x") -> WaveSpeeds:
    (ul, ur), shape = _prepare(UL, UR)
    out = np.empty((3, ul.shape[1]))
    degenerate = np.zeros(ul.shape[1], dtype=np.bool_)
    kernels.pointwise_speeds(closure.params(), ul, ur, _axis_index(axis), out, degenerate)
    if degenerate.any():
        raise DegenerateStarState("HLLC contact-speed denominator vanished")
    out = out.reshape((3,) + shape)
    if shape == ():
        return WaveSpeeds(float(out[0]), float(out[1]), float(out[2]))
    return WaveSpeeds(out[0], out[1], out[2])
