"""Scenario run loop with output cadence, spot checks and the run manifest."""

from __future__ import annotations

import logging
import math
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .config import dump_text, read_config
from .errors import HyperDispError
from .grid import integrate_total_energy
from .integrators import cfl_dt, step
from .io import write_fields
from .scenarios import ScenarioSpec
from .validation import spot_check_field

log = logging.getLogger(__name__)


@dataclass
class RunManifest:
    scenario: dict
    code_version: str = __version__
    status: str = "running"
    error: str = ""
    wall_clock_s: float = 0.0
    steps: int = 0
    t_final: float = 0.0
    initial_mass: float = float("nan")
    final_mass: float = float("nan")
    final_energy: float = float("nan")
    eigen_checks: int = 0
    outputs: list = field(default_factory=list)

    def to_flat(self) -> dict:
        out = {f"scenario.{k}": v for k, v in self.scenario.items()}
        out.update({
            "run.code_version": self.code_version,
            "run.status": self.status,
            "run.error": self.error,
            "run.wall_clock_s": self.wall_clock_s,
            "run.steps": self.steps,
            "run.t_final": self.t_final,
            "run.initial_mass": self.initial_mass,
            "run.final_mass": self.final_mass,
            "run.final_energy": self.final_energy,
            "run.eigen_checks": self.eigen_checks,
            "outputs.count": len(self.outputs),
        })
        for k, (name, t) in enumerate(self.outputs):
            out[f"outputs.{k:04d}.file"] = name
            out[f"outputs.{k:04d}.t"] = t
        return out

    def write(self, path) -> Path:
        path = Path(path)
        path.write_text(dump_text(self.to_flat()))
        return path


def read_manifest(path) -> dict[str, str]:
    return read_config(path)


def scenario_from_manifest(path) -> ScenarioSpec:
    """Rebuild the effective scenario from a manifest's echo."""
    flat = read_manifest(path)
    echo = {k[len("scenario."):]: v for k, v in flat.items() if k.startswith("scenario.")}
    return ScenarioSpec.from_flat(echo)


def dump_times(t_end: float, cadence: float) -> list[float]:
    """Intermediate dump times ``k * cadence`` for ``k = 1 .. floor(t_end / cadence)``."""
    if cadence <= 0:
        return []
    return [k * cadence for k in range(1, math.floor(t_end / cadence) + 1)]


def run(spec: ScenarioSpec, out_dir, raise_on_error: bool = False, progress_every: int = 0) -> RunManifest:
    """Run ``spec`` writing fields into ``out_dir``; the manifest is written last.

    Field files: the initial state, one per cadence time and a final one.
    On a solver error the manifest is still written with status ``failed``.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(scenario=spec.to_flat())
    manifest_path = out_dir / f"{spec.name}.manifest"
    t0 = time.perf_counter()
    counter = [0]

    def dump(grid, closure, t, tag=None):
        tag = tag or f"{counter[0]:04d}"
        counter[0] += 1
        path = write_fields(grid, closure, out_dir / f"{spec.name}_{tag}")
        manifest.outputs.append((path.name, t))

    t = 0.0
    try:
        grid, closure = spec.initial_grid()
        manifest.initial_mass = grid.total_mass()
        dump(grid, closure, t)
        pending = deque(dump_times(spec.t_end, spec.cadence))
        while True:
            while pending and pending[0] <= t:
                pending.popleft()
                dump(grid, closure, t)
            if t >= spec.t_end:
                break
            target = min(spec.t_end, pending[0]) if pending else spec.t_end
            dt = cfl_dt(grid, closure, spec.scheme.cfl)
            if t + dt >= target:
                dt = target - t
                t_next = target
            else:
                t_next = t + dt
            step(grid, closure, spec.scheme, dt, with_energy=False)
            t = t_next
            manifest.steps += 1
            if spec.eigen_check_every and manifest.steps % spec.eigen_check_every == 0:
                manifest.eigen_checks += spot_check_field(closure, grid.interior)
            if progress_every and manifest.steps % progress_every == 0:
                log.info("%s: step %d t=%.6g dt=%.3e", spec.name, manifest.steps, t, dt)
        dump(grid, closure, t, tag="final")
        manifest.final_mass = grid.total_mass()
        manifest.final_energy = integrate_total_energy(grid, closure)
        manifest.status = "ok"
    except HyperDispError as exc:
        manifest.status = "failed"
        manifest.error = f"{type(exc).__name__}: {exc}"
        log.error("%s failed at t=%.6g: %s", spec.name, t, manifest.error)
        if raise_on_error:
            manifest.t_final = t
            manifest.wall_clock_s = time.perf_counter() - t0
            manifest.write(manifest_path)
            raise
    manifest.t_final = t
    manifest.wall_clock_s = time.perf_counter() - t0
    manifest.write(manifest_path)
    return manifest
