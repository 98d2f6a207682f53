"""Named experiment recipes: mesh, closure, scheme, initial data and output plan."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

from . import model
from .errors import ConfigError
from .grid import LINE, PLANE, RADIAL, BoundaryCondition, Grid
from .integrators import IMEX_ARS222, SPLITTING1, SchemeConfig
from .model import ModelClosure, PrimitiveState
from .validation import SolitonParams, sgn_soliton_state

# IKW mixture used by the bubbly smoke runs: ~0.1 % gas by volume, 0.1 mm bubbles
IKW_DEFAULTS = dict(p0=1.0e5, R0=1.0e-4, gamma=1.4, rho10=1000.0, Y1=0.999,
                    n=1.0e-6 / (4.0 / 3.0 * math.pi * 1.0e-12))


@dataclass
class ScenarioSpec:
    name: str
    model: str = model.SGN
    geometry: str = LINE
    x0: float = 0.0
    x1: float = 1.0
    y0: float = 0.0
    y1: float = 1.0
    nx: int = 100
    ny: int = 1
    closure: dict = field(default_factory=dict)
    scheme: SchemeConfig = field(default_factory=SchemeConfig)
    recipe: str = "uniform"
    ic: dict = field(default_factory=dict)
    bc: BoundaryCondition = field(default_factory=BoundaryCondition)
    t_end: float = 1.0
    cadence: float = 0.0
    eigen_check_every: int = 0
    description: str = ""

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.model not in (model.SGN, model.IKW):
            raise ConfigError(f"unknown model {self.model!r}")
        if self.geometry not in (LINE, PLANE, RADIAL):
            raise ConfigError(f"unknown geometry {self.geometry!r}")
        if self.recipe not in RECIPES:
            raise ConfigError(f"unknown initial-condition recipe {self.recipe!r}")
        if not self.t_end >= 0:
            raise ConfigError("t_end must be >= 0")
        if self.cadence < 0:
            raise ConfigError("cadence must be >= 0")
        if self.x1 <= self.x0 or (self.geometry == PLANE and self.y1 <= self.y0):
            raise ConfigError("empty domain")
        if self.nx < 1 or self.ny < 1:
            raise ConfigError("mesh sizes must be >= 1")

    # construction -----------------------------------------------------------
    def make_closure(self) -> ModelClosure:
        try:
            if self.model == model.SGN:
                return ModelClosure.sgn(**self.closure)
            return ModelClosure.ikw(**self.closure)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad closure parameters: {exc}") from None

    def make_grid(self) -> Grid:
        if self.geometry == LINE:
            return Grid.line(self.x0, self.x1, self.nx, self.bc)
        if self.geometry == PLANE:
            return Grid.plane(self.x0, self.x1, self.nx, self.y0, self.y1, self.ny, self.bc)
        if self.x0 != 0.0:
            raise ConfigError("radial domains start at r = 0")
        return Grid.radial(self.x1, self.nx, self.bc.right)

    def initial_grid(self) -> tuple[Grid, ModelClosure]:
        closure = self.make_closure()
        grid = self.make_grid()
        X, Y = grid.mesh()
        try:
            P = RECIPES[self.recipe](closure, X, Y, **self.ic)
        except TypeError as exc:
            raise ConfigError(f"bad parameters for recipe {self.recipe!r}: {exc}") from None
        grid.set_primitive(P)
        return grid, closure

    def with_overrides(self, flat: dict) -> "ScenarioSpec":
        merged = self.to_flat()
        merged.update(flat)
        return ScenarioSpec.from_flat(merged)

    def with_recipe(self, recipe: str, **ic) -> "ScenarioSpec":
        """Same run with different initial data."""
        flat = {k: v for k, v in self.to_flat().items() if not k.startswith("ic.")}
        flat["ic.recipe"] = recipe
        flat.update({f"ic.{k}": v for k, v in ic.items()})
        return ScenarioSpec.from_flat(flat)

    # flat key = value form ----------------------------------------------------
    def to_flat(self) -> dict:
        out = {
            "name": self.name,
            "model": self.model,
            "geometry": self.geometry,
            "domain.x0": self.x0,
            "domain.x1": self.x1,
            "domain.y0": self.y0,
            "domain.y1": self.y1,
            "mesh.nx": self.nx,
            "mesh.ny": self.ny,
        }
        for k, v in sorted(self.closure.items()):
            out[f"closure.{k}"] = v
        for f in fields(SchemeConfig):
            out[f"scheme.{f.name}"] = getattr(self.scheme, f.name)
        out["ic.recipe"] = self.recipe
        for k, v in sorted(self.ic.items()):
            out[f"ic.{k}"] = v
        for side in ("left", "right", "bottom", "top"):
            out[f"bc.{side}"] = getattr(self.bc, side)
        out["run.t_end"] = self.t_end
        out["output.cadence"] = self.cadence
        out["output.eigen_check_every"] = self.eigen_check_every
        out["description"] = self.description
        return out

    @classmethod
    def from_flat(cls, flat: dict) -> "ScenarioSpec":
        flat = dict(flat)
        known = {"name", "model", "geometry", "description", "domain.x0", "domain.x1", "domain.y0",
                 "domain.y1", "mesh.nx", "mesh.ny", "ic.recipe", "run.t_end", "output.cadence",
                 "output.eigen_check_every"}
        for key in flat:
            section = key.split(".", 1)[0]
            if key not in known and section not in ("closure", "scheme", "ic", "bc"):
                raise ConfigError(f"unknown key {key!r}")
        if "name" not in flat:
            raise ConfigError("scenario needs a name")

        def num(key, default, typ=float):
            if key not in flat:
                return default
            try:
                return typ(flat[key])
            except (TypeError, ValueError):
                raise ConfigError(f"{key} = {flat[key]!r} is not a valid {typ.__name__}") from None

        closure = {k.split(".", 1)[1]: num(k, None) for k in flat if k.startswith("closure.")}
        scheme_kw = {}
        for f in fields(SchemeConfig):
            key = f"scheme.{f.name}"
            if key in flat:
                scheme_kw[f.name] = _coerce_scheme(f.name, flat[key])
        unknown = {k for k in flat if k.startswith("scheme.")} - {f"scheme.{f.name}" for f in fields(SchemeConfig)}
        if unknown:
            raise ConfigError(f"unknown scheme keys {sorted(unknown)}")
        ic = {k.split(".", 1)[1]: _coerce_ic(v) for k, v in flat.items()
              if k.startswith("ic.") and k != "ic.recipe"}
        bc_kw = {k.split(".", 1)[1]: str(v) for k, v in flat.items() if k.startswith("bc.")}
        try:
            bc = BoundaryCondition(**bc_kw)
            scheme = SchemeConfig(**scheme_kw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        return cls(
            name=str(flat["name"]),
            model=str(flat.get("model", model.SGN)),
            geometry=str(flat.get("geometry", LINE)),
            x0=num("domain.x0", 0.0), x1=num("domain.x1", 1.0),
            y0=num("domain.y0", 0.0), y1=num("domain.y1", 1.0),
            nx=num("mesh.nx", 100, int), ny=num("mesh.ny", 1, int),
            closure=closure, scheme=scheme,
            recipe=str(flat.get("ic.recipe", "uniform")), ic=ic, bc=bc,
            t_end=num("run.t_end", 1.0), cadence=num("output.cadence", 0.0),
            eigen_check_every=num("output.eigen_check_every", 0, int),
            description=str(flat.get("description", "")),
        )


def _coerce_scheme(name, value):
    if name in ("integrator", "solver"):
        return str(value)
    if name == "cfl":
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"scheme.cfl = {value!r} is not a number") from None
    if name == "muscl":
        if value is None or str(value).lower() in ("none", "auto", ""):
            return None
        return _to_bool(value)
    return _to_bool(value)


def _to_bool(value):
    if isinstance(value, bool):
        return value
    s = str(value).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {value!r}")


def _coerce_ic(value):
    if isinstance(value, (int, float)):
        return float(value)
    try:
        return float(value)
    except ValueError:
        return str(value)


# ---------------------------------------------------------------------------
# initial-condition recipes: (closure, X, Y, **params) -> PrimitiveState

def _rest(closure, h):
    z = np.zeros_like(h)
    return PrimitiveState(h, z, z.copy(), model.q_of_rho(closure, h), z.copy())


def ic_uniform(closure, X, Y, rho=None, u=0.0, v=0.0):
    if rho is None:
        rho = 1.0 if closure.kind == model.SGN else closure.reference_density()
    h = np.full(X.shape, float(rho))
    P = _rest(closure, h)
    return P._replace(u=np.full(X.shape, float(u)), v=np.full(X.shape, float(v)))


def ic_soliton(closure, X, Y, h0=1.0, a=0.2, x_center=0.0, direction=1.0, period=0.0):
    p = SolitonParams(h0, a, closure.g, x_center, int(direction))
    return sgn_soliton_state(p, X, 0.0, period=period or None)


def ic_two_solitons(closure, X, Y, h0=10.0, a=2.0, x_left=1500.0, x_right=2500.0):
    """Right-going wave at ``x_left``, left-going wave at ``x_right``."""
    P1 = sgn_soliton_state(SolitonParams(h0, a, closure.g, x_left, 1), X)
    P2 = sgn_soliton_state(SolitonParams(h0, a, closure.g, x_right, -1), X)
    h = P1.rho + P2.rho - h0
    # disjoint supports to round-off, so velocities and rates superpose
    return PrimitiveState(h, P1.u + P2.u, np.zeros_like(h), h.copy(), P1.w + P2.w)


def ic_dam_break_1d(closure, X, Y, h_L=1.8, h_R=1.0, x_dam=0.0):
    return _rest(closure, np.where(X <= x_dam, h_L, h_R).astype(float))


def ic_circle_dam(closure, X, Y, h_in=1.8, h_out=1.0, radius=40.0):
    return _rest(closure, np.where(X * X + Y * Y <= radius * radius, h_in, h_out).astype(float))


def ic_square_dam(closure, X, Y, h_in=1.8, h_out=1.0, side=80.0):
    inside = (np.abs(X) <= side / 2) & (np.abs(Y) <= side / 2)
    return _rest(closure, np.where(inside, h_in, h_out).astype(float))


def ic_radial_dam(closure, X, Y, h_in=1.8, h_out=1.0, radius=40.0):
    return _rest(closure, np.where(X <= radius, h_in, h_out).astype(float))


def ic_ikw_pulse(closure, X, Y, amplitude=1e-6, width=0.2, x_center=3.0):
    """Right-going small Gaussian density pulse on the R = R0 equilibrium.

    ``amplitude`` is relative to the background density; the velocity follows
    the linear simple-wave relation and ``eta``, ``w`` sit on the equilibrium
    manifold ``eta = Q(rho)``.
    """
    rho0 = closure.reference_density()
    c0 = math.sqrt(float(model.equilibrium_sound_speed_sq(closure, rho0)))
    g = np.exp(-0.5 * ((X - x_center) / width) ** 2)
    rho = rho0 * (1.0 + amplitude * g)
    u = c0 * amplitude * g
    u_x = -c0 * amplitude * g * (X - x_center) / width**2
    R = model.bubble_radius(closure, rho)
    vol = 1.0 / rho - closure.Y1 / closure.rho10
    dq_drho = R**1.5 * (R / (3.0 * vol)) * (-1.0 / rho**2)
    w = -dq_drho * rho * u_x
    return PrimitiveState(rho, u, np.zeros_like(rho), model.q_of_rho(closure, rho), w)


RECIPES = {
    "uniform": ic_uniform,
    "soliton": ic_soliton,
    "two_solitons": ic_two_solitons,
    "dam_break_1d": ic_dam_break_1d,
    "circle_dam": ic_circle_dam,
    "square_dam": ic_square_dam,
    "radial_dam": ic_radial_dam,
    "ikw_pulse": ic_ikw_pulse,
}


# ---------------------------------------------------------------------------
# registry

def _soliton_period() -> float:
    return 100.0 / math.sqrt(9.81 * 1.2)


def builtin_scenarios() -> dict[str, ScenarioSpec]:
    periodic = BoundaryCondition.uniform("periodic")
    open_bc = BoundaryCondition()
    imex = IMEX_ARS222
    specs = [
        ScenarioSpec(
            name="soliton", x0=0.0, x1=100.0, nx=2000,
            closure=dict(lam=1200.0, g=9.81),
            scheme=SchemeConfig(imex, "rusanov", 0.9),
            recipe="soliton", ic=dict(h0=1.0, a=0.2, x_center=50.0, direction=1.0, period=100.0),
            bc=periodic, t_end=_soliton_period(), cadence=_soliton_period() / 4,
            eigen_check_every=200,
            description="solitary wave over one period of a 100 m periodic channel"),
        ScenarioSpec(
            name="collision", x0=0.0, x1=4000.0, nx=4000,
            closure=dict(lam=2400.0, g=9.81),
            scheme=SchemeConfig(imex, "rusanov", 0.9),
            recipe="two_solitons", ic=dict(h0=10.0, a=2.0, x_left=1500.0, x_right=2500.0),
            bc=open_bc, t_end=200.0, cadence=50.0, eigen_check_every=200,
            description="head-on collision of two equal solitary waves"),
        ScenarioSpec(
            name="dam1d", x0=-300.0, x1=300.0, nx=8000,
            closure=dict(lam=300.0, g=9.81),
            scheme=SchemeConfig(imex, "hllc", 0.95),
            recipe="dam_break_1d", ic=dict(h_L=1.8, h_R=1.0, x_dam=0.0),
            bc=open_bc, t_end=47.434, cadence=0.0, eigen_check_every=500,
            description="1-D dam break developing a dispersive shock"),
        ScenarioSpec(
            name="circle2d", geometry=PLANE, x0=-300.0, x1=300.0, y0=-300.0, y1=300.0, nx=800, ny=800,
            closure=dict(lam=75.0, g=9.81),
            scheme=SchemeConfig(imex, "hllc", 0.5),
            recipe="circle_dam", ic=dict(h_in=1.8, h_out=1.0, radius=40.0),
            bc=open_bc, t_end=40.0, cadence=0.0, eigen_check_every=100,
            description="2-D circular dam break (radius is an artifact default)"),
        ScenarioSpec(
            name="square2d", geometry=PLANE, x0=-300.0, x1=300.0, y0=-300.0, y1=300.0, nx=800, ny=800,
            closure=dict(lam=75.0, g=9.81),
            scheme=SchemeConfig(imex, "hllc", 0.5),
            recipe="square_dam", ic=dict(h_in=1.8, h_out=1.0, side=80.0),
            bc=open_bc, t_end=40.0, cadence=0.0, eigen_check_every=100,
            description="2-D square dam break"),
        ScenarioSpec(
            name="radial1d", geometry=RADIAL, x0=0.0, x1=300.0, nx=400,
            closure=dict(lam=75.0, g=9.81),
            scheme=SchemeConfig(imex, "hllc", 0.5),
            recipe="radial_dam", ic=dict(h_in=1.8, h_out=1.0, radius=40.0),
            bc=BoundaryCondition("reflective", "transmissive"), t_end=40.0, cadence=0.0,
            eigen_check_every=200,
            description="axisymmetric counterpart of circle2d"),
        ScenarioSpec(
            name="ikw_pulse", model=model.IKW, x0=0.0, x1=10.0, nx=1000,
            closure=dict(lam=2.0e6, **IKW_DEFAULTS),
            scheme=SchemeConfig(imex, "rusanov", 0.9),
            recipe="ikw_pulse", ic=dict(amplitude=1e-6, width=0.2, x_center=3.0),
            bc=open_bc, t_end=0.01, cadence=0.0, eigen_check_every=200,
            description="small acoustic pulse in a bubbly liquid"),
        ScenarioSpec(
            name="soliton_splitting", x0=0.0, x1=100.0, nx=2000,
            closure=dict(lam=1200.0, g=9.81),
            scheme=SchemeConfig(SPLITTING1, "hllc", 0.9),
            recipe="soliton", ic=dict(h0=1.0, a=0.2, x_center=50.0, direction=1.0, period=100.0),
            bc=periodic, t_end=_soliton_period(), cadence=0.0, eigen_check_every=200,
            description="soliton with the first-order splitting"),
    ]
    return {s.name: s for s in specs}


def get_scenario(name: str) -> ScenarioSpec:
    reg = builtin_scenarios()
    if name not in reg:
        raise ConfigError(f"unknown scenario {name!r}; known: {', '.join(sorted(reg))}")
    return reg[name]

