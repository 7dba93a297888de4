"""INI-style run configuration: parsing, validation and defaults.

The grammar is plain configparser INI with typed keys.  Unknown sections or
keys are rejected; every validation error names the offending key.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field, replace

import numpy as np


class ConfigError(ValueError):
    pass


_SCHEMA = {
    "geometry": {"a", "b", "h", "a_over_h"},
    "material": {"E_L", "E_T", "E_z", "G_LT", "G_Lz", "G_Tz",
                 "nu_LT", "nu_Lz", "nu_Tz", "rho"},
    "layup": {"angles", "thicknesses"},
    "mesh": {"nx", "ny", "ladder"},
    "model": {"bc", "theory"},
    "flow": {"theta_prime", "damped", "mach", "mass_ratio"},
    "solver": {"n_modes", "lambda_star_min", "lambda_star_max",
               "coarse_steps", "tol_rel", "n_track"},
    "sweep": {"axis", "values"},
    "output": {"dir"},
}
_REQUIRED_SECTIONS = ("geometry", "material", "layup", "model")


@dataclass(frozen=True)
class RunConfig:
    # geometry
    a: float
    b: float
    h: float
    # material (engineering constants, Pa / kg/m^3)
    E_L: float
    E_T: float
    E_z: float
    G_LT: float
    G_Lz: float
    G_Tz: float
    nu_LT: float
    nu_Lz: float
    nu_Tz: float
    rho: float
    # layup
    angles: tuple[float, ...]
    thicknesses: tuple[float, ...] | None
    # mesh
    nx: int = 10
    ny: int = 10
    ladder: tuple[int, ...] = (5, 10, 14, 20, 30)
    # model
    bc: str = "SSSS"
    theory: str = "sinus-w2"
    # flow
    theta_prime: float = 0.0
    damped: bool = False
    mach: float = 2.0
    mass_ratio: float = 0.1
    # solver
    n_modes: int = 20
    lambda_star_min: float = 1.0
    lambda_star_max: float = 2000.0
    coarse_steps: int = 50
    tol_rel: float = 1e-4
    n_track: int = 6
    # sweep
    sweep_axis: str | None = None
    sweep_values: tuple[float, ...] = ()
    # output
    out_dir: str = "results"

    def with_mesh(self, nx: int, ny: int) -> "RunConfig":
        return replace(self, nx=nx, ny=ny)

    def echo(self) -> list[str]:
        """Full effective configuration as key = value lines."""
        lines = []
        for name in self.__dataclass_fields__:
            v = getattr(self, name)
            if isinstance(v, tuple):
                v = ", ".join(f"{x:g}" if isinstance(x, float) else str(x)
                              for x in v)
            lines.append(f"{name} = {v}")
        return lines


def _float_list(raw: str, key: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in raw.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"key {key!r}: expected a list of numbers, got {raw!r}")


def _get(cp, section, key, cast, default=None, required=False):
    if not cp.has_option(section, key):
        if required:
            raise ConfigError(f"missing required key {section}.{key}")
        return default
    raw = cp.get(section, key)
    try:
        if cast is bool:
            low = raw.strip().lower()
            if low in ("true", "yes", "on", "1"):
                return True
            if low in ("false", "no", "off", "0"):
                return False
            raise ValueError(raw)
        return cast(raw)
    except ValueError:
        raise ConfigError(
            f"key {section}.{key}: cannot parse {raw!r} as {cast.__name__}")


def _positive(value, key):
    if value is None or value <= 0.0:
        raise ConfigError(f"key {key}: must be positive (got {value})")
    return value


def parse_config(text: str) -> RunConfig:
    """Parse and validate the documented INI grammar into a RunConfig."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str  # keys are case-sensitive (E_L vs e_l)
    try:
        cp.read_file(io.StringIO(text))
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc

    for section in cp.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key in cp.options(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {section}.{key}")
    for section in _REQUIRED_SECTIONS:
        if not cp.has_section(section):
            raise ConfigError(f"missing required section [{section}]")

    a = _positive(_get(cp, "geometry", "a", float, required=True), "geometry.a")
    b = _positive(_get(cp, "geometry", "b", float, required=True), "geometry.b")
    h = _get(cp, "geometry", "h", float)
    a_over_h = _get(cp, "geometry", "a_over_h", float)
    if (h is None) == (a_over_h is None):
        raise ConfigError("geometry: give exactly one of 'h' or 'a_over_h'")
    if h is None:
        h = a / _positive(a_over_h, "geometry.a_over_h")
    _positive(h, "geometry.h")

    E_L = _positive(_get(cp, "material", "E_L", float, required=True), "material.E_L")
    E_T = _positive(_get(cp, "material", "E_T", float, required=True), "material.E_T")
    G_LT = _positive(_get(cp, "material", "G_LT", float, required=True), "material.G_LT")
    G_Tz = _positive(_get(cp, "material", "G_Tz", float, required=True), "material.G_Tz")
    nu_LT = _get(cp, "material", "nu_LT", float, required=True)
    rho = _positive(_get(cp, "material", "rho", float, required=True), "material.rho")
    E_z = _get(cp, "material", "E_z", float, default=E_T)
    G_Lz = _get(cp, "material", "G_Lz", float, default=G_LT)
    nu_Lz = _get(cp, "material", "nu_Lz", float, default=nu_LT)
    nu_Tz = _get(cp, "material", "nu_Tz", float, default=nu_LT)

    angles = _float_list(cp.get("layup", "angles", fallback=""), "layup.angles")
    if not angles:
        raise ConfigError("key layup.angles: at least one ply angle required")
    thicknesses = None
    if cp.has_option("layup", "thicknesses"):
        thicknesses = _float_list(cp.get("layup", "thicknesses"),
                                  "layup.thicknesses")
        if len(thicknesses) != len(angles):
            raise ConfigError("key layup.thicknesses: length must match "
                              "layup.angles")
        for t in thicknesses:
            _positive(t, "layup.thicknesses")
        if not np.isclose(sum(thicknesses), h, rtol=1e-12, atol=0.0):
            raise ConfigError("key layup.thicknesses: must sum to the "
                              "total thickness h")

    nx = _get(cp, "mesh", "nx", int, default=10)
    ny = _get(cp, "mesh", "ny", int, default=10)
    if nx < 1 or ny < 1:
        raise ConfigError("key mesh.nx/ny: element counts must be >= 1")
    ladder_raw = cp.get("mesh", "ladder", fallback=None)
    ladder = (tuple(int(x) for x in _float_list(ladder_raw, "mesh.ladder"))
              if ladder_raw else (5, 10, 14, 20, 30))

    bc = _get(cp, "model", "bc", str, required=True).upper()
    if bc not in ("SSSS", "CCCC"):
        raise ConfigError(f"key model.bc: unknown boundary condition {bc!r}")
    theory = _get(cp, "model", "theory", str, default="sinus-w2").lower()

    theta_prime = _get(cp, "flow", "theta_prime", float, default=0.0)
    damped = _get(cp, "flow", "damped", bool, default=False)
    mach = _get(cp, "flow", "mach", float, default=2.0)
    mass_ratio = _get(cp, "flow", "mass_ratio", float, default=0.1)
    if mach <= 1.0:
        raise ConfigError("key flow.mach: must be > 1 (supersonic)")
    _positive(mass_ratio, "flow.mass_ratio")

    n_modes = _get(cp, "solver", "n_modes", int, default=20)
    lmin = _get(cp, "solver", "lambda_star_min", float, default=1.0)
    lmax = _get(cp, "solver", "lambda_star_max", float, default=2000.0)
    coarse_steps = _get(cp, "solver", "coarse_steps", int, default=50)
    tol_rel = _get(cp, "solver", "tol_rel", float, default=1e-4)
    n_track = _get(cp, "solver", "n_track", int, default=6)
    if not (0.0 <= lmin < lmax):
        raise ConfigError("key solver.lambda_star_min/max: need 0 <= min < max")
    if coarse_steps < 10:
        raise ConfigError("key solver.coarse_steps: must be >= 10")
    if n_modes < 2:
        raise ConfigError("key solver.n_modes: must be >= 2")

    sweep_axis = None
    sweep_values: tuple[float, ...] = ()
    if cp.has_section("sweep"):
        sweep_axis = _get(cp, "sweep", "axis", str, required=True).lower()
        from .flutter import SWEEP_AXES
        if sweep_axis not in SWEEP_AXES:
            raise ConfigError(f"key sweep.axis: unknown axis {sweep_axis!r}")
        sweep_values = _float_list(cp.get("sweep", "values", fallback=""),
                                   "sweep.values")
        if not sweep_values:
            raise ConfigError("key sweep.values: nonempty list required")

    out_dir = _get(cp, "output", "dir", str, default="results")

    return RunConfig(
        a=a, b=b, h=h,
        E_L=E_L, E_T=E_T, E_z=E_z, G_LT=G_LT, G_Lz=G_Lz, G_Tz=G_Tz,
        nu_LT=nu_LT, nu_Lz=nu_Lz, nu_Tz=nu_Tz, rho=rho,
        angles=angles, thicknesses=thicknesses,
        nx=nx, ny=ny, ladder=ladder, bc=bc, theory=theory,
        theta_prime=theta_prime, damped=damped, mach=mach,
        mass_ratio=mass_ratio,
        n_modes=n_modes, lambda_star_min=lmin, lambda_star_max=lmax,
        coarse_steps=coarse_steps, tol_rel=tol_rel, n_track=n_track,
        sweep_axis=sweep_axis, sweep_values=sweep_values,
        out_dir=out_dir,
    )
