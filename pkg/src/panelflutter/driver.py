"""Mid-level case running: config -> model objects -> solved results."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .assembly import GlobalSystem, apply_bc, assemble
from .config import RunConfig
from .eigen import ModalBasis, free_vibration
from .fem import Mesh, build_structured_mesh
from .flutter import (FlutterResult, NonDim, find_flutter_damped,
                      find_flutter_undamped)
from .kinematics import make_expansion
from .laminate import Laminate, OrthotropicMaterial, Ply

# flutter pencils larger than this are always solved on the modal basis
MODAL_SWITCH = 800


@dataclass
class Case:
    config: RunConfig
    mesh: Mesh
    laminate: Laminate
    system: GlobalSystem     # reduced (post-BC)
    nondim: NonDim


def material_from_config(cfg: RunConfig) -> OrthotropicMaterial:
    return OrthotropicMaterial(
        E_L=cfg.E_L, E_T=cfg.E_T, E_z=cfg.E_z,
        G_LT=cfg.G_LT, G_Lz=cfg.G_Lz, G_Tz=cfg.G_Tz,
        nu_LT=cfg.nu_LT, nu_Lz=cfg.nu_Lz, nu_Tz=cfg.nu_Tz, rho=cfg.rho)


def laminate_from_config(cfg: RunConfig) -> Laminate:
    mat = material_from_config(cfg)
    if cfg.thicknesses is not None:
        return Laminate(tuple(Ply(mat, ang, t)
                              for ang, t in zip(cfg.angles, cfg.thicknesses)))
    return Laminate.from_angles(mat, cfg.angles, cfg.h)


def build_case(cfg: RunConfig) -> Case:
    laminate = laminate_from_config(cfg)
    expansion = make_expansion(cfg.theory, laminate.h)
    mesh = build_structured_mesh(cfg.a, cfg.b, cfg.nx, cfg.ny)
    system = apply_bc(
        assemble(mesh, laminate, expansion, theta_prime=cfg.theta_prime),
        mesh, cfg.bc)
    return Case(config=cfg, mesh=mesh, laminate=laminate, system=system,
                nondim=NonDim.from_laminate(laminate, cfg.a))


def run_modes_case(cfg: RunConfig, n_modes: int | None = None):
    """Free-vibration solve; returns (case, omega, modal basis)."""
    case = build_case(cfg)
    omega, basis = free_vibration(case.system, n_modes or cfg.n_modes)
    return case, omega, basis


def run_flutter_case(cfg: RunConfig, case: Case | None = None,
                     basis: ModalBasis | None = None) -> FlutterResult:
    """Flutter boundary for one configuration (damped per cfg.damped)."""
    if case is None:
        case = build_case(cfg)
    rng = (cfg.lambda_star_min, cfg.lambda_star_max)
    if cfg.damped:
        if basis is None:
            _, basis = free_vibration(case.system, cfg.n_modes)
        return find_flutter_damped(
            basis, case.nondim, rng, coarse_steps=cfg.coarse_steps,
            tol_rel=cfg.tol_rel, mach=cfg.mach, mass_ratio=cfg.mass_ratio)
    if case.system.n > MODAL_SWITCH:
        if basis is None:
            _, basis = free_vibration(case.system, cfg.n_modes)
        source = basis
    else:
        source = case.system
    return find_flutter_undamped(
        source, case.nondim, rng, coarse_steps=cfg.coarse_steps,
        tol_rel=cfg.tol_rel, n_track=cfg.n_track)


def config_with_axis_value(cfg: RunConfig, axis: str, value: float) -> RunConfig:
    """Clone the config with one parametric-sweep axis changed.

    aspect_ratio sets a = value * b (length along the flow, fixed width),
    flow_angle sets theta_prime [deg], thickness sets h = a / value
    (value is a/h).
    """
    value = float(value)
    if axis == "aspect_ratio":
        if value <= 0:
            raise ValueError("aspect ratio must be positive")
        # lengthen the panel along the flow at fixed width and thickness
        return replace(cfg, a=value * cfg.b)
    if axis == "flow_angle":
        return replace(cfg, theta_prime=value)
    if axis == "thickness":
        if value <= 0:
            raise ValueError("a/h must be positive")
        return replace(cfg, h=cfg.a / value, thicknesses=None)
    raise ValueError(f"unknown sweep axis {axis!r}")
