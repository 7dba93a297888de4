"""Shared fixtures: benchmark materials, small laminates and systems."""

import numpy as np
import pytest

from panelflutter.assembly import apply_bc, assemble
from panelflutter.fem import build_structured_mesh
from panelflutter.kinematics import make_expansion
from panelflutter.laminate import Laminate, OrthotropicMaterial


@pytest.fixture(scope="session")
def angle_ply_material():
    """Graphite/epoxy-style ratios (E_L/E_T = 40) for the angle-ply benchmark."""
    return OrthotropicMaterial.transversely_isotropic(
        E_L=40e9, E_T=1e9, G_LT=0.6e9, G_Tz=0.5e9, nu_LT=0.25, rho=1500.0)


@pytest.fixture(scope="session")
def cross_ply_material():
    """Boron/epoxy set calibrated to the published flutter benchmarks."""
    return OrthotropicMaterial.transversely_isotropic(
        E_L=211e9, E_T=24.1e9, G_LT=6.9e9, G_Tz=6.9e9, nu_LT=0.23, rho=2000.0)


@pytest.fixture(scope="session")
def iso_material():
    return OrthotropicMaterial.isotropic(E=70e9, nu=0.3, rho=2700.0)


@pytest.fixture(scope="session")
def angle_ply_laminate(angle_ply_material):
    return Laminate.from_angles(angle_ply_material,
                                (45, -45, 45, -45, 45), h=0.01)


@pytest.fixture(scope="session")
def cross_ply_laminate(cross_ply_material):
    return Laminate.from_angles(cross_ply_material,
                                (0, 90, 0, 90, 90, 0, 90, 0), h=0.01)


def make_system(laminate, a=1.0, b=1.0, nx=5, ny=5, bc="SSSS",
                theta_prime=0.0, substitute_shear=True):
    """Assemble a reduced global system for a uniform mesh."""
    expansion = make_expansion("sinus-w2", laminate.h)
    mesh = build_structured_mesh(a, b, nx, ny)
    system = assemble(mesh, laminate, expansion, theta_prime=theta_prime,
                      substitute_shear=substitute_shear)
    return apply_bc(system, mesh, bc), mesh


@pytest.fixture(scope="session")
def small_cross_ply_system(cross_ply_laminate):
    system, _ = make_system(cross_ply_laminate, nx=6, ny=6, bc="SSSS")
    return system
