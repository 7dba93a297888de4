"""Global assembly and boundary-condition tests."""

import numpy as np
import pytest
import scipy.linalg as sla

from panelflutter.assembly import (UnknownBoundaryError, apply_bc, assemble,
                                   assemble_aero, constrained_dofs)
from panelflutter.fem import (DOF_PER_NODE, ElementKernel,
                              build_structured_mesh)
from panelflutter.kinematics import make_expansion

from conftest import make_system


@pytest.fixture(scope="module")
def expansion(angle_ply_laminate):
    return make_expansion("sinus-w2", angle_ply_laminate.h)


def test_single_element_assembly_equals_element(angle_ply_laminate, expansion):
    mesh = build_structured_mesh(0.3, 0.2, 1, 1)
    system = assemble(mesh, angle_ply_laminate, expansion)
    kernel = ElementKernel(angle_ply_laminate, expansion)
    g = (DOF_PER_NODE * mesh.elems[0][:, None]
         + np.arange(DOF_PER_NODE)[None, :]).ravel()
    K = system.K.toarray()[np.ix_(g, g)]
    M = system.M.toarray()[np.ix_(g, g)]
    assert np.allclose(K, kernel.stiffness(mesh.elem_coords(0)), rtol=1e-14)
    assert np.allclose(M, kernel.mass(mesh.elem_coords(0)), rtol=1e-14)


def test_assembly_matches_manual_scatter(angle_ply_laminate, expansion):
    """Hand scatter-add over a 2x2 mesh reproduces the cached assembly."""
    mesh = build_structured_mesh(1.0, 0.7, 2, 2)
    system = assemble(mesh, angle_ply_laminate, expansion)
    kernel = ElementKernel(angle_ply_laminate, expansion)
    n = DOF_PER_NODE * mesh.n_nodes
    K = np.zeros((n, n))
    for e in range(mesh.n_elems):
        Ke = kernel.stiffness(mesh.elem_coords(e))
        g = (DOF_PER_NODE * mesh.elems[e][:, None]
             + np.arange(DOF_PER_NODE)[None, :]).ravel()
        K[np.ix_(g, g)] += Ke
    assert np.allclose(system.K.toarray(), K, rtol=1e-12,
                       atol=1e-12 * np.abs(K).max())


def test_assembly_is_deterministic(angle_ply_laminate, expansion):
    mesh = build_structured_mesh(1.0, 1.0, 3, 3)
    s1 = assemble(mesh, angle_ply_laminate, expansion)
    s2 = assemble(mesh, angle_ply_laminate, expansion)
    assert (s1.K != s2.K).nnz == 0
    assert (s1.M != s2.M).nnz == 0


def test_clamped_dof_count():
    mesh = build_structured_mesh(1.0, 1.0, 5, 5)
    fixed = constrained_dofs(mesh, "CCCC")
    # 16 interior nodes keep all 9 DOFs each
    assert DOF_PER_NODE * mesh.n_nodes - len(fixed) == 144


def test_simply_supported_dof_count():
    # hard simple support: 6 DOFs per edge node, all 9 at the corners
    mesh = build_structured_mesh(1.0, 1.0, 5, 5)
    fixed = constrained_dofs(mesh, "SSSS")
    want = 4 * 9 + 2 * 4 * 6 + 2 * 4 * 6
    assert len(fixed) == want


def test_unknown_bc_rejected(angle_ply_laminate, expansion):
    mesh = build_structured_mesh(1.0, 1.0, 2, 2)
    with pytest.raises(UnknownBoundaryError):
        constrained_dofs(mesh, "FREE")
    system = assemble(mesh, angle_ply_laminate, expansion)
    with pytest.raises(UnknownBoundaryError):
        apply_bc(system, mesh, "XYZ")


def test_reduced_system_is_definite(cross_ply_laminate):
    system, _ = make_system(cross_ply_laminate, nx=4, ny=4, bc="CCCC")
    sla.cholesky(system.K.toarray())      # raises if not SPD
    sla.cholesky(system.M.toarray())
    K = system.K.toarray()
    assert np.allclose(K, K.T, rtol=1e-10)


def test_w0_mask_tracks_reduction(cross_ply_laminate):
    system, mesh = make_system(cross_ply_laminate, nx=5, ny=5, bc="CCCC")
    # only the 16 interior nodes survive, each with one w0
    assert system.n == 144
    assert int(system.w0_mask.sum()) == 16


def test_unconstrained_stiffness_has_rigid_modes(angle_ply_laminate,
                                                 expansion):
    system = assemble(build_structured_mesh(0.5, 0.5, 2, 2),
                      angle_ply_laminate, expansion)
    eig = sla.eigvalsh(system.K.toarray())
    assert np.sum(np.abs(eig) < 1e-12 * eig.max()) >= 3


def test_global_mass_conservation(angle_ply_laminate, expansion):
    mesh = build_structured_mesh(1.3, 0.9, 4, 3)
    system = assemble(mesh, angle_ply_laminate, expansion)
    v = np.zeros(system.n)
    v[1::DOF_PER_NODE] = 1.0          # rigid v translation
    m_tot = v @ (system.M @ v)
    assert np.isclose(m_tot, angle_ply_laminate.areal_density * 1.3 * 0.9,
                      rtol=1e-10)


# ---------------------------------------------------------------------------
# aerodynamic assembly
# ---------------------------------------------------------------------------

def _w0_field(mesh, values):
    v = np.zeros(DOF_PER_NODE * mesh.n_nodes)
    v[2::DOF_PER_NODE] = values
    return v


def test_aero_patch_integral_streamwise():
    """v^T (A + A^T) v with w = x integrates d(w^2)/dx to the edge value."""
    a, b = 1.4, 0.8
    mesh = build_structured_mesh(a, b, 2, 1)
    A = assemble_aero(mesh, 0.0)
    v = _w0_field(mesh, mesh.nodes[:, 0])
    assert np.isclose(v @ ((A + A.T) @ v), a ** 2 * b, rtol=1e-12)


def test_aero_flow_angle_rotates_derivative():
    a, b = 1.4, 0.8
    mesh = build_structured_mesh(a, b, 2, 2)
    A90 = assemble_aero(mesh, 90.0)
    v = _w0_field(mesh, mesh.nodes[:, 1])
    assert np.isclose(v @ ((A90 + A90.T) @ v), a * b ** 2, rtol=1e-12)
    # at 90 deg a pure x-ramp produces no slope along the flow
    u = _w0_field(mesh, mesh.nodes[:, 0])
    assert np.allclose(A90 @ u, 0.0, atol=1e-12)


def test_aero_unsymmetric_after_reduction(cross_ply_laminate):
    system, _ = make_system(cross_ply_laminate, nx=4, ny=4, bc="SSSS")
    A = system.A.toarray()
    assert np.abs(A - A.T).max() > 1e-3 * np.abs(A).max()
