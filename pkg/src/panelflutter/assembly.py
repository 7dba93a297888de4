"""Global assembly of stiffness, mass and aerodynamic matrices with BC handling.

Global DOF numbering is node-major: dof = 9*node + local, with local order
(u0, v0, w0, u1, v1, w1, u2, v2, w2).  Boundary conditions are applied by
row/column deletion, which keeps the mass matrix positive definite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .fem import DOF_PER_NODE, ElementKernel, Mesh
from .kinematics import TheoryExpansion
from .laminate import Laminate

# local DOF indices fixed on each kind of simply-supported edge (hard SSSS):
# on x = const edges the tangential in-plane terms (v*) and all w* are fixed,
# on y = const edges the u* terms and all w* are fixed.
_SS_X_EDGE = (1, 2, 4, 5, 7, 8)
_SS_Y_EDGE = (0, 2, 3, 5, 6, 8)


class UnknownBoundaryError(ValueError):
    pass


@dataclass(frozen=True)
class DofMap:
    """Free/constrained partition of the node-major global numbering."""

    n_dofs: int
    free: np.ndarray          # global indices of free DOFs, ascending
    constrained: np.ndarray   # global indices of fixed DOFs, ascending

    def __post_init__(self):
        if len(self.free) + len(self.constrained) != self.n_dofs:
            raise ValueError("free/constrained sets must partition the DOFs")

    @property
    def n_free(self) -> int:
        return len(self.free)

    def full_to_free(self) -> np.ndarray:
        m = np.full(self.n_dofs, -1, dtype=int)
        m[self.free] = np.arange(len(self.free))
        return m


@dataclass
class GlobalSystem:
    """Assembled sparse matrices plus the w0-DOF mask (for aero damping)."""

    K: sp.csr_matrix
    M: sp.csr_matrix
    A: sp.csr_matrix
    w0_mask: np.ndarray
    dofmap: DofMap | None = None

    @property
    def n(self) -> int:
        return self.K.shape[0]


def _scatter(triplet_rows, triplet_cols, triplet_vals, n):
    mat = sp.coo_matrix((np.concatenate(triplet_vals),
                         (np.concatenate(triplet_rows),
                          np.concatenate(triplet_cols))), shape=(n, n))
    return mat.tocsr()


def _shape_key(coords: np.ndarray) -> bytes:
    """Translation-invariant element-geometry key for matrix reuse."""
    rel = coords - coords[0]
    return np.round(rel, 12).tobytes()


def assemble_aero(mesh: Mesh, theta_prime: float) -> sp.csr_matrix:
    """Assemble only the aerodynamic slope matrix (cheap to redo per angle)."""
    from .fem import element_aero
    n = DOF_PER_NODE * mesh.n_nodes
    rows, cols, vals = [], [], []
    cache: dict[bytes, np.ndarray] = {}
    for e in range(mesh.n_elems):
        key = _shape_key(mesh.elem_coords(e))
        if key not in cache:
            cache[key] = element_aero(mesh, e, theta_prime)
        Ae = cache[key]
        gdofs = (DOF_PER_NODE * mesh.elems[e][:, None]
                 + np.arange(DOF_PER_NODE)[None, :]).ravel()
        rows.append(np.repeat(gdofs, 36))
        cols.append(np.tile(gdofs, 36))
        vals.append(Ae.ravel())
    return _scatter(rows, cols, vals, n)


def assemble(mesh: Mesh, laminate: Laminate, expansion: TheoryExpansion,
             theta_prime: float = 0.0,
             substitute_shear: bool = True) -> GlobalSystem:
    """Scatter-add element K, M, A into global sparse matrices (pre-BC)."""
    kernel = ElementKernel(laminate, expansion, substitute_shear=substitute_shear)
    n = DOF_PER_NODE * mesh.n_nodes
    krows, kcols, kvals = [], [], []
    mvals = []
    cache: dict[bytes, tuple[np.ndarray, np.ndarray]] = {}
    for e in range(mesh.n_elems):
        coords = mesh.elem_coords(e)
        key = _shape_key(coords)
        if key not in cache:
            cache[key] = (kernel.stiffness(coords), kernel.mass(coords))
        Ke, Me = cache[key]
        gdofs = (DOF_PER_NODE * mesh.elems[e][:, None]
                 + np.arange(DOF_PER_NODE)[None, :]).ravel()
        krows.append(np.repeat(gdofs, 36))
        kcols.append(np.tile(gdofs, 36))
        kvals.append(Ke.ravel())
        mvals.append(Me.ravel())
    K = _scatter(krows, kcols, kvals, n)
    M = _scatter(krows, kcols, mvals, n)
    A = assemble_aero(mesh, theta_prime)
    w0_mask = np.zeros(n, dtype=bool)
    w0_mask[2::DOF_PER_NODE] = True
    return GlobalSystem(K=K, M=M, A=A, w0_mask=w0_mask)


def constrained_dofs(mesh: Mesh, bc: str) -> np.ndarray:
    """Global DOF indices fixed by the named boundary condition."""
    bc = bc.upper()
    xs, ys = mesh.nodes[:, 0], mesh.nodes[:, 1]
    tol = 1e-9 * max(mesh.a, mesh.b)
    on_x = (np.abs(xs) < tol) | (np.abs(xs - mesh.a) < tol)
    on_y = (np.abs(ys) < tol) | (np.abs(ys - mesh.b) < tol)
    fixed: set[int] = set()
    if bc == "CCCC":
        for node in np.flatnonzero(on_x | on_y):
            fixed.update(DOF_PER_NODE * node + k for k in range(DOF_PER_NODE))
    elif bc == "SSSS":
        for node in np.flatnonzero(on_x):
            fixed.update(DOF_PER_NODE * node + k for k in _SS_X_EDGE)
        for node in np.flatnonzero(on_y):
            fixed.update(DOF_PER_NODE * node + k for k in _SS_Y_EDGE)
    else:
        raise UnknownBoundaryError(f"unknown boundary condition {bc!r}")
    return np.array(sorted(fixed), dtype=int)


def apply_bc(system: GlobalSystem, mesh: Mesh, bc: str) -> GlobalSystem:
    """Delete constrained rows/columns; returns the reduced system with its
    DofMap attached."""
    n = system.n
    fixed = constrained_dofs(mesh, bc)
    free = np.setdiff1d(np.arange(n), fixed)
    dofmap = DofMap(n_dofs=n, free=free, constrained=fixed)
    return GlobalSystem(
        K=system.K[free][:, free].tocsr(),
        M=system.M[free][:, free].tocsr(),
        A=system.A[free][:, free].tocsr(),
        w0_mask=system.w0_mask[free],
        dofmap=dofmap,
    )
