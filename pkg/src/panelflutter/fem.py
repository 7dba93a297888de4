"""QUAD-4 element matrices for the expanded plate kinematics.

Element DOF ordering: node-major, 9 DOFs per node in the order
(u0, v0, w0, u1, v1, w1, u2, v2, w2), i.e. local index = 3*tau + component.

Strain vector ordering follows the in-plane/normal partition
(e_xx, e_yy, g_xy, g_xz, g_yz, e_zz).  The transverse-shear rows use
field-redistributed substitute shape functions for the non-derivative
(rotation-like) terms to avoid shear locking.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kinematics import COMPONENTS, TheoryExpansion
from .laminate import Laminate, layer_gauss_points

DOF_PER_NODE = 9
# planar interpolation kinds used in the strain rows
_N, _NX, _NY, _NT1, _NT2 = range(5)


@dataclass(frozen=True)
class Mesh:
    """Structured rectangular grid of 4-node quads, row-major node numbering."""

    a: float
    b: float
    nx: int
    ny: int
    nodes: np.ndarray  # (n_nodes, 2)
    elems: np.ndarray  # (n_elems, 4), ccw

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def n_elems(self) -> int:
        return self.elems.shape[0]

    def elem_coords(self, e: int) -> np.ndarray:
        return self.nodes[self.elems[e]]


def build_structured_mesh(a: float, b: float, nx: int, ny: int) -> Mesh:
    """Uniform nx-by-ny quad grid on [0, a] x [0, b]."""
    if a <= 0 or b <= 0:
        raise ValueError("planform dimensions must be positive")
    if nx < 1 or ny < 1:
        raise ValueError("element counts must be >= 1")
    xs = np.linspace(0.0, a, nx + 1)
    ys = np.linspace(0.0, b, ny + 1)
    X, Y = np.meshgrid(xs, ys, indexing="xy")
    nodes = np.column_stack([X.ravel(), Y.ravel()])
    elems = np.empty((nx * ny, 4), dtype=int)
    e = 0
    for j in range(ny):
        for i in range(nx):
            n00 = j * (nx + 1) + i
            elems[e] = (n00, n00 + 1, n00 + nx + 2, n00 + nx + 1)
            e += 1
    return Mesh(a=a, b=b, nx=nx, ny=ny, nodes=nodes, elems=elems)


def shape_functions(xi: float, eta: float):
    """Bilinear Lagrange shape functions and their (xi, eta) derivatives."""
    N = 0.25 * np.array([(1 - xi) * (1 - eta), (1 + xi) * (1 - eta),
                         (1 + xi) * (1 + eta), (1 - xi) * (1 + eta)])
    dN = 0.25 * np.array([[-(1 - eta), -(1 - xi)],
                          [(1 - eta), -(1 + xi)],
                          [(1 + eta), (1 + xi)],
                          [-(1 + eta), (1 - xi)]])
    return N, dN


def substitute_shape_functions(xi: float, eta: float):
    """Field-redistributed interpolants for the transverse-shear rows."""
    Nt1 = 0.25 * np.array([1 - eta, 1 - eta, 1 + eta, 1 + eta])
    Nt2 = 0.25 * np.array([1 - xi, 1 + xi, 1 + xi, 1 - xi])
    return Nt1, Nt2


def _zfun_id(comp_idx: int, tau: int, deriv: bool) -> int:
    return (9 if deriv else 0) + 3 * comp_idx + tau


def _strain_entries(substitute_shear: bool):
    """Per-DOF strain contributions: (dof, row, z-function id, planar kind)."""
    nt1 = _NT1 if substitute_shear else _N
    nt2 = _NT2 if substitute_shear else _N
    rows_by_comp = {
        0: [(0, False, _NX), (2, False, _NY), (3, True, nt1)],   # u
        1: [(1, False, _NY), (2, False, _NX), (4, True, nt2)],   # v
        2: [(3, False, _NX), (4, False, _NY), (5, True, _N)],    # w
    }
    dof, row, zf, kind, node = [], [], [], [], []
    for I in range(4):
        for tau in range(3):
            for ci in range(3):
                for (r, dz, g) in rows_by_comp[ci]:
                    dof.append(DOF_PER_NODE * I + 3 * tau + ci)
                    row.append(r)
                    zf.append(_zfun_id(ci, tau, dz))
                    kind.append(g)
                    node.append(I)
    return (np.array(dof), np.array(row), np.array(zf),
            np.array(kind), np.array(node))


class ElementKernel:
    """Precomputed thickness-integral tables for a laminate/expansion pair.

    Building the tables costs a few thousand 1D Gauss evaluations and is done
    once; per-element work is then purely in-plane quadrature.
    """

    def __init__(self, laminate: Laminate, expansion: TheoryExpansion,
                 substitute_shear: bool = True):
        if any(expansion.n_terms(c) != 3 for c in COMPONENTS):
            raise ValueError("element kernel expects 3 terms per component")
        self.laminate = laminate
        self.expansion = expansion
        self.substitute_shear = substitute_shear

        zs, ws = layer_gauss_points(laminate)          # (nl, ng)
        F = np.empty(zs.shape + (18,))
        for ci, comp in enumerate(COMPONENTS):
            for tau in range(3):
                F[..., _zfun_id(ci, tau, False)] = expansion.eval_F(comp, tau, zs)
                F[..., _zfun_id(ci, tau, True)] = expansion.eval_dF_dz(comp, tau, zs)
        Cply = laminate.ply_stiffnesses()              # (nl, 6, 6) partition order
        # T[r, s, a, b] = sum_k int C_rs^k f_a f_b dz
        self._T = np.einsum("kg,kga,kgb,krs->rsab", ws, F, F, Cply,
                            optimize=True)
        rho = np.array([p.material.rho for p in laminate.plies])
        self._R = np.einsum("k,kg,kga,kgb->ab", rho, ws, F, F, optimize=True)

        d, r, zf, kind, node = _strain_entries(substitute_shear)
        self._entry_dof, self._entry_kind, self._entry_node = d, kind, node
        self._Tlookup = self._T[r[:, None], r[None, :], zf[:, None], zf[None, :]]

        # mass DOF map: dof index for (component, tau, node)
        self._mass_idx = np.array([[[DOF_PER_NODE * I + 3 * t + ci
                                     for I in range(4)] for t in range(3)]
                                   for ci in range(3)])

    def _geometry(self, coords, xi, eta):
        N, dN = shape_functions(xi, eta)
        J = dN.T @ coords
        detJ = np.linalg.det(J)
        if detJ <= 0.0:
            raise ValueError("degenerate element: non-positive Jacobian")
        dN_dx = dN @ np.linalg.inv(J)
        return N, dN_dx, detJ

    def stiffness(self, coords: np.ndarray, n_gauss: int = 2) -> np.ndarray:
        pts, wts = gauss_grid(n_gauss)
        acc = np.zeros((self._Tlookup.shape[0],) * 2)
        for (xi, eta), wq in zip(pts, wts):
            N, dN_dx, detJ = self._geometry(coords, xi, eta)
            Nt1, Nt2 = substitute_shape_functions(xi, eta)
            gtable = np.stack([N, dN_dx[:, 0], dN_dx[:, 1], Nt1, Nt2])
            g = gtable[self._entry_kind, self._entry_node]
            acc += wq * detJ * np.outer(g, g) * self._Tlookup
        Ke = np.zeros((36, 36))
        np.add.at(Ke, (self._entry_dof[:, None], self._entry_dof[None, :]), acc)
        return Ke

    def mass(self, coords: np.ndarray, n_gauss: int = 2) -> np.ndarray:
        pts, wts = gauss_grid(n_gauss)
        Me = np.zeros((36, 36))
        for (xi, eta), wq in zip(pts, wts):
            N, _, detJ = self._geometry(coords, xi, eta)
            NN = np.outer(N, N)
            for ci in range(3):
                idx = self._mass_idx[ci].ravel()        # (tau, node) flattened
                sub = self._R[np.ix_([_zfun_id(ci, t, False) for t in range(3)],
                                     [_zfun_id(ci, s, False) for s in range(3)])]
                Me[np.ix_(idx, idx)] += wq * detJ * np.kron(sub, NN)
        return Me


def element_stiffness(mesh: Mesh, elem: int, laminate: Laminate,
                      expansion: TheoryExpansion, **kw) -> np.ndarray:
    return ElementKernel(laminate, expansion, **kw).stiffness(mesh.elem_coords(elem))


def element_mass(mesh: Mesh, elem: int, laminate: Laminate,
                 expansion: TheoryExpansion, **kw) -> np.ndarray:
    return ElementKernel(laminate, expansion, **kw).mass(mesh.elem_coords(elem))


def element_aero(mesh: Mesh, elem: int, theta_prime: float,
                 n_gauss: int = 2) -> np.ndarray:
    """Aerodynamic slope matrix on the mid-surface transverse DOFs (w0).

    Integrates N_I (cos(theta') dN_J/dx + sin(theta') dN_J/dy) over the
    element; the dynamic-pressure factor is applied by the caller.
    """
    t = np.radians(theta_prime)
    c, s = np.cos(t), np.sin(t)
    coords = mesh.elem_coords(elem)
    Ae = np.zeros((36, 36))
    w0 = np.array([DOF_PER_NODE * I + 2 for I in range(4)])
    pts, wts = gauss_grid(n_gauss)
    for (xi, eta), wq in zip(pts, wts):
        N, dN = shape_functions(xi, eta)
        J = dN.T @ coords
        detJ = np.linalg.det(J)
        dN_dx = dN @ np.linalg.inv(J)
        slope = c * dN_dx[:, 0] + s * dN_dx[:, 1]
        Ae[np.ix_(w0, w0)] += wq * detJ * np.outer(N, slope)
    return Ae


def gauss_grid(n: int):
    """Tensor-product Gauss rule on the reference square (oracle use)."""
    p, w = np.polynomial.legendre.leggauss(n)
    pts, wts = [], []
    for i, xi in enumerate(p):
        for j, eta in enumerate(p):
            pts.append((xi, eta))
            wts.append(w[i] * w[j])
    return pts, np.array(wts)
