"""Orthotropic ply materials, rotated 3D stiffness and through-thickness integration.

The 6x6 stiffness is handled in two index orderings:

* "Voigt" order  (xx, yy, zz, yz, xz, xy) -- used for building/inverting the
  compliance and for the rotation about z.
* "partition" order (xx, yy, xy | xz, yz, zz) -- the in-plane / normal split
  used by the plate formulation.  ``ConstitutivePartition`` stores the four
  3x3 blocks of the stiffness in this order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# permutation taking Voigt order (xx,yy,zz,yz,xz,xy) to (xx,yy,xy,xz,yz,zz)
VOIGT_TO_PARTITION = (0, 1, 5, 4, 3, 2)

_GAUSS_PTS, _GAUSS_WTS = np.polynomial.legendre.leggauss(6)


class InvalidMaterialError(ValueError):
    """Engineering constants do not define a positive definite compliance."""


@dataclass(frozen=True)
class OrthotropicMaterial:
    """3D orthotropic material given by nine engineering constants and density.

    L is the fiber direction, T the in-plane transverse direction and z the
    thickness direction.  All moduli in Pa, density in kg/m^3.
    """

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

    def __post_init__(self):
        for name in ("E_L", "E_T", "E_z", "G_LT", "G_Lz", "G_Tz", "rho"):
            if getattr(self, name) <= 0.0:
                raise InvalidMaterialError(f"{name} must be positive")
        S = self.compliance()
        try:
            np.linalg.cholesky(S)
        except np.linalg.LinAlgError as exc:
            raise InvalidMaterialError(
                "compliance matrix is not positive definite"
            ) from exc

    @classmethod
    def transversely_isotropic(cls, E_L, E_T, G_LT, G_Tz, nu_LT, rho,
                               **overrides):
        """Fill the out-of-plane constants by transverse isotropy about L."""
        kwargs = dict(E_L=E_L, E_T=E_T, E_z=E_T, G_LT=G_LT, G_Lz=G_LT,
                      G_Tz=G_Tz, nu_LT=nu_LT, nu_Lz=nu_LT, nu_Tz=nu_LT,
                      rho=rho)
        kwargs.update(overrides)
        return cls(**kwargs)

    @classmethod
    def isotropic(cls, E, nu, rho):
        G = E / (2.0 * (1.0 + nu))
        return cls(E_L=E, E_T=E, E_z=E, G_LT=G, G_Lz=G, G_Tz=G,
                   nu_LT=nu, nu_Lz=nu, nu_Tz=nu, rho=rho)

    def compliance(self) -> np.ndarray:
        """6x6 compliance in Voigt order (xx,yy,zz,yz,xz,xy), material axes."""
        S = np.zeros((6, 6))
        S[0, 0] = 1.0 / self.E_L
        S[1, 1] = 1.0 / self.E_T
        S[2, 2] = 1.0 / self.E_z
        S[0, 1] = S[1, 0] = -self.nu_LT / self.E_L
        S[0, 2] = S[2, 0] = -self.nu_Lz / self.E_L
        S[1, 2] = S[2, 1] = -self.nu_Tz / self.E_T
        S[3, 3] = 1.0 / self.G_Tz
        S[4, 4] = 1.0 / self.G_Lz
        S[5, 5] = 1.0 / self.G_LT
        return S


def build_3d_stiffness(material: OrthotropicMaterial) -> np.ndarray:
    """6x6 stiffness in Voigt order, material axes (inverse of compliance)."""
    return np.linalg.inv(material.compliance())


def rotation_matrix_z(angle_deg: float) -> np.ndarray:
    """Bond stress-transformation matrix for a rotation about z (Voigt order)."""
    t = np.radians(angle_deg)
    c, s = np.cos(t), np.sin(t)
    return np.array([
        [c * c, s * s, 0.0, 0.0, 0.0, -2.0 * c * s],
        [s * s, c * c, 0.0, 0.0, 0.0, 2.0 * c * s],
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, c, s, 0.0],
        [0.0, 0.0, 0.0, -s, c, 0.0],
        [c * s, -c * s, 0.0, 0.0, 0.0, c * c - s * s],
    ])


def rotate_stiffness(C_voigt: np.ndarray, angle_deg: float) -> np.ndarray:
    """Rotate a 6x6 Voigt stiffness from ply axes at ``angle_deg`` (ccw from x)
    into laminate axes."""
    M = rotation_matrix_z(angle_deg)
    return M @ C_voigt @ M.T


@dataclass(frozen=True)
class ConstitutivePartition:
    """Rotated stiffness split into in-plane (xx,yy,xy) / normal (xz,yz,zz)
    blocks, laminate axes."""

    C_pp: np.ndarray
    C_pn: np.ndarray
    C_np: np.ndarray
    C_nn: np.ndarray

    def full(self) -> np.ndarray:
        """Assembled 6x6 in partition order (xx,yy,xy,xz,yz,zz)."""
        top = np.hstack([self.C_pp, self.C_pn])
        bot = np.hstack([self.C_np, self.C_nn])
        return np.vstack([top, bot])


def to_partition_order(C_voigt: np.ndarray) -> np.ndarray:
    p = list(VOIGT_TO_PARTITION)
    return C_voigt[np.ix_(p, p)]


def rotate_partition(C_voigt: np.ndarray, angle_deg: float) -> ConstitutivePartition:
    """Rotate a material-axes Voigt stiffness by the ply angle and partition it."""
    Cr = to_partition_order(rotate_stiffness(C_voigt, angle_deg))
    return ConstitutivePartition(
        C_pp=Cr[:3, :3].copy(), C_pn=Cr[:3, 3:].copy(),
        C_np=Cr[3:, :3].copy(), C_nn=Cr[3:, 3:].copy(),
    )


@dataclass(frozen=True)
class Ply:
    material: OrthotropicMaterial
    angle: float          # fiber orientation, deg ccw from x
    thickness: float      # m

    def __post_init__(self):
        if self.thickness <= 0.0:
            raise ValueError("ply thickness must be positive")
        if not np.isfinite(self.angle):
            raise ValueError("ply angle must be finite")


@dataclass(frozen=True)
class Laminate:
    """Bottom-to-top stack of plies with the mid-plane at z = 0."""

    plies: tuple[Ply, ...]
    h: float = field(init=False)
    z_interfaces: np.ndarray = field(init=False)

    def __post_init__(self):
        if not self.plies:
            raise ValueError("laminate needs at least one ply")
        h = sum(p.thickness for p in self.plies)
        z = np.concatenate([[-h / 2.0],
                            -h / 2.0 + np.cumsum([p.thickness for p in self.plies])])
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "z_interfaces", z)

    @classmethod
    def from_angles(cls, material, angles, h):
        """Equal-thickness single-material stack with total thickness h."""
        t = h / len(angles)
        return cls(tuple(Ply(material, a, t) for a in angles))

    @property
    def areal_density(self) -> float:
        """Mass per unit planform area, sum of rho_k * t_k."""
        return sum(p.material.rho * p.thickness for p in self.plies)

    def ply_stiffnesses(self) -> np.ndarray:
        """(n_plies, 6, 6) rotated stiffness per ply, partition order."""
        return np.array([
            rotate_partition(build_3d_stiffness(p.material), p.angle).full()
            for p in self.plies
        ])


def layer_gauss_points(laminate: Laminate):
    """Per-layer 6-point Gauss abscissae/weights: (n_plies, 6) z and w arrays."""
    z0 = laminate.z_interfaces[:-1]
    z1 = laminate.z_interfaces[1:]
    mid = 0.5 * (z0 + z1)[:, None]
    half = 0.5 * (z1 - z0)[:, None]
    zs = mid + half * _GAUSS_PTS[None, :]
    ws = half * _GAUSS_WTS[None, :]
    return zs, ws


def thickness_integral(laminate: Laminate, expansion, tau, s,
                       dtau: int = 0, ds: int = 0, cij=None) -> float:
    """Sum over layers of int C_ij^k(z) F_tau^(dtau)(z) F_s^(ds)(z) dz.

    ``tau`` and ``s`` are (component, index) pairs, e.g. ("u", 2).  ``cij``
    selects an entry (i, j) of the rotated stiffness in partition order; None
    integrates with unit weight.
    """
    ctau, itau = tau
    cs, is_ = s
    zs, ws = layer_gauss_points(laminate)
    if cij is None:
        weights = np.ones(len(laminate.plies))
    else:
        weights = laminate.ply_stiffnesses()[:, cij[0], cij[1]]
    f_tau = expansion.eval_dF_dz if dtau else expansion.eval_F
    f_s = expansion.eval_dF_dz if ds else expansion.eval_F
    vals = f_tau(ctau, itau, zs) * f_s(cs, is_, zs)
    return float(np.sum(weights[:, None] * ws * vals))
