"""Eigen-solvers: free vibration, the unsymmetric flutter pencil and the
damped state-space spectrum, plus modal reduction."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .assembly import GlobalSystem

# above this size the free-vibration solve switches to sparse shift-invert
DENSE_LIMIT = 1200


class SingularSystemError(RuntimeError):
    pass


class ConvergenceError(RuntimeError):
    pass


@dataclass
class ModalBasis:
    """Mass-normalized undamped modes with reduced operators.

    khat is diagonal with the squared frequencies; ahat is the reduction of
    the unit-dynamic-pressure aerodynamic matrix; ghat_unit is the reduction
    of the mass-style matrix restricted to the w0 DOFs (scaled by the caller
    into an actual damping matrix).
    """

    phi: np.ndarray        # (n, m)
    omega: np.ndarray      # (m,) rad/s, ascending
    khat: np.ndarray       # (m, m)
    ahat: np.ndarray       # (m, m)
    ghat_unit: np.ndarray  # (m, m)

    @property
    def m(self) -> int:
        return self.phi.shape[1]


@dataclass
class Spectrum:
    """Eigenvalues of the flutter pencil at one dynamic pressure."""

    lam: float
    eigenvalues: np.ndarray          # complex, sorted by magnitude
    vectors: np.ndarray | None = None

    @property
    def is_complex(self) -> np.ndarray:
        k = self.eigenvalues
        return np.abs(k.imag) > 1e-8 * np.maximum(np.abs(k), 1e-300)


def _reduce_aero(system: GlobalSystem, phi: np.ndarray) -> np.ndarray:
    return phi.T @ (system.A @ phi)


def _reduce_damping(system: GlobalSystem, phi: np.ndarray) -> np.ndarray:
    mask = system.w0_mask.astype(float)
    D = sp.diags(mask)
    Mw = D @ system.M @ D
    return phi.T @ (Mw @ phi)


def free_vibration(system: GlobalSystem, n_modes: int = 20):
    """Lowest undamped frequencies [rad/s] and the associated modal basis."""
    n = system.n
    n_modes = min(n_modes, n)
    try:
        if n <= DENSE_LIMIT:
            K = system.K.toarray()
            M = system.M.toarray()
            w2, phi = sla.eigh(K, M, subset_by_index=(0, n_modes - 1))
        else:
            w2, phi = spla.eigsh(system.K.tocsc(), k=n_modes,
                                 M=system.M.tocsc(), sigma=0.0, which="LM")
            order = np.argsort(w2)
            w2, phi = w2[order], phi[:, order]
    except (np.linalg.LinAlgError, RuntimeError) as exc:
        raise SingularSystemError(f"free-vibration solve failed: {exc}") from exc
    if np.any(w2 <= 0.0):
        raise SingularSystemError("non-positive squared frequency; "
                                  "system is singular or indefinite")
    # enforce exact mass normalization (eigsh returns M-orthonormal modes
    # only to solver tolerance)
    for j in range(phi.shape[1]):
        phi[:, j] /= np.sqrt(phi[:, j] @ (system.M @ phi[:, j]))
    omega = np.sqrt(w2)
    basis = ModalBasis(
        phi=phi, omega=omega,
        khat=phi.T @ (system.K @ phi),
        ahat=_reduce_aero(system, phi),
        ghat_unit=_reduce_damping(system, phi),
    )
    return omega, basis


def flutter_spectrum(system: GlobalSystem, lam: float,
                     with_vectors: bool = False) -> Spectrum:
    """Dense eigensolution of (K + lam*A) x = kappa M x."""
    if lam < 0.0:
        raise ValueError("dynamic-pressure parameter must be >= 0")
    P = (system.K + lam * system.A).toarray()
    M = system.M.toarray()
    try:
        if with_vectors:
            kappa, vecs = sla.eig(P, M, right=True)
        else:
            kappa = sla.eigvals(P, M)
            vecs = None
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"flutter eigensolve failed at lam={lam}") from exc
    order = np.argsort(np.abs(kappa))
    kappa = kappa[order]
    if vecs is not None:
        vecs = vecs[:, order]
    return Spectrum(lam=lam, eigenvalues=kappa, vectors=vecs)


def reduced_flutter_spectrum(basis: ModalBasis, lam: float,
                             with_vectors: bool = False) -> Spectrum:
    """Flutter pencil projected on the modal basis (mhat = identity)."""
    P = basis.khat + lam * basis.ahat
    if with_vectors:
        kappa, vecs = sla.eig(P, right=True)
    else:
        kappa = sla.eigvals(P)
        vecs = None
    order = np.argsort(np.abs(kappa))
    kappa = kappa[order]
    if vecs is not None:
        vecs = vecs[:, order]
    return Spectrum(lam=lam, eigenvalues=kappa, vectors=vecs)


def damped_spectrum(basis: ModalBasis, lam: float, g_a: float,
                    rho_h: float):
    """State-space eigenvalues of q'' + ghat q' + (khat + lam ahat) q = 0.

    Returns (omega, s): the frequencies omega = s / i and the raw state
    eigenvalues s; flutter onset is the first zero crossing of max Re(s).
    """
    if g_a < 0.0:
        raise ValueError("aerodynamic damping coefficient must be >= 0")
    m = basis.m
    ghat = (g_a / rho_h) * basis.ghat_unit
    S = np.zeros((2 * m, 2 * m))
    S[:m, m:] = np.eye(m)
    S[m:, :m] = -(basis.khat + lam * basis.ahat)
    S[m:, m:] = -ghat
    s = sla.eigvals(S)
    omega = s / 1j
    order = np.argsort(np.abs(omega))
    return omega[order], s[order]
