"""Eigen-solver tests: free vibration, the flutter pencil, modal reduction,
and the damped state-space spectrum."""

import numpy as np
import pytest

from panelflutter.eigen import (damped_spectrum, flutter_spectrum,
                                free_vibration, reduced_flutter_spectrum)
from panelflutter.laminate import Laminate

from conftest import make_system


@pytest.fixture(scope="module")
def solved(small_cross_ply_system):
    omega, basis = free_vibration(small_cross_ply_system, n_modes=12)
    return small_cross_ply_system, omega, basis


def test_frequencies_sorted_positive(solved):
    _, omega, _ = solved
    assert np.all(omega > 0.0)
    assert np.all(np.diff(omega) >= 0.0)


def test_modes_mass_orthonormal(solved):
    system, _, basis = solved
    G = basis.phi.T @ (system.M @ basis.phi)
    assert np.allclose(G, np.eye(basis.m), atol=1e-8)


def test_reduced_stiffness_is_spectrum(solved):
    _, omega, basis = solved
    assert np.allclose(np.diag(basis.khat), omega ** 2, rtol=1e-8)
    off = basis.khat - np.diag(np.diag(basis.khat))
    assert np.abs(off).max() < 1e-6 * basis.khat.max()


def test_zero_pressure_pencil_equals_free_vibration(solved):
    system, omega, _ = solved
    sp = flutter_spectrum(system, 0.0)
    k = sp.eigenvalues[:len(omega)]
    assert np.abs(k.imag).max() < 1e-10 * np.abs(k).max()
    assert np.allclose(np.sqrt(k.real), omega, rtol=1e-8)


def test_kirchhoff_plate_frequencies(iso_material):
    """Isotropic SSSS thin plate against the Navier closed form."""
    h = 0.002
    lam = Laminate.from_angles(iso_material, (0.0,), h)
    system, _ = make_system(lam, a=1.0, b=1.0, nx=16, ny=16, bc="SSSS")
    omega, _ = free_vibration(system, n_modes=4)
    D = iso_material.E_L * h ** 3 / (12 * (1 - iso_material.nu_LT ** 2))
    scale = np.pi ** 2 * np.sqrt(D / (iso_material.rho * h))
    want = scale * np.array([2.0, 5.0, 5.0, 8.0])   # m^2 + n^2
    assert np.allclose(omega, want, rtol=0.025)


def test_small_pressure_perturbation(solved):
    """First-order eigenvalue shift equals the diagonal of the reduced
    aerodynamic matrix."""
    _, omega, basis = solved
    gap = np.min(np.abs(np.diff(omega ** 2)))
    scale = max(np.abs(basis.ahat).max(), 1e-300)
    lam = 1e-4 * gap / scale
    k = reduced_flutter_spectrum(basis, lam).eigenvalues
    k = np.sort(k.real)[:4]
    want = np.sort(omega ** 2 + lam * np.diag(basis.ahat))[:4]
    shift_err = np.abs((k - np.sort(omega ** 2)[:4]) -
                       (want - np.sort(omega ** 2)[:4]))
    assert shift_err.max() < 1e-2 * lam * scale + 1e-9 * omega[0] ** 2


def test_conjugate_pairs_beyond_coalescence(solved):
    system, _, basis = solved
    # march the pressure up until the head of the spectrum goes complex
    scale = basis.khat.max() / max(np.abs(basis.ahat).max(), 1e-300)
    for lam in np.linspace(0.0, scale, 40):
        sp = flutter_spectrum(system, lam)
        head = sp.eigenvalues[:8]
        if np.any(np.abs(head.imag) > 1e-8 * np.abs(head)):
            cplx = head[np.abs(head.imag) > 1e-8 * np.abs(head)]
            for k in cplx:
                match = np.min(np.abs(head - np.conj(k)))
                assert match < 1e-6 * np.abs(k)
            return
    pytest.skip("no coalescence reached in the scanned pressure range")


def test_modal_reduction_tracks_dense(solved):
    system, _, basis = solved
    # stay below coalescence so both spectra are real and orderable
    lam = 0.05 * basis.khat.max() / max(np.abs(basis.ahat).max(), 1e-300)
    dense = flutter_spectrum(system, lam).eigenvalues[:4]
    red = reduced_flutter_spectrum(basis, lam).eigenvalues[:4]
    assert np.allclose(np.abs(red), np.abs(dense), rtol=5e-3)


def test_damped_spectrum_zero_damping_limit(solved):
    _, omega, basis = solved
    lam = 0.0
    w, s = damped_spectrum(basis, lam, g_a=0.0, rho_h=1.0)
    assert np.abs(s.real).max() < 1e-8 * np.abs(s).max()
    got = np.sort(np.abs(s.imag))
    want = np.sort(np.concatenate([omega, omega]))
    assert np.allclose(got, want, rtol=1e-8)


def test_damping_moves_poles_left(solved):
    # any positive damping at zero pressure must be stabilizing
    _, _, basis = solved
    _, s = damped_spectrum(basis, 0.0, g_a=1.0, rho_h=1.0)
    assert s.real.max() < 1e-8 * np.abs(s).max()
