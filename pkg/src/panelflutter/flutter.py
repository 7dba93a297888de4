"""Flutter-boundary tracking: dynamic-pressure sweep, coalescence detection,
bisection refinement, nondimensionalization and parametric studies."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg as sla

from .assembly import GlobalSystem
from .eigen import (ModalBasis, damped_spectrum, flutter_spectrum,
                    reduced_flutter_spectrum)
from .laminate import Laminate

_COMPLEX_TOL = 1e-8


@dataclass(frozen=True)
class NonDim:
    """Reference-rigidity based scaling of dynamic pressure and frequency.

    The reference modulus is the fiber-direction modulus of the designated
    (first) ply, which reproduces the published flutter normalizations for
    single-material cross-ply stacks.
    """

    a: float
    h: float
    D: float
    rho_h: float      # areal density
    rho_ref: float    # reference ply volume density
    E_ref: float      # reference modulus used in D
    E_T_ref: float    # transverse modulus (frequency-table scaling)

    @classmethod
    def from_laminate(cls, laminate: Laminate, a: float) -> "NonDim":
        ref = laminate.plies[0].material
        h = laminate.h
        D = ref.E_L * h ** 3 / (12.0 * (1.0 - ref.nu_LT ** 2))
        return cls(a=a, h=h, D=D, rho_h=laminate.areal_density,
                   rho_ref=ref.rho, E_ref=ref.E_L, E_T_ref=ref.E_T)

    def lambda_star(self, lam: float) -> float:
        return lam * self.a ** 3 / self.D

    def lambda_dim(self, lambda_star: float) -> float:
        return lambda_star * self.D / self.a ** 3

    def omega_star(self, omega: float) -> float:
        return omega * self.a ** 2 * np.sqrt(self.rho_h / self.D)

    def omega_dim(self, omega_star: float) -> float:
        return omega_star / (self.a ** 2 * np.sqrt(self.rho_h / self.D))

    def frequency_parameter(self, omega) -> float:
        """omega a^2/(pi^2 h) sqrt(rho/E_T), the frequency-table scaling."""
        return (omega * self.a ** 2 / (np.pi ** 2 * self.h)
                * np.sqrt(self.rho_ref / self.E_T_ref))


def aerodynamic_damping_coefficient(lam: float, mach: float, mass_ratio: float,
                                    rho_h: float, a: float) -> float:
    """Piston-theory velocity-term coefficient g_a for a dimensional lam.

    The airspeed is recovered from lam through the air-panel mass ratio
    mu = rho_a a / (rho h); g_a = lam (M^2 - 2) / ((M^2 - 1) U_a).
    """
    if lam <= 0.0:
        return 0.0
    rho_a = mass_ratio * rho_h / a
    U_a = np.sqrt(lam * np.sqrt(mach ** 2 - 1.0) / rho_a)
    return lam * (mach ** 2 - 2.0) / ((mach ** 2 - 1.0) * U_a)


@dataclass
class FlutterResult:
    found: bool
    lambda_cr: float = np.nan
    omega_cr: float = np.nan
    lambda_star_cr: float = np.nan
    omega_star_cr: float = np.nan
    mode_pair: tuple[int, int] = (0, 0)
    damped: bool = False
    g_tau: float = 0.0
    trace: list = field(default_factory=list)
    message: str = ""


def _head(kappa: np.ndarray, n_track: int) -> np.ndarray:
    return kappa[np.argsort(np.abs(kappa))][:n_track]


def _has_complex_pair(kappa: np.ndarray) -> bool:
    return bool(np.any(np.abs(kappa.imag) > _COMPLEX_TOL * np.abs(kappa)))


def _spectrum_fn(source, nondim: NonDim, n_track: int):
    """Head of the flutter spectrum as a function of lambda_star."""
    if isinstance(source, ModalBasis):
        def fn(lambda_star):
            sp = reduced_flutter_spectrum(source, nondim.lambda_dim(lambda_star))
            return _head(sp.eigenvalues, n_track)
    elif isinstance(source, GlobalSystem):
        def fn(lambda_star):
            sp = flutter_spectrum(source, nondim.lambda_dim(lambda_star))
            return _head(sp.eigenvalues, n_track)
    else:
        raise TypeError("source must be a GlobalSystem or ModalBasis")
    return fn


def _bisect(predicate, lo, hi, tol_rel, max_iter=200):
    """Shrink [lo, hi] with predicate False at lo and True at hi."""
    for _ in range(max_iter):
        if (hi - lo) <= tol_rel * hi:
            break
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def find_flutter_undamped(source, nondim: NonDim,
                          lambda_star_range=(1.0, 2000.0),
                          coarse_steps: int = 50,
                          tol_rel: float = 1e-4,
                          n_track: int = 6) -> FlutterResult:
    """Locate the first eigenvalue coalescence of the undamped flutter pencil.

    ``source`` is either the reduced GlobalSystem (dense pencil solves) or a
    ModalBasis (projected solves).  The coarse sweep brackets the first
    lambda* at which a tracked pair turns complex; bisection refines it.
    """
    lo, hi = lambda_star_range
    if not (0.0 <= lo < hi):
        raise ValueError("lambda_star_range must be positive and increasing")
    if coarse_steps < 10:
        raise ValueError("coarse_steps must be >= 10")
    spectrum = _spectrum_fn(source, nondim, n_track)

    trace = []
    grid = np.linspace(lo, hi, coarse_steps + 1)
    bracket = None
    for i, ls in enumerate(grid):
        kappa = spectrum(ls)
        trace.append((float(ls), kappa.copy()))
        if _has_complex_pair(kappa):
            if i == 0:
                raise ValueError("spectrum already complex at the lower "
                                 "bound of lambda_star_range")
            bracket = (float(grid[i - 1]), float(ls))
            break
    if bracket is None:
        return FlutterResult(found=False, trace=trace,
                             message="no coalescence in range")

    blo, bhi = _bisect(lambda ls: _has_complex_pair(spectrum(ls)),
                       bracket[0], bracket[1], tol_rel)
    # mode pair: the two closest real branches just below the boundary
    k_lo = np.sort(spectrum(blo).real)
    gaps = np.diff(k_lo)
    i = int(np.argmin(gaps))
    mode_pair = (i + 1, i + 2)
    # coalescence frequency from the complex side
    k_hi = spectrum(bhi)
    pair = k_hi[np.abs(k_hi.imag) > _COMPLEX_TOL * np.abs(k_hi)]
    omega_cr = float(np.sqrt(np.min(pair.real)))
    lambda_star_cr = 0.5 * (blo + bhi)
    return FlutterResult(
        found=True,
        lambda_cr=nondim.lambda_dim(lambda_star_cr),
        omega_cr=omega_cr,
        lambda_star_cr=lambda_star_cr,
        omega_star_cr=nondim.omega_star(omega_cr),
        mode_pair=mode_pair,
        damped=False,
        trace=trace,
    )


def find_flutter_damped(basis: ModalBasis, nondim: NonDim,
                        lambda_star_range=(1.0, 2000.0),
                        coarse_steps: int = 50,
                        tol_rel: float = 1e-4,
                        mach: float = 2.0,
                        mass_ratio: float = 0.1) -> FlutterResult:
    """Locate the dynamic pressure where the maximum modal growth rate
    crosses zero, including the piston-theory velocity (damping) term."""
    lo, hi = lambda_star_range
    if not (0.0 <= lo < hi):
        raise ValueError("lambda_star_range must be positive and increasing")
    if coarse_steps < 10:
        raise ValueError("coarse_steps must be >= 10")
    if mach <= 1.0:
        raise ValueError("piston theory requires supersonic Mach number")

    def state_eigs(lambda_star):
        lam = nondim.lambda_dim(lambda_star)
        g_a = aerodynamic_damping_coefficient(lam, mach, mass_ratio,
                                              nondim.rho_h, nondim.a)
        return damped_spectrum(basis, lam, g_a, nondim.rho_h)

    def growth(lambda_star):
        _, s = state_eigs(lambda_star)
        # ignore roundoff-level positive real parts of stable pole pairs
        tol = 1e-9 * float(np.abs(s).max())
        g = float(np.max(s.real))
        return g if abs(g) > tol else 0.0

    trace = []
    grid = np.linspace(lo, hi, coarse_steps + 1)
    bracket = None
    prev = None
    for i, ls in enumerate(grid):
        g = growth(ls)
        trace.append((float(ls), g))
        if g > 0.0:
            if i == 0:
                raise ValueError("growth rate already positive at the lower "
                                 "bound of lambda_star_range")
            bracket = (prev, float(ls))
            break
        prev = float(ls)
    if bracket is None:
        return FlutterResult(found=False, damped=True, trace=trace,
                             message="no growth-rate crossing in range")

    blo, bhi = _bisect(lambda ls: growth(ls) > 0.0,
                       bracket[0], bracket[1], tol_rel)
    lambda_star_cr = 0.5 * (blo + bhi)
    omega, s = state_eigs(bhi)
    j = int(np.argmax(s.real))
    omega_cr = float(abs(s[j].imag))
    # report the modal damping level via the kappa_I / sqrt(kappa_R) relation:
    # at the crossing s = i*omega and kappa = omega^2 - i*omega*g, so the
    # ratio reduces to the effective modal damping coefficient
    lam = nondim.lambda_dim(lambda_star_cr)
    g_a = aerodynamic_damping_coefficient(lam, mach, mass_ratio,
                                          nondim.rho_h, nondim.a)
    ghat = (g_a / nondim.rho_h) * basis.ghat_unit
    m = basis.m
    # q-partition of the state eigenvector for the crossing mode
    S = np.zeros((2 * m, 2 * m))
    S[:m, m:] = np.eye(m)
    S[m:, :m] = -(basis.khat + lam * basis.ahat)
    S[m:, m:] = -ghat
    vals, vecs = sla.eig(S)
    jj = int(np.argmax(vals.real))
    q = vecs[:m, jj]
    g_tau = float(np.real(np.conj(q) @ ghat @ q) / np.real(np.conj(q) @ q))
    return FlutterResult(
        found=True,
        lambda_cr=lam,
        omega_cr=omega_cr,
        lambda_star_cr=lambda_star_cr,
        omega_star_cr=nondim.omega_star(omega_cr),
        mode_pair=(1, 2),
        damped=True,
        g_tau=g_tau,
        trace=trace,
    )


@dataclass
class SweepPoint:
    case_id: str
    axis_value: float
    result: FlutterResult | None
    error: str = ""


SWEEP_AXES = ("aspect_ratio", "flow_angle", "thickness")


def parametric_sweep(axis: str, grid, base_config) -> list[SweepPoint]:
    """Run one flutter solution per grid value of the chosen parameter.

    ``base_config`` is a RunConfig; per-point failures are recorded and the
    sweep continues.  The aspect-ratio axis lengthens the panel along the
    flow at fixed width and thickness, and its results are renormalized with
    the fixed width as reference length so the points share one scale.
    """
    from . import driver  # deferred: driver imports this module

    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; known: {SWEEP_AXES}")
    grid = list(grid)
    if not grid:
        raise ValueError("sweep grid must be nonempty")
    points = []
    for value in grid:
        cfg = driver.config_with_axis_value(base_config, axis, value)
        case_id = f"{axis}={value:g}"
        try:
            res = driver.run_flutter_case(cfg)
            if axis == "aspect_ratio" and res.found:
                ref = NonDim.from_laminate(driver.laminate_from_config(cfg),
                                           a=base_config.b)
                res = replace(res,
                              lambda_star_cr=ref.lambda_star(res.lambda_cr),
                              omega_star_cr=ref.omega_star(res.omega_cr))
            points.append(SweepPoint(case_id, float(value), res))
        except Exception as exc:  # per-point failures must not kill the sweep
            points.append(SweepPoint(case_id, float(value), None, str(exc)))
    return points
