"""Thickness-expansion tests: pointwise values, finite-difference
derivatives, and linear independence."""

import numpy as np
import pytest

from panelflutter.kinematics import COMPONENTS, THEORIES, make_expansion

H = 0.02


@pytest.fixture(scope="module")
def exp():
    return make_expansion("sinus-w2", H)


def test_term_counts(exp):
    assert all(exp.n_terms(c) == 3 for c in COMPONENTS)
    assert exp.dof_per_point == 9


def test_pointwise_values(exp):
    z = H / 2.0
    assert exp.eval_F("u", 0, 0.37) == 1.0
    assert exp.eval_F("u", 1, 0.37) == 0.37
    assert np.isclose(exp.eval_F("u", 2, 0.0), 0.0, atol=1e-15)
    assert np.isclose(exp.eval_F("u", 2, z), 1.0, rtol=1e-15)
    assert np.isclose(exp.eval_F("w", 2, z), H ** 2 / 4.0, rtol=1e-15)
    assert np.isclose(exp.eval_dF_dz("u", 2, 0.0), np.pi / H, rtol=1e-15)
    assert np.isclose(exp.eval_dF_dz("u", 2, z), 0.0, atol=1e-10 / H)
    assert exp.eval_dF_dz("w", 1, 0.41) == 1.0
    assert np.isclose(exp.eval_dF_dz("w", 2, z), H, rtol=1e-15)


def test_derivatives_match_finite_differences(exp):
    rng = np.random.default_rng(7)
    zs = rng.uniform(-0.45 * H, 0.45 * H, size=20)
    step = 1e-6 * H
    for comp in COMPONENTS:
        for tau in range(3):
            fd = (exp.eval_F(comp, tau, zs + step)
                  - exp.eval_F(comp, tau, zs - step)) / (2 * step)
            got = exp.eval_dF_dz(comp, tau, zs)
            assert np.allclose(got, fd, rtol=1e-6, atol=1e-6 / H)


def test_vectorized_evaluation(exp):
    zs = np.linspace(-H / 2, H / 2, 11)
    assert exp.eval_F("v", 2, zs).shape == zs.shape
    assert np.allclose(exp.eval_F("v", 2, zs), np.sin(np.pi * zs / H))


def test_index_and_name_errors(exp):
    with pytest.raises(IndexError):
        exp.eval_F("u", 3, 0.0)
    with pytest.raises(IndexError):
        exp.eval_dF_dz("w", -4, 0.0)
    with pytest.raises(KeyError):
        make_expansion("no-such-theory", H)
    with pytest.raises(ValueError):
        make_expansion("sinus-w2", 0.0)


def test_registry_contains_supported_theory():
    assert "sinus-w2" in THEORIES


@pytest.mark.parametrize("comp", COMPONENTS)
def test_functions_linearly_independent(exp, comp):
    """Gram matrix of the three thickness functions is well conditioned."""
    z, w = np.polynomial.legendre.leggauss(20)
    z = z * H / 2.0
    w = w * H / 2.0
    f = np.array([exp.eval_F(comp, tau, z) for tau in range(3)])
    f /= np.sqrt(((f ** 2) * w).sum(axis=1))[:, None]    # unit L2 norm
    G = (f * w) @ f.T
    eig = np.linalg.eigvalsh(G)
    assert eig.min() > 0.0
    assert eig.max() / eig.min() < 1e6
