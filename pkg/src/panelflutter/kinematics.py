"""Through-thickness expansion of the plate displacement field.

Each displacement component is expanded as a sum of known thickness functions
times 2D unknowns.  The registry is generic; the validated theory is
"sinus-w2": {1, z, sin(pi z / h)} for the in-plane components and
{1, z, z^2} for the transverse one (9 unknowns per surface point).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

COMPONENTS = ("u", "v", "w")


@dataclass(frozen=True)
class ThicknessFunction:
    name: str
    f: Callable
    df: Callable


@dataclass(frozen=True)
class TheoryExpansion:
    name: str
    h: float
    functions: dict  # component -> tuple[ThicknessFunction, ...]

    def n_terms(self, component: str) -> int:
        return len(self.functions[component])

    @property
    def dof_per_point(self) -> int:
        return sum(len(self.functions[c]) for c in COMPONENTS)

    def _get(self, component, tau) -> ThicknessFunction:
        funcs = self.functions[component]
        if not 0 <= tau < len(funcs):
            raise IndexError(
                f"expansion index {tau} out of range for component "
                f"{component!r} ({len(funcs)} terms)")
        return funcs[tau]

    def eval_F(self, component: str, tau: int, z):
        return self._get(component, tau).f(z)

    def eval_dF_dz(self, component: str, tau: int, z):
        return self._get(component, tau).df(z)


def _poly_terms():
    one = ThicknessFunction("1", lambda z: np.ones_like(np.asarray(z, float)),
                            lambda z: np.zeros_like(np.asarray(z, float)))
    lin = ThicknessFunction("z", lambda z: np.asarray(z, float),
                            lambda z: np.ones_like(np.asarray(z, float)))
    quad = ThicknessFunction("z^2", lambda z: np.asarray(z, float) ** 2,
                             lambda z: 2.0 * np.asarray(z, float))
    return one, lin, quad


def _sinus_w2(h: float) -> TheoryExpansion:
    one, lin, quad = _poly_terms()
    k = np.pi / h
    sin = ThicknessFunction("sin(pi z/h)",
                            lambda z: np.sin(k * np.asarray(z, float)),
                            lambda z: k * np.cos(k * np.asarray(z, float)))
    return TheoryExpansion(name="sinus-w2", h=h, functions={
        "u": (one, lin, sin),
        "v": (one, lin, sin),
        "w": (one, lin, quad),
    })


THEORIES = {"sinus-w2": _sinus_w2}


def make_expansion(name: str, h: float) -> TheoryExpansion:
    """Build a registered thickness expansion for a plate of thickness h."""
    if h <= 0.0:
        raise ValueError("thickness must be positive")
    try:
        factory = THEORIES[name.lower()]
    except KeyError:
        raise KeyError(f"unknown theory {name!r}; known: {sorted(THEORIES)}")
    return factory(h)
