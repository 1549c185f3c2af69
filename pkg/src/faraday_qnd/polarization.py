"""Jones-vector algebra for circular birefringence of the charged dot.

Circular basis: ``R = (1, i)``, ``L = (1, -i)`` (unnormalised), so an
x-polarised unit field is ``R/2 + L/2``. Selection rule: the up-spin couples
to L, the down-spin to R; the uncoupled channel sees the cold cavity.
"""

from __future__ import annotations

import cmath
import warnings

from .specs import ComplexReflectance, JonesVector, Spin

FIRST_ORDER_LIMIT = 0.3


class FirstOrderWarning(UserWarning):
    """Phase difference too large for the linearised rotation signal."""


def _as_complex(r) -> complex:
    if isinstance(r, ComplexReflectance):
        return complex(r.value)
    return complex(r)


def circular_components(vec: JonesVector) -> tuple[complex, complex]:
    """Weights ``(c_R, c_L)`` with ``vec = c_R (1, i) + c_L (1, -i)``."""
    return 0.5 * (vec.x - 1j * vec.y), 0.5 * (vec.x + 1j * vec.y)


def reflected_jones(vec: JonesVector, r_R, r_L) -> JonesVector:
    c_r, c_l = circular_components(vec)
    a_r = _as_complex(r_R) * c_r
    a_l = _as_complex(r_L) * c_l
    return JonesVector(a_r + a_l, 1j * (a_r - a_l))


def spin_reflectances(spin: Spin | str, r, r0) -> tuple[complex, complex]:
    """``(r_R, r_L)`` for a given spin: the coupled channel gets ``r``."""
    spin = Spin(spin)
    r, r0 = _as_complex(r), _as_complex(r0)
    return (r0, r) if spin is Spin.UP else (r, r0)


def rotated_amplitude(spin: Spin | str, r, r0, amplitude: complex = 1.0) -> complex:
    """Exact y-component reflected from an x-polarised probe of given amplitude."""
    r_R, r_L = spin_reflectances(spin, r, r0)
    return reflected_jones(JonesVector.x_polarized(amplitude), r_R, r_L).y


def mean_reflectance(r, r0) -> float:
    """Average modulus of the two circular channels."""
    return 0.5 * (abs(_as_complex(r)) + abs(_as_complex(r0)))


def signal_amplitude_first_order(r_bar: float, theta: float, theta0: float,
                                 spin: Spin | str) -> complex:
    """Linearised rotation signal ``+-(theta - theta0)/2 * r_bar * exp(i theta_bar)``.

    Emits :class:`FirstOrderWarning` when ``|theta - theta0| >= 0.3`` rad.
    """
    spin = Spin(spin)
    d = theta - theta0
    if abs(d) >= FIRST_ORDER_LIMIT:
        warnings.warn(
            f"|theta - theta0| = {abs(d):.3g} rad is outside the first-order regime",
            FirstOrderWarning, stacklevel=2,
        )
    theta_bar = 0.5 * (theta + theta0)
    return spin.sign * 0.5 * d * r_bar * cmath.exp(1j * theta_bar)
