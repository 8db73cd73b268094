from fractions import Fraction
from whichpath.interfaces import InvalidElement

import cmath
import math
import numpy as np


UNITARITY_TOLERANCE = 1e-12

# exp(i pi m) for the quarter turns, exact
_QUARTER_TURNS = {
    Fraction(0): 1 + 0j,
    Fraction(1, 2): 1j,
    Fraction(1): -1 + 0j,
    Fraction(3, 2): -1j,
}

#
# Element helpers, used by the element implementations in
# ``whichpath.elements.default`` and by the propagation stages.
#


def toFraction(value):
    """Convert an int, Fraction or decimal string exactly; floats via str"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        value = repr(value)
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidElement(f"not a rational number: {value!r}") from e


def splitterAmplitudes(ratio):
    """Return ``(t, r)`` for a reflection probability ``ratio``.

    ``1 - ratio`` is formed exactly so a balanced splitter gets bitwise equal
    amplitudes.
    """
    ratio = toFraction(ratio)
    if not 0 <= ratio <= 1:
        raise InvalidElement(f"ratio {ratio} outside [0,1]")
    return math.sqrt(float(1 - ratio)), math.sqrt(float(ratio))


def checkSplitter(t, r):
    if abs(t * t + r * r - 1.0) > UNITARITY_TOLERANCE:
        raise InvalidElement(
            f"beam splitter with t={t!r}, r={r!r} is not unitary (t^2 + r^2 != 1)"
        )


def phasor(angle, piMultiple=None):
    """exp(i angle); exact for quarter turns given as multiples of pi"""
    if piMultiple is not None:
        exact = _QUARTER_TURNS.get(piMultiple % 2)
        if exact is not None:
            return exact
    return cmath.exp(1j * angle)


def piDeviceDiagonal(registers):
    """Diagonal of the pi device: every register's Phi-perp changes sign.

    The device acts as the tensor product of diag(1, -1) over all registers.
    """
    indices = np.arange(2**registers)
    parity = np.array([bin(i).count("1") % 2 for i in indices])
    return np.where(parity, -1.0, 1.0).astype(complex)


def formatAngle(angle, piMultiple=None):
    if piMultiple is None:
        return repr(float(angle))
    sign = "-" if piMultiple < 0 else ""
    magnitude = abs(piMultiple)
    if magnitude == 1:
        return f"{sign}pi"
    return f"{sign}{formatRational(magnitude)}pi"


def formatRational(value):
    value = toFraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
