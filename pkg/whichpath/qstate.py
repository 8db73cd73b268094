"""Complex-amplitude algebra for ancilla vectors and joint path states.

The ancilla ("non-path degree of freedom") is a register of ``n`` two-level
systems, so its dimension is ``2 ** n``. Basis index 0 is the undisturbed
state Phi; the orthogonal state created by a probe coupled to register ``k``
is basis index ``2 ** k``. With a single register this is the usual pair
Phi, Phi-perp at indices 0 and 1.
"""
from whichpath.interfaces import DimensionMismatch
from whichpath.interfaces import IAncillaVector
from whichpath.interfaces import IJointState
from whichpath.interfaces import UnknownLabel
from zope.interface import implementer

import math
import numpy as np


PHI = 0
PHI_PERP = 1

# d/d(angle) of the probe rotation at angle zero: |Phi-perp><Phi| - |Phi><Phi-perp|
GENERATOR = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


def dimensionFor(registers):
    if registers < 1:
        raise DimensionMismatch("at least one ancilla register is required")
    return 2**registers


def perpIndex(register=0):
    """Basis index of Phi-perp for the given register"""
    return 1 << register


@implementer(IAncillaVector)
class AncillaVector:
    """Immutable vector of complex amplitudes over the ancilla basis."""

    __slots__ = ("components",)

    def __init__(self, components):
        components = np.array(components, dtype=complex)
        if components.ndim != 1:
            raise DimensionMismatch("ancilla vectors are one-dimensional")
        size = components.shape[0]
        if size < 2 or size & (size - 1):
            raise DimensionMismatch(
                f"ancilla dimension must be a power of two >= 2, got {size}"
            )
        components.setflags(write=False)
        self.components = components

    @classmethod
    def basis(cls, index, dimension=2):
        components = np.zeros(dimension, dtype=complex)
        components[index] = 1.0
        return cls(components)

    @classmethod
    def zero(cls, dimension=2):
        return cls(np.zeros(dimension, dtype=complex))

    @property
    def dimension(self):
        return self.components.shape[0]

    @property
    def registers(self):
        return self.dimension.bit_length() - 1

    def __getitem__(self, index):
        return complex(self.components[index])

    def norm2(self):
        return float(np.vdot(self.components, self.components).real)

    def isZero(self):
        return not np.any(self.components)

    def _check(self, other):
        if self.dimension != other.dimension:
            raise DimensionMismatch(
                f"dimension {self.dimension} does not match {other.dimension}"
            )

    def __add__(self, other):
        if not isinstance(other, AncillaVector):
            return NotImplemented
        self._check(other)
        return AncillaVector(self.components + other.components)

    def __sub__(self, other):
        if not isinstance(other, AncillaVector):
            return NotImplemented
        self._check(other)
        return AncillaVector(self.components - other.components)

    def __neg__(self):
        return AncillaVector(-self.components)

    def __mul__(self, scalar):
        if isinstance(scalar, AncillaVector):
            return NotImplemented
        return AncillaVector(self.components * complex(scalar))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AncillaVector):
            return NotImplemented
        return self.dimension == other.dimension and bool(
            np.array_equal(self.components, other.components)
        )

    __hash__ = None

    def __repr__(self):
        values = ", ".join(f"{c:.6g}" for c in self.components)
        return f"<AncillaVector [{values}]>"


def phi(dimension=2):
    """The undisturbed ancilla state"""
    return AncillaVector.basis(PHI, dimension)


def phiPerp(register=0, dimension=2):
    """The orthogonal component created by a probe on ``register``"""
    return AncillaVector.basis(perpIndex(register), dimension)


def inner(a, b):
    """Return <a|b>, conjugate-linear in ``a``."""
    if a.dimension != b.dimension:
        raise DimensionMismatch(
            f"cannot take inner product of dimensions {a.dimension} and "
            f"{b.dimension}"
        )
    return complex(np.vdot(a.components, b.components))


def embed(matrix, register=0, registers=1):
    """Lift a 2x2 operator on one register to the full ancilla space.

    Register ``k`` is bit ``k`` of the basis index.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (2, 2):
        raise DimensionMismatch("register operators are 2x2")
    if not 0 <= register < registers:
        raise DimensionMismatch(
            f"register {register} outside 0..{registers - 1}"
        )
    above = np.eye(2 ** (registers - register - 1), dtype=complex)
    below = np.eye(2**register, dtype=complex)
    return np.kron(np.kron(above, matrix), below)


def probeRotation(angle):
    """exp(angle * (|Phi-perp><Phi| - |Phi><Phi-perp|))"""
    c = math.cos(angle)
    s = math.sin(angle)
    return np.array([[c, -s], [s, c]], dtype=complex)


def probeCoupling(epsilon):
    """Unitary probe of strength ``epsilon``.

    The rotation by arctan(epsilon): on Phi it gives exactly the renormalized
    disturbance N(Phi + epsilon Phi-perp), N = 1/sqrt(1 + epsilon**2).
    """
    norm = math.sqrt(1.0 + epsilon * epsilon)
    return np.array([[1.0, -epsilon], [epsilon, 1.0]], dtype=complex) / norm


@implementer(IJointState)
class JointState:
    """Unnormalized map from path label to ``AncillaVector``.

    Entries keep their insertion order; all share one dimension.
    """

    __slots__ = ("_entries", "dimension")

    def __init__(self, entries=(), dimension=2):
        self._entries = dict(entries)
        self.dimension = dimension
        for label, vector in self._entries.items():
            if vector.dimension != dimension:
                raise DimensionMismatch(
                    f"entry {label!r} has dimension {vector.dimension}, "
                    f"expected {dimension}"
                )

    def __getitem__(self, label):
        try:
            return self._entries[label]
        except KeyError:
            raise UnknownLabel("path", label) from None

    def __contains__(self, label):
        return label in self._entries

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def labels(self):
        return tuple(self._entries)

    def items(self):
        return self._entries.items()

    def get(self, label, default=None):
        return self._entries.get(label, default)

    def replace(self, label, vector):
        if label not in self._entries:
            raise UnknownLabel("path", label)
        entries = dict(self._entries)
        entries[label] = vector
        return JointState(entries, self.dimension)

    def insert(self, label, vector):
        entries = dict(self._entries)
        entries[label] = vector
        return JointState(entries, self.dimension)

    def remove(self, *labels):
        entries = {k: v for k, v in self._entries.items() if k not in labels}
        return JointState(entries, self.dimension)

    def project(self, label):
        """Zero every entry except ``label``"""
        if label not in self._entries:
            raise UnknownLabel("path", label)
        zero = AncillaVector.zero(self.dimension)
        entries = {
            k: (v if k == label else zero) for k, v in self._entries.items()
        }
        return JointState(entries, self.dimension)

    def __eq__(self, other):
        if not isinstance(other, JointState):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and self.labels() == other.labels()
            and all(self._entries[k] == other[k] for k in self._entries)
        )

    __hash__ = None

    def __repr__(self):
        return f"<JointState {dict(self._entries)!r}>"


def totalNorm2(s):
    """Sum of squared norms over all path entries"""
    return float(sum(vector.norm2() for _, vector in s.items()))


def applyAncillaOp(s, path, M, register=0):
    """Replace the entry at ``path`` by ``M`` applied to it.

    ``M`` is either a full operator on the ancilla space or a 2x2 operator
    on span{Phi, Phi-perp} of ``register``. No other entry is touched.
    """
    vector = s[path]
    M = np.asarray(M, dtype=complex)
    if M.shape == (2, 2) and (vector.dimension != 2 or register):
        M = embed(M, register, vector.registers)
    if M.shape != (vector.dimension, vector.dimension):
        raise DimensionMismatch(
            f"operator of shape {M.shape} does not act on dimension "
            f"{vector.dimension}"
        )
    return s.replace(path, AncillaVector(M @ vector.components))
