from whichpath.elements.utils import checkSplitter
from whichpath.elements.utils import formatAngle
from whichpath.elements.utils import formatRational
from whichpath.elements.utils import phasor
from whichpath.elements.utils import piDeviceDiagonal
from whichpath.elements.utils import splitterAmplitudes
from whichpath.elements.utils import toFraction
from whichpath.interfaces import _
from whichpath.interfaces import IElement
from whichpath.interfaces import IElementType
from whichpath.interfaces import InvalidElement
from whichpath.qstate import AncillaVector
from whichpath.qstate import applyAncillaOp
from zope.interface import implementer
from zope.interface import provider

import math
import numpy as np


@implementer(IElement)
class BaseElement:
    """Common behaviour of the single-path elements.

    Subclasses provide ``IElementType`` and implement ``transform()``, which
    receives the joint state, the label of the path the element sits on and
    the running ``Propagation`` (see ``whichpath.circuit``), and returns the
    new joint state. Elements compare structurally through ``key()``.
    """

    keyword = None

    def transform(self, state, path, propagation):
        return state

    def key(self):
        return (self.keyword,)

    def serialize(self):
        return self.keyword

    def __eq__(self, other):
        if not isinstance(other, BaseElement):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"<{self.__class__.__name__} {self.serialize()}>"


@provider(IElementType)
class Mirror(BaseElement):
    """A mirror redirects the path and leaves the amplitude alone."""

    title = _("Mirror")
    description = _("Redirects a path. Acts as the identity on the state.")
    keyword = "mirror"
    sort = 1


@provider(IElementType)
class PhaseShift(BaseElement):
    """Multiplies the path amplitude by exp(i angle).

    ``piMultiple`` keeps an angle given as a rational multiple of pi, which
    makes quarter turns exact and keeps serialization lossless.
    """

    title = _("Phase shift")
    description = _("Tunes the interferometer by a phase on one path.")
    keyword = "phase"
    sort = 2

    def __init__(self, angle, piMultiple=None):
        if piMultiple is not None:
            piMultiple = toFraction(piMultiple)
            angle = float(piMultiple) * math.pi
        angle = float(angle)
        if not math.isfinite(angle):
            raise InvalidElement(f"phase angle must be finite, got {angle!r}")
        self.angle = angle
        self.piMultiple = piMultiple
        self.phasor = phasor(angle, piMultiple)

    @classmethod
    def ofPi(cls, multiple):
        return cls(0.0, piMultiple=multiple)

    def transform(self, state, path, propagation):
        return state.replace(path, state[path] * self.phasor)

    def key(self):
        if self.piMultiple is not None:
            return (self.keyword, "pi", self.piMultiple)
        return (self.keyword, self.angle)

    def serialize(self):
        return f"phase {formatAngle(self.angle, self.piMultiple)}"


@provider(IElementType)
class ProbeSite(BaseElement):
    """Place where a weak local disturbance can be switched on.

    Inactive probes are the identity. The running propagation decides which
    probes are active and with which coupling matrix.
    """

    title = _("Probe site")
    description = _(
        "Local disturbance rotating Phi toward Phi-perp on one ancilla register."
    )
    keyword = "probe"
    sort = 3

    def __init__(self, siteId, register=0):
        if register < 0:
            raise InvalidElement(f"register must be >= 0, got {register}")
        self.siteId = siteId
        self.register = register

    def transform(self, state, path, propagation):
        coupling = propagation.couplingFor(self.siteId)
        if coupling is None:
            return state
        return applyAncillaOp(state, path, coupling, register=self.register)

    def key(self):
        return (self.keyword, self.siteId, self.register)

    def serialize(self):
        if self.register:
            return f"probe {self.siteId} register {self.register}"
        return f"probe {self.siteId}"


@provider(IElementType)
class PiDevice(BaseElement):
    """Adds the relative phase pi to the orthogonal ancilla component.

    a Phi + b Phi-perp becomes a Phi - b Phi-perp. With several registers
    every register's Phi-perp flips. Phi itself is never touched, so the
    device is invisible to an undisturbed interferometer.
    """

    title = _("Pi device")
    description = _("Flips the sign of the Phi-perp component on one path.")
    keyword = "device"
    sort = 4

    def transform(self, state, path, propagation):
        vector = state[path]
        diagonal = piDeviceDiagonal(vector.registers)
        return state.replace(path, AncillaVector(diagonal * vector.components))

    def serialize(self):
        return "device pi"


@provider(IElementType)
class Block(BaseElement):
    """Absorbs everything on its path."""

    title = _("Block")
    description = _("Projects the path amplitude out (amplitude loss).")
    keyword = "block"
    sort = 5

    def transform(self, state, path, propagation):
        return state.replace(path, AncillaVector.zero(state.dimension))


@provider(IElementType)
class Marker(BaseElement):
    """Idealized nondemolition presence recorder.

    A marker does nothing by itself. When a propagation is conditioned on
    it, the amplitude on every other path is projected out at the marker's
    position.
    """

    title = _("Marker")
    description = _("Records presence; used to condition on a path.")
    keyword = "marker"
    sort = 6

    def __init__(self, markerId):
        self.markerId = markerId

    def key(self):
        return (self.keyword, self.markerId)

    def serialize(self):
        return f"marker {self.markerId}"


@provider(IElementType)
class BeamSplitter(BaseElement):
    """Mixes two paths with real amplitudes t and r, t**2 + r**2 = 1.

    ``ratio`` is the reflection probability, kept as an exact fraction.
    """

    title = _("Beam splitter")
    description = _(
        "Two-path mixing: u' = r u + t v, v' = t u - r v. The ratio is the "
        "reflection probability."
    )
    keyword = "split"
    sort = 0

    def __init__(self, ratio):
        self.ratio = toFraction(ratio)
        self.t, self.r = splitterAmplitudes(self.ratio)
        checkSplitter(self.t, self.r)

    def matrix(self):
        return np.array([[self.r, self.t], [self.t, -self.r]], dtype=float)

    def key(self):
        return (self.keyword, self.ratio)

    def serialize(self):
        return f"ratio {formatRational(self.ratio)}"


# Element kinds usable inside a path block, by keyword
PATH_ELEMENT_TYPES = {
    cls.keyword: cls for cls in (Mirror, PhaseShift, ProbeSite, PiDevice, Block, Marker)
}
