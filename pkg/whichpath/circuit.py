"""Interferometer circuits and propagation of joint path-ancilla states.

A circuit is a set of labeled paths, each carrying an ordered list of
single-path elements, wired together by beam splitters. Propagation walks a
fixed stage order: the elements of the source path, then for every beam
splitter in declaration order the mixing stage followed by the element
stages of its two outputs. At any point of that walk the live paths form a
complete cut.
"""
from collections import namedtuple
from whichpath.elements.default import BeamSplitter
from whichpath.elements.default import Block
from whichpath.elements.default import Marker
from whichpath.elements.default import PhaseShift
from whichpath.elements.default import PiDevice
from whichpath.elements.default import ProbeSite
from whichpath.elements.utils import checkSplitter
from whichpath.interfaces import ICircuit
from whichpath.interfaces import InvalidCircuit
from whichpath.interfaces import InvalidElement
from whichpath.interfaces import UnknownLabel
from whichpath.qstate import AncillaVector
from whichpath.qstate import dimensionFor
from whichpath.qstate import JointState
from whichpath.qstate import phi
from whichpath.qstate import PHI
from whichpath.qstate import probeCoupling
from zope.interface import implementer

import logging
import math


logger = logging.getLogger("whichpath")

# A point on a path: stage index, path label and the index of the element
# in front of which the point lies (len(elements) is the end of the path).
Location = namedtuple("Location", ("stage", "path", "position"))


def beamSplit(u, v, t, r):
    """Mix two path entries: u' = r u + t v, v' = t u - r v.

    The splitter acts on the path only, so both ancilla components are mixed
    identically.
    """
    checkSplitter(t, r)
    return r * u + t * v, t * u - r * v


class PathStage:
    """Applies the elements of one path in order"""

    def __init__(self, path, elements):
        self.path = path
        self.elements = tuple(elements)

    def propagate(self, state, index, propagation):
        for position, element in enumerate(self.elements):
            state = propagation.arrive(Location(index, self.path, position), state)
            state = element.transform(state, self.path, propagation)
        end = Location(index, self.path, len(self.elements))
        return propagation.arrive(end, state)

    def __repr__(self):
        return f"<PathStage {self.path}>"


class SplitterStage:
    """A beam splitter consuming one or two paths and producing two.

    A single input is the first port; the second port is then vacuum.
    """

    def __init__(self, name, inputs, outputs, splitter):
        if not isinstance(splitter, BeamSplitter):
            splitter = BeamSplitter(splitter)
        self.name = name
        self.inputs = tuple(inputs)
        self.outputs = tuple(outputs)
        self.splitter = splitter
        if len(self.inputs) not in (1, 2) or len(self.outputs) != 2:
            raise InvalidCircuit(
                f"splitter {name} needs one or two inputs and two outputs",
                label=name,
            )

    @property
    def kind(self):
        return "split" if len(self.inputs) == 1 else "merge"

    def propagate(self, state, index, propagation):
        u = state[self.inputs[0]]
        if len(self.inputs) == 2:
            v = state[self.inputs[1]]
        else:
            v = AncillaVector.zero(state.dimension)
        first, second = beamSplit(u, v, self.splitter.t, self.splitter.r)
        state = state.remove(*self.inputs)
        state = state.insert(self.outputs[0], first)
        return state.insert(self.outputs[1], second)

    def key(self):
        return (self.name, self.inputs, self.outputs, self.splitter.ratio)

    def __eq__(self, other):
        if not isinstance(other, SplitterStage):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"<SplitterStage {self.name} {self.inputs} -> {self.outputs}>"


@implementer(ICircuit)
class Circuit:
    """An immutable, validated interferometer.

    ``paths`` maps each path label to its element sequence, in declaration
    order. ``splitters`` is the ordered sequence of ``SplitterStage``. The
    source is the one declared path no splitter produces.
    """

    def __init__(self, paths, splitters, detectPort, ancillaCount=1):
        self.paths = {label: tuple(elements) for label, elements in dict(paths).items()}
        self.splitters = tuple(splitters)
        self.detectPort = detectPort
        self.ancillaCount = ancillaCount
        self.dimension = dimensionFor(ancillaCount)
        self.source = self._findSource()
        self._checkWiring()
        self.stages = self._buildStages()
        self._pathStage = {
            stage.path: index
            for index, stage in enumerate(self.stages)
            if isinstance(stage, PathStage)
        }
        self._sites = {}
        self._markers = {}
        self._indexElements()

    # Validation

    def _findSource(self):
        produced = set()
        for splitter in self.splitters:
            produced.update(splitter.outputs)
        for splitter in self.splitters:
            for label in splitter.inputs + splitter.outputs:
                if label not in self.paths:
                    raise InvalidCircuit(f"undeclared path {label!r}", label=label)
        candidates = [label for label in self.paths if label not in produced]
        if not candidates:
            raise InvalidCircuit("circuit has no source path")
        if len(candidates) > 1:
            raise InvalidCircuit(
                "circuit has more than one source path: "
                + ", ".join(candidates),
                label=candidates[1],
            )
        return candidates[0]

    def _checkWiring(self):
        live = {self.source}
        seen = {self.source}
        names = set()
        for splitter in self.splitters:
            if splitter.name in names:
                raise InvalidCircuit(
                    f"duplicate splitter {splitter.name!r}", label=splitter.name
                )
            names.add(splitter.name)
            if len(set(splitter.inputs)) != len(splitter.inputs):
                raise InvalidCircuit(
                    f"splitter {splitter.name} uses {splitter.inputs[0]!r} twice",
                    label=splitter.inputs[0],
                )
            for label in splitter.inputs:
                if label not in live:
                    raise InvalidCircuit(
                        f"path {label!r} is consumed by {splitter.name} before "
                        "it is produced",
                        label=label,
                    )
            if splitter.outputs[0] == splitter.outputs[1]:
                raise InvalidCircuit(
                    f"splitter {splitter.name} has two outputs named "
                    f"{splitter.outputs[0]!r}",
                    label=splitter.outputs[0],
                )
            for label in splitter.outputs:
                if label in seen:
                    raise InvalidCircuit(
                        f"path {label!r} is produced twice", label=label
                    )
            live.difference_update(splitter.inputs)
            live.update(splitter.outputs)
            seen.update(splitter.outputs)
        if self.detectPort not in self.paths:
            raise InvalidCircuit(
                f"undeclared detect port {self.detectPort!r}", label=self.detectPort
            )
        if self.detectPort not in live:
            raise InvalidCircuit(
                f"detect port {self.detectPort!r} is not an output port",
                label=self.detectPort,
            )

    def _buildStages(self):
        stages = [PathStage(self.source, self.paths[self.source])]
        for splitter in self.splitters:
            stages.append(splitter)
            for label in splitter.outputs:
                stages.append(PathStage(label, self.paths[label]))
        return tuple(stages)

    def _indexElements(self):
        for label in self.paths:
            index = self._pathStage[label]
            for position, element in enumerate(self.paths[label]):
                location = Location(index, label, position)
                if isinstance(element, ProbeSite):
                    if element.siteId in self._sites:
                        raise InvalidCircuit(
                            f"duplicate probe site {element.siteId!r}",
                            label=element.siteId,
                        )
                    if element.register >= self.ancillaCount:
                        raise InvalidCircuit(
                            f"probe {element.siteId!r} uses register "
                            f"{element.register} but only {self.ancillaCount} "
                            "ancilla register(s) exist",
                            label=element.siteId,
                        )
                    self._sites[element.siteId] = (location, element)
                elif isinstance(element, Marker):
                    if element.markerId in self._markers:
                        raise InvalidCircuit(
                            f"duplicate marker {element.markerId!r}",
                            label=element.markerId,
                        )
                    self._markers[element.markerId] = location

    # Lookup

    def probeSites(self):
        """Probe ids in declaration order"""
        return tuple(self._sites)

    def markers(self):
        return tuple(self._markers)

    def site(self, siteId):
        try:
            return self._sites[siteId][0]
        except KeyError:
            raise UnknownLabel("probe site", siteId) from None

    def probe(self, siteId):
        try:
            return self._sites[siteId][1]
        except KeyError:
            raise UnknownLabel("probe site", siteId) from None

    def marker(self, markerId):
        try:
            return self._markers[markerId]
        except KeyError:
            raise UnknownLabel("marker", markerId) from None

    def pathStart(self, path):
        if path not in self._pathStage:
            raise UnknownLabel("path", path)
        return Location(self._pathStage[path], path, 0)

    def pathEnd(self, path):
        if path not in self._pathStage:
            raise UnknownLabel("path", path)
        return Location(self._pathStage[path], path, len(self.paths[path]))

    def terminals(self):
        """Output paths, in the order they are produced"""
        consumed = set()
        for splitter in self.splitters:
            consumed.update(splitter.inputs)
        return tuple(
            stage.path
            for stage in self.stages
            if isinstance(stage, PathStage) and stage.path not in consumed
        )

    def successors(self, path):
        for splitter in self.splitters:
            if path in splitter.inputs:
                return splitter.outputs
        return ()

    def liveSets(self):
        """The set of live paths after each stage"""
        live = set()
        result = []
        for stage in self.stages:
            if isinstance(stage, SplitterStage):
                live.difference_update(stage.inputs)
                live.update(stage.outputs)
            else:
                live.add(stage.path)
            result.append(frozenset(live))
        return result

    def isCompleteCut(self, labels):
        """True if every route from the source to an output crosses exactly
        one of ``labels``.
        """
        labels = frozenset(labels)
        for label in labels:
            if label not in self.paths:
                raise UnknownLabel("path", label)
        memo = {}

        def crossesOnce(path, hits):
            hits += path in labels
            if hits > 1:
                return False
            key = (path, hits)
            if key not in memo:
                following = self.successors(path)
                if not following:
                    memo[key] = hits == 1
                else:
                    memo[key] = all(crossesOnce(n, hits) for n in following)
            return memo[key]

        return crossesOnce(self.source, 0)

    # Variants

    def withElements(self, path, elements):
        if path not in self.paths:
            raise UnknownLabel("path", path)
        paths = dict(self.paths)
        paths[path] = tuple(elements)
        return Circuit(paths, self.splitters, self.detectPort, self.ancillaCount)

    def withBlock(self, path):
        """The circuit with a block at the start of ``path``"""
        if path not in self.paths:
            raise UnknownLabel("path", path)
        return self.withElements(path, (Block(),) + self.paths[path])

    def withoutBlocks(self, path=None):
        circuit = self
        for label in self.paths if path is None else (path,):
            elements = [e for e in circuit.paths[label] if not isinstance(e, Block)]
            circuit = circuit.withElements(label, elements)
        return circuit

    def withoutDevices(self):
        circuit = self
        for label, elements in self.paths.items():
            kept = [e for e in elements if not isinstance(e, PiDevice)]
            circuit = circuit.withElements(label, kept)
        return circuit

    def withPhase(self, path, angle):
        """Set the first phase shift on ``path`` to ``angle`` (appending one if
        there is none)
        """
        if path not in self.paths:
            raise UnknownLabel("path", path)
        elements = list(self.paths[path])
        for index, element in enumerate(elements):
            if isinstance(element, PhaseShift):
                elements[index] = PhaseShift(angle)
                break
        else:
            elements.append(PhaseShift(angle))
        return self.withElements(path, elements)

    def hasDevices(self):
        return any(
            isinstance(e, PiDevice) for elements in self.paths.values() for e in elements
        )

    def key(self):
        return (
            tuple(self.paths.items()),
            self.splitters,
            self.detectPort,
            self.ancillaCount,
        )

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return (
            f"<Circuit {self.source} -> {self.detectPort}, {len(self.paths)} paths, "
            f"{len(self.splitters)} splitters>"
        )


class Propagation:
    """One walk of a joint state through a circuit.

    ``couplings`` maps active probe ids to the 2x2 matrix they apply.
    ``condition`` is a ``Location`` at which every other live path is
    projected out. ``inject`` is a ``Location`` at which a unit Phi
    excitation is inserted into an otherwise empty circuit. ``visitor`` is
    called with every location passed and the state there.
    """

    def __init__(self, circuit, couplings=None, condition=None, inject=None, visitor=None):
        self.circuit = circuit
        self.couplings = dict(couplings or {})
        self.condition = condition
        self.inject = inject
        self.visitor = visitor

    def couplingFor(self, siteId):
        return self.couplings.get(siteId)

    def arrive(self, location, state):
        if location == self.inject:
            state = state.replace(location.path, phi(state.dimension))
        if location == self.condition:
            state = state.project(location.path)
        if self.visitor is not None:
            self.visitor(location, state)
        return state

    def run(self, observer=None):
        circuit = self.circuit
        dimension = circuit.dimension
        if self.inject is None:
            start = phi(dimension)
        else:
            start = AncillaVector.zero(dimension)
        state = JointState({circuit.source: start}, dimension)
        for index, stage in enumerate(circuit.stages):
            state = stage.propagate(state, index, self)
            if observer is not None:
                observer(index, state)
        return state


def conditionLocation(c, conditionOnMarker):
    if conditionOnMarker is None:
        return None
    return c.marker(conditionOnMarker)


def propagate(c, activeProbe=None, epsilon=0.0, conditionOnMarker=None):
    """Propagate the source state to the output cut.

    The probe ``activeProbe`` (if any) couples with strength ``epsilon``;
    all other probes are the identity. With ``conditionOnMarker`` the
    amplitude not on that marker's path is projected out at the marker.
    """
    if not math.isfinite(epsilon) or epsilon < 0:
        raise InvalidElement(f"epsilon must be finite and >= 0, got {epsilon!r}")
    couplings = {}
    if activeProbe is not None:
        c.site(activeProbe)
        couplings[activeProbe] = probeCoupling(epsilon)
    condition = conditionLocation(c, conditionOnMarker)
    logger.debug(
        "Propagating %r, probe %s, epsilon %g, condition %s",
        c,
        activeProbe,
        epsilon,
        conditionOnMarker,
    )
    return Propagation(c, couplings, condition).run()


def forwardAmplitudes(c):
    """Undisturbed Phi amplitude on every live path after every stage.

    Devices act trivially on Phi, so this is the plain path-interference
    solution. Keys are ``(stage index, path label)``.
    """
    amplitudes = {}

    def record(index, state):
        for label, vector in state.items():
            amplitudes[(index, label)] = vector[PHI]

    Propagation(c).run(observer=record)
    return amplitudes


def amplitudeAt(c, location, condition=None):
    """Undisturbed Phi amplitude on ``location.path`` at ``location``"""
    found = []

    def visit(where, state):
        if where == location:
            found.append(state[where.path][PHI])

    Propagation(c, condition=condition, visitor=visit).run()
    if not found:
        raise UnknownLabel("location", location)
    return found[0]


def transferFrom(c, location, condition=None):
    """Amplitude with which a unit excitation inserted at ``location``
    arrives at the detect port
    """
    state = Propagation(c, condition=condition, inject=location).run()
    return state[c.detectPort][PHI]


def locationAfter(c, stage, path):
    if not 0 <= stage < len(c.stages):
        raise InvalidCircuit(f"no stage {stage}")
    if path not in c.liveSets()[stage]:
        raise InvalidCircuit(f"path {path!r} is not live after stage {stage}", label=path)
    start = c.pathStart(path)
    if start.stage > stage:
        return start
    return c.pathEnd(path)


def backwardTransfer(c, stage, path):
    """Amplitude with which a unit excitation on ``path`` right after
    ``stage`` reaches the detect port under undisturbed dynamics
    """
    return transferFrom(c, locationAfter(c, stage, path))


def detectAmplitude(c, condition=None):
    state = Propagation(c, condition=condition).run()
    return state[c.detectPort][PHI]


def detectIntensity(c):
    """Undisturbed postselection probability"""
    return abs(detectAmplitude(c)) ** 2


def tuningScan(c, path, angles):
    """Detect-port intensity as the tuning phase on ``path`` varies"""
    return [(angle, detectIntensity(c.withPhase(path, angle))) for angle in angles]
