"""Presence signals, weak values and their comparison.

The presence signal alpha of a probe site is read off the detect-port
ancilla: with the site disturbed by epsilon the output ancilla is
N(Phi + alpha epsilon Phi-perp). The weak value of the projector onto the
site's path is the oracle alpha is compared against. A site *lies* when the
two disagree, which happens only when an element distorts the orthogonal
component on its way to the detector.
"""
from dataclasses import dataclass
from dataclasses import field
from whichpath.circuit import amplitudeAt
from whichpath.circuit import detectAmplitude
from whichpath.circuit import Location
from whichpath.circuit import Propagation
from whichpath.circuit import transferFrom
from whichpath.interfaces import InvalidCircuit
from whichpath.interfaces import InvalidElement
from whichpath.interfaces import IPresenceReport
from whichpath.qstate import GENERATOR
from whichpath.qstate import perpIndex
from whichpath.qstate import PHI
from whichpath.qstate import probeCoupling
from whichpath.utils import getSettings
from whichpath.utils import pick
from zope.interface import implementer

import logging
import math


logger = logging.getLogger("whichpath")

ANALYTIC = "analytic"
FINITE_DIFFERENCE = "finiteDifference"
MODES = {
    "analytic": ANALYTIC,
    "fd": FINITE_DIFFERENCE,
    "finiteDifference": FINITE_DIFFERENCE,
}

SQRT2 = math.sqrt(2.0)


class Divergent:
    """Stands in for alpha when its epsilon -> 0 limit does not exist.

    ``raw`` is the finite-epsilon signal of a normalized pointer,
    <Phi-perp|out> / (epsilon |out|), when it was computed; ``raw * epsilon``
    stays finite while alpha grows like 1/epsilon.
    """

    def __init__(self, raw=None, epsilon=None):
        self.raw = raw
        self.epsilon = epsilon

    def __eq__(self, other):
        if not isinstance(other, Divergent):
            return NotImplemented
        return (self.raw, self.epsilon) == (other.raw, other.epsilon)

    def __hash__(self):
        return hash((self.raw, self.epsilon))

    def __repr__(self):
        if self.raw is None:
            return "<Divergent>"
        return f"<Divergent raw={self.raw:.6g} at epsilon={self.epsilon:g}>"


class Undefined:
    """A ratio with no meaningful value"""

    def __init__(self, reason):
        self.reason = reason

    def __repr__(self):
        return f"<Undefined: {self.reason}>"


def isDivergent(value):
    return isinstance(value, Divergent)


@dataclass(frozen=True)
class PresenceEntry:
    site: str
    alphaObserved: object
    alphaOracle: object
    magnitude: float
    lying: bool
    divergent: bool


@dataclass(frozen=True)
class TraceRecord:
    """Momentum kick a mirror on the site's path receives"""

    site: str
    mirrorKick: float


@implementer(IPresenceReport)
@dataclass
class PresenceReport:
    entries: list
    epsilonUsed: float
    mode: str
    traces: list = field(default_factory=list)
    condition: object = None

    def entry(self, site):
        for entry in self.entries:
            if entry.site == site:
                return entry
        raise KeyError(site)

    def observed(self):
        return {entry.site: entry.alphaObserved for entry in self.entries}

    def oracle(self):
        return {entry.site: entry.alphaOracle for entry in self.entries}

    def magnitudes(self):
        """The |alpha| view, all an intensity readout can show"""
        return {entry.site: entry.magnitude for entry in self.entries}

    def lyingSites(self):
        return [entry.site for entry in self.entries if entry.lying]

    def divergentSites(self):
        return [entry.site for entry in self.entries if entry.divergent]


@dataclass(frozen=True)
class TwoProbeState:
    """Detect-port amplitudes with two probes on separate registers.

    ``c10`` is the amplitude of Phi_A-perp Phi_B, ``c01`` of Phi_A Phi_B-perp.
    """

    c00: complex
    c10: complex
    c01: complex
    c11: complex

    def ratios(self):
        return self.c10 / self.c00, self.c01 / self.c00

    def projectAPerp(self):
        """B-ancilla amplitudes (Phi_B, Phi_B-perp) once Phi_A-perp was found"""
        return self.c10, self.c11

    def projectBPerp(self):
        """A-ancilla amplitudes (Phi_A, Phi_A-perp) once Phi_B-perp was found"""
        return self.c01, self.c11


#
# Helpers
#


def resolveCondition(c, condition):
    """A marker id or an explicit ``Location`` to condition on, or None"""
    if condition is None or isinstance(condition, Location):
        return condition
    return c.marker(condition)


def _output(c, couplings, condition):
    return Propagation(c, couplings, condition).run()[c.detectPort]


def _rawSignal(out, perp, epsilon):
    norm = math.sqrt(out.norm2())
    if norm == 0.0:
        return None
    return out[perp] / (epsilon * norm)


def isLying(observed, oracle, tolerance):
    if isDivergent(observed) or isDivergent(oracle):
        return isDivergent(observed) != isDivergent(oracle)
    return abs(observed - oracle) > tolerance


#
# Signals
#


def alphaAnalytic(c, site, condition=None, tolerance=None):
    """Exact first-order signal of ``site``.

    The probe's generator is propagated once; alpha is its Phi-perp
    amplitude at the detector over the undisturbed Phi amplitude.
    """
    probe = c.probe(site)
    location = resolveCondition(c, condition)
    tolerance = pick(tolerance, getSettings().divergenceTolerance)

    denominator = _output(c, {}, location)[PHI]
    if abs(denominator) < tolerance:
        logger.debug("Signal at %s diverges: postselection amplitude vanishes", site)
        return Divergent()

    response = _output(c, {site: GENERATOR}, location)
    return response[perpIndex(probe.register)] / denominator


def alphaFiniteDifference(
    c, site, epsilon=None, condition=None, central=None, tolerance=None
):
    """Signal of ``site`` read from an actual disturbance of size epsilon.

    Central differences across plus and minus epsilon are the default and
    converge to ``alphaAnalytic`` as epsilon**2.
    """
    settings = getSettings()
    epsilon = pick(epsilon, settings.defaultEpsilon)
    central = pick(central, settings.centralDifference)
    tolerance = pick(tolerance, settings.divergenceTolerance)
    if not math.isfinite(epsilon) or epsilon <= 0:
        raise InvalidElement(f"epsilon must be > 0, got {epsilon!r}")

    probe = c.probe(site)
    location = resolveCondition(c, condition)
    perp = perpIndex(probe.register)

    def ratio(e):
        out = _output(c, {site: probeCoupling(e)}, location)
        if abs(out[PHI]) < tolerance:
            return Divergent(raw=_rawSignal(out, perp, e), epsilon=abs(e))
        return out[perp] / out[PHI]

    plus = ratio(epsilon)
    if isDivergent(plus):
        logger.debug("Signal at %s diverges at epsilon %g", site, epsilon)
        return plus
    if not central:
        return plus / epsilon
    minus = ratio(-epsilon)
    if isDivergent(minus):
        return minus
    return (plus - minus) / (2 * epsilon)


def weakValueOracle(c, site, condition=None, tolerance=None):
    """Weak value of the projector onto the site's path at the site.

    forward amplitude x backward transfer / postselection amplitude, from
    undisturbed path interference alone.
    """
    location = c.site(site)
    return _weakValueAt(c, location, resolveCondition(c, condition), tolerance)


def pathWeakValue(c, path, tolerance=None):
    """Weak value of the projector onto ``path`` where the path begins"""
    return _weakValueAt(c, c.pathStart(path), None, tolerance)


def _weakValueAt(c, location, condition, tolerance):
    tolerance = pick(tolerance, getSettings().divergenceTolerance)
    amplitude = detectAmplitude(c, condition)
    if abs(amplitude) < tolerance:
        return Divergent()
    forward = amplitudeAt(c, location, condition)
    backward = transferFrom(c, location, condition)
    return forward * backward / amplitude


def cutPresence(c, cut, tolerance=None):
    """Total weak-value presence over a complete cut; 1 for every cut"""
    cut = tuple(cut)
    if not c.isCompleteCut(cut):
        raise InvalidCircuit(f"{', '.join(cut)} is not a complete cut")
    total = 0j
    for path in cut:
        value = pathWeakValue(c, path, tolerance)
        if isDivergent(value):
            return value
        total += value
    return total


def fullReport(c, mode=ANALYTIC, epsilon=None, momentum=None, condition=None, sites=None):
    """Observed signal, weak value and flags for every probe site.

    Probes are switched on one at a time. With ``momentum`` the report also
    carries the mirror kick Re(weak value) * sqrt(2) * p for every site.
    """
    settings = getSettings()
    try:
        mode = MODES[mode]
    except KeyError:
        raise InvalidElement(f"unknown mode {mode!r}") from None
    if mode == FINITE_DIFFERENCE:
        epsilonUsed = pick(epsilon, settings.defaultEpsilon)
    else:
        epsilonUsed = 0.0
    sites = c.probeSites() if sites is None else tuple(sites)

    entries = []
    for site in sites:
        if mode == FINITE_DIFFERENCE:
            observed = alphaFiniteDifference(c, site, epsilonUsed, condition)
        else:
            observed = alphaAnalytic(c, site, condition)
        oracle = weakValueOracle(c, site, condition)
        divergent = isDivergent(observed)
        lying = isLying(observed, oracle, settings.lyingTolerance)
        if lying:
            logger.warning("Site %s lies: signal %r, weak value %r", site, observed, oracle)
        entries.append(
            PresenceEntry(
                site=site,
                alphaObserved=observed,
                alphaOracle=oracle,
                magnitude=math.inf if divergent else abs(observed),
                lying=lying,
                divergent=divergent,
            )
        )

    traces = []
    if momentum is not None:
        for entry in entries:
            if isDivergent(entry.alphaOracle):
                kick = math.nan
            else:
                kick = entry.alphaOracle.real * SQRT2 * momentum
            traces.append(TraceRecord(entry.site, kick))

    return PresenceReport(
        entries=entries,
        epsilonUsed=epsilonUsed,
        mode=mode,
        traces=traces,
        condition=condition,
    )


#
# Conditioning and secondary presence
#


def conditionalAlpha(c, site, marker=None, epsilon=None):
    """Signal of ``site`` given the particle was found at ``marker``.

    Without a marker the particle is localized at the probe site itself.
    A divergent result carries the finite-epsilon pointer signal.
    """
    location = c.site(site) if marker is None else c.marker(marker)
    value = alphaAnalytic(c, site, location)
    if not isDivergent(value):
        return value
    epsilon = pick(epsilon, getSettings().defaultEpsilon)
    out = _output(c, {site: probeCoupling(epsilon)}, location)
    raw = _rawSignal(out, perpIndex(c.probe(site).register), epsilon)
    return Divergent(raw=raw, epsilon=epsilon)


def presenceRatio(c, site, marker=None, tolerance=None):
    """|signal| over the |signal| of a particle localized on the path.

    A finite signal against a divergent reference is a ratio of zero: the
    particle was not there.
    """
    tolerance = pick(tolerance, getSettings().divergenceTolerance)
    observed = alphaAnalytic(c, site)
    reference = conditionalAlpha(c, site, marker)
    if isDivergent(observed) and isDivergent(reference):
        return Undefined("signal and reference both diverge")
    if isDivergent(reference):
        return 0.0
    if isDivergent(observed):
        return math.inf
    if abs(reference) < tolerance:
        if abs(observed) < tolerance:
            return Undefined("signal and reference both vanish")
        return math.inf
    return abs(observed) / abs(reference)


def twoProbeAnalysis(c, probeA, probeB, epsilon=None):
    """Both probes on at once, each writing to its own ancilla register"""
    first = c.probe(probeA)
    second = c.probe(probeB)
    if probeA == probeB or first.register == second.register:
        raise InvalidCircuit(
            "two-probe analysis needs two probes on distinct ancilla registers",
            label=probeB,
        )
    epsilon = pick(epsilon, getSettings().defaultEpsilon)
    if not math.isfinite(epsilon) or epsilon < 0:
        raise InvalidElement(f"epsilon must be >= 0, got {epsilon!r}")
    coupling = probeCoupling(epsilon)
    out = _output(c, {probeA: coupling, probeB: coupling}, None)
    a = perpIndex(first.register)
    b = perpIndex(second.register)
    return TwoProbeState(c00=out[PHI], c10=out[a], c01=out[b], c11=out[a | b])


def blockEffectProbe(c, blockPath, probes=None):
    """First-order signals without and with a block on ``blockPath``"""
    before = c.withoutBlocks(blockPath)
    after = before.withBlock(blockPath)
    probes = c.probeSites() if probes is None else tuple(probes)
    return {site: (alphaAnalytic(before, site), alphaAnalytic(after, site)) for site in probes}
