from plone.testing.zca import UNIT_TESTING
from whichpath.circuit import amplitudeAt
from whichpath.circuit import backwardTransfer
from whichpath.circuit import beamSplit
from whichpath.circuit import Circuit
from whichpath.circuit import detectAmplitude
from whichpath.circuit import detectIntensity
from whichpath.circuit import forwardAmplitudes
from whichpath.circuit import Location
from whichpath.circuit import propagate
from whichpath.circuit import SplitterStage
from whichpath.circuit import transferFrom
from whichpath.circuit import tuningScan
from whichpath.elements.default import Marker
from whichpath.elements.default import PhaseShift
from whichpath.elements.default import PiDevice
from whichpath.elements.default import ProbeSite
from whichpath.interfaces import InvalidCircuit
from whichpath.interfaces import InvalidElement
from whichpath.interfaces import UnknownLabel
from whichpath.presets import buildPreset
from whichpath.qstate import AncillaVector
from whichpath.qstate import phi
from whichpath.qstate import PHI
from whichpath.qstate import PHI_PERP
from whichpath.qstate import totalNorm2

import math
import unittest


def mzi(ratio="1/2", bElements=()):
    paths = {
        "IN": (ProbeSite("IN"),),
        "A": (ProbeSite("A"),),
        "B": (ProbeSite("B"),) + tuple(bElements),
        "OUT": (),
        "REF": (),
    }
    splitters = [
        SplitterStage("BS1", ["IN"], ["A", "B"], ratio),
        SplitterStage("BS2", ["A", "B"], ["OUT", "REF"], ratio),
    ]
    return Circuit(paths, splitters, "OUT")


class TestBeamSplit(unittest.TestCase):

    layer = UNIT_TESTING

    def test_mixing(self):
        t = r = math.sqrt(0.5)
        u, v = beamSplit(phi(), AncillaVector.zero(), t, r)
        self.assertEqual(phi() * r, u)
        self.assertEqual(phi() * t, v)

    def test_conserves_norm(self):
        t, r = 0.6, 0.8
        u = AncillaVector([0.3, 0.4j])
        v = AncillaVector([0.5j, -0.1])
        u2, v2 = beamSplit(u, v, t, r)
        self.assertAlmostEqual(u.norm2() + v.norm2(), u2.norm2() + v2.norm2(), places=15)

    def test_non_unitary(self):
        with self.assertRaises(InvalidElement):
            beamSplit(phi(), phi(), 0.9, 0.9)


class TestCircuitValidation(unittest.TestCase):

    layer = UNIT_TESTING

    def test_source(self):
        self.assertEqual("IN", mzi().source)

    def test_undeclared_path(self):
        with self.assertRaises(InvalidCircuit) as cm:
            Circuit({"IN": ()}, [SplitterStage("BS", ["IN"], ["A", "B"], "1/2")], "A")
        self.assertEqual("A", cm.exception.label)

    def test_two_sources(self):
        with self.assertRaises(InvalidCircuit):
            Circuit({"IN": (), "X": ()}, [], "IN")

    def test_consumed_before_produced(self):
        paths = {"IN": (), "A": (), "B": (), "C": (), "D": ()}
        splitters = [
            SplitterStage("BS1", ["A", "B"], ["C", "D"], "1/2"),
            SplitterStage("BS2", ["IN"], ["A", "B"], "1/2"),
        ]
        with self.assertRaises(InvalidCircuit):
            Circuit(paths, splitters, "C")

    def test_cycle_has_no_source(self):
        paths = {"A": (), "B": ()}
        splitters = [SplitterStage("BS", ["A"], ["B", "A"], "1/2")]
        with self.assertRaises(InvalidCircuit):
            Circuit(paths, splitters, "B")

    def test_detect_must_be_output(self):
        with self.assertRaises(InvalidCircuit):
            Circuit(mzi().paths, mzi().splitters, "A")

    def test_duplicate_probe(self):
        paths = {"IN": (ProbeSite("X"), ProbeSite("X"))}
        with self.assertRaises(InvalidCircuit):
            Circuit(paths, [], "IN")

    def test_register_out_of_range(self):
        with self.assertRaises(InvalidCircuit):
            Circuit({"IN": (ProbeSite("X", 1),)}, [], "IN")
        Circuit({"IN": (ProbeSite("X", 1),)}, [], "IN", ancillaCount=2)

    def test_unknown_lookups(self):
        c = mzi()
        with self.assertRaises(UnknownLabel):
            c.site("Z")
        with self.assertRaises(UnknownLabel):
            c.marker("Z")


class TestPropagate(unittest.TestCase):

    layer = UNIT_TESTING

    def test_output_cut(self):
        state = propagate(mzi())
        self.assertEqual(("OUT", "REF"), state.labels())
        self.assertAlmostEqual(1.0, state["OUT"][PHI].real, places=15)
        self.assertEqual(0, state["REF"][PHI])

    def test_unitary_without_blocks(self):
        state = propagate(mzi("9/10"), "A", 0.3)
        self.assertAlmostEqual(1.0, totalNorm2(state), places=14)

    def test_active_probe(self):
        state = propagate(mzi(), "A", 1e-3)
        self.assertAlmostEqual(0.5e-3, state["OUT"][PHI_PERP].real, places=9)

    def test_epsilon_validation(self):
        with self.assertRaises(InvalidElement):
            propagate(mzi(), "A", -1.0)
        with self.assertRaises(InvalidElement):
            propagate(mzi(), "A", float("nan"))

    def test_unknown_probe(self):
        with self.assertRaises(UnknownLabel):
            propagate(mzi(), "Z", 0.1)

    def test_device_invisible_without_disturbance(self):
        plain = propagate(mzi())
        flipped = propagate(mzi(bElements=(PiDevice(),)))
        self.assertEqual(plain, flipped)

    def test_condition_on_marker(self):
        c = mzi(bElements=(Marker("M"),))
        state = propagate(c, conditionOnMarker="M")
        self.assertAlmostEqual(-0.5, state["REF"][PHI].real, places=15)
        self.assertAlmostEqual(0.5, state["OUT"][PHI].real, places=15)


class TestAmplitudes(unittest.TestCase):

    layer = UNIT_TESTING

    def test_forward_amplitudes(self):
        c = mzi("9/10")
        forward = forwardAmplitudes(c)
        a = c.pathStart("A").stage
        self.assertAlmostEqual(math.sqrt(0.9), forward[(a, "A")].real, places=15)

    def test_backward_transfer(self):
        c = mzi("9/10", bElements=(PhaseShift.ofPi(1),))
        self.assertAlmostEqual(math.sqrt(0.9), backwardTransfer(c, 1, "A").real, places=15)
        self.assertAlmostEqual(-math.sqrt(0.1), backwardTransfer(c, 1, "B").real, places=15)

    def test_backward_transfer_needs_live_path(self):
        with self.assertRaises(InvalidCircuit):
            backwardTransfer(mzi(), 0, "A")

    def test_forward_times_backward_sums_over_cut(self):
        c = mzi("9/10", bElements=(PhaseShift(0.7),))
        total = sum(
            amplitudeAt(c, c.pathStart(label)) * transferFrom(c, c.pathStart(label))
            for label in ("A", "B")
        )
        self.assertAlmostEqual(detectAmplitude(c), total, places=15)

    def test_unknown_location(self):
        with self.assertRaises(UnknownLabel):
            amplitudeAt(mzi(), Location(99, "A", 0))

    def test_injection_ignores_source(self):
        c = mzi()
        self.assertAlmostEqual(1 / math.sqrt(2), transferFrom(c, c.pathStart("B")).real, places=15)


class TestCuts(unittest.TestCase):

    layer = UNIT_TESTING

    def test_nested_cuts(self):
        c = buildPreset("fig3a").scenario.circuit
        for cut in (("C", "E"), ("C", "A", "B"), ("C", "F", "D"), ("D", "OUT", "REF"), ("IN",)):
            self.assertTrue(c.isCompleteCut(cut), cut)
        for cut in (("C",), ("C", "E", "A"), ("A", "B"), ("E", "F"), ("OUT", "REF")):
            self.assertFalse(c.isCompleteCut(cut), cut)

    def test_live_sets_are_cuts(self):
        c = buildPreset("fig3a").scenario.circuit
        for live in c.liveSets():
            self.assertTrue(c.isCompleteCut(live), live)

    def test_terminals(self):
        c = buildPreset("fig3a").scenario.circuit
        self.assertEqual(("D", "OUT", "REF"), c.terminals())


class TestVariants(unittest.TestCase):

    layer = UNIT_TESTING

    def test_with_block(self):
        c = mzi().withBlock("B")
        self.assertAlmostEqual(0.5, detectAmplitude(c).real, places=15)
        self.assertEqual(mzi(), c.withoutBlocks())

    def test_without_devices(self):
        c = mzi(bElements=(PiDevice(),))
        self.assertTrue(c.hasDevices())
        self.assertFalse(c.withoutDevices().hasDevices())

    def test_destructive_tuning_is_a_minimum(self):
        c = mzi("9/10")
        angles = [k * math.pi / 8 for k in range(16)]
        scan = tuningScan(c, "B", angles)
        best = min(scan, key=lambda item: item[1])
        self.assertAlmostEqual(math.pi, best[0], places=12)
        self.assertAlmostEqual(0.64, best[1], places=12)
        self.assertAlmostEqual(1.0, detectIntensity(c), places=12)

    def test_equality(self):
        self.assertEqual(mzi(), mzi())
        self.assertEqual(hash(mzi()), hash(mzi()))
        self.assertNotEqual(mzi(), mzi("9/10"))
