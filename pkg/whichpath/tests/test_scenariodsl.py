from fractions import Fraction
from plone.testing.zca import UNIT_TESTING
from whichpath.elements.default import Block
from whichpath.elements.default import PhaseShift
from whichpath.elements.default import ProbeSite
from whichpath.interfaces import IScenario
from whichpath.interfaces import ScenarioSyntaxError
from whichpath.presence import fullReport
from whichpath.presence import weakValueOracle
from whichpath.scenariodsl import formatComplex
from whichpath.scenariodsl import parse
from whichpath.scenariodsl import parseScenario
from whichpath.scenariodsl import serialize
from whichpath.scenariodsl import sourceLines
from whichpath.scenariodsl import tokenize

import math
import unittest


FIG2B = """\
scenario fig2b   # ninety percent splitters
path IN { probe }
path A { probe }
path B { probe }
path OUT { }
path REF { }
split BS1 IN -> A, B ratio 9/10
merge BS2 A, B -> OUT, REF ratio 9/10
detect OUT
"""


class ScenarioTestCase(unittest.TestCase):

    layer = UNIT_TESTING

    def assertPointsAtToken(self, source, diagnostic):
        line = sourceLines(source)[diagnostic.line - 1]
        self.assertTrue(
            line[diagnostic.column - 1 :].startswith(diagnostic.token),
            f"{diagnostic} does not point at {diagnostic.token!r}",
        )

    def errorsOf(self, source):
        result = parse(source)
        self.assertFalse(result.ok)
        for diagnostic in result.diagnostics:
            self.assertPointsAtToken(source, diagnostic)
        return result.errors


class TestTokenize(ScenarioTestCase):
    def test_literals(self):
        tokens, diagnostics = tokenize("phase -1/2pi ratio 9/10 expect A = 0.5-1.5i")
        texts = [t.text for t in tokens]
        self.assertEqual(
            ["phase", "-1/2pi", "ratio", "9/10", "expect", "A", "=", "0.5-1.5i"], texts
        )
        self.assertEqual([], diagnostics)

    def test_positions(self):
        tokens, diagnostics = tokenize("scenario s\r\n  path IN { }")
        path = tokens[2]
        self.assertEqual(("path", 2, 3), (path.text, path.line, path.column))

    def test_comments_are_skipped(self):
        tokens, diagnostics = tokenize("# header\ndetect OUT # trailing")
        self.assertEqual(["detect", "OUT"], [t.text for t in tokens])

    def test_unexpected_character(self):
        tokens, diagnostics = tokenize("detect @OUT")
        self.assertEqual(1, len(diagnostics))
        self.assertEqual((1, 8, "@"), (diagnostics[0].line, diagnostics[0].column, diagnostics[0].token))


class TestParse(ScenarioTestCase):
    def test_minimal(self):
        scenario = parseScenario("scenario s\npath IN { probe }\ndetect IN")
        self.assertTrue(IScenario.providedBy(scenario))
        self.assertEqual("s", scenario.name)
        self.assertEqual(1, scenario.ancillaCount)
        self.assertEqual(("IN",), scenario.circuit.probeSites())
        report = fullReport(scenario.circuit)
        self.assertAlmostEqual(1.0, report.entry("IN").alphaObserved.real, places=15)

    def test_asymmetric_interferometer(self):
        scenario = parseScenario(FIG2B)
        self.assertEqual(Fraction(9, 10), scenario.circuit.splitters[0].splitter.ratio)
        self.assertAlmostEqual(0.9, weakValueOracle(scenario.circuit, "A").real, places=12)

    def test_crlf(self):
        self.assertEqual(parseScenario(FIG2B), parseScenario(FIG2B.replace("\n", "\r\n")))

    def test_bytes(self):
        self.assertEqual(parseScenario(FIG2B), parseScenario(FIG2B.encode("utf-8")))

    def test_elements(self):
        scenario = parseScenario(
            "scenario s\n"
            "ancillas 2\n"
            "path IN { block; probe X register 1; device pi; marker M; phase -pi; "
            "phase 0.25; mirror; }\n"
            "detect IN\n"
            "expect X = 1-2i\n"
        )
        elements = scenario.circuit.paths["IN"]
        self.assertEqual(Block(), elements[0])
        self.assertEqual(ProbeSite("X", 1), elements[1])
        self.assertEqual(PhaseShift.ofPi(-1), elements[4])
        self.assertEqual(PhaseShift(0.25), elements[5])
        self.assertEqual(("M",), scenario.circuit.markers())
        self.assertEqual({"X": 1 - 2j}, scenario.expected)

    def test_cuts(self):
        scenario = parseScenario(FIG2B + "cut A, B\ncut IN\n")
        self.assertEqual((("A", "B"), ("IN",)), scenario.cuts)

    def test_duplicate_expect_is_a_warning(self):
        result = parse(FIG2B + "expect A = 1\nexpect A = 0.9\n")
        self.assertTrue(result.ok)
        self.assertEqual(1, len(result.warnings))
        self.assertEqual(0.9, result.scenario.expected["A"])
        self.assertPointsAtToken(FIG2B + "expect A = 1\nexpect A = 0.9\n", result.warnings[0])

    def test_parse_scenario_raises(self):
        with self.assertRaises(ScenarioSyntaxError) as cm:
            parseScenario("scenario s\npath IN { probe }\n")
        self.assertIn("missing detect", str(cm.exception))


class TestParseErrors(ScenarioTestCase):
    def test_ratio_out_of_range(self):
        source = "scenario s\npath IN { }\npath C { }\npath E { }\nsplit BS1 IN -> C, E ratio 2\ndetect C\n"
        errors = self.errorsOf(source)
        ratio = [e for e in errors if e.message == "ratio outside [0,1]"]
        self.assertEqual(1, len(ratio))
        self.assertEqual((5, 28, "2"), (ratio[0].line, ratio[0].column, ratio[0].token))

    def test_unknown_keyword(self):
        errors = self.errorsOf("scenario s\npath IN { }\nsplitter X IN -> A, B ratio 1\ndetect IN\n")
        self.assertEqual("unknown keyword 'splitter'", errors[0].message)
        self.assertEqual(3, errors[0].line)

    def test_unknown_element(self):
        errors = self.errorsOf("scenario s\npath IN { lens }\ndetect IN\n")
        self.assertEqual("unknown element 'lens'", errors[0].message)

    def test_undeclared_label(self):
        errors = self.errorsOf("scenario s\npath IN { }\nsplit BS IN -> A, B ratio 1/2\ndetect A\n")
        messages = [e.message for e in errors]
        self.assertIn("undeclared path 'A'", messages)
        self.assertIn("undeclared path 'B'", messages)

    def test_duplicate_identifier(self):
        errors = self.errorsOf("scenario s\npath IN { probe X; probe X }\ndetect IN\n")
        self.assertEqual("duplicate identifier 'X'", errors[0].message)
        self.assertEqual((2, 26), (errors[0].line, errors[0].column))

    def test_duplicate_path(self):
        errors = self.errorsOf("scenario s\npath IN { }\npath IN { }\ndetect IN\n")
        self.assertEqual("duplicate identifier 'IN'", errors[0].message)
        self.assertEqual(3, errors[0].line)

    def test_missing_detect(self):
        errors = self.errorsOf("scenario s\npath IN { probe }\n")
        self.assertEqual(["missing detect"], [e.message for e in errors])

    def test_incomplete_cut(self):
        errors = self.errorsOf(FIG2B + "cut A\n")
        self.assertTrue(errors[0].message.startswith("incomplete cut"))

    def test_two_sources(self):
        errors = self.errorsOf("scenario s\npath IN { }\npath X { }\ndetect IN\n")
        self.assertIn("more than one source", errors[0].message)

    def test_register_out_of_range(self):
        errors = self.errorsOf("scenario s\npath IN { probe register 1 }\ndetect IN\n")
        self.assertIn("register 1", errors[0].message)

    def test_expect_unknown_site(self):
        errors = self.errorsOf(FIG2B + "expect Q = 1\n")
        self.assertEqual("expect for unknown probe site 'Q'", errors[0].message)

    def test_keyword_as_label(self):
        errors = self.errorsOf("scenario s\npath detect { }\ndetect IN\n")
        self.assertIn("keyword", errors[0].message)

    def test_unexpected_end(self):
        errors = self.errorsOf("scenario s\npath IN {")
        self.assertIn("end of input", errors[0].message)

    def test_empty(self):
        result = parse("")
        self.assertFalse(result.ok)
        self.assertEqual(1, len(result.errors))

    def test_recovers_after_error(self):
        errors = self.errorsOf("scenario s\npath IN { }\npath A { lens }\npath IN { }\n")
        self.assertEqual(
            ["unknown element 'lens'", "duplicate identifier 'IN'"],
            [e.message for e in errors[:2]],
        )

    def test_never_raises_on_garbage(self):
        for source in ("{{{", "->->", "scenario", "expect = =", b"\xff\xfe\x00", "phase 1e999pi"):
            result = parse(source)
            self.assertFalse(result.ok)


class TestSerialize(ScenarioTestCase):
    def test_canonical_form(self):
        text = serialize(parseScenario(FIG2B))
        self.assertEqual(
            "scenario fig2b\n"
            "path IN { probe IN }\n"
            "path A { probe A }\n"
            "path B { probe B }\n"
            "path OUT { }\n"
            "path REF { }\n"
            "split BS1 IN -> A, B ratio 9/10\n"
            "merge BS2 A, B -> OUT, REF ratio 9/10\n"
            "detect OUT\n",
            text,
        )

    def test_round_trip(self):
        scenario = parseScenario(FIG2B + "cut A, B\nexpect A = 0.9\nexpect B = -0.5+0.25i\n")
        self.assertEqual(scenario, parseScenario(serialize(scenario)))

    def test_deterministic(self):
        scenario = parseScenario(FIG2B)
        self.assertEqual(serialize(scenario), serialize(scenario))

    def test_comments_are_dropped(self):
        self.assertNotIn("#", serialize(parseScenario(FIG2B)))

    def test_angles_round_trip(self):
        for angle in ("pi", "-pi", "1/2pi", "-3/4pi", "0.3", "-1e-05"):
            source = f"scenario s\npath IN {{ phase {angle} }}\ndetect IN\n"
            scenario = parseScenario(source)
            self.assertEqual(scenario, parseScenario(serialize(scenario)))

    def test_format_complex(self):
        self.assertEqual("1", formatComplex(1))
        self.assertEqual("-0.125", formatComplex(-0.125))
        self.assertEqual("0.5+0.25i", formatComplex(0.5 + 0.25j))
        self.assertEqual("1-2i", formatComplex(1 - 2j))
        self.assertEqual("-2i", formatComplex(-2j))
        self.assertEqual("0", formatComplex(complex(-0.0, 0)))
        self.assertEqual(math.pi, complex(formatComplex(math.pi)).real)
