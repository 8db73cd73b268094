"""The ``.ifz`` scenario language.

A scenario file names a circuit and lists its paths, beam splitters,
detector, declared cuts and expected signals::

    scenario fig2a
    path IN { probe IN }
    path A { probe A }
    path B { probe B }
    path OUT { probe OUT }
    path REF { }
    split BS1 IN -> A, B ratio 1/2
    merge BS2 A, B -> OUT, REF ratio 1/2
    detect OUT
    expect A = 0.5

``#`` starts a comment that runs to the end of the line; whitespace and
line breaks are otherwise insignificant. ``parse()`` never raises: it
returns the scenario together with diagnostics pointing at the offending
tokens. ``serialize()`` writes the canonical form, which drops comments.
"""
from collections import namedtuple
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from whichpath.circuit import Circuit
from whichpath.circuit import SplitterStage
from whichpath.elements.default import Block
from whichpath.elements.default import Marker
from whichpath.elements.default import Mirror
from whichpath.elements.default import PhaseShift
from whichpath.elements.default import PiDevice
from whichpath.elements.default import ProbeSite
from whichpath.interfaces import DimensionMismatch
from whichpath.interfaces import InvalidCircuit
from whichpath.interfaces import InvalidElement
from whichpath.interfaces import IScenario
from whichpath.interfaces import ScenarioSyntaxError
from zope.interface import implementer

import cmath
import logging
import math
import re


logger = logging.getLogger("whichpath")

ERROR = "error"
WARNING = "warning"

MAX_ANCILLAS = 8

STATEMENTS = ("scenario", "ancillas", "path", "split", "merge", "detect", "cut", "expect")
ELEMENTS = ("probe", "device", "block", "marker", "phase", "mirror")
RESERVED = frozenset(STATEMENTS + ELEMENTS + ("ratio", "register", "pi"))

IDENT = "ident"
LITERAL = "literal"
ARROW = "arrow"
PUNCT = "punct"

Token = namedtuple("Token", ("kind", "text", "line", "column"))

_TOKENS = re.compile(
    r"""
      (?P<newline>\r\n|\r|\n)
    | (?P<space>[ \t\f\v]+)
    | (?P<comment>\#[^\r\n]*)
    | (?P<arrow>->)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<literal>[-+]?(?:[0-9.][0-9.eE/+\-]*(?:pi|i)?|pi(?![A-Za-z0-9_])))
    | (?P<punct>[{};,=])
    """,
    re.VERBOSE,
)
_NEWLINE = re.compile(r"\r\n|\r|\n")
_INTEGER = re.compile(r"[0-9]+")
_RATIONAL = re.compile(r"[-+]?[0-9]+(?:\.[0-9]+)?(?:/[0-9]+)?")


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: str = ERROR
    token: str = ""

    def __str__(self):
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


@implementer(IScenario)
@dataclass
class Scenario:
    name: str
    circuit: Circuit
    ancillaCount: int = 1
    expected: dict = field(default_factory=dict)
    cuts: tuple = ()


@dataclass
class ParseResult:
    scenario: Scenario
    diagnostics: list

    @property
    def errors(self):
        return [d for d in self.diagnostics if d.severity == ERROR]

    @property
    def warnings(self):
        return [d for d in self.diagnostics if d.severity == WARNING]

    @property
    def ok(self):
        return self.scenario is not None and not self.errors


class _Failure(Exception):
    def __init__(self, token, message):
        super().__init__(message)
        self.token = token
        self.message = message


def sourceLines(text):
    """Split ``text`` into lines the way the tokenizer counts them"""
    return _NEWLINE.split(text)


def decodeSource(source):
    if isinstance(source, (bytes, bytearray)):
        return bytes(source).decode("utf-8", errors="replace")
    return source


def tokenize(text):
    """Return ``(tokens, diagnostics)``; unknown characters are skipped"""
    tokens = []
    diagnostics = []
    line = 1
    lineStart = 0
    position = 0
    while position < len(text):
        match = _TOKENS.match(text, position)
        column = position - lineStart + 1
        if match is None:
            char = text[position]
            diagnostics.append(
                ParseDiagnostic(line, column, f"unexpected character {char!r}", ERROR, char)
            )
            position += 1
            continue
        kind = match.lastgroup
        if kind == "newline":
            line += 1
            lineStart = match.end()
        elif kind not in ("space", "comment"):
            tokens.append(Token(kind, match.group(), line, column))
        position = match.end()
    return tokens, diagnostics


#
# Literal conversion
#


def _integer(token):
    if token.kind != LITERAL or not _INTEGER.fullmatch(token.text):
        raise _Failure(token, f"expected an integer, found {token.text!r}")
    try:
        return int(token.text)
    except ValueError:
        raise _Failure(token, f"integer {token.text!r} is too large") from None


def _ratio(token):
    if token.kind != LITERAL or not _RATIONAL.fullmatch(token.text):
        raise _Failure(token, f"expected a ratio, found {token.text!r}")
    try:
        value = Fraction(token.text)
    except (ValueError, ZeroDivisionError):
        raise _Failure(token, f"invalid ratio {token.text!r}") from None
    if not 0 <= value <= 1:
        raise _Failure(token, "ratio outside [0,1]")
    return value


def _angle(token):
    """A phase element from ``pi``, ``-pi``, ``1/2pi`` or a plain number"""
    text = token.text
    if token.kind == IDENT and text == "pi":
        return PhaseShift.ofPi(1)
    if token.kind != LITERAL:
        raise _Failure(token, f"expected an angle, found {text!r}")
    if text.endswith("pi"):
        body = text[:-2]
        sign = -1 if body.startswith("-") else 1
        body = body.lstrip("+-")
        if not body:
            return PhaseShift.ofPi(sign)
        if not _RATIONAL.fullmatch(body):
            raise _Failure(token, f"invalid angle {text!r}")
        try:
            return PhaseShift.ofPi(sign * Fraction(body))
        except (ValueError, ZeroDivisionError, OverflowError, InvalidElement):
            raise _Failure(token, f"invalid angle {text!r}") from None
    try:
        angle = float(text)
    except ValueError:
        raise _Failure(token, f"invalid angle {text!r}") from None
    if not math.isfinite(angle):
        raise _Failure(token, f"angle {text!r} is not finite")
    return PhaseShift(angle)


def _complex(token):
    text = token.text
    if token.kind != LITERAL or text.endswith("pi"):
        raise _Failure(token, f"expected a complex number, found {text!r}")
    if text.endswith("i"):
        text = text[:-1] + "j"
    try:
        value = complex(text)
    except ValueError:
        raise _Failure(token, f"invalid complex number {token.text!r}") from None
    if not cmath.isfinite(value):
        raise _Failure(token, f"complex number {token.text!r} is not finite")
    return value


#
# Parser
#


class _Parser:
    """Recursive descent over the token list.

    Every statement handler either consumes a complete statement or raises
    ``_Failure``; the statement loop records the failure and skips ahead to
    the next statement keyword.
    """

    def __init__(self, tokens, diagnostics):
        self.tokens = tokens
        self.index = 0
        self.diagnostics = diagnostics
        self.header = tokens[0] if tokens else Token(IDENT, "", 1, 1)
        self.name = None
        self.ancillas = None
        self.paths = {}
        self.probes = {}
        self.markers = set()
        self.splitters = []
        self.splitterNames = set()
        self.detect = None
        self.cuts = []
        self.expected = {}
        self.references = []
        self.labelTokens = {}
        self.handlers = {
            "scenario": self.scenarioStatement,
            "ancillas": self.ancillasStatement,
            "path": self.pathStatement,
            "split": self.splitStatement,
            "merge": self.mergeStatement,
            "detect": self.detectStatement,
            "cut": self.cutStatement,
            "expect": self.expectStatement,
        }

    # Diagnostics

    def error(self, token, message):
        self.diagnostics.append(ParseDiagnostic(token.line, token.column, message, ERROR, token.text))

    def warning(self, token, message):
        self.diagnostics.append(
            ParseDiagnostic(token.line, token.column, message, WARNING, token.text)
        )

    def hasErrors(self):
        return any(d.severity == ERROR for d in self.diagnostics)

    # Token stream

    def peek(self):
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return None

    def next(self, description="a token"):
        token = self.peek()
        if token is None:
            last = self.tokens[-1] if self.tokens else self.header
            raise _Failure(last, f"expected {description}, found end of input")
        self.index += 1
        return token

    def at(self, kind, text=None):
        token = self.peek()
        return token is not None and token.kind == kind and (text is None or token.text == text)

    def expect(self, kind, text=None, description=None):
        description = description or repr(text)
        token = self.next(description)
        if token.kind != kind or (text is not None and token.text != text):
            raise _Failure(token, f"expected {description}, found {token.text!r}")
        return token

    def label(self, description="a label"):
        token = self.next(description)
        if token.kind != IDENT:
            raise _Failure(token, f"expected {description}, found {token.text!r}")
        if token.text in RESERVED:
            raise _Failure(token, f"{token.text!r} is a keyword and cannot be used as {description}")
        self.labelTokens.setdefault(token.text, token)
        return token

    def recover(self):
        self.index += 1
        while self.peek() is not None:
            token = self.peek()
            if token.kind == IDENT and token.text in STATEMENTS:
                return
            self.index += 1

    # Statements

    def parseFile(self):
        if not self.tokens:
            self.error(self.header, "empty scenario: expected 'scenario' header")
            return
        if not self.at(IDENT, "scenario"):
            self.error(self.header, "missing 'scenario' header")
        while self.peek() is not None:
            token = self.peek()
            try:
                handler = self.handlers.get(token.text) if token.kind == IDENT else None
                if handler is None:
                    raise _Failure(token, f"unknown keyword {token.text!r}")
                self.index += 1
                handler(token)
            except _Failure as failure:
                self.error(failure.token, failure.message)
                self.recover()

    def scenarioStatement(self, keyword):
        name = self.label("a scenario name")
        if self.name is not None:
            raise _Failure(keyword, "duplicate 'scenario' header")
        self.name = name.text
        self.header = keyword

    def ancillasStatement(self, keyword):
        token = self.next("an integer")
        count = _integer(token)
        if not 1 <= count <= MAX_ANCILLAS:
            raise _Failure(token, f"ancillas must be between 1 and {MAX_ANCILLAS}")
        if self.ancillas is not None:
            raise _Failure(keyword, "duplicate 'ancillas' statement")
        self.ancillas = (count, token)

    def pathStatement(self, keyword):
        label = self.label("a path label")
        if label.text in self.paths:
            raise _Failure(label, f"duplicate identifier {label.text!r}")
        self.expect(PUNCT, "{")
        elements = []
        pending = []
        if self.at(PUNCT, "}"):
            self.index += 1
        else:
            while True:
                elements.append(self.element(label.text, pending))
                token = self.next("';' or '}'")
                if token.kind == PUNCT and token.text == ";":
                    if self.at(PUNCT, "}"):
                        self.index += 1
                        break
                    continue
                if token.kind == PUNCT and token.text == "}":
                    break
                raise _Failure(token, f"expected ';' or '}}', found {token.text!r}")
        for kind, name, token, register in pending:
            if kind == "probe":
                self.probes[name] = (token, register)
            else:
                self.markers.add(name)
        self.paths[label.text] = tuple(elements)

    def element(self, path, pending):
        token = self.next("an element")
        if token.kind != IDENT or token.text not in ELEMENTS:
            raise _Failure(token, f"unknown element {token.text!r}")
        keyword = token.text
        if keyword == "probe":
            siteToken = token
            siteId = path
            if self.at(IDENT) and self.peek().text not in RESERVED:
                siteToken = self.label("a probe id")
                siteId = siteToken.text
            register = 0
            registerToken = None
            if self.at(IDENT, "register"):
                self.index += 1
                registerToken = self.next("an integer")
                register = _integer(registerToken)
            if siteId in self.probes or any(p[1] == siteId for p in pending if p[0] == "probe"):
                raise _Failure(siteToken, f"duplicate identifier {siteId!r}")
            pending.append(("probe", siteId, registerToken or siteToken, register))
            return ProbeSite(siteId, register)
        if keyword == "device":
            self.expect(IDENT, "pi", "'pi'")
            return PiDevice()
        if keyword == "marker":
            markerToken = self.label("a marker id")
            markerId = markerToken.text
            if markerId in self.markers or any(p[1] == markerId for p in pending if p[0] == "marker"):
                raise _Failure(markerToken, f"duplicate identifier {markerId!r}")
            pending.append(("marker", markerId, markerToken, None))
            return Marker(markerId)
        if keyword == "phase":
            return _angle(self.next("an angle"))
        if keyword == "block":
            return Block()
        return Mirror()

    def splitterName(self):
        name = self.label("a splitter name")
        if name.text in self.splitterNames:
            raise _Failure(name, f"duplicate identifier {name.text!r}")
        return name

    def ratio(self):
        self.expect(IDENT, "ratio", "'ratio'")
        return _ratio(self.next("a ratio"))

    def splitStatement(self, keyword):
        name = self.splitterName()
        source = self.label("a path label")
        self.expect(ARROW, description="'->'")
        first = self.label("a path label")
        self.expect(PUNCT, ",")
        second = self.label("a path label")
        ratio = self.ratio()
        self.addSplitter(name, (source,), (first, second), ratio)

    def mergeStatement(self, keyword):
        name = self.splitterName()
        u = self.label("a path label")
        self.expect(PUNCT, ",")
        v = self.label("a path label")
        self.expect(ARROW, description="'->'")
        first = self.label("a path label")
        self.expect(PUNCT, ",")
        second = self.label("a path label")
        ratio = self.ratio()
        self.addSplitter(name, (u, v), (first, second), ratio)

    def addSplitter(self, name, inputs, outputs, ratio):
        self.splitterNames.add(name.text)
        self.references.extend(inputs + outputs)
        self.splitters.append(
            SplitterStage(
                name.text,
                [t.text for t in inputs],
                [t.text for t in outputs],
                ratio,
            )
        )

    def detectStatement(self, keyword):
        port = self.label("a path label")
        if self.detect is not None:
            raise _Failure(keyword, "duplicate 'detect' statement")
        self.detect = port
        self.references.append(port)

    def cutStatement(self, keyword):
        labels = [self.label("a path label")]
        while self.at(PUNCT, ","):
            self.index += 1
            labels.append(self.label("a path label"))
        self.references.extend(labels)
        self.cuts.append((tuple(t.text for t in labels), keyword))

    def expectStatement(self, keyword):
        site = self.label("a probe id")
        self.expect(PUNCT, "=")
        value = _complex(self.next("a complex number"))
        if site.text in self.expected:
            self.warning(site, f"duplicate expect for {site.text!r}; the last value wins")
        self.expected[site.text] = (value, site)

    # Assembly

    def build(self):
        if self.name is None:
            if not self.hasErrors():
                self.error(self.header, "missing 'scenario' header")
            return None
        if self.detect is None:
            self.error(self.header, "missing detect")
        for token in self.references:
            if token.text not in self.paths:
                self.error(token, f"undeclared path {token.text!r}")
        ancillas, ancillasToken = self.ancillas or (1, self.header)
        for siteId, (token, register) in self.probes.items():
            if register >= ancillas:
                self.error(
                    token,
                    f"probe {siteId!r} uses register {register} but only {ancillas} "
                    "ancilla register(s) exist",
                )
        for siteId, (value, token) in self.expected.items():
            if siteId not in self.probes:
                self.error(token, f"expect for unknown probe site {siteId!r}")
        if self.hasErrors():
            return None

        try:
            circuit = Circuit(self.paths, self.splitters, self.detect.text, ancillas)
        except (InvalidCircuit, InvalidElement, DimensionMismatch) as e:
            token = self.labelTokens.get(getattr(e, "label", None), self.header)
            self.error(token, str(e))
            return None

        cuts = []
        for labels, token in self.cuts:
            if not circuit.isCompleteCut(labels):
                self.error(token, f"incomplete cut: {', '.join(labels)}")
            cuts.append(labels)
        if self.hasErrors():
            return None

        return Scenario(
            name=self.name,
            circuit=circuit,
            ancillaCount=ancillas,
            expected={site: value for site, (value, token) in self.expected.items()},
            cuts=tuple(cuts),
        )


def parse(source):
    """Parse scenario text (or UTF-8 bytes) into a ``ParseResult``"""
    text = decodeSource(source)
    tokens, diagnostics = tokenize(text)
    parser = _Parser(tokens, diagnostics)
    parser.parseFile()
    scenario = parser.build()
    if scenario is not None and any(d.severity == ERROR for d in diagnostics):
        scenario = None
    if scenario is not None:
        logger.debug(
            "Parsed scenario %s: %d paths, %d splitters",
            scenario.name,
            len(scenario.circuit.paths),
            len(scenario.circuit.splitters),
        )
    return ParseResult(scenario, diagnostics)


def parseScenario(source):
    """Like ``parse()`` but raise ``ScenarioSyntaxError`` on errors"""
    result = parse(source)
    if not result.ok:
        raise ScenarioSyntaxError(result.errors)
    return result.scenario


def loadScenario(path):
    with open(path, "rb") as stream:
        return parseScenario(stream.read())


#
# Serialization
#


def formatReal(value):
    """Shortest round-tripping text, without a trailing '.0'"""
    value = float(value) + 0.0
    text = repr(value)
    if text.endswith(".0"):
        text = text[:-2]
    return text


def formatComplex(value):
    value = complex(value)
    real = formatReal(value.real)
    if value.imag == 0:
        return real
    imag = formatReal(abs(value.imag))
    if value.real == 0:
        sign = "-" if value.imag < 0 else ""
        return f"{sign}{imag}i"
    sign = "-" if value.imag < 0 else "+"
    return f"{real}{sign}{imag}i"


def serialize(scenario):
    """Canonical LF-terminated text of ``scenario``"""
    circuit = scenario.circuit
    lines = [f"scenario {scenario.name}"]
    if scenario.ancillaCount != 1:
        lines.append(f"ancillas {scenario.ancillaCount}")
    for label, elements in circuit.paths.items():
        body = "; ".join(element.serialize() for element in elements)
        lines.append(f"path {label} {{ {body} }}" if body else f"path {label} {{ }}")
    for stage in circuit.splitters:
        inputs = ", ".join(stage.inputs)
        outputs = ", ".join(stage.outputs)
        lines.append(
            f"{stage.kind} {stage.name} {inputs} -> {outputs} {stage.splitter.serialize()}"
        )
    lines.append(f"detect {circuit.detectPort}")
    for cut in scenario.cuts:
        lines.append("cut " + ", ".join(cut))
    for site, value in scenario.expected.items():
        lines.append(f"expect {site} = {formatComplex(value)}")
    return "\n".join(lines) + "\n"
