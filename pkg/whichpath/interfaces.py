from zope import schema
from zope.interface import Attribute
from zope.interface import Interface

import zope.i18nmessageid


_ = zope.i18nmessageid.MessageFactory("whichpath")


class WhichPathError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(WhichPathError, ValueError):
    """Two ancilla vectors or an operator and a vector do not fit together."""


class UnknownLabel(WhichPathError, KeyError):
    """A path, probe site, marker or preset name does not exist."""

    def __init__(self, kind, label):
        super().__init__(label)
        self.kind = kind
        self.label = label

    def __str__(self):
        return f"unknown {self.kind} {self.label!r}"


class InvalidElement(WhichPathError, ValueError):
    """An element or an evaluation parameter is out of range."""


class InvalidCircuit(WhichPathError, ValueError):
    """The wiring of a circuit violates a structural rule.

    ``label`` names the offending path or identifier when there is one, so
    that the scenario parser can point a diagnostic at it.
    """

    def __init__(self, message, label=None):
        super().__init__(message)
        self.label = label


class ScenarioSyntaxError(WhichPathError, ValueError):
    """Raised by ``parseScenario()`` when the source has errors."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else None
        super().__init__(str(first) if first is not None else "invalid scenario")


class IPresenceSettings(Interface):
    """Numerical policy, stored in the registry.

    Look the settings up with ``whichpath.utils.getSettings()``; the schema
    defaults apply when no registry is available.
    """

    divergenceTolerance = schema.Float(
        title=_("Divergence tolerance"),
        description=_(
            "Postselection or Phi-component amplitudes below this value are "
            "reported as divergent"
        ),
        default=1e-10,
        min=0.0,
    )

    lyingTolerance = schema.Float(
        title=_("Lying tolerance"),
        description=_(
            "A site lies when the observed signal differs from the weak "
            "value by more than this"
        ),
        default=1e-9,
        min=0.0,
    )

    defaultEpsilon = schema.Float(
        title=_("Default disturbance strength"),
        description=_("Epsilon used by finite-difference evaluation"),
        default=1e-4,
        min=0.0,
    )

    centralDifference = schema.Bool(
        title=_("Central differences"),
        description=_("Difference across plus and minus epsilon"),
        default=True,
    )

    tableDigits = schema.Int(
        title=_("Table digits"),
        description=_("Significant digits in human-readable tables"),
        default=6,
        min=1,
    )

    machineDigits = schema.Int(
        title=_("Machine digits"),
        description=_("Significant digits in TSV and JSON output"),
        default=12,
        min=1,
    )


class IAncillaVector(Interface):
    """Complex amplitudes over the ancilla basis. Index 0 is Phi."""

    components = Attribute("Read-only numpy array of complex amplitudes")
    dimension = Attribute("Number of basis states, a power of two")


class IJointState(Interface):
    """Map from path label to ancilla vector at one circuit cut."""

    dimension = Attribute("Ancilla dimension shared by all entries")

    def labels():
        """Path labels in insertion order."""

    def replace(label, vector):
        """Return a copy with the entry at ``label`` replaced."""


class IElementType(Interface):
    """Provided by element classes, describing the element kind."""

    title = Attribute("Title")
    description = Attribute("Description")
    keyword = Attribute("Keyword used by the scenario language")
    sort = Attribute("Sort key for listings")


class IElement(Interface):
    """One optical element acting on a single path."""

    def transform(state, path, propagation):
        """Return the joint state after the element acted on ``path``."""

    def key():
        """Tuple describing the element structurally."""


class ICircuit(Interface):
    """A staged, acyclic interferometer with one source and one detector."""

    source = Attribute("Input path label")
    detectPort = Attribute("Postselected output path label")
    ancillaCount = Attribute("Number of two-level ancilla registers")
    stages = Attribute("Ordered tuple of path and splitter stages")


class IScenario(Interface):
    """A parsed scenario: named circuit, expected values and cuts."""

    name = Attribute("Identifier")
    circuit = Attribute("The circuit")
    expected = Attribute("Mapping of probe id to expected complex alpha")
    cuts = Attribute("Declared cuts, tuples of path labels")


class IPresetFactory(Interface):
    """Builds one of the shipped scenarios.

    Register a named utility providing this interface to add a preset; the
    utility name is the preset name.
    """

    title = Attribute("Title")
    description = Attribute("Description")
    source = Attribute("Provenance tag of the golden values")
    sort = Attribute("Sort key for listings")

    def __call__():
        """Return a ``PresetEntry``."""


class IPresenceReport(Interface):
    """Per-site observed signal, weak value and flags."""

    entries = Attribute("List of PresenceEntry records, in declaration order")
    epsilonUsed = Attribute("Epsilon of the evaluation, 0 for analytic mode")
    mode = Attribute("'analytic' or 'finiteDifference'")
    traces = Attribute("List of TraceRecord, empty without a momentum")
