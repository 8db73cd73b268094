"""Shipped scenarios with golden signal tables.

Each preset is an ``IPresetFactory``. The built-in factories below are
always available; named ``IPresetFactory`` utilities registered with the
component registry add presets or replace built-in ones of the same name.
The golden table of a preset is the ``expect`` block of its scenario text.
"""
from dataclasses import dataclass
from dataclasses import field
from whichpath.interfaces import _
from whichpath.interfaces import IPresetFactory
from whichpath.interfaces import UnknownLabel
from whichpath.scenariodsl import parseScenario
from zope.component import getUtilitiesFor
from zope.interface import implementer


PUBLISHED = "published"
DERIVED = "derived"


@dataclass
class PresetEntry:
    name: str
    scenario: object
    goldenTable: dict
    source: str
    title: str = ""
    description: str = ""
    sort: int = 100
    oracleTable: dict = field(default_factory=dict)


@implementer(IPresetFactory)
class PresetFactory:
    """Builds a preset from scenario text.

    ``oracle`` optionally names the weak values the preset is expected to
    show where they differ from the observed signals.
    """

    def __init__(self, name, text, title, description, source, sort, oracle=None):
        self.name = name
        self.text = text
        self.title = title
        self.description = description
        self.source = source
        self.sort = sort
        self.oracle = dict(oracle or {})

    def __call__(self):
        scenario = parseScenario(self.text)
        return PresetEntry(
            name=self.name,
            scenario=scenario,
            goldenTable=dict(scenario.expected),
            source=self.source,
            title=self.title,
            description=self.description,
            sort=self.sort,
            oracleTable=dict(self.oracle),
        )

    def __repr__(self):
        return f"<PresetFactory {self.name}>"


FIG1A = """\
scenario fig1a
path IN { probe IN; mirror; probe OUT }
detect IN
expect IN = 1
expect OUT = 1
"""

FIG1B = """\
scenario fig1b
path IN { probe IN }
path OUT { probe OUT }
path REF { probe REF }
split BS IN -> OUT, REF ratio 1/2
detect OUT
cut IN
cut OUT, REF
expect IN = 1
expect OUT = 1
expect REF = 0
"""

FIG2A = """\
scenario fig2a
path IN { probe IN }
path A { probe A; mirror }
path B { probe B; mirror }
path OUT { probe OUT }
path REF { }
split BS1 IN -> A, B ratio 1/2
merge BS2 A, B -> OUT, REF ratio 1/2
detect OUT
cut IN
cut A, B
cut OUT, REF
expect IN = 1
expect A = 0.5
expect B = 0.5
expect OUT = 1
"""

FIG2A_PI = """\
scenario fig2a_pi
path IN { probe IN }
path A { probe A; mirror }
path B { probe B; device pi; mirror }
path OUT { probe OUT }
path REF { }
split BS1 IN -> A, B ratio 1/2
merge BS2 A, B -> OUT, REF ratio 1/2
detect OUT
cut A, B
expect IN = 0
expect A = 0.5
expect B = -0.5
expect OUT = 1
"""

FIG2B = """\
scenario fig2b
path IN { probe IN }
path A { probe A; mirror }
path B { probe B; mirror }
path OUT { probe OUT }
path REF { }
split BS1 IN -> A, B ratio 9/10
merge BS2 A, B -> OUT, REF ratio 9/10
detect OUT
cut A, B
expect IN = 1
expect A = 0.9
expect B = 0.1
expect OUT = 1
"""

FIG2C = """\
scenario fig2c
path IN { probe IN }
path A { probe A; mirror }
path B { probe B; phase pi; mirror }
path OUT { probe OUT }
path REF { }
split BS1 IN -> A, B ratio 9/10
merge BS2 A, B -> OUT, REF ratio 9/10
detect OUT
cut A, B
expect IN = 1
expect A = 1.125
expect B = -0.125
expect OUT = 1
"""

FIG3A = """\
scenario fig3a
path IN { probe IN }
path C { probe C; mirror }
path E { probe E; marker E }
path A { probe A; marker A; mirror }
path B { probe B; phase pi; mirror }
path F { probe F }
path D { }
path OUT { probe OUT }
path REF { }
split BS1 IN -> C, E ratio 1/3
split BS2 E -> A, B ratio 1/2
merge BS3 A, B -> F, D ratio 1/2
merge BS4 C, F -> OUT, REF ratio 1/3
detect OUT
cut C, E
cut C, A, B
cut C, F, D
cut D, OUT, REF
expect IN = 1
expect C = 1
expect E = 0
expect A = 1
expect B = -1
expect F = 0
expect OUT = 1
"""

FIG3B = """\
scenario fig3b
path IN { probe IN }
path C { probe C; mirror }
path E { probe E; marker E }
path A { probe A; mirror }
path B { device pi; probe B; phase pi; mirror }
path F { probe F }
path D { }
path OUT { probe OUT }
path REF { }
split BS1 IN -> C, E ratio 1/3
split BS2 E -> A, B ratio 1/2
merge BS3 A, B -> F, D ratio 1/2
merge BS4 C, F -> OUT, REF ratio 1/3
detect OUT
cut C, E
cut C, A, B
cut C, F, D
expect IN = 3
expect C = 1
expect E = 2
expect A = 1
expect B = -1
expect F = 0
expect OUT = 1
"""

FIG3A_BLOCK_E = """\
scenario fig3a_block_e
path IN { probe IN }
path C { probe C; mirror }
path E { block; probe E; marker E }
path A { probe A; mirror }
path B { probe B; phase pi; mirror }
path F { probe F }
path D { }
path OUT { probe OUT }
path REF { }
split BS1 IN -> C, E ratio 1/3
split BS2 E -> A, B ratio 1/2
merge BS3 A, B -> F, D ratio 1/2
merge BS4 C, F -> OUT, REF ratio 1/3
detect OUT
expect IN = 1
expect C = 1
expect E = 0
expect A = 0
expect B = 0
expect F = 0
expect OUT = 1
"""

FIG2A_TWO_PROBE = """\
scenario fig2a_two_probe
ancillas 2
path IN { }
path A { probe A; mirror }
path B { probe B register 1; mirror }
path OUT { }
path REF { }
split BS1 IN -> A, B ratio 1/2
merge BS2 A, B -> OUT, REF ratio 1/2
detect OUT
expect A = 0.5
expect B = 0.5
"""

# The weak values of the lying presets: what an undistorted record would show
FIG3A_ORACLE = {"IN": 1, "C": 1, "E": 0, "A": 1, "B": -1, "F": 0, "OUT": 1}
FIG2A_ORACLE = {"IN": 1, "A": 0.5, "B": 0.5, "OUT": 1}

BUILTIN_PRESETS = {
    factory.name: factory
    for factory in (
        PresetFactory(
            "fig1a",
            FIG1A,
            _("Single path"),
            _("One path from source to detector; the particle is there with presence 1."),
            f"{PUBLISHED}: single path reference",
            10,
        ),
        PresetFactory(
            "fig1b",
            FIG1B,
            _("Single beam splitter"),
            _("A balanced splitter; the unobserved port REF shows no signal."),
            f"{PUBLISHED}: single beam splitter reference",
            11,
        ),
        PresetFactory(
            "fig2a",
            FIG2A,
            _("Balanced Mach-Zehnder interferometer"),
            _("Both arms carry presence 1/2."),
            f"{PUBLISHED}: balanced interferometer",
            20,
        ),
        PresetFactory(
            "fig2a_pi",
            FIG2A_PI,
            _("Balanced interferometer with a pi device"),
            _(
                "The pi device sits in arm B downstream of the B probe. The "
                "source and arm B lie: IN shows 0 and B shows -1/2."
            ),
            f"{PUBLISHED}: pi device in a balanced interferometer",
            21,
            oracle=FIG2A_ORACLE,
        ),
        PresetFactory(
            "fig2b",
            FIG2B,
            _("Interferometer with 90% splitters"),
            _("Constructive tuning; presence 0.9 in A and 0.1 in B."),
            f"{PUBLISHED}: asymmetric interferometer, constructive tuning",
            22,
        ),
        PresetFactory(
            "fig2c",
            FIG2C,
            _("Interferometer with 90% splitters, destructive tuning"),
            _(
                "A phase pi on B tunes the detector to minimum intensity; "
                "presence 9/8 in A and -1/8 in B."
            ),
            f"{PUBLISHED}: asymmetric interferometer, destructive tuning",
            23,
        ),
        PresetFactory(
            "fig2a_two_probe",
            FIG2A_TWO_PROBE,
            _("Balanced interferometer with two probes"),
            _(
                "Probes in A and B write to separate ancilla registers; the "
                "doubly disturbed term is absent at the detector."
            ),
            f"{PUBLISHED}: two simultaneous probes",
            24,
        ),
        PresetFactory(
            "fig3a",
            FIG3A,
            _("Nested interferometer"),
            _(
                "Inner interferometer tuned destructively toward F. The "
                "particle shows presence in A and B but none in E and F."
            ),
            f"{PUBLISHED}: nested interferometer",
            30,
        ),
        PresetFactory(
            "fig3b",
            FIG3B,
            _("Nested interferometer with a pi device"),
            _(
                "The pi device sits in arm B upstream of the B probe. E and the "
                "source lie: E shows 2 and IN shows 3 while their weak values "
                "are 0 and 1. A device placed in E instead of B does not "
                "reproduce these values."
            ),
            f"{PUBLISHED}: pi device in the nested interferometer",
            31,
            oracle=FIG3A_ORACLE,
        ),
        PresetFactory(
            "fig3a_block_e",
            FIG3A_BLOCK_E,
            _("Nested interferometer with E blocked"),
            _(
                "A block at the start of E removes the signals in A and B "
                "although E itself has no first order trace."
            ),
            f"{DERIVED}: brute-force propagation with a block in E",
            32,
        ),
    )
}


def presetFactories():
    """Built-in factories updated with the registered ``IPresetFactory``
    utilities
    """
    factories = dict(BUILTIN_PRESETS)
    for name, factory in getUtilitiesFor(IPresetFactory):
        factories[name] = factory
    return factories


def listPresets():
    factories = presetFactories()
    return sorted(factories, key=lambda name: (getattr(factories[name], "sort", 100), name))


def buildPreset(name):
    factory = presetFactories().get(name)
    if factory is None:
        raise UnknownLabel("preset", name)
    return factory()
