"""
Command-line interface for whichpath.

Usage:
    whichpath run fig3b                      # signals and weak values per site
    whichpath run fig2a --format json        # machine-readable report
    whichpath run fig3a --magnitude-only     # |alpha| only
    whichpath sweep fig2b --probe A          # finite differences over epsilon
    whichpath verify                         # all presets against their goldens
    whichpath presets                        # list the shipped scenarios

Exit status: 0 ok, 1 verification failed, 2 unreadable input, 3 divergent
postselection.
"""
from dataclasses import dataclass
from whichpath.circuit import detectAmplitude
from whichpath.interfaces import InvalidCircuit
from whichpath.interfaces import InvalidElement
from whichpath.interfaces import UnknownLabel
from whichpath.presence import alphaAnalytic
from whichpath.presence import alphaFiniteDifference
from whichpath.presence import cutPresence
from whichpath.presence import fullReport
from whichpath.presence import isDivergent
from whichpath.presets import buildPreset
from whichpath.presets import listPresets
from whichpath.scenariodsl import parse
from whichpath.setuphandlers import registerComponents
from whichpath.utils import getSettings

import click
import json
import logging
import math
import numpy as np
import os
import sys


logger = logging.getLogger("whichpath")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_DIVERGENT = 3

MODES = ("analytic", "fd")
FORMATS = ("table", "tsv", "json")
SWEEP_EPSILONS = (1e-2, 1e-3, 1e-4)

VERIFY_TOLERANCE = 1e-9
VERIFY_EPSILON = 1e-4
FD_TOLERANCE = 1e-6
FD_ORDER = 1.9
FD_FLOOR = 1e-10

_handler = None


class InputError(click.ClickException):
    """Unknown preset, unreadable file or a scenario with errors"""

    exit_code = EXIT_BAD_INPUT


@dataclass
class RunConfig:
    input: str
    mode: str = "analytic"
    epsilon: float = None
    probe: str = None
    condition: str = None
    format: str = "table"
    magnitudeOnly: bool = False
    momentum: float = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidElement(f"unknown mode {self.mode!r}")
        if self.format not in FORMATS:
            raise InvalidElement(f"unknown format {self.format!r}")
        if self.mode == "fd" and self.epsilon is not None:
            if not math.isfinite(self.epsilon) or self.epsilon <= 0:
                raise InvalidElement(f"epsilon must be > 0, got {self.epsilon!r}")


def configureLogging(verbose):
    global _handler
    if _handler is not None:
        logger.removeHandler(_handler)
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.addHandler(_handler)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


def loadInput(name):
    """The scenario of a preset name or an ``.ifz`` file"""
    if name.endswith(".ifz") or os.path.sep in name or os.path.isfile(name):
        try:
            with open(name, "rb") as stream:
                source = stream.read()
        except OSError as e:
            raise InputError(f"cannot read {name}: {e.strerror}") from None
        result = parse(source)
        for diagnostic in result.diagnostics:
            click.echo(f"{name}:{diagnostic}", err=True)
        if not result.ok:
            raise InputError(f"{name} has {len(result.errors)} error(s)")
        return result.scenario
    try:
        return buildPreset(name).scenario
    except UnknownLabel as e:
        raise InputError(str(e)) from None


#
# Formatting
#


def roundTo(value, digits):
    """``value`` rounded to ``digits`` significant digits, None if not finite"""
    if value is None or not math.isfinite(value):
        return None
    return float(f"{value:.{digits}g}") + 0.0


def complexParts(value, digits):
    if value is None or isDivergent(value):
        return None, None
    value = complex(value)
    return roundTo(value.real, digits), roundTo(value.imag, digits)


def reportRows(report, digits, magnitudeOnly=False):
    kicks = {trace.site: trace.mirrorKick for trace in report.traces}
    rows = []
    for entry in report.entries:
        row = {"site": entry.site}
        if not magnitudeOnly:
            row["alpha_re"], row["alpha_im"] = complexParts(entry.alphaObserved, digits)
        row["magnitude"] = None if entry.divergent else roundTo(entry.magnitude, digits)
        if not magnitudeOnly:
            row["oracle_re"], row["oracle_im"] = complexParts(entry.alphaOracle, digits)
        row["lying"] = entry.lying
        row["divergent"] = entry.divergent
        if report.traces:
            row["kick"] = roundTo(kicks[entry.site], digits)
        rows.append(row)
    return rows


def formatCell(value, digits, missing, flags):
    if isinstance(value, bool):
        return flags[value]
    if value is None:
        return missing
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


def formatTable(rows, digits):
    if not rows:
        return ""
    columns = list(rows[0])
    cells = [columns]
    for row in rows:
        cells.append([formatCell(row[c], digits, "div", ("no", "yes")) for c in columns])
    widths = [max(len(line[i]) for line in cells) for i in range(len(columns))]
    lines = ["  ".join(text.ljust(width) for text, width in zip(line, widths)).rstrip() for line in cells]
    return "\n".join(lines) + "\n"


def formatTsv(rows, digits):
    if not rows:
        return ""
    columns = list(rows[0])
    lines = ["\t".join(columns)]
    for row in rows:
        lines.append("\t".join(formatCell(row[c], digits, "", ("false", "true")) for c in columns))
    return "\n".join(lines) + "\n"


def formatReport(name, config, report):
    settings = getSettings()
    if config.format == "table":
        digits = settings.tableDigits
    else:
        digits = settings.machineDigits
    rows = reportRows(report, digits, config.magnitudeOnly)
    if config.format == "json":
        document = {
            "scenario": name,
            "mode": config.mode,
            "epsilon": report.epsilonUsed,
            "rows": rows,
        }
        return json.dumps(document, indent=2) + "\n"
    if config.format == "tsv":
        return formatTsv(rows, digits)
    return formatTable(rows, digits)


#
# Commands
#


def cmdRun(config):
    """Return ``(exit status, report text)`` for one run"""
    scenario = loadInput(config.input)
    sites = None if config.probe is None else (config.probe,)
    if config.mode == "analytic" and config.epsilon is not None:
        logger.debug("Ignoring epsilon %g in analytic mode", config.epsilon)
    try:
        report = fullReport(
            scenario.circuit,
            mode=config.mode,
            epsilon=config.epsilon,
            momentum=config.momentum,
            condition=config.condition,
            sites=sites,
        )
    except (UnknownLabel, InvalidElement) as e:
        raise InputError(str(e)) from None
    text = formatReport(scenario.name, config, report)
    divergent = report.divergentSites()
    if divergent:
        logger.warning(
            "Postselection amplitude vanishes in %s: divergent at %s",
            scenario.name,
            ", ".join(divergent),
        )
        return EXIT_DIVERGENT, text
    return EXIT_OK, text


def cmdSweep(input, probe, epsilons, condition=None):
    """TSV of finite-difference signals, largest epsilon first.

    A divergent signal is shown through its raw pointer ratio and the
    product |raw| * epsilon, which stays constant while alpha ~ 1/epsilon.
    """
    scenario = loadInput(input)
    circuit = scenario.circuit
    epsilons = sorted(set(epsilons or SWEEP_EPSILONS), reverse=True)
    for epsilon in epsilons:
        if not math.isfinite(epsilon) or epsilon <= 0:
            raise InputError(f"epsilon must be > 0, got {epsilon!r}")
    try:
        values = [
            (epsilon, alphaFiniteDifference(circuit, probe, epsilon, condition))
            for epsilon in epsilons
        ]
    except UnknownLabel as e:
        raise InputError(str(e)) from None

    digits = getSettings().machineDigits
    lines = []
    if any(isDivergent(value) for _, value in values):
        lines.append("epsilon\traw_re\traw_im\traw_times_epsilon\tdivergent")
        for epsilon, value in values:
            flag = isDivergent(value)
            raw = value.raw if flag else value * epsilon
            re_, im_ = complexParts(raw, digits)
            scaled = None if raw is None else roundTo(abs(raw) * epsilon, digits)
            cells = (epsilon, re_, im_, scaled, flag)
            lines.append("\t".join(formatCell(v, digits, "", ("false", "true")) for v in cells))
    else:
        lines.append("epsilon\talpha_re\talpha_im")
        for epsilon, value in values:
            re_, im_ = complexParts(value, digits)
            lines.append("\t".join(formatCell(v, digits, "", ()) for v in (epsilon, re_, im_)))
    return "\n".join(lines) + "\n"


class Verification:
    """Collects the pass/fail matrix of ``verify``"""

    CHECKS = ("golden", "oracle", "cuts", "fd")

    def __init__(self):
        self.matrix = {}
        self.crossChecks = []
        self.failures = []

    def record(self, preset, check, passed, detail=None):
        previous = self.matrix.setdefault(preset, {}).get(check, True)
        self.matrix[preset][check] = previous and passed
        if not passed:
            self.failures.append(f"{preset} {check} {detail}")

    def compare(self, preset, check, site, expected, observed, tolerance):
        passed = not isDivergent(observed) and abs(complex(observed) - complex(expected)) <= tolerance
        detail = f"{site}: expected {expected!r}, got {observed!r}"
        self.record(preset, check, passed, detail)
        return passed

    @property
    def passed(self):
        return not self.failures

    def render(self):
        width = max([len("preset")] + [len(name) for name in self.matrix])
        lines = ["  ".join(["preset".ljust(width)] + [c.ljust(6) for c in self.CHECKS]).rstrip()]
        for name, results in self.matrix.items():
            cells = []
            for check in self.CHECKS:
                if check not in results:
                    cells.append("-".ljust(6))
                else:
                    cells.append(("pass" if results[check] else "FAIL").ljust(6))
            lines.append("  ".join([name.ljust(width)] + cells).rstrip())
        for title, passed in self.crossChecks:
            lines.append(f"{title}: {'pass' if passed else 'FAIL'}")
        lines.append(f"{len(self.matrix)} presets verified")
        if self.failures:
            lines.append(f"first failure: {self.failures[0]}")
        return "\n".join(lines) + "\n"


def convergenceOrder(epsilons, errors, floor=FD_FLOOR):
    """Slope of log(error) against log(epsilon).

    Errors at or below ``floor`` are rounding noise and carry no slope;
    ``None`` when fewer than two points remain.
    """
    points = [(e, error) for e, error in zip(epsilons, errors) if error > floor]
    if len(points) < 2:
        return None
    x = np.log10([e for e, _ in points])
    y = np.log10([error for _, error in points])
    return float(np.polyfit(x, y, 1)[0])


def checkConvergence(verification, name, circuit, site, analytic):
    """Central differences over the sweep epsilons must close in on
    ``analytic`` at second order.
    """
    errors = []
    for epsilon in SWEEP_EPSILONS:
        value = alphaFiniteDifference(circuit, site, epsilon, central=True)
        errors.append(math.inf if isDivergent(value) else abs(value - analytic))
    if not all(math.isfinite(error) for error in errors):
        verification.record(name, "fd", False, f"{site}: divergent finite difference")
        return None
    order = convergenceOrder(SWEEP_EPSILONS, errors, FD_FLOOR * max(1.0, abs(analytic)))
    passed = order is None or order >= FD_ORDER
    verification.record(name, "fd", passed, f"{site}: observed order {order!r}, errors {errors!r}")
    return order


def verifyPreset(verification, name):
    entry = buildPreset(name)
    circuit = entry.scenario.circuit
    report = fullReport(circuit)
    observed = report.observed()
    oracle = report.oracle()

    for site, expected in entry.goldenTable.items():
        verification.compare(name, "golden", site, expected, observed.get(site), VERIFY_TOLERANCE)

    if entry.oracleTable:
        for site, expected in entry.oracleTable.items():
            verification.compare(name, "oracle", site, expected, oracle.get(site), VERIFY_TOLERANCE)
    elif not circuit.hasDevices():
        for site, value in oracle.items():
            verification.compare(name, "oracle", site, value, observed[site], VERIFY_TOLERANCE)

    if abs(detectAmplitude(circuit)) > getSettings().divergenceTolerance:
        for cut in entry.scenario.cuts:
            total = cutPresence(circuit, cut)
            verification.compare(name, "cuts", ", ".join(cut), 1, total, VERIFY_TOLERANCE)

    for site in circuit.probeSites():
        analytic = alphaAnalytic(circuit, site)
        if isDivergent(analytic):
            continue
        value = alphaFiniteDifference(circuit, site, VERIFY_EPSILON)
        verification.compare(name, "fd", site, analytic, value, FD_TOLERANCE)
        checkConvergence(verification, name, circuit, site, analytic)
    return report


def cmdVerify():
    """Return ``(exit status, pass/fail matrix)``"""
    verification = Verification()
    reports = {}
    for name in listPresets():
        try:
            reports[name] = verifyPreset(verification, name)
        except (InvalidCircuit, InvalidElement, UnknownLabel, ValueError) as e:
            logger.exception("Preset %s could not be verified", name)
            verification.record(name, "golden", False, str(e))

    if "fig3a" in reports and "fig3b" in reports:
        golden = buildPreset("fig3a").goldenTable
        oracle = reports["fig3b"].oracle()
        passed = all(
            verification.compare("fig3b", "oracle", site, value, oracle.get(site), VERIFY_TOLERANCE)
            for site, value in golden.items()
        )
        verification.crossChecks.append(("fig3b weak values equal fig3a golden table", passed))

    if not verification.passed:
        logger.warning("Verification failed: %s", verification.failures[0])
        return EXIT_VERIFY_FAILED, verification.render()
    return EXIT_OK, verification.render()


@click.group()
@click.version_option(package_name="whichpath", prog_name="whichpath")
@click.option("--verbose", "-v", is_flag=True, help="Log debug messages to stderr")
def cli(verbose):
    """Presence signals and weak values in multi-path interferometers."""
    configureLogging(verbose)
    registerComponents()


@cli.command()
@click.argument("input")
@click.option("--mode", type=click.Choice(MODES), default="analytic", show_default=True)
@click.option("--epsilon", type=float, default=None, help="Disturbance strength for --mode fd")
@click.option("--probe", default=None, help="Only report this probe site")
@click.option("--condition", default=None, help="Condition on finding the particle at this marker")
@click.option("--format", "outputFormat", type=click.Choice(FORMATS), default="table", show_default=True)
@click.option("--magnitude-only", "magnitudeOnly", is_flag=True, help="Report |alpha| only")
@click.option("--momentum", type=float, default=None, help="Report mirror kicks for this momentum")
@click.pass_context
def run(ctx, input, mode, epsilon, probe, condition, outputFormat, magnitudeOnly, momentum):
    """Report signal and weak value for every probe site of INPUT.

    INPUT is a preset name or a path to an .ifz file.
    """
    try:
        config = RunConfig(
            input=input,
            mode=mode,
            epsilon=epsilon,
            probe=probe,
            condition=condition,
            format=outputFormat,
            magnitudeOnly=magnitudeOnly,
            momentum=momentum,
        )
    except InvalidElement as e:
        raise InputError(str(e)) from None
    status, text = cmdRun(config)
    click.echo(text, nl=False)
    ctx.exit(status)


@cli.command()
@click.argument("input")
@click.option("--probe", required=True, help="Probe site to disturb")
@click.option("--epsilon", "epsilons", type=float, multiple=True, help="Repeat for several values")
@click.option("--condition", default=None, help="Condition on finding the particle at this marker")
def sweep(input, probe, epsilons, condition):
    """Finite-difference signal of one probe over a range of epsilon."""
    click.echo(cmdSweep(input, probe, epsilons, condition), nl=False)


@cli.command()
@click.pass_context
def verify(ctx):
    """Check every preset against its golden table."""
    status, text = cmdVerify()
    click.echo(text, nl=False)
    ctx.exit(status)


@cli.command()
def presets():
    """List the available presets."""
    for name in listPresets():
        entry = buildPreset(name)
        click.echo(f"{name}\t{entry.title}\t{entry.source}")


if __name__ == "__main__":
    cli()
