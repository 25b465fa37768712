"""Dispatch of CLI commands to the library, one Report per command."""

from typing import Callable, Dict, List, Optional

from algebra_core.polynomial import format_polynomial
from algebra_core.vectors import vec_transfer
from cli.parser import ProblemSpec
from cli.report import Report, RunOptions
from cli.suites import run_suites
from config.config import WINDOW, log_message
from filtered_derived.certificates import obar_complex, rho_n_certificate
from filtered_derived.scenarios import STRATIFICATION, Scenario, scenario, scenario_semiorth
from graded.module import GradedModule
from graded.pieces import graded_piece
from graded.ring import DegreeWindow
from proj_geometry.bound import stability_bound
from proj_geometry.charts import blowup_charts, transition_consistent
from proj_geometry.cohomology import cohomology_table, sections_agree, twisted_sections, vanishing_index
from rees.functors import is_n_stable, rees_module
from rees.presentation import ReesPresentation, assoc_graded, assoc_graded_checks, ext_rees_presentation, \
    rees_presentation

NEEDS_NO_INPUT = ("verify",)


def _window(options: RunOptions) -> DegreeWindow:
    return options.window or DegreeWindow(*WINDOW)


def _ideal(spec: ProblemSpec):
    if not spec.ideal:
        raise ValueError("[CLI] the problem declares no ideal")
    return spec.ideal_generators()


def _polys(polys) -> List[str]:
    return [format_polynomial(p) for p in polys]


def _checks(checks: Dict[int, bool]) -> Dict[str, bool]:
    return {str(n): ok for n, ok in sorted(checks.items())}


def _sheaf_module(spec: ProblemSpec, options: RunOptions, presentation: ReesPresentation) -> GradedModule:
    """The structure sheaf, or the pullback E ⊗ A of a declared module."""
    if options.module is None:
        return presentation.module
    module = spec.module(options.module)
    ring = presentation.ring
    relations = [vec_transfer(r, module.rank, module.ring.ambient, ring.ambient) for r in module.relations]
    return GradedModule(ring, [0] * module.rank, relations)


class CommandRunner:
    """Runs one command against a parsed problem.

    Args:
        spec: the problem; may be ``None`` for ``verify`` and for ``semiorth --scenario``.
        options: command parameters and limits.
    """

    def __init__(self, spec: Optional[ProblemSpec], options: RunOptions):
        self.spec = spec
        self.options = options
        self.limits = options.limits
        self.log = options.log_function or log_message

    def _rees(self, validate: bool = True) -> ReesPresentation:
        return rees_presentation(self.spec.base, _ideal(self.spec), validate, self.limits, self.log)

    def _extended(self, validate: bool = True):
        return ext_rees_presentation(self.spec.base, _ideal(self.spec), validate, self.limits, self.log)

    def rees(self) -> Report:
        presentation = self._rees()
        report = Report("rees", presentation.valid)
        report.entries.append({"kind": "rees-ideal", "variables": list(presentation.ring.names),
                               "generators": _polys(presentation.rees_ideal)})
        report.certificates.append({"kind": "powers", "degrees": _checks(presentation.checks)})
        return report

    def extrees(self) -> Report:
        presentation = self._extended()
        window = _window(self.options)
        report = Report("extrees", presentation.valid and bool(presentation.recovers_base), str(window))
        report.entries.append({"kind": "extended-rees-ideal", "variables": list(presentation.ring.names),
                               "generators": _polys(presentation.rees_ideal)})
        for n in window:
            piece = graded_piece(presentation.module, n, self.limits).module
            report.entries.append({"kind": "piece", "degree": n, "value": piece.describe()})
        for decl in self.spec.filtrations:
            module = rees_module(self.spec.filtration(decl.name), presentation, self.limits)
            report.entries.append({"kind": "rees-module", "filtration": decl.name, "twists": list(module.twists),
                                   "relations": len(module.relations),
                                   "stable": is_n_stable(module, 0, self.limits).stable})
        report.certificates.append({"kind": "powers", "degrees": _checks(presentation.checks)})
        report.certificates.append({"kind": "u=1", "recovers_base": presentation.recovers_base})
        return report

    def grring(self) -> Report:
        presentation = self._extended(validate=False)
        graded = assoc_graded(presentation, validate=False, limits=self.limits, log_function=self.log)
        window = _window(self.options)
        checks = assoc_graded_checks(presentation, graded, window, self.limits)
        report = Report("grring", all(checks.values()), str(window))
        report.entries.append({"kind": "associated-graded", "variables": list(graded.names),
                               "relations": _polys(graded.relations)})
        report.certificates.append({"kind": "quotients-of-powers", "degrees": _checks(checks)})
        return report

    def charts(self) -> Report:
        atlas = blowup_charts(self._rees(validate=False), self.log)
        report = Report("charts")
        for chart in atlas:
            report.entries.append({"kind": "chart", "index": chart.index, "empty": chart.empty,
                                   "variables": list(chart.ring.names),
                                   "relations": _polys(chart.ring.reduced_relations())})
        consistent = True
        for i in range(len(atlas)):
            for j in range(i + 1, len(atlas)):
                ok = transition_consistent(atlas, i, j, self.limits)
                consistent = consistent and ok
                report.certificates.append({"kind": "transition", "charts": [i, j], "ok": ok})
        report.certificates.append({"kind": "empty-blowup", "value": atlas.is_empty})
        report.verdict = consistent
        return report

    def sections(self) -> Report:
        presentation = self._rees(validate=False)
        module = _sheaf_module(self.spec, self.options, presentation)
        twists = self.options.twists
        report = Report("sections", window=str(twists))
        for m in twists:
            entry = twisted_sections(module, m, self.limits, self.log)
            report.entries.append({"kind": "sections", "twist": m, "value": entry.module.describe(),
                                   "exponent": entry.exponent,
                                   "agrees": sections_agree(module, m, self.limits, self.log)})
        return report

    def cohomology(self) -> Report:
        presentation = self._rees(validate=False)
        module = _sheaf_module(self.spec, self.options, presentation)
        max_h = min(self.options.max_h, vanishing_index(presentation.ring, self.limits))
        table = cohomology_table(module, self.options.twists, max_h, self.limits, self.log)
        report = Report("cohomology", window=str(self.options.twists))
        report.entries.extend(dict(row, kind="cohomology") for row in table.rows())
        return report

    def bound(self) -> Report:
        result = stability_bound(self.spec.base, _ideal(self.spec), self.options.limit, self.limits, self.log)
        report = Report("bound", result.bound is not None)
        report.entries.extend(dict(e.as_dict(), kind="twist") for e in result.evidence)
        report.certificates.append({"kind": "bound", "limit": result.limit, "bound": result.bound,
                                    "failures": result.failures()})
        return report

    def rho_cert(self) -> Report:
        presentation = self._extended(validate=False)
        window = _window(self.options)
        depth = self.options.depth
        if depth is None:
            depth = vanishing_index(presentation.rees.ring, self.limits)
        obar = obar_complex(presentation, window, depth, self.limits, self.log)
        ranks = {0: 1}
        if self.options.module is not None:
            ranks = {0: self.spec.module(self.options.module).rank}
        certificate = rho_n_certificate(ranks, self.options.level, obar)
        report = Report("rho-cert", certificate.passed, str(window))
        report.entries.extend(dict(e, kind="term") for e in certificate.evidence)
        report.entries.extend({"kind": "pushforward", **row} for row in obar.pushforward.rows())
        report.certificates.append({"kind": "rho", "level": certificate.level, "torsion_level": certificate.bound,
                                    "passed": certificate.passed, "exact": obar.exact})
        return report

    def semiorth(self) -> Report:
        if self.options.scenario:
            case = scenario(self.options.scenario, self.options.field)
        else:
            case = Scenario("input", self.spec.base, _ideal(self.spec))
        case.limits = self.limits
        pattern = self.options.pattern or STRATIFICATION
        certificate = scenario_semiorth(case, pattern, self.options.window)
        report = Report("semiorth", certificate.verdict, str(certificate.window))
        report.entries.extend(dict(c.as_dict(), kind="cell") for c in certificate.cells)
        report.certificates.append({"kind": "semiorth", "scenario": case.name, "pattern": pattern,
                                    "families": certificate.families, "k_range": list(certificate.k_range),
                                    "failures": len(certificate.failures())})
        return report

    def verify(self) -> Report:
        return run_suites(self.options.suite, self.options)

    def dispatch(self) -> Dict[str, Callable[[], Report]]:
        return {
            "rees": self.rees,
            "extrees": self.extrees,
            "grring": self.grring,
            "charts": self.charts,
            "sections": self.sections,
            "cohomology": self.cohomology,
            "bound": self.bound,
            "rho-cert": self.rho_cert,
            "semiorth": self.semiorth,
            "verify": self.verify,
        }


def needs_input(command: str, options: RunOptions) -> bool:
    if command in NEEDS_NO_INPUT:
        return False
    return not (command == "semiorth" and options.scenario)


def run(spec: Optional[ProblemSpec], command: str, options: Optional[RunOptions] = None) -> Report:
    """Run ``command`` on ``spec``; mathematical failures come back as ``verdict=False``."""
    options = options or RunOptions()
    runner = CommandRunner(spec, options)
    commands = runner.dispatch()
    if command not in commands:
        raise ValueError(f"[CLI] unknown command '{command}', expected one of {sorted(commands)}")
    if spec is None and needs_input(command, options):
        raise ValueError(f"[CLI] '{command}' needs a problem description")
    runner.log(f"[CLI] running {command}")
    return commands[command]()
