"""Named test scenarios: a base ring, an ideal, and the objects the certificates are run on."""

from dataclasses import dataclass, field as dataclass_field
from functools import cached_property
from typing import Callable, Dict, List, Optional

from algebra_core.ideals import QuotientRing
from algebra_core.polynomial import Polynomial, PolynomialRing, polynomials_from
from algebra_core.scalars import field_from_name
from config.config import DEFAULT_LIMITS, FIELD, Limits
from filtered_derived.certificates import AdjunctionTarget, Family, SemiorthCertificate, semiorth_check
from filtered_derived.complexes import ComplexOfGradedModules
from graded.ring import DegreeWindow
from proj_geometry.pushforward import structure_pushforward
from rees.filtered import ZModule, i_n
from rees.functors import rees_module
from rees.presentation import ExtReesPresentation, ReesPresentation, ext_rees_presentation, rees_presentation

STRATIFICATION = "stratification"
TORSION_VERSUS_PUSHFORWARD = "torsion-vs-pushforward"


@dataclass
class Scenario:
    name: str
    base: QuotientRing
    generators: List[Polynomial]
    slow: bool = False
    limits: Limits = dataclass_field(default=DEFAULT_LIMITS)

    @cached_property
    def rees(self) -> ReesPresentation:
        return rees_presentation(self.base, self.generators, limits=self.limits)

    @cached_property
    def extended(self) -> ExtReesPresentation:
        return ext_rees_presentation(self.base, self.generators, limits=self.limits)

    @cached_property
    def residue_field(self) -> ZModule:
        """R/I as a module over itself."""
        return ZModule(self.base, self.generators, 1)

    def torsion_object(self, n: int) -> ComplexOfGradedModules:
        """i_n(R/I) as a complex concentrated in degree 0."""
        module = rees_module(i_n(self.residue_field, n), self.extended, self.limits)
        return ComplexOfGradedModules.single(module, label=f"i{n}(k)")


def _scenario(name: str, names: List[str], relations: List[str], generators: List[str], field_text: Optional[str],
              slow: bool = False) -> Scenario:
    ambient = PolynomialRing(names, field_from_name(field_text or FIELD))
    base = QuotientRing(ambient, relations)
    return Scenario(name, base, polynomials_from(ambient, generators), slow)


def nilpotent_scenario(field_text: Optional[str] = None) -> Scenario:
    """QQ[x]/(x^3) with I = (x): the blowup is empty."""
    return _scenario("nilpotent", ["x"], ["x^3"], ["x"], field_text)


def plane_scenario(field_text: Optional[str] = None) -> Scenario:
    return _scenario("plane", ["x", "y"], [], ["x", "y"], field_text)


def principal_scenario(field_text: Optional[str] = None) -> Scenario:
    return _scenario("principal", ["x"], [], ["x"], field_text)


def cone_scenario(field_text: Optional[str] = None) -> Scenario:
    """The cone over a plane cubic, blown up at its vertex."""
    return _scenario("cone", ["x", "y", "z"], ["x^3 + y^3 + z^3"], ["x", "y", "z"], field_text, slow=True)


SCENARIOS: Dict[str, Callable[[Optional[str]], Scenario]] = {
    "nilpotent": nilpotent_scenario,
    "plane": plane_scenario,
    "principal": principal_scenario,
    "cone": cone_scenario,
}


def scenario(name: str, field_text: Optional[str] = None) -> Scenario:
    if name not in SCENARIOS:
        raise ValueError(f"[SCENARIO] unknown scenario '{name}', expected one of {sorted(SCENARIOS)}")
    return SCENARIOS[name](field_text)


def stratification_families(case: Scenario, levels: int = 3) -> List[Family]:
    """One family per level: i_0(k), i_1(k), ..."""
    return [(f"i{n}", [case.torsion_object(n)]) for n in range(levels)]


def stratification_adjunctions(case: Scenario, levels: int = 3) -> List[AdjunctionTarget]:
    return [AdjunctionTarget(f"i{n}(k)", case.residue_field, n) for n in range(levels)]


def pushforward_families(case: Scenario, window: DegreeWindow, depth: int = 1) -> List[Family]:
    """Rf̃_*𝒪_Y first, the torsion object i_0(k) after it."""
    push = structure_pushforward(case.extended, window, depth, case.limits)
    return [("pushforward", [push.complex]), ("torsion", [case.torsion_object(0)])]


def scenario_semiorth(case: Scenario, pattern: str, window: Optional[DegreeWindow] = None) -> SemiorthCertificate:
    """Run one of the two decomposition patterns on a scenario with its default windows."""
    window = window or DegreeWindow(0, 2)
    if pattern == STRATIFICATION:
        return semiorth_check(stratification_families(case), pattern, (0, 1), window, case.limits,
                              adjunctions=stratification_adjunctions(case), presentation=case.extended)
    if pattern == TORSION_VERSUS_PUSHFORWARD:
        return semiorth_check(pushforward_families(case, window), pattern, (0, 2), window, case.limits)
    raise ValueError(f"[SEMIORTH] unknown pattern '{pattern}'")
