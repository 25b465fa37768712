from dataclasses import replace

import pytest

from algebra_core.errors import InconclusiveError
from filtered_derived.certificates import (adjunction_check, obar_complex, rho_fully_faithful, rho_n_certificate,
                                           semiorth_check)
from filtered_derived.complexes import (ChainMap, ComplexOfGradedModules, TorsionLevel, complex_cohomology_modules,
                                        cone, euler_characteristic, torsion_level)
from filtered_derived.hyperext import hyper_ext
from filtered_derived.scenarios import (STRATIFICATION, scenario, scenario_semiorth, stratification_adjunctions,
                                        stratification_families)
from graded.base_module import BaseModule
from graded.module import GradedModule
from graded.ring import DegreeWindow
from proj_geometry.cohomology import vanishing_index
from rees.filtered import ZModule, i_n
from rees.functors import rees_module


@pytest.fixture(scope="module")
def nilpotent_obar(nilpotent):
    return obar_complex(nilpotent.extended, DegreeWindow(0, 2), vanishing_index(nilpotent.rees.ring))


def test_cone_of_the_identity_is_acyclic(principal) -> None:
    free = GradedModule.free(principal.extended.ring, [0])
    single = ComplexOfGradedModules.single(free)
    identity = ChainMap(single, single, {0: free.units()})
    assert identity.commutes()
    mapping_cone = cone(identity)
    assert mapping_cone.degrees() == [-1, 0]
    assert mapping_cone.is_complex()
    assert all(h.is_zero() for h in complex_cohomology_modules(mapping_cone).values())
    assert torsion_level(mapping_cone).level == 0


def test_shift_moves_terms(principal) -> None:
    single = ComplexOfGradedModules.single(GradedModule.free(principal.extended.ring, [0]))
    assert single.shift(1).lo == -1
    assert single.shift(-2).hi == 2


def test_euler_characteristic_over_an_artinian_base(nilpotent) -> None:
    single = ComplexOfGradedModules.single(nilpotent.extended.module)
    assert euler_characteristic(single, DegreeWindow(0, 3)).tolist() == [3, 2, 1, 0]
    assert euler_characteristic(single.shift(1), DegreeWindow(0, 1)).tolist() == [-3, -2]


@pytest.mark.parametrize("n", [0, 1])
def test_torsion_level_of_i_n(principal, n: int) -> None:
    level = torsion_level(principal.torsion_object(n))
    assert level.torsion
    assert level.level == n + 1


def test_nilpotent_unit_cone(nilpotent_obar) -> None:
    assert nilpotent_obar.pushforward.complex.is_zero_complex()
    assert nilpotent_obar.torsion
    assert nilpotent_obar.level.level == 3


def test_rho_certificate_threshold(nilpotent_obar) -> None:
    assert rho_n_certificate({0: 1}, 3, nilpotent_obar).passed
    assert not rho_n_certificate({0: 1}, 2, nilpotent_obar).passed
    certificate = rho_n_certificate({0: 2, 1: 0}, 4, nilpotent_obar)
    assert certificate.bound == 3
    assert certificate.evidence == [{"degree": 0, "rank": 2, "inherited_level": 3},
                                    {"degree": 1, "rank": 0, "inherited_level": 0}]
    with pytest.raises(ValueError):
        rho_n_certificate({0: 1}, -1, nilpotent_obar)


def test_plane_unit_cone_is_exact(plane) -> None:
    obar = obar_complex(plane.extended, DegreeWindow(0, 2), vanishing_index(plane.rees.ring))
    assert obar.exact
    assert obar.level.level == 0
    assert rho_n_certificate({0: 1}, 0, obar).passed


def test_rho_certificate_needs_a_torsion_cone(nilpotent_obar) -> None:
    broken = replace(nilpotent_obar, level=TorsionLevel(None, {}))
    with pytest.raises(InconclusiveError):
        rho_n_certificate({0: 1}, 3, broken)


def test_rho_is_fully_faithful_on_free_modules(principal) -> None:
    free = BaseModule.free(principal.base, 1)
    assert rho_fully_faithful(principal.extended, free, free, (0, 1), DegreeWindow(0, 1))


def test_hyper_ext_between_torsion_objects(nilpotent) -> None:
    first, second = nilpotent.torsion_object(0), nilpotent.torsion_object(1)
    tables = hyper_ext(second, first, (0, 1), DegreeWindow(0, 1))
    assert sorted(tables) == [0, 1]
    assert all(table.is_zero() for table in tables.values())


@pytest.mark.parametrize("n", [0, 1])
def test_adjunction_with_i_n(principal, n: int) -> None:
    residue = ZModule(principal.base, principal.generators, 1)
    source = rees_module(i_n(residue, n), principal.extended)
    result = adjunction_check(source, residue, n, principal.extended)
    assert result.ok
    assert result.ext_dimension == 1


def test_nilpotent_stratification_is_semiorthogonal(nilpotent) -> None:
    certificate = scenario_semiorth(nilpotent, STRATIFICATION)
    assert certificate.families == ["i0", "i1", "i2"]
    assert certificate.verdict, certificate.failures()
    diagonals = [c for c in certificate.cells if not c.required_zero and c.check == "ext"]
    assert len(diagonals) == 3 and all(c.ok for c in diagonals)
    adjoints = [c for c in certificate.cells if c.check == "adjunction"]
    assert {(c.source, c.target) for c in adjoints} == {("i0(k)", "i0(k)"), ("i1(k)", "i0(k)"), ("i1(k)", "i1(k)"),
                                                        ("i2(k)", "i0(k)"), ("i2(k)", "i1(k)"), ("i2(k)", "i2(k)")}
    assert all(c.ok for c in adjoints)
    assert {c.value for c in adjoints if c.source == c.target} == {"ext 1, hom 1"}
    assert {c.value for c in adjoints if c.source != c.target} == {"ext 0, hom 0"}


def test_adjunction_cells_need_the_presentation(nilpotent) -> None:
    with pytest.raises(ValueError):
        semiorth_check(stratification_families(nilpotent, 2), STRATIFICATION, (0, 0), DegreeWindow(0, 0),
                       adjunctions=stratification_adjunctions(nilpotent, 2))


def test_semiorth_detects_a_wrong_order(principal) -> None:
    objects = [principal.torsion_object(0)]
    certificate = semiorth_check([("a", objects), ("b", objects)], "repeat", (0, 0), DegreeWindow(0, 0))
    assert not certificate.verdict
    assert certificate.failures()[0].required_zero


def test_unknown_scenario_and_pattern() -> None:
    with pytest.raises(ValueError):
        scenario("torus")
    with pytest.raises(ValueError):
        scenario_semiorth(scenario("principal", "QQ"), "diagonal")
