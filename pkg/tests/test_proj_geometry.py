import pytest

from algebra_core.polynomial import format_polynomial
from algebra_core.vectors import poly_vec
from filtered_derived.complexes import cohomology_at
from graded.base_module import ideal_presentation
from graded.module import GradedMap, GradedModule
from graded.pieces import graded_piece, piece_map
from graded.ring import DegreeWindow
from proj_geometry.bound import bound_from_presentation
from proj_geometry.charts import blowup_charts, sheaf_is_zero, sheaf_restrict, transition_consistent
from proj_geometry.cohomology import (cech_cohomology, cech_section_map, cech_sections_agree, cohomology_table,
                                      fiber_dimension, higher_cohomology, projection_formula_check, sections_agree,
                                      sections_functor, truncation_invariant, twisted_sections, vanishing_index)
from proj_geometry.pushforward import complex_unit, pieces_agree, restriction_matches, structure_pushforward
from rees.presentation import power_generators


def test_plane_charts(plane) -> None:
    atlas = blowup_charts(plane.rees)
    assert len(atlas) == 2
    assert not atlas.is_empty
    relations = [format_polynomial(r) for r in atlas.chart(0).ring.reduced_relations()]
    assert relations == ["x*z1 - y"]
    assert transition_consistent(atlas, 0, 1)


def test_nilpotent_blowup_is_empty(nilpotent) -> None:
    atlas = blowup_charts(nilpotent.rees)
    assert atlas.is_empty
    assert sheaf_is_zero(nilpotent.rees.module, atlas)


def test_torsion_modules_restrict_to_zero(plane) -> None:
    rees = plane.rees
    atlas = blowup_charts(rees)
    ys = [rees.ring.gen(y) for y in rees.y_names]
    torsion = GradedModule(rees.ring, [1], [poly_vec(y) for y in ys])
    assert sheaf_is_zero(torsion, atlas)
    assert not sheaf_is_zero(rees.module, atlas)
    assert not sheaf_restrict(rees.module, atlas, 1).is_zero()


@pytest.mark.parametrize("m", [0, 1, 2])
def test_plane_sections_are_powers(plane, m: int) -> None:
    rees = plane.rees
    module = rees.module
    expected = ideal_presentation(rees.ring.base, power_generators(rees.base_generators(), m))
    assert graded_piece(module, m).module.same_presentation(expected)
    assert sections_agree(module, m)
    assert twisted_sections(module, m).exponent is not None
    assert higher_cohomology(module, m, 1).is_zero


def test_plane_negative_twist_has_first_cohomology(plane) -> None:
    module = plane.rees.module
    assert not higher_cohomology(module, -2, 1).is_zero
    assert higher_cohomology(module, -1, 1).is_zero
    assert higher_cohomology(module, 0, 2).exponent is None


def test_fiber_dimension(plane, principal) -> None:
    assert fiber_dimension(plane.rees.ring) == 1
    assert fiber_dimension(principal.rees.ring) == 0


def test_vanishing_index(plane, principal, nilpotent, cone) -> None:
    assert vanishing_index(plane.rees.ring) == 1
    assert vanishing_index(principal.rees.ring) == 0
    assert vanishing_index(nilpotent.rees.ring) == 0
    assert fiber_dimension(cone.rees.ring) == 2
    assert vanishing_index(cone.rees.ring) == 1
    skipped = higher_cohomology(cone.rees.module, 0, 2)
    assert skipped.is_zero and skipped.route == "bound"


def test_plane_bound_is_zero(plane) -> None:
    result = bound_from_presentation(plane.rees, 2)
    assert result.bound == 0
    assert result.failures() == []
    assert [e.twist for e in result.evidence] == [0, 1, 2]


def test_negative_limit_is_rejected(plane) -> None:
    with pytest.raises(ValueError):
        bound_from_presentation(plane.rees, -1)


def test_cohomology_table_rows(plane) -> None:
    table = cohomology_table(plane.rees.module, DegreeWindow(0, 1), 1)
    rows = table.rows()
    assert [row["twist"] for row in rows] == [0, 1]
    assert all(row["values"]["1"] == "0" for row in rows)
    assert table.entry(1, 0).exponent is not None


def test_cech_sections_match_the_saturation(plane) -> None:
    module = plane.rees.module
    cech = cech_cohomology(module, 1, 2)
    assert cech_section_map(module, cech).is_isomorphism()
    assert cech_sections_agree(module, 1, 2)
    assert not cech.groups[0].is_zero()


def test_sections_commute_with_sums_and_truncation(plane) -> None:
    module = plane.rees.module
    assert projection_formula_check(module, 2, 1)
    assert truncation_invariant(module, 2, 1)
    with pytest.raises(ValueError):
        truncation_invariant(module, 1, 2)
    with pytest.raises(ValueError):
        projection_formula_check(module, 0, 1)


def test_the_zero_map_is_not_an_isomorphism_on_sections(plane) -> None:
    module = plane.rees.module
    zero = GradedMap(module, module, [{} for _ in range(module.rank)])
    assert not sections_functor(zero, 1).is_isomorphism()
    assert sections_functor(GradedMap(module, module, module.units()), 1).is_isomorphism()


def test_plane_pushforward_matches_sections_and_charts(plane) -> None:
    ext = plane.extended
    push = structure_pushforward(ext, DegreeWindow(0, 2), 1)
    assert [t.index for t in push.terms] == [0, 1]
    assert all(pieces_agree(push, DegreeWindow(0, 2)).values())
    atlas = blowup_charts(ext.rees)
    assert all(restriction_matches(push, atlas).values())


def test_plane_cech_model_computes_the_pushforward(plane) -> None:
    window = DegreeWindow(-1, 1)
    push = structure_pushforward(plane.extended, window, 1, model=True)
    assert push.model is not None
    assert all(pieces_agree(push, window).values())
    assert push.complex.is_complex()
    assert push.complex.terms_stable()
    unit = complex_unit(push)
    sections = cohomology_at(push.complex, 0)
    to_sections = GradedMap(unit.source, sections.module, [sections.express(v) for v in unit.images])
    first = cohomology_at(push.complex, 1).module
    for n in window:
        assert piece_map(to_sections, n).is_isomorphism()
        assert graded_piece(first, n).module.is_zero()
    for m in (0, 1):
        assert sections_agree(plane.rees.module, m)
        assert higher_cohomology(plane.rees.module, m, 1).is_zero


def test_plane_pushforward_stays_formal_with_one_term(plane) -> None:
    push = structure_pushforward(plane.extended, DegreeWindow(0, 1), 1)
    assert push.model is None
    assert not push.complex.differentials
