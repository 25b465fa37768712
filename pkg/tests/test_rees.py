import pytest

from algebra_core.errors import MalformedFiltrationError, NotFreeError
from algebra_core.ideals import Ideal, QuotientRing
from algebra_core.vectors import poly_vec
from graded.base_module import BaseModule
from graded.module import GradedModule
from graded.pieces import graded_piece, hilbert_data
from graded.ring import DegreeWindow
from rees.filtered import FilteredModule, ZModule, filtration_wellformed, i_n, ideal_adic
from rees.functors import gr_F, is_n_stable, rees_module, rho, tau
from rees.presentation import assoc_graded, assoc_graded_checks, fresh_names, power_generators


def _same_ideal(ambient, found, expected) -> bool:
    free = QuotientRing(ambient)
    return Ideal(free, list(found)).equals(Ideal(free, list(expected)))


def test_fresh_names_avoid_base_variables() -> None:
    assert fresh_names("y", 2, ["x", "y0"]) == ["y0_", "y1"]


def test_power_generators(plane) -> None:
    x, y = plane.generators
    assert power_generators([x, y], 0) == [x.ring.one()]
    assert power_generators([x, y], 2) == [x ** 2, x * y, y ** 2]


def test_plane_rees_ideal(plane) -> None:
    rees = plane.rees
    ambient = rees.ring.ambient
    y0, y1 = (ambient.gen(name) for name in rees.y_names)
    x, y = ambient.gen("x"), ambient.gen("y")
    assert _same_ideal(ambient, rees.rees_ideal, [x * y1 - y * y0])
    assert rees.valid


def test_principal_extended_rees_ideal(principal) -> None:
    ext = principal.extended
    ambient = ext.ring.ambient
    expected = [ambient.gen(ext.y_names[0]) * ambient.gen(ext.u_name) - ambient.gen("x")]
    assert _same_ideal(ambient, ext.ring.relations, expected)
    assert ext.valid
    assert ext.recovers_base


def test_extended_rees_of_a_nilpotent_base(nilpotent) -> None:
    ext = nilpotent.extended
    assert ext.valid
    assert ext.recovers_base
    assert graded_piece(ext.module, -2).module.field_dimension() == 3


def test_associated_graded_of_the_plane(plane) -> None:
    ext = plane.extended
    graded = assoc_graded(ext, validate=False)
    assert all(assoc_graded_checks(ext, graded, DegreeWindow(-1, 3)).values())
    values = hilbert_data(GradedModule.free(graded, [0]), DegreeWindow(0, 3))
    assert values.tolist() == [1, 2, 3, 4]


def test_ideal_adic_filtration_is_wellformed(principal) -> None:
    module = BaseModule.free(principal.base, 1)
    filtered = ideal_adic(principal.base, principal.generators, module, depth=2)
    assert filtration_wellformed(filtered).ok
    assert filtered.level(4) == [{(0, (4,)): principal.base.field.one}]


def test_malformed_filtration_is_rejected(principal) -> None:
    base = principal.base
    module = BaseModule.free(base, 1)
    x = base.gen("x")
    filtered = FilteredModule(base, principal.generators, module, [[module.unit(0)], [poly_vec(x ** 2)]])
    check = filtration_wellformed(filtered)
    assert not check.ok and "F^1" in check.witness
    with pytest.raises(MalformedFiltrationError):
        rees_module(filtered, principal.extended)


def test_rees_module_of_the_adic_filtration_is_the_ring(principal) -> None:
    module = BaseModule.free(principal.base, 1)
    filtered = ideal_adic(principal.base, principal.generators, module, depth=1)
    rees = rees_module(filtered, principal.extended)
    assert is_n_stable(rees, 0).stable
    for d in (-1, 0, 1, 2):
        assert graded_piece(principal.extended.module, d).module.is_free_of_rank(1)
        assert graded_piece(rees, d).module.is_free_of_rank(1)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_gr_inverts_i_n(principal, n: int) -> None:
    residue = ZModule(principal.base, principal.generators, 1)
    rees = rees_module(i_n(residue, n), principal.extended)
    assert is_n_stable(rees, 0).stable
    assert gr_F(rees, n).isomorphic_to(residue)
    assert not gr_F(rees, n).isomorphic_to(ZModule(principal.base, principal.generators, 2))
    for m in range(4):
        if m != n:
            assert gr_F(rees, m).is_zero()


def test_z_module_is_annihilated_by_the_ideal(plane) -> None:
    module = ZModule(plane.base, plane.generators, 2)
    assert module.is_annihilated()
    assert module.module.field_dimension() == 2


def test_rho_needs_a_free_presentation(principal) -> None:
    base = principal.base
    torsion = BaseModule(base, 1, [poly_vec(base.gen("x"))])
    with pytest.raises(NotFreeError):
        rho(torsion, principal.extended)


def test_tau_forgets_negative_degrees(plane) -> None:
    ext = plane.extended
    pulled = rho(BaseModule.free(plane.base, 2), ext)
    assert pulled.twists == (0, 0)
    positive = tau(GradedModule.free(ext.ring, [0]), ext)
    for d in (0, 1, 2):
        assert graded_piece(positive, d).module.same_presentation(graded_piece(ext.rees.module, d).module)
    assert graded_piece(positive, -1).module.is_zero()
