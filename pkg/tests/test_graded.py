import concurrent.futures
import time

import pytest

from algebra_core.errors import GradingError
from algebra_core.ideals import QuotientRing
from algebra_core.polynomial import PolynomialRing
from algebra_core.vectors import poly_vec
from graded.base_module import BaseModule, ideal_presentation
from graded.ext import graded_ext
from graded.module import GradedModule, identity_map, multiplication_map, truncate, twist
from graded.pieces import graded_piece, hilbert_data, is_torsion
from graded.resolution import free_resolution
from graded.ring import DegreeWindow, GradedRing


def test_degree_window_text() -> None:
    window = DegreeWindow.from_text("-2..4")
    assert list(window) == [-2, -1, 0, 1, 2, 3, 4]
    assert len(window) == 7 and 0 in window and 5 not in window
    assert str(window) == "-2..4"
    with pytest.raises(RuntimeError):
        DegreeWindow.from_text("3..1")


def test_weights_outside_the_supported_range_are_rejected() -> None:
    with pytest.raises(GradingError):
        GradedRing(PolynomialRing(["x", "y"], weights=[0, 2]))


def test_plane_rees_pieces_are_powers(plane) -> None:
    rees = plane.rees
    module = rees.module
    base = rees.ring.base
    assert graded_piece(module, 0).module.same_presentation(BaseModule.free(base, 1))
    assert graded_piece(module, -1).module.is_zero()
    gens = rees.base_generators()
    square = ideal_presentation(base, [gens[0] ** 2, gens[0] * gens[1], gens[1] ** 2])
    assert graded_piece(module, 2).module.same_presentation(square)


def test_hilbert_data_counts_generators_over_an_infinite_base(plane) -> None:
    values = hilbert_data(plane.rees.module, DegreeWindow(-1, 3))
    assert values.tolist() == [0, 1, 2, 3, 4]


def test_hilbert_data_uses_field_dimension_over_an_artinian_base(nilpotent) -> None:
    values = hilbert_data(nilpotent.rees.module, DegreeWindow(0, 4))
    assert values.tolist() == [3, 2, 1, 0, 0]


def test_torsion_detection(plane, nilpotent) -> None:
    certificate = is_torsion(nilpotent.rees.module)
    assert certificate.torsion and certificate.degree == 3
    assert not is_torsion(plane.rees.module).torsion


def test_torsion_quotient_of_the_plane_rees_ring(plane) -> None:
    ring = plane.rees.ring
    ys = [ring.gen(y) for y in plane.rees.y_names]
    torsion = GradedModule(ring, [1], [poly_vec(y) for y in ys])
    certificate = is_torsion(torsion)
    assert certificate.torsion and certificate.degree == 2


def test_free_resolution_is_a_complex(plane) -> None:
    ring = plane.rees.ring
    ys = [ring.gen(y) for y in plane.rees.y_names]
    module = GradedModule(ring, [0], [poly_vec(y) for y in ys])
    resolution = free_resolution(module, 3)
    assert resolution.rank(0) == 1
    assert resolution.rank(1) == 2
    assert resolution.is_complex()
    assert free_resolution(module, 1) is resolution


def test_memo_computes_once_across_threads(plane) -> None:
    module = GradedModule(plane.rees.ring, [0])
    calls = []

    def compute():
        calls.append(1)
        time.sleep(0.05)
        return len(calls)

    with concurrent.futures.ThreadPoolExecutor(max_workers=4) as executor:
        results = list(executor.map(lambda _: module.memoized(("test",), compute), range(8)))
    assert results == [1] * 8
    assert len(calls) == 1
    assert module.finished("test") == [(("test",), 1)]


def test_failed_memo_entry_is_retried(plane) -> None:
    module = GradedModule(plane.rees.ring, [0])

    def broken():
        raise RuntimeError("boom")

    with pytest.raises(RuntimeError):
        module.memoized(("test",), broken)
    assert module.finished("test") == []
    assert module.memoized(("test",), lambda: 7) == 7


def test_inhomogeneous_relation_is_rejected(plane) -> None:
    ring = plane.rees.ring
    y0 = ring.gen(plane.rees.y_names[0])
    with pytest.raises(GradingError):
        GradedModule(ring, [0], [poly_vec(y0 + ring.gen("x"))])


def test_twist_and_truncate(plane) -> None:
    module = plane.rees.module
    shifted = twist(module, 1)
    assert graded_piece(shifted, 0).module.same_presentation(graded_piece(module, 1).module)
    truncated = truncate(module, 2)
    assert graded_piece(truncated, 1).module.is_zero()
    assert graded_piece(truncated, 3).module.generator_count() == 4


def test_multiplication_by_a_fiber_variable(plane) -> None:
    module = plane.rees.module
    y0 = plane.rees.ring.gen(plane.rees.y_names[0])
    fmap = multiplication_map(module, y0, 1)
    assert fmap.is_well_defined()
    assert fmap.is_injective()
    assert not fmap.is_surjective()
    assert identity_map(module).is_surjective()


def test_graded_ext_of_a_free_module_is_its_pieces(nilpotent) -> None:
    module = nilpotent.rees.module
    table = graded_ext(module, module, 0, DegreeWindow(0, 3))
    assert table.dims.tolist() == [3, 2, 1, 0]
    assert graded_ext(module, module, 1, DegreeWindow(0, 3)).is_zero()


def test_base_module_invariants() -> None:
    ring = QuotientRing(PolynomialRing(["x"]), ["x^3"])
    module = BaseModule(ring, 2, [poly_vec(ring.parse("x"), 1)])
    assert module.field_dimension() == 4
    assert module.describe() == "dim 4"
    assert module.generator_count() == 2
    assert not module.is_free_presentation()
    assert BaseModule.free(ring, 2).is_free_presentation()


def test_equal_invariants_do_not_make_a_free_module(plane) -> None:
    base = plane.rees.ring.base
    x, y = plane.rees.base_generators()
    square = ideal_presentation(base, [x ** 2, x * y, y ** 2])
    free = BaseModule.free(base, 3)
    assert square.generator_count() == free.generator_count() == 3
    assert square.field_dimension() is None and free.field_dimension() is None
    assert not square.is_free_of_rank(3)
    assert not square.same_presentation(free)
    assert free.is_free_of_rank(3)
    assert ideal_presentation(base, [x, x + x]).is_free_of_rank(1)
    assert BaseModule.zero(base).is_free_of_rank(0)
