import json
from pathlib import Path

import pytest
import sympy
from sympy.polys.domains import QQ

from algebra_core.cache import GroebnerCache
from algebra_core.errors import ParseError, ResourceLimitError
from algebra_core.groebner import groebner_basis, is_groebner
from algebra_core.ideals import FreeSubmodule, Ideal, QuotientRing, eliminate, ideal_power, krull_dimension, saturate
from algebra_core.kernels import lift, module_kernel
from algebra_core.oracle import count_by_degree, macaulay_kernel_monomials, macaulay_profile, standard_monomials
from algebra_core.orders import ModuleOrder
from algebra_core.polynomial import PolynomialRing, format_polynomial
from algebra_core.scalars import field_from_name, field_name, format_scalar, make_scalar
from algebra_core.vectors import poly_vec, vec_from_polys, vec_to_polys
from config.config import Limits


@pytest.fixture
def ring() -> PolynomialRing:
    return PolynomialRing(["x", "y", "z"])


def _to_sympy(poly):
    return sympy.sympify(format_polynomial(poly).replace("^", "**"))


def _from_sympy(expr, ring: PolynomialRing, symbols):
    terms = sympy.Poly(expr, *symbols).terms()
    return ring.poly({exps: make_scalar(QQ, int(c.p), int(c.q)) for exps, c in terms})


def test_polynomial_text_round_trip(ring: PolynomialRing) -> None:
    for text in ["3/2*x^2*y - z", "x^3 - 2*x*y*z + 1/3", "-(x + y)^2", "0", "7"]:
        poly = ring.parse(text)
        assert ring.parse(format_polynomial(poly)) == poly


def test_format_is_canonical(ring: PolynomialRing) -> None:
    assert format_polynomial(ring.parse("y*x - x*y + 2*x*y")) == "2*x*y"
    assert format_polynomial(ring.parse("-1/2*z")) == "-1/2*z"


def test_parse_error_reports_position_and_expected_tokens(ring: PolynomialRing) -> None:
    with pytest.raises(ParseError) as info:
        ring.parse("x +\n  * y")
    assert info.value.line == 2
    assert info.value.column == 3
    assert "IDENT" in info.value.expected


def test_unknown_variable_is_a_parse_error(ring: PolynomialRing) -> None:
    with pytest.raises(ParseError) as info:
        ring.parse("x + w")
    assert info.value.column == 5


def test_fields() -> None:
    f7 = field_from_name("FP<7>")
    assert field_name(f7) == "FP<7>"
    assert field_name(field_from_name("QQ")) == "QQ"
    assert format_scalar(f7, make_scalar(f7, 1, 2)) == "4"
    assert format_scalar(QQ, make_scalar(QQ, -3, 6)) == "-1/2"
    with pytest.raises(ValueError):
        field_from_name("FP<8>")


def test_groebner_basis_agrees_with_sympy(ring: PolynomialRing) -> None:
    gens = ["x^2 + y*z", "x*y - z^2", "y^3 - x*z"]
    ideal = Ideal(QuotientRing(ring), gens)
    ours = ideal.basis_polynomials()
    x, y, z = sympy.symbols("x y z")
    reference = sympy.groebner([sympy.sympify(g.replace("^", "**")) for g in gens], x, y, z, order="grevlex")
    assert all(reference.contains(_to_sympy(p)) for p in ours)
    assert all(ideal.contains(_from_sympy(g, ring, (x, y, z))) for g in reference.exprs)
    assert is_groebner([poly_vec(p) for p in ours], ModuleOrder(ring.order))


def test_iteration_cap_raises(ring: PolynomialRing) -> None:
    ideal = Ideal(QuotientRing(ring), ["x^2 + y", "x*y - 1"])
    with pytest.raises(ResourceLimitError):
        ideal.groebner(limits=Limits(max_iterations=0))


def test_quotient_ring_reduction() -> None:
    ambient = PolynomialRing(["x"])
    ring = QuotientRing(ambient, ["x^3"])
    assert ring.is_zero(ambient.parse("x^4 + x^3"))
    assert not ring.is_zero(ambient.parse("x^2"))
    assert QuotientRing(ambient, ["x^2 - 1", "x"]).is_zero_ring()


def test_ideal_membership_and_powers(ring: PolynomialRing) -> None:
    base = QuotientRing(ring)
    ideal = Ideal(base, ["x", "y"])
    square = ideal_power(ideal, 2)
    assert square.contains(ring.parse("x*y + y^2"))
    assert not square.contains(ring.parse("x"))
    assert (ideal + Ideal(base, ["1 - z"])).is_unit() is False
    assert (ideal + Ideal(base, ["1 - x"])).is_unit()
    assert (ideal * ideal).equals(square)


def test_elimination_finds_the_cuspidal_cubic() -> None:
    ambient = PolynomialRing(["t", "x", "y"])
    ideal = Ideal(QuotientRing(ambient), ["x - t^2", "y - t^3"])
    remaining = eliminate(ideal, ["t"])
    sub = remaining.ring.ambient
    assert remaining.contains(sub.parse("x^3 - y^2"))
    assert not remaining.contains(sub.parse("x"))


def test_saturation(ring: PolynomialRing) -> None:
    base = QuotientRing(ring)
    module = FreeSubmodule(base, 1, [poly_vec(ring.parse("x^2*y"))])
    saturated = saturate(module, Ideal(base, ["x"]))
    assert saturated.same_as(FreeSubmodule(base, 1, [poly_vec(ring.parse("y"))]))


def test_krull_dimension(ring: PolynomialRing) -> None:
    assert krull_dimension(QuotientRing(ring)) == 3
    assert krull_dimension(QuotientRing(ring, ["x*y"])) == 2
    assert krull_dimension(QuotientRing(ring, ["x^3 + y^3 + z^3"])) == 2
    assert krull_dimension(QuotientRing(ring, ["x", "y^2 - z"])) == 1
    assert krull_dimension(QuotientRing(PolynomialRing(["x"]), ["x^3"])) == 0
    assert krull_dimension(QuotientRing(ring, ["x - 1", "x"])) == -1


def test_kernel_and_lift(ring: PolynomialRing) -> None:
    x, y = ring.gen("x"), ring.gen("y")
    images = [poly_vec(x), poly_vec(y)]
    kernel = module_kernel(ring, images, [], 1)
    assert len(kernel) == 1
    a, b = vec_to_polys(kernel[0], 2, ring)
    assert not (a * x + b * y)
    coeffs = lift(ring, poly_vec(x * y + y * y), images, [], 1)
    assert coeffs is not None
    assert coeffs[0] * x + coeffs[1] * y == x * y + y * y
    assert lift(ring, poly_vec(ring.gen("z")), images, [], 1) is None


def test_kernel_modulo_relations(ring: PolynomialRing) -> None:
    x = ring.gen("x")
    kernel = module_kernel(ring, [poly_vec(x)], [poly_vec(x ** 2)], 1)
    assert FreeSubmodule(QuotientRing(ring), 1, kernel).same_as(FreeSubmodule(QuotientRing(ring), 1, [poly_vec(x)]))


def test_macaulay_oracle_matches_normal_forms(ring: PolynomialRing) -> None:
    gens = [ring.parse("x^2 - y*z"), ring.parse("x*y")]
    ideal = Ideal(QuotientRing(ring), gens)
    leads = [exps for _, exps in ideal.groebner().leads]
    profile = macaulay_profile(ring, gens, 4)
    standard = count_by_degree([e for d in range(5) for e in standard_monomials(ring, leads, d)])
    for d in range(5):
        assert standard.get(d, 0) == profile[d, 0] - profile[d, 1]
        assert all(ideal.contains(ring.monomial(m)) for m in macaulay_kernel_monomials(ring, gens, d))


def test_macaulay_monomials_in_small_ideal() -> None:
    ring = PolynomialRing(["x", "y"])
    gens = [ring.parse("x^2"), ring.parse("x*y")]
    assert macaulay_kernel_monomials(ring, gens, 2) == {(2, 0), (1, 1)}
    assert standard_monomials(ring, [(2, 0), (1, 1)], 2) == [(0, 2)]


def test_groebner_cache_round_trip(tmp_path: Path, ring: PolynomialRing) -> None:
    cache = GroebnerCache(str(tmp_path), QQ)
    order = ModuleOrder(ring.order)
    gens = [poly_vec(ring.parse(g)) for g in ["x^2 + y*z", "x*y - z^2"]]
    first = groebner_basis(gens, order, 1, ring.nvars, cache=cache)
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    loaded = cache.load(gens, order, 1, ring.nvars)
    assert loaded is not None and loaded.same_module(first)


def test_groebner_cache_rejects_tampered_entries(tmp_path: Path, ring: PolynomialRing) -> None:
    cache = GroebnerCache(str(tmp_path), QQ)
    order = ModuleOrder(ring.order)
    gens = [poly_vec(ring.parse(g)) for g in ["x^2 + y*z", "x*y - z^2"]]
    groebner_basis(gens, order, 1, ring.nvars, cache=cache)
    path = next(tmp_path.glob("*.json"))
    path.write_text(json.dumps({"basis": [[[0, [1, 0, 0], "1"]]]}), encoding="utf-8")
    assert cache.load(gens, order, 1, ring.nvars) is None


def test_groebner_cache_cleans_up_after_a_failed_write(tmp_path: Path, ring: PolynomialRing, monkeypatch) -> None:
    cache = GroebnerCache(str(tmp_path), QQ)
    order = ModuleOrder(ring.order)
    gens = [poly_vec(ring.parse(g)) for g in ["x^2 + y*z", "x*y - z^2"]]
    basis = groebner_basis(gens, order, 1, ring.nvars)

    def broken_dump(*args, **kwargs):
        raise OSError("disk full")

    monkeypatch.setattr("algebra_core.cache.json.dump", broken_dump)
    with pytest.raises(OSError):
        cache.store(gens, basis)
    assert list(tmp_path.iterdir()) == []


def test_vectors_round_trip_through_polynomials(ring: PolynomialRing) -> None:
    polys = [ring.parse("x + 1"), ring.zero(), ring.parse("y*z")]
    assert vec_to_polys(vec_from_polys(polys), 3, ring) == polys
