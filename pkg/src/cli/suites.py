"""Named verification suites run by ``verify --suite``.

Every check is an exact comparison; a suite fails when any of its checks
does. Randomized suites draw from a numpy Generator seeded with ``--seed``,
so the same seed reproduces the same cases.
"""

import concurrent.futures
from typing import Callable, Dict, List, Tuple

import numpy as np

from algebra_core.ideals import Ideal, QuotientRing
from algebra_core.oracle import count_by_degree, macaulay_kernel_monomials, macaulay_profile, standard_monomials
from algebra_core.polynomial import PolynomialRing, exponent_tuples
from algebra_core.scalars import field_from_name, random_scalar
from algebra_core.vectors import Vec, poly_vec, vec_from_polys
from cli.report import Report, RunOptions
from config.config import FIELD, MAX_WORKERS, log_message
from filtered_derived.certificates import adjunction_check, obar_complex, rho_n_certificate
from filtered_derived.scenarios import (STRATIFICATION, Scenario, cone_scenario, nilpotent_scenario, plane_scenario,
                                        principal_scenario, scenario_semiorth)
from graded.base_module import ideal_presentation
from graded.module import GradedModule
from graded.pieces import graded_piece
from graded.ring import DegreeWindow
from proj_geometry.bound import bound_from_presentation
from proj_geometry.charts import blowup_charts, sheaf_is_zero
from proj_geometry.cohomology import (cech_sections_agree, higher_cohomology, projection_formula_check, sections_agree,
                                      truncation_invariant, vanishing_index)
from rees.filtered import ZModule, i_n
from rees.functors import gr_F, rees_module
from rees.presentation import power_generators

ORACLE_CASES = 25
ORACLE_DEGREE = 6
FUNCTOR_CASES = 20
ADJUNCTION_CASES = 10
SERRE_CASES = 5

Check = Dict[str, object]


def _check(suite: str, name: str, ok: bool, detail: str = "") -> Check:
    out: Check = {"suite": suite, "check": name, "ok": bool(ok)}
    if detail:
        out["detail"] = detail
    return out


def _ideal_matches(ring: QuotientRing, found, expected) -> bool:
    """Equality of ideals of the ambient polynomial ring of ``ring``."""
    free = QuotientRing(ring.ambient)
    return Ideal(free, list(found)).equals(Ideal(free, list(expected)))


def _random_form(ring: PolynomialRing, degree: int, rng):
    monomials = exponent_tuples(ring.nvars, degree)
    count = int(rng.integers(1, min(3, len(monomials)) + 1))
    poly = ring.zero()
    for k in rng.choice(len(monomials), size=count, replace=False):
        poly = poly + ring.monomial(monomials[int(k)], random_scalar(ring.field, rng))
    return poly


def groebner_oracle(options: RunOptions, rng) -> List[Check]:
    """Gröbner normal forms against dense Macaulay row reduction on random homogeneous ideals."""
    field = field_from_name(options.field or FIELD)
    cases = []
    for _ in range(ORACLE_CASES):
        nvars = int(rng.integers(1, 4))
        ring = PolynomialRing(["x", "y", "z"][:nvars], field)
        gens = [_random_form(ring, int(rng.integers(1, 4)), rng) for _ in range(int(rng.integers(1, 4)))]
        cases.append((ring, gens))

    def compare(case) -> Tuple[bool, bool, str]:
        ring, gens = case
        ideal = Ideal(QuotientRing(ring), gens)
        leads = [exps for _, exps in ideal.groebner(limits=options.limits).leads]
        profile = macaulay_profile(ring, gens, ORACLE_DEGREE)
        standard = count_by_degree([e for d in range(ORACLE_DEGREE + 1)
                                    for e in standard_monomials(ring, leads, d)])
        counts = all(standard.get(d, 0) == profile[d, 0] - profile[d, 1] for d in range(ORACLE_DEGREE + 1))
        members = all({e for e in exponent_tuples(ring.nvars, d) if ideal.contains(ring.monomial(e))}
                      == macaulay_kernel_monomials(ring, gens, d) for d in range(ORACLE_DEGREE + 1))
        return counts, members, repr(ideal)

    with concurrent.futures.ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
        results = list(executor.map(compare, cases))
    checks = []
    for k, (counts, members, text) in enumerate(results):
        checks.append(_check("groebner-oracle", f"case {k}: standard monomials", counts, text))
        checks.append(_check("groebner-oracle", f"case {k}: monomials in the ideal", members, text))
    return checks


def extrees(options: RunOptions, rng) -> List[Check]:
    checks = []
    principal = principal_scenario(options.field)
    principal.limits = options.limits
    ext = principal.extended
    ambient = ext.ring.ambient
    expected = [ambient.gen(ext.y_names[0]) * ambient.gen(ext.u_name) - ambient.gen("x")]
    checks.append(_check("extrees", "principal: ideal is (y0*u - x)",
                         _ideal_matches(QuotientRing(ambient), ext.ring.relations, expected)))
    checks.append(_check("extrees", "principal: pieces on -3..3", ext.valid))
    checks.append(_check("extrees", "principal: u = 1 recovers R", bool(ext.recovers_base)))
    plane = plane_scenario(options.field)
    plane.limits = options.limits
    checks.append(_check("extrees", "plane: pieces on -3..3", plane.extended.valid))
    checks.append(_check("extrees", "plane: u = 1 recovers R", bool(plane.extended.recovers_base)))
    return checks


def plane_blowup(options: RunOptions, rng) -> List[Check]:
    case = plane_scenario(options.field)
    case.limits = options.limits
    limits = options.limits
    rees = case.rees
    ambient = rees.ring.ambient
    y0, y1 = (ambient.gen(y) for y in rees.y_names)
    x, y = ambient.gen("x"), ambient.gen("y")
    checks = [_check("plane-blowup", "Rees ideal is (x*y1 - y*y0)",
                     _ideal_matches(QuotientRing(ambient), rees.ring.relations, [x * y1 - y * y0]))]
    module = rees.module
    gens = rees.base_generators()
    for m in range(5):
        expected = ideal_presentation(rees.ring.base, power_generators(gens, m), limits=limits)
        # A_m is presented on the monomials y^α, listed like the products of the g_i
        power = graded_piece(module, m, limits).module.same_presentation(expected)
        checks.append(_check("plane-blowup", f"H0(O({m})) = I^{m}", power and sections_agree(module, m, limits)))
        checks.append(_check("plane-blowup", f"H1(O({m})) = 0", higher_cohomology(module, m, 1, limits).is_zero))
    checks.append(_check("plane-blowup", "H1(O(-2)) != 0", not higher_cohomology(module, -2, 1, limits).is_zero))
    checks.append(_check("plane-blowup", "bound at limit 4 is 0", bound_from_presentation(rees, 4, limits).bound == 0))
    checks.append(_check("plane-blowup", "Cech H0(O(1)) matches the saturation",
                         cech_sections_agree(module, 1, 2, limits) and sections_agree(module, 1, limits)))
    return checks


def _rho_checks(suite: str, case: Scenario, level: int, window: DegreeWindow) -> List[Check]:
    obar = obar_complex(case.extended, window, vanishing_index(case.rees.ring, case.limits), case.limits)
    checks = [_check(suite, f"torsion level is {level}", obar.level.level == level, str(obar.level.onsets))]
    checks.append(_check(suite, f"rho-cert passes at level {level}", rho_n_certificate({0: 1}, level, obar).passed))
    if level > 0:
        checks.append(_check(suite, f"rho-cert fails at level {level - 1}",
                             not rho_n_certificate({0: 1}, level - 1, obar).passed))
    return checks


def nilpotent(options: RunOptions, rng) -> List[Check]:
    case = nilpotent_scenario(options.field)
    case.limits = options.limits
    atlas = blowup_charts(case.rees)
    checks = [_check("nilpotent", "every chart is empty", atlas.is_empty)]
    return checks + _rho_checks("nilpotent", case, 3, DegreeWindow(0, 2))


def _random_zmodule(case: Scenario, rng) -> ZModule:
    """k^r with at most one random linear relation, over a base with R/I = k."""
    rank = int(rng.integers(1, 3))
    ambient = case.base.ambient
    relations: List[Vec] = []
    if rank > 1 and rng.integers(0, 2):
        relations.append(vec_from_polys([ambient.constant(random_scalar(ambient.field, rng)) for _ in range(rank)]))
    return ZModule(case.base, case.generators, rank, relations)


def functor_identities(options: RunOptions, rng) -> List[Check]:
    case = principal_scenario(options.field)
    case.limits = options.limits
    limits = options.limits
    checks = []
    for k in range(FUNCTOR_CASES):
        module = _random_zmodule(case, rng)
        n = int(rng.integers(0, 3))
        rees = rees_module(i_n(module, n), case.extended, limits)
        same = gr_F(rees, n, limits).isomorphic_to(module)
        others = all(gr_F(rees, m, limits).is_zero() for m in range(4) if m != n)
        checks.append(_check("functor-identities", f"case {k}: gr^{n} i_{n} = id", same, repr(module)))
        checks.append(_check("functor-identities", f"case {k}: gr^m i_{n} = 0 for m != {n}", others, repr(module)))
    for k in range(ADJUNCTION_CASES):
        source = rees_module(i_n(_random_zmodule(case, rng), int(rng.integers(0, 2))), case.extended, limits)
        target = _random_zmodule(case, rng)
        n = int(rng.integers(0, 2))
        result = adjunction_check(source, target, n, case.extended, limits)
        checks.append(_check("functor-identities", f"adjunction {k} at level {n}", result.ok,
                             f"ext {result.ext_dimension}, hom {result.hom_dimension}"))
    return checks


def serre_invariance(options: RunOptions, rng) -> List[Check]:
    case = plane_scenario(options.field)
    case.limits = options.limits
    limits = options.limits
    rees = case.rees
    ring = rees.ring
    atlas = blowup_charts(rees)
    ys = [ring.gen(y) for y in rees.y_names]
    checks = []
    for k in range(SERRE_CASES):
        rank = int(rng.integers(1, 3))
        twists = [int(t) for t in rng.integers(0, 2, size=rank)]
        relations = []
        if rng.integers(0, 2):
            relations.append(poly_vec(ys[int(rng.integers(0, len(ys)))], int(rng.integers(0, rank))))
        module = GradedModule(ring, twists, relations)
        d = int(rng.integers(0, 3))
        checks.append(_check("serre-invariance", f"case {k}: truncation at {d} keeps H0(2)",
                             truncation_invariant(module, 2, d, limits), repr(module)))
        checks.append(_check("serre-invariance", f"case {k}: projection formula at 1",
                             projection_formula_check(module, 2, 1, limits), repr(module)))
        twist = int(rng.integers(0, 2))
        torsion = GradedModule(ring, [twist], [poly_vec(y) for y in ys])
        checks.append(_check("serre-invariance", f"case {k}: torsion in degree {twist} restricts to zero",
                             sheaf_is_zero(torsion, atlas, limits=limits)))
    return checks


def semiorth_nilpotent(options: RunOptions, rng) -> List[Check]:
    case = nilpotent_scenario(options.field)
    case.limits = options.limits
    certificate = scenario_semiorth(case, STRATIFICATION)
    failures = "; ".join(f"Ext^{c.k}({c.source}, {c.target})_{c.degree} = {c.value}" for c in certificate.failures())
    return [_check("semiorth-nilpotent", "stratification i0, i1, i2", certificate.verdict, failures)]


def cone(options: RunOptions, rng) -> List[Check]:
    """The cone over a plane cubic: a positive bound witnessed by H1 at twist 0."""
    case = cone_scenario(options.field)
    case.limits = options.limits
    limits = options.limits
    module = case.rees.module
    result = bound_from_presentation(case.rees, 3, limits)
    checks = [
        _check("cone", "bound is at least 1", result.bound is not None and result.bound >= 1, str(result.bound)),
        _check("cone", "H1(O) != 0", not higher_cohomology(module, 0, 1, limits).is_zero),
    ]
    if result.bound is not None:
        obar = obar_complex(case.extended, DegreeWindow(0, 2), vanishing_index(case.rees.ring, limits), limits)
        checks.append(_check("cone", "rho-cert fails at level 0", not rho_n_certificate({0: 1}, 0, obar).passed))
        checks.append(_check("cone", f"rho-cert passes at level {result.bound}",
                             rho_n_certificate({0: 1}, result.bound, obar).passed))
    return checks


Suite = Callable[[RunOptions, object], List[Check]]

SUITES: Dict[str, Tuple[Suite, bool]] = {
    "groebner-oracle": (groebner_oracle, False),
    "extrees": (extrees, False),
    "plane-blowup": (plane_blowup, False),
    "nilpotent": (nilpotent, False),
    "functor-identities": (functor_identities, False),
    "serre-invariance": (serre_invariance, False),
    "semiorth-nilpotent": (semiorth_nilpotent, False),
    "cone": (cone, True),
}


def run_suites(name: str, options: RunOptions) -> Report:
    """Run one suite, or every suite for ``all`` (slow ones only with ``include_slow``)."""
    log = options.log_function or log_message
    if name == "all":
        names = [n for n, (_, slow) in SUITES.items() if options.include_slow or not slow]
    elif name in SUITES:
        names = [name]
    else:
        raise ValueError(f"[VERIFY] unknown suite '{name}', expected 'all' or one of {sorted(SUITES)}")
    report = Report("verify")
    for position, suite_name in enumerate(SUITES):
        if suite_name not in names:
            continue
        function, _ = SUITES[suite_name]
        rng = np.random.default_rng([options.seed, position])
        checks = function(options, rng)
        failed = sum(1 for c in checks if not c["ok"])
        log(f"[VERIFY] {suite_name}: {len(checks) - failed}/{len(checks)} checks passed")
        report.entries.extend(checks)
        report.certificates.append({"kind": "suite", "name": suite_name, "checks": len(checks), "failures": failed})
    report.verdict = all(c["failures"] == 0 for c in report.certificates)
    return report
