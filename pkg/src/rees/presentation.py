"""Rees, extended Rees and associated graded presentations of an ideal I ⊂ R.

The Rees ring is R[y_0..y_r] modulo the kernel of y_i ↦ g_i·t; the extended
Rees ring adds u of weight −1 and maps into the Laurent model R[t, s]/(ts − 1)
with u ↦ s. Every presentation is checked piecewise against powers of I on
a small window.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence

from algebra_core.ideals import Ideal, QuotientRing, eliminate, kernel_of_ring_map
from algebra_core.polynomial import Polynomial, PolynomialRing, exponent_tuples, polynomials_from
from config.config import DEFAULT_LIMITS, Limits, log_message
from graded.base_module import BaseModule, ideal_presentation
from graded.module import GradedModule
from graded.pieces import graded_piece
from graded.ring import DegreeWindow, GradedRing

REES_WINDOW = DegreeWindow(0, 3)
EXTENDED_WINDOW = DegreeWindow(-3, 3)


def fresh_names(prefix: str, count: int, taken: Sequence[str]) -> List[str]:
    """``prefix0..prefix{count-1}``, suffixed with ``_`` until clear of ``taken``."""
    used = set(taken)
    out = []
    for i in range(count):
        name = f"{prefix}{i}"
        while name in used:
            name += "_"
        used.add(name)
        out.append(name)
    return out


def fresh_name(name: str, taken: Sequence[str]) -> str:
    while name in taken:
        name += "_"
    return name


def power_generators(generators: Sequence[Polynomial], n: int) -> List[Polynomial]:
    """g^α for |α| = n, enumerated like the degree-n monomials of the graded pieces."""
    if not generators:
        return []
    ring = generators[0].ring
    out = []
    for alpha in exponent_tuples(len(generators), n):
        product = ring.one()
        for g, a in zip(generators, alpha):
            if a:
                product = product * g ** a
        out.append(product)
    return out


def presentation_over(ring: QuotientRing, module: BaseModule) -> BaseModule:
    """The same generators and relations, read over another quotient of the same polynomial ring."""
    return BaseModule(ring, module.rank, module.relations, module.labels)


@dataclass
class ReesPresentation:
    """R[y_0..y_r]/(Rees ideal) with y_i in degree 1.

    ``rees_ideal`` lists the reduced kernel generators that do not already lie in J.
    ``checks`` maps each validated degree to the outcome of the comparison with I^n.
    """

    base: QuotientRing
    generators: List[Polynomial]
    y_names: List[str]
    ring: GradedRing
    rees_ideal: List[Polynomial]
    checks: Dict[int, bool] = field(default_factory=dict)

    @cached_property
    def module(self) -> GradedModule:
        return GradedModule.free(self.ring, [0])

    def base_generators(self) -> List[Polynomial]:
        """The ideal generators as elements of the graded ring's base."""
        base_ambient = self.ring.base.ambient
        return [base_ambient.embed(g) for g in self.generators]

    @property
    def valid(self) -> bool:
        return all(self.checks.values())


@dataclass
class ExtReesPresentation(ReesPresentation):
    """R[y_0..y_r, u]/(extended kernel) with u in degree −1; ``rees`` is the non-negative part."""

    u_name: str = "u"
    rees: Optional[ReesPresentation] = None
    recovers_base: Optional[bool] = None


def _graph_target(base: QuotientRing, extra: Sequence[str], relations: Sequence[str] = ()) -> QuotientRing:
    ambient = PolynomialRing(list(base.names) + list(extra), base.field)
    rels = [ambient.embed(r) for r in base.relations] + [ambient.parse(r) for r in relations]
    return QuotientRing(ambient, rels)


def _split_kernel(kernel: Ideal, base: QuotientRing, ring: GradedRing) -> List[Polynomial]:
    base_ideal = Ideal(QuotientRing(ring.ambient), [ring.ambient.embed(r) for r in base.relations])
    return [g for g in kernel.basis_polynomials() if not base_ideal.contains(g)]


def _check_powers(presentation: ReesPresentation, window: DegreeWindow, limits: Limits,
                  log: Callable[[str], None]) -> Dict[int, bool]:
    ring = presentation.ring
    base_ring = ring.base
    gens = presentation.base_generators()
    module = presentation.module
    checks = {}
    for n in window:
        piece = graded_piece(module, n, limits).module
        if n < 0 and not ring.has_u:
            expected = BaseModule.zero(base_ring)
        elif n <= 0:
            expected = BaseModule.free(base_ring, 1)
        else:
            expected = ideal_presentation(base_ring, power_generators(gens, n), limits=limits)
        checks[n] = piece.same_presentation(expected)
        if not checks[n]:
            log(f"[REES] degree {n} piece does not match the power of the ideal")
    return checks


def rees_presentation(base: QuotientRing, generators: Sequence, validate: bool = True,
                      limits: Limits = DEFAULT_LIMITS,
                      log_function: Optional[Callable[[str], None]] = None) -> ReesPresentation:
    """Presentation of ⊕_{n≥0} I^n as a quotient of R[y_0..y_r]."""
    log = log_function or log_message
    gens = polynomials_from(base.ambient, generators)
    y_names = fresh_names("y", len(gens), base.names)
    t_name = fresh_name("t", base.names)
    source = PolynomialRing(list(base.names) + y_names, base.field, [0] * base.nvars + [1] * len(gens))
    target = _graph_target(base, [t_name])
    t = target.gen(t_name)
    images = [target.ambient.embed(x) for x in base.ambient.gens()] + [target.ambient.embed(g) * t for g in gens]
    kernel = kernel_of_ring_map(source, target, images, limits)
    ring = GradedRing(source, kernel.generators)
    presentation = ReesPresentation(base, gens, y_names, ring, _split_kernel(kernel, base, ring))
    log(f"[REES] Rees ideal has {len(presentation.rees_ideal)} generators")
    if validate:
        presentation.checks = _check_powers(presentation, REES_WINDOW, limits, log)
    return presentation


def ext_rees_presentation(base: QuotientRing, generators: Sequence, validate: bool = True,
                          limits: Limits = DEFAULT_LIMITS,
                          log_function: Optional[Callable[[str], None]] = None) -> ExtReesPresentation:
    """Presentation of the extended Rees ring ⊕_n I^n (I^n = R for n ≤ 0) as a quotient of R[y, u]."""
    log = log_function or log_message
    gens = polynomials_from(base.ambient, generators)
    y_names = fresh_names("y", len(gens), base.names)
    u_name = fresh_name("u", list(base.names) + y_names)
    t_name = fresh_name("t", base.names)
    s_name = fresh_name("s", list(base.names) + [t_name])
    weights = [0] * base.nvars + [1] * len(gens) + [-1]
    source = PolynomialRing(list(base.names) + y_names + [u_name], base.field, weights)
    target = _graph_target(base, [t_name, s_name], [f"{t_name}*{s_name} - 1"])
    t, s = target.gen(t_name), target.gen(s_name)
    images = [target.ambient.embed(x) for x in base.ambient.gens()]
    images += [target.ambient.embed(g) * t for g in gens] + [s]
    kernel = kernel_of_ring_map(source, target, images, limits)
    ring = GradedRing(source, kernel.generators)
    rees = rees_presentation(base, gens, validate=False, limits=limits, log_function=log)
    presentation = ExtReesPresentation(base, gens, y_names, ring, _split_kernel(kernel, base, ring),
                                       u_name=u_name, rees=rees)
    if validate:
        presentation.checks = _check_powers(presentation, EXTENDED_WINDOW, limits, log)
        presentation.recovers_base = specializes_to_base(presentation, limits)
    return presentation


def specializes_to_base(presentation: ExtReesPresentation, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Setting u = 1 and eliminating the y's leaves exactly the relations of R."""
    ring = presentation.ring
    ambient = ring.ambient
    specialized = Ideal(QuotientRing(ambient), list(ring.relations) + [ambient.gen(presentation.u_name) - 1])
    remaining = eliminate(specialized, presentation.y_names + [presentation.u_name], limits)
    base_ambient = remaining.ring.ambient
    expected = Ideal(remaining.ring, [base_ambient.embed(r) for r in presentation.base.relations])
    return remaining.equals(expected)


def assoc_graded(presentation: ExtReesPresentation, validate: bool = True, limits: Limits = DEFAULT_LIMITS,
                 log_function: Optional[Callable[[str], None]] = None) -> GradedRing:
    """Ã/uÃ, whose degree-n piece is I^n/I^{n+1} over R/I."""
    log = log_function or log_message
    ring = presentation.ring
    graded = ring.with_relations([ring.u()])
    if validate:
        failures = [n for n, ok in assoc_graded_checks(presentation, graded, REES_WINDOW, limits).items() if not ok]
        if failures:
            log(f"[REES] associated graded pieces differ from I^n/I^(n+1) in degrees {failures}")
    return graded


def assoc_graded_checks(presentation: ExtReesPresentation, graded: GradedRing, window: DegreeWindow,
                        limits: Limits = DEFAULT_LIMITS) -> Dict[int, bool]:
    """Compare each piece of gr with I^n/I^{n+1} presented over R, then read over R/I."""
    module = GradedModule.free(graded, [0])
    base_ring = presentation.ring.base
    gens = presentation.base_generators()
    checks = {}
    for n in window:
        piece = graded_piece(module, n, limits).module
        if n < 0:
            checks[n] = piece.is_zero()
            continue
        quotient = ideal_presentation(base_ring, power_generators(gens, n),
                                      modulo=power_generators(gens, n + 1), limits=limits)
        checks[n] = piece.same_presentation(presentation_over(graded.base, quotient))
    return checks
