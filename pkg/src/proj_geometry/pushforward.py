"""The pushforward of a sheaf on the blowup as 0-stable modules over the extended Rees ring.

For a module M over the Rees ring, term i of the result is the Ã-module T
with T_n = H^i(Y, M̃(n)) for n ≥ 0 and T_n = T_0 for n < 0. It is built from
H = Ext^i(J_d, M) at one saturation exponent d that is stable on every
degree involved: the generators are those of H_{≥0}, and u acts through
the map J_{d+1} → J_d, y^γ ↦ g_i·y^β, pulled back to H_{d+1} by the
restriction map.

When two or more terms are nonzero the complex itself is the Čech model,
whose cohomology the terms describe.
"""

import concurrent.futures
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from algebra_core.errors import GradingError, InconclusiveError, NotFreeError
from algebra_core.kernels import lift
from algebra_core.vectors import Vec, add_into, vec_from_polys, vec_transfer
from config.config import DEFAULT_LIMITS, MAX_WORKERS, Limits, log_message
from filtered_derived.complexes import ComplexOfGradedModules
from graded.base_module import BaseMap, BaseModule
from graded.module import (GradedMap, GradedModule, multiplication_map, submodule_presentation, truncation_generators,
                           vector_degree)
from graded.pieces import express, graded_piece, piece_map
from graded.ring import DegreeWindow
from proj_geometry.cech_model import CechModel, cech_model
from proj_geometry.charts import ChartAtlas, sheaf_restrict
from proj_geometry.cohomology import (POWER, colimit_piece, first_exponent, induced_map, power_inclusion,
                                      restriction_map, saturation_stage, section_map, stable_exponent,
                                      vanishing_index)
from rees.functors import is_n_stable, tau
from rees.presentation import ExtReesPresentation


@dataclass
class PushforwardTerm:
    """T^index together with the data it was read off.

    ``generators[k]`` is the cover vector of ``sections`` (= Ext^index(J_d, M))
    that generator k of ``module`` stands for.
    """

    index: int
    exponent: int
    module: GradedModule
    sections: GradedModule
    generators: List[Vec]


@dataclass
class Pushforward:
    """``terms`` are the cohomology modules; ``complex`` is the Čech ``model`` when there is one."""

    source: GradedModule
    presentation: ExtReesPresentation
    window: DegreeWindow
    terms: List[PushforwardTerm]
    complex: ComplexOfGradedModules
    model: Optional[CechModel] = None

    def term(self, index: int) -> Optional[PushforwardTerm]:
        for t in self.terms:
            if t.index == index:
                return t
        return None

    def rows(self) -> List[dict]:
        return [{"index": t.index, "exponent": t.exponent, "twists": list(t.module.twists),
                 "relations": len(t.module.relations)} for t in self.terms]


def _common_exponent(module: GradedModule, index: int, degrees: Sequence[int], limits: Limits, log) -> int:
    """One saturation exponent whose transition map is bijective on every degree in ``degrees``."""
    d = max(stable_exponent(module, n, index, POWER, limits, log) for n in degrees)
    cap = first_exponent(module, min(degrees)) + limits.max_sat_steps
    while d < cap:
        if all(piece_map(restriction_map(module, POWER, d, index, limits), n, limits).is_isomorphism()
               for n in degrees):
            return d
        d += 1
    raise InconclusiveError(f"[PUSHFORWARD] index {index}: no exponent below {cap} is stable on {list(degrees)}")


def _nonnegative_generators(sections: GradedModule) -> List[Vec]:
    return [w for w in truncation_generators(sections, 0) if not sections.contains(w)]


def _u_relations(module: GradedModule, presentation: ExtReesPresentation, term_index: int, d: int,
                 sections: GradedModule, generators: List[Vec], twists: Sequence[int],
                 limits: Limits) -> List[Vec]:
    """u·e_k − (the class of u·w_k written on the generators), for every generator of degree ≥ 1."""
    rees_ambient = module.ring.ambient
    ring = presentation.ring
    coefficients = [rees_ambient.embed(g) for g in presentation.generators]
    shift = induced_map(module, POWER, d, term_index, power_inclusion(module.ring, d, coefficients, limits), -1,
                        limits)
    restriction = restriction_map(module, POWER, d, term_index, limits)
    upper = saturation_stage(module, POWER, d + 1, term_index, limits).ext.module
    one = ring.field.one
    u_exps = tuple(1 if k == ring.u_index else 0 for k in range(ring.nvars))
    relations = []
    for k, (w, t) in enumerate(zip(generators, twists)):
        if t < 1:
            continue
        relation: Vec = {(k, u_exps): one}
        target = shift.apply(w)
        if not upper.contains(target):
            back = lift(rees_ambient, target, restriction.images, upper.all_relations(), upper.rank, limits=limits)
            if back is None:
                raise InconclusiveError(f"[PUSHFORWARD] u-image of generator {k} is outside the restriction image")
            coords = lift(rees_ambient, vec_from_polys(back), generators, sections.all_relations(),
                          sections.rank, limits=limits)
            if coords is None:
                raise InconclusiveError(f"[PUSHFORWARD] u-image of generator {k} is not spanned in degree {t - 1}")
            add_into(relation, vec_transfer(vec_from_polys(coords), len(generators), rees_ambient, ring.ambient),
                     -one)
        relations.append(relation)
    return relations


def _build_term(module: GradedModule, presentation: ExtReesPresentation, index: int, window: DegreeWindow,
                limits: Limits, log) -> PushforwardTerm:
    ring = presentation.ring
    degrees = sorted({n for n in window if n >= 0} | {0})
    for _ in range(limits.max_sat_steps):
        d = _common_exponent(module, index, degrees, limits, log)
        sections = saturation_stage(module, POWER, d, index, limits).ext.module
        generators = _nonnegative_generators(sections)
        top = max((vector_degree(sections, w) for w in generators), default=0)
        missing = set(range(top)) - set(degrees)
        if not missing:
            break
        degrees = sorted(set(degrees) | missing)
    else:
        raise InconclusiveError(f"[PUSHFORWARD] index {index}: generator degrees keep growing")
    if not generators:
        log(f"[PUSHFORWARD] term {index} vanishes (exponent {d})")
        return PushforwardTerm(index, d, GradedModule.zero(ring), sections, [])
    sub = submodule_presentation(sections, generators, limits)
    relations = [vec_transfer(r, len(generators), module.ring.ambient, ring.ambient) for r in sub.relations]
    relations += _u_relations(module, presentation, index, d, sections, generators, sub.twists, limits)
    term = GradedModule(ring, sub.twists, relations)
    check = is_n_stable(term, 0, limits)
    if not check.stable:
        raise InconclusiveError(f"[PUSHFORWARD] term {index} is not 0-stable: {check.failure}")
    log(f"[PUSHFORWARD] term {index}: exponent {d}, twists {list(term.twists)}")
    return PushforwardTerm(index, d, term, sections, generators)


def pushforward_tilde(module: GradedModule, presentation: ExtReesPresentation, window: DegreeWindow, depth: int,
                      limits: Limits = DEFAULT_LIMITS,
                      log_function: Optional[Callable[[str], None]] = None,
                      model: Optional[bool] = None) -> Pushforward:
    """Rf̃_* of M̃ as a complex of 0-stable Ã-modules with terms in degrees 0..depth.

    Terms past the vanishing index are zero. When at most one term is nonzero
    the complex is that term alone; otherwise it is the Čech model, whose
    cohomology is the list of terms. ``model`` forces the choice either way.
    """
    log = log_function or log_message
    if module.ring.has_u:
        raise GradingError("[PUSHFORWARD] the module must live over the Rees ring")
    if depth < 0:
        raise ValueError("[PUSHFORWARD] depth must be non-negative")
    indices = list(range(min(depth, vanishing_index(module.ring, limits)) + 1)) if module.rank else []
    with concurrent.futures.ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
        terms = list(executor.map(lambda i: _build_term(module, presentation, i, window, limits, log), indices))
    if model is None:
        model = sum(1 for t in terms if not t.module.is_zero()) > 1
    if model and indices:
        cech = cech_model(module, presentation, window, indices[-1], limits, log)
        return Pushforward(module, presentation, window, terms, cech.complex, cech)
    complex_ = ComplexOfGradedModules(presentation.ring, {t.index: t.module for t in terms}, {},
                                      filtered=True, label="pushforward")
    return Pushforward(module, presentation, window, terms, complex_)


def structure_pushforward(presentation: ExtReesPresentation, window: DegreeWindow, depth: int,
                          limits: Limits = DEFAULT_LIMITS,
                          log_function: Optional[Callable[[str], None]] = None,
                          model: Optional[bool] = None) -> Pushforward:
    """Rf̃_*𝒪_Y."""
    return pushforward_tilde(presentation.rees.module, presentation, window, depth, limits, log_function, model)


def _sections_to_term(push: Pushforward, term: PushforwardTerm, n: int, limits: Limits) -> BaseMap:
    """H_n → T_n for n ≥ 0: a section written on the generators w_k keeps its coefficients."""
    rees_ambient = push.source.ring.ambient
    ring = push.presentation.ring
    source = graded_piece(term.sections, n, limits)
    target = graded_piece(term.module, n, limits)
    images = []
    for v in source.vectors:
        if term.sections.contains(v):
            images.append({})
            continue
        coeffs = lift(rees_ambient, v, term.generators, term.sections.all_relations(), term.sections.rank,
                      limits=limits)
        if coeffs is None:
            raise InconclusiveError(f"[PUSHFORWARD] a degree-{n} section is not spanned by the generators")
        # the degree-n part of the combination already gives v
        kept = [rees_ambient.poly({e: c for e, c in p.terms.items() if rees_ambient.weight(e) == n - t})
                for p, t in zip(coeffs, term.module.twists)]
        found = express(target, vec_transfer(vec_from_polys(kept), len(term.generators), rees_ambient, ring.ambient))
        if found is None:
            raise InconclusiveError(f"[PUSHFORWARD] a degree-{n} section has no image in T^{term.index}")
        images.append(found)
    return BaseMap(source.module, target.module, images)


def pieces_agree(push: Pushforward, window: DegreeWindow,
                 limits: Limits = DEFAULT_LIMITS) -> Dict[Tuple[int, int], bool]:
    """T^i_n ≅ H^i(Y, M̃(max(n, 0))) through explicit maps.

    For n ≥ 0, H^i at the term's exponent maps to T^i_n by keeping coefficients
    on the generators; below 0, multiplication by u^{-n} carries T^i_0 onto T^i_n.
    """
    ring = push.presentation.ring
    out = {}
    for term in push.terms:
        if not term.generators:
            for n in window:
                out[(term.index, n)] = colimit_piece(push.source, max(n, 0), term.index, POWER, limits).module.is_zero()
            continue
        at_zero = None
        for n in window:
            if n >= 0:
                out[(term.index, n)] = _sections_to_term(push, term, n, limits).is_isomorphism()
                continue
            if at_zero is None:
                at_zero = _sections_to_term(push, term, 0, limits).is_isomorphism()
            shift = multiplication_map(term.module, ring.u() ** (-n), n)
            out[(term.index, n)] = at_zero and piece_map(shift, 0, limits).is_isomorphism()
    return out


def adjunction_unit(push: Pushforward, limits: Limits = DEFAULT_LIMITS) -> GradedMap:
    """Ã^r → f̃_*(M̃) for M free of rank r in degree 0, sending e_h to the section e_h."""
    source = push.source
    ring = push.presentation.ring
    if not source.is_free() or any(source.twists):
        raise NotFreeError("[PUSHFORWARD] the unit map needs a free module generated in degree 0")
    free = GradedModule.free(ring, [0] * source.rank)
    term = push.term(0)
    if term is None or not term.generators:
        return GradedMap(free, GradedModule.zero(ring), [{} for _ in range(source.rank)])
    rees_ambient = source.ring.ambient
    sections = section_map(source, term.exponent, limits)
    images = []
    for h in range(source.rank):
        value = sections.apply(source.unit(h))
        if term.sections.contains(value):
            images.append({})
            continue
        coords = lift(rees_ambient, value, term.generators, term.sections.all_relations(), term.sections.rank,
                      limits=limits)
        if coords is None:
            raise InconclusiveError(f"[PUSHFORWARD] section {h} is not spanned by the degree-0 generators")
        images.append(vec_transfer(vec_from_polys(coords), len(term.generators), rees_ambient, ring.ambient))
    return GradedMap(free, term.module, images)


def complex_unit(push: Pushforward, limits: Limits = DEFAULT_LIMITS) -> GradedMap:
    """The unit into term 0 of ``push.complex``: the Čech cocycle Σ y_j^e·e_j, or the section map."""
    if push.model is None:
        return adjunction_unit(push, limits)
    if not push.source.is_free() or any(push.source.twists):
        raise NotFreeError("[PUSHFORWARD] the unit map needs a free module generated in degree 0")
    return push.model.unit()


def pullback_restrict(module: GradedModule, presentation: ExtReesPresentation, atlas: ChartAtlas,
                      i: int, limits: Limits = DEFAULT_LIMITS) -> BaseModule:
    """f̃^* T on chart i: forget u, keep degrees ≥ 0 and restrict."""
    return sheaf_restrict(tau(module, presentation, limits), atlas, i)


def restriction_matches(push: Pushforward, atlas: ChartAtlas, limits: Limits = DEFAULT_LIMITS) -> Dict[int, bool]:
    """Chart by chart, f̃^* of the degree-0 term against the restriction of the source module.

    A free restriction is matched by rank through ``is_free_of_rank``; otherwise the
    two presentations must coincide.
    """
    term = push.term(0)
    out = {}
    for chart in atlas:
        expected = sheaf_restrict(push.source, atlas, chart.index)
        if term is None or term.module.rank == 0:
            out[chart.index] = expected.is_zero()
            continue
        found = pullback_restrict(term.module, push.presentation, atlas, chart.index, limits)
        if expected.is_free_presentation():
            out[chart.index] = found.is_free_of_rank(expected.rank, limits)
        else:
            out[chart.index] = found.same_presentation(expected)
    return out
