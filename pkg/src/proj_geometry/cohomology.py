"""Cohomology of the sheaves M̃(m) on the blowup.

With J_d the ideal generated by the degree-d monomials in the y's,

    H⁰(Y, M̃(m)) = colim_d Hom(J_d, M)_m,
    H^i(Y, M̃(m)) = colim_d Ext^i(J_d, M)_m = colim_d Ext^{i+1}(A/J_d, M)_m   (i ≥ 1).

The transition maps come from the inclusions J_{d+1} ⊂ J_d lifted to
resolutions. A colimit is accepted at the first exponent d whose transition
map is an isomorphism on the degree-m piece; the exponent is reported.
"""

import concurrent.futures
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from algebra_core.errors import InconclusiveError
from algebra_core.ideals import krull_dimension
from algebra_core.kernels import lift
from algebra_core.polynomial import Polynomial, exponent_tuples
from algebra_core.vectors import (Vec, add_into, apply_matrix, poly_vec, vec_from_polys, vec_move, vec_shift,
                                   vec_to_polys)
from config.config import DEFAULT_LIMITS, MAX_WORKERS, Limits, log_message
from graded.base_module import BaseMap, BaseModule, as_graded
from graded.ext import ext_from_resolution
from graded.homology import HomAmbient, complex_cohomology
from graded.module import (GradedMap, GradedModule, Subquotient, quotient_presentation, submodule_presentation,
                           truncate, truncation_generators)
from graded.pieces import PieceBasis, express, graded_piece, piece_map
from graded.resolution import FreeResolution, chain_lift, free_resolution
from graded.ring import DegreeWindow, GradedRing

POWER = "power"
QUOTIENT = "quotient"


@dataclass(frozen=True)
class IrrelevantPower:
    """J_d = (y)^d and A/J_d; generator k of ``module`` is ``monomials[k]``."""

    degree: int
    exponents: Tuple[Tuple[int, ...], ...]
    monomials: Tuple[Polynomial, ...]
    module: GradedModule
    quotient: GradedModule

    def position(self, exps: Tuple[int, ...]) -> int:
        return self.exponents.index(exps)


@lru_cache(maxsize=None)
def irrelevant_power(ring: GradedRing, d: int, limits: Limits = DEFAULT_LIMITS) -> IrrelevantPower:
    positive = ring.positive_indices
    exponents = tuple(exponent_tuples(len(positive), d))
    monomials = []
    for alpha in exponents:
        exps = [0] * ring.nvars
        for i, a in zip(positive, alpha):
            exps[i] = a
        monomials.append(ring.ambient.monomial(tuple(exps)))
    free = GradedModule.free(ring, [0])
    vectors = [poly_vec(p) for p in monomials]
    module = submodule_presentation(free, vectors, limits)
    return IrrelevantPower(d, exponents, tuple(monomials), module, quotient_presentation(free, vectors))


@dataclass(frozen=True)
class CohomologyEntry:
    """One cohomology group over the base, with the saturation exponent that certified it."""

    twist: int
    index: int
    module: BaseModule
    exponent: Optional[int]
    route: str = POWER

    @property
    def is_zero(self) -> bool:
        return self.module.is_zero()


@dataclass
class SaturationStage:
    """A resolution of J_d (or A/J_d) and Ext^index of it into M."""

    resolution: FreeResolution
    ext: Subquotient


def _source(power: IrrelevantPower, family: str) -> GradedModule:
    return power.module if family == POWER else power.quotient


def saturation_stage(module: GradedModule, family: str, d: int, index: int,
                     limits: Limits = DEFAULT_LIMITS) -> SaturationStage:
    def compute():
        source = _source(irrelevant_power(module.ring, d, limits), family)
        # one resolution per exponent serves every index up to the vanishing index
        length = max(index, vanishing_index(module.ring, limits)) + 1
        resolution = free_resolution(source, length, limits=limits)
        return SaturationStage(resolution, ext_from_resolution(resolution, module, index, limits))
    return module.memoized(("local", family, d, index), compute)


def power_inclusion(ring: GradedRing, d: int, coefficients: Optional[Sequence[Polynomial]] = None,
                    limits: Limits = DEFAULT_LIMITS) -> List[Vec]:
    """Images of the generators of J_{d+1} in the cover of J_d.

    y^γ is sent to c_i·e_β with γ = β + e_i for the first index i with γ_i > 0;
    c_i = y_i gives the inclusion, c_i = g_i gives multiplication by u.
    """
    lower = irrelevant_power(ring, d, limits)
    upper = irrelevant_power(ring, d + 1, limits)
    if coefficients is None:
        coefficients = ring.positive_gens()
    images = []
    for gamma in upper.exponents:
        i = next(k for k, a in enumerate(gamma) if a)
        beta = list(gamma)
        beta[i] -= 1
        images.append(poly_vec(coefficients[i], lower.position(tuple(beta))))
    return images


def _level0(source: FreeResolution, target: FreeResolution, images: Sequence[Vec], limits: Limits) -> List[Vec]:
    """Carry a module map given on covers to the F₀ terms of the two resolutions."""
    ring = target.module.ring
    space = target.module
    out = []
    for a in source.augmentation:
        vec = apply_matrix(images, a)
        if space.contains(vec):
            out.append({})
            continue
        coeffs = lift(ring.ambient, vec, target.augmentation, space.all_relations(), space.rank, limits=limits)
        if coeffs is None:
            raise InconclusiveError("[SECTIONS] map of irrelevant powers does not factor through the resolution")
        out.append(vec_from_polys(coeffs))
    return out


def induced_map(module: GradedModule, family: str, d: int, index: int, images: Sequence[Vec], degree: int,
                limits: Limits = DEFAULT_LIMITS) -> GradedMap:
    """Ext^index(S_d, M) → Ext^index(S_{d+1}, M) induced by a map S_{d+1} → S_d given on covers."""
    lower = saturation_stage(module, family, d, index, limits)
    upper = saturation_stage(module, family, d + 1, index, limits)
    level0 = _level0(upper.resolution, lower.resolution, images, limits)
    maps = chain_lift(upper.resolution, lower.resolution, level0, index, limits)
    ambient = HomAmbient(lower.resolution.term_twists(index), module)
    other = HomAmbient(upper.resolution.term_twists(index), module)
    chain = maps[index] if index < len(maps) else [{} for _ in range(upper.resolution.rank(index))]
    columns = ambient.precompose(chain, other)
    coords = []
    for z in lower.ext.generators:
        found = upper.ext.express(apply_matrix(columns, z))
        if found is None:
            raise InconclusiveError(f"[SECTIONS] induced class at exponent {d + 1} is not a cycle")
        coords.append(found)
    return GradedMap(lower.ext.module, upper.ext.module, coords, degree)


def restriction_map(module: GradedModule, family: str, d: int, index: int,
                    limits: Limits = DEFAULT_LIMITS) -> GradedMap:
    """The colimit transition Ext^index(S_d, M) → Ext^index(S_{d+1}, M)."""
    def compute():
        if family == POWER:
            images = power_inclusion(module.ring, d, limits=limits)
        else:
            images = [{(0, (0,) * module.ring.nvars): module.ring.field.one}]
        return induced_map(module, family, d, index, images, 0, limits)
    return module.memoized(("restriction", family, d, index), compute)


def first_exponent(module: GradedModule, m: int) -> int:
    """Smallest exponent tried: J_d(m) must land above every generator of M."""
    top = module.max_twist() if module.rank else 0
    return max(1, top - m + 1)


def stable_exponent(module: GradedModule, m: int, index: int, family: str = POWER,
                    limits: Limits = DEFAULT_LIMITS,
                    log_function: Optional[Callable[[str], None]] = None) -> int:
    """First d whose transition map is bijective in degree m."""
    log = log_function or log_message
    start = first_exponent(module, m)
    for d in range(start, start + limits.max_sat_steps):
        if piece_map(restriction_map(module, family, d, index, limits), m, limits).is_isomorphism():
            log(f"[SECTIONS] index {index}, twist {m}: stable at exponent {d}")
            return d
    raise InconclusiveError(f"[SECTIONS] index {index}, twist {m}: no stable exponent in "
                            f"[{start}, {start + limits.max_sat_steps - 1}]")


def colimit_piece(module: GradedModule, m: int, index: int, family: str = POWER,
                  limits: Limits = DEFAULT_LIMITS,
                  log_function: Optional[Callable[[str], None]] = None) -> CohomologyEntry:
    base = module.ring.base
    if module.rank == 0:
        return CohomologyEntry(m, index, BaseModule.zero(base), 0, family)
    d = stable_exponent(module, m, index, family, limits, log_function)
    piece = graded_piece(saturation_stage(module, family, d, index, limits).ext.module, m, limits).module
    return CohomologyEntry(m, index, piece, d, family)


def twisted_sections(module: GradedModule, m: int, limits: Limits = DEFAULT_LIMITS,
                     log_function: Optional[Callable[[str], None]] = None) -> CohomologyEntry:
    """H⁰(Y, M̃(m)) over the base, certified by its saturation exponent."""
    return colimit_piece(module, m, 0, POWER, limits, log_function)


def fiber_dimension(ring: GradedRing) -> int:
    """r, one less than the number of charts."""
    return len(ring.positive_indices) - 1


@lru_cache(maxsize=None)
def vanishing_index(ring: GradedRing, limits: Limits = DEFAULT_LIMITS) -> int:
    """Largest i with H^i(Y, F) possibly nonzero for a coherent F.

    Past the number of charts the Čech complex ends. For i ≥ 1 the groups are
    supported on V(I) and bounded by the exceptional divisor, a Cartier
    divisor of Y, so i ≤ dim A − 2 as well.
    """
    return max(0, min(fiber_dimension(ring), krull_dimension(ring.quotient, limits) - 2))


def higher_cohomology(module: GradedModule, m: int, i: int, limits: Limits = DEFAULT_LIMITS,
                      log_function: Optional[Callable[[str], None]] = None) -> CohomologyEntry:
    """H^i(Y, M̃(m)) for i ≥ 1; zero without computation past the vanishing index."""
    if i < 1:
        raise ValueError("[SECTIONS] higher cohomology needs i >= 1")
    if i > vanishing_index(module.ring, limits):
        return CohomologyEntry(m, i, BaseModule.zero(module.ring.base), None, "bound")
    return colimit_piece(module, m, i, POWER, limits, log_function)


def local_cohomology(module: GradedModule, j: int, m: int, limits: Limits = DEFAULT_LIMITS,
                     log_function: Optional[Callable[[str], None]] = None) -> CohomologyEntry:
    """H^j_{J}(M)_m = colim_d Ext^j(A/J_d, M)_m."""
    if j < 0:
        raise ValueError("[SECTIONS] local cohomology index must be non-negative")
    return colimit_piece(module, m, j, QUOTIENT, limits, log_function)


def section_map(module: GradedModule, d: int, limits: Limits = DEFAULT_LIMITS) -> GradedMap:
    """M → Hom(J_d, M), e_h ↦ (y^β ↦ y^β·e_h)."""
    stage = saturation_stage(module, POWER, d, 0, limits)
    power = irrelevant_power(module.ring, d, limits)
    ambient = HomAmbient(stage.resolution.term_twists(0), module)
    ring = module.ring.ambient
    elements = []
    for a in stage.resolution.augmentation:
        poly = ring.zero()
        for p, mono in zip(vec_to_polys(a, power.module.rank, ring), power.monomials):
            poly = poly + p * mono
        elements.append(poly)
    images = []
    for h in range(module.rank):
        vec: Vec = {}
        for k, poly in enumerate(elements):
            add_into(vec, poly_vec(poly, ambient.index(k, h)))
        found = stage.ext.express(vec)
        if found is None:
            raise InconclusiveError("[SECTIONS] the section map does not land in Hom")
        images.append(found)
    return GradedMap(module, stage.ext.module, images, 0)


def sections_agree(module: GradedModule, m: int, limits: Limits = DEFAULT_LIMITS,
                   log_function: Optional[Callable[[str], None]] = None) -> bool:
    """Whether M_m → H⁰(Y, M̃(m)) is an isomorphism."""
    d = stable_exponent(module, m, 0, POWER, limits, log_function)
    return piece_map(section_map(module, d, limits), m, limits).is_isomorphism()


@dataclass
class CohomologyTable:
    """H^i(Y, M̃(m)) for twists m in ``twists`` and indices 0..``max_index``."""

    twists: DegreeWindow
    max_index: int
    entries: Dict[Tuple[int, int], CohomologyEntry]

    def entry(self, m: int, i: int) -> CohomologyEntry:
        return self.entries[(m, i)]

    def rows(self) -> List[dict]:
        out = []
        for m in self.twists:
            cells = [self.entries[(m, i)] for i in range(self.max_index + 1)]
            out.append({
                "twist": m,
                "values": {str(c.index): c.module.describe() for c in cells},
                "exponents": {str(c.index): c.exponent for c in cells},
            })
        return out


def cohomology_table(module: GradedModule, twists: DegreeWindow, max_index: int,
                     limits: Limits = DEFAULT_LIMITS,
                     log_function: Optional[Callable[[str], None]] = None) -> CohomologyTable:
    cells = [(m, i) for m in twists for i in range(max_index + 1)]

    def compute(cell):
        m, i = cell
        if i == 0:
            return twisted_sections(module, m, limits, log_function)
        return higher_cohomology(module, m, i, limits, log_function)

    with concurrent.futures.ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
        results = list(executor.map(compute, cells))
    return CohomologyTable(twists, max_index, dict(zip(cells, results)))


def _shared_exponent(modules: Sequence[GradedModule], m: int, limits: Limits,
                     log_function: Optional[Callable[[str], None]] = None) -> int:
    """First exponent whose transition map is bijective in degree m for every module."""
    d = max(stable_exponent(module, m, 0, POWER, limits, log_function) for module in modules)
    cap = d + limits.max_sat_steps
    while d < cap:
        if all(piece_map(restriction_map(module, POWER, d, 0, limits), m, limits).is_isomorphism()
               for module in modules):
            return d
        d += 1
    raise InconclusiveError(f"[SECTIONS] twist {m}: no exponent below {cap} is stable for every module")


def sections_functor(fmap: GradedMap, m: int, limits: Limits = DEFAULT_LIMITS,
                     log_function: Optional[Callable[[str], None]] = None) -> BaseMap:
    """H⁰(Y, M̃(m)) → H⁰(Y, Ñ(m)) for a degree-0 map M → N, composing homomorphisms J_d → M with it."""
    if fmap.degree:
        raise ValueError("[SECTIONS] only degree-0 maps act on sections")
    source, target = fmap.source, fmap.target
    if source.rank == 0 or target.rank == 0:
        lower = colimit_piece(source, m, 0, POWER, limits, log_function).module
        upper = colimit_piece(target, m, 0, POWER, limits, log_function).module
        return BaseMap(lower, upper, [{} for _ in range(lower.rank)])
    d = _shared_exponent([source, target], m, limits, log_function)
    lower = saturation_stage(source, POWER, d, 0, limits)
    upper = saturation_stage(target, POWER, d, 0, limits)
    twists = lower.resolution.term_twists(0)
    columns = HomAmbient(twists, source).postcompose(fmap.images, HomAmbient(twists, target))
    images = []
    for z in lower.ext.generators:
        found = upper.ext.express(apply_matrix(columns, z))
        if found is None:
            raise InconclusiveError("[SECTIONS] a composed homomorphism is not a cycle")
        images.append(found)
    return piece_map(GradedMap(lower.ext.module, upper.ext.module, images, 0), m, limits)


def projection_formula_check(module: GradedModule, rank: int, m: int, limits: Limits = DEFAULT_LIMITS) -> bool:
    """The copies of H⁰ of M, placed by the summand inclusions, are all of H⁰ of M^⊕rank."""
    if rank < 1:
        raise ValueError("[SECTIONS] the number of copies must be positive")
    whole = module.power(rank)
    maps = [sections_functor(GradedMap(module, whole, [whole.unit(c * module.rank + h) for h in range(module.rank)]),
                             m, limits)
            for c in range(rank)]
    copies = BaseModule.zero(maps[0].source.ring)
    for f in maps:
        copies = copies.direct_sum(f.source)
    return BaseMap(copies, maps[0].target, [v for f in maps for v in f.images]).is_isomorphism()


def truncation_invariant(module: GradedModule, m: int, d: int, limits: Limits = DEFAULT_LIMITS) -> bool:
    """The inclusion M_{≥d} ⊂ M induces an isomorphism on H⁰(Y, ·(m)) for d ≤ m."""
    if d > m:
        raise ValueError("[SECTIONS] truncation degree must not exceed the twist")
    cut = truncate(module, d, limits)
    images = module.units() if cut is module else truncation_generators(module, d)
    return sections_functor(GradedMap(cut, module, images), m, limits).is_isomorphism()


@dataclass
class CechResult:
    """Cohomology of the exponent-e Čech complex ⊕_{|S|=p+1} M_{m+(p+1)e}.

    ``homology[p]`` presents ``groups[p]`` on cycles of C^p, whose block S is
    ``pieces[p]``.
    """

    twist: int
    exponent: int
    groups: Dict[int, BaseModule]
    homology: Dict[int, Subquotient] = field(default_factory=dict)
    pieces: List[PieceBasis] = field(default_factory=list)


def cech_cohomology(module: GradedModule, m: int, exponent: int,
                    limits: Limits = DEFAULT_LIMITS) -> CechResult:
    """Čech cohomology on the cover by the charts y_i ≠ 0, with denominators y_S^e.

    A class in position S of C^p is x / y_S^e with x ∈ M_{m+(p+1)e}; the
    differential multiplies by y_l^e with the usual alternating sign.
    """
    ring = module.ring
    positive = ring.positive_indices
    count = len(positive)
    subsets = [list(combinations(range(count), p + 1)) for p in range(count)]
    pieces = [graded_piece(module, m + (p + 1) * exponent, limits) for p in range(count)]
    terms = []
    for p in range(count):
        block = pieces[p].module
        term = BaseModule.zero(ring.base)
        for _ in subsets[p]:
            term = term.direct_sum(block)
        terms.append(term)
    differentials: List[List[Vec]] = []
    for p in range(count - 1):
        width = pieces[p + 1].module.rank
        positions = {s: b for b, s in enumerate(subsets[p + 1])}
        images = []
        for s in subsets[p]:
            for v in pieces[p].vectors:
                image: Vec = {}
                for l in range(count):
                    if l in s:
                        continue
                    t = tuple(sorted(s + (l,)))
                    sign = ring.field.one if t.index(l) % 2 == 0 else -ring.field.one
                    exps = [0] * ring.nvars
                    exps[positive[l]] = exponent
                    coords = express(pieces[p + 1], vec_shift(v, tuple(exps), sign))
                    if coords is None:
                        raise InconclusiveError("[CECH] product is not spanned by the next piece")
                    offset = positions[t] * width
                    add_into(image, vec_move(coords, {c: c + offset for c, _ in coords}))
                images.append(image)
        differentials.append(images)
    graded_terms = [as_graded(t) for t in terms]
    groups = {}
    homologies = {}
    for p in range(count):
        prev = differentials[p - 1] if p > 0 else []
        following = differentials[p] if p < count - 1 else [{} for _ in range(terms[p].rank)]
        nxt = graded_terms[p + 1] if p < count - 1 else GradedModule.zero(graded_terms[p].ring)
        homologies[p] = complex_cohomology(prev, graded_terms[p], following, nxt, limits)
        homology = homologies[p].module
        groups[p] = BaseModule(ring.base, homology.rank, homology.relations)
    return CechResult(m, exponent, groups, homologies, pieces)


def cech_section_map(module: GradedModule, result: CechResult, limits: Limits = DEFAULT_LIMITS) -> BaseMap:
    """M_m → Čech H⁰, a ↦ (y_i^e·a / y_i^e)_i."""
    ring = module.ring
    source = graded_piece(module, result.twist, limits)
    block = result.pieces[0]
    width = block.module.rank
    images = []
    for v in source.vectors:
        cocycle: Vec = {}
        for i, index in enumerate(ring.positive_indices):
            exps = [0] * ring.nvars
            exps[index] = result.exponent
            coords = express(block, vec_shift(v, tuple(exps), ring.field.one))
            if coords is None:
                raise InconclusiveError("[CECH] y_i^e times a section is not spanned by C^0")
            add_into(cocycle, vec_move(coords, {c: c + i * width for c, _ in coords}))
        found = result.homology[0].express(cocycle)
        if found is None:
            raise InconclusiveError("[CECH] a section does not give a cocycle")
        images.append(found)
    return BaseMap(source.module, result.groups[0], images)


def cech_sections_agree(module: GradedModule, m: int, exponent: int, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Whether M_m → Čech H⁰ at ``exponent`` is an isomorphism."""
    return cech_section_map(module, cech_cohomology(module, m, exponent, limits), limits).is_isomorphism()
