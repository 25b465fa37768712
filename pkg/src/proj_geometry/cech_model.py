"""A Čech model of Rf̃_* with real differentials, over the extended Rees ring.

For Ñ = M ⊗_A Ã and an exponent e the complex

    C_e^p = ⊕_{|S|=p+1} Ñ((p+1)e),    x·e_S ↦ Σ_{l∉S} ±y_l^e·x·e_{S∪l}

computes H^p(Y, M̃(n)) in degree n once e is stable on n, because Ã and A
agree after inverting any y_j. The model keeps the submodule of each term
generated in degrees ≥ 0: every term becomes 0-stable, the cohomology in
degrees ≥ 0 is untouched and negative degrees copy degree 0. The complex is
cut at the requested depth by keeping the cycles of the last term.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from algebra_core.errors import InconclusiveError
from algebra_core.kernels import AugmentedSystem, module_kernel
from algebra_core.vectors import Vec, add_into, apply_matrix, vec_from_polys, vec_transfer
from config.config import DEFAULT_LIMITS, Limits, log_message
from filtered_derived.complexes import ComplexOfGradedModules, cohomology_at
from graded.module import GradedMap, GradedModule, truncation_generators, twist, vector_degree
from graded.pieces import piece_map
from graded.resolution import choose_generators
from graded.ring import DegreeWindow, GradedRing
from rees.functors import u_kernel
from rees.presentation import ExtReesPresentation


def extend_module(module: GradedModule, presentation: ExtReesPresentation) -> GradedModule:
    """M ⊗_A Ã: the same generators, relations moved to the extended ring."""
    ring = presentation.ring
    relations = [vec_transfer(r, module.rank, module.ring.ambient, ring.ambient) for r in module.relations]
    return GradedModule(ring, module.twists, relations)


def _monomial(ring: GradedRing, indices: Sequence[int], exponent: int) -> Tuple[int, ...]:
    exps = [0] * ring.nvars
    for i in indices:
        exps[i] += exponent
    return tuple(exps)


@dataclass
class CechComplex:
    """C_e for one exponent; block b of C^p is ``subsets[p][b]`` and spans components b·rank … b·rank + rank − 1."""

    exponent: int
    rank: int
    subsets: List[List[Tuple[int, ...]]]
    complex: ComplexOfGradedModules

    @property
    def last(self) -> int:
        return len(self.subsets) - 1


def cech_complex(extended: GradedModule, exponent: int) -> CechComplex:
    ring = extended.ring
    positive = ring.positive_indices
    count = len(positive)
    rank = extended.rank
    one = ring.field.one
    subsets = [list(combinations(range(count), p + 1)) for p in range(count)]
    terms = {p: twist(extended, (p + 1) * exponent).power(len(subsets[p])) for p in range(count)}
    differentials: Dict[int, List[Vec]] = {}
    for p in range(count - 1):
        positions = {s: b for b, s in enumerate(subsets[p + 1])}
        images = []
        for s in subsets[p]:
            for h in range(rank):
                image: Vec = {}
                for l in range(count):
                    if l in s:
                        continue
                    t = tuple(sorted(s + (l,)))
                    sign = one if t.index(l) % 2 == 0 else -one
                    add_into(image, {(positions[t] * rank + h, _monomial(ring, [positive[l]], exponent)): sign})
                images.append(image)
        differentials[p] = images
    return CechComplex(exponent, rank, subsets, ComplexOfGradedModules(ring, terms, differentials,
                                                                       label=f"cech e={exponent}"))


def cech_transition(lower: CechComplex, upper: CechComplex, p: int, limits: Limits = DEFAULT_LIMITS) -> GradedMap:
    """H^p(C_e) → H^p(C_{e+1}) induced by e_S ↦ y_S·e_S."""
    ring = lower.complex.ring
    positive = ring.positive_indices
    one = ring.field.one
    images = [{(b * lower.rank + h, _monomial(ring, [positive[l] for l in s], 1)): one}
              for b, s in enumerate(lower.subsets[p]) for h in range(lower.rank)]
    source = cohomology_at(lower.complex, p, limits)
    target = cohomology_at(upper.complex, p, limits)
    coords = []
    for z in source.generators:
        found = target.express(apply_matrix(images, z))
        if found is None:
            raise InconclusiveError(f"[CECH] class of H^{p} at exponent {lower.exponent} does not map to a class")
        coords.append(found)
    return GradedMap(source.module, target.module, coords)


def stable_cech_exponent(extended: GradedModule, top: int, degrees: Sequence[int], limits: Limits = DEFAULT_LIMITS,
                         log_function: Optional[Callable[[str], None]] = None) -> int:
    """First e whose transition to e + 1 is bijective on H^0 … H^top in every degree of ``degrees``."""
    log = log_function or log_message
    lower = cech_complex(extended, 1)
    for e in range(1, 1 + limits.max_sat_steps):
        upper = cech_complex(extended, e + 1)
        if all(piece_map(cech_transition(lower, upper, p, limits), n, limits).is_isomorphism()
               for p in range(min(top, lower.last) + 1) for n in degrees):
            log(f"[CECH] stable at exponent {e} on degrees {list(degrees)}")
            return e
        lower = upper
    raise InconclusiveError(f"[CECH] no exponent up to {limits.max_sat_steps} is stable on {list(degrees)}")


@dataclass
class ModelTerm:
    """The submodule of ``space`` generated by ``vectors``; generator k of ``module`` is ``vectors[k]``."""

    space: GradedModule
    vectors: List[Vec]
    module: GradedModule
    system: Optional[AugmentedSystem]

    def coordinates(self, vec: Vec) -> Vec:
        if self.space.contains(vec):
            return {}
        coeffs = self.system.lift(vec) if self.system is not None else None
        if coeffs is None:
            raise InconclusiveError("[CECH] vector is outside the span of the term generators")
        return vec_from_polys(coeffs)


def model_term(space: GradedModule, vectors: Sequence[Vec], limits: Limits = DEFAULT_LIMITS) -> ModelTerm:
    vectors = [dict(v) for v in vectors if not space.contains(v)]
    if not vectors:
        return ModelTerm(space, [], GradedModule.zero(space.ring), None)
    system = AugmentedSystem(space.ring.ambient, vectors, space.all_relations(), space.rank, limits=limits)
    twists = [vector_degree(space, v) for v in vectors]
    return ModelTerm(space, vectors, GradedModule(space.ring, twists, system.kernel()), system)


def _cycles(term: ModelTerm, following: ModelTerm, differential: List[Vec], limits: Limits) -> List[Vec]:
    """Generators of degree ≥ 0 of ker(term → following), as vectors of ``term.space``."""
    if not term.vectors or not following.vectors:
        return term.vectors
    images = [following.coordinates(apply_matrix(differential, v)) for v in term.vectors]
    kernel = module_kernel(term.space.ring.ambient, images, following.module.all_relations(),
                           following.module.rank, limits)
    chosen = choose_generators(term.module, kernel, nonnegative=True)
    return [apply_matrix(term.vectors, c) for c in chosen]


@dataclass
class CechModel:
    exponent: int
    cech: CechComplex
    terms: List[ModelTerm]
    complex: ComplexOfGradedModules

    def unit(self) -> GradedMap:
        """Ã^r → term 0, e_h ↦ Σ_j y_j^e·e_(j, h); a cocycle for M free in degree 0."""
        ring = self.complex.ring
        positive = ring.positive_indices
        rank = self.cech.rank
        one = ring.field.one
        images = []
        for h in range(rank):
            vec: Vec = {}
            for j, i in enumerate(positive):
                add_into(vec, {(j * rank + h, _monomial(ring, [i], self.exponent)): one})
            images.append(self.terms[0].coordinates(vec))
        return GradedMap(GradedModule.free(ring, [0] * rank), self.terms[0].module, images)


def cech_model(module: GradedModule, presentation: ExtReesPresentation, window: DegreeWindow, top: int,
               limits: Limits = DEFAULT_LIMITS,
               log_function: Optional[Callable[[str], None]] = None) -> CechModel:
    """Terms 0..top of the Čech model of Rf̃_*(M̃), stable on the non-negative degrees of ``window``."""
    log = log_function or log_message
    extended = extend_module(module, presentation)
    if not u_kernel(extended, limits).is_zero():
        raise InconclusiveError("[CECH] u is a zero divisor on M ⊗ Ã")
    degrees = sorted({n for n in window if n >= 0} | {0})
    exponent = stable_cech_exponent(extended, top, degrees, limits, log)
    cech = cech_complex(extended, exponent)
    c = cech.complex
    top = min(top, cech.last)
    terms = [model_term(c.term(p), truncation_generators(c.term(p), 0), limits) for p in range(top + 1)]
    if top < cech.last:
        following = model_term(c.term(top + 1), truncation_generators(c.term(top + 1), 0), limits)
        terms[top] = model_term(c.term(top), _cycles(terms[top], following, c.differential(top), limits), limits)
    differentials = {p: [terms[p + 1].coordinates(apply_matrix(c.differential(p), v)) for v in terms[p].vectors]
                     for p in range(top)}
    complex_ = ComplexOfGradedModules(presentation.ring, {p: t.module for p, t in enumerate(terms)}, differentials,
                                      filtered=True, label="pushforward")
    log(f"[CECH] model at exponent {exponent}: ranks {[t.module.rank for t in terms]}")
    return CechModel(exponent, cech, terms, complex_)
