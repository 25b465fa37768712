"""Hyper-Ext between bounded complexes over the extended Rees ring.

The source is replaced by a complex of twisted free modules with
non-negative twists, built from the top degree down: at each step the
cycles of the partial cone are covered by new free generators. Ext^k is
then the cohomology of the total Hom complex into the target.
"""

import concurrent.futures
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from algebra_core.errors import GradingError
from algebra_core.kernels import module_kernel
from algebra_core.vectors import Vec, add_into, vec_move, vec_restrict, vec_scale
from config.config import DEFAULT_LIMITS, MAX_WORKERS, Limits, log_message
from filtered_derived.complexes import ChainMap, ComplexOfGradedModules, cone
from graded.ext import ExtTable, piece_table
from graded.homology import HomAmbient, complex_cohomology
from graded.module import GradedModule, vector_degree
from graded.resolution import choose_generators
from graded.ring import DegreeWindow


@dataclass
class ResolvedComplex:
    """P → X with every P^k free; exact on the cone in degrees ≥ ``lowest``.

    ``differentials[k]`` are the images of the basis of P^k in P^{k+1};
    ``maps[k]`` the images of the basis of P^k in the cover of X^k.
    """

    target: ComplexOfGradedModules
    twists: Dict[int, List[int]]
    differentials: Dict[int, List[Vec]]
    maps: Dict[int, List[Vec]]
    lowest: int

    def free(self, k: int) -> GradedModule:
        return GradedModule.free(self.target.ring, self.twists.get(k, []))

    def term_twists(self, k: int) -> List[int]:
        return self.twists.get(k, [])

    def differential(self, k: int) -> List[Vec]:
        return self.differentials.get(k, [{} for _ in self.term_twists(k)])

    def complex(self) -> ComplexOfGradedModules:
        terms = {k: self.free(k) for k in self.twists}
        return ComplexOfGradedModules(self.target.ring, terms, self.differentials, True, "resolution")

    def chain_map(self) -> ChainMap:
        return ChainMap(self.complex(), self.target, self.maps)


def resolve_complex(complex_: ComplexOfGradedModules, lowest: int, limits: Limits = DEFAULT_LIMITS,
                    log_function: Optional[Callable[[str], None]] = None) -> ResolvedComplex:
    """A free replacement of X in degrees ≥ ``lowest``.

    A cycle (p, x) of C^k = P^{k+1} ⊕ X^k becomes a new basis element e of
    P^k with d e = −p and φ(e) = x, so that (p, x) is a boundary.
    """
    log = log_function or log_message
    resolved = ResolvedComplex(complex_, {}, {}, {}, lowest)
    if complex_.is_zero_complex():
        return resolved
    ring = complex_.ring
    for k in range(complex_.hi, lowest - 1, -1):
        partial = cone(resolved.chain_map())
        space, following = partial.term(k), partial.term(k + 1)
        if space.rank == 0:
            continue
        if following.rank == 0:
            cycles = space.units()
        else:
            cycles = module_kernel(ring.ambient, partial.differential(k), following.all_relations(),
                                   following.rank, limits)
        chosen = choose_generators(space, cycles, nonnegative=True)
        if not chosen:
            continue
        upper = len(resolved.term_twists(k + 1))
        p_part = range(upper)
        x_part = {c: c - upper for c in range(upper, space.rank)}
        minus = -ring.field.one
        resolved.twists[k] = [vector_degree(space, z) for z in chosen]
        resolved.differentials[k] = [vec_scale(vec_restrict(z, p_part), minus) for z in chosen]
        resolved.maps[k] = [vec_move(z, x_part) for z in chosen]
        log(f"[HYPEREXT] P^{k} has twists {resolved.twists[k]}")
    return resolved


@dataclass
class HomTerm:
    """Hom^n(P, Y) = ⊕_p Hom(P^p, Y^{p+n}); ``blocks[p]`` is (offset, ambient)."""

    n: int
    module: GradedModule
    blocks: Dict[int, Tuple[int, HomAmbient]]


def hom_term(resolved: ResolvedComplex, target: ComplexOfGradedModules, n: int) -> HomTerm:
    module = GradedModule.zero(target.ring)
    blocks: Dict[int, Tuple[int, HomAmbient]] = {}
    for p in sorted(resolved.twists):
        y = target.term(p + n)
        if y.rank == 0:
            continue
        ambient = HomAmbient(resolved.term_twists(p), y)
        blocks[p] = (module.rank, ambient)
        module = module.direct_sum(ambient.module)
    return HomTerm(n, module, blocks)


def _placed(vectors: List[Vec], offset: int) -> List[Vec]:
    return [vec_move(v, {c: c + offset for c, _ in v}) for v in vectors]


def hom_differential(resolved: ResolvedComplex, target: ComplexOfGradedModules, source: HomTerm,
                     following: HomTerm) -> List[Vec]:
    """D f = d_Y∘f − (−1)^n f∘d_P, as images of the generators of Hom^n in the cover of Hom^{n+1}."""
    field = target.ring.field
    sign = field.one if source.n % 2 == 0 else -field.one
    out = [dict() for _ in range(source.module.rank)]
    for p, (offset, ambient) in source.blocks.items():
        if p in following.blocks:
            other_offset, other = following.blocks[p]
            images = _placed(ambient.postcompose(target.differential(p + source.n), other), other_offset)
            for g, image in enumerate(images):
                add_into(out[offset + g], image)
        if p - 1 in following.blocks:
            other_offset, other = following.blocks[p - 1]
            images = _placed(ambient.precompose(resolved.differential(p - 1), other), other_offset)
            for g, image in enumerate(images):
                add_into(out[offset + g], image, -sign)
    return out


def hyper_ext(source: ComplexOfGradedModules, target: ComplexOfGradedModules, k_range: Tuple[int, int],
              window: DegreeWindow, limits: Limits = DEFAULT_LIMITS,
              log_function: Optional[Callable[[str], None]] = None) -> Dict[int, ExtTable]:
    """Ext^k(X, Y)_d for k in ``k_range`` (inclusive) and d in ``window``."""
    if not source.filtered:
        raise GradingError("[HYPEREXT] the source complex must be flagged filtered")
    if source.ring != target.ring:
        raise GradingError("[HYPEREXT] source and target live over different rings")
    k_lo, k_hi = k_range
    indices = list(range(k_lo, k_hi + 1))
    if source.is_zero_complex() or target.is_zero_complex():
        zero = GradedModule.zero(target.ring)
        return {k: piece_table(zero, window, k, limits) for k in indices}
    resolved = resolve_complex(source, target.lo - k_hi - 1, limits, log_function)
    terms = {n: hom_term(resolved, target, n) for n in range(k_lo - 1, k_hi + 2)}
    maps = {n: hom_differential(resolved, target, terms[n], terms[n + 1]) for n in range(k_lo - 1, k_hi + 1)}

    def compute(k: int) -> ExtTable:
        homology = complex_cohomology(maps[k - 1], terms[k].module, maps[k], terms[k + 1].module, limits)
        return piece_table(homology.module, window, k, limits)

    with concurrent.futures.ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
        tables = list(executor.map(compute, indices))
    return dict(zip(indices, tables))
