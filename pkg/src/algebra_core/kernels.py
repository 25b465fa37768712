"""Kernels, lifts and quotients of maps S^s → S^n/Q.

All of them come from one Gröbner basis of the augmented module generated
by (image_k, e_{n+k}) and (q, 0) under an order where the target block
dominates. Elements whose leading term lies in the syzygy block have zero
target part and generate the kernel. With ``allowed`` variables, the syzygy
block is ordered with the other variables eliminated first, so the
elements free of them generate the kernel over the subring k[allowed].
"""

from typing import List, Optional, Sequence

from algebra_core.groebner import GroebnerBasis, groebner_basis
from algebra_core.orders import ModuleOrder
from algebra_core.polynomial import Polynomial, PolynomialRing
from algebra_core.vectors import Vec, add_into, unit_vec, vec_components, vec_move, vec_support_vars, vec_to_polys
from config.config import DEFAULT_LIMITS, Limits


class AugmentedSystem:
    """The map S^s → S^n/Q, e_k ↦ images[k], with its augmented basis.

    Args:
        ring: ambient polynomial ring.
        images: s vectors in S^n.
        relations: generators of Q ⊂ S^n.
        target_rank: n.
        allowed: variables coefficients may use; ``None`` means all.
        limits: resource caps.
    """

    def __init__(self, ring: PolynomialRing, images: Sequence[Vec], relations: Sequence[Vec], target_rank: int,
                 allowed: Optional[Sequence[int]] = None, limits: Limits = DEFAULT_LIMITS, cache=None):
        self.ring = ring
        self.images = [dict(v) for v in images]
        self.relations = [dict(v) for v in relations if v]
        self.target_rank = target_rank
        self.source_rank = len(self.images)
        self.limits = limits
        if allowed is None:
            self.eliminated = ()
        else:
            allowed_set = set(allowed)
            self.eliminated = tuple(i for i in range(ring.nvars) if i not in allowed_set)
        n = target_rank
        self.order = ModuleOrder(ring.order, split=n, eliminate=self.eliminated)
        one = ring.field.one
        gens: List[Vec] = []
        for k, image in enumerate(self.images):
            gen = dict(image)
            add_into(gen, unit_vec(n + k, ring.nvars, one))
            gens.append(gen)
        gens.extend(self.relations)
        self.basis: GroebnerBasis = groebner_basis(gens, self.order, n + self.source_rank, ring.nvars,
                                                   limits, cache=cache)

    def kernel(self) -> List[Vec]:
        """Generators of the kernel, as vectors in S^s (over k[allowed] when restricted)."""
        n = self.target_rank
        shift = {n + k: k for k in range(self.source_rank)}
        eliminated = set(self.eliminated)
        out = []
        for element, lead in zip(self.basis.elements, self.basis.leads):
            if lead[0] < n:
                continue
            if eliminated and vec_support_vars(element) & eliminated:
                continue
            out.append(vec_move(element, shift))
        return out

    def lift(self, target: Vec) -> Optional[List[Polynomial]]:
        """Coefficients c with Σ c_k·images[k] ≡ target mod Q, or ``None``."""
        remainder = self.basis.reduce(target, limits=self.limits)
        n = self.target_rank
        if any(comp < n for comp in vec_components(remainder)):
            return None
        if self.eliminated and vec_support_vars(remainder) & set(self.eliminated):
            return None
        coeffs = vec_to_polys(remainder, self.source_rank, self.ring, offset=n)
        return [-c for c in coeffs]

    def image_contains(self, target: Vec) -> bool:
        return self.lift(target) is not None


def module_kernel(ring: PolynomialRing, images: Sequence[Vec], relations: Sequence[Vec], target_rank: int,
                  limits: Limits = DEFAULT_LIMITS) -> List[Vec]:
    """Kernel of S^s → S^n/Q sending e_k to images[k]."""
    if not images:
        return []
    return AugmentedSystem(ring, images, relations, target_rank, None, limits).kernel()


def restricted_kernel(ring: PolynomialRing, images: Sequence[Vec], relations: Sequence[Vec], target_rank: int,
                      allowed: Sequence[int], limits: Limits = DEFAULT_LIMITS) -> List[Vec]:
    """Kernel of k[allowed]^s → S^n/Q; coefficients use only ``allowed`` variables."""
    if not images:
        return []
    return AugmentedSystem(ring, images, relations, target_rank, allowed, limits).kernel()


def lift(ring: PolynomialRing, target: Vec, images: Sequence[Vec], relations: Sequence[Vec], target_rank: int,
         allowed: Optional[Sequence[int]] = None, limits: Limits = DEFAULT_LIMITS) -> Optional[List[Polynomial]]:
    """Solve Σ c_k·images[k] ≡ target mod Q."""
    if not images:
        reduced = groebner_basis(relations, ModuleOrder(ring.order), target_rank, ring.nvars, limits)
        return [] if reduced.contains(target) else None
    return AugmentedSystem(ring, images, relations, target_rank, allowed, limits).lift(target)


def module_quotient(ring: PolynomialRing, submodule: Sequence[Vec], rank: int, ideal_gens: Sequence[Polynomial],
                    limits: Limits = DEFAULT_LIMITS) -> List[Vec]:
    """(M : J) = {v ∈ S^rank : f·v ∈ M for every generator f of J}."""
    gens = [f for f in ideal_gens if f]
    if not gens:
        return [unit_vec(j, ring.nvars, ring.field.one) for j in range(rank)]
    images: List[Vec] = []
    for j in range(rank):
        image: Vec = {}
        for t, f in enumerate(gens):
            for exps, coeff in f.terms.items():
                add_into(image, {(t * rank + j, exps): coeff})
        images.append(image)
    relations = [vec_move(v, {c: t * rank + c for c in range(rank)}) for t in range(len(gens)) for v in submodule]
    return module_kernel(ring, images, relations, rank * len(gens), limits)


def intersect_submodules(ring: PolynomialRing, first: Sequence[Vec], second: Sequence[Vec], rank: int,
                         limits: Limits = DEFAULT_LIMITS) -> List[Vec]:
    """M ∩ N as the kernel of S^rank → S^rank/M ⊕ S^rank/N."""
    one = ring.field.one
    images = []
    for j in range(rank):
        image = unit_vec(j, ring.nvars, one)
        add_into(image, unit_vec(rank + j, ring.nvars, one))
        images.append(image)
    relations = [dict(v) for v in first] + [vec_move(v, {c: rank + c for c in range(rank)}) for v in second]
    return module_kernel(ring, images, relations, 2 * rank, limits)
