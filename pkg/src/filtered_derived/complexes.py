"""Bounded complexes of graded modules, chain maps, cones and cohomology."""

from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from algebra_core.errors import GradingError
from algebra_core.vectors import Vec, add_into, apply_matrix, vec_move, vec_scale
from config.config import DEFAULT_LIMITS, Limits
from graded.homology import complex_cohomology
from graded.module import GradedMap, GradedModule, Subquotient
from graded.pieces import graded_piece, is_torsion
from graded.ring import DegreeWindow, GradedRing
from rees.functors import is_n_stable, u_cokernel, u_kernel


class ComplexOfGradedModules:
    """X^lo → … → X^hi in cohomological degrees.

    ``differentials[k]`` lists the images of the generators of X^k in the
    cover of X^{k+1}. With ``filtered`` every term is meant to be 0-stable.
    """

    def __init__(self, ring: GradedRing, terms: Dict[int, GradedModule],
                 differentials: Optional[Dict[int, List[Vec]]] = None, filtered: bool = False, label: str = ""):
        self.ring = ring
        self.terms = {k: m for k, m in terms.items() if m.rank}
        self.differentials = {k: [dict(v) for v in images] for k, images in (differentials or {}).items()
                              if k in self.terms}
        self.filtered = filtered
        self.label = label
        for k in self.terms:
            GradedMap(self.term(k), self.term(k + 1), self.differential(k))

    @classmethod
    def single(cls, module: GradedModule, degree: int = 0, filtered: bool = True, label: str = "") \
            -> "ComplexOfGradedModules":
        return cls(module.ring, {degree: module}, {}, filtered, label)

    @property
    def lo(self) -> Optional[int]:
        return min(self.terms) if self.terms else None

    @property
    def hi(self) -> Optional[int]:
        return max(self.terms) if self.terms else None

    def degrees(self) -> List[int]:
        return list(range(self.lo, self.hi + 1)) if self.terms else []

    def is_zero_complex(self) -> bool:
        return not self.terms

    def term(self, k: int) -> GradedModule:
        return self.terms.get(k) or GradedModule.zero(self.ring)

    def differential(self, k: int) -> List[Vec]:
        if k in self.differentials:
            return self.differentials[k]
        return [{} for _ in range(self.term(k).rank)]

    def is_complex(self) -> bool:
        """d∘d = 0, checked by normal forms in the target term."""
        for k in self.terms:
            target = self.term(k + 2)
            following = self.differential(k + 1)
            for v in self.differential(k):
                if not target.contains(apply_matrix(following, v)):
                    return False
        return True

    def terms_stable(self, limits: Limits = DEFAULT_LIMITS) -> bool:
        return all(is_n_stable(m, 0, limits).stable for m in self.terms.values())

    def shift(self, n: int) -> "ComplexOfGradedModules":
        """X[n]: term k is X^{k+n}, differentials multiplied by (−1)^n."""
        sign = self.ring.field.one if n % 2 == 0 else -self.ring.field.one
        terms = {k - n: m for k, m in self.terms.items()}
        differentials = {k - n: [vec_scale(v, sign) for v in images] for k, images in self.differentials.items()}
        return ComplexOfGradedModules(self.ring, terms, differentials, self.filtered, self.label)

    def __repr__(self):
        shape = ", ".join(f"{k}: rank {m.rank}" for k, m in sorted(self.terms.items()))
        return f"ComplexOfGradedModules({self.label or 'X'}; {shape})"


@dataclass
class ChainMap:
    """``maps[k]`` lists the images of the generators of X^k in the cover of Y^k."""

    source: ComplexOfGradedModules
    target: ComplexOfGradedModules
    maps: Dict[int, List[Vec]]

    def component(self, k: int) -> List[Vec]:
        if k in self.maps:
            return self.maps[k]
        return [{} for _ in range(self.source.term(k).rank)]

    def commutes(self) -> bool:
        """f∘d_X = d_Y∘f on every generator."""
        for k in self.source.terms:
            target = self.target.term(k + 1)
            for v, image in zip(self.source.differential(k), self.component(k)):
                left = apply_matrix(self.component(k + 1), v)
                right = apply_matrix(self.target.differential(k), image)
                diff = dict(left)
                add_into(diff, right, -self.source.ring.field.one)
                if not target.contains(diff):
                    return False
        return True


def cone(f: ChainMap) -> ComplexOfGradedModules:
    """C^k = X^{k+1} ⊕ Y^k with d(x, y) = (−d_X x, f(x) + d_Y y)."""
    source, target = f.source, f.target
    if source.ring != target.ring:
        raise GradingError("[CONE] source and target live over different rings")
    ring = source.ring
    minus = -ring.field.one
    degrees = set(k - 1 for k in source.terms) | set(target.terms)
    terms: Dict[int, GradedModule] = {}
    differentials: Dict[int, List[Vec]] = {}
    for k in degrees:
        terms[k] = source.term(k + 1).direct_sum(target.term(k))
    for k in degrees:
        x_rank = source.term(k + 2).rank
        images = []
        for v, image in zip(source.differential(k + 1), f.component(k + 1)):
            out = vec_scale(v, minus)
            add_into(out, vec_move(image, {c: c + x_rank for c, _ in image}))
            images.append(out)
        for v in target.differential(k):
            images.append(vec_move(v, {c: c + x_rank for c, _ in v}))
        differentials[k] = images
    return ComplexOfGradedModules(ring, terms, differentials, source.filtered and target.filtered, "cone")


def cohomology_at(complex_: ComplexOfGradedModules, k: int, limits: Limits = DEFAULT_LIMITS) -> Subquotient:
    middle = complex_.term(k)
    prev_module = complex_.term(k - 1)
    prev = complex_.differential(k - 1) if prev_module.rank else []
    return complex_cohomology(prev, middle, complex_.differential(k), complex_.term(k + 1), limits)


def complex_cohomology_modules(complex_: ComplexOfGradedModules,
                               limits: Limits = DEFAULT_LIMITS) -> Dict[int, GradedModule]:
    """H^k(X) as presented graded modules, for every k carrying a term."""
    return {k: cohomology_at(complex_, k, limits).module for k in complex_.degrees()}


def euler_characteristic(complex_: ComplexOfGradedModules, window: DegreeWindow,
                         limits: Limits = DEFAULT_LIMITS) -> Optional[np.ndarray]:
    """Σ_k (−1)^k dim X^k_d per degree d; ``None`` when a piece is infinite over the field."""
    totals = np.zeros(len(window), dtype=np.int64)
    for k, module in complex_.terms.items():
        for pos, d in enumerate(window):
            dim = graded_piece(module, d, limits).module.field_dimension()
            if dim is None:
                return None
            totals[pos] += dim if k % 2 == 0 else -dim
    return totals


@dataclass(frozen=True)
class TorsionLevel:
    """gr^m(X) is acyclic for every m ≥ ``level``; ``level`` is ``None`` when X is not torsion."""

    level: Optional[int]
    onsets: Dict[int, Dict[str, Optional[int]]]

    @property
    def torsion(self) -> bool:
        return self.level is not None


def torsion_level(complex_: ComplexOfGradedModules, limits: Limits = DEFAULT_LIMITS) -> TorsionLevel:
    """Least n ≥ 0 with gr^m(X) acyclic for all m ≥ n.

    gr^m(X) is acyclic iff u: H^k(X)_{m+1} → H^k(X)_m is bijective for every
    k, so the answer is read off the vanishing onsets of ker u and coker u.
    """
    level = 0
    onsets: Dict[int, Dict[str, Optional[int]]] = {}
    for k, module in complex_cohomology_modules(complex_, limits).items():
        row: Dict[str, Optional[int]] = {}
        for name, part, offset in (("kernel", u_kernel(module, limits), 1), ("cokernel", u_cokernel(module), 0)):
            if part.is_zero():
                row[name] = None
                continue
            certificate = is_torsion(part, limits)
            if not certificate.torsion:
                row[name] = None
                onsets[k] = row
                return TorsionLevel(None, onsets)
            row[name] = certificate.degree
            level = max(level, certificate.degree - offset)
        onsets[k] = row
    return TorsionLevel(level, onsets)
