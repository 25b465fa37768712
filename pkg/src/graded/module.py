"""Finitely presented graded modules, graded maps and subquotients.

A ``GradedModule`` is the cokernel of a homogeneous map into the twisted
free module ⊕ A(−t_j): generator j sits in degree ``twists[j]`` and the
relations are vectors of the ambient polynomial ring. The ring relations
J·e_j are always implied.
"""

import concurrent.futures
import threading
from typing import Dict, List, Optional, Sequence

from algebra_core.errors import GradingError
from algebra_core.ideals import FreeSubmodule
from algebra_core.kernels import lift, module_kernel
from algebra_core.polynomial import exponent_tuples
from algebra_core.vectors import Vec, apply_matrix, poly_vec, unit_vec, vec_from_polys, vec_move
from config.config import DEFAULT_LIMITS, Limits
from graded.ring import GradedRing


class GradedModule:
    """coker(F₁ → F₀) over a graded ring.

    Args:
        ring: the graded ring.
        twists: degree of each generator.
        relations: homogeneous vectors in the cover F₀.
    """

    def __init__(self, ring: GradedRing, twists: Sequence[int], relations: Sequence[Vec] = ()):
        self.ring = ring
        self.twists = tuple(int(t) for t in twists)
        self.relations = [dict(r) for r in relations if r]
        for r in self.relations:
            vector_degree(self, r)
        self._lock = threading.Lock()
        self._submodule: Optional[FreeSubmodule] = None
        self.memo: Dict[tuple, concurrent.futures.Future] = {}

    @classmethod
    def free(cls, ring: GradedRing, twists: Sequence[int]) -> "GradedModule":
        return cls(ring, twists, [])

    @classmethod
    def zero(cls, ring: GradedRing) -> "GradedModule":
        return cls(ring, [], [])

    @property
    def rank(self) -> int:
        return len(self.twists)

    @property
    def submodule(self) -> FreeSubmodule:
        with self._lock:
            if self._submodule is None:
                self._submodule = FreeSubmodule(self.ring.quotient, self.rank, self.relations, self.twists)
            return self._submodule

    def implicit_relations(self) -> List[Vec]:
        return [poly_vec(r, j) for r in self.ring.relations for j in range(self.rank)]

    def all_relations(self) -> List[Vec]:
        return self.relations + self.implicit_relations()

    def unit(self, j: int) -> Vec:
        return unit_vec(j, self.ring.nvars, self.ring.field.one)

    def units(self) -> List[Vec]:
        return [self.unit(j) for j in range(self.rank)]

    def contains(self, vec: Vec) -> bool:
        """Whether ``vec`` is zero in the module."""
        return not vec or self.submodule.contains(vec)

    def is_zero(self) -> bool:
        return self.rank == 0 or self.submodule.is_whole()

    def is_free(self) -> bool:
        implicit = FreeSubmodule(self.ring.quotient, self.rank, [])
        return all(implicit.contains(r) for r in self.relations)

    def min_twist(self) -> Optional[int]:
        return min(self.twists) if self.twists else None

    def max_twist(self) -> Optional[int]:
        return max(self.twists) if self.twists else None

    def direct_sum(self, other: "GradedModule") -> "GradedModule":
        shift = {c: c + self.rank for c in range(other.rank)}
        return GradedModule(self.ring, self.twists + other.twists,
                            self.relations + [vec_move(r, shift) for r in other.relations])

    def power(self, copies: int) -> "GradedModule":
        out = GradedModule.zero(self.ring)
        for _ in range(copies):
            out = out.direct_sum(self)
        return out

    def memoized(self, key: tuple, compute):
        """Return ``memo[key]``, computing it once.

        Concurrent callers of the same key wait for the first one; a failed
        computation is forgotten so the next caller retries.
        """
        with self._lock:
            pending = self.memo.get(key)
            owner = pending is None
            if owner:
                pending = self.memo[key] = concurrent.futures.Future()
        if not owner:
            return pending.result()
        try:
            value = compute()
        except BaseException as exc:
            with self._lock:
                self.memo.pop(key, None)
            pending.set_exception(exc)
            raise
        pending.set_result(value)
        return value

    def finished(self, kind: str) -> List[tuple]:
        """(key, value) for every completed entry whose key starts with ``kind``."""
        with self._lock:
            entries = list(self.memo.items())
        return [(key, f.result()) for key, f in entries if key[0] == kind and f.done() and not f.exception()]

    def __repr__(self):
        return f"GradedModule(twists={list(self.twists)}, relations={len(self.relations)})"


def vector_degree(module: GradedModule, vec: Vec) -> Optional[int]:
    """Degree of a homogeneous cover vector; ``None`` for the zero vector."""
    weight = module.ring.ambient.weight
    found = {module.twists[comp] + weight(exps) for comp, exps in vec}
    if not found:
        return None
    if len(found) > 1:
        raise GradingError(f"[GRADED] vector is not homogeneous (degrees {sorted(found)})")
    return found.pop()


def twist(module: GradedModule, k: int) -> GradedModule:
    """M(k), so that twist(M, k)_d = M_{d+k}."""
    if k == 0:
        return module
    return GradedModule(module.ring, [t - k for t in module.twists], module.relations)


def truncation_generators(module: GradedModule, d: int) -> List[Vec]:
    """e_j when t_j ≥ d, otherwise every y^α·e_j of degree exactly d."""
    ring = module.ring
    positive = ring.positive_indices
    one = ring.field.one
    out = []
    for j, t in enumerate(module.twists):
        if t >= d:
            out.append(module.unit(j))
            continue
        for alpha in exponent_tuples(len(positive), d - t):
            exps = [0] * ring.nvars
            for i, a in zip(positive, alpha):
                exps[i] = a
            out.append({(j, tuple(exps)): one})
    return out


def submodule_presentation(module: GradedModule, vectors: Sequence[Vec],
                           limits: Limits = DEFAULT_LIMITS) -> GradedModule:
    """The submodule of ``module`` generated by homogeneous ``vectors``, as a cokernel.

    Generators that are zero in ``module`` are kept so that generator k of the
    result is always ``vectors[k]``.
    """
    vectors = [dict(v) for v in vectors]
    degrees = []
    for v in vectors:
        deg = vector_degree(module, v)
        degrees.append(0 if deg is None else deg)
    if not vectors:
        return GradedModule.zero(module.ring)
    relations = module_kernel(module.ring.ambient, vectors, module.all_relations(), module.rank, limits)
    return GradedModule(module.ring, degrees, relations)


def quotient_presentation(module: GradedModule, vectors: Sequence[Vec]) -> GradedModule:
    return GradedModule(module.ring, module.twists, module.relations + [dict(v) for v in vectors if v])


def truncate(module: GradedModule, d: int, limits: Limits = DEFAULT_LIMITS) -> GradedModule:
    """The submodule generated by all pieces of degree ≥ d."""
    if all(t >= d for t in module.twists):
        return module
    return submodule_presentation(module, truncation_generators(module, d), limits)


class GradedMap:
    """Homogeneous map of graded modules of the given ``degree``.

    ``images[k]`` is a cover vector of ``target``: the image of generator k.
    """

    def __init__(self, source: GradedModule, target: GradedModule, images: Sequence[Vec], degree: int = 0):
        if len(images) != source.rank:
            raise GradingError("[GRADED] one image per source generator is required")
        self.source = source
        self.target = target
        self.images = [dict(v) for v in images]
        self.degree = degree
        for k, v in enumerate(self.images):
            deg = vector_degree(target, v)
            if deg is not None and deg != source.twists[k] + degree:
                raise GradingError(f"[GRADED] image of generator {k} has degree {deg}, "
                                   f"expected {source.twists[k] + degree}")

    def apply(self, vec: Vec) -> Vec:
        return apply_matrix(self.images, vec)

    def is_well_defined(self) -> bool:
        """Every relation of the source maps to zero."""
        return all(self.target.contains(self.apply(r)) for r in self.source.relations)

    def kernel_vectors(self, limits: Limits = DEFAULT_LIMITS) -> List[Vec]:
        if self.source.rank == 0:
            return []
        if self.target.rank == 0:
            return self.source.units()
        found = module_kernel(self.source.ring.ambient, self.images, self.target.all_relations(),
                              self.target.rank, limits)
        return [v for v in found if not self.source.contains(v)]

    def kernel(self, limits: Limits = DEFAULT_LIMITS) -> GradedModule:
        return submodule_presentation(self.source, self.kernel_vectors(limits), limits)

    def image(self, limits: Limits = DEFAULT_LIMITS) -> GradedModule:
        return submodule_presentation(self.target, [v for v in self.images if v], limits)

    def cokernel(self) -> GradedModule:
        return quotient_presentation(self.target, self.images)

    def is_injective(self) -> bool:
        return not self.kernel_vectors()

    def is_surjective(self) -> bool:
        span = FreeSubmodule(self.target.ring.quotient, self.target.rank, self.target.relations + self.images)
        return span.is_whole()

    def compose(self, after: "GradedMap") -> "GradedMap":
        """``after ∘ self``."""
        return GradedMap(self.source, after.target, [after.apply(v) for v in self.images],
                         self.degree + after.degree)


def identity_map(module: GradedModule) -> GradedMap:
    return GradedMap(module, module, module.units())


def multiplication_map(module: GradedModule, poly, degree: int) -> GradedMap:
    """Multiplication by a homogeneous element of weight ``degree``, as a map M → M of that degree."""
    images = [vec_from_polys([poly], j) for j in range(module.rank)]
    return GradedMap(module, module, images, degree)


class Subquotient:
    """Z/B inside a presented module: ``generators`` span Z, ``boundaries`` span B.

    ``module`` is a presentation of Z/B whose generator k is ``generators[k]``.
    """

    def __init__(self, ambient: GradedModule, generators: Sequence[Vec], boundaries: Sequence[Vec],
                 limits: Limits = DEFAULT_LIMITS):
        self.ambient = ambient
        self.generators = [dict(g) for g in generators]
        self.boundaries = [dict(b) for b in boundaries if b]
        self.limits = limits
        degrees = [vector_degree(ambient, g) for g in self.generators]
        if not self.generators:
            self.module = GradedModule.zero(ambient.ring)
        else:
            relations = module_kernel(ambient.ring.ambient, self.generators,
                                      ambient.all_relations() + self.boundaries, ambient.rank, limits)
            self.module = GradedModule(ambient.ring, [0 if d is None else d for d in degrees], relations)

    def express(self, vec: Vec) -> Optional[Vec]:
        """Coordinates of an ambient vector on ``generators`` modulo B, or ``None``."""
        if not self.generators:
            span = FreeSubmodule(self.ambient.ring.quotient, self.ambient.rank,
                                 self.ambient.relations + self.boundaries)
            return {} if span.contains(vec) else None
        coeffs = lift(self.ambient.ring.ambient, vec, self.generators,
                      self.ambient.all_relations() + self.boundaries, self.ambient.rank, limits=self.limits)
        if coeffs is None:
            return None
        return vec_from_polys(coeffs)

    def is_zero(self) -> bool:
        return self.module.is_zero()
