"""Finitely presented modules over the base ring, and maps between them.

A ``BaseModule`` is ``B^rank / N`` for a quotient ring B = S/J; the
relations J·e_j are implicit. Graded pieces, cohomology groups and chart
restrictions are all reported as base modules.
"""

import threading
from itertools import product
from typing import Dict, List, Optional, Sequence

from algebra_core.ideals import FreeSubmodule, QuotientRing
from algebra_core.kernels import module_kernel
from algebra_core.polynomial import Polynomial, format_polynomial
from algebra_core.vectors import Vec, poly_vec, unit_vec, vec_move, vec_to_polys, vec_transfer
from config.config import DEFAULT_LIMITS, Limits


class BaseModule:
    """B^rank modulo ``relations``.

    Args:
        ring: the quotient ring B.
        rank: number of generators.
        relations: vectors of the ambient free module S^rank.
        labels: optional text for each generator, used in reports.
    """

    def __init__(self, ring: QuotientRing, rank: int, relations: Sequence[Vec] = (),
                 labels: Optional[Sequence[str]] = None):
        self.ring = ring
        self.rank = rank
        self.relations = [dict(r) for r in relations if r]
        self.labels = list(labels) if labels is not None else [f"e{j}" for j in range(rank)]
        self._lock = threading.Lock()
        self._submodule: Optional[FreeSubmodule] = None
        self._dimension: Optional[object] = None

    @classmethod
    def free(cls, ring: QuotientRing, rank: int) -> "BaseModule":
        return cls(ring, rank, [])

    @classmethod
    def zero(cls, ring: QuotientRing) -> "BaseModule":
        return cls(ring, 0, [])

    @property
    def submodule(self) -> FreeSubmodule:
        with self._lock:
            if self._submodule is None:
                self._submodule = FreeSubmodule(self.ring, self.rank, self.relations)
            return self._submodule

    def all_relations(self) -> List[Vec]:
        return self.relations + self.submodule.implicit_relations()

    def unit(self, j: int) -> Vec:
        return unit_vec(j, self.ring.nvars, self.ring.field.one)

    def is_zero(self) -> bool:
        return self.rank == 0 or self.submodule.is_whole()

    def contains(self, vec: Vec) -> bool:
        """Whether ``vec`` (in the free cover) is zero in the module."""
        return self.submodule.contains(vec)

    def is_free_presentation(self) -> bool:
        """True when every relation already vanishes in B^rank."""
        implicit = FreeSubmodule(self.ring, self.rank, [])
        return all(implicit.contains(r) for r in self.relations)

    def same_presentation(self, other: "BaseModule") -> bool:
        """Same generators and the same relation module (mutual Gröbner containment)."""
        if self.rank != other.rank:
            return False
        if self.rank == 0:
            return True
        return self.submodule.same_as(other.submodule)

    def direct_sum(self, other: "BaseModule") -> "BaseModule":
        shifted = [vec_move(r, {c: c + self.rank for c in range(other.rank)}) for r in other.relations]
        return BaseModule(self.ring, self.rank + other.rank, self.relations + shifted, self.labels + other.labels)

    # -- invariants -------------------------------------------------------
    def field_dimension(self) -> Optional[int]:
        """Dimension over the coefficient field, or ``None`` when infinite.

        Counts standard terms of the relation basis; a component has finitely
        many exactly when each variable has a pure power among its leading terms.
        """
        with self._lock:
            if self._dimension is not None:
                return None if self._dimension == "inf" else self._dimension
        if self.rank == 0:
            return 0
        basis = self.submodule.groebner()
        nvars = self.ring.nvars
        by_comp: Dict[int, List[tuple]] = {}
        for comp, exps in basis.leads:
            by_comp.setdefault(comp, []).append(exps)
        total = 0
        finite = True
        for comp in range(self.rank):
            leads = by_comp.get(comp, [])
            if any(sum(e) == 0 for e in leads):
                continue
            bounds = []
            for i in range(nvars):
                powers = [e[i] for e in leads if e[i] and sum(e) == e[i]]
                if not powers:
                    finite = False
                    break
                bounds.append(min(powers))
            if not finite:
                break
            for exps in product(*(range(b) for b in bounds)):
                if all(any(a < b for a, b in zip(exps, lead)) for lead in leads):
                    total += 1
        with self._lock:
            self._dimension = total if finite else "inf"
        return total if finite else None

    def _irredundant(self) -> List[int]:
        keep = list(range(self.rank))
        for j in range(self.rank):
            others = [self.unit(k) for k in keep if k != j]
            if FreeSubmodule(self.ring, self.rank, self.relations + others).contains(self.unit(j)):
                keep.remove(j)
        return keep

    def generator_count(self) -> int:
        """Size of an irredundant generating set, found greedily."""
        return len(self._irredundant())

    def is_free_of_rank(self, k: int, limits: Limits = DEFAULT_LIMITS) -> bool:
        """Whether the greedy generating set has k elements and no syzygies beyond J.

        True is a proof that M ≅ B^k; False can also mean the greedy set is not minimal.
        """
        keep = self._irredundant()
        if len(keep) != k:
            return False
        if k == 0:
            return True
        syzygies = module_kernel(self.ring.ambient, [self.unit(j) for j in keep], self.all_relations(), self.rank,
                                 limits)
        trivial = FreeSubmodule(self.ring, k, [])
        return all(trivial.contains(v) for v in syzygies)

    def describe(self) -> str:
        if self.is_zero():
            return "0"
        dim = self.field_dimension()
        if dim is not None:
            return f"dim {dim}"
        rels = [", ".join(format_polynomial(p) for p in vec_to_polys(r, self.rank, self.ring.ambient))
                for r in self.relations]
        body = "; ".join(f"[{r}]" for r in rels)
        return f"{self.ring.field}^{self.rank}" if not rels else f"coker {self.rank} gens / ({body})"

    def __repr__(self):
        return f"BaseModule(rank={self.rank}, relations={len(self.relations)})"


class BaseMap:
    """Map of base modules sending generator k of ``source`` to ``images[k]`` (a target cover vector)."""

    def __init__(self, source: BaseModule, target: BaseModule, images: Sequence[Vec]):
        if len(images) != source.rank:
            raise ValueError("[BASE] one image per source generator is required")
        self.source = source
        self.target = target
        self.images = [dict(v) for v in images]

    def kernel_vectors(self, limits: Limits = DEFAULT_LIMITS) -> List[Vec]:
        if self.source.rank == 0:
            return []
        ring = self.target.ring
        relations = self.target.all_relations()
        if self.target.rank == 0:
            return [self.source.unit(k) for k in range(self.source.rank)]
        return module_kernel(ring.ambient, self.images, relations, self.target.rank, limits)

    def is_injective(self) -> bool:
        return all(self.source.contains(v) for v in self.kernel_vectors())

    def is_surjective(self) -> bool:
        if self.target.rank == 0:
            return True
        span = FreeSubmodule(self.target.ring, self.target.rank, self.target.relations + self.images)
        return span.is_whole()

    def is_isomorphism(self) -> bool:
        return self.is_surjective() and self.is_injective()

    def cokernel(self) -> BaseModule:
        return BaseModule(self.target.ring, self.target.rank, self.target.relations + self.images, self.target.labels)

    def kernel(self) -> BaseModule:
        """The kernel, presented on the kernel vectors that are nonzero in the source."""
        gens = [v for v in self.kernel_vectors() if not self.source.contains(v)]
        if not gens:
            return BaseModule.zero(self.source.ring)
        ring = self.source.ring
        rels = module_kernel(ring.ambient, gens, self.source.all_relations(), self.source.rank)
        return BaseModule(ring, len(gens), rels)


def ideal_presentation(ring: QuotientRing, generators: Sequence[Polynomial], modulo: Sequence[Polynomial] = (),
                       limits: Limits = DEFAULT_LIMITS) -> BaseModule:
    """(g_1..g_s) + K / K as B^s modulo the syzygies of the g_k, with K = ``modulo``.

    Generator k is g_k, in the given order.
    """
    gens = list(generators)
    if not gens:
        return BaseModule.zero(ring)
    relations = [poly_vec(r) for r in ring.relations] + [poly_vec(m) for m in modulo if m]
    kernel = module_kernel(ring.ambient, [poly_vec(g) for g in gens], relations, 1, limits)
    return BaseModule(ring, len(gens), kernel, [format_polynomial(g) for g in gens])


def as_graded(module: BaseModule):
    """``module`` as a graded module concentrated in degree 0 over the same ring with zero weights."""
    from graded.module import GradedModule
    from graded.ring import GradedRing
    ring = GradedRing.from_quotient(module.ring)
    relations = [vec_transfer(r, module.rank, module.ring.ambient, ring.ambient) for r in module.relations]
    return GradedModule(ring, [0] * module.rank, relations)
