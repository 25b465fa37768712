"""I-filtered base modules and modules over R/I."""

from dataclasses import dataclass
from typing import List, Optional, Sequence

from algebra_core.errors import MalformedFiltrationError
from algebra_core.ideals import FreeSubmodule, QuotientRing
from algebra_core.polynomial import Polynomial, format_polynomial, polynomials_from
from algebra_core.vectors import Vec, vec_mul_poly, vec_to_polys
from graded.base_module import BaseModule
from rees.presentation import power_generators


class ZModule:
    """A module over R/I, stored as an R-module whose relations contain I·e_j.

    Args:
        base: the ring R.
        ideal: generators of I.
        rank: number of generators.
        relations: additional relations in R^rank.
    """

    def __init__(self, base: QuotientRing, ideal: Sequence, rank: int, relations: Sequence[Vec] = ()):
        self.base = base
        self.ideal = polynomials_from(base.ambient, ideal)
        self.rank = rank
        self.extra = [dict(r) for r in relations if r]
        one = base.field.one
        multiples = []
        for g in self.ideal:
            for j in range(rank):
                multiples.append(vec_mul_poly({(j, (0,) * base.nvars): one}, g))
        self.module = BaseModule(base, rank, self.extra + [m for m in multiples if m])

    @classmethod
    def from_base_module(cls, module: BaseModule, ideal: Sequence) -> "ZModule":
        return cls(module.ring, ideal, module.rank, module.relations)

    def is_annihilated(self) -> bool:
        return all(self.module.contains(vec_mul_poly(self.module.unit(j), g))
                   for g in self.ideal for j in range(self.rank))

    def isomorphic_presentation(self, other: "ZModule") -> bool:
        return self.module.same_presentation(other.module)

    def residue_is_the_field(self) -> bool:
        return ZModule(self.base, self.ideal, 1).module.field_dimension() == 1

    def isomorphic_to(self, other: "ZModule") -> bool:
        """Dimension decides when R/I is the coefficient field; otherwise the presentations must agree."""
        if self.residue_is_the_field():
            return self.module.field_dimension() == other.module.field_dimension()
        return self.isomorphic_presentation(other)

    def is_zero(self) -> bool:
        return self.module.is_zero()

    def __repr__(self):
        rels = "; ".join(", ".join(format_polynomial(p) for p in vec_to_polys(r, self.rank, self.base.ambient))
                         for r in self.extra)
        return f"ZModule(rank={self.rank}, relations=[{rels}])"


@dataclass(frozen=True)
class FiltrationCheck:
    ok: bool
    witness: Optional[str] = None


class FilteredModule:
    """E with F^0 ⊇ F^1 ⊇ … ⊇ F^s given by generator lists; F^n = I^{n−s}·F^s past s.

    ``levels[n]`` lists vectors of the cover R^rank of E spanning F^n.
    """

    def __init__(self, base: QuotientRing, ideal: Sequence, module: BaseModule, levels: Sequence[Sequence[Vec]]):
        if not levels:
            raise MalformedFiltrationError("[FILTRATION] at least F^0 must be given")
        self.base = base
        self.ideal: List[Polynomial] = polynomials_from(base.ambient, ideal)
        self.module = module
        self.levels = [[dict(v) for v in level if v] for level in levels]

    @property
    def stabilization(self) -> int:
        return len(self.levels) - 1

    def level(self, n: int) -> List[Vec]:
        if n <= 0:
            return self.levels[0]
        s = self.stabilization
        if n <= s:
            return self.levels[n]
        products = power_generators(self.ideal, n - s)
        out = []
        for g in products:
            for v in self.levels[s]:
                w = vec_mul_poly(v, g)
                if w:
                    out.append(w)
        return out

    def span(self, vectors: Sequence[Vec]) -> FreeSubmodule:
        return FreeSubmodule(self.base, self.module.rank, self.module.relations + list(vectors))

    def ideal_times(self, vectors: Sequence[Vec]) -> List[Vec]:
        return [w for g in self.ideal for v in vectors for w in [vec_mul_poly(v, g)] if w]

    def __repr__(self):
        return f"FilteredModule(rank={self.module.rank}, levels={[len(level) for level in self.levels]})"


def filtration_wellformed(filtered: FilteredModule) -> FiltrationCheck:
    """Decreasing chain, F^0 = E, and I·F^n ⊆ F^{n+1} below the stabilization index."""
    s = filtered.stabilization
    for n in range(s):
        upper = filtered.span(filtered.levels[n])
        for k, v in enumerate(filtered.levels[n + 1]):
            if not upper.contains(v):
                return FiltrationCheck(False, f"generator {k} of F^{n + 1} is not in F^{n}")
    whole = filtered.span(filtered.levels[0])
    for j in range(filtered.module.rank):
        if not whole.contains(filtered.module.unit(j)):
            return FiltrationCheck(False, f"F^0 misses generator {j} of E")
    for n in range(s):
        lower = filtered.span(filtered.levels[n + 1])
        for k, v in enumerate(filtered.ideal_times(filtered.levels[n])):
            if not lower.contains(v):
                return FiltrationCheck(False, f"I·F^{n} is not contained in F^{n + 1} (product {k})")
    return FiltrationCheck(True)


def ideal_adic(base: QuotientRing, ideal: Sequence, module: BaseModule, depth: int = 1) -> FilteredModule:
    """F^n = I^n·E, stored up to ``depth``."""
    ideal = polynomials_from(base.ambient, ideal)
    units = [module.unit(j) for j in range(module.rank)]
    levels = [units]
    for n in range(1, depth + 1):
        levels.append([w for g in power_generators(ideal, n) for v in units for w in [vec_mul_poly(v, g)] if w])
    return FilteredModule(base, ideal, module, levels)


def i_n(module: ZModule, n: int) -> FilteredModule:
    """F^m = N for m ≤ n and F^{n+1} = 0, so the stabilization index is n + 1."""
    if n < 0:
        raise ValueError("[FILTRATION] level must be non-negative")
    units = [module.module.unit(j) for j in range(module.rank)]
    levels = [list(units) for _ in range(n + 1)] + [[]]
    return FilteredModule(module.base, module.ideal, module.module, levels)
