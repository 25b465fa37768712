"""Cohomology of composable maps and graded Hom modules."""

from typing import List, Sequence

from algebra_core.ideals import FreeSubmodule
from algebra_core.kernels import module_kernel
from algebra_core.vectors import Vec, add_into, vec_move
from config.config import DEFAULT_LIMITS, Limits
from graded.module import GradedModule, Subquotient, vector_degree


def complex_cohomology(prev_images: Sequence[Vec], middle: GradedModule, next_images: Sequence[Vec],
                       next_module: GradedModule, limits: Limits = DEFAULT_LIMITS) -> Subquotient:
    """ker(middle → next) / im(prev → middle).

    ``prev_images`` are cover vectors of ``middle``; ``next_images[j]`` is the
    image of generator j of ``middle`` in the cover of ``next_module``.
    """
    if middle.rank == 0:
        return Subquotient(middle, [], [], limits)
    if next_module.rank == 0:
        cycles = middle.units()
    else:
        cycles = module_kernel(middle.ring.ambient, next_images, next_module.all_relations(),
                               next_module.rank, limits)
    boundaries = [dict(v) for v in prev_images if v]
    zero = FreeSubmodule(middle.ring.quotient, middle.rank, middle.relations + boundaries)
    kept = [z for z in cycles if not zero.contains(z)]
    return Subquotient(middle, kept, boundaries, limits)


class HomAmbient:
    """Hom(P, N) for a twisted free P, presented as blocks N(−t_g).

    Generator g·N.rank + h is the map e_g ↦ e_h, in degree t_N[h] − t_P[g].
    """

    def __init__(self, source_twists: Sequence[int], target: GradedModule):
        self.source_twists = tuple(source_twists)
        self.target = target
        n = target.rank
        twists = [th - tg for tg in self.source_twists for th in target.twists]
        relations: List[Vec] = []
        for g in range(len(self.source_twists)):
            shift = {c: g * n + c for c in range(n)}
            relations.extend(vec_move(r, shift) for r in target.relations)
        self.module = GradedModule(target.ring, twists, relations)

    def index(self, g: int, h: int) -> int:
        return g * self.target.rank + h

    def precompose(self, images: Sequence[Vec], other: "HomAmbient") -> List[Vec]:
        """Images of the generators under Hom(P, N) → Hom(P', N), φ ↦ φ∘d.

        ``images[g']`` is d(e_{g'}) as a cover vector of P; ``other`` is the Hom ambient of P'.
        """
        n = self.target.rank
        out = [dict() for _ in range(self.module.rank)]
        for g_prime, image in enumerate(images):
            for (g, exps), coeff in image.items():
                for h in range(n):
                    add_into(out[self.index(g, h)], {(other.index(g_prime, h), exps): coeff})
        return out

    def postcompose(self, target_images: Sequence[Vec], other: "HomAmbient") -> List[Vec]:
        """Images under Hom(P, N) → Hom(P, N'), φ ↦ f∘φ, where ``target_images[h]`` is f(e_h) in N'."""
        out = []
        for g in range(len(self.source_twists)):
            for h in range(self.target.rank):
                out.append(vec_move(target_images[h], {c: other.index(g, c) for c in range(other.target.rank)}))
        return out


def hom_module(source: GradedModule, target: GradedModule, limits: Limits = DEFAULT_LIMITS) -> Subquotient:
    """Hom(M, N) = ker(Hom(F₀, N) → Hom(F₁, N)) for the presentation F₁ → F₀ of M."""
    ambient = HomAmbient(source.twists, target)
    relation_twists = [vector_degree(source, r) for r in source.relations]
    relations_ambient = HomAmbient(relation_twists, target)
    images = ambient.precompose(source.relations, relations_ambient)
    return complex_cohomology([], ambient.module, images, relations_ambient.module, limits)
