"""Graded free resolutions and chain maps between them."""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

from algebra_core.errors import GradingError
from algebra_core.ideals import FreeSubmodule
from algebra_core.kernels import lift, module_kernel
from algebra_core.polynomial import exponent_tuples
from algebra_core.vectors import Vec, apply_matrix, vec_from_polys, vec_shift
from config.config import DEFAULT_LIMITS, Limits, log_message
from graded.module import GradedModule, vector_degree


@dataclass
class FreeResolution:
    """F_L → … → F₀ → M → 0.

    ``differentials[i]`` lists d(e_k) for the basis of F_{i+1} as cover
    vectors of F_i; ``augmentation`` lists the images of the basis of F₀ in M.
    """

    module: GradedModule
    twists: List[Tuple[int, ...]]
    augmentation: List[Vec]
    differentials: List[List[Vec]] = field(default_factory=list)
    nonnegative: bool = False

    @property
    def length(self) -> int:
        return len(self.twists) - 1

    def rank(self, i: int) -> int:
        return len(self.twists[i]) if 0 <= i < len(self.twists) else 0

    def term_twists(self, i: int) -> Tuple[int, ...]:
        return self.twists[i] if 0 <= i < len(self.twists) else ()

    def free(self, i: int) -> GradedModule:
        return GradedModule.free(self.module.ring, self.term_twists(i))

    def differential(self, i: int) -> List[Vec]:
        """Images of the basis of F_{i+1} in F_i (empty past the end)."""
        return self.differentials[i] if 0 <= i < len(self.differentials) else [{} for _ in range(self.rank(i + 1))]

    def is_complex(self) -> bool:
        """d∘d = 0 and the augmentation kills the image of d₁."""
        for r in self.differential(0):
            if not self.module.contains(apply_matrix(self.augmentation, r)):
                return False
        for i in range(1, len(self.differentials)):
            target = self.free(i - 1)
            for r in self.differentials[i]:
                if not target.contains(apply_matrix(self.differentials[i - 1], r)):
                    return False
        return True


def _nonnegative_cover(space: GradedModule, vectors: List[Vec]) -> List[Vec]:
    """Replace every negative-degree vector v by the y^α·v of degree 0, checking that they still span."""
    ring = space.ring
    positive = ring.positive_indices
    one = ring.field.one
    out = []
    changed = False
    for v in vectors:
        deg = vector_degree(space, v)
        if deg is None or deg >= 0:
            out.append(v)
            continue
        changed = True
        for alpha in exponent_tuples(len(positive), -deg):
            exps = [0] * ring.nvars
            for i, a in zip(positive, alpha):
                exps[i] = a
            out.append(vec_shift(v, tuple(exps), one))
    if changed:
        span = FreeSubmodule(ring.quotient, space.rank, space.relations + out)
        if not all(span.contains(v) for v in vectors):
            raise GradingError("[RESOLUTION] the module is not generated in non-negative degrees")
    return out


def _prune(space: GradedModule, vectors: List[Vec]) -> List[Vec]:
    """Drop zero vectors and vectors lying in the span of the others."""
    kept = [v for v in vectors if not space.contains(v)]
    k = len(kept) - 1
    while k >= 0 and len(kept) > 1:
        others = kept[:k] + kept[k + 1:]
        span = FreeSubmodule(space.ring.quotient, space.rank, space.relations + others)
        if span.contains(kept[k]):
            kept.pop(k)
        k -= 1
    return kept


def choose_generators(space: GradedModule, vectors: List[Vec], nonnegative: bool = False) -> List[Vec]:
    """An irredundant subset of ``vectors``, moved into degrees ≥ 0 when asked and the ring has u."""
    chosen = _prune(space, vectors)
    if nonnegative and space.ring.has_u:
        chosen = _prune(space, _nonnegative_cover(space, chosen))
    return chosen


def free_resolution(module: GradedModule, length: int, nonnegative: bool = False,
                    limits: Limits = DEFAULT_LIMITS,
                    log_function: Optional[Callable[[str], None]] = None) -> FreeResolution:
    """A graded free resolution with ``length`` differentials (fewer if it ends early).

    With ``nonnegative`` every generator is placed in degree ≥ 0, which is
    possible exactly when each syzygy module is generated there; this holds
    for 0-stable input.
    """
    if length < 0:
        raise ValueError("[RESOLUTION] length must be non-negative")
    for (_, done, flag), resolution in module.finished("resolution"):
        if flag == nonnegative and done >= length:
            return resolution
    return module.memoized(("resolution", length, nonnegative),
                           lambda: _resolve(module, length, nonnegative, limits, log_function or log_message))


def _resolve(module: GradedModule, length: int, nonnegative: bool, limits: Limits, log) -> FreeResolution:
    ring = module.ring
    augmentation = choose_generators(module, module.units(), nonnegative)
    twists = [tuple(vector_degree(module, v) for v in augmentation)]
    resolution = FreeResolution(module, twists, augmentation, [], nonnegative)
    if not augmentation:
        return resolution
    kernel = module_kernel(ring.ambient, augmentation, module.all_relations(), module.rank, limits)
    for i in range(length):
        space = resolution.free(i)
        chosen = choose_generators(space, kernel, nonnegative)
        if not chosen:
            break
        resolution.differentials.append(chosen)
        resolution.twists.append(tuple(vector_degree(space, v) for v in chosen))
        log(f"[RESOLUTION] F_{i + 1} has rank {len(chosen)}, twists {list(resolution.twists[-1])}")
        if i + 1 < length:
            kernel = module_kernel(ring.ambient, chosen, space.all_relations(), space.rank, limits)
    return resolution


def chain_lift(source: FreeResolution, target: FreeResolution, level0: Sequence[Vec],
               length: Optional[int] = None, limits: Limits = DEFAULT_LIMITS) -> List[List[Vec]]:
    """Lift a map F₀ → F'₀ compatible with the augmentations to a chain map.

    Returns, for each level i, the images of the basis of F_i in the cover of F'_i.
    """
    length = source.length if length is None else min(length, source.length)
    ring = source.module.ring
    maps = [[dict(v) for v in level0]]
    for i in range(length):
        space = target.free(i)
        images = target.differential(i)
        level = []
        for d_b in source.differential(i):
            vec = apply_matrix(maps[i], d_b)
            if space.contains(vec):
                level.append({})
                continue
            coeffs = lift(ring.ambient, vec, images, space.all_relations(), space.rank, limits=limits) if images else None
            if coeffs is None:
                raise GradingError(f"[RESOLUTION] chain map does not lift at level {i + 1}")
            level.append(vec_from_polys(coeffs))
        maps.append(level)
    return maps
