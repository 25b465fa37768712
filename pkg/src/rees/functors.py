"""Functors between filtered modules, Z-modules and graded modules over the extended Rees ring."""

from dataclasses import dataclass
from typing import List, Optional, Tuple

from algebra_core.errors import GradingError, MalformedFiltrationError, NotFreeError
from algebra_core.kernels import restricted_kernel
from algebra_core.polynomial import PolynomialRing
from algebra_core.vectors import Vec, poly_vec, vec_mul_poly, vec_transfer
from config.config import DEFAULT_LIMITS, Limits
from graded.base_module import BaseModule
from graded.module import GradedModule, multiplication_map, quotient_presentation, truncate
from graded.pieces import graded_piece
from rees.filtered import FilteredModule, ZModule, filtration_wellformed
from rees.presentation import ExtReesPresentation, fresh_name


@dataclass(frozen=True)
class StabilityCertificate:
    """u: M_i → M_{i−1} is bijective for every i ≤ ``level`` iff ``stable``.

    ``kernel_range`` and ``cokernel_range`` are the degree ranges inspected;
    below them the kernel and cokernel of u vanish by degree reasons.
    """

    stable: bool
    level: int
    kernel_range: Tuple[int, int]
    cokernel_range: Tuple[int, int]
    failure: Optional[str] = None


def u_kernel(module: GradedModule, limits: Limits = DEFAULT_LIMITS) -> GradedModule:
    """(0 :_M u) as a presented graded module."""
    return multiplication_map(module, module.ring.u(), -1).kernel(limits)


def u_cokernel(module: GradedModule) -> GradedModule:
    """M/uM."""
    u = module.ring.u()
    return quotient_presentation(module, [vec_mul_poly(module.unit(j), u) for j in range(module.rank)])


def is_n_stable(module: GradedModule, n: int, limits: Limits = DEFAULT_LIMITS) -> StabilityCertificate:
    """Check that u is an isomorphism M_i → M_{i−1} for all i ≤ n.

    Both (0 :_M u) and M/uM are killed by u, so their pieces vanish below
    their lowest generator; only the finitely many degrees above it are inspected.
    """
    if module.rank == 0:
        return StabilityCertificate(True, n, (n + 1, n), (n, n - 1))
    kernel = u_kernel(module, limits)
    k_lo = kernel.min_twist() if kernel.rank else n + 1
    for i in range(k_lo, n + 1):
        if not graded_piece(kernel, i, limits).module.is_zero():
            return StabilityCertificate(False, n, (k_lo, n), (module.min_twist(), n - 1),
                                        f"u is not injective on degree {i}")
    cokernel = u_cokernel(module)
    c_lo = module.min_twist()
    for i in range(c_lo, n):
        if not graded_piece(cokernel, i, limits).module.is_zero():
            return StabilityCertificate(False, n, (k_lo, n), (c_lo, n - 1),
                                        f"u is not surjective onto degree {i}")
    return StabilityCertificate(True, n, (k_lo, n), (c_lo, n - 1))


def rees_module(filtered: FilteredModule, presentation: ExtReesPresentation,
                limits: Limits = DEFAULT_LIMITS) -> GradedModule:
    """⊕_n F^n·t^n over the extended Rees ring, with F^n = E for n ≤ 0.

    Generators are the level generators v ∈ F^n placed in degree n; the
    relations are computed inside R[t, t⁻¹]⊗E, modelled with y_i = g_i·t and u = s = t⁻¹.
    """
    check = filtration_wellformed(filtered)
    if not check.ok:
        raise MalformedFiltrationError(f"[FILTRATION] {check.witness}")
    ring = presentation.ring
    base = filtered.base
    rank = filtered.module.rank
    t_name = fresh_name("t", ring.names)
    s_name = fresh_name("s", list(ring.names) + [t_name])
    big = PolynomialRing([t_name, s_name] + list(ring.names), ring.field, [1, -1] + list(ring.ambient.weights))
    t, s = big.gen(t_name), big.gen(s_name)
    polys = [big.gen(y) - big.embed(g) * t for y, g in zip(presentation.y_names, presentation.generators)]
    polys += [big.gen(presentation.u_name) - s, t * s - 1]
    polys += [big.embed(r) for r in base.relations]
    relations = [poly_vec(p, j) for p in polys for j in range(rank)]
    relations += [vec_transfer(r, rank, base.ambient, big) for r in filtered.module.relations]
    degrees: List[int] = []
    images: List[Vec] = []
    for n in range(filtered.stabilization + 1):
        for v in filtered.level(n):
            degrees.append(n)
            images.append(vec_mul_poly(vec_transfer(v, rank, base.ambient, big), t ** n))
    allowed = [big.index[name] for name in ring.names]
    kernel = restricted_kernel(big, images, relations, rank, allowed, limits)
    module = GradedModule(ring, degrees, [vec_transfer(k, len(images), big, ring.ambient) for k in kernel])
    if not is_n_stable(module, 0, limits).stable:
        raise GradingError("[REES] the Rees module is not 0-stable")
    return module


def rho(module: BaseModule, presentation: ExtReesPresentation) -> GradedModule:
    """E ⊗ Ã for a free E: the free Ã-module of the same rank in degree 0."""
    if not module.is_free_presentation():
        raise NotFreeError("[RHO] the module is not presented as free")
    return GradedModule.free(presentation.ring, [0] * module.rank)


def gr_F(module: GradedModule, n: int, limits: Limits = DEFAULT_LIMITS) -> ZModule:
    """coker(u: M_{n+1} → M_n) as a module over R/I."""
    if n < 0:
        raise ValueError("[GR] level must be non-negative")
    ring = module.ring
    piece = graded_piece(u_cokernel(module), n, limits).module
    return ZModule(piece.ring, ring.center_generators(), piece.rank, piece.relations)


def tau(module: GradedModule, presentation: ExtReesPresentation, limits: Limits = DEFAULT_LIMITS) -> GradedModule:
    """The non-negative part of M as a module over the Rees ring (u forgotten)."""
    ring = module.ring
    rees = presentation.rees
    if rees is None:
        raise GradingError("[TAU] the extended Rees presentation carries no Rees ring")
    truncated = truncate(module, 0, limits)
    u_index = ring.u_index
    gens: List[Vec] = []
    twists: List[int] = []
    one = ring.field.one
    for j, t in enumerate(truncated.twists):
        for k in range(t + 1):
            exps = [0] * ring.nvars
            exps[u_index] = k
            gens.append({(j, tuple(exps)): one})
            twists.append(t - k)
    allowed = [i for i in range(ring.nvars) if i != u_index]
    kernel = restricted_kernel(ring.ambient, gens, truncated.all_relations(), truncated.rank, allowed, limits)
    relations = [vec_transfer(k, len(gens), ring.ambient, rees.ring.ambient) for k in kernel]
    return GradedModule(rees.ring, twists, relations)
