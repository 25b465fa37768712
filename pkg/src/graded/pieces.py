"""Graded pieces as base modules, Hilbert data and torsion detection."""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from algebra_core.errors import InconclusiveError
from algebra_core.ideals import Ideal, saturate
from algebra_core.kernels import AugmentedSystem
from algebra_core.polynomial import exponent_tuples, format_monomial
from algebra_core.vectors import Vec, vec_from_polys
from config.config import DEFAULT_LIMITS, Limits
from graded.base_module import BaseMap, BaseModule
from graded.module import GradedMap, GradedModule
from graded.ring import DegreeWindow, GradedRing

# Degrees scanned past the top generator before a torsion module is declared stuck.
SCAN_HORIZON = 256


@dataclass
class PieceBasis:
    """M_d over the base: generator k of ``module`` is the cover vector ``vectors[k]``."""

    degree: int
    vectors: List[Vec]
    module: BaseModule
    system: Optional[AugmentedSystem]
    ring: GradedRing


def _piece_monomials(module: GradedModule, d: int) -> List[Tuple[int, tuple]]:
    ring = module.ring
    positive = ring.positive_indices
    out = []
    for j, t in enumerate(module.twists):
        w = d - t
        if w >= 0:
            for alpha in exponent_tuples(len(positive), w):
                exps = [0] * ring.nvars
                for i, a in zip(positive, alpha):
                    exps[i] = a
                out.append((j, tuple(exps)))
        elif ring.u_index is not None:
            exps = [0] * ring.nvars
            exps[ring.u_index] = -w
            out.append((j, tuple(exps)))
    return out


def graded_piece(module: GradedModule, d: int, limits: Limits = DEFAULT_LIMITS) -> PieceBasis:
    """M_d as a finitely presented module over the base ring.

    Generators are y^α·e_j of degree d (or u^k·e_j below the twist); the
    relations are their syzygies over the base, read off a basis that
    eliminates the fiber variables.
    """
    return module.memoized(("piece", d), lambda: _compute_piece(module, d, limits))


def _compute_piece(module: GradedModule, d: int, limits: Limits) -> PieceBasis:
    ring = module.ring
    ring.check_bounded_pieces()
    base = ring.base
    one = ring.field.one
    vectors = [{(j, exps): one} for j, exps in _piece_monomials(module, d)]
    if not vectors:
        return PieceBasis(d, [], BaseModule.zero(base), None, ring)
    system = AugmentedSystem(ring.ambient, vectors, module.all_relations(), module.rank,
                             allowed=ring.base_indices, limits=limits)
    relations = [ring.to_base(v) for v in system.kernel()]
    labels = [_label(module, j, exps) for j, exps in _piece_monomials(module, d)]
    return PieceBasis(d, vectors, BaseModule(base, len(vectors), relations, labels), system, ring)


def _label(module: GradedModule, j: int, exps: tuple) -> str:
    mono = format_monomial(module.ring.names, exps)
    return f"{mono}*e{j}" if mono else f"e{j}"


def express(piece: PieceBasis, vec: Vec) -> Optional[Vec]:
    """Coordinates of a degree-d cover vector on the piece generators, as a base vector."""
    if not vec:
        return {}
    if piece.system is None:
        return None
    coeffs = piece.system.lift(vec)
    if coeffs is None:
        return None
    return piece.ring.to_base(vec_from_polys(coeffs))


def piece_map(fmap: GradedMap, d: int, limits: Limits = DEFAULT_LIMITS) -> BaseMap:
    """The base-module map M_d → N_{d+deg} induced by a graded map."""
    source = graded_piece(fmap.source, d, limits)
    target = graded_piece(fmap.target, d + fmap.degree, limits)
    images = []
    for v in source.vectors:
        image = express(target, fmap.apply(v))
        if image is None:
            raise InconclusiveError(f"[GRADED] image in degree {d + fmap.degree} is not spanned by the piece")
        images.append(image)
    return BaseMap(source.module, target.module, images)


def hilbert_data(module: GradedModule, window: DegreeWindow, limits: Limits = DEFAULT_LIMITS) -> np.ndarray:
    """Per degree of ``window``: field dimension when the base is finite over the field, else generator count."""
    base = module.ring.base
    finite = BaseModule(base, 1).field_dimension() is not None
    values = []
    for d in window:
        piece = graded_piece(module, d, limits).module
        if finite:
            values.append(piece.field_dimension())
        else:
            values.append(piece.generator_count())
    return np.array(values, dtype=np.int64)


@dataclass(frozen=True)
class TorsionCertificate:
    """``torsion`` with the first degree ``degree`` from which every piece vanishes."""

    torsion: bool
    degree: Optional[int]
    run: int


def is_torsion(module: GradedModule, limits: Limits = DEFAULT_LIMITS) -> TorsionCertificate:
    """Whether M_d = 0 for d ≫ 0, with the certified onset degree.

    Torsion is decided exactly by saturating the relations at the ideal of
    weight-one variables. The onset is then found by scanning pieces upward
    until ``run`` consecutive zero pieces are seen past the top generator.
    """
    return module.memoized(("torsion",), lambda: _torsion(module, limits))


def _torsion(module: GradedModule, limits: Limits) -> TorsionCertificate:
    if module.rank == 0:
        return TorsionCertificate(True, 0, 0)
    t_min, t_max = module.min_twist(), module.max_twist()
    run = max(t_max - t_min, 2)
    if module.is_zero():
        return TorsionCertificate(True, t_min, run)
    ring = module.ring
    irrelevant = Ideal(ring.quotient, ring.positive_gens())
    if not saturate(module.submodule, irrelevant, limits).is_whole():
        return TorsionCertificate(False, None, run)
    last_nonzero = None
    zeros = 0
    d = t_min
    while d <= t_max + SCAN_HORIZON:
        if graded_piece(module, d, limits).module.is_zero():
            zeros += 1
        else:
            last_nonzero = d
            zeros = 0
        if d > t_max and zeros >= run:
            onset = t_min if last_nonzero is None else last_nonzero + 1
            return TorsionCertificate(True, onset, run)
        d += 1
    raise InconclusiveError(f"[TORSION] pieces still nonzero {SCAN_HORIZON} degrees past the top generator")
