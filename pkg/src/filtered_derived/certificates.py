"""Certificates built from the extended Rees model of filtered complexes.

* ``obar_complex``: the cone of the unit Ã → Rf̃_*𝒪_Y and its torsion level N.
* ``rho_n_certificate``: ρ(E) is orthogonal to the level-n torsion part iff n ≥ N.
* ``semiorth_check``: required Ext vanishing between ordered families on a window,
  with adjunction cross-checks on objects of the form i_n(N).
* ``adjunction_check``: dim Ext⁰(X, i_n N)_0 against dim Hom(gr^n X, N).
"""

import concurrent.futures
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from algebra_core.errors import InconclusiveError
from algebra_core.ideals import QuotientRing
from algebra_core.vectors import vec_transfer
from config.config import DEFAULT_LIMITS, MAX_WORKERS, Limits, log_message
from filtered_derived.complexes import (ChainMap, ComplexOfGradedModules, TorsionLevel, complex_cohomology_modules,
                                        cone, torsion_level)
from filtered_derived.hyperext import hyper_ext
from graded.base_module import BaseModule, as_graded
from graded.ext import graded_ext
from graded.homology import hom_module
from graded.module import GradedMap, GradedModule
from graded.pieces import graded_piece
from graded.ring import DegreeWindow
from proj_geometry.pushforward import Pushforward, complex_unit, structure_pushforward
from rees.filtered import ZModule, i_n
from rees.functors import gr_F, rees_module, rho
from rees.presentation import ExtReesPresentation

Family = Tuple[str, List[ComplexOfGradedModules]]


@dataclass
class ObarResult:
    """𝒪̄_X = cone(Ã → Rf̃_*𝒪_Y) with its cohomology and torsion level."""

    unit: GradedMap
    pushforward: Pushforward
    complex: ComplexOfGradedModules
    cohomology: Dict[int, GradedModule]
    level: TorsionLevel

    @property
    def torsion(self) -> bool:
        return self.level.torsion

    @property
    def exact(self) -> bool:
        return all(m.is_zero() for m in self.cohomology.values())


def obar_complex(presentation: ExtReesPresentation, window: DegreeWindow, depth: int,
                 limits: Limits = DEFAULT_LIMITS,
                 log_function: Optional[Callable[[str], None]] = None) -> ObarResult:
    log = log_function or log_message
    push = structure_pushforward(presentation, window, depth, limits, log)
    unit = complex_unit(push, limits)
    ring = presentation.ring
    source = ComplexOfGradedModules.single(GradedModule.free(ring, [0]), 0, label="A")
    obar = cone(ChainMap(source, push.complex, {0: unit.images}))
    obar.label = "obar"
    cohomology = complex_cohomology_modules(obar, limits)
    level = torsion_level(obar, limits)
    log(f"[OBAR] torsion level {level.level}")
    return ObarResult(unit, push, obar, cohomology, level)


@dataclass
class RhoCertificate:
    level: int
    bound: int
    passed: bool
    evidence: List[dict] = field(default_factory=list)


def rho_n_certificate(ranks: Dict[int, int], n: int, obar: ObarResult) -> RhoCertificate:
    """ρ(E) for a bounded free complex with ``ranks[k]`` = rank of E^k.

    gr^m(E ⊗ 𝒪̄) is a sum of shifted copies of gr^m(𝒪̄), so every term is
    certified by the torsion level of 𝒪̄ itself. The evidence lists that
    inherited level per nonzero term; no term is measured on its own.
    """
    if n < 0:
        raise ValueError("[RHO] level must be non-negative")
    bound = obar.level.level
    if bound is None:
        raise InconclusiveError("[RHO] the unit cone is not torsion")
    evidence = [{"degree": k, "rank": r, "inherited_level": bound if r else 0} for k, r in sorted(ranks.items())]
    return RhoCertificate(n, bound, n >= bound, evidence)


def rho_fully_faithful(presentation: ExtReesPresentation, first: BaseModule, second: BaseModule,
                       k_range: Tuple[int, int], window: DegreeWindow, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Ext⁰(ρE, ρF)_0 ≅ Hom_R(E, F) and Ext^k(ρE, ρF) = 0 for k > 0 on the window."""
    source = ComplexOfGradedModules.single(rho(first, presentation))
    target = ComplexOfGradedModules.single(rho(second, presentation))
    tables = hyper_ext(source, target, k_range, window, limits)
    for k, table in tables.items():
        if k > 0 and not table.is_zero():
            return False
        if k == 0 and 0 in window and not table.pieces[0].is_free_of_rank(first.rank * second.rank, limits):
            return False
    return True


@dataclass(frozen=True)
class SemiorthCell:
    source: str
    target: str
    k: int
    degree: int
    value: str
    required_zero: bool
    ok: bool
    check: str = "ext"

    def as_dict(self) -> dict:
        return {"source": self.source, "target": self.target, "k": self.k, "degree": self.degree,
                "value": self.value, "required_zero": self.required_zero, "ok": self.ok, "check": self.check}


@dataclass(frozen=True)
class AdjunctionTarget:
    """Marks the object labelled ``label`` as i_n(N)."""

    label: str
    target: ZModule
    n: int


@dataclass
class SemiorthCertificate:
    """Hom from later families into earlier ones must vanish on the window."""

    families: List[str]
    pattern: str
    k_range: Tuple[int, int]
    window: DegreeWindow
    cells: List[SemiorthCell]

    @property
    def verdict(self) -> bool:
        return all(c.ok for c in self.cells)

    def failures(self) -> List[SemiorthCell]:
        return [c for c in self.cells if not c.ok]


def _labelled(families: Sequence[Family]) -> List[Tuple[int, str, ComplexOfGradedModules]]:
    out = []
    for a, (name, objects) in enumerate(families):
        for j, obj in enumerate(objects):
            out.append((a, obj.label or f"{name}[{j}]", obj))
    return out


def semiorth_check(families: Sequence[Family], pattern: str, k_range: Tuple[int, int], window: DegreeWindow,
                   limits: Limits = DEFAULT_LIMITS,
                   log_function: Optional[Callable[[str], None]] = None,
                   adjunctions: Sequence[AdjunctionTarget] = (),
                   presentation: Optional[ExtReesPresentation] = None) -> SemiorthCertificate:
    """Ext^k(X, Y)_d = 0 whenever X comes from a later family than Y.

    Each object is also checked to have Ext⁰(X, X)_0 ≠ 0, which rules out
    a vacuous pass on zero objects. When Y is marked as i_n(N) and X is a
    module in degree 0 from the same or a later family, dim Ext⁰(X, Y)_0 is
    compared with dim Hom(gr^n X, N) in an extra adjunction cell.
    """
    log = log_function or log_message
    objects = _labelled(families)
    pairs = [(x, y) for x in objects for y in objects if x[0] > y[0]]
    images = {a.label: a for a in adjunctions}
    if images and presentation is None:
        raise ValueError("[SEMIORTH] adjunction cells need the extended Rees presentation")
    adjoint_pairs = [(x, y) for x in objects for y in objects
                     if y[1] in images and x[0] >= y[0] and x[2].degrees() == [0]]

    def vanishing(pair) -> List[SemiorthCell]:
        (_, x_label, x), (_, y_label, y) = pair
        tables = hyper_ext(x, y, k_range, window, limits, log)
        cells = []
        for k, table in sorted(tables.items()):
            for d in window:
                piece = table.pieces[d]
                cells.append(SemiorthCell(x_label, y_label, k, d, piece.describe(), True, piece.is_zero()))
        return cells

    def diagonal(obj) -> SemiorthCell:
        _, label, x = obj
        piece = hyper_ext(x, x, (0, 0), DegreeWindow(0, 0), limits, log)[0].pieces[0]
        return SemiorthCell(label, label, 0, 0, piece.describe(), False, not piece.is_zero())

    def adjoint(pair) -> SemiorthCell:
        (_, x_label, x), (_, y_label, _) = pair
        image = images[y_label]
        check = adjunction_check(x.term(0), image.target, image.n, presentation, limits)
        value = f"ext {check.ext_dimension}, hom {check.hom_dimension}"
        return SemiorthCell(x_label, y_label, 0, 0, value, False, check.ok, "adjunction")

    with concurrent.futures.ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
        blocks = list(executor.map(vanishing, pairs))
        diagonals = list(executor.map(diagonal, objects))
        adjoints = list(executor.map(adjoint, adjoint_pairs))
    cells = [c for block in blocks for c in block] + diagonals + adjoints
    certificate = SemiorthCertificate([name for name, _ in families], pattern, k_range, window, cells)
    log(f"[SEMIORTH] {pattern}: {len(cells)} cells ({len(adjoints)} adjunction), "
        f"{len(certificate.failures())} failures")
    return certificate


@dataclass(frozen=True)
class AdjunctionCheck:
    n: int
    ext_dimension: Optional[int]
    hom_dimension: Optional[int]

    @property
    def ok(self) -> bool:
        return self.ext_dimension is not None and self.ext_dimension == self.hom_dimension


def _over_quotient(module: BaseModule, ring: QuotientRing) -> BaseModule:
    relations = [vec_transfer(r, module.rank, module.ring.ambient, ring.ambient) for r in module.relations]
    return BaseModule(ring, module.rank, relations, module.labels)


def adjunction_check(module: GradedModule, target: ZModule, n: int, presentation: ExtReesPresentation,
                     limits: Limits = DEFAULT_LIMITS) -> AdjunctionCheck:
    """Compare Hom(X, i_n N) in degree 0 with Hom_{R/I}(gr^n X, N) for a 0-stable X."""
    base = presentation.base
    quotient = QuotientRing(base.ambient, list(base.relations) + list(presentation.generators))
    target_module = rees_module(i_n(target, n), presentation, limits)
    ext = graded_ext(module, target_module, 0, DegreeWindow(0, 0), limits=limits)
    ext_dimension = ext.pieces[0].field_dimension()
    graded_source = as_graded(_over_quotient(gr_F(module, n, limits).module, quotient))
    graded_target = as_graded(_over_quotient(target.module, quotient))
    hom = hom_module(graded_source, graded_target, limits).module
    hom_dimension = graded_piece(hom, 0, limits).module.field_dimension()
    return AdjunctionCheck(n, ext_dimension, hom_dimension)
