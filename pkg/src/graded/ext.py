"""Graded Ext from a free resolution of the source."""

import concurrent.futures
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from config.config import DEFAULT_LIMITS, MAX_WORKERS, Limits
from graded.base_module import BaseModule
from graded.homology import HomAmbient, complex_cohomology
from graded.module import GradedModule, Subquotient
from graded.pieces import graded_piece
from graded.resolution import FreeResolution, free_resolution
from graded.ring import DegreeWindow


@dataclass
class ExtTable:
    """Ext^index(M, N)_d for every d in ``window``; ``dims`` uses −1 for infinite dimension."""

    index: int
    window: DegreeWindow
    pieces: Dict[int, BaseModule]
    dims: np.ndarray

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.pieces.values())

    def nonzero_degrees(self) -> List[int]:
        return [d for d in self.window if not self.pieces[d].is_zero()]

    def rows(self) -> List[dict]:
        return [{"degree": d, "value": self.pieces[d].describe()} for d in self.window]


def hom_ambients(resolution: FreeResolution, target: GradedModule, upto: int) -> List[HomAmbient]:
    return [HomAmbient(resolution.term_twists(i), target) for i in range(upto + 1)]


def ext_from_resolution(resolution: FreeResolution, target: GradedModule, i: int,
                        limits: Limits = DEFAULT_LIMITS) -> Subquotient:
    """H^i of Hom(F_•, N)."""
    ambients = hom_ambients(resolution, target, i + 1)
    middle = ambients[i]
    next_images = middle.precompose(resolution.differential(i), ambients[i + 1])
    prev_images = ambients[i - 1].precompose(resolution.differential(i - 1), middle) if i > 0 else []
    return complex_cohomology(prev_images, middle.module, next_images, ambients[i + 1].module, limits)


def ext_module(source: GradedModule, target: GradedModule, i: int, nonnegative: bool = False,
               limits: Limits = DEFAULT_LIMITS) -> Subquotient:
    """Ext^i(M, N) as a graded subquotient; the resolution is extended past i automatically."""
    if i < 0:
        raise ValueError("[EXT] cohomological index must be non-negative")
    resolution = free_resolution(source, i + 1, nonnegative, limits)
    return ext_from_resolution(resolution, target, i, limits)


def piece_table(module: GradedModule, window: DegreeWindow, index: int = 0,
                limits: Limits = DEFAULT_LIMITS) -> ExtTable:
    """Pieces of a graded module on ``window``, computed concurrently."""
    degrees = list(window)
    with concurrent.futures.ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
        results = list(executor.map(lambda d: graded_piece(module, d, limits).module, degrees))
    pieces = dict(zip(degrees, results))
    dims = []
    for d in degrees:
        dim = pieces[d].field_dimension()
        dims.append(-1 if dim is None else dim)
    return ExtTable(index, window, pieces, np.array(dims, dtype=np.int64))


def graded_ext(source: GradedModule, target: GradedModule, i: int, window: DegreeWindow,
               nonnegative: bool = False, limits: Limits = DEFAULT_LIMITS) -> ExtTable:
    """Ext^i(M, N)_d for d in ``window`` as base modules."""
    return piece_table(ext_module(source, target, i, nonnegative, limits).module, window, i, limits)
