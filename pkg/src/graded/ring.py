"""Graded quotient rings and degree windows."""

import threading
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence

from algebra_core.errors import GradingError, UnboundedPieceError
from algebra_core.ideals import QuotientRing
from algebra_core.polynomial import Polynomial, PolynomialRing
from algebra_core.vectors import Vec, poly_vec, vec_pick_vars, vec_spread_vars, vec_support_vars, vec_to_polys
from config.config import parse_window


@dataclass(frozen=True)
class DegreeWindow:
    """Inclusive range of internal degrees ``lo..hi``."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"[WINDOW] empty window {self.lo}..{self.hi}")

    @classmethod
    def from_text(cls, text: str) -> "DegreeWindow":
        lo, hi = parse_window(text)
        return cls(lo, hi)

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.lo, self.hi + 1))

    def __len__(self):
        return self.hi - self.lo + 1

    def __contains__(self, d: int) -> bool:
        return self.lo <= d <= self.hi

    def __str__(self):
        return f"{self.lo}..{self.hi}"


class GradedRing:
    """S/J with integer weights: base variables 0, fiber variables 1, at most one u of weight −1.

    The base subring is k[weight-0 variables] modulo the weight-0 members of
    the reduced basis of J; the ambient block order puts the fiber variables
    first, so those members generate J ∩ k[base].

    Args:
        ambient: weighted polynomial ring.
        relations: homogeneous generators of J.
    """

    def __init__(self, ambient: PolynomialRing, relations: Sequence = ()):
        bad = [w for w in ambient.weights if w not in (-1, 0, 1)]
        if bad:
            raise GradingError(f"[GRADED] weights must lie in {{-1, 0, 1}}, got {sorted(set(bad))}")
        negative = [i for i, w in enumerate(ambient.weights) if w == -1]
        if len(negative) > 1:
            raise GradingError("[GRADED] at most one variable of weight -1 is supported")
        self.ambient = ambient
        self.quotient = QuotientRing(ambient, relations)
        for r in self.quotient.relations:
            r.weight()
        self.u_index: Optional[int] = negative[0] if negative else None
        self.positive_indices = tuple(i for i, w in enumerate(ambient.weights) if w == 1)
        self.base_indices = ambient.base_indices
        self.fiber_indices = ambient.fiber_indices
        self._lock = threading.Lock()
        self._base: Optional[QuotientRing] = None
        self._bounded: Optional[bool] = None

    # -- structure -------------------------------------------------------
    @property
    def field(self):
        return self.ambient.field

    @property
    def names(self):
        return self.ambient.names

    @property
    def nvars(self) -> int:
        return self.ambient.nvars

    @property
    def relations(self):
        return self.quotient.relations

    @property
    def has_u(self) -> bool:
        return self.u_index is not None

    @property
    def base(self) -> QuotientRing:
        with self._lock:
            if self._base is None:
                base_ring = PolynomialRing([self.names[i] for i in self.base_indices], self.field)
                fiber = set(self.fiber_indices)
                rels = []
                for r in self.quotient.reduced_relations():
                    if not (r.support() & fiber):
                        rels.append(base_ring.embed(r))
                self._base = QuotientRing(base_ring, rels)
            return self._base

    @classmethod
    def from_quotient(cls, ring: QuotientRing) -> "GradedRing":
        """The ring ``ring`` with every variable in degree 0."""
        ambient = PolynomialRing(ring.names, ring.field)
        return cls(ambient, [ambient.embed(r) for r in ring.relations])

    def with_relations(self, extra: Sequence) -> "GradedRing":
        extra = [self.ambient.parse(e) if isinstance(e, str) else e for e in extra]
        return GradedRing(self.ambient, list(self.quotient.relations) + list(extra))

    def gen(self, name) -> Polynomial:
        return self.ambient.gen(name)

    def u(self) -> Polynomial:
        if self.u_index is None:
            raise GradingError("[GRADED] ring has no variable of weight -1")
        return self.ambient.gen(self.u_index)

    def positive_gens(self) -> List[Polynomial]:
        return [self.ambient.gen(i) for i in self.positive_indices]

    def reduce(self, poly: Polynomial) -> Polynomial:
        return self.quotient.reduce(poly)

    # -- base conversions ----------------------------------------------
    def to_base(self, vec: Vec) -> Vec:
        if vec_support_vars(vec) & set(self.fiber_indices):
            raise GradingError("[GRADED] vector involves fiber variables")
        return vec_pick_vars(vec, self.base_indices)

    def from_base(self, vec: Vec) -> Vec:
        return vec_spread_vars(vec, self.base_indices, self.nvars)

    def base_poly(self, poly: Polynomial) -> Polynomial:
        return vec_to_polys(self.to_base(poly_vec(poly)), 1, self.base.ambient)[0]

    def center_generators(self) -> List[Polynomial]:
        """Normal forms of y_i·u, as base polynomials: the ideal I of an extended Rees ring."""
        if self.u_index is None:
            return []
        u = self.u()
        return [self.base_poly(self.reduce(y * u)) for y in self.positive_gens()]

    def check_bounded_pieces(self) -> None:
        """Each y_i·u must reduce into the base, so every graded piece is finite over it."""
        with self._lock:
            if self._bounded is not None:
                if not self._bounded:
                    raise UnboundedPieceError("[GRADED] graded pieces are not finitely generated over the base")
                return
        bounded = True
        if self.u_index is not None:
            fiber = set(self.fiber_indices)
            u = self.u()
            for y in self.positive_gens():
                if self.reduce(y * u).support() & fiber:
                    bounded = False
                    break
        with self._lock:
            self._bounded = bounded
        if not bounded:
            raise UnboundedPieceError("[GRADED] y·u does not reduce into the base ring")

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, GradedRing) and self.ambient == other.ambient and self.quotient == other.quotient

    def __hash__(self):
        return hash(self.ambient)

    def __repr__(self):
        return f"GradedRing({self.quotient!r}, weights={self.ambient.weights})"
