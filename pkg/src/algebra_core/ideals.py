"""Quotient rings, ideals and submodules of free modules over them."""

import threading
from itertools import combinations, combinations_with_replacement
from typing import Dict, List, Optional, Sequence

from algebra_core.errors import InconclusiveError, OrderMismatchError
from algebra_core.groebner import GroebnerBasis, groebner_basis
from algebra_core.kernels import module_quotient
from algebra_core.orders import ModuleOrder, block_order
from algebra_core.polynomial import Polynomial, PolynomialRing, format_polynomial, polynomials_from
from algebra_core.vectors import Vec, poly_vec, unit_vec, vec_move, vec_to_polys
from config.config import DEFAULT_LIMITS, Limits


class QuotientRing:
    """S/J for an ambient polynomial ring S and relations J.

    Args:
        ambient: the polynomial ring S.
        relations: generators of J (strings are parsed in S).
    """

    def __init__(self, ambient: PolynomialRing, relations: Sequence = ()):
        self.ambient = ambient
        self.relations = tuple(r for r in polynomials_from(ambient, relations) if r)
        self._lock = threading.Lock()
        self._basis: Optional[GroebnerBasis] = None

    @property
    def field(self):
        return self.ambient.field

    @property
    def names(self):
        return self.ambient.names

    @property
    def nvars(self):
        return self.ambient.nvars

    def parse(self, text: str) -> Polynomial:
        return self.ambient.parse(text)

    def gen(self, name) -> Polynomial:
        return self.ambient.gen(name)

    def relation_basis(self, limits: Limits = DEFAULT_LIMITS) -> GroebnerBasis:
        with self._lock:
            if self._basis is None:
                self._basis = groebner_basis([poly_vec(r) for r in self.relations], ModuleOrder(self.ambient.order),
                                             1, self.nvars, limits)
            return self._basis

    def reduce(self, poly: Polynomial) -> Polynomial:
        basis = self.relation_basis()
        return vec_to_polys(basis.reduce(poly_vec(poly)), 1, self.ambient)[0]

    def is_zero(self, poly: Polynomial) -> bool:
        return not self.reduce(poly)

    def is_zero_ring(self) -> bool:
        return self.relation_basis().is_whole_module()

    def reduced_relations(self) -> List[Polynomial]:
        return [vec_to_polys(g, 1, self.ambient)[0] for g in self.relation_basis().elements]

    def __eq__(self, other):
        if not isinstance(other, QuotientRing) or self.ambient != other.ambient:
            return False
        return self.relation_basis().same_module(other.relation_basis())

    def __hash__(self):
        return hash(self.ambient)

    def __repr__(self):
        rels = ", ".join(format_polynomial(r) for r in self.relations)
        return f"QuotientRing({self.ambient!r} / ({rels}))"


class FreeSubmodule:
    """Submodule of the free module (S/J)^rank given by generator vectors.

    The relations J·e_j are added implicitly whenever a basis is computed.
    """

    def __init__(self, ring: QuotientRing, rank: int, generators: Sequence[Vec],
                 twists: Optional[Sequence[int]] = None):
        self.ring = ring
        self.rank = rank
        self.generators = [dict(g) for g in generators if g]
        self.twists = tuple(twists) if twists is not None else (0,) * rank
        if len(self.twists) != rank:
            raise OrderMismatchError("[MODULE] twist vector length differs from rank")
        self._lock = threading.Lock()
        self._bases: Dict[tuple, GroebnerBasis] = {}

    def implicit_relations(self) -> List[Vec]:
        out = []
        for r in self.ring.relations:
            for j in range(self.rank):
                out.append(poly_vec(r, j))
        return out

    def groebner(self, order: Optional[ModuleOrder] = None, limits: Limits = DEFAULT_LIMITS) -> GroebnerBasis:
        order = order or ModuleOrder(self.ring.ambient.order)
        with self._lock:
            basis = self._bases.get(order.signature)
            if basis is None:
                basis = groebner_basis(self.generators + self.implicit_relations(), order, self.rank,
                                       self.ring.nvars, limits)
                self._bases[order.signature] = basis
            return basis

    def reduce(self, vec: Vec) -> Vec:
        return self.groebner().reduce(vec)

    def contains(self, vec: Vec) -> bool:
        return not self.reduce(vec)

    def contains_module(self, other: "FreeSubmodule") -> bool:
        return all(self.contains(g) for g in other.generators)

    def same_as(self, other: "FreeSubmodule") -> bool:
        if self.rank != other.rank:
            return False
        return self.contains_module(other) and other.contains_module(self)

    def is_whole(self) -> bool:
        return self.groebner().is_whole_module()

    def basis_submodule(self) -> "FreeSubmodule":
        return FreeSubmodule(self.ring, self.rank, self.groebner().elements, self.twists)


class Ideal:
    """Ideal of a quotient ring, given by generators."""

    def __init__(self, ring: QuotientRing, generators: Sequence):
        self.ring = ring
        self.generators = list(polynomials_from(ring.ambient, generators))
        self._module = FreeSubmodule(ring, 1, [poly_vec(g) for g in self.generators])

    def groebner(self, order=None, limits: Limits = DEFAULT_LIMITS) -> GroebnerBasis:
        module_order = ModuleOrder(order) if order is not None and not isinstance(order, ModuleOrder) else order
        return self._module.groebner(module_order, limits)

    def basis_polynomials(self, order=None) -> List[Polynomial]:
        return [vec_to_polys(g, 1, self.ring.ambient)[0] for g in self.groebner(order).elements]

    def normal_form(self, poly: Polynomial) -> Polynomial:
        return vec_to_polys(self._module.reduce(poly_vec(poly)), 1, self.ring.ambient)[0]

    def contains(self, poly: Polynomial) -> bool:
        return not self.normal_form(poly)

    def is_unit(self) -> bool:
        return self._module.is_whole()

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(g) for g in self.generators)

    def equals(self, other: "Ideal") -> bool:
        return self._module.same_as(other._module)

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.generators)

    def nonzero_generators(self) -> List[Polynomial]:
        return [g for g in self.generators if not self.ring.is_zero(g)]

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, [a * b for a in self.generators for b in other.generators])

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, self.generators + other.generators)

    def __repr__(self):
        return f"Ideal({', '.join(format_polynomial(g) for g in self.generators)})"


def eliminate(ideal: Ideal, variables: Sequence[str], limits: Limits = DEFAULT_LIMITS) -> Ideal:
    """ideal ∩ k[remaining variables], via the block order eliminating ``variables``.

    The result lives in a quotient ring over the smaller polynomial ring with
    no relations; the relations of ``ideal.ring`` are part of the input.
    """
    ambient = ideal.ring.ambient
    drop = [ambient.index[v] for v in variables]
    keep = [i for i in range(ambient.nvars) if i not in drop]
    order = block_order(ambient.nvars, drop)
    gens = [poly_vec(g) for g in ideal.generators] + [poly_vec(r) for r in ideal.ring.relations]
    basis = groebner_basis(gens, ModuleOrder(order), 1, ambient.nvars, limits)
    sub = PolynomialRing([ambient.names[i] for i in keep], ambient.field, [ambient.weights[i] for i in keep])
    survivors = []
    for element in basis.elements:
        poly = vec_to_polys(element, 1, ambient)[0]
        if poly.support() & set(drop):
            continue
        survivors.append(sub.embed(poly))
    return Ideal(QuotientRing(sub), survivors)


def kernel_of_ring_map(source: PolynomialRing, target: QuotientRing, images: Sequence,
                       limits: Limits = DEFAULT_LIMITS) -> Ideal:
    """Kernel of k[source] → target, v_i ↦ images[i], by graph-ideal elimination.

    ``target`` may be a Laurent model: a quotient containing t·s − 1.
    Target variables sharing a name with a source variable are renamed internally.
    """
    images = polynomials_from(target.ambient, images)
    if len(images) != source.nvars:
        raise OrderMismatchError("[ELIM] one image per source variable is required")
    rename = {}
    taken = set(source.names) | set(target.names)
    for name in target.names:
        fresh = name
        while fresh in source.names or (fresh != name and fresh in taken):
            fresh += "_"
        rename[name] = fresh
        taken.add(fresh)
    hidden = [rename[n] for n in target.names]
    graph_ring = PolynomialRing(hidden + list(source.names), target.field)
    relations = [graph_ring.embed(r, rename) for r in target.relations]
    graph = [graph_ring.gen(name) - graph_ring.embed(img, rename) for name, img in zip(source.names, images)]
    eliminated = eliminate(Ideal(QuotientRing(graph_ring), relations + graph), hidden, limits)
    return Ideal(QuotientRing(source), [source.embed(g) for g in eliminated.generators])


def ideal_power(ideal: Ideal, n: int) -> Ideal:
    """I^n as all n-fold products of generators, dropping products that are zero or repeated."""
    if n < 0:
        raise ValueError("[IDEAL] negative power")
    ring = ideal.ring
    if n == 0:
        return Ideal(ring, [ring.ambient.one()])
    seen = set()
    products = []
    gens = ideal.generators
    for combo in combinations_with_replacement(range(len(gens)), n):
        product = ring.ambient.one()
        for i in combo:
            product = product * gens[i]
        reduced = ring.reduce(product)
        if not reduced or reduced in seen:
            continue
        seen.add(reduced)
        products.append(reduced)
    return Ideal(ring, products)


def saturate(module: FreeSubmodule, ideal: Ideal, limits: Limits = DEFAULT_LIMITS) -> FreeSubmodule:
    """(M : J^∞), iterating M ↦ (M : J) until two consecutive terms agree."""
    ring = module.ring
    current = module
    implicit = current.implicit_relations()
    for _ in range(limits.max_iterations):
        quotient = module_quotient(ring.ambient, current.generators + implicit, module.rank, ideal.generators, limits)
        following = FreeSubmodule(ring, module.rank, quotient, module.twists)
        if current.contains_module(following):
            return current
        current = following
    raise InconclusiveError("[SATURATE] quotient chain did not stabilize within the iteration cap")


def krull_dimension(ring: QuotientRing, limits: Limits = DEFAULT_LIMITS) -> int:
    """Krull dimension of S/J, read off the leading monomials of J; -1 for the zero ring.

    It is the size of the largest set of variables containing the support of
    no leading monomial, which is valid for the global orders used here.
    """
    basis = ring.relation_basis(limits)
    if basis.is_whole_module():
        return -1
    supports = [frozenset(i for i, a in enumerate(exps) if a) for _, exps in basis.leads]
    for size in range(ring.nvars, -1, -1):
        for chosen in combinations(range(ring.nvars), size):
            free = set(chosen)
            if not any(s <= free for s in supports):
                return size
    return 0


def unit_submodule(ring: QuotientRing, rank: int) -> FreeSubmodule:
    return FreeSubmodule(ring, rank, [unit_vec(j, ring.nvars, ring.field.one) for j in range(rank)])


def shift_components(vecs: Sequence[Vec], offset: int) -> List[Vec]:
    return [vec_move(v, {c: c + offset for c, _ in v}) for v in vecs]
