"""Sparse vectors of a free module: ``{(component, exponents): coefficient}``."""

from typing import Dict, Iterable, List, Sequence, Tuple

from sympy.polys.monomials import monomial_mul

from algebra_core.polynomial import Polynomial, PolynomialRing

Exponents = Tuple[int, ...]
Term = Tuple[int, Exponents]
Vec = Dict[Term, object]


def vec_from_polys(polys: Sequence[Polynomial], offset: int = 0) -> Vec:
    vec: Vec = {}
    for comp, poly in enumerate(polys):
        for exps, coeff in poly.terms.items():
            vec[(comp + offset, exps)] = coeff
    return vec


def vec_to_polys(vec: Vec, rank: int, ring: PolynomialRing, offset: int = 0) -> List[Polynomial]:
    buckets: List[Dict[Exponents, object]] = [{} for _ in range(rank)]
    for (comp, exps), coeff in vec.items():
        c = comp - offset
        if 0 <= c < rank:
            buckets[c][exps] = coeff
    return [Polynomial(ring, b) for b in buckets]


def poly_vec(poly: Polynomial, comp: int = 0) -> Vec:
    return {(comp, e): c for e, c in poly.terms.items()}


def unit_vec(comp: int, nvars: int, one) -> Vec:
    return {(comp, (0,) * nvars): one}


def add_into(target: Vec, vec: Vec, factor=None) -> Vec:
    """``target += factor·vec`` in place, dropping cancelled terms."""
    for term, coeff in vec.items():
        value = coeff * factor if factor is not None else coeff
        old = target.get(term)
        new = value if old is None else old + value
        if new:
            target[term] = new
        else:
            target.pop(term, None)
    return target


def vec_add(a: Vec, b: Vec) -> Vec:
    return add_into(dict(a), b)


def vec_sub(a: Vec, b: Vec) -> Vec:
    out = dict(a)
    for term, coeff in b.items():
        old = out.get(term)
        new = -coeff if old is None else old - coeff
        if new:
            out[term] = new
        else:
            out.pop(term, None)
    return out


def vec_scale(vec: Vec, factor) -> Vec:
    return {t: c * factor for t, c in vec.items() if c * factor}


def vec_shift(vec: Vec, mono: Exponents, factor=None) -> Vec:
    """Multiply by the monomial ``mono`` (and optionally a scalar)."""
    if factor is None:
        return {(c, monomial_mul(e, mono)): v for (c, e), v in vec.items()}
    return {(c, monomial_mul(e, mono)): v * factor for (c, e), v in vec.items()}


def vec_mul_poly(vec: Vec, poly: Polynomial) -> Vec:
    out: Vec = {}
    for exps, coeff in poly.terms.items():
        add_into(out, vec_shift(vec, exps, coeff))
    return out


def vec_move(vec: Vec, mapping: Dict[int, int]) -> Vec:
    """Renumber components; components missing from ``mapping`` are dropped."""
    return {(mapping[c], e): v for (c, e), v in vec.items() if c in mapping}


def vec_components(vec: Vec) -> set:
    return {c for c, _ in vec}


def vec_restrict(vec: Vec, comps: Iterable[int]) -> Vec:
    keep = set(comps)
    return {t: v for t, v in vec.items() if t[0] in keep}


def vec_support_vars(vec: Vec) -> set:
    used = set()
    for _, exps in vec:
        used.update(i for i, e in enumerate(exps) if e)
    return used


def vec_degree(vec: Vec) -> int:
    return max((sum(e) for _, e in vec), default=0)


def leading_term(vec: Vec, order) -> Term:
    return max(vec, key=order.key)


def combine(columns: Sequence[Vec], coeffs: Sequence[Polynomial]) -> Vec:
    """Σ coeffs[k]·columns[k]."""
    out: Vec = {}
    for column, coeff in zip(columns, coeffs):
        if coeff:
            add_into(out, vec_mul_poly(column, coeff))
    return out


def apply_matrix(columns: Sequence[Vec], vec: Vec) -> Vec:
    """Image of ``vec`` under the map sending basis vector j to ``columns[j]``."""
    out: Vec = {}
    for (comp, exps), coeff in vec.items():
        add_into(out, vec_shift(columns[comp], exps, coeff))
    return out


def vec_pick_vars(vec: Vec, indices: Sequence[int]) -> Vec:
    """Keep only the exponents at ``indices``; the caller guarantees the others are zero."""
    return {(c, tuple(e[i] for i in indices)): v for (c, e), v in vec.items()}


def vec_spread_vars(vec: Vec, indices: Sequence[int], nvars: int) -> Vec:
    """Inverse of ``vec_pick_vars``: place exponents at ``indices`` of an ``nvars`` tuple."""
    out: Vec = {}
    for (c, e), v in vec.items():
        full = [0] * nvars
        for i, a in zip(indices, e):
            full[i] = a
        out[(c, tuple(full))] = v
    return out


def vec_transfer(vec: Vec, rank: int, source: PolynomialRing, target: PolynomialRing) -> Vec:
    """Move a vector between polynomial rings by variable name."""
    return vec_from_polys([target.embed(p) for p in vec_to_polys(vec, rank, source)])
