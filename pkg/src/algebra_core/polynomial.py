"""Sparse polynomials over QQ or GF(p) with per-variable grading weights."""

from itertools import combinations_with_replacement
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.monomials import monomial_mul

from algebra_core.errors import GradingError, OrderMismatchError
from algebra_core.orders import MonomialOrder, block_order, degrevlex_order
from algebra_core.scalars import field_name, format_scalar, make_scalar

Exponents = Tuple[int, ...]


class PolynomialRing:
    """Ambient polynomial ring k[v_1..v_k] with integer weights.

    The default order is degrevlex, or the block order with all nonzero-weight
    variables eliminated first when weights are present; the graded pieces
    and Rees computations rely on that block structure.
    """

    def __init__(self, names: Sequence[str], field=QQ, weights: Optional[Sequence[int]] = None,
                 order: Optional[MonomialOrder] = None):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"[RING] repeated variable names in {self.names}")
        self.nvars = len(self.names)
        self.field = field
        self.weights = tuple(weights) if weights is not None else (0,) * self.nvars
        if len(self.weights) != self.nvars:
            raise ValueError("[RING] weight vector length differs from variable count")
        self.index = {name: i for i, name in enumerate(self.names)}
        fiber = [i for i, w in enumerate(self.weights) if w != 0]
        if order is None:
            order = block_order(self.nvars, fiber) if fiber else degrevlex_order()
        self.order = order

    @property
    def fiber_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, w in enumerate(self.weights) if w != 0)

    @property
    def base_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, w in enumerate(self.weights) if w == 0)

    def signature(self) -> tuple:
        return (field_name(self.field), self.names, self.weights, self.order.signature)

    def __eq__(self, other):
        return isinstance(other, PolynomialRing) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def __repr__(self):
        return f"PolynomialRing({field_name(self.field)}[{','.join(self.names)}], weights={self.weights})"

    def with_order(self, order: MonomialOrder) -> "PolynomialRing":
        return PolynomialRing(self.names, self.field, self.weights, order)

    def extend(self, names: Sequence[str], weights: Optional[Sequence[int]] = None) -> "PolynomialRing":
        """Append variables; the order is recomputed from the new weights."""
        extra = tuple(weights) if weights is not None else (0,) * len(names)
        return PolynomialRing(self.names + tuple(names), self.field, self.weights + extra)

    # -- element construction -------------------------------------------
    def poly(self, terms: Dict[Exponents, object]) -> "Polynomial":
        return Polynomial(self, terms)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, value) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: self.field.convert(value)})

    def constant_fraction(self, numerator: int, denominator: int) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: make_scalar(self.field, numerator, denominator)})

    def monomial(self, exps: Exponents, coeff=1) -> "Polynomial":
        return Polynomial(self, {tuple(exps): self.field.convert(coeff)})

    def gen(self, name_or_index: Union[str, int]) -> "Polynomial":
        i = self.index[name_or_index] if isinstance(name_or_index, str) else name_or_index
        exps = [0] * self.nvars
        exps[i] = 1
        return Polynomial(self, {tuple(exps): self.field.one})

    def gens(self) -> List["Polynomial"]:
        return [self.gen(i) for i in range(self.nvars)]

    def parse(self, text: str) -> "Polynomial":
        from algebra_core.textual import parse_polynomial
        return parse_polynomial(text, self)

    def weight(self, exps: Exponents) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))

    def convert(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring == self:
                return value
            return self.embed(value)
        return self.constant(value)

    def embed(self, poly: "Polynomial", rename: Optional[Dict[str, str]] = None) -> "Polynomial":
        """Map ``poly`` into this ring by variable name (optionally renamed)."""
        rename = rename or {}
        positions = []
        for name in poly.ring.names:
            target = rename.get(name, name)
            positions.append(self.index.get(target))
        terms: Dict[Exponents, object] = {}
        for exps, coeff in poly.terms.items():
            new = [0] * self.nvars
            for i, e in enumerate(exps):
                if e == 0:
                    continue
                if positions[i] is None:
                    raise OrderMismatchError(f"[RING] variable {poly.ring.names[i]} missing from {self.names}")
                new[positions[i]] += e
            key = tuple(new)
            terms[key] = terms.get(key, self.field.zero) + self.field.convert(coeff)
        return Polynomial(self, terms)


class Polynomial:
    """Immutable sparse polynomial ``{exponents: coefficient}``; zero coefficients are never stored."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolynomialRing, terms: Dict[Exponents, object]):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}

    # -- structure --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self, order: Optional[MonomialOrder] = None) -> List[Tuple[Exponents, object]]:
        key = (order or self.ring.order).key
        return sorted(self.terms.items(), key=lambda item: key(item[0]), reverse=True)

    def lead(self, order: Optional[MonomialOrder] = None) -> Tuple[Exponents, object]:
        if not self.terms:
            raise ValueError("[POLY] zero polynomial has no leading term")
        key = (order or self.ring.order).key
        exps = max(self.terms, key=key)
        return exps, self.terms[exps]

    def weights(self) -> set:
        return {self.ring.weight(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    def weight(self) -> Optional[int]:
        """Common weight of all terms; ``None`` for zero. Raises on inhomogeneous input."""
        found = self.weights()
        if not found:
            return None
        if len(found) > 1:
            raise GradingError(f"[POLY] {self} is not homogeneous (weights {sorted(found)})")
        return found.pop()

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def support(self) -> set:
        """Indices of variables that occur."""
        used = set()
        for exps in self.terms:
            used.update(i for i, e in enumerate(exps) if e)
        return used

    def monic(self, order: Optional[MonomialOrder] = None) -> "Polynomial":
        if not self.terms:
            return self
        _, lc = self.lead(order)
        return Polynomial(self.ring, {e: c / lc for e, c in self.terms.items()})

    def coefficient(self, exps: Exponents):
        return self.terms.get(tuple(exps), self.ring.field.zero)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise OrderMismatchError(f"[POLY] ring mismatch: {self.ring} vs {other.ring}")
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, self.ring.field.zero) + c
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            factor = self.ring.field.convert(other)
            return Polynomial(self.ring, {e: c * factor for e, c in self.terms.items()})
        other = self._coerce(other)
        zero = self.ring.field.zero
        terms: Dict[Exponents, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = monomial_mul(e1, e2)
                terms[e] = terms.get(e, zero) + c1 * c2
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def scale(self, factor) -> "Polynomial":
        return Polynomial(self.ring, {e: c * factor for e, c in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("[POLY] negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def substitute(self, images: Sequence["Polynomial"], target: Optional[PolynomialRing] = None) -> "Polynomial":
        """Evaluate at ``images`` (one per variable) in ``target``."""
        target = target or (images[0].ring if images else self.ring)
        result = target.zero()
        for exps, coeff in self.terms.items():
            term = target.constant(coeff)
            for i, e in enumerate(exps):
                if e:
                    term = term * images[i] ** e
            result = result + term
        return result

    # -- text -------------------------------------------------------------
    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)})"


def format_monomial(names: Sequence[str], exps: Exponents) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(poly: Polynomial) -> str:
    """Canonical text, descending under the ring order: ``3/2*x^2*y - u``."""
    if not poly.terms:
        return "0"
    field = poly.ring.field
    pieces = []
    for exps, coeff in poly.sorted_terms():
        text = format_scalar(field, coeff)
        negative = field == QQ and text.startswith("-")
        if negative:
            text = text[1:]
        mono = format_monomial(poly.ring.names, exps)
        if mono:
            body = mono if text == "1" else f"{text}*{mono}"
        else:
            body = text
        pieces.append(("-" if negative else "+", body))
    first_sign, first_body = pieces[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def exponent_tuples(nvars: int, degree: int) -> List[Exponents]:
    """All exponent vectors of total ``degree`` in ``nvars`` variables, in a fixed order."""
    if degree < 0:
        return []
    if nvars == 0:
        return [()] if degree == 0 else []
    result = []
    for combo in combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for i in combo:
            exps[i] += 1
        result.append(tuple(exps))
    return result


def polynomials_from(ring: PolynomialRing, items: Iterable) -> List[Polynomial]:
    """Convert strings, ints and polynomials into ``ring`` elements."""
    out = []
    for item in items:
        if isinstance(item, str):
            out.append(ring.parse(item))
        else:
            out.append(ring.convert(item))
    return out
