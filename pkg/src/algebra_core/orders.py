"""Monomial and module term orders.

Orders are key functions: a larger key means a larger monomial. They wrap
sympy's ``grevlex``/``lex``/``ProductOrder`` and carry a ``signature`` tuple
so Gröbner bases can be cached and compared by order.
"""

from typing import Callable, Optional, Sequence, Tuple

from sympy.polys.orderings import ProductOrder, grevlex, lex

Exponents = Tuple[int, ...]
Term = Tuple[int, Exponents]


class MonomialOrder:
    """A term order on exponent tuples.

    Args:
        key: callable sending an exponent tuple to a comparable key.
        signature: hashable description used for caching and mismatch checks.
    """

    def __init__(self, key: Callable[[Exponents], tuple], signature: tuple):
        self.key = key
        self.signature = signature

    def __call__(self, exps: Exponents):
        return self.key(exps)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.signature == other.signature

    def __hash__(self):
        return hash(self.signature)

    def __repr__(self):
        return f"MonomialOrder{self.signature}"


def _picker(indices: Tuple[int, ...]):
    return lambda m: tuple(m[i] for i in indices)


def degrevlex_order() -> MonomialOrder:
    return MonomialOrder(grevlex, ("degrevlex",))


def lex_order() -> MonomialOrder:
    return MonomialOrder(lex, ("lex",))


def block_order(nvars: int, elim: Sequence[int], inner: Optional[MonomialOrder] = None) -> MonomialOrder:
    """Elimination order: degrevlex on ``elim`` first, then ``inner`` on the remaining variables."""
    elim_idx = tuple(sorted(set(elim)))
    rest_idx = tuple(i for i in range(nvars) if i not in elim_idx)
    inner = inner or degrevlex_order()
    product = ProductOrder((grevlex, _picker(elim_idx)), (inner.key, _picker(rest_idx)))
    return MonomialOrder(product, ("block", elim_idx, inner.signature))


def weighted_order(weights: Sequence[int], tie: Optional[MonomialOrder] = None) -> MonomialOrder:
    """Compare by the weight vector first; the tie order breaks ties."""
    w = tuple(weights)
    tie = tie or degrevlex_order()

    def key(m):
        return (sum(a * b for a, b in zip(w, m)), tie.key(m))

    return MonomialOrder(key, ("weighted", w, tie.signature))


class ModuleOrder:
    """Order on terms ``(component, exponents)`` of a free module.

    ``position`` is ``"pot"`` (component first, component 0 largest) or
    ``"top"`` (term first; with ``twists`` the total degree is shifted by the
    component twist before comparing). With ``split`` set, components below
    ``split`` form a block that dominates every other component; inside the
    lower block, the variables in ``eliminate`` are compared first. GB elements
    whose leading term falls in the lower block then have no upper part, and
    those free of ``eliminate`` variables span the part of the kernel defined
    over the subring in the remaining variables.
    """

    def __init__(self, term_order: MonomialOrder, position: str = "pot",
                 twists: Optional[Sequence[int]] = None, split: Optional[int] = None,
                 eliminate: Sequence[int] = ()):
        if position not in ("pot", "top"):
            raise ValueError(f"[ORDER] unknown position '{position}'")
        self.term_order = term_order
        self.position = position
        self.twists = tuple(twists) if twists is not None else None
        self.split = split
        self.eliminate = tuple(sorted(set(eliminate)))
        self.signature = ("module", term_order.signature, position, self.twists, split, self.eliminate)
        self.key = self._build_key()

    def _build_key(self):
        term_key = self.term_order.key
        twists = self.twists
        if self.split is not None:
            split = self.split
            pick = _picker(self.eliminate)

            def key(term):
                comp, e = term
                if comp < split:
                    return (1, -comp, term_key(e))
                return (0, grevlex(pick(e)), -comp, term_key(e))
            return key
        if self.position == "pot":
            return lambda term: (-term[0], term_key(term[1]))
        if twists is not None:
            return lambda term: (sum(term[1]) + twists[term[0]], term_key(term[1]), -term[0])
        return lambda term: (term_key(term[1]), -term[0])

    def __eq__(self, other):
        return isinstance(other, ModuleOrder) and self.signature == other.signature

    def __hash__(self):
        return hash(self.signature)

    def __repr__(self):
        return f"ModuleOrder{self.signature}"
