"""Buchberger's algorithm for submodules of free modules.

Sugar selection, Gebauer-Möller pair elimination (the coprime shortcut only
for rank one, where it is valid), then minimalize + interreduce to the unique
reduced basis. Ideals are the rank-one case.
"""

from heapq import heapify, heappop, heappush
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sympy.polys.monomials import monomial_div, monomial_divides, monomial_lcm, monomial_mul

from algebra_core.errors import OrderMismatchError, ResourceLimitError
from algebra_core.orders import ModuleOrder
from algebra_core.vectors import Term, Vec, add_into, leading_term, vec_shift
from config.config import DEFAULT_LIMITS, Limits, log_message

Quotients = List[Dict[tuple, object]]

_session_cache = None


def set_session_cache(cache) -> None:
    """Install (or clear with ``None``) the cache every ``groebner_basis`` call consults."""
    global _session_cache
    _session_cache = cache


class _Desc:
    """Heap entry ordering terms from largest to smallest."""

    __slots__ = ("key", "term")

    def __init__(self, key, term):
        self.key = key
        self.term = term

    def __lt__(self, other):
        return self.key > other.key


def _index_leads(leads: Sequence[Term]) -> Dict[int, List[Tuple[int, tuple]]]:
    by_comp: Dict[int, List[Tuple[int, tuple]]] = {}
    for idx, (comp, exps) in enumerate(leads):
        by_comp.setdefault(comp, []).append((idx, exps))
    return by_comp


def _find_reducer(term: Term, by_comp) -> Optional[Tuple[int, tuple]]:
    comp, exps = term
    for idx, lead_exps in by_comp.get(comp, ()):
        q = monomial_div(exps, lead_exps)
        if q is not None:
            return idx, q
    return None


def reduce_vector(vec: Vec, elements: Sequence[Vec], leads: Sequence[Term], order: ModuleOrder,
                  limits: Limits = DEFAULT_LIMITS, quotients: Optional[Quotients] = None,
                  full: bool = True, by_comp=None) -> Vec:
    """Divide ``vec`` by ``elements``; returns the remainder.

    With ``full`` every term is reduced, otherwise only until the leading
    term is irreducible. ``quotients`` (one dict per element) collects the
    multipliers so that vec = Σ q_k·elements_k + remainder.
    """
    key = order.key
    by_comp = by_comp if by_comp is not None else _index_leads(leads)
    work = dict(vec)
    heap = [_Desc(key(t), t) for t in work]
    heapify(heap)
    remainder: Vec = {}
    while heap:
        term = heappop(heap).term
        coeff = work.pop(term, None)
        if coeff is None:
            continue
        hit = _find_reducer(term, by_comp)
        if hit is None:
            remainder[term] = coeff
            if not full:
                remainder.update(work)
                break
            continue
        idx, q = hit
        element = elements[idx]
        lead = leads[idx]
        factor = coeff / element[lead]
        if quotients is not None:
            bucket = quotients[idx]
            old = bucket.get(q)
            bucket[q] = factor if old is None else old + factor
        for (comp, exps), gcoef in element.items():
            if (comp, exps) == lead:
                continue
            new_term = (comp, monomial_mul(exps, q))
            old = work.get(new_term)
            if old is None:
                work[new_term] = -factor * gcoef
                heappush(heap, _Desc(key(new_term), new_term))
            else:
                value = old - factor * gcoef
                if value:
                    work[new_term] = value
                else:
                    del work[new_term]
        if len(work) + len(remainder) > limits.max_terms:
            raise ResourceLimitError(f"[GROEBNER] term cap {limits.max_terms} exceeded during reduction")
    if quotients is not None:
        for bucket in quotients:
            for mono in [m for m, c in bucket.items() if not c]:
                del bucket[mono]
    return remainder


def _monic(vec: Vec, lead: Term) -> Vec:
    lc = vec[lead]
    return {t: c / lc for t, c in vec.items()}


def s_vector(f: Vec, g: Vec, lead_f: Term, lead_g: Term) -> Vec:
    """S-vector of two monic vectors whose leading terms share a component."""
    lcm = monomial_lcm(lead_f[1], lead_g[1])
    out = vec_shift(f, monomial_div(lcm, lead_f[1]))
    shifted = vec_shift(g, monomial_div(lcm, lead_g[1]))
    for term, coeff in shifted.items():
        old = out.get(term)
        value = -coeff if old is None else old - coeff
        if value:
            out[term] = value
        else:
            out.pop(term, None)
    return out


class GroebnerBasis:
    """A reduced Gröbner basis of a submodule of a free module of rank ``rank``.

    Args:
        elements: monic vectors, sorted by leading term.
        order: the module order they were computed under.
        rank: rank of the ambient free module.
        nvars: number of ring variables.
    """

    def __init__(self, elements: List[Vec], order: ModuleOrder, rank: int, nvars: int):
        self.elements = elements
        self.order = order
        self.rank = rank
        self.nvars = nvars
        self.leads = [leading_term(g, order) for g in elements]
        self._by_comp = _index_leads(self.leads)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def _check(self, order: Optional[ModuleOrder]):
        if order is not None and order != self.order:
            raise OrderMismatchError(f"[GROEBNER] basis computed under {self.order}, asked for {order}")

    def reduce(self, vec: Vec, order: Optional[ModuleOrder] = None,
               limits: Limits = DEFAULT_LIMITS) -> Vec:
        self._check(order)
        if not self.elements:
            return dict(vec)
        return reduce_vector(vec, self.elements, self.leads, self.order, limits, by_comp=self._by_comp)

    def divide(self, vec: Vec, limits: Limits = DEFAULT_LIMITS) -> Tuple[Vec, Quotients]:
        quotients: Quotients = [{} for _ in self.elements]
        remainder = reduce_vector(vec, self.elements, self.leads, self.order, limits,
                                  quotients=quotients, by_comp=self._by_comp)
        return remainder, quotients

    def contains(self, vec: Vec) -> bool:
        return not self.reduce(vec)

    def is_whole_module(self) -> bool:
        """Every basis vector e_c is a leading term (for rank one: the unit ideal)."""
        unit = (0,) * self.nvars
        hit = {comp for comp, exps in self.leads if exps == unit}
        return hit.issuperset(range(self.rank))

    def same_module(self, other: "GroebnerBasis") -> bool:
        """Reduced bases under one order are unique, so compare element sets."""
        if self.order != other.order or self.rank != other.rank:
            return all(other.contains(g) for g in self.elements) and \
                all(self.contains(g) for g in other.elements)
        return sorted(map(_canonical, self.elements)) == sorted(map(_canonical, other.elements))


def _canonical(vec: Vec) -> str:
    return repr(sorted((t, str(c)) for t, c in vec.items()))


def _update(elements, leads, sugars, pairs, heap, new_vec, new_lead, new_sugar, order, rank_one):
    """Gebauer-Möller update when ``new_vec`` joins the basis."""
    comp, exps = new_lead
    for pair in list(pairs):
        i, j = pair
        if leads[i][0] != comp:
            continue
        lcm_ij = monomial_lcm(leads[i][1], leads[j][1])
        if monomial_divides(exps, lcm_ij) and lcm_ij != monomial_lcm(leads[i][1], exps) \
                and lcm_ij != monomial_lcm(leads[j][1], exps):
            pairs.discard(pair)
    lcm_classes: Dict[tuple, List[int]] = {}
    for i, lead in enumerate(leads):
        if lead[0] == comp:
            lcm_classes.setdefault(monomial_lcm(lead[1], exps), []).append(i)
    minimal: List[tuple] = []
    for lcm in sorted(lcm_classes, key=lambda L: order.key((comp, L))):
        if all(not monomial_divides(other, lcm) for other in minimal):
            minimal.append(lcm)
    n = len(elements)
    for lcm in minimal:
        members = lcm_classes[lcm]
        if rank_one and any(lcm == monomial_mul(leads[i][1], exps) for i in members):
            continue
        i = min(members)
        sugar = max(sugars[i] + sum(lcm) - sum(leads[i][1]), new_sugar + sum(lcm) - sum(exps))
        pairs.add((i, n))
        heappush(heap, (sugar, order.key((comp, lcm)), i, n))
    elements.append(new_vec)
    leads.append(new_lead)
    sugars.append(new_sugar)


def _minimalize(elements: List[Vec], leads: List[Term], order: ModuleOrder) -> List[Tuple[Vec, Term]]:
    kept: List[Tuple[Vec, Term]] = []
    for vec, lead in sorted(zip(elements, leads), key=lambda item: order.key(item[1])):
        if all(not (lead[0] == other[0] and monomial_divides(other[1], lead[1])) for _, other in kept):
            kept.append((vec, lead))
    return kept


def _interreduce(kept: List[Tuple[Vec, Term]], order: ModuleOrder, limits: Limits) -> List[Vec]:
    reduced = []
    for i, (vec, lead) in enumerate(kept):
        others = [v for j, (v, _) in enumerate(kept) if j != i]
        other_leads = [t for j, (_, t) in enumerate(kept) if j != i]
        tail = reduce_vector(vec, others, other_leads, order, limits) if others else dict(vec)
        reduced.append(_monic(tail, lead))
    return reduced


def groebner_basis(gens: Sequence[Vec], order: ModuleOrder, rank: int, nvars: int,
                   limits: Limits = DEFAULT_LIMITS, log_function: Optional[Callable[[str], None]] = None,
                   cache=None) -> GroebnerBasis:
    """Reduced Gröbner basis of the submodule generated by ``gens``.

    Raises:
        ResourceLimitError: when the term or S-pair cap is exceeded.
    """
    log = log_function or log_message
    gens = [dict(g) for g in gens if g]
    cache = cache if cache is not None else _session_cache
    if cache is not None:
        cached = cache.load(gens, order, rank, nvars)
        if cached is not None:
            return cached
    rank_one = rank == 1
    elements: List[Vec] = []
    leads: List[Term] = []
    sugars: List[int] = []
    pairs: set = set()
    heap: list = []
    for g in gens:
        r = reduce_vector(g, elements, leads, order, limits) if elements else g
        if r:
            lead = leading_term(r, order)
            _update(elements, leads, sugars, pairs, heap, _monic(r, lead), lead,
                    max(sum(e) for _, e in r), order, rank_one)
    processed = 0
    while heap:
        _, _, i, j = heappop(heap)
        if (i, j) not in pairs:
            continue
        pairs.discard((i, j))
        processed += 1
        if processed > limits.max_iterations:
            raise ResourceLimitError(f"[GROEBNER] S-pair cap {limits.max_iterations} exceeded")
        s = s_vector(elements[i], elements[j], leads[i], leads[j])
        lcm = monomial_lcm(leads[i][1], leads[j][1])
        sugar = max(sugars[i] + sum(lcm) - sum(leads[i][1]), sugars[j] + sum(lcm) - sum(leads[j][1]))
        r = reduce_vector(s, elements, leads, order, limits)
        if r:
            lead = leading_term(r, order)
            _update(elements, leads, sugars, pairs, heap, _monic(r, lead), lead, sugar, order, rank_one)
        if processed % 500 == 0:
            log(f"[GROEBNER] {processed} pairs, basis size {len(elements)}, {len(pairs)} pending")
    basis = GroebnerBasis(_interreduce(_minimalize(elements, leads, order), order, limits), order, rank, nvars)
    if cache is not None:
        cache.store(gens, basis)
    return basis


def is_groebner(elements: Sequence[Vec], order: ModuleOrder, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Buchberger criterion: every S-vector reduces to zero."""
    elements = [g for g in elements if g]
    leads = [leading_term(g, order) for g in elements]
    monic = [_monic(g, t) for g, t in zip(elements, leads)]
    by_comp = _index_leads(leads)
    for i in range(len(monic)):
        for j in range(i + 1, len(monic)):
            if leads[i][0] != leads[j][0]:
                continue
            s = s_vector(monic[i], monic[j], leads[i], leads[j])
            if reduce_vector(s, monic, leads, order, limits, by_comp=by_comp):
                return False
    return True


def syzygies(basis: GroebnerBasis, limits: Limits = DEFAULT_LIMITS) -> List[Vec]:
    """Schreyer generators of the syzygies among the basis elements.

    The result lives in a free module with one component per basis element.
    """
    elements, leads = basis.elements, basis.leads
    result: List[Vec] = []
    for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
            if leads[i][0] != leads[j][0]:
                continue
            lcm = monomial_lcm(leads[i][1], leads[j][1])
            mi, mj = monomial_div(lcm, leads[i][1]), monomial_div(lcm, leads[j][1])
            s = s_vector(elements[i], elements[j], leads[i], leads[j])
            remainder, quotients = basis.divide(s, limits)
            if remainder:
                raise OrderMismatchError("[GROEBNER] syzygies need a Gröbner basis as input")
            one = elements[i][leads[i]]
            syz: Vec = {}
            add_into(syz, {(i, mi): one})
            add_into(syz, {(j, mj): -one})
            for k, bucket in enumerate(quotients):
                add_into(syz, {(k, mono): -c for mono, c in bucket.items()})
            if syz:
                result.append(syz)
    return result
