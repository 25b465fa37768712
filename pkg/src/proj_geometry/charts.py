"""Affine charts of the blowup and restriction of graded modules to them.

Chart i is the degree-0 part of the Rees ring with y_i inverted: setting
y_i = 1 and renaming y_j to z_j turns the Rees ideal into the chart ideal.
An empty chart is the one whose ideal is the unit ideal.
"""

import concurrent.futures
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from algebra_core.errors import InconclusiveError
from algebra_core.ideals import FreeSubmodule, Ideal, QuotientRing, saturate
from algebra_core.polynomial import Polynomial, PolynomialRing
from algebra_core.vectors import Vec, poly_vec, vec_from_polys, vec_to_polys
from config.config import DEFAULT_LIMITS, MAX_WORKERS, Limits, log_message
from graded.base_module import BaseModule
from graded.module import GradedModule
from graded.pieces import is_torsion
from graded.ring import GradedRing
from rees.presentation import ReesPresentation, fresh_names


@dataclass
class Chart:
    """R[z_j : j ≠ i] modulo the dehomogenized Rees ideal; z_j stands for y_j/y_i."""

    index: int
    ring: QuotientRing
    z_names: Dict[int, str]
    empty: bool

    @property
    def ambient(self) -> PolynomialRing:
        return self.ring.ambient


class ChartAtlas:
    """One chart per ideal generator of a Rees presentation."""

    def __init__(self, presentation: ReesPresentation, charts: List[Chart]):
        self.presentation = presentation
        self.charts = charts

    def __len__(self):
        return len(self.charts)

    def __iter__(self):
        return iter(self.charts)

    def chart(self, i: int) -> Chart:
        return self.charts[i]

    @property
    def is_empty(self) -> bool:
        """Y = ∅: every chart ring is the zero ring."""
        return all(c.empty for c in self.charts)

    def substitution(self, ring: GradedRing, i: int) -> List[Polynomial]:
        return chart_substitution(self.presentation, self.charts[i], ring)

    def dehomogenize(self, poly: Polynomial, i: int, ring: Optional[GradedRing] = None) -> Polynomial:
        ring = ring or self.presentation.ring
        return poly.substitute(self.substitution(ring, i), self.charts[i].ambient)

    def homogenize(self, poly: Polynomial, i: int) -> Polynomial:
        """Clear z-denominators: z_j ↦ y_j/y_i, times the least power of y_i making it polynomial."""
        chart = self.charts[i]
        target = self.presentation.ring.ambient
        y_names = self.presentation.y_names
        z_to_y = {chart.ambient.index[name]: target.index[y_names[j]] for j, name in chart.z_names.items()}
        y_i = target.index[y_names[i]]
        top = max((sum(exps[k] for k in z_to_y) for exps in poly.terms), default=0)
        terms = {}
        for exps, coeff in poly.terms.items():
            new = [0] * target.nvars
            fiber = 0
            for k, e in enumerate(exps):
                if not e:
                    continue
                if k in z_to_y:
                    new[z_to_y[k]] += e
                    fiber += e
                else:
                    new[target.index[chart.ambient.names[k]]] += e
            new[y_i] += top - fiber
            terms[tuple(new)] = coeff
        return Polynomial(target, terms)


def chart_substitution(presentation: ReesPresentation, chart: Chart, ring: GradedRing) -> List[Polynomial]:
    """Images of the variables of ``ring`` under y_i ↦ 1, y_j ↦ z_j and u ↦ g_i."""
    ambient = chart.ambient
    y_names = presentation.y_names
    images = []
    for k, name in enumerate(ring.names):
        if name in y_names:
            j = y_names.index(name)
            images.append(ambient.one() if j == chart.index else ambient.gen(chart.z_names[j]))
        elif k == ring.u_index:
            images.append(ambient.embed(presentation.generators[chart.index]))
        else:
            images.append(ambient.gen(name))
    return images


def _build_chart(presentation: ReesPresentation, i: int, z_names: List[str]) -> Chart:
    base = presentation.base
    names = {j: z for j, z in enumerate(z_names) if j != i}
    ambient = PolynomialRing(list(base.names) + list(names.values()), base.field)
    chart = Chart(i, QuotientRing(ambient), names, False)
    images = chart_substitution(presentation, chart, presentation.ring)
    relations = [r.substitute(images, ambient) for r in presentation.ring.relations]
    chart.ring = QuotientRing(ambient, [r for r in relations if r])
    chart.empty = chart.ring.is_zero_ring()
    return chart


def blowup_charts(presentation: ReesPresentation,
                  log_function: Optional[Callable[[str], None]] = None) -> ChartAtlas:
    """The standard affine cover of Proj of the Rees ring, one chart per generator g_i."""
    log = log_function or log_message
    count = len(presentation.y_names)
    z_names = fresh_names("z", count, presentation.base.names)
    with concurrent.futures.ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
        charts = list(executor.map(lambda i: _build_chart(presentation, i, z_names), range(count)))
    empty = [c.index for c in charts if c.empty]
    if empty:
        log(f"[CHARTS] charts {empty} are empty")
    return ChartAtlas(presentation, charts)


def _saturated(ring: QuotientRing, polys: List[Polynomial], variable: str, limits: Limits) -> FreeSubmodule:
    ambient = ring.ambient
    module = FreeSubmodule(QuotientRing(ambient), 1, [poly_vec(p) for p in polys if p])
    return saturate(module, Ideal(QuotientRing(ambient), [ambient.gen(variable)]), limits)


def transition_consistent(atlas: ChartAtlas, i: int, j: int, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Chart i with z_j inverted agrees with chart j with z_i inverted.

    The saturated chart-i ideal is homogenized, dehomogenized on chart j and
    compared there after inverting z_i.
    """
    if i == j:
        return True
    first, second = atlas.chart(i), atlas.chart(j)
    local_i = _saturated(first.ring, list(first.ring.relations), first.z_names[j], limits)
    moved = []
    for vec in local_i.generators:
        poly = vec_to_polys(vec, 1, first.ambient)[0]
        moved.append(atlas.dehomogenize(atlas.homogenize(poly, i), j))
    carried = _saturated(second.ring, moved, second.z_names[i], limits)
    local_j = _saturated(second.ring, list(second.ring.relations), second.z_names[i], limits)
    return carried.same_as(local_j)


def sheaf_restrict(module: GradedModule, atlas: ChartAtlas, i: int) -> BaseModule:
    """(M_{y_i})_0 over chart i: generator j is e_j / y_i^{t_j}."""
    chart = atlas.chart(i)
    images = atlas.substitution(module.ring, i)
    relations: List[Vec] = []
    for r in module.relations:
        polys = vec_to_polys(r, module.rank, module.ring.ambient)
        relations.append(vec_from_polys([p.substitute(images, chart.ambient) for p in polys]))
    y_name = atlas.presentation.y_names[i]
    labels = [f"e{j}/{y_name}^{t}" if t else f"e{j}" for j, t in enumerate(module.twists)]
    return BaseModule(chart.ring, module.rank, relations, labels)


def sheaf_is_zero(module: GradedModule, atlas: ChartAtlas, cross_check: bool = True,
                  limits: Limits = DEFAULT_LIMITS,
                  log_function: Optional[Callable[[str], None]] = None) -> bool:
    """Whether M̃ = 0, i.e. every chart restriction vanishes.

    For modules over the Rees ring the answer is compared with the torsion test.
    """
    log = log_function or log_message
    with concurrent.futures.ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
        zeros = list(executor.map(lambda i: sheaf_restrict(module, atlas, i).is_zero(), range(len(atlas))))
    answer = all(zeros)
    if cross_check and not module.ring.has_u:
        torsion = is_torsion(module, limits).torsion
        if torsion != answer:
            log(f"[CHARTS] chart restrictions give {answer}, torsion test gives {torsion}")
            raise InconclusiveError("[CHARTS] chart restriction and torsion test disagree")
    return answer
