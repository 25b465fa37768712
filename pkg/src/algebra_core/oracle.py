"""Dense Macaulay-matrix reference computations.

Only valid for homogeneous input: the row space of the degree-D Macaulay
matrix is then exactly the degree-D part of the ideal.
"""

from typing import Dict, List, Sequence, Set, Tuple

import numpy as np
from sympy.polys.matrices import DomainMatrix
from sympy.polys.monomials import monomial_div

from algebra_core.errors import GradingError
from algebra_core.polynomial import Exponents, Polynomial, PolynomialRing, exponent_tuples


def macaulay_matrix(ring: PolynomialRing, generators: Sequence[Polynomial], degree: int) -> Tuple[DomainMatrix, List[Exponents]]:
    """Rows m·g for every generator g and monomial m with deg(m·g) = ``degree``."""
    columns = exponent_tuples(ring.nvars, degree)
    position = {e: i for i, e in enumerate(columns)}
    zero = ring.field.zero
    rows = []
    for g in generators:
        if not g:
            continue
        degrees = {sum(e) for e in g.terms}
        if len(degrees) != 1:
            raise GradingError(f"[ORACLE] {g} is not homogeneous for the standard grading")
        shift_degree = degree - degrees.pop()
        for shift in exponent_tuples(ring.nvars, shift_degree):
            row = [zero] * len(columns)
            for exps, coeff in g.terms.items():
                row[position[tuple(a + b for a, b in zip(exps, shift))]] = coeff
            rows.append(row)
    return DomainMatrix(rows, (len(rows), len(columns)), ring.field), columns


def macaulay_kernel_monomials(ring: PolynomialRing, generators: Sequence[Polynomial], degree: int) -> Set[Exponents]:
    """Monomials of ``degree`` lying in the ideal, read off the reduced row echelon form.

    A unit vector lies in the row space exactly when the echelon row with
    that pivot is the unit vector itself.
    """
    matrix, columns = macaulay_matrix(ring, generators, degree)
    if matrix.shape[0] == 0:
        return set()
    echelon, pivots = matrix.rref()
    rows = echelon.to_list()
    found = set()
    for r, p in enumerate(pivots):
        if all(not c for j, c in enumerate(rows[r]) if j != p):
            found.add(columns[p])
    return found


def macaulay_profile(ring: PolynomialRing, generators: Sequence[Polynomial], max_degree: int) -> np.ndarray:
    """Per degree 0..max_degree: (monomials, rank of the Macaulay matrix, monomials inside the ideal)."""
    table = np.zeros((max_degree + 1, 3), dtype=np.int64)
    for d in range(max_degree + 1):
        matrix, columns = macaulay_matrix(ring, generators, d)
        table[d, 0] = len(columns)
        table[d, 1] = matrix.rank() if matrix.shape[0] else 0
        table[d, 2] = len(macaulay_kernel_monomials(ring, generators, d))
    return table


def standard_monomials(ring: PolynomialRing, leads: Sequence[Exponents], degree: int) -> List[Exponents]:
    """Monomials of ``degree`` divisible by no leading monomial."""
    return [e for e in exponent_tuples(ring.nvars, degree)
            if all(monomial_div(e, lead) is None for lead in leads)]


def count_by_degree(monomials: Sequence[Exponents]) -> Dict[int, int]:
    degrees, counts = np.unique(np.array([sum(e) for e in monomials], dtype=np.int64), return_counts=True)
    return {int(d): int(c) for d, c in zip(degrees, counts)}
