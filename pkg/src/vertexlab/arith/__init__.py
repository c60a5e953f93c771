"""
Exact rational arithmetic and exact linear algebra.

Every coefficient in vertexlab is a ``fractions.Fraction``. Dense systems
(omega coordinates, the raising-operator matrices, interpolation) go through
``RationalMatrix``; the large sparse systems of the correction loop go through
``solve_sparse``, which eliminates on leading terms of dictionaries.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, TypeVar, Union

Rational = Fraction

K = TypeVar("K", bound=Hashable)
R = TypeVar("R", bound=Hashable)

RationalLike = Union[int, str, Fraction]


class InconsistentSystemError(ValueError):
    """Raised when a linear system has no solution."""


def to_rational(value: RationalLike) -> Fraction:
    """Coerce ints, ``p/q`` strings and Fractions to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"Cannot convert {value!r} to an exact rational")


def parse_rational(text: str) -> Fraction:
    """
    Parse ``p/q`` or ``p`` into a Fraction.

    Floats are rejected: ``1.5`` is not a valid coefficient.
    """
    token = text.strip()
    if not token or "." in token or "e" in token.lower():
        raise ValueError(f"Not an exact rational: {text!r}")
    return Fraction(token)


def format_rational(value: Fraction) -> str:
    """Serialize as ``p/q``, or ``p`` when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def add_scaled(target: Dict[K, Fraction], source: Dict[K, Fraction], scale: Fraction = Fraction(1)) -> Dict[K, Fraction]:
    """
    In-place ``target += scale * source`` dropping zero coefficients.

    Args:
        target: Sparse vector to update
        source: Sparse vector to add
        scale: Scalar multiplier

    Returns:
        The updated target (for chaining)
    """
    if not scale:
        return target
    for key, coeff in source.items():
        value = target.get(key, 0) + scale * coeff
        if value:
            target[key] = value
        else:
            target.pop(key, None)
    return target


def scaled(source: Dict[K, Fraction], scale: Fraction) -> Dict[K, Fraction]:
    """Return ``scale * source`` as a new sparse vector."""
    if not scale:
        return {}
    return {key: scale * coeff for key, coeff in source.items()}


@dataclass(frozen=True)
class LinearSolution:
    """One particular solution plus a basis of the homogeneous solutions."""

    particular: Tuple[Fraction, ...]
    nullspace: Tuple[Tuple[Fraction, ...], ...] = field(default_factory=tuple)


class RationalMatrix:
    """
    Dense matrix of Fractions.

    Instances are treated as immutable; elimination always works on a copy.
    """

    def __init__(self, rows: Sequence[Sequence[RationalLike]]):
        self._rows: Tuple[Tuple[Fraction, ...], ...] = tuple(
            tuple(to_rational(entry) for entry in row) for row in rows
        )
        widths = {len(row) for row in self._rows}
        if len(widths) > 1:
            raise ValueError("All matrix rows must have the same length")
        self.rows = len(self._rows)
        self.cols = widths.pop() if widths else 0

    @classmethod
    def identity(cls, size: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(size)] for i in range(size)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls([[0] * cols for _ in range(rows)])

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self._rows[i][j]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalMatrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(format_rational(x) for x in row) + "]" for row in self._rows)
        return f"RationalMatrix([{body}])"

    def to_lists(self) -> List[List[Fraction]]:
        return [list(row) for row in self._rows]

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self._rows[i]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix([[self._rows[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return RationalMatrix([
            [sum((self._rows[i][k] * other._rows[k][j] for k in range(self.cols)), Fraction(0))
             for j in range(other.cols)]
            for i in range(self.rows)
        ])

    def apply(self, vector: Sequence[RationalLike]) -> Tuple[Fraction, ...]:
        """Matrix-vector product."""
        if len(vector) != self.cols:
            raise ValueError(f"Vector of length {len(vector)} does not match {self.cols} columns")
        vec = [to_rational(x) for x in vector]
        return tuple(sum((a * x for a, x in zip(row, vec)), Fraction(0)) for row in self._rows)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "RationalMatrix":
        cols = list(cols)
        return RationalMatrix([[self._rows[i][j] for j in cols] for i in rows])

    def determinant(self) -> Fraction:
        return determinant(self)

    def rank(self) -> int:
        reduced, pivots = _row_echelon([list(r) for r in self._rows])
        return len(pivots)


def determinant(matrix: RationalMatrix) -> Fraction:
    """
    Exact determinant by fraction-free (Bareiss) elimination.

    Rows are first scaled to integers so every Bareiss division is exact
    over the integers, then the scaling is divided back out.

    Raises:
        ValueError: If the matrix is not square
    """
    if matrix.rows != matrix.cols:
        raise ValueError(f"Determinant of a non-square {matrix.rows}x{matrix.cols} matrix")
    size = matrix.rows
    if size == 0:
        return Fraction(1)

    scale = Fraction(1)
    work: List[List[int]] = []
    for row in matrix.to_lists():
        common = 1
        for entry in row:
            common = common * entry.denominator // math.gcd(common, entry.denominator)
        work.append([int(entry * common) for entry in row])
        scale *= common

    sign = 1
    previous = 1
    for k in range(size - 1):
        if work[k][k] == 0:
            swap = next((r for r in range(k + 1, size) if work[r][k] != 0), None)
            if swap is None:
                return Fraction(0)
            work[k], work[swap] = work[swap], work[k]
            sign = -sign
        pivot = work[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                work[i][j] = (work[i][j] * pivot - work[i][k] * work[k][j]) // previous
            work[i][k] = 0
        previous = pivot
    return Fraction(sign * work[size - 1][size - 1]) / scale


def _row_echelon(m: List[List[Fraction]], t: Optional[List[Fraction]] = None) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form in place; returns the pivot columns."""
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    pivots: List[int] = []
    piv_r = 0
    for piv_c in range(n_cols):
        if piv_r >= n_rows:
            break
        i_row = next((r for r in range(piv_r, n_rows) if m[r][piv_c] != 0), None)
        if i_row is None:
            continue
        if i_row != piv_r:
            m[piv_r], m[i_row] = m[i_row], m[piv_r]
            if t is not None:
                t[piv_r], t[i_row] = t[i_row], t[piv_r]
        fp = m[piv_r][piv_c]
        if fp != 1:
            m[piv_r] = [x / fp for x in m[piv_r]]
            if t is not None:
                t[piv_r] = t[piv_r] / fp
        for r in range(n_rows):
            if r == piv_r:
                continue
            fr = m[r][piv_c]
            if fr == 0:
                continue
            m[r] = [a - fr * b for a, b in zip(m[r], m[piv_r])]
            if t is not None:
                t[r] -= fr * t[piv_r]
        pivots.append(piv_c)
        piv_r += 1
    return m, pivots


def solve_linear(matrix: RationalMatrix, rhs: Sequence[RationalLike]) -> LinearSolution:
    """
    Solve ``A x = b`` exactly.

    Args:
        matrix: Coefficient matrix A
        rhs: Column b, one entry per row of A

    Returns:
        A particular solution (free variables set to zero) and a basis of
        the nullspace of A

    Raises:
        ValueError: If the dimensions disagree
        InconsistentSystemError: If b is not in the column space of A
    """
    if len(rhs) != matrix.rows:
        raise ValueError(f"Right-hand side has {len(rhs)} entries, matrix has {matrix.rows} rows")
    m = matrix.to_lists()
    t = [to_rational(x) for x in rhs]
    if matrix.cols == 0:
        if any(t):
            raise InconsistentSystemError("Nonzero right-hand side for an empty system")
        return LinearSolution(particular=())
    m, pivots = _row_echelon(m, t)
    rank = len(pivots)
    if any(t[r] != 0 for r in range(rank, matrix.rows)):
        raise InconsistentSystemError("Right-hand side is not in the column space")

    particular = [Fraction(0)] * matrix.cols
    for r, c in enumerate(pivots):
        particular[c] = t[r]

    free = [c for c in range(matrix.cols) if c not in pivots]
    nullspace = []
    for f in free:
        vec = [Fraction(0)] * matrix.cols
        vec[f] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -m[r][f]
        nullspace.append(tuple(vec))
    return LinearSolution(particular=tuple(particular), nullspace=tuple(nullspace))


def solve_sparse(
    columns: Dict[K, Dict[R, Fraction]],
    target: Dict[R, Fraction],
    order: Optional[Sequence[K]] = None,
) -> Optional[Dict[K, Fraction]]:
    """
    Find coefficients x with ``sum_k x[k] * columns[k] == target``.

    Columns are reduced into an echelon basis keyed by leading row (the
    largest row key); each basis vector remembers which combination of the
    original columns produced it. Free columns get coefficient zero.

    Args:
        columns: Column vectors as sparse maps row -> coefficient
        target: Sparse right-hand side
        order: Optional deterministic column order (defaults to sorted keys)

    Returns:
        The sparse solution, or None if the system is inconsistent
    """
    basis: Dict[R, Tuple[Dict[R, Fraction], Dict[K, Fraction]]] = {}
    keys = list(order) if order is not None else sorted(columns)
    for key in keys:
        vec = dict(columns[key])
        combo: Dict[K, Fraction] = {key: Fraction(1)}
        while vec:
            lead = max(vec)
            if lead not in basis:
                basis[lead] = (vec, combo)
                break
            b_vec, b_combo = basis[lead]
            factor = -vec[lead] / b_vec[lead]
            add_scaled(vec, b_vec, factor)
            add_scaled(combo, b_combo, factor)

    residual = dict(target)
    solution: Dict[K, Fraction] = {}
    while residual:
        lead = max(residual)
        if lead not in basis:
            return None
        b_vec, b_combo = basis[lead]
        factor = residual[lead] / b_vec[lead]
        add_scaled(residual, b_vec, -factor)
        add_scaled(solution, b_combo, factor)
    return solution


def sort_with_sign(items: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Sort by adjacent transpositions; returns (sign of the permutation, sorted tuple)."""
    sign = 1
    items = list(items)
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(items)


def rational_interpolation(points: Sequence[Tuple[RationalLike, RationalLike]], degree: int) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
    """
    Fit ``p(x)/q(x)`` with deg p, deg q <= degree through the sample points.

    Solves the homogeneous system ``p(x_s) - y_s q(x_s) = 0`` and returns
    one nonzero nullspace vector. With more than ``2*degree`` samples of a
    rational function of that degree, every such vector represents it.

    Returns:
        (numerator coefficients, denominator coefficients), constant term first

    Raises:
        InconsistentSystemError: If no nonzero solution exists (too few degrees of freedom)
    """
    rows = []
    for x, y in points:
        xv, yv = to_rational(x), to_rational(y)
        powers = [xv ** k for k in range(degree + 1)]
        rows.append(powers + [-yv * p for p in powers])
    solution = solve_linear(RationalMatrix(rows), [0] * len(rows))
    if not solution.nullspace:
        raise InconsistentSystemError("Samples do not fit a rational function of the given degree")
    vec = solution.nullspace[0]
    return tuple(vec[: degree + 1]), tuple(vec[degree + 1:])


def leading_ratio_at_infinity(numerator: Sequence[Fraction], denominator: Sequence[Fraction]) -> Fraction:
    """
    Limit of p(x)/q(x) as x grows.

    Raises:
        ValueError: If q is zero or the limit diverges
    """
    deg_p = max((k for k, c in enumerate(numerator) if c), default=-1)
    deg_q = max((k for k, c in enumerate(denominator) if c), default=-1)
    if deg_q < 0:
        raise ValueError("Zero denominator in rational function")
    if deg_p < deg_q:
        return Fraction(0)
    if deg_p > deg_q:
        raise ValueError("Rational function diverges at infinity")
    return numerator[deg_p] / denominator[deg_q]


__all__ = [
    "Rational",
    "InconsistentSystemError",
    "LinearSolution",
    "RationalMatrix",
    "to_rational",
    "parse_rational",
    "format_rational",
    "add_scaled",
    "scaled",
    "determinant",
    "solve_linear",
    "solve_sparse",
    "sort_with_sign",
    "rational_interpolation",
    "leading_ratio_at_infinity",
]
