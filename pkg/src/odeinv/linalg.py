"""Exact linear algebra over Q for parameter-valuation subspaces.

Subspaces of Q^n are stored as reduced-row-echelon bases, which makes them
canonical: two subspaces are equal iff their basis matrices are identical.
Elimination runs on content-free integer rows (cross-multiplication, no
intermediate fractions) and normalizes to rational RREF at the end.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .poly import as_fraction


class LinearForm:
    """A linear expression over parameters, with no constant term."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict):
        self.coeffs = {s: as_fraction(c) for s, c in coeffs.items() if c != 0}

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, valuation: dict) -> Fraction:
        return sum(
            (c * as_fraction(valuation[s]) for s, c in self.coeffs.items()),
            Fraction(0),
        )

    def vector(self, params) -> tuple:
        return tuple(self.coeffs.get(p, Fraction(0)) for p in params)

    def __eq__(self, other):
        return isinstance(other, LinearForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for s, c in sorted(self.coeffs.items(), key=lambda t: t[0].name):
            if c == 1:
                parts.append(f"+ {s.name}")
            elif c == -1:
                parts.append(f"- {s.name}")
            elif c > 0:
                parts.append(f"+ {c}*{s.name}")
            else:
                parts.append(f"- {-c}*{s.name}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    __repr__ = __str__


def _int_row(row):
    """Scale a rational row to a content-free integer row."""
    denom = 1
    for v in row:
        f = as_fraction(v)
        denom = denom * f.denominator // gcd(denom, f.denominator)
    ints = [int(as_fraction(v) * denom) for v in row]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _strip(row):
    g = 0
    for v in row:
        g = gcd(g, abs(v))
    if g > 1:
        return [v // g for v in row]
    return row


def rref(rows, width: int):
    """Canonical reduced row echelon form.

    Returns (basis, pivots): `basis` is a tuple of tuples of Fractions with
    unit pivots and zeros above and below them, `pivots` the pivot columns.
    """
    mat = []
    seen = set()
    for row in rows:
        r = _int_row(row)
        if len(r) != width:
            raise ValueError("row width mismatch")
        if not any(r):
            continue
        for i, v in enumerate(r):
            if v:
                if v < 0:
                    r = [-x for x in r]
                break
        key = tuple(r)
        if key not in seen:
            seen.add(key)
            mat.append(r)
    pivots = []
    pivot_rows = []
    for row in mat:
        # eliminate against existing pivots, then adopt as a new pivot row
        for col, prow in zip(pivots, pivot_rows):
            v = row[col]
            if v:
                p = prow[col]
                g = gcd(abs(v), p)
                a, b = p // g, v // g
                row = [a * x - b * y for x, y in zip(row, prow)]
        if not any(row):
            continue
        row = _strip(row)
        col = next(i for i, v in enumerate(row) if v)
        if row[col] < 0:
            row = [-x for x in row]
        pivots.append(col)
        pivot_rows.append(row)
    # back-substitute above pivots
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    pivots = [pivots[i] for i in order]
    pivot_rows = [pivot_rows[i] for i in order]
    for i in range(len(pivot_rows) - 1, -1, -1):
        col = pivots[i]
        prow = pivot_rows[i]
        p = prow[col]
        for j in range(i):
            v = pivot_rows[j][col]
            if v:
                g = gcd(abs(v), p)
                a, b = p // g, v // g
                pivot_rows[j] = _strip(
                    [a * x - b * y for x, y in zip(pivot_rows[j], prow)]
                )
    basis = tuple(
        tuple(Fraction(v, row[col]) for v in row)
        for col, row in zip(pivots, pivot_rows)
    )
    return basis, tuple(pivots)


def nullspace(rows, width: int):
    """Canonical RREF basis of {v in Q^width : row . v = 0 for all rows}."""
    basis, pivots = rref(rows, width)
    free = [c for c in range(width) if c not in pivots]
    vectors = []
    for f in free:
        v = [Fraction(0)] * width
        v[f] = Fraction(1)
        for row, col in zip(basis, pivots):
            v[col] = -row[f]
        vectors.append(v)
    nb, _ = rref(vectors, width)
    return nb


class Subspace:
    """A linear subspace of Q^n in canonical RREF basis form."""

    __slots__ = ("ambient_dim", "basis", "_pivots")

    def __init__(self, ambient_dim: int, basis, pivots=None):
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", tuple(tuple(r) for r in basis))
        if pivots is None:
            pivots = tuple(
                next(i for i, v in enumerate(row) if v) for row in self.basis
            )
        object.__setattr__(self, "_pivots", tuple(pivots))

    def __setattr__(self, *_):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def from_rows(cls, rows, ambient_dim: int) -> "Subspace":
        basis, pivots = rref(rows, ambient_dim)
        return cls(ambient_dim, basis, pivots)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        eye = [
            tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)
        ]
        return cls(n, eye, tuple(range(n)))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, (), ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def is_zero(self) -> bool:
        return self.dim == 0

    def contains(self, vector) -> bool:
        v = [as_fraction(x) for x in vector]
        if len(v) != self.ambient_dim:
            raise ValueError("vector dimension mismatch")
        for row, col in zip(self.basis, self._pivots):
            c = v[col]
            if c:
                for i in range(self.ambient_dim):
                    v[i] -= c * row[i]
        return not any(v)

    def refine(self, constraint_rows) -> "Subspace":
        """Intersect with the nullspace of the given constraint rows."""
        if self.dim == 0:
            return self
        rows = [[as_fraction(x) for x in r] for r in constraint_rows]
        for r in rows:
            if len(r) != self.ambient_dim:
                raise ValueError("constraint dimension mismatch")
        reduced = [
            [
                sum((c * b for c, b in zip(r, brow)), Fraction(0))
                for brow in self.basis
            ]
            for r in rows
        ]
        coords = nullspace(reduced, self.dim)
        new_rows = [
            [
                sum((y * brow[j] for y, brow in zip(yrow, self.basis)), Fraction(0))
                for j in range(self.ambient_dim)
            ]
            for yrow in coords
        ]
        return Subspace.from_rows(new_rows, self.ambient_dim)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of Q^{self.ambient_dim})"


def solve_homogeneous(constraints, params) -> Subspace:
    """Common nullspace of linear forms over an ordered parameter list."""
    params = list(params)
    rows = [f.vector(params) for f in constraints if not f.is_zero()]
    if not rows:
        return Subspace.full(len(params))
    return Subspace(len(params), nullspace(rows, len(params)))


def refine(space: Subspace, constraints, params) -> Subspace:
    """space ∩ nullspace(constraints); the result is contained in space."""
    params = list(params)
    if len(params) != space.ambient_dim:
        raise ValueError("parameter count does not match ambient dimension")
    rows = [f.vector(params) for f in constraints if not f.is_zero()]
    if not rows:
        return space
    return space.refine(rows)


def subspace_equal(a: Subspace, b: Subspace) -> bool:
    return a == b
