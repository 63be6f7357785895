"""Sparse multivariate polynomials over Q(zeta_N) and projective points."""

from __future__ import annotations

from itertools import combinations_with_replacement
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import ArityMismatch, ChartNotValid, IndexOutOfRange, OrderMismatch, SchemaError
from .exactfield import CyclotomicNumber, parse_cyclotomic

__all__ = [
    "Monomial",
    "MultiPoly",
    "ProjectivePoint",
    "monomial_basis",
    "evaluate",
    "partial_derivative",
    "hessian_matrix",
]

Monomial = tuple  # exponent vector of length num_vars


def monomial_basis(k: int, d: int) -> list[tuple[int, ...]]:
    """All exponent vectors of length ``k`` and total degree ``d``.

    Ordered lexicographically with x0 largest, so x0^d comes first and the
    exponent tuples are strictly decreasing under Python tuple comparison.

    >>> monomial_basis(2, 1)
    [(1, 0), (0, 1)]
    """
    if k < 1 or d < 0:
        raise ValueError(f"need k >= 1 and d >= 0, got k={k}, d={d}")
    out = []
    for combo in combinations_with_replacement(range(k), d):
        e = [0] * k
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    assert len(out) == comb(d + k - 1, k - 1)
    return out


class ProjectivePoint:
    """A point of P^(k-1) with coordinates in Q(zeta_N), scaled so the first
    nonzero coordinate is 1."""

    __slots__ = ("coords", "order")

    def __init__(self, coords: Sequence[CyclotomicNumber]):
        coords = list(coords)
        if not coords:
            raise ValueError("a projective point needs at least one coordinate")
        order = coords[0].order
        if any(c.order != order for c in coords):
            raise OrderMismatch("coordinates live in different cyclotomic fields")
        lead = next((c for c in coords if not c.is_zero()), None)
        if lead is None:
            raise ValueError("all coordinates are zero")
        if lead != 1:
            inv = lead.inverse()
            coords = [c * inv for c in coords]
        self.coords = tuple(coords)
        self.order = order

    @classmethod
    def from_values(cls, order: int, values: Iterable) -> "ProjectivePoint":
        return cls([parse_cyclotomic(v, order) for v in values])

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "[" + " : ".join(str(c) for c in self.coords) + "]"

    def default_chart(self) -> int:
        """Index of the last nonzero coordinate."""
        return max(i for i, c in enumerate(self.coords) if not c.is_zero())

    def to_json(self) -> list:
        return [c.to_json() for c in self.coords]


class MultiPoly:
    """Sparse polynomial in ``num_vars`` variables over Q(zeta_N).

    ``terms`` maps exponent tuples to nonzero coefficients; treat it as
    read-only.
    """

    __slots__ = ("num_vars", "field_order", "terms")

    def __init__(self, num_vars: int, field_order: int, terms: Mapping | Iterable = ()):
        self.num_vars = num_vars
        self.field_order = field_order
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[int, ...], CyclotomicNumber] = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != num_vars or any(x < 0 for x in e):
                raise SchemaError(f"bad exponent vector {e} for {num_vars} variables")
            c = parse_cyclotomic(c, field_order)
            acc[e] = acc[e] + c if e in acc else c
        self.terms = {e: c for e, c in acc.items() if not c.is_zero()}

    @classmethod
    def monomial(cls, exponents: Sequence[int], field_order: int, coeff=1) -> "MultiPoly":
        return cls(len(exponents), field_order, {tuple(exponents): coeff})

    @classmethod
    def variable(cls, i: int, num_vars: int, field_order: int) -> "MultiPoly":
        e = [0] * num_vars
        e[i] = 1
        return cls.monomial(e, field_order)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        return len(degs) == 1 and (d is None or degs == {d})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "MultiPoly") -> None:
        if other.num_vars != self.num_vars:
            raise ArityMismatch(f"{self.num_vars} vs {other.num_vars} variables")
        if other.field_order != self.field_order:
            raise OrderMismatch(f"Q(zeta_{self.field_order}) vs Q(zeta_{other.field_order})")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        return MultiPoly(self.num_vars, self.field_order, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.num_vars, self.field_order, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return MultiPoly(self.num_vars, self.field_order, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        out = []
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out.append((tuple(a + b for a, b in zip(e1, e2)), c1 * c2))
        return MultiPoly(self.num_vars, self.field_order, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        out = MultiPoly.monomial([0] * self.num_vars, self.field_order)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self.num_vars, self.field_order, self.terms) == (other.num_vars, other.field_order, other.terms)

    def __hash__(self):
        return hash((self.num_vars, self.field_order, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)

    def coefficient(self, exponents: Sequence[int]) -> CyclotomicNumber:
        return self.terms.get(tuple(exponents), CyclotomicNumber.zero(self.field_order))

    def to_json(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "cyclotomic_order": self.field_order,
            "terms": [
                {"exponents": list(e), "coeff": c.to_json()}
                for e, c in sorted(self.terms.items(), reverse=True)
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "MultiPoly":
        try:
            k = obj["num_vars"]
            order = obj["cyclotomic_order"]
            raw = obj["terms"]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"polynomial JSON missing field: {exc}") from exc
        if not isinstance(k, int) or k < 1 or not isinstance(order, int) or order < 1:
            raise SchemaError("num_vars and cyclotomic_order must be positive integers")
        if not isinstance(raw, list):
            raise SchemaError("'terms' must be a list")
        items = []
        for t in raw:
            if not isinstance(t, Mapping) or "exponents" not in t or "coeff" not in t:
                raise SchemaError(f"bad term {t!r}")
            if not isinstance(t["exponents"], list):
                raise SchemaError(f"bad exponents in {t!r}")
            items.append((t["exponents"], t["coeff"]))
        return cls(k, order, items)


def _power_table(coords: Sequence[CyclotomicNumber], max_exp: int) -> list[list[CyclotomicNumber]]:
    table = []
    for c in coords:
        row = [CyclotomicNumber.one(c.order)]
        for _ in range(max_exp):
            row.append(row[-1] * c)
        table.append(row)
    return table


def _eval_with_table(terms, table, order: int) -> CyclotomicNumber:
    total = CyclotomicNumber.zero(order)
    for e, c in terms:
        val = c
        for i, k in enumerate(e):
            if k:
                val = val * table[i][k]
        total = total + val
    return total


def evaluate(f: MultiPoly, p: ProjectivePoint | Sequence[CyclotomicNumber]) -> CyclotomicNumber:
    """Value of ``f`` at the (canonical representative of the) point ``p``."""
    coords = p.coords if isinstance(p, ProjectivePoint) else tuple(p)
    if len(coords) != f.num_vars:
        raise ArityMismatch(f"polynomial in {f.num_vars} variables evaluated at a {len(coords)}-vector")
    if f.is_zero():
        return CyclotomicNumber.zero(f.field_order)
    table = _power_table(coords, f.degree())
    return _eval_with_table(f.terms.items(), table, f.field_order)


def partial_derivative(f: MultiPoly, i: int) -> MultiPoly:
    if not 0 <= i < f.num_vars:
        raise IndexOutOfRange(f"variable index {i} out of range for {f.num_vars} variables")
    out = {}
    for e, c in f.terms.items():
        if e[i]:
            e2 = list(e)
            e2[i] -= 1
            out[tuple(e2)] = c * e[i]
    return MultiPoly(f.num_vars, f.field_order, out)


def gradient(f: MultiPoly) -> list[MultiPoly]:
    return [partial_derivative(f, i) for i in range(f.num_vars)]


def hessian_matrix(f: MultiPoly, p: ProjectivePoint, chart: int | None = None) -> list[list[CyclotomicNumber]]:
    """Hessian of the dehomogenisation of ``f`` in the chart x_chart = 1 at ``p``.

    Rows and columns run over the remaining variables in their natural
    order.  ``chart`` defaults to the last nonzero coordinate of ``p``.
    """
    if len(p) != f.num_vars:
        raise ArityMismatch(f"polynomial in {f.num_vars} variables, point with {len(p)} coordinates")
    if chart is None:
        chart = p.default_chart()
    if not 0 <= chart < f.num_vars:
        raise IndexOutOfRange(f"chart index {chart} out of range")
    if p[chart].is_zero():
        raise ChartNotValid(f"coordinate {chart} of the point is zero")
    inv = p[chart].inverse()
    affine = [c * inv for c in p.coords]
    idx = [i for i in range(f.num_vars) if i != chart]
    firsts = {i: partial_derivative(f, i) for i in idx}
    H: list[list[CyclotomicNumber | None]] = [[None] * len(idx) for _ in idx]
    for a, i in enumerate(idx):
        for b in range(a, len(idx)):
            v = evaluate(partial_derivative(firsts[i], idx[b]), affine)
            H[a][b] = v
            H[b][a] = v
    return H  # type: ignore[return-value]
