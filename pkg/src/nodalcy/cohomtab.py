"""Cohomology dimensions on P^n and on a quadric Q in P^n, and the ring R_Q.

``bott`` gives h^q(P^n, Omega^p(m)).  ``restricted_cohomology`` gives
h^q(Q, Omega^p_{P^n}(j)|_Q) from a five-case closed form (j < 0, j = 0,
j = 1, j = 2, j > 2); ``restricted_cohomology_les`` recomputes the same
numbers from the long exact sequence of

    0 -> Omega^p(j-2) -> Omega^p(j) -> Omega^p(j)|_Q -> 0

and serves as the cross-check.  ``quadric_cohomology_table`` reports
h^q(Omega_Q^k(j)) for k in {n-1, n-2}, q <= 2, marking entries the
available arguments do not pin down as undetermined (``None``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping

from .errors import DimensionMismatch, SchemaError, UnsupportedDimension

__all__ = [
    "binom",
    "bott",
    "euler_characteristic",
    "restricted_cohomology",
    "restricted_cohomology_les",
    "restricted_euler_characteristic",
    "CohomologyTable",
    "quadric_cohomology_table",
    "RQClass",
    "rq_basis",
    "rq_eta",
    "rq_generator",
    "rq_multiply",
    "parse_rq",
]


def binom(a: int, b: int) -> int:
    """Binomial coefficient, zero when a < 0, b < 0 or b > a."""
    if a < 0 or b < 0 or b > a:
        return 0
    return comb(a, b)


def _check_pq(n: int, p: int, q: int) -> None:
    if n < 0 or not 0 <= p <= n or not 0 <= q <= n:
        raise ValueError(f"need 0 <= p, q <= n, got n={n}, p={p}, q={q}")


def bott(n: int, p: int, q: int, m: int) -> int:
    """h^q(P^n, Omega^p(m)) by Bott's formula.

    >>> bott(2, 1, 0, 2)
    3
    """
    _check_pq(n, p, q)
    if p == q and m == 0:
        return 1
    if q == 0 and p < m:
        return binom(m - 1, p) * binom(m + n - p, m)
    if q == n and n - p < -m:
        # Serre dual of h^0(Omega^(n-p)(-m))
        return binom(-m - 1, n - p) * binom(-m + p, -m)
    return 0


def euler_characteristic(n: int, p: int, m: int) -> int:
    return sum((-1) ** q * bott(n, p, q, m) for q in range(n + 1))


def _check_restricted(n: int, p: int, q: int) -> None:
    if n < 5:
        raise UnsupportedDimension(f"quadric computations assume n >= 5, got n={n}")
    if not 0 <= p <= n or not 0 <= q <= n - 1:
        raise ValueError(f"need 0 <= p <= n and 0 <= q <= n-1, got p={p}, q={q}")


def restricted_cohomology(n: int, p: int, q: int, j: int) -> int:
    """h^q(Q, Omega^p_{P^n}(j)|_Q) for a smooth quadric Q in P^n, n >= 5."""
    _check_restricted(n, p, q)
    if j < 0:
        if q == n - 1 and j < p + 2 - n:
            return bott(n, p, n, j - 2) - bott(n, p, n, j)
        return 0
    if j == 0:
        if p == q <= n - 2:
            return 1
        # Serre-dual H^n terms of Omega^p(-2) feed h^(n-1) once p >= n-1
        if q == n - 1 and p == n - 1:
            return 1 + binom(n + 1, 2)
        if q == n - 1 and p == n:
            return binom(n + 2, 2) - 1
        return 0
    if j == 1:
        if (q == n - 1 and p == n) or (q == 0 and p == 0):
            return n + 1
        return 0
    if j == 2:
        if p == q == 0:
            return binom(n + 2, 2) - 1
        if q == p - 1:
            return binom(n + 1, 2) + 1 if p == 1 else 1
        return 0
    if q == 0 and j > p:
        return bott(n, p, 0, j) - bott(n, p, 0, j - 2)
    return 0


def restricted_cohomology_les(n: int, p: int, q: int, j: int) -> int:
    """Same quantity, read off the restriction long exact sequence.

    Multiplication by the quadric is injective on H^0 and (dually)
    surjective on H^n, and no other degree carries nonzero groups on both
    sides, so every connecting map has the largest rank it can.
    """
    _check_restricted(n, p, q)

    def mult_rank(k: int) -> int:
        if k > n:
            return 0
        return min(bott(n, p, k, j - 2), bott(n, p, k, j))

    coker = bott(n, p, q, j) - mult_rank(q)
    ker = (bott(n, p, q + 1, j - 2) - mult_rank(q + 1)) if q + 1 <= n else 0
    return coker + ker


def restricted_euler_characteristic(n: int, p: int, j: int) -> int:
    return sum((-1) ** q * restricted_cohomology(n, p, q, j) for q in range(n))


@dataclass
class CohomologyTable:
    """Dimensions h^q(sheaf(j)) keyed by (q, j); ``None`` means undetermined."""

    n: int
    family: str
    k: int
    q_range: tuple[int, int]
    j_range: tuple[int, int]
    entries: dict[tuple[int, int], int | None] = field(default_factory=dict)

    def __getitem__(self, key: tuple[int, int]) -> int | None:
        return self.entries[key]

    def nonzero(self) -> dict[tuple[int, int], int]:
        return {k: v for k, v in self.entries.items() if v}

    def undetermined(self) -> list[tuple[int, int]]:
        return sorted(k for k, v in self.entries.items() if v is None)

    def to_json(self) -> dict:
        return {
            "entries": [
                {"j": j, "p": self.k, "q": q, "value": "undetermined" if v is None else v}
                for (q, j), v in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            ],
            "family": self.family,
            "j_range": list(self.j_range),
            "k": self.k,
            "n": self.n,
            "q_range": list(self.q_range),
        }

    def to_csv(self) -> str:
        lines = ["p,q,j,value"]
        for (q, j), v in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            lines.append(f"{self.k},{q},{j},{'undetermined' if v is None else v}")
        return "\n".join(lines) + "\n"


def _omega_top(n: int, q: int, j: int) -> int:
    # Omega_Q^(n-1) = K_Q = O_Q(1-n), and O_Q(t) = Omega^0_{P^n}(t)|_Q
    return restricted_cohomology(n, 0, q, j - (n - 1))


def _omega_sub(n: int, q: int, t: int) -> int | None:
    """h^q(Omega_Q^(n-2)(t)) for q <= 2 from the conormal sequence

        0 -> Omega_Q^(n-2)(t) -> Omega^(n-1)_{P^n}(t+2)|_Q -> Omega_Q^(n-1)(t+2) -> 0.
    """
    j = t + 2
    mid0 = restricted_cohomology(n, n - 1, 0, j)
    top0 = _omega_top(n, 0, j)
    mid1 = restricted_cohomology(n, n - 1, 1, j)
    mid2 = restricted_cohomology(n, n - 1, 2, j)
    top1 = _omega_top(n, 1, j)
    if q == 2:
        return 0 if top1 == 0 and mid2 == 0 else None
    if mid1:
        return None
    if mid0 == 0 or top0 == 0:
        r = 0
    elif j == n and mid0 == top0 == n + 1:
        # H^0(T(-1)) -> H^0(O_Q(1)) is the isomorphism induced by the nondegenerate form
        r = n + 1
    else:
        return None
    return mid0 - r if q == 0 else top0 - r


def quadric_cohomology_table(n: int, k: int, jmin: int, jmax: int) -> CohomologyTable:
    """h^q(Q, Omega_Q^k(j)) for q = 0, 1, 2 and jmin <= j <= jmax."""
    if n < 5 or n % 2 == 0:
        raise UnsupportedDimension(f"quadric table needs odd n >= 5, got n={n}")
    if k not in (n - 1, n - 2):
        raise ValueError(f"k must be n-1 or n-2, got k={k}")
    if jmin > jmax:
        raise ValueError("jmin must not exceed jmax")
    table = CohomologyTable(n, "omega_Q", k, (0, 2), (jmin, jmax))
    for j in range(jmin, jmax + 1):
        for q in range(3):
            if k == n - 1:
                table.entries[(q, j)] = _omega_top(n, q, j)
            elif j > n - 2:
                table.entries[(q, j)] = None
            else:
                table.entries[(q, j)] = _omega_sub(n, q, j)
    return table


# --- the ring R_Q -----------------------------------------------------------

def rq_basis(n: int) -> list[str]:
    """Canonical basis labels: 1, eta, ..., eta^(m-1), A, B, eta^(m+1), ..., eta^(n-1)."""
    _check_rq(n)
    m = (n - 1) // 2
    labels = []
    for d in range(n):
        if d == m:
            labels += ["A", "B"]
        elif d == 0:
            labels.append("1")
        elif d == 1:
            labels.append("eta")
        else:
            labels.append(f"eta^{d}")
    return labels


def _check_rq(n: int) -> None:
    if n < 3 or n % 2 == 0:
        raise UnsupportedDimension(f"R_Q needs odd n >= 3, got n={n}")


def _label_degree(label: str, m: int) -> int:
    if label in ("A", "B"):
        return m
    if label == "1":
        return 0
    if label == "eta":
        return 1
    return int(label[4:])


def _eta_label(d: int) -> str:
    return "1" if d == 0 else "eta" if d == 1 else f"eta^{d}"


@dataclass(frozen=True)
class RQClass:
    """Element of R_Q for dim Q = n - 1 = 2m.

    ``undetermined`` is the coefficient of the product A*A, which the
    relations eta^m = A - B and eta(A + B) = 0 leave free.  (They do force
    B*B = A*A and A*B = A*A - eta^(n-1)/2.)
    """

    n: int
    coeffs: tuple[tuple[str, Fraction], ...]
    undetermined: Fraction = Fraction(0)

    @classmethod
    def make(cls, n: int, coeffs: Mapping[str, object] | None = None, undetermined=0) -> "RQClass":
        labels = rq_basis(n)
        coeffs = dict(coeffs or {})
        bad = set(coeffs) - set(labels)
        if bad:
            raise SchemaError(f"unknown basis labels {sorted(bad)} for n={n}")
        vals = tuple((lab, Fraction(coeffs[lab])) for lab in labels if lab in coeffs and Fraction(coeffs[lab]))
        return cls(n, vals, Fraction(undetermined))

    @property
    def determined(self) -> bool:
        return self.undetermined == 0

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.coeffs)

    def __add__(self, other: "RQClass") -> "RQClass":
        _same(self, other)
        d = self.as_dict()
        for lab, c in other.coeffs:
            d[lab] = d.get(lab, 0) + c
        return RQClass.make(self.n, d, self.undetermined + other.undetermined)

    def __neg__(self) -> "RQClass":
        return RQClass.make(self.n, {lab: -c for lab, c in self.coeffs}, -self.undetermined)

    def __sub__(self, other: "RQClass") -> "RQClass":
        return self + (-other)

    def scale(self, c) -> "RQClass":
        c = Fraction(c)
        return RQClass.make(self.n, {lab: c * x for lab, x in self.coeffs}, c * self.undetermined)

    def __mul__(self, other):
        if isinstance(other, RQClass):
            return rq_multiply(self, other)
        return self.scale(other)

    __rmul__ = scale

    def is_zero(self) -> bool:
        return not self.coeffs and self.determined

    def __str__(self) -> str:
        parts = []
        for lab, c in self.coeffs:
            if lab == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(lab)
            elif c == -1:
                parts.append(f"-{lab}")
            else:
                parts.append(f"{c}*{lab}")
        if self.undetermined:
            parts.append(f"{self.undetermined}*[A*A]")
        return " + ".join(parts).replace("+ -", "- ") or "0"

    def to_json(self) -> dict:
        return {
            "coeffs": {lab: str(c) for lab, c in self.coeffs},
            "determined": self.determined,
            "n": self.n,
            "undetermined_coefficient": str(self.undetermined),
        }


def _same(a: RQClass, b: RQClass) -> None:
    if a.n != b.n:
        raise DimensionMismatch(f"R_Q classes for n={a.n} and n={b.n}")


def rq_generator(n: int, label: str) -> RQClass:
    return RQClass.make(n, {label: 1})


def rq_eta(n: int, k: int) -> RQClass:
    """eta^k, rewritten as A - B in the middle degree and 0 above n - 1."""
    _check_rq(n)
    m = (n - 1) // 2
    if k < 0:
        raise ValueError("negative powers of eta are not defined")
    if k > n - 1:
        return RQClass.make(n)
    if k == m:
        return RQClass.make(n, {"A": 1, "B": -1})
    return RQClass.make(n, {_eta_label(k): 1})


def _basis_product(n: int, x: str, y: str) -> tuple[dict[str, Fraction], Fraction]:
    m = (n - 1) // 2
    half = Fraction(1, 2)
    mid = {"A", "B"}
    if x in mid and y in mid:
        if x == y:
            return {}, Fraction(1)
        return {_eta_label(n - 1): -half}, Fraction(1)
    if x in mid or y in mid:
        ab, e = (x, y) if x in mid else (y, x)
        d = _label_degree(e, m)
        if d == 0:
            return {ab: Fraction(1)}, Fraction(0)
        if m + d > n - 1:
            return {}, Fraction(0)
        # eta*A = eta^(m+1)/2 and eta*B = -eta^(m+1)/2
        return {_eta_label(m + d): half if ab == "A" else -half}, Fraction(0)
    s = _label_degree(x, m) + _label_degree(y, m)
    if s > n - 1:
        return {}, Fraction(0)
    if s == m:
        return {"A": Fraction(1), "B": Fraction(-1)}, Fraction(0)
    return {_eta_label(s): Fraction(1)}, Fraction(0)


def rq_multiply(a: RQClass, b: RQClass) -> RQClass:
    """Product in R_Q; the result has ``determined=False`` when A*A survives."""
    _same(a, b)
    n = a.n
    out: dict[str, Fraction] = {}
    und = Fraction(0)
    for x, cx in a.coeffs:
        for y, cy in b.coeffs:
            terms, u = _basis_product(n, x, y)
            for lab, c in terms.items():
                out[lab] = out.get(lab, 0) + cx * cy * c
            und += cx * cy * u
    # A*A has top degree, so it only survives multiplication by scalars
    da, db = a.as_dict(), b.as_dict()
    und += a.undetermined * db.get("1", 0) + b.undetermined * da.get("1", 0)
    return RQClass.make(n, out, und)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|(eta(?:\^\d+)?)|([AB])|(.))")


def parse_rq(n: int, text: str) -> RQClass:
    """Parse an expression such as ``"1/2*eta^2 + A - (A+B)*eta"``."""
    tokens = []
    for num, eta, ab, other in _TOKEN.findall(text):
        if num:
            tokens.append(("num", Fraction(num)))
        elif eta:
            tokens.append(("eta", int(eta[4:]) if "^" in eta else 1))
        elif ab:
            tokens.append(("gen", ab))
        elif other.strip():
            if other not in "+-*()":
                raise SchemaError(f"unexpected character {other!r} in R_Q expression")
            tokens.append(("op", other))
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expr():
        val = term()
        while peek() in (("op", "+"), ("op", "-")):
            _, op = take()
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = factor()
        while peek() == ("op", "*"):
            take()
            val = val * factor()
        return val

    def factor():
        kind, v = take()
        if kind == "op" and v == "-":
            return -factor()
        if kind == "op" and v == "(":
            val = expr()
            if take() != ("op", ")"):
                raise SchemaError("unbalanced parentheses in R_Q expression")
            return val
        if kind == "num":
            return RQClass.make(n, {"1": v})
        if kind == "eta":
            return rq_eta(n, v)
        if kind == "gen":
            return rq_generator(n, v)
        raise SchemaError(f"unexpected token {v!r} in R_Q expression {text!r}")

    if not tokens:
        raise SchemaError("empty R_Q expression")
    result = expr()
    if pos != len(tokens):
        raise SchemaError(f"trailing input in R_Q expression {text!r}")
    return result
