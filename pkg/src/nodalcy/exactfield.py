"""Exact arithmetic in the cyclotomic field Q(zeta_N) and its prime-field images.

An element of Q(zeta_N) is stored as an integer coefficient vector of length
phi(N) together with one positive common denominator, in lowest terms.  The
vector is the unique remainder modulo the N-th cyclotomic polynomial in the
basis 1, zeta, ..., zeta^(phi(N)-1), so equality is plain tuple equality.

Rationals are :class:`fractions.Fraction` throughout.

>>> z = CyclotomicNumber.zeta(5)
>>> z + z**2 + z**3 + z**4
CyclotomicNumber(5, [-1, 0, 0, 0])
>>> z.inverse() == z**4
True
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import BadPrime, BadRoot, DivisionByZero, OrderMismatch, SchemaError

__all__ = [
    "CyclotomicNumber",
    "PrimeFieldElement",
    "cyclotomic_polynomial",
    "totient",
    "is_prime",
    "find_root_of_unity",
    "reduce_mod_p",
    "default_primes",
    "parse_cyclotomic",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    result, m, f = n, n, 2
    while f * f <= m:
        if m % f == 0:
            while m % f == 0:
                m //= f
            result -= result // f
        f += 1
    if m > 1:
        result -= result // m
    return result


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_exact_div(num: Sequence[int], den: Sequence[int]) -> list[int]:
    # den is monic up to sign; the division must leave no remainder
    num = list(num)
    lead = den[-1]
    q = [0] * (len(num) - len(den) + 1)
    for k in range(len(q) - 1, -1, -1):
        c, r = divmod(num[k + len(den) - 1], lead)
        if r:
            raise ArithmeticError("inexact polynomial division")
        q[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the n-th cyclotomic polynomial.

    Computed as ``(x^n - 1) / prod(Phi_d for d | n, d < n)`` by exact division.

    >>> cyclotomic_polynomial(6)
    (1, -1, 1)
    """
    if n < 1:
        raise ValueError(f"cyclotomic order must be positive, got {n}")
    num = [-1] + [0] * (n - 1) + [1]
    if n == 1:
        return tuple(num)
    den = [1]
    for d in range(1, n):
        if n % d == 0:
            den = _poly_mul(den, cyclotomic_polynomial(d))
    return tuple(_poly_exact_div(num, den))


@lru_cache(maxsize=None)
def _reduction_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Canonical integer vectors of x^k mod Phi_n for k = 0 .. n-1."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    rows: list[tuple[int, ...]] = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by x, then fold the overflow coefficient using the monic Phi_n
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(deg):
                cur[j] -= top * phi[j]
    return tuple(rows)


def _reduce(n: int, coeffs: Sequence[int]) -> list[int]:
    """Reduce an integer polynomial of any length to its canonical remainder."""
    deg = totient(n)
    folded = [0] * n
    for k, c in enumerate(coeffs):
        if c:
            folded[k % n] += c
    out = folded[:deg]
    table = _reduction_table(n)
    for k in range(deg, n):
        c = folded[k]
        if c:
            row = table[k]
            for j in range(deg):
                out[j] += c * row[j]
    return out


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"not a rational literal: {x!r}") from exc
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


class CyclotomicNumber:
    """Immutable element of Q(zeta_N).

    Construct from a coefficient sequence of any length (it is reduced modulo
    Phi_N), or use :meth:`zeta`, :meth:`from_rational`.  ``coeffs`` returns the
    canonical Fraction vector of length phi(N).
    """

    __slots__ = ("order", "_num", "_den", "_hash")

    def __init__(self, order: int, coeffs: Iterable = (0,)):
        if order < 1:
            raise ValueError(f"cyclotomic order must be positive, got {order}")
        fr = [_as_fraction(c) for c in coeffs]
        den = 1
        for f in fr:
            den = den * f.denominator // math.gcd(den, f.denominator)
        nums = [f.numerator * (den // f.denominator) for f in fr]
        self._set(order, _reduce(order, nums), den)

    def _set(self, order: int, nums: list[int], den: int) -> None:
        g = math.gcd(den, *nums)
        if g > 1:
            nums = [c // g for c in nums]
            den //= g
        self.order = order
        self._num = tuple(nums)
        self._den = den
        self._hash = None

    @classmethod
    def _raw(cls, order: int, nums: list[int], den: int) -> "CyclotomicNumber":
        obj = cls.__new__(cls)
        obj._set(order, nums, den)
        return obj

    @classmethod
    def zeta(cls, order: int, k: int = 1) -> "CyclotomicNumber":
        """The root of unity zeta_N^k in canonical form (k may be negative)."""
        return cls._raw(order, list(_reduction_table(order)[k % order]), 1)

    @classmethod
    def from_rational(cls, order: int, q) -> "CyclotomicNumber":
        q = _as_fraction(q)
        nums = [0] * totient(order)
        nums[0] = q.numerator
        return cls._raw(order, nums, q.denominator)

    @classmethod
    def zero(cls, order: int) -> "CyclotomicNumber":
        return cls._raw(order, [0] * totient(order), 1)

    @classmethod
    def one(cls, order: int) -> "CyclotomicNumber":
        return cls.from_rational(order, 1)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def degree(self) -> int:
        return len(self._num)

    def is_zero(self) -> bool:
        return not any(self._num)

    def __bool__(self) -> bool:
        return any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def _coerce(self, other) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.order != self.order:
                raise OrderMismatch(
                    f"cannot combine Q(zeta_{self.order}) with Q(zeta_{other.order})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.from_rational(self.order, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        da, db = self._den, other._den
        if da == db:
            nums = [x + y for x, y in zip(self._num, other._num)]
            return CyclotomicNumber._raw(self.order, nums, da)
        nums = [x * db + y * da for x, y in zip(self._num, other._num)]
        return CyclotomicNumber._raw(self.order, nums, da * db)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber._raw(self.order, [-x for x in self._num], self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicNumber._raw(self.order, [x * other for x in self._num], self._den)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._num, other._num
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CyclotomicNumber._raw(self.order, _reduce(self.order, prod), self._den * other._den)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        """Multiplicative inverse via the extended Euclidean algorithm against Phi_N."""
        if self.is_zero():
            raise DivisionByZero("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CyclotomicNumber.from_rational(self.order, Fraction(self._den, self._num[0]))
        modulus = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        a = _trim([Fraction(c) for c in self._num])
        # invariant: s * a == r (mod Phi_N)
        r0, r1 = modulus, a
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or r1[0] == 0:
            q, rem = _qdivmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _qsub(s0, _qmul(q, s1))
        c = r1[0]
        inv = [x / c for x in s1]
        res = CyclotomicNumber(self.order, inv)
        return res * Fraction(self._den)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicNumber.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self._num[0], self._den) == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self.order == other.order and self._den == other._den and self._num == other._num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.order, self._num, self._den))
        return self._hash

    def __repr__(self):
        return f"CyclotomicNumber({self.order}, {[str(c) for c in self.coeffs]})".replace("'", "")

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if k == 0 else f"({c})*z^{k}")
        return " + ".join(terms) or "0"

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [_frac_str(c) for c in self.coeffs]}


def _frac_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def _trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _qmul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _qsub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _qdivmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    if len(a) < len(b):
        return [Fraction(0)], _trim(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(q) - 1, -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for j, d in enumerate(b):
                a[k + j] -= c * d
    return _trim(q), _trim(a[: len(b) - 1] or [Fraction(0)])


def parse_cyclotomic(obj, order: int) -> CyclotomicNumber:
    """Read a field element from its JSON form.

    Accepts ``{"order": N, "coeffs": [...]}``, the shorthand ``"z^k"`` (also
    ``"-z^k"`` and ``"z"``), a rational literal string, an integer or a Fraction.
    """
    if isinstance(obj, CyclotomicNumber):
        if obj.order != order:
            raise OrderMismatch(f"expected order {order}, got {obj.order}")
        return obj
    if isinstance(obj, bool):
        raise SchemaError("booleans are not field elements")
    if isinstance(obj, (int, Fraction)):
        return CyclotomicNumber.from_rational(order, obj)
    if isinstance(obj, str):
        s = obj.replace(" ", "")
        sign = 1
        if s.startswith("-"):
            sign, s = -1, s[1:]
        if s == "z" or s.startswith("z^"):
            try:
                k = int(s[2:]) if s != "z" else 1
            except ValueError as exc:
                raise SchemaError(f"bad root-of-unity shorthand {obj!r}") from exc
            z = CyclotomicNumber.zeta(order, k)
            return -z if sign < 0 else z
        return CyclotomicNumber.from_rational(order, sign * _as_fraction(s))
    if isinstance(obj, dict):
        if set(obj) != {"order", "coeffs"}:
            raise SchemaError(f"cyclotomic object needs exactly 'order' and 'coeffs', got {sorted(obj)}")
        if obj["order"] != order:
            raise OrderMismatch(f"expected order {order}, got {obj['order']}")
        coeffs = obj["coeffs"]
        if not isinstance(coeffs, list) or len(coeffs) != totient(order):
            raise SchemaError(f"coeffs must be a list of length phi({order}) = {totient(order)}")
        return CyclotomicNumber(order, coeffs)
    raise SchemaError(f"cannot parse field element from {type(obj).__name__}")


class PrimeFieldElement:
    """Element of GF(p); a thin value type used for reporting and tests.

    The rank kernels work on bare ints for speed.
    """

    __slots__ = ("modulus", "value")

    def __init__(self, modulus: int, value: int):
        self.modulus = modulus
        self.value = value % modulus

    def _wrap(self, other) -> int:
        if isinstance(other, PrimeFieldElement):
            if other.modulus != self.modulus:
                raise OrderMismatch("prime field moduli differ")
            return other.value
        return other % self.modulus

    def __add__(self, other):
        return PrimeFieldElement(self.modulus, self.value + self._wrap(other))

    __radd__ = __add__

    def __sub__(self, other):
        return PrimeFieldElement(self.modulus, self.value - self._wrap(other))

    def __mul__(self, other):
        return PrimeFieldElement(self.modulus, self.value * self._wrap(other))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return PrimeFieldElement(self.modulus, pow(self.value, k, self.modulus))

    def inverse(self):
        if self.value == 0:
            raise DivisionByZero(f"zero has no inverse mod {self.modulus}")
        return PrimeFieldElement(self.modulus, pow(self.value, -1, self.modulus))

    def __truediv__(self, other):
        return self * PrimeFieldElement(self.modulus, self._wrap(other)).inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other % self.modulus
        if isinstance(other, PrimeFieldElement):
            return self.modulus == other.modulus and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.modulus, self.value))

    def __repr__(self):
        return f"PrimeFieldElement({self.modulus}, {self.value})"

    def multiplicative_order(self) -> int:
        if self.value == 0:
            return 0
        p1 = self.modulus - 1
        order = p1
        for f in _prime_factors(p1):
            while order % f == 0 and pow(self.value, order // f, self.modulus) == 1:
                order //= f
        return order


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _check_prime(p: int, order: int) -> None:
    if not is_prime(p):
        raise BadPrime(f"{p} is not prime", prime=p)
    if (p - 1) % order:
        raise BadPrime(f"{p} is not 1 mod {order}", prime=p)


def find_root_of_unity(order: int, p: int) -> PrimeFieldElement:
    """Smallest element of GF(p) with multiplicative order exactly ``order``."""
    _check_prime(p, order)
    for g in range(1, p):
        x = PrimeFieldElement(p, g)
        if x.multiplicative_order() == order:
            return x
    raise BadRoot(f"no element of order {order} mod {p}")  # pragma: no cover


def default_primes(order: int, count: int = 2, start: int = 10007) -> list[int]:
    """The first ``count`` primes p > start with p = 1 (mod order)."""
    out = []
    p = start - (start - 1) % order
    while len(out) < count:
        if p > start and is_prime(p):
            out.append(p)
        p += order
    return out


def reduce_mod_p(a: CyclotomicNumber, p: int, zeta_image: PrimeFieldElement | int) -> PrimeFieldElement:
    """Image of ``a`` under the ring map Z_(p)[zeta_N] -> GF(p), zeta_N -> zeta_image.

    Raises BadPrime if p is not 1 mod N or a denominator vanishes mod p, and
    BadRoot if ``zeta_image`` does not have order exactly N.
    """
    _check_prime(p, a.order)
    z = zeta_image if isinstance(zeta_image, PrimeFieldElement) else PrimeFieldElement(p, zeta_image)
    if z.modulus != p:
        raise BadRoot(f"zeta image lives mod {z.modulus}, not mod {p}")
    if z.multiplicative_order() != a.order:
        raise BadRoot(f"{z.value} does not have order {a.order} mod {p}")
    return PrimeFieldElement(p, reduce_mod_p_int(a, p, z.value))


def reduce_mod_p_int(a: CyclotomicNumber, p: int, zeta: int) -> int:
    """Unchecked fast path of :func:`reduce_mod_p`; returns a bare int."""
    if a._den % p == 0:
        raise BadPrime(f"denominator {a._den} is divisible by {p}", prime=p)
    acc = 0
    for c in reversed(a._num):
        acc = (acc * zeta + c) % p
    return acc * pow(a._den, -1, p) % p
