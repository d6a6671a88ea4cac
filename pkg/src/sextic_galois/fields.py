"""Exact arithmetic in the three supported base-field families.

A field object (``Rationals``, ``QuadraticField`` or ``FiniteField``) plays
the role of a field descriptor and also carries the arithmetic.  Elements
are plain values:

* ``Rationals``: :class:`fractions.Fraction` (always in lowest terms),
* ``QuadraticField(d)``: :class:`QuadNumber` ``(u, v)`` meaning ``u + v*sqrt(d)``,
* ``FiniteField(p, k)``: an ``int`` in ``range(p**k)`` encoding the residue
  vector ``(c_0, ..., c_{k-1})`` as ``c_0 + c_1*p + ... + c_{k-1}*p**(k-1)``.

Besides field construction this module provides the membership tests
consumed by the classifier: :func:`is_square`, :func:`is_cube` and
:func:`contains_primitive_cube_root`.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterator, NamedTuple

from sympy import factorint, isprime

from .errors import InvalidField, ParseError, UnsupportedCharacteristic

# Finite fields up to this size answer root queries by table lookup.
EXHAUSTIVE_LIMIT = 10**6
# Finite fields up to this size get full log/antilog tables.
_LOG_TABLE_LIMIT = 1 << 16
# Finite fields up to this size get a full addition table.
_ADD_TABLE_LIMIT = 256

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ParseError(f"not an integer or rational literal: {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}") from None


class Field:
    """Operations shared by all field families; subclasses fill in the rest."""

    kind: str
    characteristic: int

    @property
    def order(self) -> int | None:
        return None

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def pow(self, x, e: int):
        if e < 0:
            x, e = self.inv(x), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            e >>= 1
        return result

    def is_zero(self, x) -> bool:
        return x == self.zero

    def eq(self, x, y) -> bool:
        return x == y

    def from_int(self, n: int):
        return self.from_fraction(Fraction(n))


@dataclass(frozen=True)
class Rationals(Field):
    kind = "Q"
    characteristic = 0

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def inv(self, x):
        return 1 / x

    def div(self, x, y):
        return x / y

    def pow(self, x, e):
        return x**e

    def is_zero(self, x):
        return x == 0

    def from_fraction(self, r):
        return Fraction(r)

    def parse(self, text: str) -> Fraction:
        return parse_rational(text)

    def format(self, x) -> str:
        return str(x)

    @property
    def spec(self) -> str:
        return "Q"

    def __str__(self):
        return "Q"


class QuadNumber(NamedTuple):
    """``u + v*sqrt(d)`` with rational ``u`` and ``v``; ``d`` lives on the field."""

    u: Fraction
    v: Fraction


@dataclass(frozen=True)
class QuadraticField(Field):
    d: int
    kind = "QuadExt"
    characteristic = 0

    def __post_init__(self):
        if self.d in (0, 1) or not _squarefree(self.d):
            raise InvalidField(f"d = {self.d} must be squarefree and not 0 or 1")

    @property
    def zero(self):
        return QuadNumber(Fraction(0), Fraction(0))

    @property
    def one(self):
        return QuadNumber(Fraction(1), Fraction(0))

    def add(self, x, y):
        return QuadNumber(x.u + y.u, x.v + y.v)

    def sub(self, x, y):
        return QuadNumber(x.u - y.u, x.v - y.v)

    def neg(self, x):
        return QuadNumber(-x.u, -x.v)

    def mul(self, x, y):
        return QuadNumber(x.u * y.u + self.d * x.v * y.v, x.u * y.v + x.v * y.u)

    def conj(self, x):
        return QuadNumber(x.u, -x.v)

    def norm(self, x) -> Fraction:
        return x.u * x.u - self.d * x.v * x.v

    def inv(self, x):
        n = self.norm(x)
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt d)")
        return QuadNumber(x.u / n, -x.v / n)

    def is_zero(self, x):
        return x.u == 0 and x.v == 0

    def from_fraction(self, r):
        return QuadNumber(Fraction(r), Fraction(0))

    def parse(self, text: str) -> QuadNumber:
        """Parse ``u+v*s`` style literals (``s`` is the formal square root)."""
        s = text.replace(" ", "")
        if not s:
            raise ParseError("empty coefficient")
        terms = re.findall(r"[+-]?[^+-]+", s)
        if "".join(terms) != s:
            raise ParseError(f"malformed quadratic literal: {text!r}")
        u = v = Fraction(0)
        for term in terms:
            sign = -1 if term.startswith("-") else 1
            body = term.lstrip("+-")
            if body == "s":
                v += sign
            elif body.endswith("*s"):
                v += sign * parse_rational(body[:-2])
            else:
                u += sign * parse_rational(body)
        return QuadNumber(u, v)

    def format(self, x) -> str:
        if x.v == 0:
            return str(x.u)
        if x.u == 0:
            return f"{x.v}*s"
        sign = "+" if x.v > 0 else "-"
        return f"{x.u}{sign}{abs(x.v)}*s"

    @property
    def spec(self) -> str:
        return f"Q(sqrt {self.d})"

    def __str__(self):
        return self.spec


@dataclass(frozen=True)
class FiniteField(Field):
    """F_q with q = p**k, elements encoded as integers in ``range(q)``.

    ``modulus`` lists the monic defining polynomial lowest degree first;
    for k = 1 it is ``(0, 1)``.  Tables are built on construction for small q.
    """

    p: int
    k: int = 1
    modulus: tuple[int, ...] = (0, 1)
    _exp: list = field(default=None, init=False, repr=False, compare=False)
    _log: list = field(default=None, init=False, repr=False, compare=False)
    _add: list = field(default=None, init=False, repr=False, compare=False)
    kind = "Finite"

    def __post_init__(self):
        if len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
            raise InvalidField("modulus must be monic of degree k")
        if self.k > 1 and self.q <= _LOG_TABLE_LIMIT:
            self._build_tables()

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def order(self) -> int:
        return self.q

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    # -- vector encoding -------------------------------------------------
    def vector(self, x: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            x, c = divmod(x, self.p)
            out.append(c)
        return tuple(out)

    def from_vector(self, vec) -> int:
        vec = list(vec)
        if len(vec) > self.k:
            raise ValueError("vector longer than the extension degree")
        code = 0
        for c in reversed(vec):
            code = code * self.p + c % self.p
        return code

    def _vec_add(self, x, y):
        p, out, scale = self.p, 0, 1
        while x or y:
            x, c1 = divmod(x, p)
            y, c2 = divmod(y, p)
            out += ((c1 + c2) % p) * scale
            scale *= p
        return out

    def _vec_mul(self, x, y):
        p, k = self.p, self.k
        a, b = self.vector(x), self.vector(y)
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        mod = self.modulus
        for top in range(2 * k - 2, k - 1, -1):
            c = prod[top] % p
            if c:
                for i in range(k):
                    prod[top - k + i] -= c * mod[i]
            prod[top] = 0
        return self.from_vector(prod[:k])

    def _build_tables(self):
        q = self.q
        g = _find_generator(self, q)
        exp = [0] * (2 * q)
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._vec_mul(x, g)
        for i in range(q - 1, 2 * q):
            exp[i] = exp[i - (q - 1)]
        object.__setattr__(self, "_exp", exp)
        object.__setattr__(self, "_log", log)
        if q <= _ADD_TABLE_LIMIT:
            add = [self._vec_add(x, y) for x in range(q) for y in range(q)]
            object.__setattr__(self, "_add", add)

    # -- arithmetic ------------------------------------------------------
    def add(self, x, y):
        if self.k == 1:
            return (x + y) % self.p
        if self._add is not None:
            return self._add[x * self.q + y]
        return self._vec_add(x, y)

    def neg(self, x):
        if self.k == 1:
            return -x % self.p
        return self.from_vector(-c for c in self.vector(x))

    def sub(self, x, y):
        if self.k == 1:
            return (x - y) % self.p
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if self.k == 1:
            return x * y % self.p
        if not x or not y:
            return 0
        if self._log is not None:
            return self._exp[self._log[x] + self._log[y]]
        return self._vec_mul(x, y)

    def inv(self, x):
        if not x:
            raise ZeroDivisionError(f"inverse of zero in {self.spec}")
        if self.k == 1:
            return pow(x, -1, self.p)
        if self._log is not None:
            return self._exp[(self.q - 1 - self._log[x]) % (self.q - 1)]
        return super().pow(x, self.q - 2)

    def pow(self, x, e):
        if self.k == 1:
            if not x:
                if e < 0:
                    raise ZeroDivisionError("zero to a negative power")
                return 0 if e else 1
            return pow(x, e % (self.p - 1), self.p)
        if self._log is not None:
            if not x:
                if e < 0:
                    raise ZeroDivisionError("zero to a negative power")
                return 0 if e else 1
            return self._exp[(self._log[x] * e) % (self.q - 1)]
        if x and e < 0:
            e %= self.q - 1
        return super().pow(x, e)

    def is_zero(self, x):
        return x == 0

    def from_int(self, n: int):
        return n % self.p

    def from_fraction(self, r):
        r = Fraction(r)
        if r.denominator % self.p == 0:
            raise ZeroDivisionError(f"{r} has no image in {self.spec}")
        return r.numerator * pow(r.denominator, -1, self.p) % self.p

    def elements(self) -> Iterator[int]:
        return iter(range(self.q))

    def parse(self, text: str) -> int:
        t = text.strip()
        if t.startswith("[") and t.endswith("]"):
            parts = [s for s in t[1:-1].split(",") if s.strip()]
            if not parts:
                raise ParseError(f"empty vector literal: {text!r}")
            if len(parts) > self.k:
                raise ParseError(f"vector {text!r} is longer than k = {self.k}")
            return self.from_vector(int(parse_rational(s)) for s in parts)
        try:
            return self.from_fraction(parse_rational(t))
        except ZeroDivisionError as exc:
            raise ParseError(str(exc)) from None

    def format(self, x) -> str:
        if self.k == 1:
            return str(x)
        return "[" + ",".join(map(str, self.vector(x))) + "]"

    @property
    def spec(self) -> str:
        return f"F{{{self.p}}}" if self.k == 1 else f"F{{{self.p}^{self.k}}}"

    def __str__(self):
        return self.spec


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(abs(n)).values())


def _find_generator(K: FiniteField, q: int) -> int:
    primes = list(factorint(q - 1))
    for g in range(1, q):
        if all(_slow_pow(K, g, (q - 1) // r) != 1 for r in primes):
            return g
    raise InvalidField(f"{K.modulus} does not define a field")  # reducible modulus


def _slow_pow(K: FiniteField, x: int, e: int) -> int:
    result = 1
    while e:
        if e & 1:
            result = K._vec_mul(result, x)
        x = K._vec_mul(x, x)
        e >>= 1
    return result


# -- construction ------------------------------------------------------------

_SPEC_RE = [
    (re.compile(r"^Q$"), "Q"),
    (re.compile(r"^Q\(\s*sqrt\s*([+-]?\d+)\s*\)$"), "QuadExt"),
    (re.compile(r"^F\{\s*(\d+)\s*(?:\^\s*(\d+)\s*)?\}$"), "Finite"),
]


@functools.lru_cache(maxsize=None)
def make_field(spec: str) -> Field:
    """Build a field from ``Q``, ``Q(sqrt D)``, ``F{p}`` or ``F{p^k}``.

    For ``k > 1`` the modulus is the lexicographically smallest monic
    irreducible of degree ``k`` (coefficients compared from x^(k-1) down to
    the constant term), so the same string always yields the same field.
    """
    text = spec.strip()
    if re.fullmatch(r"F\d+(\^\d+)?", text):  # shorthand F5, F5^2
        text = "F{" + text[1:] + "}"
    for pattern, kind in _SPEC_RE:
        m = pattern.match(text)
        if not m:
            continue
        if kind == "Q":
            return Rationals()
        if kind == "QuadExt":
            return QuadraticField(int(m.group(1)))
        p = int(m.group(1))
        k = int(m.group(2)) if m.group(2) else 1
        return finite_field(p, k)
    raise ParseError(f"unrecognised field specification: {spec!r}")


@functools.lru_cache(maxsize=None)
def finite_field(p: int, k: int = 1) -> FiniteField:
    if not isprime(p):
        raise InvalidField(f"{p} is not prime")
    if k < 1:
        raise InvalidField("extension degree must be positive")
    if p == 2:
        raise UnsupportedCharacteristic("characteristic 2 is not supported")
    if k == 1:
        return FiniteField(p)
    return FiniteField(p, k, smallest_irreducible(p, k))


@functools.lru_cache(maxsize=None)
def prime_field(p: int) -> FiniteField:
    """F_p for any prime, including 2 (used only by reduction mod p)."""
    if not isprime(p):
        raise InvalidField(f"{p} is not prime")
    return FiniteField(p)


def field_of_order(q: int) -> FiniteField:
    """The field with q elements, q an odd prime power."""
    fac = factorint(q)
    if q < 2 or len(fac) != 1:
        raise InvalidField(f"{q} is not a prime power")
    ((p, k),) = fac.items()
    return finite_field(p, k)


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    from .poly import Polynomial, factor_degrees

    Fp = prime_field(p)
    for t in range(p**k):
        high_first = [(t // p**i) % p for i in reversed(range(k))]
        coeffs = tuple(reversed(high_first)) + (1,)
        if coeffs[0] == 0:
            continue
        if factor_degrees(Polynomial(coeffs, Fp)) == [k]:
            return coeffs
    raise InvalidField(f"no irreducible polynomial of degree {k} over F_{p}")


# -- membership tests ----------------------------------------------------------


def contains_primitive_cube_root(K: Field) -> bool:
    """Whether K contains a primitive cube root of unity.

    Characteristic-3 fields answer False: their only cube root of unity is 1.
    """
    if isinstance(K, Rationals):
        return False
    if isinstance(K, QuadraticField):
        return K.d == -3
    if K.p == 3:
        return False
    return K.q % 3 == 1


def is_square(x, K: Field):
    """Return some s with s*s == x, or None when x is not a square in K."""
    if K.is_zero(x):
        return K.zero
    if isinstance(K, Rationals):
        s = _rational_root(x, 2)
    elif isinstance(K, QuadraticField):
        s = _quad_sqrt(x, K)
    else:
        s = _finite_root(x, K, 2)
    if s is not None and not K.eq(K.mul(s, s), x):
        raise ArithmeticError("square root witness failed to verify")
    return s


def is_cube(x, K: Field):
    """Return some c with c**3 == x, or None when no cube root lies in K."""
    if K.is_zero(x):
        return K.zero
    if isinstance(K, Rationals):
        c = _rational_root(x, 3)
    elif isinstance(K, QuadraticField):
        from .poly import Polynomial, cubic_rational_root

        c = cubic_rational_root(Polynomial([K.neg(x), K.zero, K.zero, K.one], K), K)
    else:
        c = _finite_root(x, K, 3)
    if c is not None and not K.eq(K.pow(c, 3), x):
        raise ArithmeticError("cube root witness failed to verify")
    return c


def iroot(n: int, r: int) -> int | None:
    """Exact integer r-th root of n (sign-aware for odd r), or None."""
    if n < 0:
        if r % 2 == 0:
            return None
        m = iroot(-n, r)
        return None if m is None else -m
    if r == 2:
        s = isqrt(n)
    else:
        s = _icbrt(n)
    return s if s**r == n else None


def _icbrt(n: int) -> int:
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            break
        x = y
    while x**3 > n:
        x -= 1
    while (x + 1) ** 3 <= n:
        x += 1
    return x


def _rational_root(x: Fraction, r: int):
    num, den = iroot(x.numerator, r), iroot(x.denominator, r)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _quad_sqrt(x: QuadNumber, K: QuadraticField):
    # (s + t w)^2 = u + v w with w^2 = d:  s^2 + d t^2 = u,  2 s t = v.
    u, v = x
    if v == 0:
        s = _rational_root(u, 2)
        if s is not None:
            return QuadNumber(s, Fraction(0))
        t = _rational_root(u / K.d, 2)
        if t is not None:
            return QuadNumber(Fraction(0), t)
        return None
    m = _rational_root(K.norm(x), 2)
    if m is None:
        return None
    for cand in ((u + m) / 2, (u - m) / 2):
        s = _rational_root(cand, 2)
        if s:
            return QuadNumber(s, v / (2 * s))
    return None


@functools.lru_cache(maxsize=32)
def _root_table(K: FiniteField, r: int) -> dict[int, int]:
    table: dict[int, int] = {}
    for s in K.elements():
        table.setdefault(K.pow(s, r), s)
    return table


def _finite_root(x, K: FiniteField, r: int):
    q = K.q
    if (q - 1) % r:
        # x -> x^r is a bijection; invert the exponent modulo q - 1.
        return K.pow(x, pow(r, -1, q - 1))
    if K.pow(x, (q - 1) // r) != K.one:
        return None
    if q <= EXHAUSTIVE_LIMIT:
        return _root_table(K, r)[x]
    return _sylow_root(x, K, r)


def _sylow_root(x, K: FiniteField, r: int):
    """r-th root of an r-th power x, for a prime r dividing q - 1."""
    q = K.q
    s, t = 0, q - 1
    while t % r == 0:
        t //= r
        s += 1
    c = next(c for c in range(2, q) if K.pow(c, (q - 1) // r) != K.one)
    g = K.pow(c, t)  # generates the Sylow r-subgroup, order r**s
    y = K.pow(x, pow(r, -1, t)) if t > 1 else K.one
    err = K.div(K.pow(y, r), x)
    # discrete log of err to base g, one base-r digit at a time
    gamma = K.pow(g, r ** (s - 1))
    log = 0
    for i in range(s):
        h = K.pow(K.mul(err, K.pow(g, -log)), r ** (s - 1 - i))
        digit = next(dd for dd in range(r) if K.pow(gamma, dd) == h)
        log += digit * r**i
    if log % r:
        raise ArithmeticError("element is not an r-th power")
    return K.mul(y, K.pow(g, -(log // r)))
