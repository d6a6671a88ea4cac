"""Dense univariate polynomials over any supported field.

Coefficients are stored lowest degree first, trailing zeros stripped, so
the zero polynomial has an empty coefficient list and degree -1.

Also home to the factorization primitives used both by the classifier and
by the oracle: squarefree decomposition and distinct-degree factorization
over finite fields, root finding for cubics, and the certified numeric
factor search that decides irreducibility of ``x^6 + a x^3 + b`` in
characteristic zero.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb, lcm
from typing import NamedTuple, Sequence

import mpmath
from sympy import divisors

from .errors import InternalPrecisionError
from .fields import (
    EXHAUSTIVE_LIMIT,
    Field,
    FiniteField,
    QuadNumber,
    QuadraticField,
    Rationals,
)

START_PREC = 256
MAX_PREC = 4096


class Polynomial:
    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: Sequence, field: Field):
        coeffs = list(coeffs)
        while coeffs and field.is_zero(coeffs[-1]):
            coeffs.pop()
        self.coeffs = coeffs
        self.field = field

    @classmethod
    def from_ints(cls, ints: Sequence[int], field: Field) -> Polynomial:
        return cls([field.from_int(c) for c in ints], field)

    @classmethod
    def x(cls, field: Field) -> Polynomial:
        return cls([field.zero, field.one], field)

    @classmethod
    def constant(cls, c, field: Field) -> Polynomial:
        return cls([c], field)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.field.eq(self.coeffs[0], self.field.one)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def _check(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")
        return other

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        K = self.field
        return (
            other.field == K
            and len(self.coeffs) == len(other.coeffs)
            and all(K.eq(x, y) for x, y in zip(self.coeffs, other.coeffs))
        )

    def __hash__(self):
        return hash((self.field, tuple(self.coeffs)))

    def __add__(self, other):
        other = self._check(other)
        K, a, b = self.field, self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = K.add(out[i], c)
        return Polynomial(out, K)

    def __neg__(self):
        return Polynomial([self.field.neg(c) for c in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        other = self._check(other)
        K, a, b = self.field, self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial([], K)
        out = [K.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if K.is_zero(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = K.add(out[i + j], K.mul(x, y))
        return Polynomial(out, K)

    def scale(self, c) -> Polynomial:
        K = self.field
        return Polynomial([K.mul(c, x) for x in self.coeffs], K)

    def __divmod__(self, other):
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        K = self.field
        rem = list(self.coeffs)
        db = other.degree
        inv_lc = K.inv(other.lc)
        quo = [K.zero] * max(len(rem) - db, 0)
        b = other.coeffs
        for top in range(len(rem) - 1, db - 1, -1):
            c = rem[top]
            if K.is_zero(c):
                continue
            c = K.mul(c, inv_lc)
            quo[top - db] = c
            shift = top - db
            for i in range(db + 1):
                rem[shift + i] = K.sub(rem[shift + i], K.mul(c, b[i]))
        return Polynomial(quo, K), Polynomial(rem[:db] if db else [], K)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> Polynomial:
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lc))

    def derivative(self) -> Polynomial:
        K = self.field
        return Polynomial(
            [K.mul(K.from_int(i), c) for i, c in enumerate(self.coeffs)][1:], K
        )

    def __call__(self, x):
        K = self.field
        acc = K.zero
        for c in reversed(self.coeffs):
            acc = K.add(K.mul(acc, x), c)
        return acc

    def __repr__(self):
        return f"Polynomial({self}, {self.field})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        K = self.field
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if K.is_zero(c):
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            text = K.format(c)
            if not mono:
                terms.append(text)
            elif K.eq(c, K.one):
                terms.append(mono)
            elif K.eq(c, K.neg(K.one)) and not isinstance(K, FiniteField):
                terms.append("-" + mono)
            else:
                if any(ch in text[1:] for ch in "+-"):
                    text = f"({text})"
                terms.append(f"{text}*{mono}")
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out


def trinomial(a, b, K: Field) -> Polynomial:
    """x^6 + a x^3 + b."""
    z = K.zero
    return Polynomial([b, z, z, a, z, z, K.one], K)


def resolvent_cubic(a, b, K: Field) -> Polynomial:
    """x^3 - 3b x + a b."""
    return Polynomial([K.mul(a, b), K.neg(K.mul(K.from_int(3), b)), K.zero, K.one], K)


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic greatest common divisor (Euclid)."""
    if f.field != g.field:
        raise ValueError(f"field mismatch: {f.field} vs {g.field}")
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def powmod(f: Polynomial, e: int, m: Polynomial) -> Polynomial:
    result = Polynomial.constant(f.field.one, f.field) % m
    base = f % m
    while e:
        if e & 1:
            result = (result * base) % m
        base = (base * base) % m
        e >>= 1
    return result


# -- finite-field factorization ------------------------------------------------


def _pth_root(f: Polynomial) -> Polynomial:
    """g with g(x)^p = f(x), for f in F_q[x^p]."""
    K: FiniteField = f.field
    p = K.p
    e = K.q // p
    return Polynomial([K.pow(f.coeffs[i], e) for i in range(0, len(f.coeffs), p)], K)


def squarefree_decomposition(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """Pairs (g, m) with f = lc * prod g^m, each g squarefree and monic."""
    if f.degree < 1:
        return []
    f = f.monic()
    p = f.field.characteristic
    d = f.derivative()
    if d.is_zero():
        return [(g, m * p) for g, m in squarefree_decomposition(_pth_root(f))]
    out = []
    c = poly_gcd(f, d)
    w = f // c
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, c)
        z = w // y
        if z.degree > 0:
            out.append((z, i))
        i += 1
        w = y
        c = c // y
    if c.degree > 0:
        out.extend((g, m * p) for g, m in squarefree_decomposition(_pth_root(c)))
    return out


def _frobenius_matrix(f: Polynomial) -> list[Polynomial]:
    """[x^(q*j) mod f for j < deg f]; the q-power map is linear over F_q."""
    K = f.field
    xq = powmod(Polynomial.x(K), K.order, f)
    rows = [Polynomial.constant(K.one, K)]
    for _ in range(1, f.degree):
        rows.append((rows[-1] * xq) % f)
    return rows


def _apply_frobenius(h: Polynomial, rows: list[Polynomial]) -> Polynomial:
    K = h.field
    acc = [K.zero] * len(rows)
    for c, row in zip(h.coeffs, rows):
        if K.is_zero(c):
            continue
        for i, r in enumerate(row.coeffs):
            acc[i] = K.add(acc[i], K.mul(c, r))
    return Polynomial(acc, K)


def distinct_degree(f: Polynomial) -> list[tuple[int, Polynomial]]:
    """Split a squarefree monic f into (i, product of its degree-i factors)."""
    K = f.field
    out = []
    x = Polynomial.x(K)
    rest = f
    rows = _frobenius_matrix(f)
    h = x % f
    i = 0
    while rest.degree >= 2 * (i + 1):
        i += 1
        h = _apply_frobenius(h, rows) % rest  # h = x^(q^i) mod rest
        g = poly_gcd(rest, h - x)
        if g.degree > 0:
            out.append((i, g))
            rest = rest // g
            h = h % rest
    if rest.degree > 0:
        out.append((rest.degree, rest))
    return out


def factor_degrees(f: Polynomial) -> list[int]:
    """Degrees of the irreducible factors of f over F_q, with multiplicity.

    Sorted in decreasing order, so an irreducible sextic gives ``[6]``.
    """
    if not isinstance(f.field, FiniteField):
        raise TypeError("factor_degrees needs a finite field")
    if f.is_zero():
        raise ValueError("factor_degrees of the zero polynomial")
    degs: list[int] = []
    for g, m in squarefree_decomposition(f):
        for i, part in distinct_degree(g):
            degs.extend([i] * (part.degree // i * m))
    return sorted(degs, reverse=True)


def _split_roots(g: Polynomial) -> list:
    """All roots of a monic g that splits into distinct linear factors."""
    K: FiniteField = g.field
    if g.degree == 0:
        return []
    if g.degree == 1:
        return [K.neg(g.coeffs[0])]
    e = (K.q - 1) // 2
    for delta in range(K.q):
        shifted = Polynomial([delta, K.one], K)
        h = poly_gcd(g, powmod(shifted, e, g) - Polynomial.constant(K.one, K))
        if 0 < h.degree < g.degree:
            return _split_roots(h) + _split_roots(g // h)
    raise ArithmeticError("equal-degree splitting failed")


def finite_roots(f: Polynomial) -> list:
    """Distinct roots in F_q of a nonzero polynomial over F_q."""
    K: FiniteField = f.field
    if K.q <= EXHAUSTIVE_LIMIT:
        return [x for x in K.elements() if K.is_zero(f(x))]
    x = Polynomial.x(K)
    g = poly_gcd(f, powmod(x, K.q, f) - x)
    return sorted(_split_roots(g))


# -- resultants ------------------------------------------------------------------


def determinant(rows: list[list], K: Field):
    m = [list(r) for r in rows]
    n = len(m)
    det = K.one
    for col in range(n):
        piv = next((r for r in range(col, n) if not K.is_zero(m[r][col])), None)
        if piv is None:
            return K.zero
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = K.neg(det)
        det = K.mul(det, m[col][col])
        inv = K.inv(m[col][col])
        for r in range(col + 1, n):
            if K.is_zero(m[r][col]):
                continue
            factor = K.mul(m[r][col], inv)
            m[r] = [K.sub(x, K.mul(factor, y)) for x, y in zip(m[r], m[col])]
    return det


def resultant(f: Polynomial, g: Polynomial):
    """Res(f, g) as the determinant of the Sylvester matrix."""
    K = f.field
    m, n = f.degree, g.degree
    if m < 1 or n < 1:
        raise ValueError("resultant needs two nonconstant polynomials")
    fh, gh = f.coeffs[::-1], g.coeffs[::-1]
    size = m + n
    rows = []
    for i in range(n):
        rows.append([K.zero] * i + fh + [K.zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([K.zero] * i + gh + [K.zero] * (size - n - 1 - i))
    return determinant(rows, K)


def discriminant(f: Polynomial):
    K = f.field
    n = f.degree
    r = resultant(f, f.derivative())
    if (n * (n - 1) // 2) % 2:
        r = K.neg(r)
    return K.div(r, f.lc)


# -- characteristic zero helpers --------------------------------------------------


def _components(K: Field, x) -> tuple[Fraction, Fraction]:
    if isinstance(K, QuadraticField):
        return x.u, x.v
    return Fraction(x), Fraction(0)


def _clearing_factor(K: Field, coeffs) -> int:
    dens = [1]
    for c in coeffs:
        u, v = _components(K, c)
        dens += [u.denominator, v.denominator]
    return lcm(*dens)


def embed(K: Field, x, ctx, sign: int = 1):
    """Complex image of x under the embedding sqrt(d) -> sign*sqrt(d)."""
    u, v = _components(K, x)
    val = ctx.mpf(u.numerator) / u.denominator
    if v:
        val = val + sign * ctx.mpf(v.numerator) / v.denominator * ctx.sqrt(ctx.mpc(K.d))
    return ctx.mpc(val)


def _signs(K: Field) -> tuple[int, ...]:
    return (1, -1) if isinstance(K, QuadraticField) else (1,)


def _round_half(ctx, z, tol) -> int | None:
    """Round a complex approximation of an element of (1/2)Z; None if far off."""
    if abs(z.imag) > tol:
        return None
    n = int(ctx.nint(2 * z.real))
    if abs(2 * z.real - n) > 2 * tol:
        return None
    return n


def _lattice_candidate(K: Field, ctx, e1, e2, tol):
    """Recover an algebraic integer of K from its two embeddings, or None."""
    if isinstance(K, QuadraticField):
        w = ctx.sqrt(ctx.mpc(K.d))
        u2 = _round_half(ctx, (e1 + e2) / 2, tol)
        v2 = _round_half(ctx, (e1 - e2) / (2 * w), tol)
        if u2 is None or v2 is None:
            return None
        if K.d % 4 == 1:
            if (u2 - v2) % 2:
                return None
        elif u2 % 2 or v2 % 2:
            return None
        return QuadNumber(Fraction(u2, 2), Fraction(v2, 2))
    if abs(e1.imag) > tol:
        return None
    n = int(ctx.nint(e1.real))
    if abs(e1.real - n) > tol:
        return None
    return Fraction(n)


def _elementary(ctx, roots) -> list:
    """Coefficients (low first) of the monic polynomial with these roots."""
    coeffs = [ctx.mpc(1)]
    for r in roots:
        nxt = [ctx.mpc(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= r * c
        coeffs = nxt
    return coeffs


def cubic_rational_root(R: Polynomial, K: Field):
    """Some root of the cubic R lying in K, or None.

    Over Q the integer-cleared monic cubic is searched over divisors of its
    constant term; over F_q the search is exhaustive up to 10**6 elements;
    over Q(sqrt d) the roots under both embeddings are paired, rounded to
    the algebraic-integer lattice and checked by exact evaluation.
    """
    if R.degree != 3:
        raise ValueError(f"cubic_rational_root needs degree 3, got {R.degree}")
    if R.field != K:
        raise ValueError(f"field mismatch: {R.field} vs {K}")
    R = R.monic()
    if isinstance(K, FiniteField):
        roots = finite_roots(R)
        return roots[0] if roots else None
    g = poly_gcd(R, R.derivative())
    if g.degree == 1:
        return K.neg(g.coeffs[0])
    if g.degree == 2:
        return K.div(K.neg(g.coeffs[1]), K.from_int(2))
    if isinstance(K, Rationals):
        return _rational_cubic_root(R)
    return _quadratic_cubic_root(R, K)


def _rational_cubic_root(R: Polynomial):
    L = _clearing_factor(R.field, R.coeffs)
    # y = L x turns R into a monic integer cubic; rational roots are integers.
    ints = [int(c * L ** (3 - i)) for i, c in enumerate(R.coeffs)]
    if ints[0] == 0:
        return Fraction(0)
    for d in divisors(abs(ints[0])):
        for y in (-d, d):
            if ((y + ints[2]) * y + ints[1]) * y + ints[0] == 0:
                return Fraction(y, L)
    return None


def _quadratic_cubic_root(R: Polynomial, K: QuadraticField):
    L = _clearing_factor(K, R.coeffs)
    scaled = Polynomial(
        [K.mul(K.from_int(L ** (3 - i)), c) for i, c in enumerate(R.coeffs)], K
    )
    prec = START_PREC
    while prec <= MAX_PREC:
        ctx = mpmath.MPContext()
        ctx.prec = prec
        images = []
        err_total = ctx.mpf(0)
        for sign in (1, -1):
            coeffs = [embed(K, c, ctx, sign) for c in reversed(scaled.coeffs)]
            roots, err = ctx.polyroots(coeffs, maxsteps=200, extraprec=prec, error=True)
            images.append(roots)
            err_total = max(err_total, err)
        if err_total < ctx.mpf(2) ** (-prec // 4):
            tol = ctx.mpf(1) / 8
            for r1 in images[0]:
                for r2 in images[1]:
                    c = _lattice_candidate(K, ctx, r1, r2, tol)
                    if c is not None and K.is_zero(scaled(c)):
                        return K.div(c, K.from_int(L))
            return None
        prec *= 2
    raise InternalPrecisionError("cubic root search did not converge")


# -- irreducibility of the sextic trinomial in characteristic zero ----------------


class Irreducibility(NamedTuple):
    irreducible: bool
    factors: list[Polynomial] | None  # product equals f when reducible


def trinomial_roots(ctx, a, b) -> list:
    """The six roots [alpha*z^i, beta*z^i] from the radical formulas."""
    sqrt_delta = ctx.sqrt(a * a - 4 * b)
    alpha = ctx.cbrt((-a + sqrt_delta) / 2)
    beta = ctx.cbrt((-a - sqrt_delta) / 2)
    zeta = ctx.mpc(-1, ctx.sqrt(3)) / 2
    return [alpha, alpha * zeta, alpha * zeta**2, beta, beta * zeta, beta * zeta**2]


def sextic_trinomial_irreducible_char0(
    a, b, K: Field, prec: int = START_PREC
) -> Irreducibility:
    """Decide irreducibility of x^6 + a x^3 + b over Q or Q(sqrt d).

    Every monic factor of degree <= 3 is the product of x - r over some
    subset of the roots; candidate coefficients computed numerically are
    rounded to the algebraic-integer lattice of K and accepted only after
    exact division.  The witness is the first verified factor together with
    its cofactor.
    """
    if isinstance(K, FiniteField):
        raise TypeError("characteristic-zero routine called on a finite field")
    f = trinomial(a, b, K)
    z = K.zero
    if K.is_zero(b):
        return Irreducibility(False, [Polynomial([z, z, z, K.one], K), Polynomial([a, z, z, K.one], K)])
    delta = K.sub(K.mul(a, a), K.mul(K.from_int(4), b))
    if K.is_zero(delta):
        half = Polynomial([K.div(a, K.from_int(2)), z, z, K.one], K)
        return Irreducibility(False, [half, half])

    L = _clearing_factor(K, [a, b])
    aL = K.mul(a, K.from_int(L**3))
    bL = K.mul(b, K.from_int(L**6))
    g = trinomial(aL, bL, K)
    while prec <= MAX_PREC:
        ctx = mpmath.MPContext()
        ctx.prec = prec
        root_sets = [trinomial_roots(ctx, embed(K, aL, ctx, s), embed(K, bL, ctx, s)) for s in _signs(K)]
        bound = max(1, max(abs(r) for rs in root_sets for r in rs))
        err = ctx.mpf(2) ** (-prec + 16) * (1 + bound) ** 3 * 20
        if err < ctx.mpf(2) ** -20:
            found = _search_factor(g, K, ctx, root_sets)
            if found is None:
                return Irreducibility(True, None)
            return Irreducibility(False, _unscale(f, found, L))
        prec *= 2
    raise InternalPrecisionError("factor search did not reach the required precision")


def _search_factor(g: Polynomial, K: Field, ctx, root_sets):
    tol = ctx.mpf(1) / 8
    for m in (1, 2, 3):
        subsets = [
            [_elementary(ctx, s) for s in combinations(rs, m)] for rs in root_sets
        ]
        pairings = (
            ((e1, e2) for e1 in subsets[0] for e2 in subsets[1])
            if len(subsets) == 2
            else ((e1, e1) for e1 in subsets[0])
        )
        for e1, e2 in pairings:
            coeffs = []
            for c1, c2 in zip(e1[:-1], e2[:-1]):
                c = _lattice_candidate(K, ctx, c1, c2, tol)
                if c is None:
                    break
                coeffs.append(c)
            else:
                h = Polynomial(coeffs + [K.one], K)
                if (g % h).is_zero():
                    return h
    return None


def _unscale(f: Polynomial, h: Polynomial, L: int) -> list[Polynomial]:
    """Map a factor h(y) of L^6 f(y/L) back to the factor L^-m h(L x) of f."""
    K = f.field
    m = h.degree
    fac = Polynomial(
        [K.mul(c, K.from_fraction(Fraction(L**i, L**m))) for i, c in enumerate(h.coeffs)], K
    )
    cof, rem = divmod(f, fac)
    if not rem.is_zero():
        raise ArithmeticError("factor witness failed exact division")
    return [fac, cof]
