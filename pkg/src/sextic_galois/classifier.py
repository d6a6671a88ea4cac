"""Galois group of x^6 + a x^3 + b from a handful of field predicates.

The decision uses four facts about the base field K: whether it contains a
primitive cube root of unity, whether -3*(a^2 - 4b) is a square, whether b
is a cube, and whether the resolvent cubic x^3 - 3b x + a b has a root.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Union

from .errors import InternalInconsistency
from .fields import (
    Field,
    FiniteField,
    contains_primitive_cube_root,
    is_cube,
    is_square,
)
from .poly import (
    Polynomial,
    cubic_rational_root,
    factor_degrees,
    poly_gcd,
    resolvent_cubic,
    sextic_trinomial_irreducible_char0,
    trinomial,
)

GROUP_ORDERS = {"D6": 12, "S3xS3": 36, "C6": 6, "S3": 6, "C3xS3": 18}

# Branch labels: which of the three admissible (cube, resolvent) cells fired.
CUBE = "cbrt_b_in_K"  # b is a cube, R irreducible
RESOLVENT = "R_reducible"  # b not a cube, R reducible
NEITHER = "neither"  # b not a cube, R irreducible

# (theorem case, branch) -> group
DECISION_TABLE = {
    (1, CUBE): "D6",
    (1, RESOLVENT): "D6",
    (1, NEITHER): "S3xS3",
    (2, CUBE): "C6",
    (2, RESOLVENT): "S3",
    (2, NEITHER): "C3xS3",
    (3, CUBE): "S3",
    (3, RESOLVENT): "C6",
    (3, NEITHER): "C3xS3",
}


@dataclass(frozen=True)
class Predicates:
    delta: Any
    resolvent: Polynomial
    zeta3_in_K: bool
    neg3delta_square: bool
    n: Any  # delta == -3 n^2 when neg3delta_square
    b_is_cube: bool
    cbrt_b: Any
    r_irreducible: bool
    r_root: Any
    separable: bool


@dataclass(frozen=True)
class GaloisClass:
    tag: str
    theorem_case: int
    branch: str

    @property
    def order(self) -> int:
        return GROUP_ORDERS[self.tag]


@dataclass(frozen=True)
class Reducible:
    factors: list[Polynomial] | None
    degrees: list[int] | None = None


@dataclass(frozen=True)
class InseparableChar3:
    reason: str


@dataclass(frozen=True)
class Unsupported:
    reason: str


Result = Union[GaloisClass, Reducible, InseparableChar3, Unsupported]


@dataclass(frozen=True)
class ClassificationReport:
    a: Any
    b: Any
    field: Field
    predicates: Predicates | None
    result: Result

    @property
    def group(self) -> GaloisClass | None:
        return self.result if isinstance(self.result, GaloisClass) else None


def compute_predicates(a, b, K: Field) -> Predicates:
    if K.characteristic == 2:
        raise ValueError("characteristic 2 is not supported")
    delta = K.sub(K.mul(a, a), K.mul(K.from_int(4), b))
    R = resolvent_cubic(a, b, K)
    s = is_square(K.mul(K.from_int(-3), delta), K)
    n = None
    if s is not None and K.characteristic != 3:
        n = K.div(s, K.from_int(3))
    c = is_cube(b, K)
    root = cubic_rational_root(R, K)
    f = trinomial(a, b, K)
    separable = poly_gcd(f, f.derivative()).degree == 0 if not f.derivative().is_zero() else False
    return Predicates(
        delta=delta,
        resolvent=R,
        zeta3_in_K=contains_primitive_cube_root(K),
        neg3delta_square=s is not None,
        n=n,
        b_is_cube=c is not None,
        cbrt_b=c,
        r_irreducible=root is None,
        r_root=root,
        separable=separable,
    )


def _char3_factorization(a, b, K: FiniteField) -> list[Polynomial]:
    # Over a perfect field of characteristic 3, f = (x^2 + a^(1/3) x + b^(1/3))^3.
    g = Polynomial([is_cube(b, K), is_cube(a, K), K.one], K)
    return [g, g, g]


def branch_of(p: Predicates) -> tuple[int, str]:
    """(theorem case, branch) for an irreducible separable trinomial."""
    if p.b_is_cube and not p.r_irreducible:
        raise InternalInconsistency(
            "irreducible trinomial with b a cube and R reducible"
        )
    if p.zeta3_in_K:
        case = 3
    else:
        case = 2 if p.neg3delta_square else 1
    if p.b_is_cube:
        return case, CUBE
    return case, RESOLVENT if not p.r_irreducible else NEITHER


def classify(a, b, K: Field) -> ClassificationReport:
    """Classify the splitting field of x^6 + a x^3 + b over K.

    Reducible inputs come back as ``Reducible`` with a witness (factor
    degrees over finite fields, an explicit factorization otherwise).
    """
    if K.characteristic == 2:
        return ClassificationReport(a, b, K, None, Unsupported("characteristic 2"))
    preds = compute_predicates(a, b, K)
    if isinstance(K, FiniteField):
        if K.p == 3:
            factors = _char3_factorization(a, b, K)
            degs = factor_degrees(trinomial(a, b, K))
            return ClassificationReport(a, b, K, preds, Reducible(factors, degs))
        degs = factor_degrees(trinomial(a, b, K))
        if degs != [6]:
            return ClassificationReport(a, b, K, preds, Reducible(None, degs))
    else:
        verdict = sextic_trinomial_irreducible_char0(a, b, K)
        if not verdict.irreducible:
            degs = sorted((g.degree for g in verdict.factors), reverse=True)
            return ClassificationReport(a, b, K, preds, Reducible(verdict.factors, degs))
    if not preds.separable:
        raise InternalInconsistency("irreducible trinomial is inseparable outside char 3")
    case, branch = branch_of(preds)
    group = GaloisClass(DECISION_TABLE[case, branch], case, branch)
    return ClassificationReport(a, b, K, preds, group)


def finite_irreducibility(a, b, K: FiniteField) -> bool:
    """Irreducibility of x^6 + a x^3 + b over F_q without factoring it."""
    if K.p == 3:
        return False
    if K.q % 3 == 1:
        delta = K.sub(K.mul(a, a), K.mul(K.from_int(4), b))
        return is_cube(b, K) is None and is_square(delta, K) is None
    return cubic_rational_root(resolvent_cubic(a, b, K), K) is None
