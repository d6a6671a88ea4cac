"""Intermediate fields of the splitting field of x^6 + a x^3 + b.

Entries are symbolic: each lists generator expressions over the atoms
``alpha, beta, zeta3, sqrtD, sqrtm3D, isqrt3, cbrtb`` together with the
degree over K and whether the extension is normal.  ``verify_catalog``
checks every entry against a permutation model by evaluating the generators
numerically and computing their orbit and stabilizer.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import mpmath

from .classifier import CUBE, NEITHER, RESOLVENT, ClassificationReport, GaloisClass
from .errors import AmbiguityError, NoCatalog
from .fields import Field, QuadraticField, Rationals
from .oracle import Perm, PermutationModel, is_normal
from .poly import embed

START_PREC = 128
MAX_PREC = 2048


# -- generator expressions ----------------------------------------------------------


class Expr:
    precedence = 4

    def __add__(self, other) -> "Expr":
        return Add(self, _lift(other))

    def __radd__(self, other) -> "Expr":
        return Add(_lift(other), self)

    def __sub__(self, other) -> "Expr":
        return Sub(self, _lift(other))

    def __rsub__(self, other) -> "Expr":
        return Sub(_lift(other), self)

    def __mul__(self, other) -> "Expr":
        return Mul(self, _lift(other))

    def __rmul__(self, other) -> "Expr":
        return Mul(_lift(other), self)

    def __pow__(self, exponent: int) -> "Expr":
        return Pow(self, exponent)

    def render(self) -> str:
        raise NotImplementedError

    def evaluate(self, env: dict):
        raise NotImplementedError

    def __str__(self) -> str:
        return self.render()


def _lift(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, int):
        return Const(x)
    raise TypeError(f"cannot use {x!r} in a generator expression")


def _wrap(e: Expr, min_prec: int) -> str:
    text = e.render()
    return f"({text})" if e.precedence < min_prec else text


@dataclass(frozen=True, eq=False)
class Atom(Expr):
    name: str

    def render(self) -> str:
        return self.name

    def evaluate(self, env: dict):
        return env[self.name]


@dataclass(frozen=True, eq=False)
class Const(Expr):
    value: int

    @property
    def precedence(self) -> int:
        return 4 if self.value >= 0 else 0

    def render(self) -> str:
        return str(self.value)

    def evaluate(self, env: dict):
        return self.value


@dataclass(frozen=True, eq=False)
class Add(Expr):
    left: Expr
    right: Expr
    precedence = 1

    def render(self) -> str:
        return f"{_wrap(self.left, 1)} + {_wrap(self.right, 1)}"

    def evaluate(self, env: dict):
        return self.left.evaluate(env) + self.right.evaluate(env)


@dataclass(frozen=True, eq=False)
class Sub(Expr):
    left: Expr
    right: Expr
    precedence = 1

    def render(self) -> str:
        return f"{_wrap(self.left, 1)} - {_wrap(self.right, 2)}"

    def evaluate(self, env: dict):
        return self.left.evaluate(env) - self.right.evaluate(env)


@dataclass(frozen=True, eq=False)
class Mul(Expr):
    left: Expr
    right: Expr
    precedence = 2

    def render(self) -> str:
        return f"{_wrap(self.left, 2)}*{_wrap(self.right, 3)}"

    def evaluate(self, env: dict):
        return self.left.evaluate(env) * self.right.evaluate(env)


@dataclass(frozen=True, eq=False)
class Pow(Expr):
    base: Expr
    exponent: int
    precedence = 3

    def render(self) -> str:
        return f"{_wrap(self.base, 4)}^{self.exponent}"

    def evaluate(self, env: dict):
        return self.base.evaluate(env) ** self.exponent


def twist(e: Expr, k: int) -> Expr:
    """e * zeta3^k, with k reduced mod 3."""
    k %= 3
    if k == 0:
        return e
    return e * (ZETA3 if k == 1 else ZETA3**2)


ALPHA = Atom("alpha")
BETA = Atom("beta")
ZETA3 = Atom("zeta3")
SQRT_DELTA = Atom("sqrtD")
SQRT_M3DELTA = Atom("sqrtm3D")
I_SQRT3 = Atom("isqrt3")
CBRT_B = Atom("cbrtb")
ATOMS = (ALPHA, BETA, ZETA3, SQRT_DELTA, SQRT_M3DELTA, I_SQRT3, CBRT_B)


def atom_values(alpha, beta, zeta) -> dict:
    """Numeric values of every atom from (alpha, beta, zeta3)."""
    sqrt_delta = alpha**3 - beta**3
    i_sqrt3 = 2 * zeta + 1
    return {
        "alpha": alpha,
        "beta": beta,
        "zeta3": zeta,
        "sqrtD": sqrt_delta,
        "sqrtm3D": i_sqrt3 * sqrt_delta,
        "isqrt3": i_sqrt3,
        "cbrtb": alpha * beta,
    }


# -- catalog ---------------------------------------------------------------------


@dataclass(frozen=True)
class SubfieldEntry:
    generators: tuple[Expr, ...]
    degree: int
    normal: bool
    note: str = ""

    def rendered(self) -> list[str]:
        return [g.render() for g in self.generators]

    def label(self) -> str:
        return "K(" + ", ".join(self.rendered()) + ")"

    def to_dict(self) -> dict:
        return {
            "generators": self.rendered(),
            "degree": self.degree,
            "normal": self.normal,
            "note": self.note,
        }


def _entries(degree: int, normal: bool, gens: Iterable, note: str = "") -> list[SubfieldEntry]:
    out = []
    for g in gens:
        g = g if isinstance(g, tuple) else (g,)
        out.append(SubfieldEntry(g, degree, normal, note))
    return out


def _rotations(e: Expr) -> list[Expr]:
    return [twist(e, k) for k in range(3)]


def _cubic_roots_of_r() -> list[Expr]:
    # alpha*z^k + beta*z^(2k): with cbrtb in front these are the roots of R
    return [ALPHA + BETA, ALPHA * ZETA3 + BETA * ZETA3**2, ALPHA * ZETA3**2 + BETA * ZETA3]


def _build_catalogs() -> dict[tuple[int, str], list[SubfieldEntry]]:
    a, b, z = ALPHA, BETA, ZETA3
    D, M, I, C = SQRT_DELTA, SQRT_M3DELTA, I_SQRT3, CBRT_B
    trace_like = _cubic_roots_of_r()
    r_roots = [C * t for t in trace_like]
    cube_roots = _rotations(C)
    alphas = _rotations(a)
    betas = _rotations(b)

    d6_resolvent = (
        _entries(2, True, [D, z, M])
        + _entries(3, False, cube_roots)
        + _entries(4, True, [(D, z)])
        + _entries(6, True, [(z, C)], "splitting field of x^3 - b")
        + _entries(6, False, alphas)
        + _entries(6, False, [a * z + b * z**2, a + b * z, a + b * z**2])
    )
    d6_cube = (
        _entries(2, True, [D, z, M])
        + _entries(3, False, trace_like)
        + _entries(4, True, [(D, z)])
        + _entries(6, True, [(M, a + b)], "splitting field of R")
        + _entries(6, False, alphas)
        + _entries(6, False, [(z, t) for t in trace_like])
    )
    s3s3 = (
        _entries(2, True, [z, M, D])
        + _entries(3, False, cube_roots)
        + _entries(3, False, r_roots, "roots of R")
        + _entries(4, True, [(D, z)])
        + _entries(6, True, [(z, C)], "splitting field of x^3 - b")
        + _entries(6, True, [(M, r_roots[0])], "splitting field of R")
        + _entries(6, False, [(z, r) for r in r_roots])
        + _entries(6, False, [(M, c) for c in cube_roots])
        + _entries(6, False, [(D, c) for c in cube_roots])
        + _entries(6, False, [(D, r) for r in r_roots])
        + _entries(6, False, alphas + betas)
        + _entries(
            9,
            False,
            trace_like
            + [(a + b) * z**2, a + b * z, a * z + b, (a + b) * z, a * z**2 + b, a + b * z**2],
        )
        + _entries(12, True, [(D, z, C), (D, z, r_roots[0])])
        + _entries(12, False, [(z, a), (z, b)])
        + _entries(18, False, [(x, y) for x in alphas for y in betas])
        + _entries(18, False, [(z, a + b), (z, a + b * z), (z, a + b * z**2)])
        + _entries(18, False, [twist((z - 1) * (a - b), k) for k in range(3)])
    )
    s3_case2 = _entries(2, True, [I]) + _entries(3, False, cube_roots)
    c6_case2 = _entries(2, True, [I]) + _entries(3, True, [a + b])
    c3s3_case2 = (
        _entries(2, True, [I])
        + _entries(3, True, [r_roots[0]], "splitting field of R")
        + _entries(3, False, cube_roots)
        + _entries(6, True, [(z, C), (z, r_roots[0])])
        + _entries(6, False, [a, b])
        + _entries(9, False, _rotations(a + b))
    )
    c6_case3 = _entries(2, True, [D]) + _entries(3, True, [C])
    s3_case3 = _entries(2, True, [D]) + _entries(3, False, trace_like, "roots of R")
    c3s3_case3 = (
        _entries(2, True, [D])
        + _entries(3, True, [C], "splitting field of x^3 - b")
        + _entries(3, False, r_roots, "roots of R")
        + _entries(6, True, [(D, r_roots[0]), (D, C)])
        + _entries(6, False, [a, b])
        + _entries(9, False, trace_like)
    )
    return {
        (1, RESOLVENT): d6_resolvent,
        (1, CUBE): d6_cube,
        (1, NEITHER): s3s3,
        (2, RESOLVENT): s3_case2,
        (2, CUBE): c6_case2,
        (2, NEITHER): c3s3_case2,
        (3, RESOLVENT): c6_case3,
        (3, CUBE): s3_case3,
        (3, NEITHER): c3s3_case3,
    }


CATALOGS = _build_catalogs()


def catalog_for(group: GaloisClass) -> list[SubfieldEntry]:
    return list(CATALOGS[group.theorem_case, group.branch])


def catalog(report: ClassificationReport) -> list[SubfieldEntry]:
    """Proper intermediate fields for a classified trinomial."""
    if report.group is None:
        raise NoCatalog(f"no subfield catalog for {type(report.result).__name__}")
    return catalog_for(report.group)


def degree_histogram(entries: Sequence[SubfieldEntry]) -> dict[int, int]:
    return dict(sorted(Counter(e.degree for e in entries).items()))


def catalog_to_json(entries: Sequence[SubfieldEntry]) -> str:
    return json.dumps([e.to_dict() for e in entries], separators=(",", ":"))


# -- numeric instances -------------------------------------------------------------


@dataclass(frozen=True)
class NumericInstance:
    """High-precision roots of one char-0 trinomial.

    ``beta`` is paired with ``alpha`` the way the catalog assumes: alpha*beta
    is the K-rational cube root of b when there is one, and
    alpha*beta*(alpha + beta) is the K-rational root of R when R is reducible.
    """

    report: ClassificationReport
    prec: int
    alpha: object
    beta: object
    zeta: object
    ctx: object

    def slot_values(self) -> list:
        zs = [1, self.zeta, self.zeta**2]
        return [self.alpha * w for w in zs] + [self.beta * w for w in zs]

    def env(self) -> dict:
        return atom_values(self.alpha, self.beta, self.zeta)


def numeric_instance(report: ClassificationReport, prec: int = START_PREC) -> NumericInstance:
    K = report.field
    if not isinstance(K, (Rationals, QuadraticField)):
        raise TypeError("numeric instances need a characteristic-zero field")
    group = report.group
    if group is None:
        raise NoCatalog("numeric instance needs an irreducible trinomial")
    ctx = mpmath.MPContext()
    ctx.prec = prec + 32
    a = embed(K, report.a, ctx)
    b = embed(K, report.b, ctx)
    zeta = ctx.mpc(-0.5, 0) + ctx.sqrt(ctx.mpc(-3)) / 2
    sqrt_delta = ctx.sqrt(a * a - 4 * b)
    alpha = ctx.cbrt((-a + sqrt_delta) / 2)
    beta0 = ctx.cbrt((-a - sqrt_delta) / 2)
    candidates = [beta0 * zeta**m for m in range(3)]
    preds = report.predicates
    if group.branch == CUBE:
        target = embed(K, preds.cbrt_b, ctx)
        beta = min(candidates, key=lambda c: abs(alpha * c - target))
    elif group.branch == RESOLVENT:
        target = embed(K, preds.r_root, ctx)
        beta = min(candidates, key=lambda c: abs(alpha * c * (alpha + c) - target))
    else:
        beta = beta0
    return NumericInstance(report, prec, alpha, beta, zeta, ctx)


def element_env(inst: NumericInstance, model: PermutationModel, index: int) -> dict:
    """Atom values after applying model element ``index``."""
    act = model.actions[index]
    slots = inst.slot_values()
    return atom_values(slots[act.alpha_slot], slots[act.beta_slot], inst.zeta**act.zeta)


# -- verification ----------------------------------------------------------------


@dataclass(frozen=True)
class EntryCheck:
    entry: SubfieldEntry
    orbit_size: int
    stabilizer: frozenset[Perm]
    stabilizer_normal: bool
    passed: bool
    problems: tuple[str, ...]


@dataclass(frozen=True)
class CatalogVerification:
    checks: list[EntryCheck]
    duplicate_stabilizers: list[tuple[int, int]]  # pairs of same-degree entries
    prec: int

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and not self.duplicate_stabilizers

    @property
    def failures(self) -> list[EntryCheck]:
        return [c for c in self.checks if not c.passed]


class _Ambiguous(Exception):
    pass


def _classes(values: list[tuple], eq_tol, sep_tol) -> list[int]:
    """Label values so that equal labels mean numerically equal tuples."""
    labels: list[int] = []
    reps: list[tuple] = []
    for v in values:
        for i, r in enumerate(reps):
            dist = max(abs(x - y) for x, y in zip(v, r))
            if dist < eq_tol:
                labels.append(i)
                break
            if dist < sep_tol:
                raise _Ambiguous
        else:
            labels.append(len(reps))
            reps.append(v)
    return labels


def _verify_at(entries, model, inst) -> CatalogVerification:
    ctx = inst.ctx
    envs = [element_env(inst, model, i) for i in range(model.order)]
    scale = max(1, *(abs(v) for v in envs[0].values()))
    checks = []
    for entry in entries:
        values = [tuple(g.evaluate(env) for g in entry.generators) for env in envs]
        size = max(1, *(abs(x) for x in values[0])) * scale
        eq_tol = size * ctx.ldexp(1, -inst.prec // 2)
        sep_tol = size * ctx.ldexp(1, -inst.prec // 4)
        labels = _classes(values, eq_tol, sep_tol)
        identity = model.elements.index(tuple(range(6)))
        stab = frozenset(g for g, lab in zip(model.elements, labels) if lab == labels[identity])
        orbit = len(set(labels))
        normal = is_normal(stab, model.elements)
        problems = []
        if orbit * len(stab) != model.order:
            problems.append("orbit-stabilizer count mismatch")
        if orbit != entry.degree:
            problems.append(f"orbit size {orbit}, expected degree {entry.degree}")
        if normal != entry.normal:
            problems.append(f"stabilizer normal={normal}, entry says normal={entry.normal}")
        checks.append(EntryCheck(entry, orbit, stab, normal, not problems, tuple(problems)))
    dups = [
        (i, j)
        for i in range(len(checks))
        for j in range(i + 1, len(checks))
        if checks[i].entry.degree == checks[j].entry.degree
        and checks[i].stabilizer == checks[j].stabilizer
    ]
    return CatalogVerification(checks, dups, inst.prec)


def verify_catalog(
    entries: Sequence[SubfieldEntry], model: PermutationModel, instance: NumericInstance
) -> CatalogVerification:
    """Check degree, normality and distinctness of every catalog entry.

    Orbit values closer than 2^(-prec/2) are equal, values further apart than
    2^(-prec/4) are distinct; anything in between doubles the precision.
    """
    inst = instance
    while True:
        try:
            return _verify_at(entries, model, inst)
        except _Ambiguous:
            if inst.prec * 2 > MAX_PREC:
                raise AmbiguityError(
                    f"orbit values not separated at {inst.prec} bits"
                ) from None
            inst = numeric_instance(inst.report, inst.prec * 2)


def galois_invariance_check(model: PermutationModel, instance: NumericInstance) -> bool:
    """Whether prod over the model of (x - g(theta)) has coefficients in O_K.

    theta is a fixed integral expression in the six roots (a linear form plus
    one product, since for a = 0 every linear form is a multiple of alpha
    with coefficients in Q(zeta3)).  This holds when the
    model contains the actual Galois group (as permutations of the slots), so
    together with a matching order it confirms the group.  Needs a and b
    with integer components, over Q or an imaginary quadratic field.
    """
    report = instance.report
    K: Field = report.field
    for c in (report.a, report.b):
        comps = (c,) if isinstance(K, Rationals) else (c.u, c.v)
        if any(getattr(x, "denominator", 1) != 1 for x in comps):
            raise ValueError("galois_invariance_check needs integral coefficients")
    if isinstance(K, QuadraticField) and K.d > 0:
        raise ValueError("real quadratic fields are not supported")
    weights = (2, 3, 5, 7, 11, 13)
    roots = instance.slot_values()
    top = max(abs(r) for r in roots)
    bound = sum(weights) * top + top * top + 1
    bits = int(model.order * math.log2(2 * float(bound))) + 96
    if bits > instance.prec:
        instance = numeric_instance(report, bits)
        roots = instance.slot_values()
    ctx = instance.ctx
    values = [
        sum(w * roots[g[k]] for k, w in enumerate(weights)) + roots[g[0]] * roots[g[1]]
        for g in model.elements
    ]
    coeffs = [ctx.mpc(1)]
    for v in values:
        coeffs = [ctx.mpc(0)] + coeffs
        for i in range(len(coeffs) - 1):
            coeffs[i] -= v * coeffs[i + 1]
    if isinstance(K, QuadraticField):
        d = K.d
        omega = ctx.sqrt(ctx.mpc(d)) if d % 4 != 1 else (1 + ctx.sqrt(ctx.mpc(d))) / 2
    else:
        omega = None
    tol = ctx.mpf(2) ** -32
    for c in coeffs:
        if omega is None:
            if abs(c.imag) > tol or abs(c.real - ctx.nint(c.real)) > tol:
                return False
            continue
        y = ctx.nint(c.imag / omega.imag)
        x = ctx.nint(c.real - y * omega.real)
        if abs(c - (x + y * omega)) > tol:
            return False
    return True
