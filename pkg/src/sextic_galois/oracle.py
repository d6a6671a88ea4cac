"""Independent checks on the classifier.

* Permutation models of the five possible groups acting on the six roots,
  indexed ``[alpha, alpha*z, alpha*z^2, beta, beta*z, beta*z^2]`` with
  ``z`` a primitive cube root of unity and ``alpha*beta`` a cube root of b.
* Cycle-type profiles and Frobenius sampling (reduction modulo primes).
* Splitting degrees and exhaustive irreducibility scans over finite fields.
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import lcm, sqrt
from typing import Iterable, Sequence

from sympy import primerange

from .classifier import (
    CUBE,
    DECISION_TABLE,
    GROUP_ORDERS,
    NEITHER,
    RESOLVENT,
    GaloisClass,
    classify,
    finite_irreducibility,
)
from .errors import EmptySample, InternalInconsistency, ModelConstructionError, NoCandidate
from .fields import (
    FiniteField,
    QuadraticField,
    Rationals,
    field_of_order,
    is_cube,
    is_square,
    prime_field,
)
from .poly import (
    Polynomial,
    cubic_rational_root,
    distinct_degree,
    factor_degrees,
    resolvent_cubic,
    squarefree_decomposition,
    trinomial,
)

log = logging.getLogger(__name__)

Perm = tuple[int, ...]
CycleType = tuple[int, ...]

SLOT_NAMES = ("alpha", "alpha*z", "alpha*z^2", "beta", "beta*z", "beta*z^2")


# -- permutations ----------------------------------------------------------------


def compose(p: Perm, q: Perm) -> Perm:
    """p after q."""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def cycle_type(p: Perm) -> CycleType:
    seen = [False] * len(p)
    lengths = []
    for start in range(len(p)):
        if seen[start]:
            continue
        n, i = 0, start
        while not seen[i]:
            seen[i] = True
            i = p[i]
            n += 1
        lengths.append(n)
    return tuple(sorted(lengths, reverse=True))


def closure(gens: Iterable[Perm], degree: int = 6) -> frozenset[Perm]:
    identity = tuple(range(degree))
    gens = list(gens)
    group = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                x = compose(g, h)
                if x not in group:
                    group.add(x)
                    nxt.append(x)
        frontier = nxt
    return frozenset(group)


def subgroups(elements: Iterable[Perm]) -> list[frozenset[Perm]]:
    """All subgroups of a small permutation group, by joining cyclic ones."""
    elements = list(elements)
    cyclic = {closure([g]) for g in elements}
    found = set(cyclic)
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclic:
                if C <= H:
                    continue
                J = closure(set(H) | set(C))
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    return sorted(found, key=lambda H: (len(H), sorted(H)))


def is_normal(H: frozenset[Perm], elements: Iterable[Perm]) -> bool:
    for g in elements:
        gi = inverse(g)
        for h in H:
            if compose(compose(g, h), gi) not in H:
                return False
    return True


# -- models --------------------------------------------------------------------


@dataclass(frozen=True)
class AtomAction:
    """Images of the generators: alpha -> slot ``alpha_slot``,
    z -> z**zeta, cbrt(b) -> cbrt(b) * z**cbrt_b."""

    alpha_slot: int
    zeta: int
    cbrt_b: int

    @property
    def beta_slot(self) -> int:
        # F(beta) = F(cbrt b) / F(alpha)
        s, k = self.alpha_slot, self.cbrt_b
        if s < 3:
            return 3 + (k - s) % 3
        return (k - (s - 3)) % 3

    def permutation(self) -> Perm:
        j = self.zeta
        a, b = self.alpha_slot, self.beta_slot
        out = []
        for base, m in ((a, 0), (a, 1), (a, 2), (b, 0), (b, 1), (b, 2)):
            out.append(base - base % 3 + (base % 3 + j * m) % 3)
        return tuple(out)


@dataclass(frozen=True)
class PermutationModel:
    group: GaloisClass
    elements: tuple[Perm, ...]
    actions: tuple[AtomAction, ...]

    @property
    def tag(self) -> str:
        return self.group.tag

    @property
    def order(self) -> int:
        return len(self.elements)

    def action_of(self, perm: Perm) -> AtomAction:
        return self.actions[self.elements.index(perm)]


def _admissible(act: AtomAction, case: int, branch: str) -> bool:
    s, j, k = act.alpha_slot, act.zeta, act.cbrt_b
    if case == 3 and j != 1:  # z lies in K
        return False
    if case == 2 and (j == 1) != (s < 3):  # sqrt(-3*delta) = (2z+1)(alpha^3-beta^3) lies in K
        return False
    if branch == CUBE and k != 0:  # cbrt(b) lies in K
        return False
    if branch == RESOLVENT and k != (2 * s) % 3:  # cbrt(b)*(alpha+beta) lies in K
        return False
    return True


def build_model(group: GaloisClass) -> PermutationModel:
    """Permutation model for a (case, branch) cell of the decision table.

    Elements are every admissible choice of images of alpha, z and cbrt(b);
    the result is checked to be a transitive group of the expected order.
    """
    if DECISION_TABLE.get((group.theorem_case, group.branch)) != group.tag:
        raise ModelConstructionError(f"no such cell: {group}")
    actions = tuple(
        AtomAction(s, j, k)
        for s in range(6)
        for j in (1, 2)
        for k in range(3)
        if _admissible(AtomAction(s, j, k), group.theorem_case, group.branch)
    )
    elements = tuple(a.permutation() for a in actions)
    model = PermutationModel(group, elements, actions)
    verify_model(model)
    return model


def verify_model(model: PermutationModel) -> None:
    elems = set(model.elements)
    if len(elems) != len(model.elements):
        raise ModelConstructionError("repeated permutation")
    if tuple(range(6)) not in elems:
        raise ModelConstructionError("identity missing")
    for g in model.elements:
        if inverse(g) not in elems:
            raise ModelConstructionError("not closed under inverses")
        for h in model.elements:
            if compose(g, h) not in elems:
                raise ModelConstructionError("not closed under composition")
    if len(elems) != GROUP_ORDERS[model.tag]:
        raise ModelConstructionError(
            f"{model.tag} model has {len(elems)} elements, expected {GROUP_ORDERS[model.tag]}"
        )
    if {g[0] for g in elems} != set(range(6)):
        raise ModelConstructionError("action is not transitive")
    for act, g in zip(model.actions, model.elements):
        # images must respect F(alpha) * F(beta) = F(cbrt b)
        ea = g[0] % 3 + (g[3] % 3)
        if (ea - act.cbrt_b) % 3 or (g[0] < 3) == (g[3] < 3):
            raise ModelConstructionError("permutation inconsistent with its atom action")


def canonical_model(tag: str) -> PermutationModel:
    """One model per isomorphism type (profiles depend only on the type)."""
    case, branch = {
        "D6": (1, RESOLVENT),
        "S3xS3": (1, NEITHER),
        "C6": (2, CUBE),
        "S3": (2, RESOLVENT),
        "C3xS3": (2, NEITHER),
    }[tag]
    return build_model(GaloisClass(tag, case, branch))


ALL_TAGS = ("D6", "S3xS3", "C6", "S3", "C3xS3")


# -- cycle types -----------------------------------------------------------------


def cycle_type_profile(model: PermutationModel) -> dict[CycleType, Fraction]:
    counts = Counter(cycle_type(g) for g in model.elements)
    n = len(model.elements)
    return {t: Fraction(c, n) for t, c in sorted(counts.items(), reverse=True)}


def _reduce_mod(K, x, p: int, sqrt_d: int | None):
    if isinstance(K, QuadraticField):
        u, v = x
        return (u.numerator * pow(u.denominator, -1, p) + v.numerator * pow(v.denominator, -1, p) * sqrt_d) % p
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, p) % p


def frobenius_sample(a, b, prime_bound: int, field=None) -> Counter:
    """Tally factor-degree patterns of x^6 + a x^3 + b modulo primes.

    Over Q, a and b are integers and every prime p <= prime_bound not
    dividing 3*b*(a^2 - 4b) contributes one cycle type.  Over Q(sqrt d) the
    degree-one primes are used: p splits, and each square root s of d mod p
    gives a reduction map u + v*sqrt(d) -> u + v*s.
    """
    K = field or Rationals()
    if isinstance(K, FiniteField):
        raise TypeError("Frobenius sampling needs a characteristic-zero field")
    if isinstance(K, Rationals):
        a, b = Fraction(a), Fraction(b)
        if a.denominator != 1 or b.denominator != 1:
            raise ValueError("frobenius_sample over Q needs integer coefficients")
    delta = K.sub(K.mul(a, a), K.mul(K.from_int(4), b))
    bad = _bad_part(K, [a, b], K.mul(K.from_int(3), K.mul(b, delta)))
    tally: Counter = Counter()
    for p in primerange(2, prime_bound + 1):
        if bad % p == 0:
            continue
        Fp = prime_field(p)
        if isinstance(K, QuadraticField):
            if p == 2:
                continue
            s = is_square(K.d % p, Fp)
            if s is None:
                continue
            roots = [s, (-s) % p]
        else:
            roots = [None]
        for s in roots:
            f = Polynomial(
                [_reduce_mod(K, b, p, s), 0, 0, _reduce_mod(K, a, p, s), 0, 0, 1], Fp
            )
            tally[tuple(factor_degrees(f))] += 1
    if not tally:
        raise EmptySample(f"no usable prime up to {prime_bound}")
    return tally


def _bad_part(K, coeffs, disc_part) -> int:
    """Integer divisible by every prime where reduction is not allowed."""
    if isinstance(K, QuadraticField):
        dens = 1
        for c in coeffs:
            dens = lcm(dens, c.u.denominator, c.v.denominator)
        norm = K.norm(disc_part)
        return 2 * K.d * dens * norm.numerator * norm.denominator
    return Fraction(disc_part).numerator


@dataclass(frozen=True)
class Verdict:
    status: str  # "identified", "tie" or "insufficient-data"
    ranking: list[tuple[str, float]]  # surviving tags, closest profile first
    top: list[str]  # tags tied for first place
    excluded: list[str]
    samples: int


def total_variation(observed: dict, profile: dict) -> Fraction:
    n = sum(observed.values())
    keys = set(observed) | set(profile)
    return sum(
        (abs(Fraction(observed.get(t, 0), n) - profile.get(t, 0)) for t in keys), Fraction(0)
    ) / 2


def identify(observed: dict, candidates: Sequence[PermutationModel]) -> Verdict:
    """Rank candidate groups against observed cycle-type counts.

    A candidate is excluded outright when some observed type is absent from
    its profile.  Survivors are ranked by total-variation distance; those
    within 1/sqrt(N) of the best (N = number of samples) count as tied.
    """
    n = sum(observed.values())
    if n == 0:
        raise EmptySample("no observations")
    survivors, excluded = [], []
    for model in candidates:
        profile = cycle_type_profile(model)
        if all(t in profile for t in observed if observed[t]):
            survivors.append((model.tag, total_variation(observed, profile)))
        else:
            excluded.append(model.tag)
    if not survivors:
        raise NoCandidate("every candidate group was excluded")
    survivors.sort(key=lambda s: (s[1], s[0]))
    margin = 1 / sqrt(n)
    best = survivors[0][1]
    top = [tag for tag, d in survivors if float(d - best) < margin]
    if len(top) == 1:
        status = "identified"
    elif len(top) == len(survivors):
        status = "insufficient-data"
    else:
        status = "tie"
    ranking = [(tag, float(d)) for tag, d in survivors]
    return Verdict(status, ranking, top, excluded, n)


# -- finite fields -----------------------------------------------------------------


def ff_splitting_degree(f: Polynomial) -> int:
    """Degree over F_q of the splitting field of f."""
    if f.degree < 1:
        raise ValueError("ff_splitting_degree needs a nonconstant polynomial")
    degs = [1]
    for g, _ in squarefree_decomposition(f):
        degs.extend(i for i, _ in distinct_degree(g))
    return reduce(lcm, degs)


@dataclass
class ScanRow:
    q: int
    total_pairs: int = 0
    irreducible_count: int = 0
    disagreements: int = 0
    offending: list = field(default_factory=list)  # (q, a, b, reason)


@dataclass
class ScanReport:
    rows: list[ScanRow]

    @property
    def disagreements(self) -> int:
        return sum(r.disagreements for r in self.rows)

    def to_tsv(self) -> str:
        lines = ["q\ttotal_pairs\tirreducible_count\tdisagreements"]
        for r in self.rows:
            lines.append(f"{r.q}\t{r.total_pairs}\t{r.irreducible_count}\t{r.disagreements}")
        return "\n".join(lines) + "\n"


def scan_field(K: FiniteField) -> ScanRow:
    """Check the irreducibility criterion on every (a, b) in F_q^2."""
    row = ScanRow(K.q)
    for a in K.elements():
        for b in K.elements():
            row.total_pairs += 1
            f = trinomial(a, b, K)
            truth = factor_degrees(f) == [6]
            claim = finite_irreducibility(a, b, K)
            problems = []
            if claim != truth:
                problems.append(f"criterion says {claim}, factorization says {truth}")
            if truth:
                row.irreducible_count += 1
                if is_cube(b, K) is not None and cubic_rational_root(resolvent_cubic(a, b, K), K) is not None:
                    problems.append("b is a cube and R is reducible")
                if K.p != 3:
                    if ff_splitting_degree(f) != 6:
                        problems.append("splitting degree is not 6")
                    try:
                        group = classify(a, b, K).group
                    except InternalInconsistency as exc:
                        problems.append(f"classifier guard fired: {exc}")
                    else:
                        if group is None or group.tag != "C6":
                            problems.append(f"classified as {group}")
            if problems:
                row.disagreements += 1
                row.offending.append((K.q, K.format(a), K.format(b), "; ".join(problems)))
    log.info("scanned F_%d: %d irreducible", K.q, row.irreducible_count)
    return row


def exhaustive_scan(q_list: Iterable[int], workers: int = 1) -> ScanReport:
    fields = [field_of_order(q) for q in q_list]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(scan_field, fields))
    else:
        rows = [scan_field(K) for K in fields]
    return ScanReport(rows)
