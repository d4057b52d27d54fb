"""Graded polynomial presentations of Cox rings.

A :class:`CoxPresentation` is a polynomial ring k[x_1..x_n] whose variables
carry degrees in an abelian group, modulo homogeneous relations, together
with generators of the irrelevant ideal.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations, product
from math import lcm
from typing import Optional, Sequence

from .abelian import AbelianGroup
from .polynomial import Monomial, Polynomial, monomial, support, total_degree


class Verdict(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    UNKNOWN = "unknown"

    @staticmethod
    def meet(verdicts) -> "Verdict":
        verdicts = list(verdicts)
        if Verdict.FAIL in verdicts:
            return Verdict.FAIL
        if Verdict.UNKNOWN in verdicts:
            return Verdict.UNKNOWN
        return Verdict.PASS


@dataclass(frozen=True)
class CoxPresentation:
    variables: tuple[tuple[str, tuple[int, ...]], ...]
    grading_group: AbelianGroup
    relations: tuple[Polynomial, ...] = ()
    irrelevant: tuple[Polynomial, ...] = (Polynomial.const(1),)

    def __post_init__(self):
        G = self.grading_group
        names = [v for v, _ in self.variables]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        object.__setattr__(self, "variables", tuple((v, G.reduce(d)) for v, d in self.variables))
        object.__setattr__(self, "relations", tuple(p for p in self.relations if not p.is_zero()))
        object.__setattr__(self, "irrelevant", tuple(self.irrelevant))
        known = set(names)
        for p in self.relations + self.irrelevant:
            unknown = p.variables() - known
            if unknown:
                raise KeyError(f"undeclared variables {sorted(unknown)} in {p}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.variables)

    def degree(self, name: str) -> tuple[int, ...]:
        for v, d in self.variables:
            if v == name:
                return d
        raise KeyError(f"unknown variable {name!r}")

    def degree_map(self) -> dict[str, tuple[int, ...]]:
        return dict(self.variables)


def degree_of_monomial(p: CoxPresentation, e: Monomial) -> tuple[int, ...]:
    """Sum of exponent times variable degree, reduced in the grading group."""
    G = p.grading_group
    degs = p.degree_map()
    total = [0] * G.ngens
    for name, k in e:
        if name not in degs:
            raise KeyError(f"unknown variable {name!r}")
        total = [t + k * x for t, x in zip(total, degs[name])]
    return G.reduce(total)


def polynomial_degrees(p: CoxPresentation, f: Polynomial) -> list[tuple[int, ...]]:
    """Distinct degrees of the terms of ``f`` in term order."""
    seen: list[tuple[int, ...]] = []
    for m, _ in f.sorted_terms(p.names):
        d = degree_of_monomial(p, m)
        if d not in seen:
            seen.append(d)
    return seen


@dataclass(frozen=True)
class HomogeneityEntry:
    kind: str  # "relation" or "irrelevant"
    index: int
    polynomial: Polynomial
    degrees: tuple[tuple[int, ...], ...]

    @property
    def homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    @property
    def degree(self) -> Optional[tuple[int, ...]]:
        return self.degrees[0] if len(self.degrees) == 1 else None


@dataclass(frozen=True)
class HomogeneityReport:
    entries: tuple[HomogeneityEntry, ...]

    @property
    def ok(self) -> bool:
        return all(e.homogeneous for e in self.entries)

    def failures(self) -> list[HomogeneityEntry]:
        return [e for e in self.entries if not e.homogeneous]


def check_homogeneous(p: CoxPresentation) -> HomogeneityReport:
    entries = []
    for kind, polys in (("relation", p.relations), ("irrelevant", p.irrelevant)):
        for i, f in enumerate(polys):
            entries.append(HomogeneityEntry(kind, i, f, tuple(polynomial_degrees(p, f))))
    return HomogeneityReport(tuple(entries))


# -- elimination of simple root relations ------------------------------------


def _root_shape(f: Polynomial):
    """For c_z z^r + c_x x (x != z) return the candidates (x, value) for x."""
    if len(f.terms) != 2:
        return []
    (m1, c1), (m2, c2) = f.terms.items()
    if len(m1) != 1 or len(m2) != 1:
        return []
    (v1, e1), (v2, e2) = m1[0], m2[0]
    if v1 == v2:
        return []
    out = []
    if e1 == 1:
        out.append((v1, Polynomial.from_monomial(m2, -c2 / c1)))
    if e2 == 1:
        out.append((v2, Polynomial.from_monomial(m1, -c1 / c2)))
    return out


def _mixed_variables(p: CoxPresentation) -> frozenset[str]:
    # variables occurring in some relation inside a monomial with another variable
    return frozenset(v for f in p.relations for m in f.terms if len(m) > 1 for v, _ in m)


def _root_targets(p: CoxPresentation) -> dict[int, tuple[str, Polynomial]]:
    """The variable each currently eligible relation eliminates, with its value.

    Linear identifications c u + c' v come first and eliminate the variable
    declared earlier, so in every chain of identifications the last declared
    variable survives whatever the order. Once none are left, z^r - x
    (r >= 2) qualifies when no other such relation targets x and x occurs in
    the relations only through pure powers x^e. Substitution maps pure powers
    to pure powers and leaves mixed monomials alone, so a qualifying relation
    keeps qualifying and the result does not depend on the order of
    eliminations. A variable rooted twice (z1^a - x, z2^b - x) is left alone.
    """
    rank = {v: i for i, v in enumerate(p.names)}
    shapes = {i: _root_shape(f) for i, f in enumerate(p.relations)}
    linear = {i: min(c, key=lambda t: rank[t[0]]) for i, c in shapes.items() if len(c) == 2}
    if linear:
        return linear
    mixed = _mixed_variables(p)
    counts = Counter(c[0][0] for c in shapes.values() if c)
    return {i: c[0] for i, c in shapes.items() if c and counts[c[0][0]] == 1 and c[0][0] not in mixed}


def simple_root_relations(p: CoxPresentation) -> list[int]:
    """Indices of relations z^r - x that can be eliminated now."""
    return sorted(_root_targets(p))


def eliminate_relation(p: CoxPresentation, index: int) -> CoxPresentation:
    """Use relation ``index`` (z^r - x) to substitute x := z^r and drop x."""
    target = _root_targets(p).get(index)
    if target is None:
        raise ValueError(f"relation {p.relations[index]} is not an eliminable root relation")
    x, value = target
    relations = tuple(f.subs(x, value) for i, f in enumerate(p.relations) if i != index)
    irrelevant = tuple(f.subs(x, value) for f in p.irrelevant)
    variables = tuple((v, d) for v, d in p.variables if v != x)
    return replace(p, variables=variables, relations=relations, irrelevant=irrelevant)


def eliminate_simple_roots(p: CoxPresentation) -> CoxPresentation:
    """Repeatedly remove relations z^r - x by substituting x := z^r everywhere."""
    while True:
        idx = simple_root_relations(p)
        if not idx:
            return p
        p = eliminate_relation(p, idx[0])


def is_polynomial(p: CoxPresentation) -> bool:
    return not eliminate_simple_roots(p).relations


# -- singular locus of a disjoint-support relation ---------------------------


class Smoothness(enum.Enum):
    SMOOTH = "smooth"
    SMOOTH_ON_COMPLEMENT = "smooth-on-complement"
    SINGULAR = "singular"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SingularityReport:
    verdict: Smoothness
    strata: tuple[frozenset[str], ...] = ()
    outside_irrelevant: tuple[frozenset[str], ...] = ()
    reason: str = ""

    def describe(self) -> str:
        if not self.strata:
            return self.reason
        parts = []
        for s in self.strata:
            tag = "" if s in self.outside_irrelevant else " (inside V(J_irr))"
            parts.append("{" + "=".join(sorted(s)) + "=0}" + tag)
        return f"{self.reason}; singular strata: " + ", ".join(parts)


def vanishes_on_stratum(f: Polynomial, zero: frozenset[str]) -> bool:
    """Whether ``f`` is identically zero on the coordinate subspace {zero = 0}."""
    return all(support(m) & zero for m in f.terms)


def _term_choices(m: Monomial) -> list[frozenset[str]]:
    # Minimal sets of coordinates whose vanishing kills every partial of m.
    choices = [frozenset({v}) for v, e in m if e >= 2]
    choices += [frozenset(pair) for pair in combinations([v for v, _ in m], 2)]
    return choices


def binomial_singular_locus(p: CoxPresentation) -> SingularityReport:
    """Singular locus of Spec R for a single relation with disjoint-support terms.

    Each variable occurs in at most one term, so every partial derivative is
    a monomial and the singular locus is a union of coordinate subspaces.
    Relations outside this class give ``UNKNOWN``.
    """
    if not p.relations:
        return SingularityReport(Smoothness.SMOOTH, reason="no relations: affine space")
    if len(p.relations) > 1:
        return SingularityReport(Smoothness.UNKNOWN, reason="more than one relation")
    f = p.relations[0]
    terms = list(f.terms)
    if len(terms) < 2:
        return SingularityReport(Smoothness.UNKNOWN, reason="relation is not a binomial")
    supports = [support(m) for m in terms]
    if any(a & b for a, b in combinations(supports, 2)):
        return SingularityReport(Smoothness.UNKNOWN, reason="terms share variables")
    if any(total_degree(m) < 2 for m in terms):
        return SingularityReport(Smoothness.UNKNOWN, reason="a term has total degree < 2")

    candidates = {frozenset().union(*pick) for pick in product(*(_term_choices(m) for m in terms))}
    strata = sorted(
        (s for s in candidates if not any(o < s for o in candidates)),
        key=lambda s: (len(s), sorted(s)),
    )
    outside = tuple(s for s in strata if not all(vanishes_on_stratum(g, s) for g in p.irrelevant))
    if not strata:
        return SingularityReport(Smoothness.SMOOTH, reason="hypersurface is smooth")
    if outside:
        return SingularityReport(Smoothness.SINGULAR, tuple(strata), outside, "singular outside V(J_irr)")
    return SingularityReport(
        Smoothness.SMOOTH_ON_COMPLEMENT, tuple(strata), (), "singular locus contained in V(J_irr)"
    )


# -- units / degree-zero monomials -------------------------------------------


@dataclass(frozen=True)
class UnitCheck:
    verdict: Verdict
    witness: Optional[Monomial] = None
    reason: str = ""


def _solve_rational(rows: list[list[Fraction]], rhs: list[Fraction]) -> Optional[list[Fraction]]:
    """Unique solution of a linear system, or None if singular/inconsistent."""
    n = len(rows[0]) if rows else 0
    a = [r[:] + [b] for r, b in zip(rows, rhs)]
    piv_row = 0
    pivots = []
    for col in range(n):
        pr = next((i for i in range(piv_row, len(a)) if a[i][col] != 0), None)
        if pr is None:
            return None
        a[piv_row], a[pr] = a[pr], a[piv_row]
        inv = 1 / a[piv_row][col]
        a[piv_row] = [x * inv for x in a[piv_row]]
        for i in range(len(a)):
            if i != piv_row and a[i][col]:
                q = a[i][col]
                a[i] = [x - q * y for x, y in zip(a[i], a[piv_row])]
        pivots.append(col)
        piv_row += 1
    if any(row[-1] != 0 for row in a[piv_row:]):
        return None
    return [a[i][-1] for i in range(n)]


def _zero_in_hull(points: list[tuple[int, ...]]) -> Optional[list[Fraction]]:
    """Convex weights on ``points`` combining to zero, if any exist.

    By Caratheodory it suffices to look at affinely independent subsets of
    at most dim + 1 points.
    """
    if not points:
        return None
    dim = len(points[0])
    for size in range(1, min(dim + 1, len(points)) + 1):
        for subset in combinations(range(len(points)), size):
            rows = [[Fraction(points[j][k]) for j in subset] for k in range(dim)]
            rows.append([Fraction(1)] * size)
            rhs = [Fraction(0)] * dim + [Fraction(1)]
            sol = _solve_rational(rows, rhs)
            if sol is not None and all(c >= 0 for c in sol):
                weights = [Fraction(0)] * len(points)
                for j, c in zip(subset, sol):
                    weights[j] = c
                return weights
    return None


def degree_zero_subalgebra_check(p: CoxPresentation) -> UnitCheck:
    """Certify that only constants have degree zero, or exhibit a monomial that does.

    Pass: every variable has a degree with nonzero free part and the free
    parts lie in a common open half-space. Fail: the free parts of the
    variables that have one admit a nonnegative combination summing to
    zero, giving a nonconstant degree-0 monomial. Variables of pure torsion
    degree are beyond this test and lead to Unknown.
    """
    G = p.grading_group
    k = len(G.torsion)
    free_vars = [(v, d) for v, d in p.variables if any(d[k:])]
    torsion_vars = [v for v, d in p.variables if not any(d[k:])]

    weights = _zero_in_hull([d[k:] for _, d in free_vars])
    if weights is not None:
        den = 1
        for w in weights:
            den = lcm(den, w.denominator)
        expo = [int(w * den) for w in weights]
        m = monomial({v: e for (v, _), e in zip(free_vars, expo)})
        order = G.element_order(degree_of_monomial(p, m))
        m = monomial({v: e * order for v, e in m})
        return UnitCheck(Verdict.FAIL, m, "nonconstant monomial of degree 0")
    if torsion_vars:
        return UnitCheck(
            Verdict.UNKNOWN,
            reason="variables of torsion degree: " + ", ".join(torsion_vars),
        )
    return UnitCheck(Verdict.PASS, reason="free degrees lie in an open half-space")
