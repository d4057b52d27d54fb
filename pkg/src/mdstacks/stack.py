"""Quotient stacks [Spec R \\ V(J) / Hom(A, k^*)] described by Cox data.

A :class:`StackData` couples a grading group ``A`` with a graded presentation
of ``R`` and the generators of ``J``. The operations here rewrite that data:
root constructions along sections and line bundles, rigidification into a
rigid stack plus a list of line-bundle roots, and the toric checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

from .abelian import (
    AbelianGroup,
    DiagonalizableGroup,
    GroupHom,
    IntMatrix,
    dual_group,
    pushout_root,
    solve_integer,
    subgroup_cokernel,
)
from .gradedring import (
    CoxPresentation,
    SingularityReport,
    Smoothness,
    Verdict,
    binomial_singular_locus,
    check_homogeneous,
    degree_zero_subalgebra_check,
    eliminate_simple_roots,
    is_polynomial,
    polynomial_degrees,
)
from .polynomial import Polynomial


class InhomogeneousError(ValueError):
    """A polynomial whose terms have different degrees."""

    def __init__(self, what: str, poly: Polynomial, degrees):
        degs = ", ".join(str(tuple(d)) for d in degrees)
        super().__init__(f"{what} {poly} is not homogeneous (term degrees {degs})")
        self.poly = poly
        self.degrees = list(degrees)


@dataclass(frozen=True)
class DivisorRoot:
    section: Polynomial
    order: int


@dataclass(frozen=True)
class LineBundleRoot:
    degree: tuple[int, ...]
    order: int


@dataclass(frozen=True)
class RootRecord:
    """One root construction applied to a stack.

    ``tautological`` is the class t of the new tautological bundle in the
    grading of the resulting stack; ``order`` times it equals ``datum_class``,
    the image of the rooted section's degree or of the rooted line bundle.
    """

    kind: Union[DivisorRoot, LineBundleRoot]
    tautological: tuple[int, ...]
    datum_class: tuple[int, ...]
    variable: Optional[str] = None

    @property
    def order(self) -> int:
        return self.kind.order


@dataclass(frozen=True)
class StackData:
    name: str
    cox: CoxPresentation
    provenance: tuple[RootRecord, ...] = ()

    @property
    def grading(self) -> AbelianGroup:
        return self.cox.grading_group

    @classmethod
    def create(
        cls,
        name: str,
        grading: AbelianGroup,
        variables: Sequence[tuple[str, Sequence[int]]],
        relations: Sequence[Polynomial] = (),
        irrelevant: Sequence[Polynomial] = (Polynomial.const(1),),
    ) -> "StackData":
        cox = CoxPresentation(
            tuple((v, tuple(d)) for v, d in variables), grading, tuple(relations), tuple(irrelevant)
        )
        report = check_homogeneous(cox)
        if not report.ok:
            bad = report.failures()[0]
            raise InhomogeneousError(bad.kind, bad.polynomial, bad.degrees)
        return cls(name, cox)

    def simplified(self) -> "StackData":
        """Same stack with every relation z^r - x eliminated."""
        return replace(self, cox=eliminate_simple_roots(self.cox))


def point() -> StackData:
    return StackData.create("point", AbelianGroup(0), [])


def _fresh_name(taken, base: str = "z") -> str:
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def _mapped_variables(cox: CoxPresentation, iota: GroupHom):
    return tuple((v, iota(d)) for v, d in cox.variables)


def section_degree(X: StackData, s: Polynomial) -> tuple[int, ...]:
    if s.is_zero():
        raise ValueError("cannot take a root of the zero section")
    degrees = polynomial_degrees(X.cox, s)
    if len(degrees) != 1:
        raise InhomogeneousError("section", s, degrees)
    return degrees[0]


def divisor_root(X: StackData, s: Polynomial, r: int, name: Optional[str] = None) -> StackData:
    """r-th root along the divisor cut out by the homogeneous section ``s``.

    The grading becomes the pushout (A + Z)/<(deg s, -r)>, a new variable z
    of the tautological degree is adjoined and the relation z^r - s added.
    The irrelevant ideal is extended unchanged.
    """
    d = section_degree(X, s)
    po = pushout_root(X.grading, d, r)
    z = name or _fresh_name(set(X.cox.names))
    if z in X.cox.names:
        raise ValueError(f"variable {z!r} already exists")
    variables = _mapped_variables(X.cox, po.inclusion) + ((z, po.tautological),)
    relations = X.cox.relations + (Polynomial.var(z, r) - s,)
    cox = CoxPresentation(variables, po.group, relations, X.cox.irrelevant)
    record = RootRecord(DivisorRoot(s, r), po.tautological, po.inclusion(d), z)
    return StackData(f"root({X.name}; {s}, {r})", cox, X.provenance + (record,))


def _line_bundle_root(X: StackData, d: Sequence[int], r: int) -> tuple[StackData, GroupHom]:
    d = X.grading.reduce(d)
    po = pushout_root(X.grading, d, r)
    cox = CoxPresentation(_mapped_variables(X.cox, po.inclusion), po.group, X.cox.relations, X.cox.irrelevant)
    record = RootRecord(LineBundleRoot(d, r), po.tautological, po.inclusion(d))
    return StackData(f"root({X.name}; O{d}, {r})", cox, X.provenance + (record,)), po.inclusion


def line_bundle_root(X: StackData, d: Sequence[int], r: int) -> StackData:
    """r-th root of the line bundle of degree ``d``; only the grading changes."""
    return _line_bundle_root(X, d, r)[0]


@dataclass(frozen=True)
class EffectiveDegrees:
    subgroup: AbelianGroup
    inclusion: GroupHom
    stabilizer: DiagonalizableGroup


def effective_degree_subgroup(X: StackData) -> EffectiveDegrees:
    """Subgroup generated by the variable degrees and the generic stabilizer."""
    sq = subgroup_cokernel(X.grading, [d for _, d in X.cox.variables])
    return EffectiveDegrees(sq.sub, sq.inclusion, dual_group(sq.quotient))


@dataclass(frozen=True)
class GerbeFactorization:
    rigidified: StackData
    roots: tuple[tuple[tuple[int, ...], int], ...]


def rigidify(X: StackData) -> GerbeFactorization:
    """Split X into its rigidification and the roots that rebuild it.

    With A_eff the subgroup of effective degrees and A/A_eff = Z/r_1 + ... +
    Z/r_n, the rigidified stack is graded by A_eff and each root is
    (r_i M_i, r_i) for the chosen lift M_i of the i-th generator.
    """
    A = X.grading
    degrees = [d for _, d in X.cox.variables]
    sq = subgroup_cokernel(A, degrees)
    if sq.quotient.free_rank:
        raise ValueError(
            f"{X.name}: effective degrees have infinite index; the generic stabilizer is not finite"
        )
    G = IntMatrix.from_columns(degrees, A.ngens)
    stacked = G.hstack(A.relation_matrix())
    m = len(degrees)
    roots = []
    for r, lift in zip(sq.quotient.torsion, sq.lifts):
        target = A.scale(r, lift)
        sol = solve_integer(stacked, target)
        # r * lift lies in the effective subgroup by construction.
        assert sol is not None
        roots.append((sq.generator_map(sol[:m]), r))
    variables = tuple((v, sq.generator_map(tuple(int(i == j) for i in range(m)))) for j, (v, _) in enumerate(X.cox.variables))
    cox = CoxPresentation(variables, sq.sub, X.cox.relations, X.cox.irrelevant)
    return GerbeFactorization(StackData(f"rig({X.name})", cox), tuple(roots))


def reconstruct(f: GerbeFactorization, name: Optional[str] = None) -> StackData:
    """Take the listed roots of line bundles on the rigidified stack.

    Root classes are given in the rigidified grading and are carried along
    through each pushout before being used.
    """
    X = f.rigidified
    pending = [d for d, _ in f.roots]
    for i, (_, r) in enumerate(f.roots):
        X, iota = _line_bundle_root(X, pending[i], r)
        pending = [iota(d) if j > i else d for j, d in enumerate(pending)]
    return replace(X, name=name) if name else X


def is_toric(X: StackData) -> bool:
    return is_polynomial(X.cox)


TORSION_WARNING = (
    "grading group has torsion; the closed embedding into a toric stack with "
    "the same Picard group is only guaranteed for a free class group"
)


def ambient_toric(X: StackData) -> tuple[StackData, Optional[str]]:
    """Drop all relations: the toric stack whose Cox ring surjects onto R(X)."""
    cox = replace(X.cox, relations=())
    warning = TORSION_WARNING if X.grading.torsion else None
    return StackData(f"ambient({X.name})", cox), warning


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class Diagnostic:
    check: str
    verdict: Verdict
    detail: str = ""
    data: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.verdict is Verdict.FAIL and not self.detail:
            raise ValueError("a failing diagnostic needs a witness")


def smoothness(X: StackData) -> SingularityReport:
    """Smoothness of Spec R minus V(J) after eliminating simple root relations."""
    return binomial_singular_locus(eliminate_simple_roots(X.cox))


def validate(X: StackData) -> list[Diagnostic]:
    out = []
    hom = check_homogeneous(X.cox)
    if hom.ok:
        out.append(Diagnostic("homogeneity", Verdict.PASS, "all relations and irrelevant generators homogeneous"))
    else:
        bad = hom.failures()[0]
        degs = ", ".join(str(d) for d in bad.degrees)
        out.append(
            Diagnostic(
                "homogeneity",
                Verdict.FAIL,
                f"{bad.kind} {bad.polynomial} has terms of degrees {degs}",
                {"polynomial": str(bad.polynomial), "degrees": [list(d) for d in bad.degrees]},
            )
        )
        return out

    units = degree_zero_subalgebra_check(X.cox)
    detail = units.reason
    if units.witness is not None:
        detail = f"{units.reason}: {Polynomial.from_monomial(units.witness)}"
    out.append(Diagnostic("units", units.verdict, detail))

    sing = smoothness(X)
    verdict = {
        Smoothness.SMOOTH: Verdict.PASS,
        Smoothness.SMOOTH_ON_COMPLEMENT: Verdict.PASS,
        Smoothness.SINGULAR: Verdict.FAIL,
        Smoothness.UNKNOWN: Verdict.UNKNOWN,
    }[sing.verdict]
    out.append(
        Diagnostic(
            "smoothness",
            verdict,
            sing.describe(),
            {
                "verdict": sing.verdict.value,
                "strata": [sorted(s) for s in sing.strata],
                "outside_irrelevant": [sorted(s) for s in sing.outside_irrelevant],
            },
        )
    )
    out.append(Diagnostic("ring-finitely-generated", Verdict.PASS, "finite presentation"))
    out.append(Diagnostic("grading-finitely-generated", Verdict.PASS, str(X.grading)))
    return out


def overall(diagnostics: Sequence[Diagnostic]) -> Verdict:
    return Verdict.meet(d.verdict for d in diagnostics)
