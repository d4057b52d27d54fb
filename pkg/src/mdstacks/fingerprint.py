"""Graded fingerprints: comparing stacks up to isomorphism of their Cox data.

Two stacks match when, after eliminating simple root relations, there is a
bijection of variables and a group isomorphism carrying degrees to degrees,
relations to relations (up to scalars) and the irrelevant ideals to each
other (compared by radical when generated by monomials).

For a fixed bijection the group part is decided exactly: with
delta: Z^m -> A sending e_j to the j-th degree, the kernels of delta must
agree, the quotients A/im(delta) must be isomorphic, and the extension
classes r_i M_i of the torsion generators of the quotient must agree modulo
ker(delta) + r_i Z^m after some automorphism of the quotient. That last step
filters the image of each generator separately, then searches the product of
the survivors for an automorphism; it is bounded, as is the bijection search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import prod
from typing import Optional, Sequence

from .abelian import (
    AbelianGroup,
    IntMatrix,
    cokernel,
    hermite_basis,
    kernel_basis,
    reduce_mod_lattice,
    solve_integer,
    subgroup_cokernel,
)
from .gradedring import CoxPresentation, eliminate_simple_roots
from .polynomial import Polynomial, support
from .stack import StackData

AUTOMORPHISM_LIMIT = 10_000
BIJECTION_LIMIT = 20_000


def _irrelevant_key(polys: Sequence[Polynomial]):
    if all(p.is_monomial() for p in polys):
        supports = {support(next(iter(p.terms))) for p in polys}
        minimal = {s for s in supports if not any(o < s for o in supports)}
        return ("radical", frozenset(minimal))
    return ("generators", frozenset(p.monic() for p in polys))


@dataclass(frozen=True)
class Fingerprint:
    torsion: tuple[int, ...]
    free_rank: int
    variables: tuple[tuple[tuple[int, ...], str], ...]
    relations: tuple[str, ...]
    irrelevant: tuple[str, ...]
    cox: CoxPresentation = field(compare=False, repr=False)

    def lines(self) -> list[str]:
        group = " + ".join([f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank) or "0"
        out = [f"grading: {group}"]
        out += [f"var {name} : {deg}" for deg, name in self.variables]
        out += [f"rel {r}" for r in self.relations]
        out += [f"irr {g}" for g in self.irrelevant]
        return out

    def __str__(self):
        return "\n".join(self.lines())

    def compare(self, other: "Fingerprint") -> Optional[bool]:
        """True/False when decided, None when a search bound was hit."""
        return equivalent(self.cox, other.cox)


def graded_fingerprint(X: StackData) -> Fingerprint:
    cox = eliminate_simple_roots(X.cox)
    G = cox.grading_group
    variables = tuple(sorted((d, v) for v, d in cox.variables))
    relations = tuple(sorted(p.monic().format() for p in cox.relations))
    kind, key = _irrelevant_key(cox.irrelevant)
    if kind == "radical":
        irrelevant = tuple(
            sorted(("*".join(sorted(s)) or "1") for s in key)
        )
    else:
        irrelevant = tuple(sorted(p.format() for p in key))
    return Fingerprint(G.torsion, G.free_rank, variables, relations, irrelevant, cox)


def fingerprints_match(X: StackData, Y: StackData) -> Optional[bool]:
    return graded_fingerprint(X).compare(graded_fingerprint(Y))


# -- group part ---------------------------------------------------------------


def _extension_data(A: AbelianGroup, degrees: Sequence[tuple[int, ...]]):
    m = len(degrees)
    G = IntMatrix.from_columns(degrees, A.ngens)
    stacked = G.hstack(A.relation_matrix())
    K = hermite_basis([v[:m] for v in kernel_basis(stacked)], m)
    sq = subgroup_cokernel(A, degrees)
    Q = sq.quotient
    ys = []
    for r, lift in zip(Q.torsion, sq.lifts):
        sol = solve_integer(stacked, A.scale(r, lift))
        ys.append(sol[:m])
    return K, Q, ys


def graded_degrees_isomorphic(
    A: AbelianGroup,
    dA: Sequence[tuple[int, ...]],
    B: AbelianGroup,
    dB: Sequence[tuple[int, ...]],
    limit: int = AUTOMORPHISM_LIMIT,
) -> Optional[bool]:
    """Is there an isomorphism A -> B sending dA[j] to dB[j] for every j?"""
    if (A.torsion, A.free_rank) != (B.torsion, B.free_rank) or len(dA) != len(dB):
        return False
    m = len(dA)
    KA, QA, yA = _extension_data(A, dA)
    KB, QB, yB = _extension_data(B, dB)
    if KA != KB or (QA.torsion, QA.free_rank) != (QB.torsion, QB.free_rank):
        return False
    rs = QA.torsion
    if not rs:
        return True
    finite = AbelianGroup(0, rs)
    lattices = [hermite_basis(list(KA) + [tuple(r if i == j else 0 for i in range(m)) for j in range(m)], m) for r in rs]
    k = len(rs)

    def column_ok(i: int, col) -> bool:
        # the condition on y_i only involves the image of the i-th generator
        moved = [0] * m
        for j in range(k):
            c = col[j] * rs[i] // rs[j]
            if c:
                moved = [x + c * y for x, y in zip(moved, yA[j])]
        diff = [x - y for x, y in zip(moved, yB[i])]
        return not any(reduce_mod_lattice(diff, lattices[i]))

    columns = []
    for i, r in enumerate(rs):
        cands = [h for h in finite.elements() if finite.is_zero(finite.scale(r, h)) and column_ok(i, h)]
        if not cands:
            return False
        columns.append(cands)
    if prod(len(c) for c in columns) > limit:
        return None
    R = finite.relation_matrix()
    for choice in product(*columns):
        image, _ = cokernel(IntMatrix.from_columns(choice, k).hstack(R))
        if image.is_trivial():
            return True
    return False


# -- bijection search ---------------------------------------------------------


def _signature(cox: CoxPresentation, name: str):
    G = cox.grading_group
    order = G.element_order(cox.degree(name))
    rel = tuple(sorted(e for p in cox.relations for m in p.terms for v, e in m if v == name))
    irr = sum(1 for p in cox.irrelevant if name in p.variables())
    return order, rel, irr


def equivalent(X: CoxPresentation, Y: CoxPresentation, limit: int = BIJECTION_LIMIT) -> Optional[bool]:
    X = eliminate_simple_roots(X)
    Y = eliminate_simple_roots(Y)
    A, B = X.grading_group, Y.grading_group
    if (A.torsion, A.free_rank) != (B.torsion, B.free_rank):
        return False
    if len(X.variables) != len(Y.variables) or len(X.relations) != len(Y.relations):
        return False
    sx = {v: _signature(X, v) for v in X.names}
    sy = {v: _signature(Y, v) for v in Y.names}
    if sorted(sx.values()) != sorted(sy.values()):
        return False

    y_names = list(Y.names)
    y_rel = frozenset(p.monic() for p in Y.relations)
    y_irr = _irrelevant_key(Y.irrelevant)
    y_deg = [Y.degree(v) for v in y_names]
    leaves = 0
    unknown = False

    def check(assign: dict[str, str]) -> Optional[bool]:
        ren = {x: y for y, x in assign.items()}
        if frozenset(p.rename(ren).monic() for p in X.relations) != y_rel:
            return False
        if _irrelevant_key([p.rename(ren) for p in X.irrelevant]) != y_irr:
            return False
        return graded_degrees_isomorphic(A, [X.degree(assign[y]) for y in y_names], B, y_deg)

    def search(i: int, assign: dict[str, str], used: set[str]) -> Optional[bool]:
        nonlocal leaves, unknown
        if i == len(y_names):
            leaves += 1
            result = check(assign)
            if result is None:
                unknown = True
            return result
        y = y_names[i]
        cands = [x for x in X.names if x not in used and sx[x] == sy[y]]
        cands.sort(key=lambda x: x != y)
        for x in cands:
            if leaves >= limit:
                unknown = True
                return None
            assign[y] = x
            used.add(x)
            if search(i + 1, assign, used):
                return True
            used.discard(x)
            del assign[y]
        return False

    if search(0, {}, set()):
        return True
    return None if unknown else False
