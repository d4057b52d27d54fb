"""Stacky fans and their Cox data.

A stacky fan here is a simplicial fan in a free lattice N = Z^d whose rays
carry positive multiplicities a_i; the i-th ray contributes b_i = a_i * rho_i
to the map Z^n -> N. Gerbe structure (torsion in N) is not represented: it
is obtained afterwards with :func:`mdstacks.stack.line_bundle_root`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Optional, Sequence

from .abelian import AbelianGroup, IntMatrix, cokernel, hermite_basis, kernel_basis, smith_diagonal
from .gradedring import Verdict
from .polynomial import Polynomial
from .stack import Diagnostic, StackData


class FanError(ValueError):
    pass


@dataclass(frozen=True)
class StackyFan:
    dim: int
    rays: tuple[tuple[int, ...], ...]
    multiplicities: tuple[int, ...]
    max_cones: tuple[tuple[int, ...], ...]
    names: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(self, "multiplicities", tuple(int(a) for a in self.multiplicities))
        object.__setattr__(self, "max_cones", tuple(tuple(sorted(c)) for c in self.max_cones))
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))
        if len(self.multiplicities) != len(self.rays):
            raise FanError("one multiplicity per ray is required")
        if self.names is not None and len(self.names) != len(self.rays):
            raise FanError("one name per ray is required")

    @classmethod
    def build(cls, rays, cones, multiplicities=None, names=None) -> "StackyFan":
        rays = [tuple(r) for r in rays]
        dim = len(rays[0]) if rays else 0
        mult = tuple(multiplicities) if multiplicities is not None else (1,) * len(rays)
        return cls(dim, tuple(rays), mult, tuple(tuple(c) for c in cones), names)

    @property
    def variable_names(self) -> tuple[str, ...]:
        return self.names if self.names is not None else tuple(f"x{i}" for i in range(len(self.rays)))


def _rank(vectors: Sequence[Sequence[int]], dim: int) -> int:
    if not vectors:
        return 0
    return sum(1 for d in smith_diagonal(IntMatrix(vectors, dim)) if d)


def _cones_meet_in_face(rays, s: Sequence[int], t: Sequence[int]) -> bool:
    """cone(s) and cone(t) intersect exactly in cone(s & t).

    Equivalently no nonnegative solution of sum a_i rho_i = sum b_j rho_j
    uses a ray of ``s`` outside the common face. The nonnegative solutions
    form a pointed cone generated by sign-consistent circuits, so it is
    enough to inspect those.
    """
    common = set(s) & set(t)
    cols = [(("s", i), rays[i]) for i in s] + [(("t", j), tuple(-x for x in rays[j])) for j in t]
    dim = len(rays[0])
    for size in range(2, min(len(cols), dim + 1) + 1):
        for subset in combinations(cols, size):
            # rays of one simplicial cone are independent, and a circuit inside
            # the common face is harmless
            sides = {side for (side, _), _ in subset}
            if len(sides) < 2 or all(idx in common for (_, idx), _ in subset):
                continue
            M = IntMatrix.from_columns([v for _, v in subset], dim)
            ker = kernel_basis(M)
            if len(ker) != 1 or not all(ker[0]):
                continue
            vec = ker[0]
            if not (all(x > 0 for x in vec) or all(x < 0 for x in vec)):
                continue
            for (side, idx), _ in subset:
                if idx not in common:
                    return False
    return True


def validate_fan(F: StackyFan) -> list[Diagnostic]:
    out = list(_validate_geometry(F.dim, F.rays, F.max_cones))
    for i, a in enumerate(F.multiplicities):
        if a < 1:
            out.append(Diagnostic("multiplicities", Verdict.FAIL, f"ray {i} has multiplicity {a}"))
    if any(d.verdict is Verdict.FAIL for d in out):
        return [d for d in out if d.verdict is Verdict.FAIL]
    return out


@lru_cache(maxsize=512)
def _validate_geometry(dim, rays, max_cones) -> tuple[Diagnostic, ...]:
    # Multiplicities play no part here, so roots along rays reuse the result.
    out = []

    def fail(check, detail):
        out.append(Diagnostic(check, Verdict.FAIL, detail))

    F = StackyFan(dim, rays, (1,) * len(rays), max_cones)
    n = len(F.rays)
    for i, r in enumerate(F.rays):
        if len(r) != F.dim:
            fail("ray-dimension", f"ray {i} = {r} does not lie in Z^{F.dim}")
        elif not any(r):
            fail("primitive-rays", f"ray {i} is zero")
        elif gcd(*r) != 1:
            fail("primitive-rays", f"ray {i} = {r} is not primitive")
    for i, j in combinations(range(n), 2):
        if F.rays[i] == F.rays[j]:
            fail("distinct-rays", f"rays {i} and {j} coincide: {F.rays[i]}")
    for c in F.max_cones:
        bad = [i for i in c if not 0 <= i < n]
        if bad:
            fail("cone-indices", f"cone {c} refers to missing rays {bad}")
    if out:
        return tuple(out)
    for c in F.max_cones:
        if len(set(c)) != len(c) or _rank([F.rays[i] for i in c], F.dim) != len(c):
            fail("simplicial", f"cone {c} has linearly dependent rays")
    if out:
        return tuple(out)
    for s, t in combinations(F.max_cones, 2):
        if not (_cones_meet_in_face(F.rays, s, t) and _cones_meet_in_face(F.rays, t, s)):
            fail("fan", f"cones {s} and {t} do not meet in a common face")
    if not out:
        out.append(Diagnostic("fan", Verdict.PASS, f"{n} rays, {len(F.max_cones)} maximal cones"))
    return tuple(out)


def _require_valid(F: StackyFan):
    bad = [d for d in validate_fan(F) if d.verdict is Verdict.FAIL]
    if bad:
        raise FanError("; ".join(d.detail for d in bad))


def fan_to_stack(F: StackyFan, name: str = "fan") -> StackData:
    """Cox data of the toric orbifold of a stacky fan.

    The grading is Z^n / im(Z^d -> Z^n, m -> (<m, b_i>)_i), variable x_i has
    the class of e_i, and J is generated by prod_{i not in sigma} x_i over
    maximal cones sigma. Free coordinates are put in Hermite form so the
    degrees come out as e.g. (1, 1, 1) for P^2.
    """
    _require_valid(F)
    n = len(F.rays)
    B = IntMatrix([[a * x for x in r] for r, a in zip(F.rays, F.multiplicities)], F.dim) if n else IntMatrix.zeros(0, F.dim)
    A, proj = cokernel(B)
    degrees = [proj.matrix.col(i) for i in range(n)]
    k = len(A.torsion)
    if A.free_rank:
        free_rows = [tuple(d[k + j] for d in degrees) for j in range(A.free_rank)]
        hnf = hermite_basis(free_rows, n)
        degrees = [d[:k] + tuple(row[i] for row in hnf) for i, d in enumerate(degrees)]
    names = F.variable_names
    irrelevant = []
    for c in F.max_cones:
        term = Polynomial.const(1)
        for i in range(n):
            if i not in c:
                term = term * Polynomial.var(names[i])
        irrelevant.append(term)
    if not F.max_cones:
        irrelevant = [Polynomial.const(1)]
    return StackData.create(name, AbelianGroup(A.free_rank, A.torsion), list(zip(names, degrees)), [], irrelevant)


def canonical_from_fan(F: StackyFan, name: str = "canonical") -> StackData:
    return fan_to_stack(replace(F, multiplicities=(1,) * len(F.rays)), name)


def root_along_ray(F: StackyFan, i: int, r: int) -> StackyFan:
    if not 0 <= i < len(F.rays):
        raise IndexError(f"ray index {i} out of range")
    if r < 1:
        raise ValueError("root order must be positive")
    mult = list(F.multiplicities)
    mult[i] *= r
    return replace(F, multiplicities=tuple(mult))


def _cones_unimodular(F: StackyFan) -> bool:
    for c in F.max_cones:
        if not c:
            continue
        diag = smith_diagonal(IntMatrix([F.rays[i] for i in c], F.dim))
        if any(d != 1 for d in diag):
            return False
    return True


def is_smooth_fan(F: StackyFan) -> bool:
    _require_valid(F)
    return all(a == 1 for a in F.multiplicities) and _cones_unimodular(F)


def snc_invariant_divisors(F: StackyFan) -> bool:
    """Whether the torus-invariant prime divisors of the coarse space are SNC."""
    _require_valid(F)
    return _cones_unimodular(F)
