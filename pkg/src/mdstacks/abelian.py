"""Finitely generated abelian groups and their homomorphisms.

Everything here is exact: matrices hold Python integers and every group is
kept in invariant-factor form

    Z/d_1 + ... + Z/d_k + Z^f,    d_1 | d_2 | ... | d_k,  d_i >= 2.

Group elements are plain tuples of integers in these coordinates (torsion
coordinates first, reduced modulo their factor; free coordinates last).
A group built as a cokernel remembers how it was presented, so callers can
translate from the original coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd, prod
from typing import Iterable, NamedTuple, Optional, Sequence


class IntMatrix:
    """Immutable integer matrix stored row-major."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: Optional[int] = None):
        rows = tuple(tuple(int(x) for x in row) for row in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        if any(len(row) != ncols for row in rows):
            raise ValueError("ragged matrix")
        self._rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(((1 if i == j else 0 for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(((0,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        for c in columns:
            if len(c) != nrows:
                raise ValueError("column length mismatch")
        return cls(((c[i] for c in columns) for i in range(nrows)), len(columns))

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls(((entries[i] if i == j else 0 for j in range(n)) for i in range(n)), n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(x for row in self._rows for x in row)

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self._rows)

    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.ncols)]

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self._rows]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.columns(), self.nrows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._rows[i][j]

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.columns()
            return IntMatrix(
                ((sum(a * b for a, b in zip(row, c)) for c in cols) for row in self._rows),
                other.ncols,
            )
        v = tuple(other)
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self._rows)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return IntMatrix((a + b for a, b in zip(self._rows, other._rows)), self.ncols + other.ncols)

    def select_rows(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix((self._rows[i] for i in idx), self.ncols)

    def select_cols(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix(((row[j] for j in idx) for row in self._rows), len(idx))

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        if n == 0:
            return 1
        a = [list(r) for r in self._rows]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, self._rows))

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r}, ncols={self.ncols})"


# -- Smith normal form -------------------------------------------------------


def _snf(M: IntMatrix):
    """Return (U, Uinv, S, V) as nested lists with U @ M @ V == S."""
    m, n = M.shape
    a = M.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Uinv = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        U[i], U[k] = U[k], U[i]
        for row in Uinv:
            row[i], row[k] = row[k], row[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def add_row(src, dst, q):
        # row_dst += q * row_src
        if q == 0:
            return
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]
        for row in Uinv:
            row[src] -= q * row[dst]

    def add_col(src, dst, q):
        if q == 0:
            return
        for row in a:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]
        for row in Uinv:
            row[i] = -row[i]

    t = 0
    while t < min(m, n):
        # Pivot: minimal |entry| in the remaining block, ties by lowest (row, col).
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                best = None
                for i in range(t, m):
                    for j in range(t, n):
                        if (i == t or j == t) and a[i][j] and (best is None or abs(a[i][j]) < best[0]):
                            best = (abs(a[i][j]), i, j)
                _, i, j = best
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            # Row and column clear; enforce divisibility on the rest.
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    return U, Uinv, a, V


def smith_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return unimodular U, V and diagonal S with U @ M @ V == S.

    The diagonal of S is nonnegative and satisfies d_i | d_{i+1}.

    >>> U, S, V = smith_normal_form(IntMatrix([[2, 4], [6, 8]]))
    >>> S.tolist()
    [[2, 0], [0, 4]]
    """
    U, _, S, V = _snf(M)
    m, n = M.shape
    return IntMatrix(U, m), IntMatrix(S, n), IntMatrix(V, n)


def smith_diagonal(M: IntMatrix) -> list[int]:
    _, _, S, _ = _snf(M)
    return [S[i][i] for i in range(min(M.shape))]


# -- lattices ----------------------------------------------------------------


def hermite_basis(vectors: Iterable[Sequence[int]], dim: int) -> tuple[tuple[int, ...], ...]:
    """Canonical row-echelon basis of the lattice spanned by ``vectors``.

    Pivots are positive and entries above each pivot lie in [0, pivot), so
    two generating sets span the same lattice iff their bases agree.
    """
    rows = [list(v) for v in vectors if any(v)]
    for v in rows:
        if len(v) != dim:
            raise ValueError("vector length mismatch")
    basis: list[list[int]] = []
    col = 0
    while rows and col < dim:
        live = [r for r in rows if r[col]]
        if not live:
            col += 1
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            p = live[0]
            for r in live[1:]:
                q = r[col] // p[col]
                for k in range(col, dim):
                    r[k] -= q * p[k]
            live = [p] + [r for r in live[1:] if r[col]]
        pivot = live[0]
        if pivot[col] < 0:
            for k in range(col, dim):
                pivot[k] = -pivot[k]
        basis.append(pivot)
        rows = [r for r in rows if r is not pivot and any(r)]
        col += 1
    basis.sort(key=lambda r: next(i for i, x in enumerate(r) if x))
    for i, r in enumerate(basis):
        c = next(k for k, x in enumerate(r) if x)
        for above in basis[:i]:
            q = above[c] // r[c]
            if q:
                for k in range(dim):
                    above[k] -= q * r[k]
    return tuple(tuple(r) for r in basis)


def reduce_mod_lattice(v: Sequence[int], basis: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Reduce ``v`` modulo a lattice given by :func:`hermite_basis`.

    The result has every pivot coordinate in [0, pivot); it is zero iff ``v``
    lies in the lattice.
    """
    v = list(v)
    for r in basis:
        c = next(k for k, x in enumerate(r) if x)
        q = v[c] // r[c]
        if q:
            v = [x - q * y for x, y in zip(v, r)]
    return tuple(v)


def kernel_basis(M: IntMatrix) -> list[tuple[int, ...]]:
    """Integer basis of {x : M x = 0}."""
    _, _, S, V = _snf(M)
    m, n = M.shape
    rank = sum(1 for i in range(min(m, n)) if S[i][i])
    return [tuple(V[i][j] for i in range(n)) for j in range(rank, n)]


def solve_integer(M: IntMatrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """An integer solution of M x = b, or None if there is none."""
    U, _, S, V = _snf(M)
    m, n = M.shape
    if len(b) != m:
        raise ValueError("right-hand side length mismatch")
    y = [sum(u * x for u, x in zip(row, b)) for row in U]
    w = [0] * n
    for i in range(m):
        d = S[i][i] if i < n else 0
        if d == 0:
            if y[i]:
                return None
        elif y[i] % d:
            return None
        else:
            w[i] = y[i] // d
    return tuple(sum(V[i][j] * w[j] for j in range(n)) for i in range(n))


# -- groups ------------------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    """How a group arose as Z^n / (column span of ``relations``).

    ``projection`` maps Z^n onto group coordinates; ``section`` sends each
    group generator back to a preimage in Z^n.
    """

    relations: IntMatrix
    projection: IntMatrix
    section: IntMatrix


@dataclass(frozen=True)
class AbelianGroup:
    free_rank: int
    torsion: tuple[int, ...] = ()
    presentation: Optional[Presentation] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors {self.torsion} do not form a divisor chain")

    @classmethod
    def free(cls, rank: int) -> "AbelianGroup":
        return cls(rank)

    @classmethod
    def cyclic(cls, order: int) -> "AbelianGroup":
        if order == 0:
            return cls(1)
        return cls(0, (order,) if order > 1 else ())

    @classmethod
    def from_factors(cls, factors: Sequence[int]) -> "AbelianGroup":
        """Group Z/f_1 + ... + Z/f_k (0 meaning Z), brought into normal form.

        The returned group carries a presentation whose projection maps the
        coordinates of ``factors`` to normal-form coordinates.
        """
        if any(f < 0 for f in factors):
            raise ValueError("negative group factor")
        return cokernel(IntMatrix.diagonal(list(factors)))[0]

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def factors(self) -> tuple[int, ...]:
        """Per-coordinate modulus; 0 marks a free coordinate."""
        return self.torsion + (0,) * self.free_rank

    @property
    def order(self) -> Optional[int]:
        return prod(self.torsion) if self.free_rank == 0 else None

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def relation_matrix(self) -> IntMatrix:
        """Columns d_i e_i generating the relations of the coordinate lattice."""
        k = len(self.torsion)
        cols = [tuple(d if i == j else 0 for i in range(self.ngens)) for j, d in enumerate(self.torsion)]
        return IntMatrix.from_columns(cols, self.ngens) if k else IntMatrix.zeros(self.ngens, 0)

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.ngens:
            raise ValueError(f"element {tuple(v)} has wrong length for {self}")
        return tuple(x % d if d else int(x) for x, d in zip(v, self.factors))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def add(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return self.reduce([x + y for x, y in zip(a, b)])

    def neg(self, a: Sequence[int]) -> tuple[int, ...]:
        return self.reduce([-x for x in a])

    def scale(self, n: int, a: Sequence[int]) -> tuple[int, ...]:
        return self.reduce([n * x for x in a])

    def is_zero(self, a: Sequence[int]) -> bool:
        return not any(self.reduce(a))

    def element_order(self, a: Sequence[int]) -> int:
        """Order of ``a``; 0 when it has infinite order."""
        a = self.reduce(a)
        if any(a[len(self.torsion):]):
            return 0
        n = 1
        for x, d in zip(a, self.torsion):
            n = _lcm(n, d // gcd(x, d))
        return n

    def elements(self) -> Iterable[tuple[int, ...]]:
        """Enumerate a finite group."""
        if self.free_rank:
            raise ValueError("cannot enumerate an infinite group")
        return product(*(range(d) for d in self.torsion))

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by a matrix on normal-form coordinates."""

    source: AbelianGroup
    target: AbelianGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.ngens, self.source.ngens):
            raise ValueError("matrix shape does not match source/target")

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        return self.target.reduce(self.matrix @ v)

    def is_well_defined(self) -> bool:
        return all(self.target.is_zero(self.matrix @ c) for c in self.source.relation_matrix().columns())

    def kernel(self) -> list[tuple[int, ...]]:
        """Generators (in source coordinates) of the kernel."""
        stacked = self.matrix.hstack(self.target.relation_matrix())
        n = self.source.ngens
        gens = [self.source.reduce(v[:n]) for v in kernel_basis(stacked)]
        return [g for g in gens if any(g)]

    def is_injective(self) -> bool:
        return not self.kernel()

    def compose(self, first: "GroupHom") -> "GroupHom":
        """self after first."""
        return GroupHom(first.source, self.target, self.matrix @ first.matrix)


class DiagonalizableGroup(NamedTuple):
    """Hom(A, k^*) = torus of rank ``torus_rank`` times roots of unity."""

    torus_rank: int
    roots_of_unity: tuple[int, ...]

    def is_trivial(self) -> bool:
        return self.torus_rank == 0 and not self.roots_of_unity

    def __str__(self):
        parts = [f"mu_{r}" for r in self.roots_of_unity]
        if self.torus_rank:
            parts.append(f"G_m^{self.torus_rank}")
        return " x ".join(parts) if parts else "1"


def cokernel(M: IntMatrix) -> tuple[AbelianGroup, GroupHom]:
    """Z^rows / (column span of M) in invariant-factor form.

    Returns the group and the projection from Z^rows onto it.

    >>> str(cokernel(IntMatrix([[2, 0], [0, 3]]))[0])
    'Z/6'
    """
    m, n = M.shape
    U, Uinv, S, _ = _snf(M)
    diag = [S[i][i] if i < n else 0 for i in range(m)]
    tors = [i for i in range(m) if diag[i] >= 2]
    free = [i for i in range(m) if diag[i] == 0]
    keep = tors + free
    proj = IntMatrix((U[i] for i in keep), m)
    section = IntMatrix(((Uinv[r][i] for i in keep) for r in range(m)), len(keep))
    group = AbelianGroup(len(free), tuple(diag[i] for i in tors), Presentation(M, proj, section))
    return group, GroupHom(AbelianGroup(m), group, proj)


def dual_group(A: AbelianGroup) -> DiagonalizableGroup:
    return DiagonalizableGroup(A.free_rank, A.torsion)


class RootPushout(NamedTuple):
    group: AbelianGroup
    inclusion: GroupHom
    tautological: tuple[int, ...]


def pushout_root(A: AbelianGroup, d: Sequence[int], r: int) -> RootPushout:
    """(A + Z) / <(d, -r)> together with the inclusion of A and the class of (0, 1).

    The class t of (0, 1) satisfies r t = inclusion(d).
    """
    if r < 1:
        raise ValueError("root order must be positive")
    d = A.reduce(d)
    n = A.ngens
    cols = [c + (0,) for c in A.relation_matrix().columns()]
    cols.append(tuple(d) + (-r,))
    group, proj = cokernel(IntMatrix.from_columns(cols, n + 1))
    iota = GroupHom(A, group, proj.matrix.select_cols(range(n)))
    t = group.reduce(proj.matrix.col(n))
    return RootPushout(group, iota, t)


class SubgroupQuotient(NamedTuple):
    sub: AbelianGroup
    inclusion: GroupHom
    quotient: AbelianGroup
    lifts: tuple[tuple[int, ...], ...]
    generator_map: GroupHom
    quotient_map: GroupHom


def subgroup_cokernel(A: AbelianGroup, gens: Sequence[Sequence[int]]) -> SubgroupQuotient:
    """Subgroup generated by ``gens``, the quotient, and lifts of its generators.

    ``generator_map`` sends the i-th standard basis vector of Z^len(gens) to
    the i-th generator written in ``sub`` coordinates; ``quotient_map`` is the
    projection A -> A/sub. ``lifts[i]`` maps to the i-th normal-form generator
    of the quotient; among all lifts it is the one whose coordinates are
    reduced into [0, pivot) against the Hermite basis of the subgroup lattice.
    """
    gens = [A.reduce(g) for g in gens]
    n, m = A.ngens, len(gens)
    G = IntMatrix.from_columns(gens, n) if m else IntMatrix.zeros(n, 0)
    R = A.relation_matrix()

    quotient, qproj = cokernel(R.hstack(G))
    quotient_map = GroupHom(A, quotient, qproj.matrix)

    kernel_gens = [v[:m] for v in kernel_basis(G.hstack(R))]
    K = IntMatrix.from_columns(kernel_gens, m) if kernel_gens else IntMatrix.zeros(m, 0)
    sub, sproj = cokernel(K)
    generator_map = GroupHom(AbelianGroup(m), sub, sproj.matrix)
    inclusion = GroupHom(sub, A, (G @ sub.presentation.section) if m else IntMatrix.zeros(n, sub.ngens))

    lattice = hermite_basis(list(R.columns()) + gens, n)
    section = quotient.presentation.section
    lifts = tuple(A.reduce(reduce_mod_lattice(section.col(j), lattice)) for j in range(quotient.ngens))
    return SubgroupQuotient(sub, inclusion, quotient, lifts, generator_map, quotient_map)


def automorphisms(Q: AbelianGroup, limit: int) -> Optional[list[IntMatrix]]:
    """All automorphisms of a finite group as matrices on its coordinates.

    Returns None when more than ``limit`` candidate matrices would have to be
    examined.
    """
    if Q.free_rank:
        raise ValueError("automorphisms of infinite groups are not enumerated")
    k = len(Q.torsion)
    images = []
    for r in Q.torsion:
        images.append([h for h in Q.elements() if Q.is_zero(Q.scale(r, h))])
    if prod(len(c) for c in images) > limit:
        return None
    R = Q.relation_matrix()
    out = []
    for choice in product(*images):
        M = IntMatrix.from_columns(choice, k) if k else IntMatrix.zeros(0, 0)
        image, _ = cokernel(M.hstack(R))
        if image.is_trivial():
            out.append(M)
    return out
