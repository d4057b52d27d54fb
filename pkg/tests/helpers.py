"""Random inputs and corpus access shared by the test modules."""

from __future__ import annotations

import random
from math import gcd
from pathlib import Path

from mdstacks.abelian import AbelianGroup, IntMatrix, subgroup_cokernel
from mdstacks.document import build, load
from mdstacks.polynomial import Polynomial
from mdstacks.stack import StackData, line_bundle_root
from mdstacks.toric import StackyFan, validate_fan
from mdstacks.gradedring import Verdict

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
STACK_FILES = sorted(p for p in CORPUS.glob("*.mds"))
FAN_FILES = sorted(p for p in (CORPUS / "fans").glob("*.mds"))


def corpus_stack(name: str) -> StackData:
    return build(load(CORPUS / f"{name}.mds").stack)


def corpus_stacks() -> dict[str, StackData]:
    return {p.stem: build(load(p).stack) for p in STACK_FILES}


def random_matrix(rng: random.Random, rows: int, cols: int, lo: int = -20, hi: int = 20) -> IntMatrix:
    return IntMatrix([[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)], cols)


def random_unimodular(rng: random.Random, n: int, steps: int = 12) -> IntMatrix:
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        op = rng.random()
        if op < 0.2:
            rows[i], rows[j] = rows[j], rows[i]
        elif op < 0.3:
            rows[i] = [-x for x in rows[i]]
        else:
            q = rng.choice([-2, -1, 1, 2])
            rows[i] = [a + q * b for a, b in zip(rows[i], rows[j])]
    if n == 1 and rng.random() < 0.5:
        rows = [[-1]]
    return IntMatrix(rows, n)


# -- fans -----------------------------------------------------------------------

BASE_FANS = {
    "P1": ([(1,), (-1,)], [(0,), (1,)]),
    "A1": ([(1,)], [(0,)]),
    "P2": ([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)]),
    "P1xP1": ([(1, 0), (-1, 0), (0, 1), (0, -1)], [(0, 2), (0, 3), (1, 2), (1, 3)]),
    "F2": ([(1, 0), (0, 1), (-1, 2), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)]),
    "P121": ([(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2), (0, 2)]),
    "A2mu3": ([(1, 0), (1, 3)], [(0, 1)]),
    "A2": ([(1, 0), (0, 1)], [(0, 1)]),
    "P3": (
        [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)],
        [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)],
    ),
    "P1xP2": (
        [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, 0, 1), (0, -1, -1)],
        [(a, b, c) for a in (0, 1) for b, c in ((2, 3), (3, 4), (2, 4))],
    ),
    "P1^3": (
        [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)],
        [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)],
    ),
    "A3": ([(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2)]),
    "P112": (
        [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -2)],
        [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)],
    ),
}


def _primitive(v):
    g = gcd(*v)
    return tuple(x // g for x in v)


def _star_subdivide(rays, cones, face):
    new = _primitive(tuple(sum(rays[i][k] for i in face) for k in range(len(rays[0]))))
    if new in rays:
        return rays, cones
    rays = rays + [new]
    idx = len(rays) - 1
    out = []
    for c in cones:
        if set(face) <= set(c):
            for rho in face:
                out.append(tuple(sorted((set(c) - {rho}) | {idx})))
        else:
            out.append(tuple(c))
    return rays, out


def random_fan(rng: random.Random, max_rays: int = 6) -> StackyFan:
    while True:
        rays, cones = BASE_FANS[rng.choice(sorted(BASE_FANS))]
        rays, cones = list(rays), [tuple(c) for c in cones]
        d = len(rays[0])
        if len(rays) < max_rays and rng.random() < 0.5:
            c = rng.choice(cones)
            if len(c) >= 2:
                face = tuple(sorted(rng.sample(c, rng.randint(2, len(c)))))
                rays, cones = _star_subdivide(rays, cones, face)
        g = random_unimodular(rng, d, steps=rng.randint(0, 6))
        rays = [tuple(g @ r) for r in rays]
        if len(cones) > 1 and rng.random() < 0.3:
            cones = rng.sample(cones, rng.randint(1, len(cones)))
        mult = tuple(rng.choice([1, 1, 1, 2, 3]) for _ in rays)
        F = StackyFan(d, tuple(rays), mult, tuple(cones))
        if len(rays) <= max_rays and all(x.verdict is Verdict.PASS for x in validate_fan(F)):
            return F


# -- graded polynomial stacks ------------------------------------------------------


def random_graded_stack(rng: random.Random, index: int = 0) -> StackData:
    """Polynomial Cox data with a random grading whose effective part has finite index."""
    while True:
        torsion = rng.choice([(), (2,), (3,), (2, 2), (2, 4), (6,)])
        free = rng.randint(0, 2)
        G = AbelianGroup(free, torsion)
        n = rng.randint(0, 4)
        degrees = []
        for _ in range(n):
            t = [rng.randrange(d) for d in torsion]
            f = [rng.randint(0, 3) for _ in range(free)]
            degrees.append(tuple(t + f))
        if subgroup_cokernel(G, degrees).quotient.free_rank:
            continue
        names = [f"x{i}" for i in range(n)]
        irrelevant = [Polynomial.var(v) for v in names if rng.random() < 0.6] or [Polynomial.const(1)]
        X = StackData.create(f"random{index}", G, list(zip(names, degrees)), [], irrelevant)
        for _ in range(rng.randint(0, 2)):
            d = tuple(rng.randint(-2, 2) for _ in range(X.grading.ngens))
            X = line_bundle_root(X, d, rng.randint(1, 4))
        return X
