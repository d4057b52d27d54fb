import random
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from mdstacks.abelian import AbelianGroup
from mdstacks.gradedring import (
    CoxPresentation,
    Smoothness,
    Verdict,
    binomial_singular_locus,
    check_homogeneous,
    degree_of_monomial,
    degree_zero_subalgebra_check,
    eliminate_relation,
    eliminate_simple_roots,
    is_polynomial,
    simple_root_relations,
)
from mdstacks.polynomial import Polynomial, monomial, parse_polynomial
from mdstacks.stack import divisor_root

from helpers import corpus_stacks

Z = AbelianGroup.free(1)
V22 = AbelianGroup(0, (2, 2))


def cox(variables, grading, relations=(), irrelevant=("1",)):
    names = [v for v, _ in variables]
    return CoxPresentation(
        tuple((v, tuple(d)) for v, d in variables),
        grading,
        tuple(parse_polynomial(r, names) for r in relations),
        tuple(parse_polynomial(g, names) for g in irrelevant),
    )


# -- degrees ----------------------------------------------------------------------


def test_degree_of_empty_monomial():
    p = cox([("x", (1,))], Z)
    assert degree_of_monomial(p, ()) == (0,)


def test_degree_of_square():
    p = cox([("x", (1,))], Z)
    assert degree_of_monomial(p, monomial({"x": 2})) == (2,)


def test_degree_reduced_mod_torsion():
    p = cox([("u", (1, 0)), ("v", (0, 1))], V22)
    assert degree_of_monomial(p, monomial({"u": 2, "v": 1})) == (0, 1)


def test_unknown_variable_is_an_error():
    p = cox([("x", (1,))], Z)
    with pytest.raises(KeyError):
        degree_of_monomial(p, monomial({"q": 1}))


@settings(max_examples=80, deadline=None)
@given(
    st.dictionaries(st.sampled_from("abc"), st.integers(0, 6)),
    st.dictionaries(st.sampled_from("abc"), st.integers(0, 6)),
)
def test_degree_is_additive(e1, e2):
    G = AbelianGroup(1, (2, 6))
    p = cox([("a", (1, 5, -2)), ("b", (0, 3, 1)), ("c", (1, 1, 4))], G)
    m1, m2 = monomial(e1), monomial(e2)
    total = {v: e1.get(v, 0) + e2.get(v, 0) for v in "abc"}
    assert degree_of_monomial(p, monomial(total)) == G.add(degree_of_monomial(p, m1), degree_of_monomial(p, m2))


# -- homogeneity ----------------------------------------------------------------------


def test_linear_relation_homogeneous():
    rep = check_homogeneous(cox([("x", (1,)), ("y", (1,))], Z, ["x - y"]))
    assert rep.ok and rep.entries[0].degree == (1,)


def test_dicyclic_shape_homogeneous():
    p = cox([("u", (1, 0)), ("v", (0, 1)), ("w", (0, 1))], V22, ["u^2 - v*w"])
    rep = check_homogeneous(p)
    assert rep.ok and rep.entries[0].degree == (0, 0)


def test_inhomogeneous_reports_both_degrees():
    rep = check_homogeneous(cox([("x", (1,)), ("y", (1,))], Z, ["x - y^2"]))
    assert not rep.ok
    (bad,) = rep.failures()
    assert sorted(bad.degrees) == [(1,), (2,)]


def test_irrelevant_generators_checked():
    rep = check_homogeneous(cox([("x", (1,)), ("y", (2,))], Z, [], ["x + y"]))
    assert not rep.ok and rep.failures()[0].kind == "irrelevant"


# -- elimination ---------------------------------------------------------------------


def test_eliminate_cube_root():
    p = cox([("x0", (3,)), ("x1", (3,)), ("z", (1,))], Z, ["z^3 - x1"], ["x0", "x1"])
    q = eliminate_simple_roots(p)
    assert q.names == ("x0", "z")
    assert q.relations == ()
    assert set(q.irrelevant) == {parse_polynomial("x0"), parse_polynomial("z^3")}
    assert check_homogeneous(q).ok


def test_no_relations_unchanged():
    p = cox([("x", (1,))], Z)
    assert eliminate_simple_roots(p) == p


def test_dicyclic_relation_not_simplifiable():
    p = cox([("u", (1, 0)), ("v", (0, 1)), ("w", (0, 1))], V22, ["u^2 - v*w"])
    assert eliminate_simple_roots(p) == p
    assert not is_polynomial(p)


def test_is_polynomial_examples():
    assert is_polynomial(cox([("x", (1,)), ("y", (1,)), ("z", (1,))], Z))
    assert is_polynomial(cox([("x0", (3,)), ("x1", (3,)), ("z", (1,))], Z, ["z^3 - x1"]))


def test_scaled_root_relation():
    p = cox([("x", (2,)), ("z", (1,))], Z, ["2*z^2 + 4*x"])
    q = eliminate_simple_roots(p)
    assert q.names == ("z",) and q.relations == ()


def test_eliminate_relation_rejects_non_root():
    p = cox([("u", (1, 0)), ("v", (0, 1)), ("w", (0, 1))], V22, ["u^2 - v*w"])
    with pytest.raises(ValueError):
        eliminate_relation(p, 0)


@pytest.mark.parametrize("r1", range(1, 6))
@pytest.mark.parametrize("r2", range(1, 6))
def test_chained_roots_collapse(r1, r2):
    p = cox(
        [("x", (r1 * r2,)), ("y", (r1 * r2,)), ("z1", (r2,)), ("z2", (1,))],
        Z,
        [f"z1^{r1} - x*y", f"z2^{r2} - z1"],
    )
    q = eliminate_simple_roots(p)
    assert q.relations == (parse_polynomial(f"z2^{r1 * r2} - x*y"),)
    assert q.names == ("x", "y", "z2")


def test_identification_keeps_last_declared():
    p = cox([("x", (1,)), ("y", (1,)), ("z", (1,)), ("w", (1,)), ("z1", (1,))], Z, ["x*y - z*w", "z1 - x"])
    q = eliminate_simple_roots(p)
    assert q.names == ("y", "z", "w", "z1")
    assert q.relations == (parse_polynomial("z1*y - z*w"),)


def test_double_root_is_kept():
    p = cox([("x", (6,)), ("a", (3,)), ("b", (2,))], Z, ["a^2 - x", "b^3 - x"])
    assert eliminate_simple_roots(p) == p


def _random_tower(rng):
    # corpus bases bring mixed relations (quadric, dicyclic); order-1 roots
    # add identifications
    bases = [X for X in corpus_stacks().values() if X.cox.variables]
    X = rng.choice(bases)
    for _ in range(rng.randint(1, 6)):
        names = list(X.cox.names)
        s = Polynomial.var(rng.choice(names))
        if rng.random() < 0.2:
            s = s * Polynomial.var(rng.choice(names))
        X = divisor_root(X, s, rng.choice([1, 1, 2, 3]))
    return X.cox


def _canonical(p):
    return (
        tuple(sorted(p.variables)),
        frozenset(f.monic() for f in p.relations),
        frozenset(f.monic() for f in p.irrelevant),
    )


@pytest.mark.parametrize("seed", range(150))
def test_elimination_is_confluent(seed):
    rng = random.Random(seed)
    p = _random_tower(rng)
    reference = _canonical(eliminate_simple_roots(p))
    for _ in range(4):
        q = p
        while True:
            idx = simple_root_relations(q)
            if not idx:
                break
            q = eliminate_relation(q, rng.choice(idx))
            assert check_homogeneous(q).ok
        assert _canonical(q) == reference


# -- singular locus --------------------------------------------------------------------


def test_dicyclic_singular_at_origin():
    p = cox([("u", (1, 0)), ("v", (0, 1)), ("w", (0, 1))], V22, ["u^2 - v*w"])
    rep = binomial_singular_locus(p)
    assert rep.verdict is Smoothness.SINGULAR
    assert rep.strata == (frozenset("uvw"),)
    assert rep.outside_irrelevant == rep.strata


def test_linear_binomial_is_unknown():
    p = cox([("x", (1,)), ("y", (1,))], Z, ["x - y"])
    assert binomial_singular_locus(p).verdict is Smoothness.UNKNOWN


def test_singular_point_inside_irrelevant_locus():
    p = cox([("u", (2,)), ("v", (3,)), ("w", (3,))], Z, ["u^3 - v*w"], ["u", "v", "w"])
    rep = binomial_singular_locus(p)
    assert rep.verdict is Smoothness.SMOOTH_ON_COMPLEMENT
    assert rep.strata == (frozenset("uvw"),)


def test_no_relation_is_smooth():
    assert binomial_singular_locus(cox([("x", (1,))], Z)).verdict is Smoothness.SMOOTH


def test_shared_variables_unknown():
    p = cox([("x", (1,)), ("y", (1,))], Z, ["x^2 - x*y"])
    assert binomial_singular_locus(p).verdict is Smoothness.UNKNOWN


def _jacobian_oracle(relation: str, names):
    """Minimal coordinate subspaces on which every partial derivative vanishes."""
    syms = sympy.symbols(names)
    f = sympy.sympify(relation.replace("^", "**"), locals=dict(zip(names, syms)))
    partials = [sympy.diff(f, s) for s in syms]
    hits = []
    for k in range(len(names) + 1):
        for S in combinations(range(len(names)), k):
            sub = {syms[i]: 0 for i in S}
            if all(sympy.expand(d.subs(sub)) == 0 for d in partials) and sympy.expand(f.subs(sub)) == 0:
                hits.append(frozenset(names[i] for i in S))
    return {h for h in hits if not any(o < h for o in hits)}


@pytest.mark.parametrize("seed", range(25))
def test_singular_strata_match_jacobian(seed):
    rng = random.Random(seed)
    names = [f"t{i}" for i in range(rng.randint(3, 5))]
    pool = names[:]
    rng.shuffle(pool)
    nterms = rng.randint(2, 3)
    cuts = sorted(rng.sample(range(1, len(pool)), min(nterms - 1, len(pool) - 1)))
    groups = [pool[a:b] for a, b in zip([0] + cuts, cuts + [len(pool)])]
    terms = []
    for g in groups:
        exps = {v: rng.randint(1, 3) for v in g}
        if sum(exps.values()) < 2:
            exps[g[0]] += 1
        terms.append("*".join(f"{v}^{e}" for v, e in exps.items()))
    coeffs = [rng.choice([1, -1, 2]) for _ in terms]
    relation = " ".join(f"{'-' if c < 0 else '+'} {abs(c)}*{t}" for c, t in zip(coeffs, terms))
    # a trivial grading keeps everything homogeneous
    p = cox([(v, ()) for v in names], AbelianGroup(0), [relation])
    rep = binomial_singular_locus(p)
    assert set(rep.strata) == _jacobian_oracle(relation, names)


# -- degree-zero monomials ------------------------------------------------------------


def test_units_positive_degrees_pass():
    assert degree_zero_subalgebra_check(cox([("x", (1,)), ("y", (2,))], Z)).verdict is Verdict.PASS


def test_units_opposite_degrees_fail_with_witness():
    res = degree_zero_subalgebra_check(cox([("x", (1,)), ("y", (-1,))], Z))
    assert res.verdict is Verdict.FAIL
    assert res.witness == monomial({"x": 1, "y": 1})


def test_units_pure_torsion_unknown():
    p = cox([("u", (1, 0)), ("v", (0, 1)), ("w", (1, 1))], V22, ["v^2 - w^2 - 4*u^2"])
    assert degree_zero_subalgebra_check(p).verdict is Verdict.UNKNOWN


def test_units_witness_scaled_by_torsion():
    G = AbelianGroup(1, (2,))
    res = degree_zero_subalgebra_check(cox([("x", (1, 1)), ("y", (0, -1))], G))
    assert res.verdict is Verdict.FAIL
    assert degree_of_monomial(cox([("x", (1, 1)), ("y", (0, -1))], G), res.witness) == (0, 0)
    assert res.witness == monomial({"x": 2, "y": 2})


def test_units_two_dimensional():
    G = AbelianGroup.free(2)
    ok = cox([("a", (1, 0)), ("b", (0, 1)), ("c", (1, 1))], G)
    assert degree_zero_subalgebra_check(ok).verdict is Verdict.PASS
    bad = cox([("a", (1, 0)), ("b", (0, 1)), ("c", (-1, -2))], G)
    res = degree_zero_subalgebra_check(bad)
    assert res.verdict is Verdict.FAIL and degree_of_monomial(bad, res.witness) == (0, 0)
