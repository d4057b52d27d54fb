"""Sparse multivariate polynomials with exact rational coefficients.

A monomial is a sorted tuple of ``(variable name, exponent)`` pairs with all
exponents positive; the empty tuple is the constant monomial. Polynomials
map monomials to nonzero :class:`fractions.Fraction` coefficients.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

Monomial = tuple[tuple[str, int], ...]

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def monomial(exponents: Mapping[str, int] | Iterable[tuple[str, int]]) -> Monomial:
    items = exponents.items() if isinstance(exponents, Mapping) else exponents
    acc: dict[str, int] = {}
    for name, e in items:
        if e < 0:
            raise ValueError(f"negative exponent for {name}")
        if e:
            acc[name] = acc.get(name, 0) + e
    return tuple(sorted(acc.items()))


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return monomial(a + b)


def total_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def support(m: Monomial) -> frozenset[str]:
    return frozenset(name for name, _ in m)


class Polynomial:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction | int] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[monomial(m)] = clean.get(monomial(m), Fraction(0)) + c
        self._terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    @classmethod
    def const(cls, c) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def var(cls, name: str, exponent: int = 1) -> "Polynomial":
        return cls({((name, exponent),) if exponent else (): 1})

    @classmethod
    def from_monomial(cls, m: Monomial, c=1) -> "Polynomial":
        return cls({m: c})

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def variables(self) -> frozenset[str]:
        return frozenset(name for m in self._terms for name, _ in m)

    def total_degree(self) -> int:
        return max((total_degree(m) for m in self._terms), default=0)

    def __add__(self, other):
        other = _coerce(other)
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return Polynomial(terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = monomial_mul(m1, m2)
                terms[m] = terms.get(m, Fraction(0)) + c1 * c2
        return Polynomial(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result, base = Polynomial.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        return Polynomial({m: c * v for m, v in self._terms.items()})

    def subs(self, name: str, value: "Polynomial") -> "Polynomial":
        """Substitute ``value`` for the variable ``name``."""
        out = Polynomial()
        for m, c in self._terms.items():
            rest = tuple((v, e) for v, e in m if v != name)
            e = dict(m).get(name, 0)
            out = out + Polynomial({rest: c}) * (value ** e)
        return out

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        return Polynomial({monomial((mapping.get(v, v), e) for v, e in m): c for m, c in self._terms.items()})

    def diff(self, name: str) -> "Polynomial":
        terms = {}
        for m, c in self._terms.items():
            e = dict(m).get(name, 0)
            if e:
                rest = tuple((v, x - 1 if v == name else x) for v, x in m)
                terms[monomial(rest)] = c * e
        return Polynomial(terms)

    def sorted_terms(self, order: Optional[Sequence[str]] = None) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending graded-lexicographic order.

        ``order`` ranks the variables (first is largest); by default names
        are ranked alphabetically.
        """
        names = sorted(self.variables()) if order is None else list(order)
        rank = {v: i for i, v in enumerate(names)}
        missing = self.variables() - rank.keys()
        for v in sorted(missing):
            rank[v] = len(rank)

        def key(item):
            m = dict(item[0])
            vec = [m.get(v, 0) for v in sorted(rank, key=rank.get)]
            return (-total_degree(item[0]), [-x for x in vec])

        return sorted(self._terms.items(), key=key)

    def leading_coefficient(self, order: Optional[Sequence[str]] = None) -> Fraction:
        return self.sorted_terms(order)[0][1] if self._terms else Fraction(0)

    def monic(self, order: Optional[Sequence[str]] = None) -> "Polynomial":
        if not self._terms:
            return self
        return self.scale(1 / self.leading_coefficient(order))

    def format(self, order: Optional[Sequence[str]] = None) -> str:
        if not self._terms:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.sorted_terms(order)):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            factors = [v if e == 1 else f"{v}^{e}" for v, e in _ordered(m, order)]
            if a != 1 or not factors:
                factors.insert(0, str(a))
            body = "*".join(factors)
            if i == 0:
                out.append(("-" if sign == "-" else "") + body)
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Polynomial({self.format()!r})"

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        return isinstance(other, Polynomial) and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash


def _ordered(m: Monomial, order: Optional[Sequence[str]]):
    if order is None:
        return m
    rank = {v: i for i, v in enumerate(order)}
    return sorted(m, key=lambda item: (rank.get(item[0], len(rank)), item[0]))


def _coerce(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


# -- text syntax --------------------------------------------------------------


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            tokens.append(("num", int(m.group(1)), m.start(1) + 1))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2) + 1))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*^/()":
                raise PolynomialSyntaxError(f"unexpected character {ch!r}", m.start(3) + 1)
            tokens.append((ch, ch, m.start(3) + 1))
        pos = m.end()
    tokens.append(("end", None, len(text) + 1))
    return tokens


class _Parser:
    """Recursive descent over

        expr   := ['-'|'+'] term (('+'|'-') term)*
        term   := factor ('*' factor)*
        factor := atom ['^' INT]
        atom   := INT ['/' INT] | NAME | '(' expr ')'
    """

    def __init__(self, text: str, variables: Optional[Iterable[str]]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.variables = None if variables is None else set(variables)

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            want = "number" if kind == "num" else kind
            raise PolynomialSyntaxError(f"expected {want}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolynomialSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return p

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        p = self.term().scale(sign)
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            p = p + t if op == "+" else p - t
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek()[0] == "*":
            self.take()
            p = p * self.factor()
        tok = self.peek()
        if tok[0] in ("num", "name", "("):
            raise PolynomialSyntaxError("juxtaposition is not multiplication; use '*'", tok[2])
        return p

    def factor(self) -> Polynomial:
        p = self.atom()
        if self.peek()[0] == "^":
            self.take()
            p = p ** self.take("num")[1]
        return p

    def atom(self) -> Polynomial:
        kind, value, col = self.peek()
        if kind == "num":
            self.take()
            if self.peek()[0] == "/":
                self.take()
                den = self.take("num")[1]
                if den == 0:
                    raise PolynomialSyntaxError("division by zero", col)
                return Polynomial.const(Fraction(value, den))
            return Polynomial.const(value)
        if kind == "name":
            self.take()
            if self.variables is not None and value not in self.variables:
                raise PolynomialSyntaxError(f"unknown variable {value!r}", col)
            return Polynomial.var(value)
        if kind == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        raise PolynomialSyntaxError(f"unexpected {value or 'end of input'!r}", col)


def parse_polynomial(text: str, variables: Optional[Iterable[str]] = None) -> Polynomial:
    """Parse e.g. ``"z^3 - x1"`` or ``"u^2 - v*w"``.

    When ``variables`` is given, any other name is an error.
    """
    return _Parser(text, variables).parse()
