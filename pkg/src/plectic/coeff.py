"""Exact arithmetic in the field of multivariate rational functions over Q.

Every coefficient in this package is a ScalarExpr: a quotient of two sparse
multivariate polynomials with arbitrary-precision rational coefficients.
Equality is decided by cross-multiplication (p/q == r/s iff p*s - r*q is the
zero polynomial), so no canonical form is required for correctness; a
polynomial gcd is still divided out opportunistically to keep expressions
small and printing readable.  Floating point is never used.

The module also hosts the parser for the textual coefficient language:

    expr   := ('+'|'-')? term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' nat)?
    base   := integer | identifier | '(' expr ')'

Identifiers match [A-Za-z_][A-Za-z0-9_]* and must name chart coordinates.
A leading sign is accepted as a convenience on top of the documented grammar.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .errors import PlecticError, PoleError

ScalarLike = Union["ScalarExpr", "Poly", Fraction, int]

# Polynomials larger than this skip gcd reduction; cross-multiplication
# equality stays exact regardless.
_GCD_TERM_LIMIT = 80


class ExprSyntaxError(PlecticError):
    """Malformed coefficient expression; carries the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownVariableError(ExprSyntaxError):
    pass


class DivisionByZeroExprError(PlecticError, ZeroDivisionError):
    """Division by an expression equal to the zero polynomial."""


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(
        math.gcd(a.numerator, b.numerator),
        (a.denominator * b.denominator) // math.gcd(a.denominator, b.denominator),
    )


class Poly:
    """Sparse multivariate polynomial over Q.

    terms maps exponent tuples (one entry per variable) to nonzero Fraction
    coefficients; the zero polynomial has no terms.  Instances are treated as
    immutable after construction.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Fraction]):
        self.variables = tuple(variables)
        self.terms = {e: c for e, c in terms.items() if c}

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Poly":
        return cls(variables, {})

    @classmethod
    def const(cls, variables: Sequence[str], value) -> "Poly":
        value = Fraction(value)
        n = len(variables)
        return cls(variables, {(0,) * n: value} if value else {})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "Poly":
        idx = tuple(variables).index(name)
        exp = tuple(1 if i == idx else 0 for i in range(len(variables)))
        return cls(variables, {exp: Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(not any(e) for e in self.terms)

    def const_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        [(exp, coeff)] = self.terms.items()
        if any(exp):
            raise ValueError("polynomial is not constant")
        return coeff

    def _check(self, other: "Poly") -> None:
        if self.variables != other.variables:
            raise PlecticError(
                f"polynomials over different variables: {self.variables} vs {other.variables}"
            )

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.variables, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly(self.variables, out)

    def __neg__(self) -> "Poly":
        return Poly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return Poly(self.variables, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative exponent on a polynomial")
        result = Poly.const(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def diff(self, name: str) -> "Poly":
        idx = self.variables.index(name)
        out: dict = {}
        for e, c in self.terms.items():
            if e[idx] == 0:
                continue
            ne = tuple(x - 1 if i == idx else x for i, x in enumerate(e))
            out[ne] = out.get(ne, Fraction(0)) + c * e[idx]
        return Poly(self.variables, out)

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != len(self.variables):
            raise ValueError("point dimension mismatch")
        point = [Fraction(p) for p in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= x**k
            total += v
        return total

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, idx: int) -> int:
        return max((e[idx] for e in self.terms), default=0)

    def _lead(self) -> tuple:
        """Leading exponent under graded lex (largest total degree first)."""
        return max(self.terms, key=lambda e: (sum(e), e))

    def content(self) -> Fraction:
        c = Fraction(0)
        for coeff in self.terms.values():
            c = _frac_gcd(c, abs(coeff))
        return c if c else Fraction(1)

    # -- display ---------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            c = self.terms[e]
            factors = [
                self.variables[i] if k == 1 else f"{self.variables[i]}^{k}"
                for i, k in enumerate(e)
                if k
            ]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"


# -- polynomial gcd (primitive pseudo-remainder sequence) ------------------


def _div_exact(a: Poly, b: Poly):
    """Exact multivariate division a / b, or None if b does not divide a."""
    if b.is_zero():
        return None
    quot: dict = {}
    rem = a
    lb = b._lead()
    cb = b.terms[lb]
    while not rem.is_zero():
        la = rem._lead()
        e = tuple(x - y for x, y in zip(la, lb))
        if any(x < 0 for x in e):
            return None
        c = rem.terms[la] / cb
        quot[e] = c
        rem = rem - Poly(a.variables, {e: c}) * b
    return Poly(a.variables, quot)


def _vcoeffs(p: Poly, idx: int) -> dict:
    """View p as univariate in variable idx: degree -> Poly coefficient."""
    out: dict = {}
    for e, c in p.terms.items():
        k = e[idx]
        re = tuple(0 if i == idx else x for i, x in enumerate(e))
        coeff = out.setdefault(k, {})
        coeff[re] = coeff.get(re, Fraction(0)) + c
    return {k: Poly(p.variables, t) for k, t in out.items()}


def _shift(p: Poly, idx: int, k: int) -> Poly:
    return Poly(
        p.variables,
        {
            tuple(x + k if i == idx else x for i, x in enumerate(e)): c
            for e, c in p.terms.items()
        },
    )


def _prem(a: Poly, b: Poly, idx: int) -> Poly:
    """Pseudo-remainder of a by b with respect to variable idx."""
    db = b.degree_in(idx)
    lb = _vcoeffs(b, idx)[db]
    r = a
    while not r.is_zero() and r.degree_in(idx) >= db:
        dr = r.degree_in(idx)
        lr = _vcoeffs(r, idx)[dr]
        r = lb * r - _shift(lr * b, idx, dr - db)
    return r


def _vcontent(p: Poly, idx: int, budget: list) -> Poly:
    g = Poly.zero(p.variables)
    for coeff in _vcoeffs(p, idx).values():
        g = _prs_gcd(g, coeff, budget)
        if g.is_const():
            break
    return g if not g.is_zero() else Poly.const(p.variables, 1)

def _monomial_content(p: Poly) -> tuple:
    return tuple(min(e[i] for e in p.terms) for i in range(len(p.variables)))


def _strip(p: Poly):
    """Factor p = c * monomial * primitive with c the rational content."""
    c = p.content()
    mono = _monomial_content(p)
    stripped = Poly(
        p.variables,
        {
            tuple(x - m for x, m in zip(e, mono)): coeff / c
            for e, coeff in p.terms.items()
        },
    )
    return c, mono, stripped


def _prs_gcd(a: Poly, b: Poly, budget: list) -> Poly:
    """Primitive pseudo-remainder-sequence gcd; bails to 1 when the shared
    step budget runs out (any common divisor is acceptable to callers)."""
    if a.is_zero():
        return _normalize_sign(b)
    if b.is_zero():
        return _normalize_sign(a)
    budget[0] -= 1
    if (
        budget[0] < 0
        or len(a.terms) > _GCD_TERM_LIMIT
        or len(b.terms) > _GCD_TERM_LIMIT
    ):
        return Poly.const(a.variables, 1)
    idx = next(
        (i for i in range(len(a.variables)) if a.degree_in(i) or b.degree_in(i)),
        None,
    )
    if idx is None:  # both constants
        return Poly.const(a.variables, _frac_gcd(a.content(), b.content()))
    ca, cb = _vcontent(a, idx, budget), _vcontent(b, idx, budget)
    pa = _div_exact(a, ca)
    pb = _div_exact(b, cb)
    cg = _prs_gcd(ca, cb, budget)
    while not pb.is_zero():
        budget[0] -= 1
        if budget[0] < 0 or len(pa.terms) > _GCD_TERM_LIMIT or len(pb.terms) > _GCD_TERM_LIMIT:
            return Poly.const(a.variables, 1)
        r = _prem(pa, pb, idx)
        if r.is_zero():
            pa = pb
            break
        pa, pb = pb, _div_exact(r, _vcontent(r, idx, budget))
    prim = _div_exact(pa, _vcontent(pa, idx, budget))
    g = cg * prim
    scaled = _div_exact(g, Poly.const(g.variables, g.content()))
    return _normalize_sign(scaled)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """A divisor of gcd(a, b), exact and sign-normalized; 1 when coprime.

    Cheap ladder: rational and monomial contents, equality, one-sided exact
    division; a budgeted pseudo-remainder sequence only for small operands.
    Callers only divide by the result, so returning a partial divisor is
    always sound.
    """
    if a.is_zero():
        return _normalize_sign(b)
    if b.is_zero():
        return _normalize_sign(a)
    ca, ma, pa = _strip(a)
    cb, mb, pb = _strip(b)
    c = _frac_gcd(ca, cb)
    mono = tuple(min(x, y) for x, y in zip(ma, mb))
    base = Poly(a.variables, {mono: c})
    if len(pa.terms) == 1 or len(pb.terms) == 1:
        return _normalize_sign(base)
    if pa == pb or pa == -pb:
        return _normalize_sign(base * _normalize_sign(pa))
    if len(pa.terms) <= len(pb.terms):
        q = _div_exact(pb, pa)
        if q is not None:
            return _normalize_sign(base * _normalize_sign(pa))
    else:
        q = _div_exact(pa, pb)
        if q is not None:
            return _normalize_sign(base * _normalize_sign(pb))
    if len(pa.terms) <= 24 and len(pb.terms) <= 24:
        g = _prs_gcd(pa, pb, [60])
        return _normalize_sign(base * g)
    return _normalize_sign(base)


def _normalize_sign(p: Poly) -> Poly:
    if not p.is_zero() and p.terms[p._lead()] < 0:
        return -p
    return p


# -- rational functions ----------------------------------------------------


class ScalarExpr:
    """Element of Q(q_1, ..., q_d): a quotient of two Poly values.

    Supports +, -, *, /, ** with promotion of int and Fraction operands.
    Equality against another ScalarExpr (or scalar) is exact, decided by
    cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = None):
        if den is None:
            den = Poly.const(num.variables, 1)
        if den.is_zero():
            raise DivisionByZeroExprError("zero denominator")
        num._check(den)
        self.num, self.den = _reduce(num, den)

    # -- constructors ----------------------------------------------------

    @classmethod
    def const(cls, variables: Sequence[str], value) -> "ScalarExpr":
        return cls(Poly.const(variables, value))

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "ScalarExpr":
        return cls(Poly.zero(variables))

    @classmethod
    def one(cls, variables: Sequence[str]) -> "ScalarExpr":
        return cls.const(variables, 1)

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "ScalarExpr":
        return cls(Poly.var(variables, name))

    @property
    def variables(self) -> tuple:
        return self.num.variables

    def _coerce(self, other: ScalarLike):
        if isinstance(other, ScalarExpr):
            return other
        if isinstance(other, Poly):
            return ScalarExpr(other)
        if isinstance(other, (int, Fraction)):
            return ScalarExpr.const(self.variables, other)
        return None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def const_value(self) -> Fraction:
        return self.num.const_value() / self.den.const_value()

    # -- field operations ------------------------------------------------

    def __add__(self, other: ScalarLike) -> "ScalarExpr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den.terms == other.den.terms:  # structurally equal denominators
            return ScalarExpr(self.num + other.num, self.den)
        return ScalarExpr(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "ScalarExpr":
        return ScalarExpr(-self.num, self.den)

    def __sub__(self, other: ScalarLike) -> "ScalarExpr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: ScalarLike) -> "ScalarExpr":
        return -(self - other)

    def __mul__(self, other: ScalarLike) -> "ScalarExpr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return ScalarExpr(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "ScalarExpr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZeroExprError("division by the zero expression")
        return ScalarExpr(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other: ScalarLike) -> "ScalarExpr":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "ScalarExpr":
        if n < 0:
            return ScalarExpr.one(self.variables) / self ** (-n)
        return ScalarExpr(self.num**n, self.den**n)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.variables != other.variables:
            return False
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        if self.is_const():
            return hash(self.const_value())
        # cross-multiplication equality admits no cheap canonical hash;
        # hash by variables only (valid, if coarse)
        return hash(self.variables)

    # -- calculus --------------------------------------------------------

    def diff(self, name: str) -> "ScalarExpr":
        """Partial derivative: (p/q)' = (q p' - p q') / q^2."""
        if name not in self.variables:
            raise PlecticError(f"unknown variable {name!r}")
        return ScalarExpr(
            self.den * self.num.diff(name) - self.num * self.den.diff(name),
            self.den * self.den,
        )

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        den = self.den.evaluate(point)
        if den == 0:
            raise PoleError(f"pole at {tuple(map(str, point))}: denominator {self.den} vanishes")
        return self.num.evaluate(point) / den

    def compose(self, values: Sequence["ScalarExpr"]) -> "ScalarExpr":
        """Substitute values[i] for variable i; values share one variable set."""
        if len(values) != len(self.variables):
            raise PlecticError("substitution arity mismatch")
        out_vars = values[0].variables if values else ()

        def eval_poly(p: Poly) -> "ScalarExpr":
            total = ScalarExpr.zero(out_vars)
            for e, c in p.terms.items():
                term = ScalarExpr.const(out_vars, c)
                for v, k in zip(values, e):
                    if k:
                        term = term * v**k
                total = total + term
            return total

        den = eval_poly(self.den)
        if den.is_zero():
            raise PoleError("substitution lands in the zero set of the denominator")
        return eval_poly(self.num) / den

    def subs_rename(self, variables: Sequence[str], rename: Mapping[str, str] = None) -> "ScalarExpr":
        """Re-express over a variable superset (optionally renaming)."""
        rename = rename or {}
        variables = tuple(variables)
        pos = {}
        for i, v in enumerate(self.variables):
            nv = rename.get(v, v)
            pos[i] = variables.index(nv)

        def remap(p: Poly) -> Poly:
            out = {}
            for e, c in p.terms.items():
                ne = [0] * len(variables)
                for i, k in enumerate(e):
                    ne[pos[i]] = k
                out[tuple(ne)] = c
            return Poly(variables, out)

        return ScalarExpr(remap(self.num), remap(self.den))

    # -- display ---------------------------------------------------------

    def __str__(self) -> str:
        if self.den == Poly.const(self.variables, 1):
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"ScalarExpr({self})"


def _reduce(num: Poly, den: Poly):
    """Divide out the gcd and normalize so den is primitive with positive lead."""
    if num.is_zero():
        return num, Poly.const(num.variables, 1)
    g = poly_gcd(num, den)
    if not (g.is_const() and g.const_value() == 1):
        qn, qd = _div_exact(num, g), _div_exact(den, g)
        if qn is not None and qd is not None:
            num, den = qn, qd
    scale = den.content()
    if den.terms[den._lead()] < 0:
        scale = -scale
    if scale != 1:
        num = num * (1 / scale)
        den = den * (1 / scale)
    return num, den


# -- parser ----------------------------------------------------------------


class _Tokenizer:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0

    def tokens(self):
        src, n = self.src, len(self.src)
        i = 0
        while i < n:
            ch = src[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < n and src[j].isdigit():
                    j += 1
                yield ("num", src[i:j], i)
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < n and (src[j].isalnum() or src[j] == "_"):
                    j += 1
                yield ("ident", src[i:j], i)
                i = j
            elif ch in "+-*/^()":
                yield (ch, ch, i)
                i += 1
            else:
                raise ExprSyntaxError(f"unexpected character {ch!r}", i)
        yield ("end", "", n)


class _Parser:
    def __init__(self, src: str, variables: Sequence[str]):
        self.toks = list(_Tokenizer(src).tokens())
        self.i = 0
        self.variables = tuple(variables)

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self) -> ScalarExpr:
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"unexpected trailing input {tok[1]!r}", tok[2])
        return e

    def expr(self) -> ScalarExpr:
        sign = 1
        if self.peek()[0] in "+-":
            if self.next()[0] == "-":
                sign = -1
        e = self.term()
        if sign < 0:
            e = -e
        while self.peek()[0] in "+-":
            op = self.next()[0]
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self) -> ScalarExpr:
        e = self.factor()
        while self.peek()[0] in "*/":
            kind, _, pos = self.next()
            rhs = self.factor()
            if kind == "*":
                e = e * rhs
            else:
                if rhs.is_zero():
                    raise DivisionByZeroExprError(
                        f"division by a zero expression (at position {pos})"
                    )
                e = e / rhs
        return e

    def factor(self) -> ScalarExpr:
        e = self.base()
        if self.peek()[0] == "^":
            self.next()
            tok = self.expect("num")
            e = e ** int(tok[1])
        return e

    def base(self) -> ScalarExpr:
        kind, text, pos = self.next()
        if kind == "num":
            return ScalarExpr.const(self.variables, int(text))
        if kind == "ident":
            if text not in self.variables:
                raise UnknownVariableError(f"unknown variable {text!r}", pos)
            return ScalarExpr.var(self.variables, text)
        if kind == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ExprSyntaxError(f"expected a value, found {text!r}" if text else "unexpected end of input", pos)


def parse_expr(src: str, variables: Sequence[str]) -> ScalarExpr:
    """Parse a coefficient expression over the given coordinate names."""
    return _Parser(src, variables).parse()


def as_scalar(value: ScalarLike, variables: Sequence[str]) -> ScalarExpr:
    """Promote ints, Fractions, Polys, or expression strings to ScalarExpr."""
    if isinstance(value, ScalarExpr):
        return value
    if isinstance(value, Poly):
        return ScalarExpr(value)
    if isinstance(value, str):
        return parse_expr(value, variables)
    return ScalarExpr.const(variables, value)
