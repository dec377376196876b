"""Differential forms and vector fields on a coordinate chart.

Forms are stored sparsely: a degree-k form maps strictly increasing tuples of
coordinate positions to nonzero ScalarExpr coefficients, with sign
normalization applied when terms are inserted.  Zero coefficients are pruned
eagerly, so ``is_zero`` is a structural check.  All operations are pure.

Convention for iterated contraction: ``interior_multi((X1, ..., Xl), a)``
computes i_{Xl} ... i_{X1} a, i.e. X1 is contracted into the first slot.
Kernels and orthogonals are insensitive to this sign choice; it is fixed here
once and used everywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .coeff import ScalarExpr, as_scalar
from .errors import ChartMismatchError, DegreeError, PlecticError

Index = Tuple[int, ...]


@dataclass(frozen=True)
class Chart:
    """A named coordinate chart: an ordered tuple of distinct coordinate names."""

    name: str
    coords: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if len(set(self.coords)) != len(self.coords):
            raise PlecticError(f"duplicate coordinate names in chart {self.name!r}")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def axis(self, name: str) -> int:
        try:
            return self.coords.index(name)
        except ValueError:
            raise PlecticError(f"chart {self.name!r} has no coordinate {name!r}") from None

    def scalar(self, value) -> ScalarExpr:
        return as_scalar(value, self.coords)


def sort_index(indices: Sequence[int]):
    """Sign-normalize an index tuple: (sign, increasing tuple); sign 0 if repeated."""
    indices = list(indices)
    if len(set(indices)) != len(indices):
        return 0, None
    sign = 1
    # insertion sort; counts transpositions exactly
    for i in range(1, len(indices)):
        j = i
        while j > 0 and indices[j - 1] > indices[j]:
            indices[j - 1], indices[j] = indices[j], indices[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(indices)


class Form:
    """Differential form of fixed degree with exact rational-function coefficients."""

    __slots__ = ("chart", "degree", "terms")

    def __init__(self, chart: Chart, degree: int, terms: Mapping[Index, ScalarExpr] = None):
        if degree < 0:
            raise DegreeError("negative form degree")
        self.chart = chart
        self.degree = degree
        self.terms: Dict[Index, ScalarExpr] = {}
        for idx, coeff in (terms or {}).items():
            if len(idx) != degree:
                raise DegreeError(f"index {idx} has length != degree {degree}")
            if not coeff.is_zero():
                self.terms[tuple(idx)] = coeff

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, chart: Chart, degree: int) -> "Form":
        return cls(chart, degree, {})

    @classmethod
    def scalar(cls, chart: Chart, value) -> "Form":
        return cls(chart, 0, {(): chart.scalar(value)})

    @classmethod
    def d_coord(cls, chart: Chart, name: str) -> "Form":
        """The coordinate differential of one chart coordinate."""
        return cls(chart, 1, {(chart.axis(name),): ScalarExpr.one(chart.coords)})

    @classmethod
    def from_terms(cls, chart: Chart, degree: int, entries: Iterable) -> "Form":
        """Build from (index tuple, coefficient) pairs, normalizing index order.

        Indices may be coordinate positions or coordinate names.
        """
        acc: Dict[Index, ScalarExpr] = {}
        for indices, coeff in entries:
            coeff = chart.scalar(coeff)
            positions = [chart.axis(n) if isinstance(n, str) else n for n in indices]
            sign, idx = sort_index(positions)
            if sign == 0 or coeff.is_zero():
                continue
            if sign < 0:
                coeff = -coeff
            acc[idx] = acc[idx] + coeff if idx in acc else coeff
        return cls(chart, degree, acc)

    @classmethod
    def monomial(cls, chart: Chart, coeff, coord_names: Sequence[str]) -> "Form":
        """coeff * d(name1) ^ ... ^ d(namek)."""
        idx = [chart.axis(n) for n in coord_names]
        return cls.from_terms(chart, len(idx), [(idx, coeff)])

    # -- helpers ---------------------------------------------------------

    def _check_chart(self, other) -> None:
        if self.chart != other.chart:
            raise ChartMismatchError(
                f"charts differ: {self.chart.name!r} vs {other.chart.name!r}"
            )

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, indices: Sequence[int]) -> ScalarExpr:
        sign, idx = sort_index(indices)
        if sign == 0:
            return ScalarExpr.zero(self.chart.coords)
        c = self.terms.get(idx)
        if c is None:
            return ScalarExpr.zero(self.chart.coords)
        return c if sign > 0 else -c

    def sorted_terms(self) -> List[Tuple[Index, ScalarExpr]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        if self.chart != other.chart or self.degree != other.degree:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.chart, self.degree))

    # -- algebra ---------------------------------------------------------

    def __add__(self, other: "Form") -> "Form":
        self._check_chart(other)
        if self.degree != other.degree:
            raise DegreeError("cannot add forms of different degree")
        out = dict(self.terms)
        for idx, c in other.terms.items():
            s = out[idx] + c if idx in out else c
            if s.is_zero():
                out.pop(idx, None)
            else:
                out[idx] = s
        return Form(self.chart, self.degree, out)

    def __neg__(self) -> "Form":
        return Form(self.chart, self.degree, {i: -c for i, c in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __mul__(self, scalar) -> "Form":
        s = self.chart.scalar(scalar) if not isinstance(scalar, ScalarExpr) else scalar
        return Form(self.chart, self.degree, {i: c * s for i, c in self.terms.items()})

    __rmul__ = __mul__

    def wedge(self, other: "Form") -> "Form":
        """Exterior product; degrees add, graded-commutative."""
        self._check_chart(other)
        out: Dict[Index, ScalarExpr] = {}
        for i1, c1 in self.terms.items():
            for i2, c2 in other.terms.items():
                sign, idx = sort_index(i1 + i2)
                if sign == 0:
                    continue
                c = c1 * c2
                if sign < 0:
                    c = -c
                s = out[idx] + c if idx in out else c
                if s.is_zero():
                    out.pop(idx, None)
                else:
                    out[idx] = s
        return Form(self.chart, self.degree + other.degree, out)

    def interior(self, field: "VectorField") -> "Form":
        """Contraction i_X into the first slot; degree drops by one."""
        if self.chart != field.chart:
            raise ChartMismatchError("vector field lives on a different chart")
        if self.degree == 0:
            raise DegreeError("cannot contract a 0-form")
        out: Dict[Index, ScalarExpr] = {}
        for idx, c in self.terms.items():
            for pos, axis in enumerate(idx):
                comp = field.components[axis]
                if comp.is_zero():
                    continue
                coeff = c * comp if pos % 2 == 0 else -(c * comp)
                rest = idx[:pos] + idx[pos + 1 :]
                s = out[rest] + coeff if rest in out else coeff
                if s.is_zero():
                    out.pop(rest, None)
                else:
                    out[rest] = s
        return Form(self.chart, self.degree - 1, out)

    def d(self) -> "Form":
        """Exterior derivative; d(d(a)) = 0."""
        out: Dict[Index, ScalarExpr] = {}
        for idx, c in self.terms.items():
            for axis, name in enumerate(self.chart.coords):
                dc = c.diff(name)
                if dc.is_zero():
                    continue
                sign, nidx = sort_index((axis,) + idx)
                if sign == 0:
                    continue
                if sign < 0:
                    dc = -dc
                s = out[nidx] + dc if nidx in out else dc
                if s.is_zero():
                    out.pop(nidx, None)
                else:
                    out[nidx] = s
        return Form(self.chart, self.degree + 1, out)

    # -- evaluation ------------------------------------------------------

    def eval_coefficients(self, point: Sequence[Fraction]) -> Dict[Index, Fraction]:
        """Evaluate every coefficient at a rational point (raises PoleError)."""
        return {idx: c.evaluate(point) for idx, c in self.terms.items()}

    def evaluate(self, point: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]]) -> Fraction:
        """Exact multilinear alternating evaluation on rational tangent vectors."""
        if len(vectors) != self.degree:
            raise DegreeError(
                f"degree-{self.degree} form applied to {len(vectors)} vectors"
            )
        consts = self.eval_coefficients(point)
        total = Fraction(0)
        for idx, c in consts.items():
            rows = [[Fraction(v[i]) for v in vectors] for i in idx]
            total += c * _det(rows)
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.chart.coords
        parts = []
        for idx, c in self.sorted_terms():
            mono = "^".join(f"d{names[i]}" for i in idx) if idx else "1"
            cs = str(c)
            if cs == "1" and idx:
                parts.append(mono)
            else:
                cs = cs if _is_atomic(cs) else f"({cs})"
                parts.append(f"{cs}*{mono}" if idx else cs)
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Form<deg {self.degree} on {self.chart.name}>({self})"


def _is_atomic(s: str) -> bool:
    return not any(ch in s for ch in "+- ") or (s.startswith("-") and not any(ch in s[1:] for ch in "+- "))


def _det(rows: List[List[Fraction]]) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m = [row[:] for row in rows]
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


class VectorField:
    """Vector field with one ScalarExpr component per chart coordinate."""

    __slots__ = ("chart", "components")

    def __init__(self, chart: Chart, components: Sequence[ScalarExpr]):
        if len(components) != chart.dim:
            raise PlecticError("component count != chart dimension")
        self.chart = chart
        self.components = tuple(chart.scalar(c) if not isinstance(c, ScalarExpr) else c for c in components)

    @classmethod
    def coordinate(cls, chart: Chart, name: str) -> "VectorField":
        axis = chart.axis(name)
        return cls(
            chart,
            [ScalarExpr.const(chart.coords, int(i == axis)) for i in range(chart.dim)],
        )

    @classmethod
    def from_mapping(cls, chart: Chart, mapping: Mapping[str, object]) -> "VectorField":
        comps = [ScalarExpr.zero(chart.coords) for _ in range(chart.dim)]
        for name, value in mapping.items():
            comps[chart.axis(name)] = chart.scalar(value)
        return cls(chart, comps)

    def evaluate(self, point: Sequence[Fraction]) -> List[Fraction]:
        return [c.evaluate(point) for c in self.components]

    def __str__(self) -> str:
        parts = [
            f"({c})*e_{name}"
            for c, name in zip(self.components, self.chart.coords)
            if not c.is_zero()
        ]
        return " + ".join(parts) if parts else "0"


def interior_multi(fields: Sequence[VectorField], form: Form) -> Form:
    """i_{Xl} ... i_{X1} form: the first listed field contracts first."""
    if len(fields) > form.degree:
        raise DegreeError("more contractions than form degree")
    out = form
    for field in fields:
        out = out.interior(field)
    return out


class CoordinateMap:
    """Rational map between charts: one source-coordinate expression per target coordinate."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: Chart, target: Chart, components: Sequence):
        if len(components) != target.dim:
            raise PlecticError("component count != target dimension")
        self.source = source
        self.target = target
        self.components = tuple(source.scalar(c) if not isinstance(c, ScalarExpr) else c for c in components)

    @classmethod
    def identity(cls, chart: Chart) -> "CoordinateMap":
        return cls(chart, chart, [ScalarExpr.var(chart.coords, n) for n in chart.coords])

    def after(self, inner: "CoordinateMap") -> "CoordinateMap":
        """Composition self o inner (inner applied first)."""
        if inner.target != self.source:
            raise ChartMismatchError("composition charts do not line up")
        return CoordinateMap(
            inner.source,
            self.target,
            [c.compose(inner.components) for c in self.components],
        )

    def pullback(self, form: Form) -> Form:
        """Pull a form on the target chart back to the source chart."""
        if form.chart != self.target:
            raise ChartMismatchError(
                f"form lives on {form.chart.name!r}, map targets {self.target.name!r}"
            )
        src = self.source
        # differential of each target coordinate, as a row of nonzero partials
        partials: List[List[Tuple[int, ScalarExpr]]] = []
        for comp in self.components:
            row = []
            for j, name in enumerate(src.coords):
                p = comp.diff(name)
                if not p.is_zero():
                    row.append((j, p))
            partials.append(row)
        out: Dict[Index, ScalarExpr] = {}
        for idx, c in form.terms.items():
            c_src = c.compose(self.components)
            if c_src.is_zero():
                continue
            rows = [partials[i] for i in idx]
            if any(not row for row in rows):
                continue
            for combo in itertools.product(*rows):
                sign, nidx = sort_index([j for j, _ in combo])
                if sign == 0:
                    continue
                coeff = c_src
                for _, p in combo:
                    coeff = coeff * p
                if sign < 0:
                    coeff = -coeff
                s = out[nidx] + coeff if nidx in out else coeff
                if s.is_zero():
                    out.pop(nidx, None)
                else:
                    out[nidx] = s
        return Form(src, form.degree, out)

    def pushforward_vector(self, point: Sequence[Fraction], vector: Sequence[Fraction]) -> List[Fraction]:
        """Differential applied to a tangent vector at a rational point."""
        out = []
        for comp in self.components:
            acc = Fraction(0)
            for j, name in enumerate(self.source.coords):
                p = comp.diff(name)
                if not p.is_zero():
                    acc += p.evaluate(point) * Fraction(vector[j])
            out.append(acc)
        return out


# -- pointwise (constant-coefficient) contraction helpers -------------------


def contract_constant(values: Sequence[Fraction], cterms: Mapping[Index, Fraction]) -> Dict[Index, Fraction]:
    """Interior product of a constant form by a constant vector (first slot)."""
    out: Dict[Index, Fraction] = {}
    for idx, c in cterms.items():
        for pos, axis in enumerate(idx):
            v = Fraction(values[axis])
            if not v:
                continue
            coeff = c * v if pos % 2 == 0 else -c * v
            rest = idx[:pos] + idx[pos + 1 :]
            s = out.get(rest, Fraction(0)) + coeff
            if s:
                out[rest] = s
            else:
                out.pop(rest, None)
    return out
