"""Sections over a low-dimensional base and equation-of-motion residuals.

A field configuration is a section of a fibered chart (total coordinates
split into base and fiber); its equations of motion are the statement that,
for every vertical coordinate direction V, the pullback of i_V omega along
the section's graph map vanishes as a top-degree form on the base.  Vertical
coordinate fields suffice: the contraction condition is linear over functions
in V.

Two views are provided.  ``eom_residual`` evaluates the residuals of a
concrete section.  ``eom_symbolic_system`` keeps the section formal: each
fiber component becomes an opaque field symbol and its first partials become
independent jet symbols, so the residuals print as first-order PDE left-hand
sides.  For thickened inputs the fiber coordinates added by the thickening
are marked auxiliary; each residual is split into the part free of auxiliary
symbols (the physical part) and the remainder, and the displayed physical
system collects the physical parts that are honest first-order PDEs (affine
in the jet symbols).  Higher jet-degree leftovers are reported as derived
combinations, and jet-free nonzero residuals -- which arise in the thickened
system from the fiber direction dual to the base volume monomial, and admit
no solution -- are reported as obstructions rather than silently dropped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .coeff import Poly, ScalarExpr
from .errors import DegreeError, PlecticError
from .exterior import Chart, CoordinateMap, Form, VectorField, sort_index

JET_SEP = "__"


@dataclass(frozen=True)
class FiberedChart:
    """Total chart split into base and fiber coordinates.

    ``auxiliary`` optionally marks a subset of the fiber coordinates as
    non-physical regulator fields (the thickening's fiber coordinates).
    """

    total: Chart
    base: Tuple[str, ...]
    auxiliary: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(self.base))
        object.__setattr__(self, "auxiliary", tuple(self.auxiliary))
        for name in self.base:
            self.total.axis(name)
        fiber = self.fiber
        for name in self.auxiliary:
            if name not in fiber:
                raise PlecticError(f"auxiliary coordinate {name!r} is not a fiber coordinate")

    @property
    def fiber(self) -> Tuple[str, ...]:
        return tuple(n for n in self.total.coords if n not in self.base)

    def base_chart(self) -> Chart:
        return Chart(self.total.name + "_base", self.base)


@dataclass(frozen=True)
class Section:
    """One base-coordinate expression per fiber coordinate."""

    fibered: FiberedChart
    components: Mapping[str, ScalarExpr]

    def __post_init__(self):
        fiber = self.fibered.fiber
        missing = [n for n in fiber if n not in self.components]
        extra = [n for n in self.components if n not in fiber]
        if missing or extra:
            raise PlecticError(
                f"section components mismatch: missing {missing}, unexpected {extra}"
            )

    def graph_map(self) -> CoordinateMap:
        base_chart = self.fibered.base_chart()
        comps = []
        for name in self.fibered.total.coords:
            if name in self.fibered.base:
                comps.append(ScalarExpr.var(base_chart.coords, name))
            else:
                comps.append(self.components[name].subs_rename(base_chart.coords))
        return CoordinateMap(base_chart, self.fibered.total, comps)


@dataclass
class EOMResidual:
    """Per-vertical-direction residual forms (top degree on the base chart)."""

    fibered: FiberedChart
    residuals: Dict[str, Form]

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.residuals.values())

    def nonzero_directions(self) -> List[str]:
        return [n for n, f in self.residuals.items() if not f.is_zero()]

    def physical(self) -> Dict[str, Form]:
        return {
            n: f for n, f in self.residuals.items() if n not in self.fibered.auxiliary
        }

    def auxiliary(self) -> Dict[str, Form]:
        return {n: f for n, f in self.residuals.items() if n in self.fibered.auxiliary}


def eom_residual(omega_hat: Form, fibered: FiberedChart, section: Section) -> EOMResidual:
    """Residuals of a concrete section: pullback of each i_V omega_hat."""
    if omega_hat.chart != fibered.total:
        raise PlecticError("form does not live on the fibered chart")
    if omega_hat.degree != len(fibered.base) + 1:
        raise DegreeError(
            f"form degree {omega_hat.degree} != base dimension + 1 = {len(fibered.base) + 1}"
        )
    graph = section.graph_map()
    residuals = {}
    for name in fibered.fiber:
        contracted = omega_hat.interior(VectorField.coordinate(fibered.total, name))
        residuals[name] = graph.pullback(contracted)
    return EOMResidual(fibered, residuals)


# -- formal jet systems ------------------------------------------------------


def jet_symbol(fiber_name: str, base_name: str) -> str:
    return f"{fiber_name}{JET_SEP}{base_name}"


def _jet_chart(fibered: FiberedChart) -> Chart:
    names = list(fibered.base) + list(fibered.fiber)
    for f in fibered.fiber:
        for b in fibered.base:
            sym = jet_symbol(f, b)
            if sym in names:
                raise PlecticError(f"jet symbol {sym!r} collides with a coordinate")
            names.append(sym)
    return Chart(fibered.total.name + "_jets", tuple(names))


def _formal_pullback(
    omega: Form, fibered: FiberedChart, jets: Chart
) -> Dict[Tuple[int, ...], ScalarExpr]:
    """Pull a form through the formal graph: d(fiber f) -> sum_b f__b d(base b).

    Returns base-axis index tuples mapped to jet-chart coefficients.
    """
    base_axes = {n: i for i, n in enumerate(fibered.base)}
    rows = []
    for name in fibered.total.coords:
        if name in base_axes:
            rows.append([(base_axes[name], ScalarExpr.one(jets.coords))])
        else:
            rows.append(
                [
                    (base_axes[b], ScalarExpr.var(jets.coords, jet_symbol(name, b)))
                    for b in fibered.base
                ]
            )
    out: Dict[Tuple[int, ...], ScalarExpr] = {}
    for idx, c in omega.terms.items():
        coeff0 = c.subs_rename(jets.coords)
        for combo in itertools.product(*(rows[i] for i in idx)):
            sign, nidx = sort_index([j for j, _ in combo])
            if sign == 0:
                continue
            coeff = coeff0
            for _, e in combo:
                coeff = coeff * e
            if sign < 0:
                coeff = -coeff
            s = out[nidx] + coeff if nidx in out else coeff
            if s.is_zero():
                out.pop(nidx, None)
            else:
                out[nidx] = s
    return out


@dataclass
class JetEquation:
    """One residual direction of the formal system.

    ``residual`` is the coefficient of the base volume form, a polynomial in
    the field symbols (fiber names) and jet symbols (``f__b``), over the jet
    chart.  ``physical`` collects the monomials free of auxiliary field/jet
    symbols; ``auxiliary`` is the remainder.
    """

    direction: str
    residual: ScalarExpr
    physical: ScalarExpr
    auxiliary: ScalarExpr
    jets: Chart
    jet_axes: Tuple[int, ...]
    fibered: FiberedChart

    def jet_degree(self, part: Optional[ScalarExpr] = None) -> int:
        expr = self.physical if part is None else part
        axes = set(self.jet_axes)
        return max(
            (sum(k for i, k in enumerate(e) if i in axes and k) for e in expr.num.terms),
            default=0,
        )

    def kind(self) -> str:
        """Classify the physical part: pde, derived, obstruction, or empty."""
        if self.physical.is_zero():
            return "empty"
        deg = self.jet_degree()
        if deg == 0:
            return "obstruction"
        if deg == 1:
            return "pde"
        return "derived"


def _split_physical(expr: ScalarExpr, jets: Chart, aux_axes: set) -> Tuple[ScalarExpr, ScalarExpr]:
    """Split a polynomial expression by auxiliary-symbol content."""
    if not aux_axes.isdisjoint(
        i for e in expr.den.terms for i, k in enumerate(e) if k
    ):
        # auxiliary symbols in a denominator: treat everything as auxiliary
        return ScalarExpr.zero(jets.coords), expr
    phys_terms, aux_terms = {}, {}
    for e, c in expr.num.terms.items():
        target = aux_terms if any(e[i] for i in aux_axes) else phys_terms
        target[e] = c
    phys = ScalarExpr(Poly(jets.coords, phys_terms), expr.den)
    aux = ScalarExpr(Poly(jets.coords, aux_terms), expr.den)
    return phys, aux


def normalize_equation(expr: ScalarExpr, jets: Chart, jet_axes: Sequence[int]) -> ScalarExpr:
    """Scale so the leading jet monomial has rational coefficient +1.

    The leading monomial is the graded-lex largest among those of maximal jet
    degree, with jet symbols ordered by their chart position.  Comparisons of
    normalized equations are up to overall sign and exact equality.
    """
    if expr.is_zero():
        return expr
    axes = set(jet_axes)

    def jet_part(e):
        return sum(k for i, k in enumerate(e) if i in axes)

    max_deg = max(jet_part(e) for e in expr.num.terms)
    lead = max(
        (e for e in expr.num.terms if jet_part(e) == max_deg),
        key=lambda e: (sum(e), e),
    )
    return expr * (1 / expr.num.terms[lead])


@dataclass
class EOMSystem:
    """The formal first-order system of a form over a fibered chart."""

    fibered: FiberedChart
    jets: Chart
    equations: List[JetEquation]

    def physical_system(self) -> List[ScalarExpr]:
        """Distinct normalized physical PDE parts (jet-affine, at least one jet)."""
        out: List[ScalarExpr] = []
        for eq in self.equations:
            if eq.kind() != "pde":
                continue
            n = normalize_equation(eq.physical, self.jets, eq.jet_axes)
            if not any(n == seen or n == -seen for seen in out):
                out.append(n)
        return out

    def auxiliary_system(self) -> List[Tuple[str, ScalarExpr]]:
        return [
            (eq.direction, normalize_equation(eq.auxiliary, self.jets, eq.jet_axes))
            for eq in self.equations
            if not eq.auxiliary.is_zero()
        ]

    def derived_combinations(self) -> List[Tuple[str, ScalarExpr]]:
        return [
            (eq.direction, normalize_equation(eq.physical, self.jets, eq.jet_axes))
            for eq in self.equations
            if eq.kind() == "derived"
        ]

    def obstructions(self) -> List[Tuple[str, ScalarExpr]]:
        return [
            (eq.direction, eq.physical)
            for eq in self.equations
            if eq.kind() == "obstruction"
        ]

    def display(self, expr: ScalarExpr) -> str:
        """Render jet symbols as partial derivatives: u__x -> d(u)/d(x)."""
        text = str(expr)
        subs = [
            (jet_symbol(f, b), f"d({f})/d({b})")
            for f in self.fibered.fiber
            for b in self.fibered.base
        ]
        # longest first, so a jet symbol embedded in a longer field name is safe
        for sym, pretty in sorted(subs, key=lambda kv: -len(kv[0])):
            text = text.replace(sym, pretty)
        return f"{text} = 0"


def eom_symbolic_system(omega_hat: Form, fibered: FiberedChart) -> EOMSystem:
    """Formal residuals, one equation per vertical direction; zeros dropped."""
    if omega_hat.chart != fibered.total:
        raise PlecticError("form does not live on the fibered chart")
    if omega_hat.degree != len(fibered.base) + 1:
        raise DegreeError(
            f"form degree {omega_hat.degree} != base dimension + 1 = {len(fibered.base) + 1}"
        )
    jets = _jet_chart(fibered)
    jet_axes = tuple(
        jets.axis(jet_symbol(f, b)) for f in fibered.fiber for b in fibered.base
    )
    aux_axes = {jets.axis(a) for a in fibered.auxiliary}
    for a in fibered.auxiliary:
        for b in fibered.base:
            aux_axes.add(jets.axis(jet_symbol(a, b)))
    volume_index = tuple(range(len(fibered.base)))
    equations = []
    for name in fibered.fiber:
        contracted = omega_hat.interior(VectorField.coordinate(fibered.total, name))
        pulled = _formal_pullback(contracted, fibered, jets)
        residual = pulled.get(volume_index, ScalarExpr.zero(jets.coords))
        if residual.is_zero():
            continue
        physical, auxiliary = _split_physical(residual, jets, aux_axes)
        equations.append(
            JetEquation(name, residual, physical, auxiliary, jets, jet_axes, fibered)
        )
    return EOMSystem(fibered, jets, equations)
