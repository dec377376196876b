"""Kernel distributions, connections, adapted frames, and form decomposition.

A closed degree-k form with a possibly nontrivial kernel is wrapped as a
PreMultisymplecticManifold.  The user supplies a frame of the kernel plus a
complement (the connection choice); the dual coframe is computed by exact
symbolic matrix inversion, and every form can then be decomposed into its
parallel and transversal parts with respect to either projector (P onto the
kernel, or R = 1 - P onto the complement).

Frame order convention: kernel (vertical) fields first, then the chosen
complement (horizontal) fields.  Coframe covectors and all frame-monomial
indices follow the same order.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .coeff import ScalarExpr
from .errors import ChartMismatchError, PlecticError, PoleError
from .exterior import (
    Chart,
    Form,
    Index,
    VectorField,
    contract_constant,
    sort_index,
)
from .report import EVIDENCE, FAIL, VerificationReport
from .sampling import SampleConfig, pole_rejector, sample_points


class NotClosedError(PlecticError):
    """The supplied form has a nonzero exterior derivative."""


class FrameError(PlecticError):
    """The supplied fields do not constitute a valid kernel/complement frame."""


@dataclass(frozen=True)
class PreMultisymplecticManifold:
    """Chart + closed degree-k form (possibly degenerate)."""

    chart: Chart
    degree: int
    omega: Form

    def __post_init__(self):
        if self.omega.chart != self.chart:
            raise ChartMismatchError("form lives on a different chart")
        if self.omega.degree != self.degree:
            raise PlecticError(
                f"form degree {self.omega.degree} != declared degree {self.degree}"
            )
        residual = self.omega.d()
        if not residual.is_zero():
            raise NotClosedError(f"form is not closed: d(omega) = {residual}")


def contraction_matrix(form: Form, point: Sequence[Fraction]):
    """Matrix of X |-> i_X form at a point.

    Rows are indexed by the strictly increasing (degree-1)-tuples of
    coordinate positions (lexicographic order), columns by coordinates.
    """
    chart = form.chart
    d = chart.dim
    consts = form.eval_coefficients(point)
    row_index = {
        idx: r
        for r, idx in enumerate(itertools.combinations(range(d), form.degree - 1))
    }
    rows = [[Fraction(0)] * d for _ in row_index]
    for idx, c in consts.items():
        for pos, axis in enumerate(idx):
            rest = idx[:pos] + idx[pos + 1 :]
            sign = 1 if pos % 2 == 0 else -1
            rows[row_index[rest]][axis] += sign * c
    return rows, list(row_index)


def kernel_at(manifold: PreMultisymplecticManifold, point: Sequence[Fraction]) -> List[List[Fraction]]:
    """Exact basis of {X : i_X omega = 0} at a rational point."""
    rows, _ = contraction_matrix(manifold.omega, point)
    return linalg.kernel_basis(rows, manifold.chart.dim)


def verify_constant_rank(
    manifold: PreMultisymplecticManifold,
    points: Optional[Sequence[Sequence[Fraction]]] = None,
    config: SampleConfig = SampleConfig(),
) -> VerificationReport:
    """Sampled constant-rank check: kernel dimension at every sample point.

    This is sampling evidence, not a proof; the verdict is EVIDENCE when all
    sampled dimensions agree and FAIL (with the two disagreeing points as
    witnesses) otherwise.  Samples where a coefficient has a pole are skipped
    and noted.
    """
    start = time.perf_counter()
    sampled = points is None
    if sampled:
        points = sample_points(manifold.chart.dim, config, pole_rejector(manifold.omega))
    dims: Dict[Tuple[Fraction, ...], int] = {}
    skipped = []
    for p in points:
        try:
            dims[tuple(p)] = len(kernel_at(manifold, p))
        except PoleError:
            skipped.append([str(x) for x in p])
    details = {
        **(config.describe() if sampled else {"points_supplied": len(points)}),
        "kernel_dimensions": sorted(set(dims.values())),
        "samples_evaluated": len(dims),
        "samples_skipped_at_poles": skipped,
    }
    witnesses = []
    seen = {}
    for p, k in dims.items():
        seen.setdefault(k, p)
    if len(seen) > 1:
        for k, p in sorted(seen.items()):
            witnesses.append({"point": [str(x) for x in p], "kernel_dim": k})
    elif not dims:
        witnesses.append({"error": "no sample could be evaluated (all at poles)"})
    verdict = EVIDENCE if len(seen) == 1 else FAIL
    return VerificationReport(
        "constant-rank", verdict, details, witnesses,
        (time.perf_counter() - start) * 1000,
    )


@dataclass(frozen=True)
class SplitFrame:
    """Kernel frame, complement frame, and their exact dual coframe.

    ``vertical_coframe[A]`` is dual to ``vertical[A]`` (these are the theta
    covectors), ``horizontal_coframe[a]`` to ``horizontal[a]``; duality holds
    as an exact ScalarExpr identity.  Labels are distinct coordinate names
    assigned to the frame fields (used to name fiber coordinates downstream).
    """

    chart: Chart
    vertical: Tuple[VectorField, ...]
    horizontal: Tuple[VectorField, ...]
    vertical_coframe: Tuple[Form, ...]
    horizontal_coframe: Tuple[Form, ...]
    vertical_labels: Tuple[str, ...]
    horizontal_labels: Tuple[str, ...]

    @property
    def r(self) -> int:
        return len(self.vertical)

    @property
    def l(self) -> int:
        return len(self.horizontal)

    @property
    def fields(self) -> Tuple[VectorField, ...]:
        return self.vertical + self.horizontal

    @property
    def coframe(self) -> Tuple[Form, ...]:
        return self.vertical_coframe + self.horizontal_coframe

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.vertical_labels + self.horizontal_labels

    def matrix(self) -> List[List[ScalarExpr]]:
        """d x d matrix whose columns are the frame fields."""
        fields = self.fields
        return [
            [fields[j].components[i] for j in range(len(fields))]
            for i in range(self.chart.dim)
        ]


def _assign_labels(matrix: List[List[ScalarExpr]], coords: Sequence[str]) -> List[str]:
    """Assign each frame field a distinct coordinate with a nonzero component.

    Greedy bipartite matching; a perfect matching exists whenever the frame
    matrix is invertible (some generalized diagonal is nonzero).
    """
    d = len(coords)
    candidates = [
        [i for i in range(d) if not matrix[i][j].is_zero()] for j in range(d)
    ]
    match_of_coord: Dict[int, int] = {}

    def try_assign(j: int, visited: set) -> bool:
        for i in candidates[j]:
            if i in visited:
                continue
            visited.add(i)
            if i not in match_of_coord or try_assign(match_of_coord[i], visited):
                match_of_coord[i] = j
                return True
        return False

    for j in range(d):
        if not try_assign(j, set()):
            raise FrameError("could not label frame fields by coordinates")
    label_of_field = {j: i for i, j in match_of_coord.items()}
    return [coords[label_of_field[j]] for j in range(d)]


def build_split_frame(
    manifold: PreMultisymplecticManifold,
    vertical: Sequence[VectorField],
    horizontal: Sequence[VectorField],
) -> SplitFrame:
    """Validate a kernel frame + complement and compute the dual coframe.

    Checks, symbolically: counts r + l = dim, each vertical field annihilates
    omega, and the d fields are independent (frame matrix invertible).
    """
    chart = manifold.chart
    for f in list(vertical) + list(horizontal):
        if f.chart != chart:
            raise ChartMismatchError("frame field on a different chart")
    if len(vertical) + len(horizontal) != chart.dim:
        raise FrameError(
            f"{len(vertical)} vertical + {len(horizontal)} horizontal != dim {chart.dim}"
        )
    for n, field in enumerate(vertical):
        contraction = manifold.omega.interior(field)
        if not contraction.is_zero():
            raise FrameError(
                f"vertical field #{n} is not in the kernel: i_V omega = {contraction}"
            )
    fields = list(vertical) + list(horizontal)
    matrix = [
        [fields[j].components[i] for j in range(chart.dim)]
        for i in range(chart.dim)
    ]
    try:
        inverse = linalg.invert(matrix)
    except linalg.SingularMatrixError as exc:
        raise FrameError(f"fields do not form a frame: {exc}") from exc
    coframe = [
        Form(chart, 1, {(i,): inverse[j][i] for i in range(chart.dim)})
        for j in range(chart.dim)
    ]
    labels = _assign_labels(matrix, chart.coords)
    r = len(vertical)
    return SplitFrame(
        chart,
        tuple(vertical),
        tuple(horizontal),
        tuple(coframe[:r]),
        tuple(coframe[r:]),
        tuple(labels[:r]),
        tuple(labels[r:]),
    )


def frame_expansion(form: Form, frame: SplitFrame) -> Dict[Index, ScalarExpr]:
    """Coefficients of a form in the coframe monomial basis.

    Indices refer to coframe positions (verticals first).  Uses the change of
    basis dq^i = sum_j E[i][j] eta^j, where E is the frame matrix.
    """
    if form.chart != frame.chart:
        raise ChartMismatchError("form and frame charts differ")
    matrix = frame.matrix()
    d = frame.chart.dim
    rows = [
        [(j, matrix[i][j]) for j in range(d) if not matrix[i][j].is_zero()]
        for i in range(d)
    ]
    out: Dict[Index, ScalarExpr] = {}
    for idx, c in form.terms.items():
        for combo in itertools.product(*(rows[i] for i in idx)):
            sign, nidx = sort_index([j for j, _ in combo])
            if sign == 0:
                continue
            coeff = c
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


def from_frame_expansion(frame: SplitFrame, degree: int, coeffs: Dict[Index, ScalarExpr]) -> Form:
    """Rebuild a coordinate-basis Form from coframe-monomial coefficients."""
    total = Form.zero(frame.chart, degree)
    coframe = frame.coframe
    for idx, c in coeffs.items():
        mono = Form.scalar(frame.chart, 1)
        for j in idx:
            mono = mono.wedge(coframe[j])
        total = total + mono * c
    return total


@dataclass(frozen=True)
class FormSplit:
    """Parallel/transversal decomposition with respect to P or R."""

    parallel: Form
    transversal: Form
    which: str  # "P" or "R"


def decompose(form: Form, frame: SplitFrame, which: str) -> FormSplit:
    """Split a form into parallel + transversal parts.

    For P (projector onto the kernel) the parallel part collects the pure
    vertical-coframe monomials; for R = 1 - P it collects the pure
    horizontal-coframe monomials.  parallel + transversal == form exactly,
    and re-splitting the parallel part leaves it unchanged.
    """
    if which not in ("P", "R"):
        raise PlecticError("which must be 'P' or 'R'")
    coeffs = frame_expansion(form, frame)
    r = frame.r
    if which == "P":
        keep = {i: c for i, c in coeffs.items() if all(j < r for j in i)}
    else:
        keep = {i: c for i, c in coeffs.items() if all(j >= r for j in i)}
    parallel = from_frame_expansion(frame, form.degree, keep)
    return FormSplit(parallel, form - parallel, which)


def multisymplectic_orthogonal(
    form: Form,
    point: Sequence[Fraction],
    n_basis: Sequence[Sequence[Fraction]],
    ell: int,
) -> List[List[Fraction]]:
    """Exact basis of the ell-orthogonal of span(n_basis) at a point.

    Returns {V : i_{V ^ W_1 ^ ... ^ W_ell} form = 0 at the point, for all
    choices of W_j from n_basis}.  Tuples range over unordered combinations
    (the contraction alternates, so ordered tuples add nothing); if fewer
    than ell spanning vectors exist the result is the full tangent space.
    """
    if ell < 1:
        raise PlecticError("ell must be >= 1")
    d = form.chart.dim
    consts = form.eval_coefficients(point)
    # coefficient matrix: one column per component of the unknown V
    columns = []
    for v in range(d):
        ev = [Fraction(int(i == v)) for i in range(d)]
        columns.append(contract_constant(ev, consts))
    rows: List[List[Fraction]] = []
    for ws in itertools.combinations(range(len(n_basis)), ell):
        contracted = []
        for v in range(d):
            c = columns[v]
            for w in ws:
                c = contract_constant(n_basis[w], c)
            contracted.append(c)
        residual_indices = set()
        for c in contracted:
            residual_indices.update(c)
        for ridx in sorted(residual_indices):
            rows.append([contracted[v].get(ridx, Fraction(0)) for v in range(d)])
    return linalg.kernel_basis(rows, d)
