"""The multisymplectic thickening and its property verifiers.

Given a closed degree-k form (k >= 3) with constant-rank kernel and a chosen
kernel/complement frame, the thickening is a chart on the bundle of
transversal (k-1)-covectors: base coordinates followed by one fiber
coordinate per transversal coframe monomial (a strictly increasing
(k-1)-subset of coframe covectors containing at least one vertical one).
On it live the tautological form (fiber coordinates paired against the
projection's pushforward) and the thickened form

    omega_tilde = tau^* omega + d(theta_0),

which is closed by construction, everywhere non-degenerate, restricts to the
original form on the zero section, and exhibits the zero section as a
(k-1)-coisotropic submanifold.  The verifiers below certify each claim:
closedness and the zero-section pullback symbolically, non-degeneracy and
coisotropy exactly at seeded rational sample points.

Fiber coordinates are named ``p_<label1>_<label2>_...`` from the coframe
labels (verticals first), ordered by ascending number of horizontal labels
and then lexicographically by coframe position, so fixtures are byte-stable.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .coeff import ScalarExpr
from .errors import PlecticError
from .exterior import Chart, CoordinateMap, Form, Index, sort_index
from .report import EVIDENCE, FAIL, PASS, VerificationReport
from .sampling import SampleConfig, pole_rejector, sample_points
from .splitting import (
    PreMultisymplecticManifold,
    SplitFrame,
    contraction_matrix,
    multisymplectic_orthogonal,
)


class DegreeTooLowError(PlecticError):
    """Thickening requested for k < 3.

    The degree-2 case is the classical (Gotay) coisotropic embedding, which
    needs a tubular-neighborhood restriction and is a different construction;
    this engine only implements the higher-degree one.
    """


def enumerate_fiber_coordinates(
    dim: int, num_horizontal: int, degree: int, labels: Sequence[str]
) -> List[Tuple[Index, str]]:
    """Transversal (degree-1)-multi-indices over the coframe, with names.

    ``labels`` lists the coframe labels, verticals first (so positions
    < dim - num_horizontal are vertical).  Returns all strictly increasing
    (degree-1)-subsets containing at least one vertical position, ordered by
    ascending count of horizontal positions then lexicographically, paired
    with their fiber-coordinate names.  The count always equals
    C(dim, degree-1) - C(num_horizontal, degree-1).
    """
    if degree < 2:
        raise PlecticError("fiber enumeration needs degree >= 2")
    if num_horizontal < 0 or num_horizontal > dim:
        raise PlecticError("horizontal count out of range")
    if len(labels) != dim:
        raise PlecticError("need one coframe label per dimension")
    r = dim - num_horizontal
    subsets = [
        idx
        for idx in itertools.combinations(range(dim), degree - 1)
        if any(j < r for j in idx)
    ]
    subsets.sort(key=lambda idx: (sum(1 for j in idx if j >= r), idx))
    return [(idx, "p_" + "_".join(labels[j] for j in idx)) for idx in subsets]


@dataclass(frozen=True)
class Thickening:
    """Chart of the transversal (k-1)-covector bundle with theta_0 and omega_tilde."""

    base: PreMultisymplecticManifold
    frame: SplitFrame
    big_chart: Chart
    fiber_index: Tuple[Index, ...]
    fiber_names: Tuple[str, ...]
    tau: CoordinateMap
    zero_section: CoordinateMap
    theta0: Form
    omega_tilde: Form

    @property
    def fiber_count(self) -> int:
        return len(self.fiber_names)

    @property
    def base_dim(self) -> int:
        return self.base.chart.dim

    def describe_frame(self) -> dict:
        return {
            "vertical_frame": [str(v) for v in self.frame.vertical],
            "horizontal_frame": [str(h) for h in self.frame.horizontal],
        }


def tautological_form(
    big_chart: Chart,
    tau: CoordinateMap,
    frame: SplitFrame,
    fiber_index: Sequence[Index],
    fiber_names: Sequence[str],
    degree: int,
) -> Form:
    """theta_0 = sum_I p_I * (coframe monomial I pulled back along tau)."""
    total = Form.zero(big_chart, degree)
    coframe = frame.coframe
    for idx, name in zip(fiber_index, fiber_names):
        mono = Form.scalar(big_chart, 1)
        for j in idx:
            mono = mono.wedge(tau.pullback(coframe[j]))
        total = total + mono * ScalarExpr.var(big_chart.coords, name)
    return total


def build_thickening(
    manifold: PreMultisymplecticManifold, frame: SplitFrame
) -> Thickening:
    """Assemble the thickened chart, theta_0, and omega_tilde."""
    k = manifold.degree
    if k < 3:
        raise DegreeTooLowError(
            f"degree {k} < 3: the k = 2 case is the classical (Gotay) symplectic "
            "thickening, which this construction deliberately does not emulate"
        )
    if frame.chart != manifold.chart:
        raise PlecticError("frame was built over a different chart")
    entries = enumerate_fiber_coordinates(
        manifold.chart.dim, frame.l, k, frame.labels
    )
    fiber_index = tuple(idx for idx, _ in entries)
    fiber_names = tuple(name for _, name in entries)
    for name in fiber_names:
        if name in manifold.chart.coords:
            raise PlecticError(f"fiber coordinate {name!r} collides with a base coordinate")
    big_chart = Chart(
        manifold.chart.name + "_thickened",
        manifold.chart.coords + fiber_names,
    )
    tau = CoordinateMap(
        big_chart,
        manifold.chart,
        [ScalarExpr.var(big_chart.coords, n) for n in manifold.chart.coords],
    )
    zero_section = CoordinateMap(
        manifold.chart,
        big_chart,
        [ScalarExpr.var(manifold.chart.coords, n) for n in manifold.chart.coords]
        + [ScalarExpr.zero(manifold.chart.coords) for _ in fiber_names],
    )
    theta0 = tautological_form(big_chart, tau, frame, fiber_index, fiber_names, k - 1)
    omega_tilde = tau.pullback(manifold.omega) + theta0.d()
    return Thickening(
        manifold,
        frame,
        big_chart,
        fiber_index,
        fiber_names,
        tau,
        zero_section,
        theta0,
        omega_tilde,
    )


def present_in_frame_basis(thickening: Thickening, form: Form) -> Dict[Index, ScalarExpr]:
    """Expand a big-chart form over {coframe covectors, fiber differentials}.

    Positions 0..d-1 refer to coframe covectors (verticals first), positions
    d.. to the fiber coordinate differentials, matching how the construction
    is usually displayed.
    """
    frame = thickening.frame
    d = frame.chart.dim
    matrix = frame.matrix()  # dq^i = sum_j E[i][j] eta^j (base block only)
    big = thickening.big_chart
    rows = []
    for i in range(big.dim):
        if i < d:
            rows.append(
                [
                    (j, matrix[i][j].subs_rename(big.coords))
                    for j in range(d)
                    if not matrix[i][j].is_zero()
                ]
            )
        else:
            rows.append([(i, ScalarExpr.one(big.coords))])
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


# -- verifiers ---------------------------------------------------------------


def closedness_report(form: Form, name: str = "closedness") -> VerificationReport:
    """Symbolic d(form) == 0 check; FAIL carries the residual terms."""
    start = time.perf_counter()
    residual = form.d()
    elapsed = (time.perf_counter() - start) * 1000
    if residual.is_zero():
        return VerificationReport(name, PASS, {"residual": "0"}, [], elapsed)
    witnesses = [
        {"index": [form.chart.coords[i] for i in idx], "coefficient": str(c)}
        for idx, c in residual.sorted_terms()
    ]
    return VerificationReport(name, FAIL, {"residual_terms": len(witnesses)}, witnesses, elapsed)


def verify_closed(thickening: Thickening) -> VerificationReport:
    return closedness_report(thickening.omega_tilde, "thickened-form-closed")


def nondegeneracy_report(
    form: Form,
    points: Sequence[Sequence[Fraction]],
    config: Optional[SampleConfig] = None,
    name: str = "non-degeneracy",
) -> VerificationReport:
    """Exact trivial-kernel check of the contraction map at each point."""
    start = time.perf_counter()
    witnesses = []
    for p in points:
        kernel = linalg.kernel_basis(
            contraction_matrix(form, p)[0], form.chart.dim
        )
        if kernel:
            witnesses.append(
                {
                    "point": [str(x) for x in p],
                    "kernel_dim": len(kernel),
                    "kernel_basis": [[str(x) for x in v] for v in kernel],
                }
            )
    details = {"points_checked": len(points)}
    if config is not None:
        details.update(config.describe())
    verdict = EVIDENCE if not witnesses else FAIL
    return VerificationReport(
        name, verdict, details, witnesses, (time.perf_counter() - start) * 1000
    )


def verify_nondegenerate(
    thickening: Thickening,
    config: SampleConfig = SampleConfig(),
    points: Optional[Sequence[Sequence[Fraction]]] = None,
) -> VerificationReport:
    """Sampled non-degeneracy of omega_tilde, including off the zero section.

    Validity away from the zero section is part of the claim, so the sample
    set is required to contain at least one point with a nonzero fiber
    coordinate (uniform integer sampling essentially guarantees this; the
    guard resamples if not).
    """
    if points is None:
        points = sample_points(
            thickening.big_chart.dim, config, pole_rejector(thickening.omega_tilde)
        )
        d = thickening.base_dim
        if thickening.fiber_count and not any(
            any(x != 0 for x in p[d:]) for p in points
        ):
            bumped = SampleConfig(config.count, config.seed + 1, config.low, config.high)
            points = sample_points(
                thickening.big_chart.dim, bumped, pole_rejector(thickening.omega_tilde)
            )
    report = nondegeneracy_report(
        thickening.omega_tilde, points, config, "thickened-form-non-degenerate"
    )
    d = thickening.base_dim
    report.details["points_with_nonzero_fiber_part"] = sum(
        1 for p in points if any(x != 0 for x in p[d:])
    )
    report.details["frame"] = thickening.describe_frame()
    return report


def verify_zero_section_pullback(thickening: Thickening) -> VerificationReport:
    """Symbolic check that the zero section pulls omega_tilde back to omega."""
    start = time.perf_counter()
    pulled = thickening.zero_section.pullback(thickening.omega_tilde)
    residual = pulled - thickening.base.omega
    elapsed = (time.perf_counter() - start) * 1000
    if residual.is_zero():
        return VerificationReport(
            "zero-section-pullback", PASS, {"residual": "0"}, [], elapsed
        )
    witnesses = [
        {"index": [thickening.base.chart.coords[i] for i in idx], "coefficient": str(c)}
        for idx, c in residual.sorted_terms()
    ]
    return VerificationReport(
        "zero-section-pullback", FAIL, {"residual_terms": len(witnesses)}, witnesses, elapsed
    )


def verify_coisotropic(
    thickening: Thickening,
    ell: Optional[int] = None,
    config: SampleConfig = SampleConfig(count=25),
    points: Optional[Sequence[Sequence[Fraction]]] = None,
) -> VerificationReport:
    """Sampled (k-1)-coisotropy of the zero section.

    At each zero-section sample the ell-orthogonal of the base tangent space
    inside the thickening is computed exactly and checked for containment in
    the base tangent space.  Samples are taken on the zero section because
    that is where the embedded copy of the base lives.
    """
    start = time.perf_counter()
    if ell is None:
        ell = thickening.base.degree - 1
    d = thickening.base_dim
    big_dim = thickening.big_chart.dim
    if points is None:
        base_points = sample_points(d, config, pole_rejector(thickening.base.omega))
        points = [tuple(p) + (Fraction(0),) * thickening.fiber_count for p in base_points]
    else:
        for p in points:
            if any(x != 0 for x in p[d:]):
                raise PlecticError("coisotropy samples must lie on the zero section")
    n_basis = [
        [Fraction(int(i == j)) for i in range(big_dim)] for j in range(d)
    ]
    witnesses = []
    orthogonal_dims = set()
    for p in points:
        ortho = multisymplectic_orthogonal(thickening.omega_tilde, p, n_basis, ell)
        orthogonal_dims.add(len(ortho))
        if not linalg.subspace_contained(ortho, n_basis):
            offending = [
                v for v in ortho if not linalg.subspace_contained([v], n_basis)
            ]
            witnesses.append(
                {
                    "point": [str(x) for x in p],
                    "escaping_vectors": [[str(x) for x in v] for v in offending],
                }
            )
    details = {
        "ell": ell,
        "points_checked": len(points),
        "orthogonal_dimensions_seen": sorted(orthogonal_dims),
        **config.describe(),
        "frame": thickening.describe_frame(),
    }
    verdict = EVIDENCE if not witnesses else FAIL
    return VerificationReport(
        "zero-section-coisotropic", verdict, details, witnesses,
        (time.perf_counter() - start) * 1000,
    )


def verify_all(
    thickening: Thickening,
    nondegenerate_config: SampleConfig = SampleConfig(),
    coisotropy_config: SampleConfig = SampleConfig(count=25),
) -> List[VerificationReport]:
    """Run the four claimed-property verifiers in a fixed order."""
    return [
        verify_closed(thickening),
        verify_nondegenerate(thickening, nondegenerate_config),
        verify_zero_section_pullback(thickening),
        verify_coisotropic(thickening, config=coisotropy_config),
    ]
