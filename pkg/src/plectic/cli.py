"""Command-line surface: check, thicken, orthogonal, eom.

Exit codes: 0 when every verdict is PASS or EVIDENCE, 1 on a verification
failure, 2 on input errors (unreadable spec, validation failure, bad flags).

With --json the command emits one JSON object per line (a header, then one
object per report) with sorted keys and no timing data, so output for a fixed
seed is byte-for-byte reproducible.  The environment variable PLECTIC_SEED
overrides the default sampling seed; an explicit --seed wins over both it and
the spec file's samples block.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from .coeff import parse_expr
from .errors import PlecticError
from .exterior import Form
from .fieldtheory import Section, eom_residual, eom_symbolic_system
from .manifoldspec import (
    ManifoldSpec,
    SpecError,
    load_spec,
    save_spec_dict,
    thickened_spec_dict,
)
from .report import VerificationReport
from .sampling import SampleConfig, pole_rejector, sample_points
from .splitting import (
    NotClosedError,
    build_split_frame,
    multisymplectic_orthogonal,
    verify_constant_rank,
)
from .thicken import (
    Thickening,
    build_thickening,
    closedness_report,
    present_in_frame_basis,
    verify_all,
)
from . import linalg

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


class _Output:
    def __init__(self, as_json: bool):
        self.as_json = as_json

    def header(self, **fields):
        if self.as_json:
            self._emit({"header": fields})
        else:
            for key, value in fields.items():
                print(f"{key}: {value}")

    def report(self, report: VerificationReport):
        if self.as_json:
            self._emit(report.to_json_dict())
        else:
            for line in report.human_lines():
                print(line)

    def info(self, text: str = "", payload=None, key: str = "info"):
        if self.as_json:
            self._emit({key: payload if payload is not None else text})
        else:
            print(text)

    def _emit(self, obj):
        print(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def _sample_config(spec: ManifoldSpec, args) -> SampleConfig:
    seed = spec.samples.seed
    env = os.environ.get("PLECTIC_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise SpecError("PLECTIC_SEED", f"not an integer: {env!r}")
    if args.seed is not None:
        seed = args.seed
    count = args.samples if args.samples is not None else spec.samples.count
    return SampleConfig(count, seed, spec.samples.low, spec.samples.high)


def _render_form(form: Form, spec: ManifoldSpec, basis: str, thickening: Optional[Thickening] = None) -> str:
    if basis == "frame" and thickening is not None:
        coeffs = present_in_frame_basis(thickening, form)
        frame = thickening.frame
        d = frame.chart.dim
        labels = []
        for j in range(thickening.big_chart.dim):
            if j < frame.r:
                labels.append(f"theta_{frame.labels[j]}")
            elif j < d:
                labels.append(f"eta_{frame.labels[j]}")
            else:
                labels.append(f"d{thickening.big_chart.coords[j]}")
        parts = []
        for idx in sorted(coeffs):
            mono = "^".join(labels[j] for j in idx)
            parts.append(f"({coeffs[idx]})*{mono}")
        return " + ".join(parts) if parts else "0"
    return str(form)


def cmd_check(args) -> int:
    spec = load_spec(args.spec)
    out = _Output(args.json)
    config = _sample_config(spec, args)
    out.header(
        command="check",
        spec=spec.name,
        dimension=spec.chart.dim,
        degree=spec.degree,
        **config.describe(),
    )
    reports = [closedness_report(spec.form)]
    try:
        manifold = spec.manifold()
    except NotClosedError:
        manifold = None
    if manifold is not None:
        points = sample_points(spec.chart.dim, config, pole_rejector(spec.form))
        rank_report = verify_constant_rank(manifold, points, config)
        from .splitting import kernel_at

        per_sample = []
        for p in points:
            try:
                dim = len(kernel_at(manifold, p))
            except PlecticError:
                dim = None
            per_sample.append({"point": [str(x) for x in p], "kernel_dim": dim})
        if args.json:
            rank_report.details["per_sample"] = per_sample
        else:
            for entry in per_sample:
                print(f"  sample {','.join(entry['point'])}: kernel dim {entry['kernel_dim']}")
        reports.append(rank_report)
    for report in reports:
        out.report(report)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def cmd_thicken(args) -> int:
    spec = load_spec(args.spec)
    if not spec.has_frame():
        raise SpecError("frame", "thicken requires a frame block (kernel + complement)")
    out = _Output(args.json)
    config = _sample_config(spec, args)
    try:
        manifold = spec.manifold()
    except NotClosedError:
        out.report(closedness_report(spec.form))
        return EXIT_FAIL
    frame = build_split_frame(manifold, spec.vertical, spec.horizontal)
    thickening = build_thickening(manifold, frame)
    out.header(
        command="thicken",
        spec=spec.name,
        base_dimension=spec.chart.dim,
        thickened_dimension=thickening.big_chart.dim,
        fiber_coordinates=list(thickening.fiber_names),
        monomial_basis=args.monomial_basis,
        **config.describe(),
    )
    basis = args.monomial_basis
    out.info(
        f"theta_0 = {_render_form(thickening.theta0, spec, basis, thickening)}",
        payload={"theta_0": _render_form(thickening.theta0, spec, basis, thickening)},
        key="form",
    )
    out.info(
        f"omega_tilde = {_render_form(thickening.omega_tilde, spec, basis, thickening)}",
        payload={"omega_tilde": _render_form(thickening.omega_tilde, spec, basis, thickening)},
        key="form",
    )
    coiso = SampleConfig(
        max(1, config.count // 2), config.seed, config.low, config.high
    )
    reports = verify_all(thickening, config, coiso)
    for report in reports:
        out.report(report)
    if args.emit:
        save_spec_dict(thickened_spec_dict(thickening, spec), args.emit)
        out.info(f"thickened spec written to {args.emit}", payload=args.emit, key="emitted")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def _parse_constraints(text: str, spec: ManifoldSpec) -> Dict[int, Fraction]:
    out: Dict[int, Fraction] = {}
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if "=" not in piece:
            raise SpecError("--submanifold", f"expected name=value, got {piece!r}")
        name, _, value = piece.partition("=")
        name = name.strip()
        if name not in spec.chart.coords:
            raise SpecError("--submanifold", f"unknown coordinate {name!r}")
        try:
            out[spec.chart.axis(name)] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecError("--submanifold", f"bad rational constant {value!r}: {exc}")
    if not out:
        raise SpecError("--submanifold", "no constraints given")
    return out


def cmd_orthogonal(args) -> int:
    spec = load_spec(args.spec)
    out = _Output(args.json)
    config = _sample_config(spec, args)
    constraints = _parse_constraints(args.submanifold, spec)
    ell = args.ell if args.ell is not None else spec.degree - 1
    if ell < 1:
        raise SpecError("--ell", "must be >= 1")
    d = spec.chart.dim
    free_axes = [i for i in range(d) if i not in constraints]
    out.header(
        command="orthogonal",
        spec=spec.name,
        submanifold={spec.chart.coords[i]: str(v) for i, v in sorted(constraints.items())},
        ell=ell,
        tangent_dimension=len(free_axes),
        **config.describe(),
    )
    reject = pole_rejector(spec.form)

    def on_submanifold(point):
        full = list(point)
        for axis, value in constraints.items():
            full[axis] = value
        return tuple(full)

    raw_points = sample_points(d, config, lambda p: reject(on_submanifold(p)))
    points = [on_submanifold(p) for p in raw_points]
    n_basis = [[Fraction(int(i == j)) for i in range(d)] for j in free_axes]
    witnesses = []
    for p in points:
        ortho = multisymplectic_orthogonal(spec.form, p, n_basis, ell)
        contained = linalg.subspace_contained(ortho, n_basis) if ortho else True
        entry = {
            "point": [str(x) for x in p],
            "orthogonal_basis": [[str(x) for x in v] for v in ortho],
            "contained_in_tangent": contained,
        }
        if not args.json:
            print(
                f"  at ({','.join(entry['point'])}): dim T-perp,{ell} = {len(ortho)}; "
                f"contained: {contained}"
            )
        else:
            out.info(payload=entry, key="sample")
        if not contained:
            witnesses.append(entry)
    verdict_report = VerificationReport(
        f"{ell}-coisotropic-containment",
        "EVIDENCE" if not witnesses else "FAIL",
        {"points_checked": len(points), "ell": ell, **config.describe()},
        witnesses,
    )
    out.report(verdict_report)
    return EXIT_OK if verdict_report.ok else EXIT_FAIL


def cmd_eom(args) -> int:
    spec = load_spec(args.spec)
    out = _Output(args.json)
    fibered = spec.fibered_chart()
    if bool(args.symbolic) == bool(args.section):
        raise SpecError("eom", "exactly one of --symbolic or --section is required")
    out.header(
        command="eom",
        spec=spec.name,
        base=list(fibered.base),
        fields=list(fibered.fiber),
        auxiliary=list(fibered.auxiliary),
    )
    if args.symbolic:
        system = eom_symbolic_system(spec.form, fibered)
        physical = [system.display(e) for e in system.physical_system()]
        auxiliary = [
            {"direction": d, "equation": system.display(e)}
            for d, e in system.auxiliary_system()
        ]
        derived = [
            {"direction": d, "equation": system.display(e)}
            for d, e in system.derived_combinations()
        ]
        obstructions = [
            {"direction": d, "residual": str(e)} for d, e in system.obstructions()
        ]
        if args.json:
            out.info(
                payload={
                    "physical": physical,
                    "auxiliary": auxiliary,
                    "derived": derived,
                    "obstructions": obstructions,
                },
                key="eom_symbolic",
            )
        else:
            print(f"physical system ({len(physical)} equations):")
            for eq in physical:
                print(f"  {eq}")
            if auxiliary:
                print("auxiliary equations (regulator fields; neglected):")
                for item in auxiliary:
                    print(f"  [from direction {item['direction']}] {item['equation']}")
            if derived:
                print("derived combinations (jet-degree >= 2):")
                for item in derived:
                    print(f"  [from direction {item['direction']}] {item['equation']}")
            if obstructions:
                print("obstruction directions (residual has no jet variables; no solution):")
                for item in obstructions:
                    print(f"  [from direction {item['direction']}] residual {item['residual']}")
        return EXIT_OK
    # concrete section
    try:
        with open(args.section, "r", encoding="utf-8") as fh:
            section_data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(args.section, f"cannot read section file: {exc}")
    if not isinstance(section_data, dict):
        raise SpecError(args.section, "section file must map fiber coordinate -> expression")
    components = {}
    for name in fibered.fiber:
        if name not in section_data:
            raise SpecError(args.section, f"missing component for fiber coordinate {name!r}")
        try:
            components[name] = parse_expr(section_data[name], fibered.base)
        except PlecticError as exc:
            raise SpecError(f"{args.section}:{name}", str(exc))
    unknown = set(section_data) - set(fibered.fiber)
    if unknown:
        raise SpecError(args.section, f"unknown fiber coordinates: {sorted(unknown)}")
    section = Section(fibered, components)
    residual = eom_residual(spec.form, fibered, section)
    entries = [
        {
            "direction": name,
            "kind": "auxiliary" if name in fibered.auxiliary else "physical",
            "residual": str(form),
            "zero": form.is_zero(),
        }
        for name, form in residual.residuals.items()
    ]
    if args.json:
        out.info(payload=entries, key="eom_residuals")
        out.info(payload=residual.is_zero(), key="all_zero")
    else:
        for entry in entries:
            status = "0" if entry["zero"] else entry["residual"]
            print(f"  direction {entry['direction']} [{entry['kind']}]: {status}")
        print(f"overall: {'all residuals zero' if residual.is_zero() else 'nonzero residuals'}")
    return EXIT_OK if residual.is_zero() else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plectic",
        description="Exact verification engine for closed-form kernels, "
        "coisotropic thickenings, and field equations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("spec", help="path to a manifold spec (JSON)")
        p.add_argument("--json", action="store_true", help="machine-readable JSONL output")
        p.add_argument("--samples", type=int, default=None, help="number of sample points")
        p.add_argument("--seed", type=int, default=None, help="sampling seed")

    p_check = sub.add_parser("check", help="closedness + kernel rank at samples")
    common(p_check)
    p_check.set_defaults(func=cmd_check)

    p_thicken = sub.add_parser("thicken", help="build the thickening and verify its properties")
    common(p_thicken)
    p_thicken.add_argument("--emit", default=None, help="write the thickened manifold spec here")
    p_thicken.add_argument(
        "--monomial-basis",
        choices=("dx", "frame"),
        default="frame",
        help="presentation basis for reported forms",
    )
    p_thicken.set_defaults(func=cmd_thicken)

    p_orth = sub.add_parser("orthogonal", help="ell-orthogonal of a coordinate submanifold")
    common(p_orth)
    p_orth.add_argument(
        "--submanifold",
        required=True,
        help="comma-separated coordinate constraints, e.g. 'x5=0,x6=0'",
    )
    p_orth.add_argument("--ell", type=int, default=None, help="orthogonality order (default k-1)")
    p_orth.set_defaults(func=cmd_orthogonal)

    p_eom = sub.add_parser("eom", help="equation-of-motion residuals for sections")
    common(p_eom)
    p_eom.add_argument("--symbolic", action="store_true", help="print the formal PDE system")
    p_eom.add_argument("--section", default=None, help="JSON file mapping fiber coords to expressions")
    p_eom.set_defaults(func=cmd_eom)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotClosedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except PlecticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
