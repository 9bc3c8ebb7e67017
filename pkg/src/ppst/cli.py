"""Command line interface.

Subcommands operate on one structure, given either as a spec file path or
as ``--model NAME`` from the bundled catalog, and emit a :class:`Report`
(``--format json`` or the default deterministic text).

``check``       run every structure axiom as an exact residual
``classify``    name the structure class, with witnesses for failed axioms
``curvature``   Levi-Civita data: verification residuals plus the
                connection, curvature, Ricci and star-Ricci tables
``identities``  the curvature identity suite (quasi-para-Sasakian input)
``deform``      verify the deformation laws for given parameters and
                optionally write the deformed structure spec (-o FILE)
``theorem``     the constant-curvature classification theorem
``models``      list the catalog, or export one entry (--export NAME -o FILE)

Exit codes: 0 every check passed, 1 a mathematical check failed (the report
carries witnesses), 2 the input could not be processed (parse, schema, or
usage error).  A mathematical failure never yields 2 and an input error
never yields 1.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from itertools import product
from typing import Sequence

from .curvature import (
    curvature_antisymmetry_residual,
    first_bianchi_residual,
    metric_compatibility_residual,
    torsion_residual,
)
from .deformation import (
    DeformationParams,
    apply_deformation,
    verify_deformation_relations,
)
from .identities import run_suite
from .models import ChartModel, GeometryError, TensorField, format_combination
from .report import CheckResult, Report, digest_text, error_report
from .spaceforms import check_constant_curvature_theorem, model_catalog
from .specfile import SpecFileError, export_spec, export_text, import_text
from .structures import StructureError, validate_structure

_ZERO_DIGEST = "sha256:" + "0" * 64


class _InputError(Exception):
    """An input that cannot be processed; maps to exit code 2."""

    def __init__(self, message: str, source: str = "none",
                 digest: str = _ZERO_DIGEST):
        super().__init__(message)
        self.source = source
        self.digest = digest


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ppst",
        description="exact checks for almost paracontact metric structures")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, spec_input: bool = True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=("json", "text"), default="text",
                       help="report format (default: text)")
        if spec_input:
            p.add_argument("spec", nargs="?", default=None,
                           help="structure spec file")
            p.add_argument("--model", default=None,
                           help="bundled catalog model name")
        return p

    p = add("check", "verify the structure axioms")
    p.add_argument("--point", default=None,
                   help="chart point for pointwise checks, e.g. x=1,y=2,z=1/2")
    add("classify", "name the structure class")
    add("curvature", "connection and curvature tables with verification")
    p = add("identities", "run the curvature identity suite")
    p.add_argument("--mode", choices=("auto", "symbolic", "sampled"),
                   default="auto", help="verification mode (default: auto)")
    p = add("deform", "verify the deformation laws for given parameters")
    p.add_argument("--alpha", required=True,
                   help="deformation parameter alpha (nonzero rational)")
    p.add_argument("--beta", required=True,
                   help="deformation parameter beta (positive rational)")
    p.add_argument("-o", "--output", default=None,
                   help="write the deformed structure spec to this file")
    add("theorem", "check the constant-curvature classification theorem")
    p = add("models", "list the bundled model catalog", spec_input=False)
    p.add_argument("--export", default=None, metavar="NAME",
                   help="export one catalog model as a structure spec")
    p.add_argument("-o", "--output", default=None,
                   help="target file for --export")
    return parser


def _catalog_structure(name: str):
    for entry in model_catalog():
        if entry.name == name:
            return entry.build()
    names = ", ".join(e.name for e in model_catalog())
    raise _InputError(f"unknown model {name!r}; available: {names}",
                      source=f"catalog:{name}")


def _load(args):
    """Resolve the input structure; returns (structure, source, digest)."""
    if args.spec is not None and args.model is not None:
        raise _InputError("give either a spec file or --model, not both")
    if args.model is not None:
        s = _catalog_structure(args.model)
        return s, f"catalog:{args.model}", digest_text(export_text(s))
    if args.spec is None:
        raise _InputError("give a structure spec file or --model NAME")
    source = f"file:{args.spec}"
    try:
        with open(args.spec, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise _InputError(f"cannot read {args.spec}: {exc}", source=source)
    digest = digest_text(text)
    try:
        return import_text(text), source, digest
    except SpecFileError as exc:
        raise _InputError(str(exc), source=source, digest=digest)


def _parse_point(text: str, model) -> dict[str, Fraction]:
    if not isinstance(model, ChartModel):
        raise _InputError("--point applies to chart-mode structures only")
    point: dict[str, Fraction] = {}
    for item in text.split(","):
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or name not in model.coordinates:
            raise _InputError(f"bad point component {item.strip()!r}; "
                              f"expected name=rational with names from "
                              f"{', '.join(model.coordinates)}")
        try:
            point[name] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise _InputError(f"bad rational value in point: {item.strip()!r}")
    missing = [c for c in model.coordinates if c not in point]
    if missing:
        raise _InputError(f"point misses coordinates: {', '.join(missing)}")
    for con in model.constraints:
        if not con.holds_at(point):
            raise _InputError(f"point violates domain constraint {con}")
    return point


# ---------------------------------------------------------------------------
# command bodies


def _axiom_checks(axiom_report) -> list[CheckResult]:
    out = []
    for c in axiom_report.checks:
        details = {"residual": c.residual} if c.residual else None
        out.append(CheckResult(c.name, c.passed, witness=c.witness,
                               details=details))
    return out


def _residual_check(name: str, residual: TensorField) -> CheckResult:
    bad = residual.nonzero_witness()
    if bad is None:
        return CheckResult(name, True)
    idx, value = bad
    return CheckResult(name, False,
                       witness=f"residual at {idx}: {value}")


def _cmd_check(args, s, source, digest) -> Report:
    if args.point is not None:
        rep = validate_structure(s, _parse_point(args.point, s.model))
    else:
        rep = s.axiom_report()
    data = {"sample_point": {k: str(v) for k, v in rep.sample_point.items()}}
    if rep.inertia is not None:
        data["metric_inertia"] = list(rep.inertia)
    if rep.eigen_dims is not None:
        data["phi_eigen_dims"] = list(rep.eigen_dims)
    return Report("check", source, digest, checks=_axiom_checks(rep),
                  data=data)


def _cmd_classify(args, s, source, digest) -> Report:
    try:
        cls = s.classification()
    except StructureError as exc:
        checks = (_axiom_checks(exc.report) if exc.report is not None
                  else [CheckResult("axioms", False, witness=str(exc))])
        return Report("classify", source, digest, checks=checks)
    data = {
        "classification": cls.label,
        "flags": dict(cls.flags),
        "witnesses": dict(cls.witnesses),
    }
    return Report("classify", source, digest,
                  checks=[CheckResult("axioms", True)], data=data)


def _cmd_curvature(args, s, source, digest) -> Report:
    conn = s.connection
    curv = s.curvature
    labels = s.model.basis_labels
    d = s.model.dim
    checks = [
        _residual_check("torsion_free", torsion_residual(conn)),
        _residual_check("metric_compatibility",
                        metric_compatibility_residual(conn, s.g)),
        _residual_check("curvature_antisymmetry",
                        curvature_antisymmetry_residual(curv)),
        _residual_check("first_bianchi", first_bianchi_residual(curv)),
    ]
    connection_table = {
        f"nabla_{labels[i]} {labels[j]}":
            format_combination(conn.nabla_basis(i, j), labels)
        for i, j in product(range(d), repeat=2)
    }
    curvature_table = {
        f"R({labels[i]},{labels[j]}){labels[k]}":
            format_combination(curv.apply(i, j, k), labels)
        for i in range(d) for j in range(i + 1, d) for k in range(d)
    }
    ricci_rows = curv.ricci.rows()
    star_rows = curv.star_ricci.rows()
    data = {
        "r": str(curv.scalar),
        "r_star": str(curv.star_scalar),
        "connection": connection_table,
        "curvature": curvature_table,
        "ricci": {f"S({labels[j]},{labels[k]})": str(ricci_rows[j][k])
                  for j in range(d) for k in range(j, d)},
        "star_ricci": {f"S*({labels[j]},{labels[k]})": str(star_rows[j][k])
                       for j, k in product(range(d), repeat=2)},
    }
    if s.axiom_report().passed:
        xv = s.xi.vec()
        s_xi_xi = s.model.zero
        for j, k in product(range(d), repeat=2):
            s_xi_xi = s_xi_xi + ricci_rows[j][k] * xv[j] * xv[k]
        a_rows = s.A.rows()
        phi_rows = s.phi.rows()
        tr_phi_a = s.model.zero
        tr_a_sq = s.model.zero
        for k, m in product(range(d), repeat=2):
            tr_phi_a = tr_phi_a + phi_rows[k][m] * a_rows[m][k]
            tr_a_sq = tr_a_sq + a_rows[k][m] * a_rows[m][k]
        data["S(xi,xi)"] = str(s_xi_xi)
        data["trace_phi_A"] = str(tr_phi_a)
        data["trace_A_squared"] = str(tr_a_sq)
    return Report("curvature", source, digest, checks=checks, data=data)


def _cmd_identities(args, s, source, digest) -> Report:
    try:
        rep = run_suite(s, mode=args.mode)
    except StructureError as exc:
        check = CheckResult("hypothesis_quasi_para_sasakian", False,
                            witness=str(exc))
        return Report("identities", source, digest, checks=[check])
    checks = [CheckResult(r.key, r.passed, witness=r.witness,
                          details=r.details or None)
              for r in rep.results.values()]
    data = {
        "mode": rep.mode,
        "sample_points": [{k: str(v) for k, v in p.items()}
                          for p in rep.sample_points],
    }
    return Report("identities", source, digest, checks=checks, data=data)


def _cmd_deform(args, s, source, digest) -> Report:
    try:
        params = DeformationParams(Fraction(args.alpha), Fraction(args.beta))
    except (ValueError, ZeroDivisionError) as exc:
        raise _InputError(f"bad deformation parameters: {exc}",
                          source=source, digest=digest)
    axioms = s.axiom_report()
    if not axioms.passed:
        return Report("deform", source, digest, checks=_axiom_checks(axioms))
    rep = verify_deformation_relations(s, params)
    checks = [CheckResult("axioms", True)]
    checks.extend(CheckResult(r.key, r.passed, witness=r.witness)
                  for r in rep.results.values())
    deformed = apply_deformation(s, params)
    data = {
        "alpha": str(params.alpha),
        "beta": str(params.beta),
        "homothetic": params.homothetic,
        "deformed_name": deformed.name,
    }
    try:
        data["deformed_classification"] = deformed.classification().label
    except StructureError as exc:
        data["deformed_classification"] = f"invalid: {exc}"
    if args.output is not None:
        try:
            export_spec(deformed, args.output)
        except OSError as exc:
            raise _InputError(f"cannot write {args.output}: {exc}",
                              source=source, digest=digest)
        data["output"] = args.output
    return Report("deform", source, digest, checks=checks, data=data)


def _cmd_theorem(args, s, source, digest) -> Report:
    try:
        rep = check_constant_curvature_theorem(s)
    except StructureError as exc:
        checks = (_axiom_checks(exc.report) if exc.report is not None
                  else [CheckResult("axioms", False, witness=str(exc))])
        return Report("theorem", source, digest, checks=checks)
    checks = [CheckResult(a.name, a.passed, witness=a.witness)
              for a in rep.assertions]
    data = {
        "theorem_status": rep.status,
        "applicable": rep.applicable,
        "quasi_para_sasakian": rep.quasi_para_sasakian,
    }
    if rep.K is not None:
        data["K"] = str(rep.K)
    if rep.reason is not None:
        data["reason"] = rep.reason
    return Report("theorem", source, digest, checks=checks, data=data)


def _cmd_models(args) -> Report:
    if args.export is not None:
        if args.output is None:
            raise _InputError("--export needs -o FILE",
                              source=f"catalog:{args.export}")
        s = _catalog_structure(args.export)
        text = export_text(s)
        try:
            with open(args.output, "w", encoding="utf-8") as handle:
                handle.write(text)
        except OSError as exc:
            raise _InputError(f"cannot write {args.output}: {exc}",
                              source=f"catalog:{args.export}")
        data = {"exported": args.export, "output": args.output}
        return Report("models", f"catalog:{args.export}", digest_text(text),
                      data=data)
    listing = {}
    texts = []
    for entry in model_catalog():
        listing[entry.name] = {
            "description": entry.description,
            "class": entry.expected_class,
            "known_inconsistent": entry.known_inconsistent,
        }
        texts.append(export_text(entry.build()))
    return Report("models", "catalog", digest_text("".join(texts)),
                  data={"models": listing})


# ---------------------------------------------------------------------------
# entry points

_COMMANDS = {
    "check": _cmd_check,
    "classify": _cmd_classify,
    "curvature": _cmd_curvature,
    "identities": _cmd_identities,
    "deform": _cmd_deform,
    "theorem": _cmd_theorem,
}


def _execute(args: argparse.Namespace) -> Report:
    command = args.command
    try:
        if command == "models":
            return _cmd_models(args)
        s, source, digest = _load(args)
    except _InputError as exc:
        return error_report(command, exc.source, str(exc), digest=exc.digest)
    try:
        return _COMMANDS[command](args, s, source, digest)
    except _InputError as exc:
        return error_report(command, source, str(exc), digest=digest)
    except (StructureError, GeometryError) as exc:
        check = CheckResult("computable", False, witness=str(exc))
        return Report(command, source, digest, checks=[check])


def run_command(argv: Sequence[str]) -> Report:
    """Parse ``argv`` (without the program name) and produce the report.

    Side effects (writing spec files for deform/models) still happen; the
    report itself is returned unprinted.
    """
    parser = _build_parser()
    return _execute(parser.parse_args(list(argv)))


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    report = _execute(args)
    sys.stdout.write(report.render(args.format))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
