"""
Command-line driver: ``xigeo analyze|scan|curve|verify``.

Reports are JSON documents {"metadata": ..., "body": ...}. The body holds no timestamps or file names, so two
runs with identical inputs produce byte-identical bodies. Exit codes are listed in constants.EXIT_CODES.

Example usage:

>>> xigeo analyze --family product-torus --a 1 --b 2 --nu 64 --nv 64
>>> xigeo scan --a 0.3:3:50 --b 0.3:3:50 --output scan.csv
>>> xigeo curve --lambda -1.5 --rotation 1/1 --bracket 1:3 --product-with-circle 1
>>> xigeo verify
"""

import argparse
import datetime
import json
import logging
import math
import sys

import numpy as np

from xigeo import constants, curves, geometry, grid, numpy_helper, pandas_helper, surfaces, util, xi
from xigeo.exceptions import (ApplicabilityError, CertificationError, ClosureError, DegenerateMetricError,
                              GridError, HypothesisError, NotLagrangianError, ParameterError, RefinementRequired,
                              SurfaceFileError)
from xigeo.version import __version__

log = logging.getLogger(__name__)

USAGE_ERRORS = (ParameterError, GridError, SurfaceFileError, ApplicabilityError, HypothesisError)
NUMERIC_ERRORS = (DegenerateMetricError, ClosureError, RefinementRequired, NotLagrangianError, CertificationError)


def _clean(value):
    """
    Converts numpy scalars, tuples and non-finite floats into plain JSON values
    """
    if isinstance(value, dict):
        return {str(key): _clean(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def _extrema(values):
    return {"min": float(np.min(values)), "max": float(np.max(values))}


def _grid_echo(spec):
    return {"nu": spec.nu, "nv": spec.nv, "period_u": spec.period_u, "period_v": spec.period_v}


def analysis_body(analysis):
    """
    The comparable report body of an xi.Analysis. Sections that were skipped are null and their reason is
    listed under "skipped"; every identity id is present with a residual or a reason.

    Args:
        :analysis: xi.Analysis

    Returns:
        dict with a stable key order
    """
    b = analysis.bundle
    invariants = {
        "h2": _extrema(b.h2),
        "H2": _extrema(b.H2),
        "K": _extrema(b.K),
        "x2": _extrema(b.position_squared),
        "H_xi": None if analysis.pinching is None else _extrema(analysis.pinching.H_xi),
    }
    xi_section = None
    if analysis.estimate is not None:
        e = analysis.estimate
        fit = analysis.fit
        xi_section = {
            "is_xi": e.is_xi,
            "parallel_residual": e.parallel_residual,
            "projection_residual": e.projection_residual,
            "normality_residual": e.normality_residual,
            "coefficients": e.coefficients,
            "coefficient_spread": e.coefficient_spread,
            "fitted": None if fit is None else {"a": fit.a, "b": fit.b, "distance": fit.distance,
                                                "matched": fit.matched},
        }
    pinching = None
    if analysis.pinching is not None:
        p = analysis.pinching
        pinching = {
            "P_min": p.P_min,
            "P_max": p.P_max,
            "H_xi_const_residual": p.H_xi_const_residual,
            "advisory": p.advisory,
            "conditions": {c.name: {"margin": c.margin, "holds": c.holds, "zero_margin": c.zero_margin}
                           for c in p.conditions},
        }
    maslov = None
    if analysis.maslov is not None:
        md = analysis.maslov
        maslov = {
            "periods": md.periods,
            "rounded_periods": md.rounded_periods,
            "integrality_residual": md.integrality_residual,
            "consistency_residual": md.consistency_residual,
            "nontrivial": md.nontrivial,
        }
    global_section = None
    if analysis.globals is not None:
        gc = analysis.globals
        global_section = {
            "area": gc.area,
            "gauss_bonnet_integral": gc.gauss_bonnet_integral,
            "genus": gc.genus,
            "genus_defect": gc.genus_defect,
            "balance_residual": gc.balance_residual,
            "maslov_nontrivial": gc.maslov_nontrivial,
        }
    identities = {identity: {"residual": result.residual, "passed": result.passed, "reason": result.reason}
                  for identity, result in analysis.identities.items()}
    body = {
        "input": {"grid": _grid_echo(b.spec), "tolerances": analysis.tolerances.as_dict()},
        "lagrangian_residual": b.lagrangian_residual,
        "lagrangian": analysis.lagrangian,
        "invariants": invariants,
        "xi": xi_section,
        "pinching": pinching,
        "identities": identities,
        "maslov": maslov,
        "global": global_section,
        "drift": analysis.drift,
        "certification_residual": analysis.certification_residual,
        "skipped": dict(sorted(analysis.skipped.items())),
    }
    return _clean(body)


def render_report(body, argv, provenance=None):
    """
    Serializes a report document; only the metadata block varies between identical runs
    """
    document = {
        constants.REPORT.METADATA: _clean({
            "version": __version__,
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "argv": list(argv),
            "provenance": provenance or {},
        }),
        constants.REPORT.BODY: body,
    }
    return json.dumps(document, indent=constants.REPORT.JSON_INDENT, allow_nan=False) + "\n"


def _write_text(text, filename):
    if filename in (None, "-"):
        sys.stdout.write(text)
        return
    with open(filename, "w", encoding="utf8", newline="\n") as f:
        f.write(text)
    log.info("Wrote {}".format(filename))


def _tolerances(args):
    return util.get_tolerances(args.tol_lagrangian, args.tol_xi, args.tol_identity)


def build_family(args):
    """
    Builds the surface selected by --family and its parameters

    Returns:
        an ImmersionGrid
    """
    if args.family == constants.FAMILIES.PRODUCT_TORUS:
        return surfaces.make_product_torus(args.a, args.b, grid.GridSpec(args.nu, args.nv))
    if args.family == constants.FAMILIES.PRODUCT_ELLIPSE:
        c1 = curves.ellipse(args.a1, args.b1, args.nu)
        c2 = curves.ellipse(args.a2, args.b2, args.nv)
        provenance = {"family": constants.FAMILIES.PRODUCT_ELLIPSE, "a1": args.a1, "b1": args.b1,
                      "a2": args.a2, "b2": args.b2}
        return surfaces.make_product_curves(c1, c2, provenance)
    if args.family == constants.FAMILIES.EQUIVARIANT_ELLIPSE:
        c = curves.ellipse(args.a1, args.b1, args.nu)
        provenance = {"family": constants.FAMILIES.EQUIVARIANT_ELLIPSE, "a1": args.a1, "b1": args.b1}
        return surfaces.make_equivariant(c, grid.GridSpec(args.nu, args.nv, c.length, 2 * np.pi), provenance)
    raise ParameterError("Unknown family: {}, expected one of {}".format(args.family, constants.FAMILIES.CLI_FAMILIES))


def _load_surface(args):
    if (args.family is None) == (args.input is None):
        raise ParameterError("Exactly one of --family or --input is required")
    if args.input is not None:
        return numpy_helper.load(args.input)
    return build_family(args)


def _plot_fields(analysis):
    b = analysis.bundle
    fields = {"h2": b.h2, "H2": b.H2, "K": b.K}
    if analysis.pinching is not None:
        fields["P"] = analysis.pinching.P
    return fields


def cmd_analyze(args, argv):
    """
    Full pipeline on one surface. Exits 0 whatever the classification.
    """
    m = _load_surface(args)
    tolerances = _tolerances(args)
    analysis = xi.analyze(m, tolerances)
    if args.require_lagrangian and not analysis.lagrangian:
        raise NotLagrangianError("Lagrangian analysis was required but the residual is {} > {}".format(
            analysis.bundle.lagrangian_residual, tolerances.lagrangian))
    if args.emit_plot_data:
        pandas_helper.to_csv(pandas_helper.plot_frame(m.spec, _plot_fields(analysis)), args.emit_plot_data)
    if args.save_surface:
        numpy_helper.save(args.save_surface, m)
    _write_text(render_report(analysis_body(analysis), argv, m.provenance), args.output)
    return constants.EXIT_CODES.SUCCESS


def parse_range(text, name):
    """
    Parses start:stop:count into count evenly spaced values, stop included

    Raises:
        :ParameterError: for a malformed or empty range
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise ParameterError("Range --{} must be start:stop:count, got: {}".format(name, text))
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ParameterError("Range --{} must be start:stop:count, got: {}".format(name, text))
    if count < 1:
        raise ParameterError("Range --{} is empty: {}".format(name, text))
    if count == 1:
        return np.array([start])
    return np.linspace(start, stop, count)


def scan_row(a, b, spec, tolerances=None):
    """
    One scan cell: invariants, P_max and the side conditions of the product torus (a, b).
    The Lagrangian check and the xi classification use tolerances.
    """
    m = surfaces.make_product_torus(a, b, spec)
    bundle = geometry.compute_bundle(m, derivatives=False)
    estimate = xi.xi_estimate(m, bundle, tolerances)
    report = xi.pinching_report(m, bundle, estimate)
    row = {"a": float(a), "b": float(b), "h2": float(np.mean(report.h2)), "H2": float(np.mean(report.H2)),
           "Hxi": float(np.mean(report.H_xi)), "P_max": report.P_max}
    for condition in report.conditions:
        row[condition.name] = condition.holds
    row["region"] = bool(a * a + b * b >= 2 * a * a * b * b)
    return row


def cmd_scan(args, argv):
    """
    Scans the product-torus family over an (a, b) range and writes the scan CSV, rows in row-major order
    """
    if args.family != constants.FAMILIES.PRODUCT_TORUS:
        raise ParameterError("scan supports only the {} family, got: {}".format(
            constants.FAMILIES.PRODUCT_TORUS, args.family))
    a_values = parse_range(args.a, "a")
    b_values = parse_range(args.b, "b")
    spec = grid.GridSpec(args.nu, args.nv)
    tolerances = _tolerances(args)
    rows = [scan_row(a, b, spec, tolerances) for a in a_values for b in b_values]
    log.info("Scanned {} product tori".format(len(rows)))
    text = pandas_helper.to_csv(pandas_helper.scan_frame(rows))
    _write_text(text, args.output)
    return constants.EXIT_CODES.SUCCESS


def _parse_bracket(text):
    parts = text.split(":")
    if len(parts) != 2:
        raise ParameterError("Bracket must be low:high, got: {}".format(text))
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise ParameterError("Bracket must be low:high, got: {}".format(text))


def curve_body(shot, product=None, skipped=None):
    body = {
        "lambda": shot.lam,
        "rotation": "{}/{}".format(shot.rotation.numerator, shot.rotation.denominator),
        "status": shot.status,
        "r0": shot.r0,
        "length": None if shot.curve is None else shot.curve.length,
        "closure_residual": shot.closure_residual,
        "swept_angle": shot.swept_angle,
        "lambda_residual": None,
        "product": product,
        "skipped": skipped or {},
    }
    if shot.found and shot.curve.closed:
        body["lambda_residual"] = curves.lambda_residual(shot.curve, shot.lam)[0]
    return _clean(body)


def cmd_curve(args, argv):
    """
    Shoots a closed lambda-curve; not-found is a reported outcome with exit code 0.
    With --product-with-circle R the product with the lambda-circle of radius R is built, analyzed and certified.
    """
    bracket = _parse_bracket(args.bracket)
    shot = curves.shoot_closed(args.lam, args.rotation, bracket, n=args.samples, ds=args.ds)
    product = None
    skipped = {}
    provenance = {"lambda": args.lam, "rotation": args.rotation, "bracket": list(bracket)}
    if shot.found and args.curve_output:
        pandas_helper.to_csv(pandas_helper.curve_frame(shot.curve), args.curve_output)
    if args.product_with_circle is not None:
        if not shot.found:
            skipped["product"] = "no closed curve found"
        elif not shot.curve.closed:
            raise ClosureError("Shot curve does not close, gap: {}".format(shot.closure_residual),
                               gap=shot.closure_residual)
        else:
            radius = args.product_with_circle
            certified = curves.product_xi(shot.curve, args.lam, curves.circle(radius, args.nv),
                                          curves.circle_lambda(radius))
            analysis = xi.analyze(certified.surface, _tolerances(args), certified)
            product = analysis_body(analysis)
            if args.surface_output:
                numpy_helper.save(args.surface_output, certified.surface)
    _write_text(render_report(curve_body(shot, product, skipped), argv, provenance), args.output)
    return constants.EXIT_CODES.SUCCESS


def verification_suite(n):
    """
    Built-in verification surfaces: certified circle products and ellipse products

    Returns:
        list of (name, surface, CertifiedSurface or None)
    """
    suite = []
    for r1, r2 in ((1.0, 1.0), (1.0, 2.0), (0.7, 0.7)):
        certified = curves.product_xi(curves.circle(r1, n), curves.circle_lambda(r1),
                                      curves.circle(r2, n), curves.circle_lambda(r2))
        suite.append(("circle-product-{}-{}".format(r1, r2), certified.surface, certified))
    for a1, b1, a2, b2 in ((1.0, 1.2, 1.0, 1.0), (0.9, 1.1, 1.0, 1.2)):
        m = surfaces.make_product_curves(curves.ellipse(a1, b1, n), curves.ellipse(a2, b2, n),
                                         {"family": constants.FAMILIES.PRODUCT_ELLIPSE})
        suite.append(("ellipse-product-{}-{}-{}-{}".format(a1, b1, a2, b2), m, None))
    return suite


def _failures(analysis, tolerances):
    failures = []
    if not analysis.lagrangian:
        failures.append("not Lagrangian")
    for identity, result in analysis.identities.items():
        if result.residual is not None and result.residual > tolerances.identity:
            failures.append(identity)
    return failures


def cmd_verify(args, argv):
    """
    Runs the identity battery on the built-in suite, or on one surface given by --family or --input.
    Exits 4 if any computed residual exceeds --tol-identity or a certification fails.
    """
    tolerances = _tolerances(args)
    if args.family is not None or args.input is not None:
        suite = [("surface", _load_surface(args), None)]
    else:
        suite = verification_suite(args.nu)
    entries = []
    passed = True
    for name, m, certified in suite:
        try:
            analysis = xi.analyze(m, tolerances, certified)
        except CertificationError as err:
            log.error("Certification of {} failed: {}".format(name, err))
            entries.append({"name": name, "passed": False, "failures": ["certification"], "identities": None})
            passed = False
            continue
        failures = _failures(analysis, tolerances)
        if certified is not None and not analysis.estimate.is_xi:
            failures.append("xi classification")
        passed = passed and not failures
        entries.append({
            "name": name,
            "passed": not failures,
            "failures": failures,
            "identities": {identity: result.residual for identity, result in analysis.identities.items()},
        })
        log.info("Verified {}: {}".format(name, "passed" if not failures else failures))
    body = _clean({"tolerances": tolerances.as_dict(), "surfaces": entries, "passed": passed})
    _write_text(render_report(body, argv), args.output)
    return constants.EXIT_CODES.SUCCESS if passed else constants.EXIT_CODES.VERIFICATION


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-lagrangian", type=float, default=None, help="Lagrangian residual tolerance")
    common.add_argument("--tol-xi", type=float, default=None, help="xi classification tolerance")
    common.add_argument("--tol-identity", type=float, default=None, help="identity residual tolerance")
    common.add_argument("--log-level", default=None, help="log level, defaults to XIGEO_LOG_LEVEL or WARNING")
    common.add_argument("--output", default=None, help="output file, stdout when omitted")
    return common


def _surface_arguments(parser, default_samples):
    parser.add_argument("--family", choices=constants.FAMILIES.CLI_FAMILIES, default=None)
    parser.add_argument("--input", default=None, help="SurfaceFile to analyze")
    parser.add_argument("--nu", type=int, default=default_samples)
    parser.add_argument("--nv", type=int, default=default_samples)
    parser.add_argument("--a", type=float, default=1.0, help="product torus radius a")
    parser.add_argument("--b", type=float, default=1.0, help="product torus radius b")
    for name in ("a1", "b1", "a2", "b2"):
        parser.add_argument("--{}".format(name), type=float, default=1.0, help="ellipse semi-axis")


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="xigeo", description="Numerical lab for Lagrangian xi-surfaces in C^2")
    parser.add_argument("--version", action="version", version="%(prog)s {}".format(__version__))
    subparsers = parser.add_subparsers(dest="command")
    subparsers.required = True

    analyze = subparsers.add_parser("analyze", parents=[common], help="analyze one surface")
    _surface_arguments(analyze, constants.GRID.DEFAULT_SAMPLES)
    analyze.add_argument("--emit-plot-data", default=None, help="write (u, v, field, value) CSV to this file")
    analyze.add_argument("--save-surface", default=None, help="write the analyzed surface as a SurfaceFile")
    analyze.add_argument("--require-lagrangian", action="store_true",
                         help="fail with a numeric error if the surface is not Lagrangian")
    analyze.set_defaults(handler=cmd_analyze)

    scan = subparsers.add_parser("scan", parents=[common], help="scan the product-torus family")
    scan.add_argument("--family", default=constants.FAMILIES.PRODUCT_TORUS)
    scan.add_argument("--a", required=True, help="range start:stop:count")
    scan.add_argument("--b", required=True, help="range start:stop:count")
    scan.add_argument("--nu", type=int, default=constants.GRID.SCAN_SAMPLES)
    scan.add_argument("--nv", type=int, default=constants.GRID.SCAN_SAMPLES)
    scan.set_defaults(handler=cmd_scan)

    curve = subparsers.add_parser("curve", parents=[common], help="shoot a closed lambda-curve")
    curve.add_argument("--lambda", dest="lam", type=float, required=True)
    curve.add_argument("--rotation", default="1/1", help="rotation p/q")
    curve.add_argument("--bracket", required=True, help="r0 bracket low:high")
    curve.add_argument("--samples", type=int, default=constants.GRID.DEFAULT_SAMPLES)
    curve.add_argument("--nv", type=int, default=constants.GRID.DEFAULT_SAMPLES, help="samples of the circle factor")
    curve.add_argument("--ds", type=float, default=constants.CURVES.DEFAULT_DS)
    curve.add_argument("--product-with-circle", type=float, default=None, metavar="R")
    curve.add_argument("--curve-output", default=None, help="write curve samples as CSV")
    curve.add_argument("--surface-output", default=None, help="write the product surface as a SurfaceFile")
    curve.set_defaults(handler=cmd_curve)

    verify = subparsers.add_parser("verify", parents=[common], help="run the identity battery")
    _surface_arguments(verify, constants.GRID.DEFAULT_SAMPLES)
    verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv=None):
    """
    Entry point of the xigeo command

    Args:
        :argv: argument list without the program name, sys.argv[1:] when omitted

    Returns:
        the exit code
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return constants.EXIT_CODES.USAGE if err.code else constants.EXIT_CODES.SUCCESS
    try:
        util.setup_logging(args.log_level)
        return args.handler(args, argv)
    except USAGE_ERRORS as err:
        log.error(str(err))
        sys.stderr.write("xigeo: error: {}\n".format(err))
        return constants.EXIT_CODES.USAGE
    except NUMERIC_ERRORS as err:
        log.error(str(err))
        sys.stderr.write("xigeo: numeric error: {}\n".format(err))
        return constants.EXIT_CODES.NUMERIC


if __name__ == "__main__":
    sys.exit(main())
