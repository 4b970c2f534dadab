"""Command-line front end: ``kgt <subcommand> [flags]``.

Exit codes: 0 success or certified, 1 failed verification or not certified,
2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from importlib import resources

from . import __version__, bounds, bqf, lattice, modcurve, toric
from .arith import slack_bits
from .errors import InvalidInput, VerificationFailure

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2
DEFAULT_SEED = 20240601


def _fraction(text: str) -> Fraction:
    try:
        val = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc
    if val <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return val


def _positive_int(text: str) -> int:
    try:
        val = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if val < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return val


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc


def _frac_str(x) -> str:
    return str(Fraction(x))


# --- subcommands -------------------------------------------------------------


def cmd_certify(args) -> tuple[dict, int]:
    report = bounds.certify(bounds.CertificateParams(args.d, args.epsilon, args.gamma))
    out = report.to_dict()
    out["slack_bits"] = report.slack_bits
    return out, EXIT_OK if report.verdict else EXIT_FAIL


def cmd_scan(args) -> tuple[dict, int]:
    res = bounds.threshold_scan(args.epsilon, args.gamma, args.dmax, seed=args.seed)
    ok = res.threshold is not None and not res.flips
    return res.to_dict(), EXIT_OK if ok else EXIT_FAIL


def toric_report() -> dict:
    fan = toric.kummer_resolution_fan()
    smooth = toric.verify_smooth(fan)
    sigma_smooth = toric.verify_smooth([toric.unresolved_cone()], fan.lattice)
    k_prime, e6_prime = toric.moved_divisors(fan)
    table = toric.cartier_data(k_prime, fan)
    z1, z2, star = toric.z_divisors(fan)
    poly = toric.obstruction_gap_polynomial()
    expected_table = {
        ("v1", "v2", "v4", "v6"): [0, -1, -2, -1],
        ("v1", "v2", "v5", "v6"): [0, -1, 0, -2],
        ("v1", "v3", "v4", "v6"): [0, -2, -1, -1],
        ("v1", "v3", "v5", "v6"): [0, 0, -1, -2],
        ("v2", "v3", "v4", "v6"): [0, -1, -1, -1],
        ("v2", "v3", "v5", "v6"): [0, -1, -1, -2],
    }
    expected_star = {"v1": [-1, -1, -2], "v2": [1, 0, 0], "v3": [0, 1, 0], "v4": [0, 0, 1], "v5": [0, 0, -1]}
    star_rays = {l: [int(x) for x in v] for l, v in star.rays.items()}
    rows = [{"cone": list(c), "k_prime": [int(x) for x in m], "k_prime_bar": [int(x) for x in m[1:]]} for c, m in table.items()]
    checks = {
        "six_rays": len(fan.rays) == 6,
        "six_maximal_cones": len(fan.cones) == 6,
        "all_cones_smooth": all(smooth.values()),
        "sigma_singular": not any(sigma_smooth.values()),
        "cartier_table": {c: [int(x) for x in m] for c, m in table.items()} == expected_table,
        "star_rays": star_rays == expected_star,
        "z1": z1.coefficients == {"v1": 5, "v2": -1, "v3": -1, "v4": -1, "v5": 2},
        "z2": z2.coefficients == {"v1": -6, "v5": -3},
        "ehrhart": poly.coefficients == (18, Fraction(45, 2), Fraction(17, 2), 1),
        "pz2_empty": toric.divisor_polytope(z2, star).is_empty(),
    }
    return {
        "cartier_table": rows,
        "star_rays": star_rays,
        "z1": {k: _frac_str(v) for k, v in sorted(z1.coefficients.items())},
        "z2": {k: _frac_str(v) for k, v in sorted(z2.coefficients.items())},
        "k_prime": {k: _frac_str(v) for k, v in sorted(k_prime.coefficients.items())},
        "e6_prime": {k: _frac_str(v) for k, v in sorted(e6_prime.coefficients.items())},
        "ehrhart": [_frac_str(c) for c in poly.coefficients],
        "checks": checks,
        "all_pass": all(checks.values()),
    }


def cmd_verify_toric(args) -> tuple[dict, int]:
    rep = toric_report()
    return rep, EXIT_OK if rep["all_pass"] else EXIT_FAIL


def cmd_class_number(args) -> tuple[dict, int]:
    D = args.disc
    h = bqf.class_number_exact(D)
    dec = bqf.decompose_character(D)
    bound = None
    if D % 4 == 0 and -D // 4 > 1:
        bound = bqf.count_B_classes_bound(-D // 4)
    out = {
        "discriminant": D,
        "h": h,
        "bound": bound,
        "fundamental_discriminant": dec.fundamental_discriminant,
        "conductor": dec.conductor,
        "f": dec.f,
    }
    return out, EXIT_FAIL if bound is not None and h > bound else EXIT_OK


def cmd_indices(args) -> tuple[dict, int]:
    rep = modcurve.index_report(args.n).to_dict()
    code = EXIT_OK
    if args.n <= modcurve.COSET_ORACLE_CAP:
        g0, g1 = modcurve.index_oracle(args.n)
        rep["oracle"] = {"index_gamma0": g0, "index_gamma1": g1}
        if (g0, g1) != (rep["index_gamma0"], rep["index_gamma1"]):
            code = EXIT_FAIL
    else:
        rep["oracle"] = None
    if args.n <= modcurve.EPSILON3_ORACLE_CAP and args.n % 27:
        rep["epsilon3_oracle"] = modcurve.epsilon3_oracle(args.n)
        if rep["epsilon3_oracle"] != rep["epsilon3"]:
            code = EXIT_FAIL
    else:
        rep["epsilon3_oracle"] = None
    return rep, code


def cmd_ehrhart(args) -> tuple[dict, int]:
    k = args.k
    if k < 0 or k > 60:
        raise InvalidInput("--k must lie in [0, 60]")
    P = toric.six_pz1()
    poly = toric.obstruction_gap_polynomial()
    rows = []
    ok = True
    for j in range(k + 1):
        count = P.dilate(j).count_lattice_points() if j else 1
        val = poly(j)
        ok &= count == val
        rows.append({"dilate": j, "lattice_points": count, "polynomial": _frac_str(val)})
    return {"coefficients": [_frac_str(c) for c in poly.coefficients], "rows": rows, "all_match": ok}, (
        EXIT_OK if ok else EXIT_FAIL
    )


def cmd_congruence(args) -> tuple[dict, int]:
    d = args.d
    grp = lattice.discriminant_group(lattice.kummer_lattice(d))
    closed = lattice.kummer_decomposition(d)
    a, b, dp = lattice.split_2d(d)
    counts = lattice.element_counts(d)
    sol2 = [lattice.count_congruence_solutions(d, p, 2) for p in (0, 1)]
    sol3 = [lattice.count_congruence_solutions(d, p, 3) for p in (0, 1, 2)]
    caps = {
        "p0_cap": sol2[0] <= (1 if a == 1 else 2),
        "p1_cap": sol2[1] <= 4,
        "order3_cap": counts.order_3_with_norm <= 8,
        "order_2a_cap": counts.order_2a_with_norm <= 6,
        "order_2_cap": counts.order_2_with_norm <= 3,
    }
    oracle = None
    if 12 * d <= lattice.OQL_ORACLE_CAP:
        oracle = lattice.oqL_order_oracle(d)
        caps["oracle_cap"] = oracle <= lattice.oq_bound(d)
    out = {
        "d": d,
        "order": grp.order,
        "invariant_factors": grp.invariant_factors(),
        "decomposition": {
            "a": a,
            "b": b,
            "d_prime": dp,
            "cyclic_orders": list(closed.cyclic_orders),
            "generator_norms": [_frac_str(x) for x in closed.generator_norms],
            "matches_snf": lattice.decomposition_matches(d),
        },
        "congruence_solutions": {"two_part": sol2, "three_part": sol3},
        "element_counts": counts.__dict__,
        "index_bound": lattice.index_bound(d),
        "oq_bound": lattice.oq_bound(d),
        "oq_oracle": oracle,
        "checks": caps,
    }
    ok = all(caps.values()) and out["decomposition"]["matches_snf"] and grp.order == 12 * d
    return out, EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "certify": cmd_certify,
    "scan": cmd_scan,
    "verify-toric": cmd_verify_toric,
    "class-number": cmd_class_number,
    "indices": cmd_indices,
    "ehrhart": cmd_ehrhart,
    "congruence": cmd_congruence,
}


# --- parsing and output ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kgt", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"kgt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output="json"):
        p.add_argument("--output", choices=("json", "csv"), default=output)
        p.add_argument("--seed", type=_int, default=DEFAULT_SEED)
        return p

    p = common(sub.add_parser("certify", help="certify the alpha inequality at one d"))
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--epsilon", type=_fraction, default=Fraction(1, 4))
    p.add_argument("--gamma", type=_fraction, default=Fraction(1, 4))

    p = common(sub.add_parser("scan", help="search for the least certified d"))
    p.add_argument("--epsilon", type=_fraction, default=Fraction(1, 4))
    p.add_argument("--gamma", type=_fraction, default=Fraction(1, 4))
    p.add_argument("--dmax", type=_positive_int, default=bounds.D_MAX_SCAN)

    common(sub.add_parser("verify-toric", help="check the toric resolution fixtures"))

    p = common(sub.add_parser("class-number", help="class number and the B-block bound"))
    p.add_argument("--disc", type=_int, required=True)

    p = common(sub.add_parser("indices", help="Gamma_0 / Gamma_1 indices and eps3"))
    p.add_argument("--n", type=_positive_int, required=True)

    p = common(sub.add_parser("ehrhart", help="lattice points of dilates of 6 P_Z1"), output="csv")
    p.add_argument("--k", type=_int, default=6)

    p = common(sub.add_parser("congruence", help="discriminant group and index-bound counts"))
    p.add_argument("--d", type=_positive_int, required=True)
    return parser


def load_schema(command: str) -> dict:
    """The published JSON schema for a subcommand's report."""
    if command not in COMMANDS:
        raise InvalidInput(f"unknown command {command!r}")
    return json.loads(resources.files("kgt").joinpath("schemas", f"{command}.schema.json").read_text())


def _params(args) -> dict:
    out = {}
    for key, val in sorted(vars(args).items()):
        if key in ("command",):
            continue
        out[key] = str(val) if isinstance(val, Fraction) else val
    out["slack_bits"] = slack_bits()
    return out


def _flatten(prefix: str, obj, out: dict) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        out[prefix] = json.dumps(obj, sort_keys=True)
    elif isinstance(obj, list):
        out[prefix] = " ".join(str(x) for x in obj)
    elif isinstance(obj, bool):
        out[prefix] = "true" if obj else "false"
    else:
        out[prefix] = "" if obj is None else obj


def to_csv(doc: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    result = doc["result"]
    if isinstance(result.get("rows"), list):
        rows = result["rows"]
        header = sorted(rows[0]) if rows else []
        writer.writerow(header)
        for r in rows:
            writer.writerow([str(r[h]).lower() if isinstance(r[h], bool) else r[h] for h in header])
    else:
        flat: dict = {}
        _flatten("", {"tool_version": doc["tool_version"], "params": doc["params"], **result}, flat)
        writer.writerow(list(flat))
        writer.writerow(list(flat.values()))
    return buf.getvalue()


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        params = _params(args)
        result, code = COMMANDS[args.command](args)
    except (InvalidInput, ValueError) as exc:
        print(f"kgt: invalid input: {exc}", file=stderr)
        return EXIT_INVALID
    except VerificationFailure as exc:
        print(f"kgt: verification failed: {exc}", file=stderr)
        return EXIT_FAIL
    doc = {"tool": "kgt", "tool_version": __version__, "command": args.command, "params": params, "result": result}
    stdout.write(to_json(doc) if args.output == "json" else to_csv(doc))
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
