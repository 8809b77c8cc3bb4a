"""Command-line interface.

Usage: ``invring COMMAND [PROBLEM.toml] [-D N] [--json] [--suite NAME] [--bound N] [--seed N]``

Exit codes: 0 success, 1 property violated, 2 invalid input, 3 bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .cm_certify import cm_check
from .coeff_rings import CoeffRing, factor_prime_in_cyclotomic, unit_ratio_of_roots, unramified_check
from .cohomology import cohomology_table, polynomial_module
from .diagonalize import DVRMatrix, diagonalize_order_p, solve_coboundary
from .errors import InvalidInput, InvringError
from .fields import Cyc, is_prime
from .group_action import SYLOW_BOUND, generate_closure, sylow_subgroup
from .invariants import DEFAULT_DEGREE_BOUND, algebra_generators, hilbert_function, molien_series
from .suites import SUITES, run_suite

COMMANDS = ("group", "invariants", "cohomology", "cm-check", "diagonalize", "ramify", "verify")


# ---------------------------------------------------------------------------
# Problem files
# ---------------------------------------------------------------------------


def load_problem(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise InvalidInput(f"malformed problem file {path}: {exc}") from exc


def ring_from_problem(problem: dict) -> CoeffRing:
    r = problem.get("ring", {"kind": "integers"})
    kind = r.get("kind", "integers")
    loc = r.get("localize")
    if kind == "integers":
        return CoeffRing.integers(loc if loc else None)
    if kind == "cyclotomic":
        return CoeffRing.cyclotomic(_req(r, "p", "ring"), localize=bool(loc))
    if kind == "polyfp":
        return CoeffRing.poly(_req(r, "p", "ring"), localize=bool(loc))
    raise InvalidInput(f"unknown ring kind {kind!r}")


def _req(table: dict, key: str, where: str):
    if key not in table:
        raise InvalidInput(f"missing key {key!r} in [{where}]")
    return table[key]


def group_from_problem(problem: dict, ring: CoeffRing, bound: int):
    g = _req(problem, "group", "top level")
    gens = _req(g, "generators", "group")
    if not isinstance(gens, list) or not gens:
        raise InvalidInput("[group] generators must be a non-empty list of matrices")
    return generate_closure(gens, ring, bound=bound, n=g.get("n"))


# ---------------------------------------------------------------------------
# Commands; each returns (result, transcript, exit_code)
# ---------------------------------------------------------------------------


def cmd_group(problem, args):
    ring = ring_from_problem(problem)
    G = group_from_problem(problem, ring, args.bound)
    sylow = {}
    n, q = G.order, 2
    while n > 1:
        if n % q == 0:
            while n % q == 0:
                n //= q
            sylow[str(q)] = sylow_subgroup(G, q).order if G.order <= SYLOW_BOUND else None
        q += 1
    result = {"group": G.describe(), "sylow_orders": sylow, "cyclic": G.is_cyclic()}
    transcript = [
        {"claim": "closure", "order": G.order, "elements": [[[ring.format(x) for x in r] for r in g.m] for g in G.elements]},
    ]
    return result, transcript, 0


def cmd_invariants(problem, args):
    ring = ring_from_problem(problem)
    G = group_from_problem(problem, ring, args.bound)
    D = _degree_bound(problem, args, DEFAULT_DEGREE_BOUND)
    gens = algebra_generators(G, D)
    hilb = hilbert_function(G, D).values
    result = {
        "group": G.describe(),
        "D": D,
        "generators": [{"degree": d, "poly": str(f)} for d, f in gens],
        "hilbert": hilb,
    }
    transcript = [{"claim": "invariant", "degree": d, "poly": f.to_json()} for d, f in gens]
    if ring.characteristic == 0:
        mol = molien_series(G, D)
        result["molien"] = mol
        result["molien_agrees"] = mol == hilb
        transcript.append({"claim": "molien equals ranks", "ranks": hilb, "molien": mol})
        code = 0 if mol == hilb else 1
    else:
        code = 0
    return result, transcript, code


def cmd_cohomology(problem, args):
    ring = ring_from_problem(problem)
    G = group_from_problem(problem, ring, args.bound)
    c = problem.get("cohomology", {})
    indices = c.get("indices", [0, 1, 2])
    lo, hi = c.get("degrees", [0, _degree_bound(problem, args, 6)])
    table = cohomology_table(polynomial_module(G), indices, range(lo, hi + 1))
    rows = table.rows()
    result = {"group": G.describe(), "indices": indices, "degrees": [lo, hi], "table": rows}
    transcript = [{"claim": "H^i(G, R_n)", **r} for r in rows]
    return result, transcript, 0


def cmd_cm_check(problem, args):
    ring = ring_from_problem(problem)
    G = group_from_problem(problem, ring, args.bound)
    D = _degree_bound(problem, args, 3 * G.order)
    opts = problem.get("options", {})
    v = cm_check(G, D, sylow=bool(opts.get("sylow", False)))
    result = v.to_json()
    transcript = [
        {"claim": "hsop", **(v.hsop or {})},
        {"claim": "free generators", "generators": v.freeness.get("generators"), "hilbert": v.freeness.get("hilbert")},
        {"claim": "depth of H^1", "status": v.depth_h1["status"], "multiplier": v.depth_h1["multiplier"]},
    ]
    return result, transcript, 0 if v.agree else 1


def cmd_diagonalize(problem, args):
    d = _req(problem, "diagonalize", "top level")
    p = _req(d, "p", "diagonalize")
    sigma = DVRMatrix.of(p, [[_cyc(x, p) for x in r] for r in _req(d, "matrix", "diagonalize")])
    res = diagonalize_order_p(sigma)
    result = {"p": p, "exponents": res.exponents, "B": res.transcript()["B"]}
    transcript = [{"claim": "B^-1 sigma B diagonal", **res.transcript()}]
    if "u" in d:
        cb = solve_coboundary(res, [_cyc(x, p) for x in d["u"]])
        result["theta"] = cb.to_json(sigma.ring)["theta"]
        transcript.append({"claim": "sigma(theta) - theta = pi u", **cb.to_json(sigma.ring)})
    return result, transcript, 0


def cmd_ramify(problem, args):
    r = _req(problem, "ramify", "top level")
    p = _req(r, "p", "ramify")
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidInput(f"p = {p!r} is not prime")
    lo, hi = r.get("q_range", [2, 50])
    rows = [factor_prime_in_cyclotomic(q, p).to_json() for q in range(lo, hi + 1) if is_prime(q)]
    ring = CoeffRing.cyclotomic(p, localize=True)
    units = []
    for i in range(1, p):
        u = unit_ratio_of_roots(i, 1, p)
        units.append({"i": i, "valuation": ring.valuation(Cyc.zeta(p, i) - 1), "u": ring.format(u), "u_is_unit": ring.is_unit(u)})
    result = {"p": p, "q_range": [lo, hi], "table": rows, "unit_ratios": units}
    fields = r.get("fields", [])
    if fields:
        result["quadratic"] = [
            {"name": f.get("name", ""), **unramified_check(_req(f, "poly", "ramify.fields"), _req(f, "disc", "ramify.fields"), p)}
            for f in fields
        ]
    transcript = [{"claim": "sum e f = p - 1", "q": row["q"], "sum_ef": row["sum_ef"]} for row in rows]
    transcript += [{"claim": "zeta^i - 1 = u (zeta - 1)", **u} for u in units]
    ok = all(row["sum_ef"] == p - 1 for row in rows) and all(u["valuation"] == 1 and u["u_is_unit"] for u in units)
    return result, transcript, 0 if ok else 1


def cmd_verify(problem, args):
    names = [args.suite] if args.suite else list(SUITES)
    for n in names:
        if n not in SUITES:
            raise InvalidInput(f"unknown suite {n!r}; choose from {', '.join(SUITES)}")
    results = [run_suite(n, seed=args.seed) for n in names]
    verdicts = [v for r in results for v in r.verdicts]
    disagreements = [v.group for v in verdicts if not v.agree]
    result = {
        "suites": [r.to_json() for r in results],
        "cross_validation": {"verdicts": len(verdicts), "disagreements": disagreements},
    }
    transcript = [{"claim": c.name, "passed": c.passed} for r in results for c in r.checks]
    ok = all(r.ok for r in results) and not disagreements
    return result, transcript, 0 if ok else 1


HANDLERS = {
    "group": cmd_group,
    "invariants": cmd_invariants,
    "cohomology": cmd_cohomology,
    "cm-check": cmd_cm_check,
    "diagonalize": cmd_diagonalize,
    "ramify": cmd_ramify,
    "verify": cmd_verify,
}


def _degree_bound(problem, args, default):
    if args.degree_bound is not None:
        return args.degree_bound
    return problem.get("group", {}).get("D", problem.get("D", default))


def _cyc(x, p):
    return CoeffRing.cyclotomic(p, localize=True).elem(x)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, float) and obj == float("inf"):
        return "inf"
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    return str(obj)


def build_report(command: str, problem: dict, args) -> tuple:
    try:
        result, transcript, code = HANDLERS[command](problem, args)
        report = {"command": command, "input": problem, "result": result, "transcript": transcript, "exit_code": code}
    except InvringError as exc:
        code = exc.exit_code
        report = {"command": command, "input": problem, "error": {"type": type(exc).__name__, "message": str(exc)}, "exit_code": code}
    return _plain(report), code


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    if "error" in report:
        lines.append(f"error: {report['error']['type']}: {report['error']['message']}")
    else:
        lines.extend(_text_lines(report["command"], report["result"]))
    lines.append(f"exit code: {report['exit_code']}")
    return "\n".join(lines)


def _text_lines(command, r) -> list:
    if command == "group":
        g = r["group"]
        return [f"order {g['order']}, exponent {g['exponent']}, cyclic {r['cyclic']}", f"Sylow orders: {r['sylow_orders']}"]
    if command == "invariants":
        out = [f"Hilbert function through {r['D']}: {r['hilbert']}"]
        if "molien" in r:
            out.append(f"Molien coefficients: {r['molien']} (agree: {r['molien_agrees']})")
        out.extend(f"  degree {g['degree']}: {g['poly']}" for g in r["generators"])
        return out
    if command == "cohomology":
        return [f"H^{e['i']}(G, R_{e['n']}) = torsion {e['torsion']} free rank {e['free_rank']}" for e in r["table"]]
    if command == "cm-check":
        out = [f"verdict: {r['verdict']} through degree {r['D']}", f"tests agree: {r['agree']}"]
        if r.get("hsop"):
            out.append(f"parameters: {r['hsop']['theta1']}, {r['hsop']['theta2']}")
        f = r["freeness"]
        if f.get("ok"):
            out.append(f"free generators in degrees {f['generator_degrees']}")
        else:
            out.append(f"freeness fails: {f.get('failure')} in degree {f.get('degree')}")
        d = r["depth_h1"]
        out.append(f"depth of H^1: {d['status']}" + (f" (multiplier {d['multiplier']})" if d.get("multiplier") else ""))
        if r.get("a_invariant"):
            out.append(f"a-invariant: {r['a_invariant']['a']}")
        return out
    if command == "diagonalize":
        out = [f"eigenvalue exponents: {r['exponents']}", f"basis: {r['B']}"]
        if "theta" in r:
            out.append(f"theta: {r['theta']}")
        return out
    if command == "ramify":
        out = [f"q={row['q']}: " + ", ".join(f"(e={f['e']}, f={f['f']})" for f in row["factors"]) + f"  sum={row['sum_ef']}" for row in r["table"]]
        for qd in r.get("quadratic", []):
            out.append(f"{qd.get('name')}: {qd['status']}" + (f", unramified over pi: {qd['unramified_over_pi']}" if qd["status"] == "ok" else ""))
        return out
    if command == "verify":
        out = []
        for s in r["suites"]:
            out.append(f"suite {s['suite']}: {'PASS' if s['ok'] else 'FAIL'}")
            out.extend(f"  {'PASS' if c['passed'] else 'FAIL'} {c['name']}" for c in s["checks"])
        cv = r["cross_validation"]
        out.append(f"cross-validation: {cv['verdicts']} verdicts, {len(cv['disagreements'])} disagreements")
        return out
    return [json.dumps(r)]


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="invring", description="Invariant rings, group cohomology and Cohen-Macaulay checks.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("problem", nargs="?", help="problem file (TOML)")
    ap.add_argument("-D", "--degree-bound", type=int, default=None)
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--suite", default=None, help="suite for the verify command")
    ap.add_argument("--bound", type=int, default=1000, help="largest group order accepted")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        problem = load_problem(args.problem)
    except InvringError as exc:
        report = {"command": args.command, "error": {"type": type(exc).__name__, "message": str(exc)}, "exit_code": exc.exit_code}
        print(json.dumps(report, indent=2) if args.json else render_text(report))
        return exc.exit_code
    if args.command != "verify" and args.problem is None:
        report = {"command": args.command, "error": {"type": "InvalidInput", "message": "a problem file is required"}, "exit_code": 2}
        print(json.dumps(report, indent=2) if args.json else render_text(report))
        return 2
    report, code = build_report(args.command, problem, args)
    print(json.dumps(report, indent=2) if args.json else render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
