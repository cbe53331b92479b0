"""Command line front end.

    wdist --gen frank:3 --mode real --digits 40
    wdist --in A.json --mode localize --z0 1/1000
    wdist batch frank --n 3..12

Reports are JSON on stdout (or --out); a short summary goes to stderr.
Exit codes: 0 ok (CANDIDATE_ONLY statuses included), 1 malformed input,
2 computation error.
"""
from __future__ import annotations

import argparse
import concurrent.futures as cf
import hashlib
import json
import math
import sys
import time
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction

import mpmath

from . import gallery
from .errors import MalformedInput, WdistError
from .nearest import verify_report, wilkinson_distance
from .ratpoly import as_rat
from .roots import localization_count, refine, variation_count
from .specpoly import distance_equation, hankel_minors, is_defective

MODES = ("real", "complex", "both", "localize", "equation-only")
SCHEMA = "wdist-report/1"


# ---------------------------------------------------------------------------
# input

def parse_rational(x) -> Fraction:
    """Exact value of a JSON entry: int, "p/q" or a decimal string."""
    if isinstance(x, bool) or isinstance(x, float):
        raise MalformedInput(f"entry {x!r} must be an integer or a string")
    if isinstance(x, int):
        return Fraction(x)
    if not isinstance(x, str):
        raise MalformedInput(f"entry {x!r} is not a number")
    try:
        return as_rat(x.strip())
    except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
        raise MalformedInput(f"cannot parse {x!r}") from exc


def parse_matrix_doc(doc) -> tuple[list, str]:
    """{"n": 3, "entries": [[...], ...], "label": "..."} -> (matrix, label).
    A bare list of rows is accepted too."""
    if isinstance(doc, list):
        doc = {"entries": doc}
    if not isinstance(doc, dict) or "entries" not in doc:
        raise MalformedInput("matrix document needs an 'entries' field")
    rows = doc["entries"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise MalformedInput("'entries' must be a nonempty list of rows")
    n = doc.get("n", len(rows))
    if not isinstance(n, int) or n != len(rows) or any(len(r) != n for r in rows):
        raise MalformedInput("matrix is not n x n")
    return [[parse_rational(x) for x in r] for r in rows], str(doc.get("label", ""))


def load_matrix(path: str) -> tuple[list, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path} is not JSON: {exc}") from exc
    return parse_matrix_doc(doc)


def matrix_digest(M) -> str:
    canon = json.dumps([[str(x) for x in r] for r in M], separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


# ---------------------------------------------------------------------------
# output helpers

def dec(x, digits: int) -> str:
    """``digits`` significant digits, round-half-even, from the exact value
    of an mpf / Fraction / int."""
    if isinstance(x, mpmath.mpc):
        raise TypeError("use cdec for complex values")
    if isinstance(x, mpmath.mpf):
        sign, man, exp, _ = x._mpf_
        fr = Fraction(-int(man) if sign else int(man)) * Fraction(2) ** int(exp)
    else:
        fr = Fraction(x)
    if fr == 0:
        return "0"
    ctx = Context(prec=digits, rounding=ROUND_HALF_EVEN, Emax=10 ** 9, Emin=-10 ** 9)
    d = ctx.divide(Decimal(fr.numerator), Decimal(fr.denominator))
    return format(d, "E") if abs(d.adjusted()) > 20 else format(d, "f")


def cdec(x, digits: int) -> dict:
    x = mpmath.mpc(x)
    return {"re": dec(x.real, digits), "im": dec(x.imag, digits)}


def mat_dec(M, digits: int, complex_: bool = False) -> list:
    f = cdec if complex_ else dec
    return [[f(M[i, j], digits) for j in range(M.cols)] for i in range(M.rows)]


def poly_record(p) -> dict:
    """Coefficients (highest first) as exact integers after multiplying by
    the declared common denominator."""
    den = 1
    for c in p.coeffs:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in p.coeffs]
    return {"denominator": str(den), "degree": len(ints) - 1,
            "coefficients": [str(c) for c in ints],
            "max_coefficient_digits": max((len(str(abs(c))) for c in ints), default=0)}


def root_record(r, digits):
    rr = refine(r, digits)
    return {"value": dec(rr.value, digits), "multiplicity": r.multiplicity,
            "exact": None if rr.exact is None else str(rr.exact)}


# ---------------------------------------------------------------------------
# pipelines

def real_section(M, digits, tol):
    rep = wilkinson_distance(M, digits)
    out = {"status": rep.status, "discriminant_guard": rep.discriminant_guard,
           "zero_inventory": [root_record(r, digits) for r in rep.zero_inventory],
           "rejected": [{"z": dec(z.value, digits), "reason": why} for z, why in rep.rejected]}
    if rep.equation is not None:
        out["equation"] = dict(poly_record(rep.equation.F), mode=rep.equation.mode)
    if rep.d is not None:
        out["d"] = dec(rep.d, digits)
    if rep.z_star is not None:
        out["z_star"] = dec(rep.z_star.value, digits)
        out["z_star_multiplicity"] = rep.z_star.multiplicity
        out["lambda_star"] = dec(rep.lambda_star, digits)
        out["lambda_method"] = rep.lambda_method
        out["E_star"] = mat_dec(rep.E_star, digits)
        out["B_star"] = mat_dec(rep.B_star, digits)
        out["verification"] = [{"check": c.name, "passed": bool(c.passed),
                                "value": dec(c.value, 6), "bound": dec(c.bound, 6)}
                               for c in verify_report(rep, tol)]
    return rep, out


def complex_section(M, digits, jobs, real_rep=None):
    from .complexdist import complex_distance
    rep = complex_distance(M, digits, jobs=jobs, real_report=real_rep)
    out = {"winner": rep.winner,
           "d_C": None if rep.d_C is None else dec(rep.d_C, digits),
           "f_tilde": None if rep.equation is None else poly_record(rep.equation.f_tilde),
           "degenerate": rep.degenerate,
           "zero_inventory": [root_record(r, digits) for r in rep.zero_inventory],
           "rejected": [{"z": dec(z.value, digits), "reason": why} for z, why in rep.rejected]}
    if rep.z_tilde is not None:
        out.update({"z_tilde": dec(rep.z_tilde.value, digits), "a": dec(rep.a, digits),
                    "bb": dec(rep.bb, digits), "b": dec(rep.b, digits),
                    "E0": mat_dec(rep.E0, digits, True), "B0": mat_dec(rep.B0, digits, True)})
    return rep, out


def run_one(M, mode, digits, tol, jobs=1, z0=None) -> dict:
    report = {}
    if mode == "equation-only":
        eq = distance_equation(M) if not is_defective(M) else None
        report["status"] = "OK" if eq is not None else "INPUT_DEFECTIVE"
        if eq is not None:
            report["equation"] = dict(poly_record(eq.F), mode=eq.mode)
            if len(M) >= 3:
                from .complexdist import complex_distance_equation
                report["f_tilde"] = poly_record(complex_distance_equation(M, jobs=jobs).f_tilde)
        return report
    if mode == "localize":
        if z0 is None:
            raise MalformedInput("--mode localize needs --z0")
        eq = distance_equation(M)
        minors = hankel_minors(eq.sums)
        report.update({"status": "OK", "z0": str(z0), "variations_at_z0": variation_count(minors, z0),
                       "variations_at_0": variation_count(minors, 0),
                       "lower_bound_zeros_in_0_z0": localization_count(minors, z0)})
        return report
    real_rep = None
    if mode in ("real", "both"):
        real_rep, report["real"] = real_section(M, digits, tol)
        report["status"] = real_rep.status
    if mode in ("complex", "both"):
        crep, report["complex"] = complex_section(M, digits, jobs, real_rep)
        if mode == "complex":
            report["status"] = crep.winner or "NO_ADMISSIBLE_ZERO"
    return report


def _summary(rep: dict) -> str:
    parts = [f"status={rep.get('status')}"]
    if "real" in rep and "d" in rep["real"]:
        parts.append(f"d={rep['real']['d'][:12]}")
    if "complex" in rep and rep["complex"].get("d_C"):
        parts.append(f"d_C={rep['complex']['d_C'][:12]} ({rep['complex']['winner']})")
    if "equation" in rep:
        parts.append(f"deg F={rep['equation']['degree']}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# argument handling

def _build_parser():
    p = argparse.ArgumentParser(prog="wdist", description="Distance to matrices with a multiple eigenvalue.")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--gen", help="generator family:n[:params], e.g. frank:5, kahan:10:s=3/5,c=4/5")
    src.add_argument("--in", dest="inp", help="matrix JSON file")
    p.add_argument("--mode", choices=MODES, default="real")
    p.add_argument("--digits", type=int, default=40)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--tol", type=int, default=None, help="verification tolerance exponent (10^-TOL)")
    p.add_argument("--z0", help="rational point for --mode localize")
    p.add_argument("--jobs", type=int, default=1)
    return p


def _batch_parser():
    p = argparse.ArgumentParser(prog="wdist batch", description="Table of results over a gallery family.")
    p.add_argument("family", help="frank, kahan, grcar or epsilon")
    p.add_argument("--n", default="3..8", help="orders: a..b or a comma list")
    p.add_argument("--params", default="", help="family parameters, e.g. s=3/5,c=4/5 or s_power=1/10")
    p.add_argument("--eps", default="1/2,2,100", help="epsilon values for the epsilon family")
    p.add_argument("--digits", type=int, default=40)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--out")
    return p


def _orders(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = text.split("..")
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise MalformedInput(f"bad order list {text!r}") from None


def _tol(args, n):
    if args.tol is not None:
        return Fraction(1, 10 ** args.tol)
    # default 10^-30, relaxed with n and never tighter than the precision allows
    return Fraction(1, 10 ** max(5, min(30, args.digits - 10 - n)))


def _emit(doc, out):
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "batch":
        return batch(argv[1:])
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    t0 = time.perf_counter()
    try:
        if args.digits < 5:
            raise MalformedInput("--digits must be at least 5")
        if args.gen:
            spec = gallery.parse_gen(args.gen)
            M, label, source = gallery.generate(spec), args.gen, args.gen
        else:
            (M, label), source = load_matrix(args.inp), args.inp
        z0 = parse_rational(args.z0) if args.z0 is not None else None
    except WdistError as exc:
        sys.stderr.write(f"wdist: {exc.code}: {exc}\n")
        _emit({"schema": SCHEMA, "status": "ERROR", "error": exc.code, "message": str(exc)}, args.out)
        return 1
    doc = {"schema": SCHEMA,
           "input": {"source": source, "label": label, "n": len(M), "digest": matrix_digest(M)},
           "mode": args.mode, "digits": args.digits}
    code = 0
    try:
        doc.update(run_one(M, args.mode, args.digits, _tol(args, len(M)), args.jobs, z0))
    except MalformedInput as exc:
        doc.update({"status": "ERROR", "error": exc.code, "message": str(exc)})
        code = 1
    except WdistError as exc:
        doc.update({"status": "ERROR", "error": exc.code, "message": str(exc)})
        code = 2
    doc["timing"] = {"seconds": round(time.perf_counter() - t0, 3)}
    _emit(doc, args.out)
    sys.stderr.write(("wdist: " + _summary(doc) if code == 0 else f"wdist: {doc['error']}: {doc['message']}") + "\n")
    return code


def _batch_row(job):
    spec, digits = job
    t0 = time.perf_counter()
    row = {"spec": spec.key()[0].lower(), "n": spec.n, "params": {k: str(v) for k, v in spec.params.items()}}
    try:
        M = gallery.generate(spec)
        rep = wilkinson_distance(M, digits)
        row.update({"status": rep.status,
                    "d": None if rep.d is None else dec(rep.d, 7),
                    "real_zeros": len(rep.zero_inventory),
                    "max_coefficient_digits": None if rep.equation is None else
                    poly_record(rep.equation.F)["max_coefficient_digits"]})
    except WdistError as exc:
        row.update({"status": "ERROR", "error": exc.code, "message": str(exc)})
    row["seconds"] = round(time.perf_counter() - t0, 3)
    return row


def batch(argv) -> int:
    try:
        args = _batch_parser().parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        fam = gallery.parse_gen(args.family).family
        params = gallery.parse_gen(f"{args.family}:1:{args.params}").params if args.params else {}
        if fam == gallery.EPSILON_FAMILY:
            specs = [gallery.GallerySpec(fam, 4, {"eps": e}) for e in args.eps.split(",") if e]
        else:
            if fam == gallery.KAHAN and not params:
                params = {"s": "3/5", "c": "4/5"}
            specs = [gallery.GallerySpec(fam, n, dict(params)) for n in _orders(args.n)]
    except WdistError as exc:
        sys.stderr.write(f"wdist batch: {exc.code}: {exc}\n")
        return 1
    jobs = [(s, args.digits) for s in specs]
    if args.jobs > 1:
        with cf.ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_batch_row, jobs))
    else:
        rows = [_batch_row(j) for j in jobs]
    if args.format == "json":
        _emit({"schema": "wdist-batch/1", "rows": rows}, args.out)
    else:
        lines = [f"{'n/param':>10} {'d':>14} {'real zeros':>10} {'coef digits':>11} {'time (s)':>9}  status"]
        for r in rows:
            tag = r["params"].get("eps", r["n"]) if fam == gallery.EPSILON_FAMILY else r["n"]
            lines.append(f"{str(tag):>10} {str(r.get('d')):>14} {str(r.get('real_zeros')):>10} "
                         f"{str(r.get('max_coefficient_digits')):>11} {r['seconds']:>9}  {r['status']}")
        text = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
