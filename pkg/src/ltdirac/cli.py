"""Command-line front end.

Parses an operator expression, runs the requested pipeline stage and
prints either a human-readable report or a stable JSON document with a
top-level schema_version.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .diffop import slopes
from .errors import LTDiracError, ParseError, exit_code_for
from .exactalg import DEFAULT_DEGREE_CAP, FieldHandle, UniPoly
from .invariant import as_invariant, as_invariant_nk
from .parsing import parse_operator, render_operator
from .turrittin import irregularity, lt_decompose

SCHEMA_VERSION = 1


class JobSpec:
    __slots__ = ("operator", "field", "mode", "r", "n", "k", "fmt")

    def __init__(self, operator, field="Q", mode="slopes", r=None, n=None,
                 k=None, fmt="structured"):
        self.operator = operator
        self.field = field
        self.mode = mode
        self.r = r
        self.n = n
        self.k = k
        self.fmt = fmt
        if mode not in ("slopes", "decompose", "invariant"):
            raise ValueError(f"unknown mode {mode!r}")
        if mode == "invariant":
            has_r = r is not None
            has_nk = n is not None or k is not None
            if has_r == has_nk:
                raise ValueError(
                    "mode=invariant needs exactly one of r or (n, k)")
            if has_nk and (n is None or k is None):
                raise ValueError("n and k must be given together")


def _parse_field(spec):
    field = FieldHandle.rationals(DEFAULT_DEGREE_CAP)
    spec = (spec or "Q").strip()
    if spec in ("Q", "q", ""):
        return field
    import sympy as sp
    for clause in spec.split(";"):
        clause = clause.strip()
        if not clause.startswith("adjoin:"):
            raise ValueError(
                f"bad field clause {clause!r}; expected 'adjoin: <poly>'")
        expr = sp.sympify(clause[len("adjoin:"):].strip())
        symbols = sorted(expr.free_symbols, key=str)
        if len(symbols) != 1:
            raise ValueError("adjoin clause must use exactly one symbol")
        poly = sp.Poly(expr, symbols[0])
        coeffs = [Fraction(sp.Rational(c).p, sp.Rational(c).q)
                  for c in poly.all_coeffs()]
        field = field.extend(UniPoly(field, coeffs), str(symbols[0]))
    return field


def _parse_r(text):
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def run(spec):
    """Execute one job; returns the report as a dict (structured form)."""
    field = _parse_field(spec.field)
    operator = parse_operator(spec.operator, field)
    report = {
        "schema_version": SCHEMA_VERSION,
        "mode": spec.mode,
        "operator": render_operator(operator),
        "field": field.describe(),
    }
    if spec.mode == "slopes":
        report["slopes"] = [
            {"slope": _frac_str(s), "multiplicity": m}
            for s, m in slopes(operator)]
        return report
    dec = lt_decompose(operator)
    if spec.mode == "decompose":
        report["ram_index"] = dec.ram_index
        report["total_rank"] = dec.total_rank
        report["irregularity"] = _frac_str(irregularity(dec))
        report["components"] = [
            {"form": c.form.render(), "rank": c.rank,
             "orbit_size": c.orbit_size}
            for c in dec.components]
        return report
    if spec.r is not None:
        r = spec.r if isinstance(spec.r, Fraction) else _parse_r(spec.r)
        divisor = as_invariant(dec, r)
        report["r"] = _frac_str(r)
    else:
        divisor = as_invariant_nk(dec, spec.n, spec.k)
        report["n"] = spec.n
        report["k"] = spec.k
        report["r"] = _frac_str(Fraction(spec.k, spec.n))
    report["divisor"] = divisor.serialize()
    return report


def _frac_str(value):
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _render_text(report):
    lines = [f"operator: {report['operator']}",
             f"field:    {report['field']}"]
    if report["mode"] == "slopes":
        body = ", ".join(f"{e['slope']} (x{e['multiplicity']})"
                         for e in report["slopes"])
        lines.append(f"slopes:   {body}")
    elif report["mode"] == "decompose":
        lines.append(f"ram index: {report['ram_index']}")
        lines.append(f"total rank: {report['total_rank']}")
        lines.append(f"irregularity: {report['irregularity']}")
        for c in report["components"]:
            lines.append(f"  form {c['form']}  rank {c['rank']}"
                         f"  orbit {c['orbit_size']}")
    else:
        lines.append(f"r: {report['r']}")
        if not report["divisor"]:
            lines.append("divisor: 0")
        else:
            lines.append("divisor:")
            for e in report["divisor"]:
                lines.append(f"  {e['multiplicity']} * ({e['minpoly']})"
                             f"  [degree {e['degree']}]")
    return "\n".join(lines)


def _build_argparser():
    ap = argparse.ArgumentParser(
        prog="ltdirac",
        description="Slopes, exponential decomposition and the refined "
                    "divisor of a differential operator over K((x)).")
    ap.add_argument("--op", required=False,
                    help="operator expression, e.g. 'x^3*D^2 - 1'; "
                         "'-' reads from stdin")
    ap.add_argument("--field", default=None,
                    help="base field: 'Q' or 'adjoin: z^2+1' clauses "
                         "separated by ';'")
    ap.add_argument("--mode", default=None,
                    choices=["slopes", "decompose", "invariant"])
    ap.add_argument("--r", default=None, help="slope r as 'p/q' (> 1)")
    ap.add_argument("--n", type=int, default=None)
    ap.add_argument("--k", type=int, default=None)
    ap.add_argument("--format", dest="fmt", default=None,
                    choices=["text", "structured"])
    ap.add_argument("--config", default=None,
                    help="JSON file with default values for the flags")
    return ap


def main(argv=None):
    args = _build_argparser().parse_args(argv)
    settings = {"field": "Q", "mode": "slopes", "fmt": "structured",
                "op": None, "r": None, "n": None, "k": None}
    if args.config:
        with open(args.config, encoding="utf-8") as handle:
            loaded = json.load(handle)
        for key in settings:
            if key in loaded:
                settings[key] = loaded[key]
    for key in settings:
        value = getattr(args, key)
        if value is not None:
            settings[key] = value
    if settings["op"] is None:
        print("error: no operator given (--op or config)", file=sys.stderr)
        return 2
    if settings["op"] == "-":
        settings["op"] = sys.stdin.read().strip()
    try:
        spec = JobSpec(settings["op"], settings["field"], settings["mode"],
                       settings["r"], settings["n"], settings["k"],
                       settings["fmt"])
        report = run(spec)
    except ParseError as exc:
        print(f"parse error: {exc} (position {exc.position}, "
              f"expected one of {', '.join(exc.expected)})", file=sys.stderr)
        return exit_code_for(exc)
    except LTDiracError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if spec.fmt == "text":
        print(_render_text(report))
    else:
        print(json.dumps(report, sort_keys=True, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
