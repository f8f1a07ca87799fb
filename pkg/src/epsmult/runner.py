"""Session execution: evaluate bindings, run commands, render reports.

Every command yields exactly one report.  CSV holds the sample table only
(exact rationals as p/q, never floats); JSON carries the full estimate,
the summary, and evaluated filtration prefixes.  Output is byte-identical
for identical sessions.
"""
from __future__ import annotations

import json
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .errors import EpsmultError
from .filtrations import (
    Filtration,
    WeightValuation,
    check_ar,
    check_weakly_graded,
    colon_family,
    discrete_valued_filtration,
    power_filtration,
)
from .ideals import (
    MonomialIdeal,
    colon,
    colon_power,
    equals,
    intersect,
    maximal_ideal,
    minimalize,
    power,
    product,
    saturate,
    sum_ideals,
    window_bound,
)
from .invariants import (
    MultiplicityEstimate,
    POSITIVITY_THRESHOLD,
    analytic_spread,
    analytic_spread_family,
    amao_pair_sequence,
    epsilon_colon_sequence,
    epsilon_sequence,
    h0_length,
    noetherian_probe,
    positivity_report,
    volume_formula_table,
)
from .rings import polynomial_ring, semigroup_ring
from .session import (
    Call,
    Command,
    FiltDecl,
    IdealDecl,
    IdealLiteral,
    MaxIdeal,
    Name,
    RingDecl,
    Session,
    ValFilt,
    _format_expr,
    format_monomial,
)

SCHEMA_VERSION = 1

_DEFAULT_MMAX = {
    "epsilon": 8, "epsilon-colon": 8, "amao": 8, "volume-table": 8,
    "spread-family": 8, "check-ar": 6, "check-wg": 5, "probe-noetherian": 8,
    "reproduce-example": 6,
}
_DEFAULT_NMAX = {"epsilon-colon": 8, "volume-table": 4, "reproduce-example": 4}

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_COMPUTE = 3
EXIT_MISMATCH = 4


@dataclass(frozen=True)
class Report:
    name: str
    verb: str
    title: str
    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    summary: dict
    evaluated: dict | None = None
    ok: bool = True


@dataclass(frozen=True)
class RunDefaults:
    mmax: int | None = None
    nmax: int | None = None
    bound: int | None = None
    seed: int | None = None


@dataclass
class RunResult:
    exit_code: int
    reports: list[tuple[str, str]] = field(default_factory=list)
    error: dict | None = None


def render_csv(report: Report) -> str:
    lines = [",".join(report.columns)]
    lines.extend(",".join(row) for row in report.rows)
    return "\n".join(lines) + "\n"


def render_json(report: Report) -> str:
    payload = {
        "schema": SCHEMA_VERSION,
        "name": report.name,
        "verb": report.verb,
        "title": report.title,
        "columns": list(report.columns),
        "rows": [list(r) for r in report.rows],
        "summary": report.summary,
        "ok": report.ok,
    }
    if report.evaluated is not None:
        payload["evaluated"] = report.evaluated
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _frac(x: Fraction | int) -> str:
    return str(Fraction(x))


def _estimate_summary(est: MultiplicityEstimate, threshold: Fraction) -> dict:
    return {
        "limit": _frac(est.limit),
        "model": est.model,
        "residual": _frac(est.residual),
        "d_used": est.d_used,
        "positive": positivity_report(est, threshold),
        "threshold": _frac(threshold),
    }


def _sequence_rows(est: MultiplicityEstimate) -> tuple[tuple[str, str, str], ...]:
    fact = factorial(est.d_used)
    rows = []
    for m, value in est.samples:
        raw = value * m ** est.d_used / fact
        rows.append((str(m), _frac(raw), _frac(value)))
    return tuple(rows)


def _prefix_json(filt: Filtration) -> dict:
    return {str(m): [list(g) for g in gens]
            for m, gens in filt.evaluated_prefix().items()}


class _Env:
    """Evaluated bindings plus ring lookup for expression evaluation."""

    def __init__(self):
        self.objects: dict[str, object] = {}
        self.rings: dict[str, object] = {}
        self.var_names: dict[str, tuple[str, ...]] = {}

    def ring(self, name: str):
        return self.rings[name]


def build_environment(session: Session) -> _Env:
    env = _Env()
    for decl in session.decls:
        if isinstance(decl, RingDecl):
            if decl.kind == "poly":
                ring = polynomial_ring(decl.var_names)
            else:
                ring = semigroup_ring(decl.sgens, decl.var_names)
            env.objects[decl.name] = ring
            env.rings[decl.name] = ring
            env.var_names[decl.name] = decl.var_names
        elif isinstance(decl, IdealDecl):
            env.objects[decl.name] = eval_ideal_expr(decl.expr, env)
        elif isinstance(decl, FiltDecl):
            env.objects[decl.name] = eval_filt_expr(decl.expr, env)
    return env


def eval_ideal_expr(expr, env: _Env) -> MonomialIdeal:
    if isinstance(expr, Name):
        return env.objects[expr.value]
    if isinstance(expr, MaxIdeal):
        return maximal_ideal(env.ring(expr.ring))
    if isinstance(expr, IdealLiteral):
        return minimalize(env.ring(expr.ring), expr.monomials)
    if isinstance(expr, Call):
        if expr.fn == "power":
            return power(eval_ideal_expr(expr.args[0], env), expr.args[1])
        if expr.fn == "saturate":
            return saturate(eval_ideal_expr(expr.args[0], env))
        left = eval_ideal_expr(expr.args[0], env)
        right = eval_ideal_expr(expr.args[1], env)
        ops = {"colon": colon, "sum": sum_ideals,
               "product": product, "intersect": intersect}
        return ops[expr.fn](left, right)
    raise TypeError(f"not an ideal expression: {expr!r}")


def eval_filt_expr(expr, env: _Env) -> Filtration:
    if isinstance(expr, Name):
        return env.objects[expr.value]
    if isinstance(expr, ValFilt):
        vals = [WeightValuation(s.weights, s.coeff) for s in expr.specs]
        return discrete_valued_filtration(env.ring(expr.ring), vals)
    if isinstance(expr, Call):
        if expr.fn == "powers":
            return power_filtration(eval_ideal_expr(expr.args[0], env))
        if expr.fn == "colonfam":
            base = eval_filt_expr(expr.args[0], env)
            mult = eval_ideal_expr(expr.args[1], env)
            return colon_family(base, mult, expr.args[2])
    raise TypeError(f"not a filtration expression: {expr!r}")


def run_session(session: Session, fmt: str = "csv",
                defaults: RunDefaults = RunDefaults()) -> RunResult:
    """Execute all commands in order; one report per command.

    Exit code 0 on success, 3 on a computation error (with a
    machine-readable error record), 4 when reproduce-example found
    mismatches.
    """
    if fmt not in ("csv", "json"):
        raise ValueError("format must be csv or json")
    result = RunResult(EXIT_OK)
    render = render_csv if fmt == "csv" else render_json
    ext = fmt
    rings = {d.name: d.var_names for d in session.decls if isinstance(d, RingDecl)}
    any_mismatch = False
    try:
        with window_bound(defaults.bound):
            env = build_environment(session)
            for index, cmd in enumerate(session.commands, start=1):
                report = _run_command(cmd, index, env, rings, defaults)
                filename = f"{index:03d}-{cmd.verb}.{ext}"
                if fmt == "csv":
                    report = Report(report.name, report.verb, report.title,
                                    report.columns, report.rows, report.summary,
                                    None, report.ok)
                result.reports.append((filename, render(report)))
                any_mismatch = any_mismatch or not report.ok
    except EpsmultError as exc:
        result.exit_code = EXIT_COMPUTE
        result.error = exc.record()
        return result
    except (ValueError, KeyError, TypeError) as exc:
        result.exit_code = EXIT_COMPUTE
        result.error = {"code": "computation-error", "message": str(exc)}
        return result
    if any_mismatch:
        result.exit_code = EXIT_MISMATCH
    return result


def _opt(cmd: Command, key: str, defaults: RunDefaults, builtin: int) -> int:
    options = dict(cmd.options)
    if key in options:
        return options[key]
    if key == "mmax" and defaults.mmax is not None:
        return defaults.mmax
    if key == "nmax" and defaults.nmax is not None:
        return defaults.nmax
    return builtin


def _run_command(cmd: Command, index: int, env: _Env, rings: dict,
                 defaults: RunDefaults) -> Report:
    options = dict(cmd.options)
    bound = options.get("bound")
    with window_bound(bound) if bound is not None else _noop():
        return _dispatch(cmd, index, env, rings, defaults)


@contextmanager
def _noop():
    yield


def _dispatch(cmd: Command, index: int, env: _Env, rings: dict,
              defaults: RunDefaults) -> Report:
    verb = cmd.verb
    name = f"{index:03d}-{verb}"
    title = " ".join(_format_expr(t, rings) for t in cmd.targets)
    options = dict(cmd.options)
    threshold = options.get("threshold", POSITIVITY_THRESHOLD)
    mmax = _opt(cmd, "mmax", defaults, _DEFAULT_MMAX.get(verb, 8))
    nmax = _opt(cmd, "nmax", defaults, _DEFAULT_NMAX.get(verb, 8))

    if verb == "epsilon":
        filt = eval_filt_expr(cmd.targets[0], env)
        est = epsilon_sequence(filt, mmax)
        return Report(name, verb, title, ("index", "raw_length", "normalized_value"),
                      _sequence_rows(est), _estimate_summary(est, threshold),
                      _prefix_json(filt))
    if verb == "epsilon-colon":
        filt = eval_filt_expr(cmd.targets[0], env)
        mult = eval_ideal_expr(cmd.targets[1], env)
        est = epsilon_colon_sequence(filt, mult, nmax)
        return Report(name, verb, title, ("index", "raw_length", "normalized_value"),
                      _sequence_rows(est), _estimate_summary(est, threshold),
                      _prefix_json(filt))
    if verb == "amao":
        big = eval_ideal_expr(cmd.targets[0], env)
        small = eval_ideal_expr(cmd.targets[1], env)
        est = amao_pair_sequence(big, small, mmax)
        return Report(name, verb, title, ("index", "raw_length", "normalized_value"),
                      _sequence_rows(est), _estimate_summary(est, POSITIVITY_THRESHOLD))
    if verb == "volume-table":
        ideal = eval_ideal_expr(cmd.targets[0], env)
        mult = eval_ideal_expr(cmd.targets[1], env)
        table = volume_formula_table(ideal, mult, nmax, mmax)
        rows = tuple(
            (str(r.n), _frac(r.inner.limit), _frac(r.ratio)) for r in table.rows
        )
        summary = {
            "outer_limit": _frac(table.outer.limit),
            "outer_model": table.outer.model,
            "outer_residual": _frac(table.outer.residual),
            "inner_residuals": [_frac(r.inner.residual) for r in table.rows],
        }
        return Report(name, verb, title, ("n", "inner_estimate", "ratio"), rows, summary)
    if verb == "spread":
        ideal = eval_ideal_expr(cmd.targets[0], env)
        res = analytic_spread(ideal)
        return Report(name, verb, title, ("value", "stabilized"),
                      ((str(res.value), str(res.stabilized).lower()),),
                      {"value": res.value, "stabilized": res.stabilized})
    if verb == "spread-family":
        filt = eval_filt_expr(cmd.targets[0], env)
        res = analytic_spread_family(filt, mmax)
        return Report(name, verb, title, ("value", "stabilized"),
                      ((str(res.value), str(res.stabilized).lower()),),
                      {"value": res.value, "stabilized": res.stabilized},
                      _prefix_json(filt))
    if verb == "check-ar":
        filt = eval_filt_expr(cmd.targets[0], env)
        rows = []
        summary: dict = {"m_max": mmax}
        if "r" in options:
            rep = check_ar(filt, options["r"], mmax)
            rows.append(_ar_row(rep))
            summary["holds"] = rep.holds
        else:
            best = None
            for r in range(1, options["rmax"] + 1):
                rep = check_ar(filt, r, mmax)
                rows.append(_ar_row(rep))
                if rep.holds:
                    best = r
                    break
            summary["min_r"] = best
        return Report(name, verb, title, ("r", "holds", "first_failure_m", "witness"),
                      tuple(rows), summary, _prefix_json(filt))
    if verb == "check-wg":
        filt = eval_filt_expr(cmd.targets[0], env)
        rep = check_weakly_graded(filt, options["c"], mmax)
        if rep.violation is None:
            row = ("true", "", "", "", "")
        else:
            m, n, g, h = rep.violation
            names = rings.get(_ring_name(cmd.targets[0]), None)
            row = ("false", str(m), str(n), _mono(g, names), _mono(h, names))
        return Report(name, verb, title, ("holds", "m", "n", "gen_1", "gen_2"),
                      (row,), {"holds": rep.holds}, _prefix_json(filt))
    if verb == "probe-noetherian":
        filt = eval_filt_expr(cmd.targets[0], env)
        rep = noetherian_probe(filt, mmax)
        rows = tuple((str(m), str(w)) for m, w in rep.evidence)
        return Report(name, verb, title, ("index", "new_generator_weight"), rows,
                      {"verdict": rep.verdict}, _prefix_json(filt))
    if verb == "reproduce-example":
        return reproduce_example(name, mmax=mmax, nmax=nmax)
    raise ValueError(f"unknown verb {verb!r}")


def _ring_name(expr) -> str | None:
    if isinstance(expr, (MaxIdeal, IdealLiteral, ValFilt)):
        return expr.ring
    if isinstance(expr, Call):
        for a in expr.args:
            if not isinstance(a, int):
                found = _ring_name(a)
                if found:
                    return found
    return None


def _mono(v, names) -> str:
    if names is None:
        return "".join(str(x) for x in v)
    return format_monomial(v, names)


def _ar_row(rep) -> tuple[str, str, str, str]:
    if rep.holds:
        return (str(rep.r_tested), "true", "", "")
    m, witness = rep.first_failure
    return (str(rep.r_tested), "false", str(m),
            "(" + " ".join(str(x) for x in witness) + ")")


# the worked-example regression ------------------------------------------


def reproduce_example(name: str = "reproduce-example", mmax: int = 6,
                      nmax: int = 4, ideal_gens=((2, 0), (1, 2))) -> Report:
    """Rebuild the k[x,y^2,y^3] fixture and compare against closed forms.

    Checks, on the grid n <= nmax, m <= mmax: saturation lengths m(m+1),
    the colon identity (I^{nm} : m^m) = x^{nm} J^{nm-m} m, torsion lengths
    (nm-m+1)^2, the epsilon limit 2, the family limits 2(n-1)^2, the outer
    ratio tending to 2, spreads, and the Noetherian probes.  ``ideal_gens``
    exists for negative controls.
    """
    if mmax < 6 or nmax < 4:
        raise ValueError("reproduce-example needs mmax >= 6 and nmax >= 4")
    ring = semigroup_ring(((1, 0), (0, 2), (0, 3)), ("x", "y"))
    ideal = minimalize(ring, ideal_gens)
    mx = maximal_ideal(ring)
    base = minimalize(ring, [(1, 0), (0, 2)])
    rows: list[tuple[str, str, str, str]] = []

    def cell(value) -> str:
        if isinstance(value, list):
            return "[" + " ".join(str(x) for x in value) + "]"
        return str(value)

    def check(label: str, expected, computed) -> None:
        status = "pass" if expected == computed else "FAIL"
        rows.append((label, cell(expected), cell(computed), status))

    powers_of = {0: power(ideal, 0)}

    def ipow(k: int) -> MonomialIdeal:
        if k not in powers_of:
            powers_of[k] = product(ipow(k - 1), ideal)
        return powers_of[k]

    for m in range(1, mmax + 1):
        check(f"h0(I^{m})", m * (m + 1), h0_length(ipow(m)).count)
    for n in range(1, nmax + 1):
        for m in range(1, mmax + 1):
            got = colon_power(ipow(n * m), mx, m)
            expected = product(
                product(minimalize(ring, [(n * m, 0)]), power(base, n * m - m)), mx
            )
            check(f"colon(I^{n * m}:m^{m})=x^{n * m}J^{n * m - m}m",
                  True, equals(got, expected))
            check(f"h0(F({n})_{m})", (n * m - m + 1) ** 2, h0_length(got).count)

    es_m = max(12, mmax)
    filt = power_filtration(ideal)
    est = epsilon_sequence(filt, es_m)
    check("eps(I) limit", True, abs(est.limit - 2) < Fraction(1, 1000))
    check("eps(I) residual<1/1000", True, est.residual < Fraction(1, 1000))

    ratios = []
    for n in range(1, nmax + 1):
        fam = colon_family(filt, mx, n)
        inner = epsilon_sequence(fam, es_m)
        ratios.append(inner.limit / n ** 2)
        if n >= 2:
            target = 2 * (n - 1) ** 2
            check(f"eps(F({n}))~{target} (2%)", True,
                  abs(inner.limit - target) <= Fraction(target) * Fraction(1, 50))
    table = volume_formula_table(ideal, mx, nmax, es_m)
    check("outer ratio ~2 (10%)", True,
          abs(table.outer.limit - 2) <= Fraction(1, 5))
    check("ratios nondecreasing", True,
          all(a <= b for a, b in zip(ratios, ratios[1:])))

    check("spread(I)", 2, analytic_spread(ideal).value)
    check("spread-family(F(2))", 2,
          analytic_spread_family(colon_family(filt, mx, 2), mmax).value)
    check("probe powers(I)", "consistent-with-noetherian",
          noetherian_probe(filt, mmax).verdict)
    for n in range(1, nmax + 1):
        rep = noetherian_probe(colon_family(filt, mx, n), mmax)
        check(f"probe F({n})", "non-noetherian-evidence", rep.verdict)
        check(f"witness weights F({n})",
              [2 * m * n - m + 1 for m in range(1, mmax + 1)],
              [w for _, w in rep.evidence])

    ok = all(r[3] == "pass" for r in rows)
    summary = {
        "checks": len(rows),
        "failures": sum(1 for r in rows if r[3] == "FAIL"),
        "eps_limit": _frac(est.limit),
        "outer_limit": _frac(table.outer.limit),
    }
    return Report(name, "reproduce-example", "worked example",
                  ("check", "expected", "computed", "status"),
                  tuple(rows), summary, None, ok)
