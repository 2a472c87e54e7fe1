"""Command-line front end.

Every subcommand writes one table: CSV with a single header row (default)
or JSON with the same fields. Floats carry 17 significant digits, complex
values become ``name_re,name_im`` columns in CSV and ``[re, im]`` in JSON.

Parameters come from flags and an optional flat ``key=value`` config file
(``--config``); flags win. Exit codes: 0 ok, 2 usage, 3 numerical failure,
4 verification failure.
"""

import argparse
import io
import json
import math
import sys

import numpy as np

from . import analysis, chain, classical, quantum_map, verify
from .errors import NoZerosError, NumericalError, ParameterError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_VERIFY = 4


class UsageError(Exception):
    pass


# -- formatting -------------------------------------------------------------------

def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x) + 0.0  # folds -0.0 into 0.0
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    if x is None:
        return ""
    return str(x)


def _json_value(x):
    if isinstance(x, (complex, np.complexfloating)):
        return "[" + _json_value(x.real) + ", " + _json_value(x.imag) + "]"
    if x is None:
        return "null"
    if isinstance(x, (float, np.floating)) and not math.isfinite(x):
        return "null"
    if isinstance(x, str):
        return json.dumps(x)
    return _fmt(x)


def render(columns, rows, fmt="csv"):
    """Serialize ``rows`` (sequences aligned with ``columns``) as CSV or JSON text."""
    buf = io.StringIO()
    if fmt == "csv":
        header = []
        for name, value in zip(columns, rows[0] if rows else [None] * len(columns)):
            if isinstance(value, (complex, np.complexfloating)):
                header += [name + "_re", name + "_im"]
            else:
                header.append(name)
        buf.write(",".join(header) + "\n")
        for row in rows:
            cells = []
            for value in row:
                if isinstance(value, (complex, np.complexfloating)):
                    cells += [_fmt(float(value.real)), _fmt(float(value.imag))]
                else:
                    cells.append(_fmt(value))
            buf.write(",".join(cells) + "\n")
    else:
        buf.write("{\"columns\": " + json.dumps(list(columns)) + ", \"rows\": [")
        for k, row in enumerate(rows):
            fields = ", ".join(json.dumps(c) + ": " + _json_value(v) for c, v in zip(columns, row))
            buf.write(("\n  " if k == 0 else ",\n  ") + "{" + fields + "}")
        buf.write("\n]}\n" if rows else "]}\n")
    return buf.getvalue()


# -- config -----------------------------------------------------------------------

def read_config(path):
    """Flat ``key=value`` file; ``#`` starts a comment, dashes in keys map to underscores."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


def _float_list(text):
    try:
        out = [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def _finite(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return x


def _count(text):
    try:
        x = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if x < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {x}")
    return x


# -- subcommands ------------------------------------------------------------------

def _p1d(a):
    return classical.ClassicalIsing1DParams(beta=a.beta, J=a.J, h=a.h, N=a.N)


def _p2d(a):
    return classical.ClassicalIsing2DParams(beta_cl=a.beta, J1=a.J1, J2=a.J2, h_cl=a.h, N=a.N, M=a.M)


def _pchain(a):
    return chain.QuantumIsingChainParams(N=a.N, J=a.J, g=a.g, h=a.h)


def cmd_partition1d(a):
    p = _p1d(a)
    row = [p.N, p.beta, p.J, p.h, classical.partition_1d_closed(p), classical.partition_1d_transfer(p)]
    cols = ["N", "beta", "J", "h", "Z_closed", "Z_transfer"]
    if p.N <= classical.MAX_BRUTE_SITES:
        cols.append("Z_brute")
        row.append(classical.partition_1d_brute(p))
    return cols, [row]


def cmd_zeros1d(a):
    p = classical.ClassicalIsing1DParams(beta=a.beta, J=a.J, h=0.0, N=a.N)
    zs = classical.yang_lee_zeros_1d(p)
    rows = [[m, h, float(f.real), float(f.imag)]
            for m, (h, f) in enumerate(zip(zs.zeros, zs.fugacity_points))]
    return ["m", "h_m", "fugacity_re", "fugacity_im"], rows


def cmd_loschmidt0d(a):
    times = np.linspace(a.tmin, a.tmax, a.points)
    values = quantum_map.trace_apt(a.hx, a.hz, times)
    return ["t", "G_re", "G_im", "G_abs"], [
        [t, float(v.real), float(v.imag), float(abs(v))] for t, v in zip(times, values)]


def cmd_map0d(a):
    p = _p1d(a)
    q = quantum_map.map_params_continuum(p, a.t)
    cls = quantum_map.classify_regime(q)
    return (["A", "theta", "h_x", "h_z", "h_c", "regime", "period", "deviation", "bound"],
            [[q.A, q.theta, q.h_x, q.h_z, classical.critical_field_1d(p.beta, p.J), cls.regime,
              cls.period, quantum_map.continuum_deviation(p, a.t), quantum_map.deviation_bound(p)]])


def cmd_bch(a):
    p = _p1d(a)
    orders = [None] if a.order == "exact" else [int(a.order)] if a.order != "all" else [None, 1, 2, 3]
    rows = []
    for order in orders:
        if order is None:
            c = quantum_map.bch_hamiltonian_exact(p, a.t)
        else:
            c = quantum_map.bch_hamiltonian_series(p, a.t, order)
        cls = quantum_map.classify_regime(c)
        rows.append(["exact" if order is None else str(order), complex(c.hx_p), complex(c.hy_p),
                     complex(c.hz_p), cls.discriminant, cls.regime, cls.period])
    return ["order", "hx", "hy", "hz", "discriminant", "regime", "period"], rows


def cmd_partition2d(a):
    p = _p2d(a)
    cols, row = ["N", "M", "beta", "J1", "J2", "h"], [p.N, p.M, p.beta_cl, p.J1, p.J2, p.h_cl]
    if a.method in ("transfer", "both"):
        cols.append("Z_transfer")
        row.append(classical.partition_2d_transfer(p))
    if a.method in ("brute", "both"):
        cols.append("Z_brute")
        row.append(classical.partition_2d_brute(p))
    return cols, [row]


def cmd_loschmidt_chain(a):
    times = np.linspace(a.tmin, a.tmax, a.points)
    s = chain.loschmidt_chain(_pchain(a), times, method=a.method, rescale=a.rescale)
    return ["t", "G_re", "G_im", "G_abs"], [
        [t, float(v.real), float(v.imag), float(abs(v))] for t, v in zip(s.times, s.values)]


def cmd_dqpt(a):
    times = np.linspace(a.tmin, a.tmax, a.points)
    if a.source == "0d":
        s = quantum_map.loschmidt_apt_series(a.hx, a.hz, times)
    else:
        s = chain.loschmidt_chain(_pchain(a), times, rescale=True)
    res = chain.detect_dqpt(s, a.eps_zero)
    period = math.nan if res.period_estimate is None else res.period_estimate
    return ["k", "t_c", "G_abs_min", "period"], [
        [k, t, m, period] for k, (t, m) in enumerate(zip(res.critical_times, res.min_magnitudes))]


def _read_samples(path):
    try:
        data = np.genfromtxt(path, delimiter=",", names=True)
    except OSError as exc:
        raise UsageError(f"cannot read samples {path}: {exc}") from None
    if data.dtype.names is None or not {"h", "T"} <= set(data.dtype.names):
        raise UsageError("sample file needs a header with columns h and T")
    return [analysis.PeriodSample(float(h), float(T), "input") for h, T in zip(np.atleast_1d(data["h"]),
                                                                                np.atleast_1d(data["T"]))]


def cmd_fit_period(a):
    if a.input:
        samples = _read_samples(a.input)
    elif a.source == "0d":
        if a.h_values is None:
            raise UsageError("--h-values is required for --source 0d")
        samples = [analysis.PeriodSample(h, quantum_map.dqpt_period_apt(a.hx, h) or math.nan,
                                         "closed-form-0D") for h in a.h_values if abs(h) > abs(a.hx)]
    else:
        if a.h_values is None:
            raise UsageError("--h-values is required for --source chain")
        samples = analysis.chain_period_samples(_pchain(a), a.h_values, t_max=a.tmax, points=a.points)
    fit = analysis.fit_period_model(samples)
    return (["samples", "alpha", "h_c_fit", "residual_norm", "exponent", "iterations", "flagged"],
            [[len(samples), fit.alpha, fit.h_c_fit, fit.residual_norm, fit.exponent,
              fit.iterations, fit.flagged]])


def cmd_scan_hc(a):
    if a.g_values is not None:
        gs = a.g_values
    else:
        gs = list(np.linspace(a.gmin, a.gmax, a.gpoints))
    h_grid = np.linspace(a.hmin, a.hmax, a.hpoints)
    base = chain.QuantumIsingChainParams(N=a.N, J=a.J, g=1.0, h=0.0)
    res = analysis.critical_field_scan(gs, base, h_grid, a.tmax, points=a.points,
                                       rel_tol=a.rel_tol, threads=a.threads)
    return ["g", "h_c"], [[g, h] for g, h in res]


def cmd_verify(a):
    results = verify.run_all(a.checks)
    return ["check", "status", "detail"], [[n, "PASS" if ok else "FAIL", d] for n, ok, d in results]


# -- parser -----------------------------------------------------------------------

def _common(sp):
    sp.add_argument("--config", help="flat key=value parameter file; flags override it")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--output", "-o", help="write here instead of stdout")


def _add(sp, *names, **kw):
    for name in names:
        sp.add_argument("--" + name.replace("_", "-"), dest=name, **kw)


def build_parser():
    parser = argparse.ArgumentParser(prog="yldqpt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    specs = {}

    def command(name, fn, required, help_text):
        sp = sub.add_parser(name, help=help_text)
        _common(sp)
        sp.set_defaults(func=fn)
        specs[name] = required
        return sp

    sp = command("partition1d", cmd_partition1d, ("beta", "J", "h", "N"), "1D partition function, three ways")
    _add(sp, "beta", "J", "h", type=_finite)
    _add(sp, "N", type=_count)

    sp = command("zeros1d", cmd_zeros1d, ("beta", "J", "N"), "Yang-Lee zeros of the 1D chain")
    _add(sp, "beta", "J", type=_finite)
    _add(sp, "N", type=_count)

    sp = command("loschmidt0d", cmd_loschmidt0d, ("hx", "hz", "tmax"), "Tr exp(-i t H_APT) on a grid")
    _add(sp, "hx", "hz", "tmax", type=_finite)
    _add(sp, "tmin", type=_finite, default=0.0)
    _add(sp, "points", type=_count, default=chain.DEFAULT_POINTS)

    sp = command("map0d", cmd_map0d, ("beta", "J", "h", "N", "t"), "continuum map of a 1D chain")
    _add(sp, "beta", "J", "h", "t", type=_finite)
    _add(sp, "N", type=_count)

    sp = command("bch", cmd_bch, ("beta", "J", "h", "N", "t"), "effective non-Hermitian Hamiltonian")
    _add(sp, "beta", "J", "h", "t", type=_finite)
    _add(sp, "N", type=_count)
    _add(sp, "order", choices=("exact", "1", "2", "3", "all"), default="all")

    sp = command("partition2d", cmd_partition2d, ("beta", "J1", "J2", "h", "N", "M"), "2D partition function")
    _add(sp, "beta", "J1", "J2", "h", type=_finite)
    _add(sp, "N", "M", type=_count)
    _add(sp, "method", choices=("transfer", "brute", "both"), default="both")

    for name, fn, text in (("loschmidt-chain", cmd_loschmidt_chain, "chain Loschmidt amplitude"),
                           ("dqpt", cmd_dqpt, "critical times of the amplitude")):
        sp = command(name, fn, ("tmax",), text)
        _add(sp, "N", type=_count, default=chain.DEFAULT_SITES)
        _add(sp, "J", type=_finite, default=1.0)
        _add(sp, "g", type=_finite, default=1.0)
        _add(sp, "h", type=_finite, default=0.0)
        _add(sp, "tmax", type=_finite)
        _add(sp, "tmin", type=_finite, default=0.0)
        _add(sp, "points", type=_count, default=chain.DEFAULT_POINTS)
    sub.choices["loschmidt-chain"].add_argument("--method", choices=("eig", "expm"), default="eig")
    sub.choices["loschmidt-chain"].add_argument("--rescale", action="store_true")
    sp = sub.choices["dqpt"]
    _add(sp, "source", choices=("chain", "0d"), default="chain")
    _add(sp, "hx", "hz", type=_finite, default=0.0)
    _add(sp, "eps_zero", type=_finite, default=1e-6)

    sp = command("fit-period", cmd_fit_period, (), "fit T = alpha / sqrt(h^2 - h_c^2)")
    _add(sp, "source", choices=("chain", "0d"), default="chain")
    _add(sp, "input", help="CSV with columns h and T")
    _add(sp, "h_values", type=_float_list)
    _add(sp, "hx", type=_finite, default=1.0)
    _add(sp, "N", type=_count, default=chain.DEFAULT_SITES)
    _add(sp, "J", type=_finite, default=1.0)
    _add(sp, "g", type=_finite, default=2.0)
    _add(sp, "h", type=_finite, default=0.0)
    _add(sp, "tmax", type=_finite, default=60.0)
    _add(sp, "points", type=_count, default=chain.DEFAULT_POINTS)

    sp = command("scan-hc", cmd_scan_hc, (), "critical field of the chain against g")
    _add(sp, "g_values", type=_float_list)
    _add(sp, "gmin", type=_finite, default=0.1)
    _add(sp, "gmax", type=_finite, default=2.0)
    _add(sp, "gpoints", type=_count, default=20)
    _add(sp, "hmin", type=_finite, default=0.02)
    _add(sp, "hmax", type=_finite, default=1.0)
    _add(sp, "hpoints", type=_count, default=50)
    _add(sp, "N", type=_count, default=chain.DEFAULT_SITES)
    _add(sp, "J", type=_finite, default=1.0)
    _add(sp, "tmax", type=_finite, default=60.0)
    _add(sp, "points", type=_count, default=chain.DEFAULT_POINTS)
    _add(sp, "rel_tol", type=_finite, default=1e-3)
    _add(sp, "threads", type=int, default=None)

    sp = command("verify", cmd_verify, (), "run the self-check suite")
    sp.add_argument("--checks", type=lambda s: [c for c in s.split(",") if c],
                    help="comma-separated subset of: " + ", ".join(n for n, _ in verify.CHECKS))
    return parser, specs


def _apply_config(parser, argv, args):
    """Fill values from ``args.config`` that were not given as flags."""
    if not args.config:
        return args
    sp = parser._subparsers._group_actions[0].choices[args.command]
    actions = {act.dest: act for act in sp._actions}
    given = set()
    for token in argv:
        if token.startswith("--"):
            given.add(token[2:].split("=", 1)[0].replace("-", "_"))
    for key, raw in read_config(args.config).items():
        if key not in actions or key in ("config", "help"):
            raise UsageError(f"unknown config key {key!r} for {args.command}")
        if key in given:
            continue
        act = actions[key]
        if isinstance(act, argparse._StoreTrueAction):
            value = raw.lower() in ("1", "true", "yes", "on")
        else:
            try:
                value = act.type(raw) if act.type else raw
            except argparse.ArgumentTypeError as exc:
                raise UsageError(f"config key {key}: {exc}") from None
            if act.choices is not None and value not in act.choices:
                raise UsageError(f"config key {key}: {value!r} not in {list(act.choices)}")
        setattr(args, key, value)
    return args


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, specs = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        args = _apply_config(parser, argv, args)
        missing = [k for k in specs[args.command] if getattr(args, k, None) is None]
        if missing:
            raise UsageError("missing required parameter(s): " + ", ".join("--" + m for m in missing))
        if getattr(args, "points", 2) < 2:
            raise UsageError("--points must be at least 2")
        columns, rows = args.func(args)
    except UsageError as exc:
        print(f"yldqpt {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParameterError as exc:
        print(f"yldqpt {args.command}: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, NoZerosError) as exc:
        print(f"yldqpt {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    text = render(columns, rows, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "verify" and not all(r[1] == "PASS" for r in rows):
        return EXIT_VERIFY
    return EXIT_OK
