"""Command-line front end.

Every subcommand writes CSV (fixed header, 17 significant digits) or JSON.
A flat JSON file given with --config supplies defaults; explicit flags win.
Exit codes: 0 success, 1 computational failure, 2 usage error.  Failures
also print one JSON object on stderr.
"""
import argparse
import csv
import io
import json
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import acceptance, chars, lfunc, padic, phaseop, spinchain, toeplitz
from ._util import is_prime, ordered_map
from .errors import PoleError, TruncationWarning, ZetaspinError

FORMATS = ("csv", "json", "plotdata")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class Grid:
    start: float
    stop: float
    steps: int

    def values(self):
        return np.linspace(self.start, self.stop, self.steps)


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    output: str = None
    format: str = "csv"
    plot_data: str = None


def _sites(text):
    if isinstance(text, (list, tuple)):
        return tuple(int(x) for x in text)
    try:
        return tuple(int(x) for x in str(text).split(",") if x.strip())
    except ValueError:
        raise UsageError(f"--sites: expected comma-separated integers, got {text!r}")


def _grid(text):
    if isinstance(text, dict):
        parts = [text.get("start"), text.get("stop"), text.get("steps")]
    else:
        parts = str(text).split(":")
    if len(parts) != 3 or any(x is None for x in parts):
        raise UsageError(f"grid must be start:stop:steps, got {text!r}")
    try:
        g = Grid(float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError:
        raise UsageError(f"grid must be start:stop:steps, got {text!r}")
    if g.steps < 1:
        raise UsageError("grid steps must be >= 1")
    return g


# name -> (type, default, help); the same names are accepted as config keys
_CHAR = {"modulus": (int, None, "character modulus"), "char_index": (int, 0, "character index in the table")}
COMMANDS = {
    "chars": {"modulus": (int, None, "modulus k"), "json": (bool, False, "JSON output (the default)")},
    "euler": {
        "re": (float, 2.0, "Re s"), "im": (float, 0.0, "Im s"),
        "prime_cutoff": (int, 1000, "largest prime"), "series_length": (int, 10**6, "oracle terms"), **_CHAR,
    },
    "partition-ratio": {
        "beta_re": (float, -2.0, "Re beta"), "beta_im": (float, 0.0, "Im beta"), "n_cut": (int, 1, "occupation cutoff"),
        "prime_cutoff": (int, 1000, "largest prime"), **_CHAR,
    },
    "fisher-zeros": {"site_prime": (int, 2, "site prime"), "n_cut": (int, 1, "occupation cutoff"), "field": (float, None, "field B (default ln p)")},
    "zeta-zero": {
        "re": (float, 0.5, "seed Re"), "im": (float, 14.0, "seed Im"), "tol": (float, 1e-12, "target |zeta|"),
        "series_length": (int, 2000, "eta series terms"),
    },
    "trace": {
        "sites": (_sites, (2, 3), "comma-separated primes"), "n_cut": (int, 1, "occupation cutoff"),
        "beta_re": (float, 0.0, "Re beta"), "beta_im": (float, 0.0, "Im beta"), **_CHAR,
    },
    "covariance-scan": {
        "site_prime": (int, 2, "site prime"), "field": (float, None, "field B (default ln p)"), "n_cut": (int, 1, "occupation cutoff"),
        "beta_re": (float, 0.0, "Re beta, fixed"), "beta_im": (_grid, None, "Im beta grid start:stop:steps"), **_CHAR,
    },
    "resolvent-scan": {
        "sites": (_sites, (2, 3), "comma-separated primes"), "n_cut": (int, 1, "occupation cutoff"),
        "phi": (_grid, None, "phi grid start:stop:steps"), **_CHAR,
    },
    "toeplitz-spectrum": {
        "n_cut": (int, 63, "cutoff (matrix size n+1, or exponent cutoff with --total)"),
        "total": (bool, False, "use the total phase on the integer basis"),
        "prime_cutoff": (int, 3, "largest prime for --total"), "method": (str, "jacobi", "jacobi or lapack"),
        "summary": (str, None, "also write the summary JSON here"),
    },
    "padic-check": {
        "prime": (int, 2, "prime p"), "alpha_re": (float, 1.0, "Re alpha"), "alpha_im": (float, 0.0, "Im alpha"),
        "scale": (int, 0, "wavelet label n"), "points": (int, 6, "support sample points"),
    },
    "verify": {"criterion": (int, None, "criterion number (repeatable; default all)")},
}


def build_parser():
    parser = _Parser(prog="zetaspin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, opts in COMMANDS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat JSON file of defaults")
        p.add_argument("--output", help="output path (default stdout)")
        p.add_argument("--format", choices=FORMATS, default=None)
        p.add_argument("--plot-data", dest="plot_data", help="also write a two-column data file")
        for key, (typ, _, hlp) in opts.items():
            flag = "--" + key.replace("_", "-")
            if typ is bool:
                p.add_argument(flag, dest=key, action="store_true", default=None, help=hlp)
            elif name == "verify":
                p.add_argument(flag, dest=key, type=int, action="append", default=None, help=hlp)
            else:
                p.add_argument(flag, dest=key, type=str, default=None, help=hlp)
        if name == "partition-ratio":
            # --re/--im are accepted as aliases of --beta-re/--beta-im
            p.add_argument("--re", dest="beta_re", type=str, default=None, help=argparse.SUPPRESS)
            p.add_argument("--im", dest="beta_im", type=str, default=None, help=argparse.SUPPRESS)
    return parser


def _coerce(key, typ, value):
    if value is None or typ is bool:
        return value if typ is not bool else bool(value)
    if key == "criterion":
        return [int(v) for v in (value if isinstance(value, list) else [value])]
    try:
        return typ(value)
    except (TypeError, ValueError):
        raise UsageError(f"--{key.replace('_', '-')}: invalid value {value!r}")


def parse_args(argv):
    ns = build_parser().parse_args(list(argv))
    opts = COMMANDS[ns.command]
    merged = {k: d for k, (_, d, _) in opts.items()}
    extra = {"output": None, "format": None, "plot_data": None}
    if ns.config:
        try:
            with open(ns.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"--config: cannot read {ns.config}: {exc}")
        if not isinstance(data, dict):
            raise UsageError("--config: expected a flat JSON object")
        for raw, value in data.items():
            key = raw.lstrip("-").replace("-", "_")
            if key in ("command", "config"):
                continue
            if key in extra:
                extra[key] = value
            elif key in opts:
                merged[key] = value
            else:
                raise UsageError(f"--config: unknown key {raw!r} for {ns.command}")
    for key in opts:
        if getattr(ns, key, None) is not None:
            merged[key] = getattr(ns, key)
    for key in extra:
        if getattr(ns, key) is not None:
            extra[key] = getattr(ns, key)
    params = {k: _coerce(k, opts[k][0], v) for k, v in merged.items()}
    fmt = extra["format"] or ("json" if ns.command == "chars" else "csv")
    if fmt not in FORMATS:
        raise UsageError(f"--format: unknown format {fmt!r}")
    cfg = RunConfig(ns.command, params, extra["output"], fmt, extra["plot_data"])
    _validate(cfg)
    return cfg


def _validate(cfg):
    p = cfg.params
    for key in ("n_cut", "prime_cutoff", "series_length", "points"):
        if key in p and p[key] is not None and p[key] < 1:
            raise UsageError(f"--{key.replace('_', '-')} must be >= 1")
    if "prime_cutoff" in p and p["prime_cutoff"] < 2:
        raise UsageError("--prime-cutoff must be >= 2")
    if "sites" in p:
        bad = [s for s in p["sites"] if not is_prime(s)]
        if bad or not p["sites"]:
            raise UsageError(f"--sites: not prime: {bad}")
    for key in ("site_prime", "prime"):
        if key in p and not is_prime(p[key]):
            raise UsageError(f"--{key.replace('_', '-')}: {p[key]} is not prime")
    if "tol" in p and not p["tol"] > 0:
        raise UsageError("--tol must be positive")
    if cfg.command == "chars" and (p["modulus"] is None or p["modulus"] < 1):
        raise UsageError("--modulus: a positive modulus is required")
    if p.get("modulus") is not None and cfg.command != "chars":
        if p["modulus"] < 1:
            raise UsageError("--modulus must be >= 1")
        if not 0 <= p["char_index"] < chars.totient(p["modulus"]):
            raise UsageError(f"--char-index: out of range for modulus {p['modulus']}")
    if cfg.command == "covariance-scan" and p["beta_im"] is None:
        raise UsageError("--beta-im: a grid start:stop:steps is required")
    if cfg.command == "resolvent-scan" and p["phi"] is None:
        raise UsageError("--phi: a grid start:stop:steps is required")
    if cfg.command == "toeplitz-spectrum" and p["method"] not in ("jacobi", "lapack"):
        raise UsageError("--method: expected jacobi or lapack")
    if cfg.command == "verify" and p["criterion"]:
        bad = [n for n in p["criterion"] if n not in acceptance.CRITERIA]
        if bad:
            raise UsageError(f"--criterion: unknown criterion {bad}")


# --- output ------------------------------------------------------------------


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % x
    return str(x)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _plot(xs, ys):
    return "".join(f"{_fmt(float(x))} {_fmt(float(y))}\n" for x, y in zip(xs, ys))


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


@dataclass
class Table:
    header: list
    rows: list
    plot_x: int = 0
    plot_y: object = None  # column index, or a callable(row) -> float

    def render(self, fmt):
        if fmt == "csv":
            return _csv(self.header, self.rows)
        if fmt == "json":
            return _json([{h: (None if _isnan(v) else v) for h, v in zip(self.header, r)} for r in self.rows])
        return self.plot_text()

    def plot_text(self):
        ys = [self.plot_y(r) if callable(self.plot_y) else r[self.plot_y or 1] for r in self.rows]
        return _plot([r[self.plot_x] for r in self.rows], ys)


def _isnan(v):
    return isinstance(v, float) and np.isnan(v)


def _chi(p):
    if p.get("modulus") is None:
        return None
    return chars.character(p["modulus"], p["char_index"])


def _cplx(z):
    return [float(z.real), float(z.imag)]


# --- commands ----------------------------------------------------------------


def cmd_chars(p, fmt):
    table = chars.build_character_table(p["modulus"])
    if fmt == "json":
        return _json(table.to_json())
    data = table.to_json()["characters"]
    rows = [[i, r, "" if a is None else a] for i, row in enumerate(data) for r, a in enumerate(row)]
    return Table(["index", "residue", "angle_turns"], rows).render("csv")


def cmd_euler(p, fmt):
    s = complex(p["re"], p["im"])
    chi = _chi(p)
    spec = lfunc.TruncationSpec(p["prime_cutoff"], p["series_length"])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        value = lfunc.truncated_euler(s, spec, chi)
    residual = abs(value - lfunc.dirichlet_series(s, spec.series_length, chi)) if s.real > 1 else float("nan")
    return Table(
        ["s_re", "s_im", "prime_cutoff", "value_re", "value_im", "residual"],
        [[s.real, s.imag, p["prime_cutoff"], *_cplx(value), residual]],
    ).render(fmt)


def cmd_partition_ratio(p, fmt):
    beta = complex(p["beta_re"], p["beta_im"])
    chi = _chi(p)
    spec = lfunc.TruncationSpec(p["prime_cutoff"], exponent_cutoff=p["n_cut"])
    value = lfunc.partition_ratio(beta, spec, chi)
    m = p["n_cut"] + 1
    residual = float("nan")
    if -beta.real > 1:
        chi_m = None if chi is None else chars.char_power(chi, m)
        ref = lfunc.truncated_euler(-beta, spec, chi) / lfunc.truncated_euler(-m * beta, spec, chi_m)
        residual = abs(value - ref)
    return Table(
        ["beta_re", "beta_im", "n_cut", "prime_cutoff", "value_re", "value_im", "residual"],
        [[beta.real, beta.imag, p["n_cut"], p["prime_cutoff"], *_cplx(value), residual]],
    ).render(fmt)


def cmd_fisher_zeros(p, fmt):
    B = float(np.log(p["site_prime"])) if p["field"] is None else p["field"]
    zeros = lfunc.predicted_fisher_zeros(p["site_prime"], p["n_cut"], B)
    rows = [[k + 1, *_cplx(b), abs(lfunc.single_site_trace(b, p["n_cut"], B))] for k, b in enumerate(zeros)]
    return Table(["k", "beta_re", "beta_im", "residual"], rows, plot_x=0, plot_y=2).render(fmt)


def cmd_zeta_zero(p, fmt):
    seed = complex(p["re"], p["im"])
    N = p["series_length"]
    root = lfunc.refine_zero(lambda s: lfunc.zeta_reference(s, N), seed, tol=p["tol"])
    res = abs(lfunc.zeta_reference(root, N))
    return Table(["seed_re", "seed_im", "root_re", "root_im", "residual"], [[*_cplx(seed), *_cplx(root), res]]).render(fmt)


def cmd_trace(p, fmt):
    cfg = spinchain.ChainConfig(p["sites"], p["n_cut"], twist=_chi(p))
    beta = complex(p["beta_re"], p["beta_im"])
    r = spinchain.partition_trace(cfg, beta)
    brute = [float("nan")] * 2 if r.product_only else _cplx(r.brute_force)
    disc = float("nan") if r.product_only else r.discrepancy
    return Table(
        ["beta_re", "beta_im", "product_re", "product_im", "brute_re", "brute_im", "discrepancy"],
        [[*_cplx(beta), *_cplx(r.value), *brute, disc]],
    ).render(fmt)


def cmd_covariance_scan(p, fmt):
    chi = _chi(p)
    if chi is not None:
        basis = phaseop.PhaseBasis.for_site(p["site_prime"], p["n_cut"], chi)
        if p["field"] is not None:
            basis = phaseop.PhaseBasis(p["n_cut"], p["field"], basis.omega)
    else:
        B = float(np.log(p["site_prime"])) if p["field"] is None else p["field"]
        basis = phaseop.PhaseBasis(p["n_cut"], B)

    def row(b_im):
        beta = complex(p["beta_re"], b_im)
        rep = phaseop.covariance_residual(basis, beta)
        return [b_im, *_cplx(phaseop.trace_exp(basis, beta)), rep.residual, rep.special]

    rows = ordered_map(row, p["beta_im"].values())
    return Table(["beta_im", "value_re", "value_im", "residual", "special"], rows, plot_y=3)


def cmd_resolvent_scan(p, fmt):
    cfg = spinchain.ChainConfig(p["sites"], p["n_cut"], twist=_chi(p))

    def row(phi):
        try:
            v = phaseop.aggregate_resolvent_trace(cfg, phi)
            special = False
        except PoleError:
            v, special = complex(np.nan, np.nan), True
        return [phi, *_cplx(v), abs(phaseop.zero_trace_at(cfg, phi)), special]

    rows = ordered_map(row, p["phi"].values())
    return Table(["phi", "value_re", "value_im", "residual", "special"], rows, plot_y=lambda r: np.hypot(r[1], r[2]))


def cmd_toeplitz_spectrum(p, fmt):
    if p["total"]:
        M = toeplitz.total_phase(toeplitz.integer_basis(p["prime_cutoff"], p["n_cut"]))
    else:
        M = toeplitz.toeplitz_phase(p["n_cut"])
    eigs, _ = toeplitz.hermitian_eigs(M, method=p["method"])
    summary = toeplitz.szego_summary(eigs).to_json()
    if p["summary"]:
        with open(p["summary"], "w") as fh:
            fh.write(_json(summary))
    if fmt == "json":
        return _json({"eigenvalues": [float(x) for x in eigs], "summary": summary})
    table = Table(["index", "eigenvalue"], [[i, float(x)] for i, x in enumerate(eigs)])
    if fmt == "plotdata":
        return table.plot_text()
    return table.render("csv") + "# summary " + json.dumps(summary) + "\n"


def cmd_padic_check(p, fmt):
    prime, gamma = p["prime"], p["scale"]
    alpha = complex(p["alpha_re"], p["alpha_im"])
    idx = padic.WaveletIndex(prime, gamma)
    lam = padic.vladimirov_eigenvalue(prime, alpha, gamma)
    outside = [Fraction(prime) ** (-gamma - 1), Fraction(prime) ** (-gamma - 2) * (prime - 1)]
    rows = []
    for xi in padic.support_points(idx, p["points"]) + outside:
        f = padic.kozyrev_eval(idx, xi)
        D = padic.vladimirov_apply(prime, alpha, idx, xi)
        ratio = D / f if f != 0 else complex(np.nan, np.nan)
        rows.append([str(xi), *_cplx(f), *_cplx(D), *_cplx(ratio), abs(D - lam * f)])
    header = ["point", "psi_re", "psi_im", "dpsi_re", "dpsi_im", "ratio_re", "ratio_im", "defect"]
    return Table(header, rows, plot_x=1, plot_y=7)


HANDLERS = {
    "chars": cmd_chars,
    "euler": cmd_euler,
    "partition-ratio": cmd_partition_ratio,
    "fisher-zeros": cmd_fisher_zeros,
    "zeta-zero": cmd_zeta_zero,
    "trace": cmd_trace,
    "covariance-scan": cmd_covariance_scan,
    "resolvent-scan": cmd_resolvent_scan,
    "toeplitz-spectrum": cmd_toeplitz_spectrum,
    "padic-check": cmd_padic_check,
}


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _error(kind, exc):
    sys.stderr.write(json.dumps({"error": kind, "type": type(exc).__name__, "message": str(exc)}) + "\n")


def run(cfg):
    try:
        if cfg.command == "verify":
            results = acceptance.run(cfg.params["criterion"])
            _write(cfg.output, "".join(r.line() + "\n" for r in results))
            return 0 if all(r.passed for r in results) else 1
        out = HANDLERS[cfg.command](cfg.params, cfg.format)
        if isinstance(out, Table):
            if cfg.plot_data:
                _write(cfg.plot_data, out.plot_text())
            out = out.render(cfg.format)
        _write(cfg.output, out)
        return 0
    except (ZetaspinError, ArithmeticError) as exc:
        _error("computation", exc)
        return 1
    except (UsageError, ValueError, IndexError) as exc:
        _error("usage", exc)
        return 2


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"zetaspin: error: {exc}\n")
        _error("usage", exc)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
