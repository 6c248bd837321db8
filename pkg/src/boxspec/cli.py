"""Command line front end: JSON job configs in, JSON or CSV reports out.

    boxspec <command> --config PATH [--pq P,Q] [--q Q] [--n N --k K]
            [--cutoff X] [--format json|csv] [--seed S] [--suite NAME]

Exit codes: 0 success, 2 configuration or usage error, 3 verification
failure, 4 data not available.  Errors go to stderr as one line of JSON.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .bessel import bessel_zero, bessel_zero_bracket
from .domains import Disc, Rectangle, custom_from_dict, factor_bidegree
from .errors import BoxspecError, ConfigError
from .polydomain import compactness_verdict, enumerate_box_q
from .spectrum import (
    DEFAULT_MERGE_TOL,
    DEFAULT_ZERO_TOL,
    BidegreeSpectrum,
    Cardinal,
    TruncatedSpectrum,
    bidegree_product,
    gap_report,
    kunneth_product,
    minkowski_sum,
    total_spectrum,
)

COMMANDS = ("spectrum", "bidegree", "gap", "kunneth", "enumerate", "bessel", "verify")
TABLE_COMMANDS = ("spectrum", "bidegree", "enumerate")
SUITES = ("kronecker", "fd", "bessel", "box0")
DEFAULT_SEED = 20240601
CSV_COLUMNS = ("value", "multiplicity", "kind", "J", "k")


@dataclass
class JobConfig:
    factors: list
    cutoff: float
    merge_tol: float = DEFAULT_MERGE_TOL
    zero_tol: float = DEFAULT_ZERO_TOL
    format: str = "json"
    raw_factors: list = field(default_factory=list, repr=False)


def _number(doc, key, pointer, *, required=False, positive=False, default=None):
    if key not in doc:
        if required:
            raise ConfigError(f"{key} is required", f"{pointer}/{key}")
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{key} must be a finite number", f"{pointer}/{key}")
    if positive and v <= 0:
        raise ConfigError(f"{key} must be positive, got {v}", f"{pointer}/{key}")
    if not positive and v < 0:
        raise ConfigError(f"{key} must be nonnegative, got {v}", f"{pointer}/{key}")
    return float(v)


def _parse_factor(doc, pointer, cutoff, merge_tol):
    if not isinstance(doc, dict):
        raise ConfigError("factor must be a JSON object", pointer)
    kind = doc.get("type")
    if kind == "disc":
        return Disc(_number(doc, "radius", pointer, required=True, positive=True))
    if kind == "rectangle":
        a = _number(doc, "a", pointer, required=True, positive=True)
        b = _number(doc, "b", pointer, required=True, positive=True)
        return Rectangle(a, b)
    if kind == "custom":
        return custom_from_dict(doc, pointer, cutoff, merge_tol)
    raise ConfigError(f"type must be one of disc, rectangle, custom; got {kind!r}", f"{pointer}/type")


def parse_config(text, cutoff: float | None = None, fmt: str | None = None) -> JobConfig:
    """Validate a job config; ``cutoff`` and ``fmt`` override the document."""
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"config is not valid JSON: {exc}", "") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object", "")
    if cutoff is None:
        cutoff = _number(doc, "cutoff", "", required=True, positive=True)
    elif not (math.isfinite(cutoff) and cutoff > 0):
        raise ConfigError(f"cutoff must be positive, got {cutoff}", "/cutoff")
    merge_tol = _number(doc, "merge_tol", "", default=DEFAULT_MERGE_TOL)
    zero_tol = _number(doc, "zero_tol", "", default=DEFAULT_ZERO_TOL)
    fmt = fmt or doc.get("format", "json")
    if fmt not in ("json", "csv"):
        raise ConfigError(f"format must be json or csv, got {fmt!r}", "/format")
    factors = doc.get("factors")
    if not isinstance(factors, list):
        raise ConfigError("factors must be a list", "/factors")
    if not factors:
        raise ConfigError("factors must be nonempty", "/factors")
    parsed = [_parse_factor(f, f"/factors/{i}", cutoff, merge_tol) for i, f in enumerate(factors)]
    return JobConfig(parsed, float(cutoff), merge_tol, zero_tol, fmt, factors)


# -- serialisation ------------------------------------------------------------

def fmt_value(x: float) -> float:
    """Round to 12 significant digits so reports are stable across platforms."""
    return float(f"{x:.12g}")


def fmt_mult(m: Cardinal):
    return "inf" if m.is_infinite else m.n


def _pq_key(pq):
    return f"{pq[0]},{pq[1]}"


def _table(S: TruncatedSpectrum):
    return [[fmt_value(p.value), fmt_mult(p.multiplicity)] for p in S.points]


def spectrum_document(spec: BidegreeSpectrum, cutoff: float, harmonic=None) -> dict:
    """A bidegree table in the custom-factor schema, so it can be loaded back."""
    doc = {
        "type": "custom",
        "dim": spec.complex_dim,
        "pure_point": all(s.pure_point for s in spec.table.values()),
        "cutoff": fmt_value(min([s.cutoff for s in spec.table.values()] + [cutoff])),
        "complete": all(s.complete for s in spec.table.values()),
        "spectra": {_pq_key(pq): _table(spec.table[pq]) for pq in spec.bidegrees() if pq in spec.table},
    }
    if harmonic is not None:
        doc["harmonic"] = {_pq_key(pq): fmt_mult(m) for pq, m in sorted(harmonic.table.items())}
    if spec.unavailable:
        doc["unavailable"] = {_pq_key(pq): why for pq, why in sorted(spec.unavailable.items())}
    if spec.notes:
        doc["notes"] = list(spec.notes)
    return doc


# -- commands -----------------------------------------------------------------

def _factor_tables(cfg: JobConfig):
    return [factor_bidegree(f, cfg.cutoff, cfg.merge_tol) for f in cfg.factors]


def _parse_pq(text):
    try:
        p, q = (int(t) for t in text.split(","))
    except (ValueError, AttributeError):
        raise ConfigError(f"--pq must look like P,Q, got {text!r}", "--pq") from None
    return p, q


def _cmd_spectrum(cfg, args):
    tables = _factor_tables(cfg)
    product = bidegree_product([t[0] for t in tables])
    total = total_spectrum(product)
    doc = spectrum_document(product, cfg.cutoff)
    doc["total"] = _table(total)
    rows = [(p.value, p.multiplicity, "", "", "") for p in total.points]
    return doc, rows


def _cmd_bidegree(cfg, args):
    if args.pq is None:
        raise ConfigError("bidegree needs --pq P,Q", "--pq")
    pq = _parse_pq(args.pq)
    n = sum(t[0].complex_dim for t in _factor_tables(cfg))
    if not (0 <= pq[0] <= n and 0 <= pq[1] <= n):
        raise ConfigError(f"bidegree {args.pq} out of range for complex dimension {n}", "--pq")
    product = bidegree_product([t[0] for t in _factor_tables(cfg)], [pq])
    S = product[pq]
    only = BidegreeSpectrum(product.complex_dim, {pq: S}, {}, product.notes)
    doc = spectrum_document(only, cfg.cutoff)
    rows = [(p.value, p.multiplicity, "", "", "") for p in S.points]
    return doc, rows


def _gap_json(report):
    return {
        "verdict": report.verdict.value,
        "gap": None if report.gap is None else fmt_value(report.gap),
        "bound_constant": None if report.bound_constant is None else fmt_value(report.bound_constant),
        "gap_is_lower_bound": report.gap_is_lower_bound,
    }


def _cmd_gap(cfg, args):
    tables = _factor_tables(cfg)
    product = bidegree_product([t[0] for t in tables])
    doc = {"cutoff": fmt_value(cfg.cutoff)}
    doc.update(_gap_json(gap_report(total_spectrum(product), cfg.zero_tol)))
    doc["bidegrees"] = {
        _pq_key(pq): _gap_json(gap_report(product.table[pq], cfg.zero_tol))
        for pq in product.bidegrees() if pq in product.table
    }
    doc["factors"] = [_gap_json(gap_report(total_spectrum(t[0]), cfg.zero_tol)) for t in tables]
    return doc, None


def _cmd_kunneth(cfg, args):
    dims = kunneth_product([t[1] for t in _factor_tables(cfg)])
    doc = {
        "dim": dims.complex_dim,
        "harmonic": {_pq_key(pq): fmt_mult(m) for pq, m in sorted(dims.table.items())},
    }
    if dims.unavailable:
        doc["unavailable"] = {_pq_key(pq): why for pq, why in sorted(dims.unavailable.items())}
    return doc, None


def _cmd_enumerate(cfg, args):
    if args.q is None:
        raise ConfigError("enumerate needs --q Q", "--q")
    n = len(cfg.factors)
    if not 0 <= args.q <= n:
        raise ConfigError(f"--q must lie in [0, {n}], got {args.q}", "--q")
    result = enumerate_box_q(cfg.factors, args.q, cfg.cutoff, cfg.merge_tol, cfg.zero_tol)
    verdict = compactness_verdict(args.q, n)
    entries, rows = [], []
    for e in result:
        entries.append({
            "value": fmt_value(e.value),
            "multiplicity": fmt_mult(e.multiplicity),
            "labels": [lab.to_json() for lab in e.labels],
            "label_count": e.label_count,
        })
        for lab in e.labels:
            k = " ".join(f"{j}:{lab.index_of(j)}" for j in lab.support)
            rows.append((e.value, e.multiplicity, lab.kind, " ".join(map(str, lab.J)), k))
    doc = {
        "q": args.q,
        "n": n,
        "cutoff": fmt_value(cfg.cutoff),
        "compactness": {"verdict": verdict.verdict.value, "reason": verdict.reason},
        "entries": entries,
        "notes": list(result.notes),
    }
    return doc, rows


def _cmd_bessel(args):
    if args.n is None or args.k is None:
        raise ConfigError("bessel needs --n N and --k K", "--n" if args.n is None else "--k")
    zero, lo, hi = bessel_zero_bracket(args.n, args.k)
    zero = bessel_zero(args.n, args.k)
    return {"n": args.n, "k": args.k, "zero": fmt_value(zero), "bracket": [fmt_value(lo), fmt_value(hi)]}


# -- verification suites ------------------------------------------------------

def _check(name, passed, **detail):
    return {"name": name, "passed": bool(passed),
            **{k: fmt_value(v) if isinstance(v, float) else v for k, v in detail.items()}}


def _expand(S: TruncatedSpectrum):
    return np.array([p.value for p in S.points for _ in range(p.multiplicity.n)])


def _as_spectrum(ev, cutoff, merge_tol=DEFAULT_MERGE_TOL):
    return TruncatedSpectrum.from_pairs([(float(v), 1) for v in ev], cutoff, merge_tol=merge_tol)


def random_psd(rng, order):
    G = rng.standard_normal((order, order))
    return G @ G.T


def suite_kronecker(seed, cases=20, tol=1e-8):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        m, k = int(rng.integers(1, 7)), int(rng.integers(1, 6))
        A, B = random_psd(rng, m), random_psd(rng, k)
        direct = oracle.symmetric_eigen_dense(oracle.kronecker_sum(A, B))
        ea = np.clip(oracle.symmetric_eigen_dense(A), 0.0, None)
        eb = np.clip(oracle.symmetric_eigen_dense(B), 0.0, None)
        cutoff = float(ea[-1] + eb[-1]) + 1.0
        summed = _expand(minkowski_sum(_as_spectrum(ea, cutoff), _as_spectrum(eb, cutoff)))
        worst = max(worst, float(np.max(np.abs(np.sort(summed) - direct))))
    return [_check("kronecker_sum spectrum is the Minkowski sum", worst <= tol,
                   cases=cases, max_error=worst, tol=tol)]


def suite_fd(seed, nx=30, ny=20):
    a, b = math.pi, 2.0
    Lx = oracle.dirichlet_matrix(oracle.Interval(a, nx))
    Ly = oracle.dirichlet_matrix(oracle.Interval(b, ny))
    L = oracle.dirichlet_matrix(oracle.RectGrid(a, b, nx, ny))
    exact = bool(np.array_equal(L, oracle.kronecker_sum(Lx, Ly)))
    ev = oracle.symmetric_eigen_dense(L)
    sums = np.sort(np.add.outer(oracle.interval_closed_form(a, nx), oracle.interval_closed_form(b, ny)).ravel())
    err = float(np.max(np.abs(ev - sums)))
    jac = oracle.fd_dirichlet_interval(1.0, 40, method="jacobi")
    jerr = float(np.max(np.abs(jac - oracle.interval_closed_form(1.0, 40))))
    return [
        _check("rectangle operator equals Kronecker sum of interval operators", exact, nx=nx, ny=ny),
        _check("rectangle spectrum equals sums of interval spectra", err <= 1e-9, max_error=err, tol=1e-9),
        _check("Jacobi interval eigenvalues match the closed form", jerr <= 1e-8, max_error=jerr, tol=1e-8),
    ]


def suite_bessel(seed, step=1 / 40):
    checks = []
    for n, k in ((0, 1), (1, 1), (0, 2)):
        z1, z2 = bessel_zero(n, k, 1e-12), bessel_zero(n, k, 5e-13)
        checks.append(_check(f"j_{n},{k} stable under halved tolerance", abs(z1 - z2) <= 1e-9,
                             zero=z1, change=abs(z1 - z2), tol=1e-9))
    target = bessel_zero(0, 1) ** 2
    fd = float(oracle.fd_dirichlet_disc(1.0, step, count=1)[0])
    rel = abs(fd - target) / target
    checks.append(_check("disc finite differences approach j_0,1 squared", rel <= 0.05,
                         fd=fd, target=target, rel_error=rel, tol=0.05))
    return checks


def suite_box0(seed, nodes=40):
    ev = oracle.fd_box0_rectangle(math.pi, math.pi, nodes, nodes)
    kernel = oracle.numerical_kernel_dim(ev)
    positive = float(ev[kernel]) if kernel < len(ev) else float("nan")
    rel = abs(positive - 0.5) / 0.5
    return [
        _check("discrete dbar form has a nonempty kernel", kernel > 0, kernel_dim=kernel),
        _check("smallest positive eigenvalue near the Dirichlet value 1/2", rel <= 0.10,
               value=positive, rel_error=rel, tol=0.10),
    ]


_SUITES = {"kronecker": suite_kronecker, "fd": suite_fd, "bessel": suite_bessel, "box0": suite_box0}


def _cmd_verify(args):
    suite = args.suite or "all"
    if suite != "all" and suite not in _SUITES:
        raise ConfigError(f"--suite must be one of {', '.join(SUITES)} or all, got {suite!r}", "--suite")
    seed = DEFAULT_SEED if args.seed is None else args.seed
    names = SUITES if suite == "all" else (suite,)
    results = {name: _SUITES[name](seed) for name in names}
    passed = all(c["passed"] for checks in results.values() for c in checks)
    return {"suite": suite, "seed": seed, "passed": passed, "suites": results}, passed


# -- driver -------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message, None)


def build_parser():
    p = _Parser(prog="boxspec", description="Spectra of the complex Laplacian on product domains.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config")
    p.add_argument("--pq")
    p.add_argument("--q", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--cutoff", type=float)
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--seed", type=int)
    p.add_argument("--suite")
    return p


def _render_json(doc):
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _render_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for value, mult, kind, J, k in rows:
        w.writerow((f"{value:.12g}", fmt_mult(mult), kind, J, k))
    return buf.getvalue()


def load_config(args) -> JobConfig:
    if not args.config:
        raise ConfigError(f"{args.command} needs --config PATH", "--config")
    try:
        with open(args.config, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", "--config") from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise ConfigError("config is not UTF-8", "") from None
    return parse_config(text, args.cutoff, args.format)


def run_command(args) -> tuple[str, int]:
    """Execute one parsed command; returns the report text and the exit code."""
    if args.command == "bessel":
        if args.format == "csv":
            raise ConfigError("csv output is only available for table commands", "--format")
        return _render_json({"command": "bessel", **_cmd_bessel(args)}), 0
    if args.command == "verify":
        if args.format == "csv":
            raise ConfigError("csv output is only available for table commands", "--format")
        doc, passed = _cmd_verify(args)
        return _render_json({"command": "verify", **doc}), 0 if passed else 3
    cfg = load_config(args)
    if cfg.format == "csv" and args.command not in TABLE_COMMANDS:
        raise ConfigError("csv output is only available for table commands", "--format")
    handler = {
        "spectrum": _cmd_spectrum, "bidegree": _cmd_bidegree, "gap": _cmd_gap,
        "kunneth": _cmd_kunneth, "enumerate": _cmd_enumerate,
    }[args.command]
    doc, rows = handler(cfg, args)
    if cfg.format == "csv":
        return _render_csv(rows), 0
    return _render_json({"command": args.command, **doc}), 0


def error_line(exc: BoxspecError) -> str:
    body = {"code": exc.exit_code, "message": exc.message}
    if exc.pointer is not None:
        body["pointer"] = exc.pointer
    return json.dumps(body, ensure_ascii=False)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text, code = run_command(args)
    except BoxspecError as exc:
        print(error_line(exc), file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(error_line(ConfigError(str(exc))), file=sys.stderr)
        return 2
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
