"""Command-line entry point: ``equizeros <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .bases import BASIS_KINDS, PolynomialBasis, build_basis
from .domains import domain_from_dict
from .ensembles import (
    KINDS,
    CoefficientSequence,
    DistributionSpec,
    classify_log_moment,
    detect_gaps,
    sample_coefficients,
    sequence_diagnostics,
)
from .experiments import ExperimentAborted, load_config, run_experiment
from .polyroots import find_roots, from_coefficients

log = logging.getLogger("equizeros")


def _add_domain_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--domain", choices=("disk", "ellipse", "laurent"), default="disk")
    p.add_argument("--center", type=complex, default=0j, help="disk center, e.g. 0.5+1j")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--a", type=float, default=2.0, help="ellipse semi-axis along x")
    p.add_argument("--b", type=float, default=1.0, help="ellipse semi-axis along y")
    p.add_argument("--d", type=float, default=1.0, help="Laurent capacity")
    p.add_argument("--c0", type=complex, default=0j)
    p.add_argument("--tail", type=complex, nargs="*", default=[])


def _domain(args):
    if args.domain == "disk":
        spec = {"kind": "disk", "center": [args.center.real, args.center.imag], "radius": args.radius}
    elif args.domain == "ellipse":
        spec = {"kind": "ellipse", "a": args.a, "b": args.b}
    else:
        spec = {"kind": "laurent", "d": args.d, "c0": [args.c0.real, args.c0.imag],
                "tail": [[t.real, t.imag] for t in args.tail]}
    return domain_from_dict(spec)


def _write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


# -- sample-coeffs ------------------------------------------------------------

def cmd_sample_coeffs(args) -> int:
    spec = DistributionSpec(args.dist, args.alpha)
    seq = sample_coefficients(spec, args.n, args.seed)
    vals = seq.values
    out = Path(args.out)
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "re", "im", "log_abs", "arg"])
        args_ = np.angle(seq.phase)
        for k in range(len(seq)):
            w.writerow([k, repr(float(vals[k].real)), repr(float(vals[k].imag)),
                        repr(float(seq.log_abs[k])), repr(float(args_[k]))])
    diag = sequence_diagnostics(seq, args.window_b)
    gaps = detect_gaps(seq, args.gap_c, args.gap_q)
    report = {
        "distribution": spec.to_dict(),
        "seed": args.seed,
        "n": args.n,
        "log_moment": classify_log_moment(spec),
        "rootwise_max_at_n": float(diag.rootwise_max[-1]) if args.n >= 1 else None,
        "window_max_at_n": float(diag.window_max[-1]) if args.n >= 1 else None,
        "record_indices": [int(i) for i in diag.record_indices],
        "gaps": gaps.to_dict(),
    }
    text = json.dumps(report, indent=2)
    if args.diagnostics:
        Path(args.diagnostics).write_text(text + "\n")
    else:
        print(text)
    return 0


def read_coefficients(path) -> CoefficientSequence:
    """Read ``index,re,im[,log_abs,arg]``.

    When present, ``log_abs`` and ``arg`` take precedence over ``re``/``im``;
    they carry moduli that overflow double precision.
    """
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    rows.sort(key=lambda r: int(r["index"]))
    if [int(r["index"]) for r in rows] != list(range(len(rows))):
        raise ValueError("coefficient indices must run 0..n without gaps")
    if rows and rows[0].get("log_abs") and rows[0].get("arg"):
        log_abs = np.array([float(r["log_abs"]) for r in rows])
        phase = np.exp(1j * np.array([float(r["arg"]) for r in rows]))
        return CoefficientSequence(log_abs, phase)
    vals = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
    return CoefficientSequence.from_values(vals)


# -- build-basis --------------------------------------------------------------

def write_basis_csv(path, basis: PolynomialBasis) -> None:
    """Rows are monomial powers j, columns are basis indices k."""
    t = basis.table
    n = t.shape[0]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["j"] + [f"re_{k}" for k in range(n)] + [f"im_{k}" for k in range(n)])
        for j in range(n):
            w.writerow([j] + [repr(float(x)) for x in t[j].real] + [repr(float(x)) for x in t[j].imag])


def read_basis_csv(path) -> np.ndarray:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    n = data.shape[0]
    return data[:, 1 : n + 1] + 1j * data[:, n + 1 : 2 * n + 1]


def cmd_build_basis(args) -> int:
    domain = _domain(args)
    basis = build_basis(args.kind, domain, args.nmax, args.quad_nodes)
    write_basis_csv(args.out, basis)
    header = args.header or str(Path(args.out).with_suffix(".json"))
    _write_json(header, basis.to_header())
    log.info("wrote %s and %s", args.out, header)
    return 0


# -- roots ------------------------------------------------------------------------

def cmd_roots(args) -> int:
    seq = read_coefficients(args.coeffs)
    n = args.n if args.n is not None else seq.n
    la = seq.log_abs[: n + 1]
    finite = la[np.isfinite(la)]
    s = float(finite.max()) if len(finite) else 0.0
    a = np.exp(la - s) * seq.phase[: n + 1]
    if args.basis:
        table = read_basis_csv(args.basis)
        if table.shape[0] < n + 1:
            raise SystemExit(f"basis table has nmax {table.shape[0] - 1} < n = {n}")
        c = table[: n + 1, : n + 1] @ a
    else:
        c = a  # monomial basis
    poly = from_coefficients(c, s)
    rs = find_roots(poly, args.tol, args.max_iter)
    np.savetxt(args.out, np.column_stack((rs.roots.real, rs.roots.imag)), delimiter=",",
               header="re,im", comments="", fmt="%.17g")
    cert = args.certificate or str(Path(args.out).with_suffix(".json"))
    _write_json(cert, rs.certificate())
    return 0 if rs.converged else 3


# -- experiment ---------------------------------------------------------------------

def cmd_experiment(args) -> int:
    cfg = load_config(args.config)
    if args.save_zeros:
        cfg.save_zeros = True
    out = args.out or cfg.outputs
    try:
        report = run_experiment(cfg, threads=args.threads, out=out,
                                figures=False if args.no_figures else None)
    except ExperimentAborted as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return 2
    print("=" * 60)
    print(f"suite: {report.suite}   solves: {report.total_solves}   excluded: {report.excluded}")
    for name, v in report.verdicts.items():
        status = "PASS" if v["pass"] else "FAIL"
        print(f"{status}  {name}: {v['value']} {v['op']} {v['threshold']}")
    print("=" * 60)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="equizeros", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample-coeffs", help="draw a coefficient sequence")
    s.add_argument("--dist", choices=KINDS, required=True)
    s.add_argument("--alpha", type=float, default=1.0)
    s.add_argument("--n", type=int, required=True, help="highest index (n+1 values)")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--diagnostics", help="write the JSON diagnostics here instead of stdout")
    s.add_argument("--window-b", type=float, default=10.0)
    s.add_argument("--gap-c", type=float, default=0.5)
    s.add_argument("--gap-q", type=float, default=0.9)
    s.set_defaults(func=cmd_sample_coeffs)

    b = sub.add_parser("build-basis", help="write a basis coefficient table")
    b.add_argument("--kind", choices=BASIS_KINDS, required=True)
    b.add_argument("--nmax", type=int, required=True)
    b.add_argument("--quad-nodes", type=int)
    b.add_argument("--out", required=True)
    b.add_argument("--header", help="JSON header path (default: OUT with .json)")
    _add_domain_args(b)
    b.set_defaults(func=cmd_build_basis)

    r = sub.add_parser("roots", help="zeros of sum A_k B_k")
    r.add_argument("--coeffs", required=True, help="CSV with index,re,im[,log_abs,arg]")
    r.add_argument("--basis", help="basis CSV from build-basis (default: monomial)")
    r.add_argument("--n", type=int, help="degree (default: all coefficients)")
    r.add_argument("--tol", type=float, default=1e-10)
    r.add_argument("--max-iter", type=int, default=200)
    r.add_argument("--out", required=True)
    r.add_argument("--certificate", help="JSON certificate path (default: OUT with .json)")
    r.set_defaults(func=cmd_roots)

    e = sub.add_parser("experiment", help="run a Monte Carlo suite")
    e.add_argument("--config", required=True)
    e.add_argument("--threads", type=int, default=1)
    e.add_argument("--out")
    e.add_argument("--save-zeros", action="store_true")
    e.add_argument("--no-figures", action="store_true")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
