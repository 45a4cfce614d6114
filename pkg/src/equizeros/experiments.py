"""Seeded Monte Carlo suites over coefficient laws, bases and domains.

Every trial is a pure function of ``(config, kind, degree, trial_index)``:
its seed comes from :func:`trial_seed`, so trials can run in any order on
any number of threads and still produce byte-identical records.
"""

from __future__ import annotations

import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .bases import PolynomialBasis, build_basis
from .domains import Domain, domain_from_dict
from .ensembles import (
    DistributionSpec,
    classify_log_moment,
    detect_gaps,
    running_max_records,
    sample_coefficients,
    sequence_diagnostics,
)
from .measures import collapse_detect, equi_stats, lognorm_profile
from .polyroots import assemble, find_roots, log_abs_constant_ratio, monic_reduce

log = logging.getLogger(__name__)

__all__ = [
    "ExperimentConfig",
    "TrialRecord",
    "SummaryReport",
    "ExperimentAborted",
    "trial_seed",
    "splitmix64",
    "load_config",
    "run_experiment",
    "run_dichotomy",
    "run_prop23",
    "run_lemma_suite",
    "rerun_trial",
    "summarize",
    "read_trials",
    "write_outputs",
]

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN64 = 0x9E3779B97F4A7C15
STREAM_DEGREE = 0
FAILURE_LIMIT = 0.02

STAT_FIELDS = (
    "angular_discrepancy",
    "radial_mean_dev",
    "band_mass",
    "interior_mass",
    "max_root_modulus",
    "lognorm_max_dev",
    "effective_degree",
    "collapse",
)

DEFAULT_THRESHOLDS = {
    "discrepancy_at_max_degree": 0.05,
    "band_mass_at_max_degree": 0.90,
    "lognorm_max_dev_at_max_degree": 0.05,
    "solver_failure_rate": FAILURE_LIMIT,
    "collapse_trial_fraction": 0.5,
    "collapsed_band_mass_median": 0.0,
    "root_at_one_distance": 1e-8,
    "qualifying_trial_fraction": 0.6,
    "qualifying_discrepancy_median": 0.1,
    "rootwise_max_deviation": 0.01,
    "window_max_floor": 0.8,
    "window_max_seed_fraction": 0.95,
}


class ExperimentAborted(RuntimeError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


# -- seeds --------------------------------------------------------------------

def splitmix64(x):
    """SplitMix64 finaliser on Python ints or uint64 arrays."""
    if isinstance(x, np.ndarray):
        with np.errstate(over="ignore"):
            z = x.astype(np.uint64) + np.uint64(GOLDEN64)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            return z ^ (z >> np.uint64(31))
    z = (int(x) + GOLDEN64) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_seed(master_seed, degree, trial_index):
    """``s = mix(mix(mix(master) ^ degree) ^ trial)`` with ``mix`` = SplitMix64.

    For fixed ``(master, degree)`` the map ``trial -> s`` is a bijection on
    64-bit integers, so neighbouring trials never share a seed.
    """
    if isinstance(trial_index, np.ndarray):
        base = np.uint64(trial_seed_prefix(master_seed, degree))
        return splitmix64(base ^ trial_index.astype(np.uint64))
    return splitmix64(trial_seed_prefix(master_seed, degree) ^ (int(trial_index) & MASK64))


def trial_seed_prefix(master_seed, degree):
    return splitmix64(splitmix64(int(master_seed) & MASK64) ^ (int(degree) & MASK64))


# -- configuration --------------------------------------------------------------

@dataclass
class ExperimentConfig:
    distribution: DistributionSpec
    suite: str = "dichotomy"
    basis: str = "monomial"
    domain: dict = field(default_factory=lambda: {"kind": "disk", "center": [0.0, 0.0], "radius": 1.0})
    degrees: list = field(default_factory=lambda: [64, 256, 1024])
    trials: int = 50
    master_seed: int = 20240101
    epsilon: float = 0.1
    rho: float = 0.9
    lognorm_R: float = 1.5
    window_b: float = 10.0
    gap_c: float = 0.5
    gap_q: float = 0.9
    ratio_threshold: float = 1.5
    tol: float = 1e-10
    max_iter: int = 200
    quad_nodes: int | None = None
    lemma_n: int = 10_000
    save_zeros: bool = False
    figures: bool = True
    thresholds: dict = field(default_factory=dict)
    verdicts: list | None = None
    outputs: str | None = None

    def __post_init__(self):
        if isinstance(self.distribution, dict):
            self.distribution = DistributionSpec.from_dict(self.distribution)
        self.degrees = [int(d) for d in self.degrees]
        if self.suite not in ("dichotomy", "prop23", "lemmas"):
            raise ValueError(f"unknown suite {self.suite!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.degrees or any(b <= a for a, b in zip(self.degrees, self.degrees[1:])):
            raise ValueError("degrees must be a non-empty strictly increasing list")
        if self.degrees[0] < 1:
            raise ValueError("degrees must be >= 1")

    def threshold(self, name):
        return self.thresholds.get(name, DEFAULT_THRESHOLDS.get(name))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["distribution"] = self.distribution.to_dict()
        return d


def _parse_value(raw: str):
    raw = raw.strip()
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        pass
    if "," in raw:
        return [_parse_value(p) for p in raw.split(",") if p.strip()]
    low = raw.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    return raw


def load_config(path) -> ExperimentConfig:
    """Read a JSON config, or plain ``key = value`` lines with dotted keys
    for nesting (``distribution.kind = log-pareto``)."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                key, sep, value = line.partition(":")
            if not sep:
                raise ValueError(f"cannot parse config line {line!r}")
            target = data
            parts = key.strip().split(".")
            for p in parts[:-1]:
                target = target.setdefault(p, {})
            target[parts[-1]] = _parse_value(value)
    if isinstance(data.get("degrees"), int):
        data["degrees"] = [data["degrees"]]
    return ExperimentConfig(**data)


# -- records --------------------------------------------------------------------

@dataclass
class TrialRecord:
    kind: str
    degree: int
    trial_index: int
    seed: int
    converged: bool = True
    effective_degree: int | None = None
    collapse: bool | None = None
    lognorm_max_dev: float | None = None
    lognorm_mean_dev: float | None = None
    max_residual: float | None = None
    iterations: int | None = None
    stats: dict | None = None
    extras: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "TrialRecord":
        return cls(**json.loads(line))

    def value(self, name):
        if self.stats is not None and name in self.stats:
            return self.stats[name]
        if name == "collapse":
            return None if self.collapse is None else float(self.collapse)
        return getattr(self, name, None)


@dataclass
class _Context:
    config: ExperimentConfig
    domain: Domain
    basis: PolynomialBasis
    finite: bool


def _context(config: ExperimentConfig) -> _Context:
    domain = domain_from_dict(config.domain)
    nmax = config.degrees[-1]
    if config.suite == "prop23":
        basis = build_basis("shifted-monomial", domain, nmax)
    else:
        basis = build_basis(config.basis, domain, nmax, config.quad_nodes)
    finite = classify_log_moment(config.distribution) == "finite"
    return _Context(config, domain, basis, finite)


def _solve_record(ctx: _Context, coeffs, n: int, kind: str, trial: int, seed: int,
                  want_roots: bool = False):
    cfg = ctx.config
    poly = assemble(coeffs, ctx.basis, n)
    rec = TrialRecord(kind, n, trial, int(seed), effective_degree=int(poly.degree))
    if poly.degree < 1:
        rec.converged = False
        rec.extras["degenerate"] = True
        return rec, poly, None
    roots = find_roots(poly, cfg.tol, cfg.max_iter)
    rec.converged = roots.converged
    rec.max_residual = roots.max_residual
    rec.iterations = roots.iterations
    rec.stats = equi_stats(roots, ctx.domain, cfg.epsilon).to_dict()
    rec.collapse = collapse_detect(roots, ctx.domain, cfg.rho)
    prof = lognorm_profile(poly, ctx.domain, cfg.lognorm_R)
    rec.lognorm_max_dev = prof.max_dev
    rec.lognorm_mean_dev = prof.mean_dev
    if prof.skipped:
        rec.extras["lognorm_skipped"] = prof.skipped
    return rec, poly, roots


def _prop23_extras(rec: TrialRecord, poly, roots) -> None:
    if roots is None:
        return
    rec.extras["root_at_one_distance"] = float(np.min(np.abs(roots.roots - 1.0)))
    log_q0 = log_abs_constant_ratio(poly)
    rec.extras["log_q0"] = log_q0
    rec.extras["q0_root"] = math.exp(log_q0 / poly.degree)
    q = monic_reduce(poly)
    rec.extras["q_norm_root_on_circle"] = math.exp(lognorm_profile(q, _UNIT_DISK, 1.0).max_log_norm)


def _fixed_trial(ctx: _Context, degree: int, trial: int):
    cfg = ctx.config
    seed = trial_seed(cfg.master_seed, degree, trial)
    coeffs = sample_coefficients(cfg.distribution, degree, seed)
    rec, poly, roots = _solve_record(ctx, coeffs, degree, "fixed", trial, seed)
    if cfg.suite == "prop23":
        _prop23_extras(rec, poly, roots)
    return [rec], roots


def _record_scan_trial(ctx: _Context, trial: int):
    """Collapse check at every record index of one coefficient stream."""
    cfg = ctx.config
    seed = trial_seed(cfg.master_seed, STREAM_DEGREE, trial)
    coeffs = sample_coefficients(cfg.distribution, cfg.degrees[-1], seed)
    diag = sequence_diagnostics(coeffs, cfg.window_b)
    out = []
    for n in diag.record_indices:
        rec, _, _ = _solve_record(ctx, coeffs, int(n), "record", trial, seed)
        rec.extras["log_root_abs"] = float(coeffs.log_abs[n] / n)
        out.append(rec)
    return out, None


def _prop23_scan_trial(ctx: _Context, trial: int):
    """Running-maximum records ``A_n = M_n`` and the ratio ``(A_1+...+A_n)/A_n``."""
    cfg = ctx.config
    seed = trial_seed(cfg.master_seed, STREAM_DEGREE, trial)
    coeffs = sample_coefficients(cfg.distribution, cfg.degrees[-1], seed)
    la = coeffs.log_abs
    # log of partial sums A_1 + ... + A_n
    log_sums = np.logaddexp.accumulate(la[1:])
    out = []
    for n in running_max_records(coeffs):
        if n < cfg.degrees[0]:
            continue
        ratio = float(np.exp(log_sums[n - 1] - la[n]))
        if ratio > cfg.ratio_threshold:
            out.append(TrialRecord("prop23-record", int(n), trial, int(seed), converged=True,
                                   extras={"ratio": ratio, "qualifying": False}))
            continue
        rec, poly, roots = _solve_record(ctx, coeffs, int(n), "prop23-record", trial, seed)
        rec.extras.update({"ratio": ratio, "qualifying": True})
        _prop23_extras(rec, poly, roots)
        out.append(rec)
    return out, None


def _lemma_trial(ctx: _Context, trial: int):
    cfg = ctx.config
    n = cfg.lemma_n
    seed = trial_seed(cfg.master_seed, n, trial)
    coeffs = sample_coefficients(cfg.distribution, n, seed)
    diag = sequence_diagnostics(coeffs, cfg.window_b)
    lo, hi = 100, min(2000, n)
    window = diag.window_max[lo - 1 : hi] if hi >= lo else np.array([np.nan])
    gaps = detect_gaps(coeffs, cfg.gap_c, cfg.gap_q)
    rec = TrialRecord("lemma", n, trial, int(seed), extras={
        "rootwise_max_at_n": float(diag.rootwise_max[-1]),
        "window_max_min_100_2000": float(np.min(window)),
        "gaps": [[g.start, g.end, g.estimated_q] for g in gaps.gaps],
        "record_count": int(len(diag.record_indices)),
    })
    return [rec], None


_UNIT_DISK = domain_from_dict({"kind": "disk", "center": 0.0, "radius": 1.0})


# -- orchestration ----------------------------------------------------------------

def _tasks(ctx: _Context):
    cfg = ctx.config
    tasks = []
    if cfg.suite == "lemmas":
        return [("lemma", cfg.lemma_n, t) for t in range(cfg.trials)]
    if cfg.suite == "dichotomy" or ctx.finite:
        tasks += [("fixed", d, t) for d in cfg.degrees for t in range(cfg.trials)]
    if cfg.suite == "dichotomy" and not ctx.finite:
        tasks += [("record", STREAM_DEGREE, t) for t in range(cfg.trials)]
    if cfg.suite == "prop23" and not ctx.finite:
        tasks += [("prop23-record", STREAM_DEGREE, t) for t in range(cfg.trials)]
    return tasks


def _run_task(ctx: _Context, task):
    kind, degree, trial = task
    start = time.perf_counter()
    if kind == "fixed":
        recs, roots = _fixed_trial(ctx, degree, trial)
    elif kind == "record":
        recs, roots = _record_scan_trial(ctx, trial)
    elif kind == "prop23-record":
        recs, roots = _prop23_scan_trial(ctx, trial)
    else:
        recs, roots = _lemma_trial(ctx, trial)
    return recs, roots, time.perf_counter() - start


def rerun_trial(config: ExperimentConfig, kind: str, degree: int, trial_index: int) -> TrialRecord:
    """Recompute one persisted record from the config alone."""
    ctx = _context(config)
    if kind == "fixed":
        return _fixed_trial(ctx, degree, trial_index)[0][0]
    if kind == "lemma":
        return _lemma_trial(ctx, trial_index)[0][0]
    scan = _record_scan_trial if kind == "record" else _prop23_scan_trial
    for rec in scan(ctx, trial_index)[0]:
        if rec.degree == degree:
            return rec
    raise KeyError(f"no {kind} record at degree {degree} for trial {trial_index}")


def _quantiles(values):
    v = np.asarray([x for x in values if x is not None], dtype=float)
    if v.size == 0:
        return None
    q1, med, q3 = np.percentile(v, [25, 50, 75])
    return {"median": float(med), "q1": float(q1), "q3": float(q3)}


def _median(entry, name):
    """Median of ``name`` in a per-degree entry, None when nothing converged."""
    q = entry.get(name) if entry else None
    return q["median"] if q else None


@dataclass
class SummaryReport:
    suite: str
    config: dict
    per_degree: dict
    findings: dict
    verdicts: dict
    excluded: int
    total_solves: int

    def to_dict(self):
        return asdict(self)

    @property
    def passed(self) -> bool:
        return all(v["pass"] for v in self.verdicts.values())


def _verdict(value, threshold, op):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        ok = False
    elif op == "<=":
        ok = value <= threshold
    elif op == ">=":
        ok = value >= threshold
    elif op == "==":
        ok = value == threshold
    else:
        raise ValueError(op)
    return {"value": value, "threshold": threshold, "op": op, "pass": bool(ok)}


def summarize(records: list[TrialRecord], config: ExperimentConfig) -> SummaryReport:
    """Aggregate records into medians/quartiles, findings and verdicts.

    Only converged solves enter the statistics; the rest are counted.
    """
    finite = classify_log_moment(config.distribution) == "finite"
    solved = [r for r in records if r.kind != "lemma" and r.stats is not None or
              (r.kind != "lemma" and r.extras.get("degenerate"))]
    failures = [r for r in solved if not r.converged]
    per_degree = {}
    for d in config.degrees:
        rows = [r for r in records if r.kind == "fixed" and r.degree == d]
        if not rows:
            continue
        good = [r for r in rows if r.converged and r.stats is not None]
        entry = {"trials": len(rows), "converged": len(good), "excluded": len(rows) - len(good)}
        for name in STAT_FIELDS:
            entry[name] = _quantiles([r.value(name) for r in good])
        per_degree[str(d)] = entry

    findings: dict = {"log_moment": "finite" if finite else "infinite"}
    verdicts: dict = {}
    th = config.threshold
    top = str(config.degrees[-1])

    if solved:
        rate = len(failures) / len(solved)
        findings["solver_failures"] = len(failures)
        verdicts["solver_failure_rate"] = _verdict(rate, th("solver_failure_rate"), "<=")

    if config.suite == "dichotomy" and per_degree:
        meds = [per_degree[str(d)]["angular_discrepancy"]["median"] for d in config.degrees
                if str(d) in per_degree and per_degree[str(d)]["angular_discrepancy"]]
        findings["median_discrepancy_by_degree"] = meds
        if finite:
            if len(meds) > 1:
                dec = all(b < a for a, b in zip(meds, meds[1:]))
                verdicts["discrepancy_decreasing"] = _verdict(dec, True, "==")
            q = per_degree.get(top)
            verdicts["discrepancy_at_max_degree"] = _verdict(
                _median(q, "angular_discrepancy"), th("discrepancy_at_max_degree"), "<=")
            verdicts["band_mass_at_max_degree"] = _verdict(
                _median(q, "band_mass"), th("band_mass_at_max_degree"), ">=")
            verdicts["lognorm_max_dev_at_max_degree"] = _verdict(
                _median(q, "lognorm_max_dev"), th("lognorm_max_dev_at_max_degree"), "<=")

    if config.suite == "dichotomy" and not finite:
        scans = [r for r in records if r.kind == "record"]
        by_trial: dict[int, list[TrialRecord]] = {}
        for r in scans:
            by_trial.setdefault(r.trial_index, []).append(r)
        collapsed = [r for r in scans if r.converged and r.collapse]
        hit_trials = sorted({r.trial_index for r in collapsed})
        frac = len(hit_trials) / config.trials
        band = _quantiles([r.stats["band_mass"] for r in collapsed])
        findings["record_scan"] = {
            "records_per_trial": {str(t): [r.degree for r in v] for t, v in sorted(by_trial.items())},
            "collapsed_per_trial": {str(t): [r.degree for r in v if r.converged and r.collapse]
                                    for t, v in sorted(by_trial.items())},
            "trials_with_collapse": len(hit_trials),
            "collapsed_band_mass": band,
        }
        verdicts["collapse_trial_fraction"] = _verdict(frac, th("collapse_trial_fraction"), ">=")
        verdicts["collapsed_band_mass_median"] = _verdict(
            band["median"] if band else None, th("collapsed_band_mass_median"), "<=")

    if config.suite == "prop23":
        fixed = [r for r in records if r.kind == "fixed"]
        if fixed:
            dists = [r.extras.get("root_at_one_distance", math.inf) for r in fixed]
            q0 = [r.extras.get("log_q0", -math.inf) for r in fixed]
            findings["root_at_one_max_distance"] = float(max(dists))
            findings["min_q0_root"] = float(math.exp(min(q0) / config.degrees[-1])) if min(q0) > -math.inf else 0.0
            q = per_degree.get(top)
            verdicts["discrepancy_at_max_degree"] = _verdict(
                _median(q, "angular_discrepancy"), th("discrepancy_at_max_degree"), "<=")
            verdicts["root_at_one_all_trials"] = _verdict(float(max(dists)), th("root_at_one_distance"), "<=")
            verdicts["q0_root_at_least_one_all_trials"] = _verdict(bool(min(q0) >= 0), True, "==")
        scans = [r for r in records if r.kind == "prop23-record"]
        if scans or not finite:
            qual = [r for r in scans if r.extras.get("qualifying") and r.converged and r.stats]
            trials_hit = sorted({r.trial_index for r in qual})
            disc = _quantiles([r.stats["angular_discrepancy"] for r in qual])
            findings["record_subsequence"] = {
                "records": [[r.trial_index, r.degree, r.extras["ratio"], bool(r.extras["qualifying"])]
                            for r in scans],
                "trials_with_qualifying_index": len(trials_hit),
                "qualifying_discrepancy": disc,
            }
            verdicts["qualifying_trial_fraction"] = _verdict(
                len(trials_hit) / config.trials, th("qualifying_trial_fraction"), ">=")
            verdicts["qualifying_discrepancy_median"] = _verdict(
                disc["median"] if disc else None, th("qualifying_discrepancy_median"), "<=")

    if config.suite == "lemmas":
        lem = [r for r in records if r.kind == "lemma"]
        dev = max(abs(r.extras["rootwise_max_at_n"] - 1) for r in lem)
        gap_seeds = sum(1 for r in lem if r.extras["gaps"])
        win_ok = sum(1 for r in lem if r.extras["window_max_min_100_2000"] >= th("window_max_floor"))
        findings["lemmas"] = {
            "max_rootwise_deviation": dev,
            "seeds_with_gaps": gap_seeds,
            "seeds_window_ok": win_ok,
        }
        verdicts["rootwise_max_near_one"] = _verdict(dev, th("rootwise_max_deviation"), "<=")
        verdicts["no_gaps"] = _verdict(gap_seeds, 0, "==")
        verdicts["window_max_seed_fraction"] = _verdict(
            win_ok / len(lem), th("window_max_seed_fraction"), ">=")

    if config.verdicts is not None:
        verdicts = {k: v for k, v in verdicts.items() if k in config.verdicts}
    return SummaryReport(config.suite, config.to_dict(), per_degree, findings, verdicts,
                         len(failures), len(solved))


def _execute(config: ExperimentConfig, threads: int = 1):
    ctx = _context(config)
    tasks = _tasks(ctx)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda t: _run_task(ctx, t), tasks))
    else:
        results = [_run_task(ctx, t) for t in tasks]
    records, timings, zeros = [], [], {}
    for task, (recs, roots, elapsed) in zip(tasks, results):
        records.extend(recs)
        timings.append({"kind": task[0], "degree": task[1], "trial_index": task[2], "elapsed": elapsed})
        if roots is not None and (config.save_zeros or task[2] == 0):
            zeros[(task[1], task[2])] = roots.roots
    return ctx, records, timings, zeros


def run_experiment(config: ExperimentConfig, threads: int = 1, out: str | Path | None = None,
                   figures: bool | None = None) -> SummaryReport:
    """Run the suite named in ``config``; persist outputs when ``out`` is given.

    Raises :class:`ExperimentAborted` (after writing outputs) when more than
    2% of root solves fail to converge.
    """
    if config.suite == "prop23" and not config.distribution.support_at_least_one:
        raise ValueError("the shifted-monomial suite needs a coefficient law supported in [1, inf)")
    ctx, records, timings, zeros = _execute(config, threads)
    report = summarize(records, config)
    out = out if out is not None else config.outputs
    if out is not None:
        write_outputs(Path(out), report, records, timings, zeros, config, ctx.domain,
                      figures=config.figures if figures is None else figures)
    if report.total_solves and report.excluded / report.total_solves > FAILURE_LIMIT:
        raise ExperimentAborted(
            f"{report.excluded} of {report.total_solves} root solves did not converge", report)
    return report


def run_dichotomy(config: ExperimentConfig, threads: int = 1, out=None) -> SummaryReport:
    if config.suite != "dichotomy":
        config = ExperimentConfig(**{**config.__dict__, "suite": "dichotomy"})
    return run_experiment(config, threads, out)


def run_prop23(config: ExperimentConfig, threads: int = 1, out=None) -> SummaryReport:
    if config.suite != "prop23":
        config = ExperimentConfig(**{**config.__dict__, "suite": "prop23"})
    return run_experiment(config, threads, out)


def run_lemma_suite(config: ExperimentConfig, threads: int = 1, out=None) -> SummaryReport:
    if config.suite != "lemmas":
        config = ExperimentConfig(**{**config.__dict__, "suite": "lemmas"})
    return run_experiment(config, threads, out)


# -- persistence --------------------------------------------------------------------

def read_trials(path) -> list[TrialRecord]:
    with open(path) as fh:
        return [TrialRecord.from_json(line) for line in fh if line.strip()]


def _summary_rows(report: SummaryReport):
    header = ["degree", "trials", "converged", "excluded"]
    for name in STAT_FIELDS:
        header += [f"{name}_median", f"{name}_q1", f"{name}_q3"]
    rows = []
    for d, entry in report.per_degree.items():
        row = [d, entry["trials"], entry["converged"], entry["excluded"]]
        for name in STAT_FIELDS:
            q = entry[name]
            row += ["" if q is None else repr(q[k]) for k in ("median", "q1", "q3")]
        rows.append(row)
    return header, rows


def write_outputs(out: Path, report: SummaryReport, records, timings, zeros,
                  config: ExperimentConfig, domain: Domain, figures: bool = True) -> None:
    import csv

    out.mkdir(parents=True, exist_ok=True)
    with open(out / "trials.jsonl", "w") as fh:
        for r in records:
            fh.write(r.to_json() + "\n")
    with open(out / "timings.jsonl", "w") as fh:
        for t in timings:
            fh.write(json.dumps(t) + "\n")
    header, rows = _summary_rows(report)
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    (out / "summary.json").write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    (out / "verdicts.json").write_text(json.dumps(
        {"suite": report.suite, "degrees": config.degrees, "trials": config.trials,
         "passed": report.passed, "verdicts": report.verdicts}, indent=2))
    if config.save_zeros:
        for (degree, trial), roots in sorted(zeros.items()):
            np.savetxt(out / f"zeros_{degree}_{trial}.csv", np.column_stack((roots.real, roots.imag)),
                       delimiter=",", header="re,im", comments="", fmt="%.17g")
    if figures:
        from . import plotting

        plotting.render_report(out / "figures", report, records, zeros, domain)
