"""I.i.d. complex coefficient ensembles and coefficient-sequence statistics.

Coefficients are stored as ``(log_abs, phase)`` pairs rather than complex
doubles: the log-Pareto laws routinely produce moduli like ``exp(1e8)``,
which no floating point type can hold.  ``CoefficientSequence.values``
materialises the complex numbers when they fit.

Random numbers come from numpy's Philox4x32-10 counter-based generator keyed
directly with the 64-bit seed (``np.random.Philox(key=seed)``), so a
``(spec, n, seed)`` triple reproduces the same draws on every platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "KINDS",
    "DistributionSpec",
    "CoefficientSequence",
    "SequenceDiagnostics",
    "Gap",
    "GapReport",
    "make_rng",
    "log_pareto_modulus",
    "sample_coefficients",
    "classify_log_moment",
    "sequence_diagnostics",
    "detect_gaps",
    "running_max_records",
]

KINDS = (
    "complex-gaussian",
    "uniform-disk",
    "rademacher-complex",
    "cauchy",
    "log-pareto",
    "shifted-log-pareto",
    "log-exponential",
)

# Largest sequence we agree to allocate (two float64 arrays per entry).
MAX_LENGTH = 50_000_000


@dataclass(frozen=True)
class DistributionSpec:
    """A named i.i.d. coefficient law.

    ``alpha`` is the tail index of the log-Pareto laws and the rate of the
    exponential in ``log-exponential``; ``radius`` applies to ``uniform-disk``.
    """

    kind: str
    alpha: float | None = None
    radius: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown distribution kind {self.kind!r}; expected one of {KINDS}")
        if self.kind in ("log-pareto", "shifted-log-pareto", "log-exponential"):
            if self.alpha is None or not self.alpha > 0:
                raise ValueError(f"{self.kind} requires alpha > 0, got {self.alpha!r}")
        if self.kind == "uniform-disk" and not self.radius > 0:
            raise ValueError("uniform-disk requires radius > 0")

    @property
    def support_at_least_one(self) -> bool:
        """True when every draw is real and >= 1."""
        return self.kind in ("shifted-log-pareto", "log-exponential")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "alpha": self.alpha, "radius": self.radius}

    @classmethod
    def from_dict(cls, d: dict) -> "DistributionSpec":
        return cls(kind=d["kind"], alpha=d.get("alpha"), radius=d.get("radius", 1.0))


@dataclass
class CoefficientSequence:
    log_abs: np.ndarray
    phase: np.ndarray
    spec: DistributionSpec | None = None
    seed: int | None = None

    def __len__(self):
        return len(self.log_abs)

    @property
    def n(self) -> int:
        return len(self.log_abs) - 1

    @property
    def values(self) -> np.ndarray:
        """Complex values; entries beyond double range come out infinite."""
        with np.errstate(over="ignore", invalid="ignore"):
            mod = np.exp(self.log_abs)
            out = mod * self.phase
        big = np.isinf(mod)
        out[big] = np.inf * self.phase[big]
        return out

    @property
    def moduli(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_abs)

    def prefix(self, n: int) -> "CoefficientSequence":
        return CoefficientSequence(self.log_abs[: n + 1], self.phase[: n + 1], self.spec, self.seed)

    @classmethod
    def from_values(cls, values, spec=None, seed=None) -> "CoefficientSequence":
        v = np.asarray(values, dtype=complex)
        mod = np.abs(v)
        with np.errstate(divide="ignore"):
            log_abs = np.log(mod)
        phase = np.ones_like(v)
        nz = mod > 0
        phase[nz] = v[nz] / mod[nz]
        return cls(log_abs, phase, spec, seed)


def make_rng(seed: int) -> np.random.Generator:
    """Philox generator keyed by the 64-bit ``seed`` (counter starts at 0)."""
    return np.random.Generator(np.random.Philox(key=int(seed) & 0xFFFFFFFFFFFFFFFF))


def log_pareto_modulus(u, alpha):
    """Inverse CDF of the log-Pareto law, returned as ``log|A| = u**(-1/alpha)``.

    With ``u`` uniform on (0, 1], ``P(|A| > x) = (log x)**(-alpha)`` for x >= e.
    """
    return np.power(u, -1.0 / alpha)


def _unit_uniform(rng, size):
    # uniform on (0, 1]
    return 1.0 - rng.random(size)


def sample_coefficients(spec: DistributionSpec, n: int, seed: int) -> CoefficientSequence:
    """Draw ``A_0, ..., A_n`` i.i.d. from ``spec``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n + 1 > MAX_LENGTH:
        raise MemoryError(f"refusing to allocate {n + 1} coefficients (limit {MAX_LENGTH})")
    size = n + 1
    rng = make_rng(seed)
    kind = spec.kind
    if kind == "complex-gaussian":
        z = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        return CoefficientSequence.from_values(z, spec, seed)
    if kind == "uniform-disk":
        r = spec.radius * np.sqrt(_unit_uniform(rng, size))
        theta = 2 * np.pi * rng.random(size)
        return CoefficientSequence(np.log(r), np.exp(1j * theta), spec, seed)
    if kind == "rademacher-complex":
        k = rng.integers(0, 4, size)
        phase = np.array([1, 1j, -1, -1j], dtype=complex)[k]
        return CoefficientSequence(np.zeros(size), phase, spec, seed)
    if kind == "cauchy":
        return CoefficientSequence.from_values(rng.standard_cauchy(size).astype(complex), spec, seed)
    if kind == "log-pareto":
        log_abs = log_pareto_modulus(_unit_uniform(rng, size), spec.alpha)
        theta = 2 * np.pi * rng.random(size)
        return CoefficientSequence(log_abs, np.exp(1j * theta), spec, seed)
    if kind == "shifted-log-pareto":
        log_abs = log_pareto_modulus(_unit_uniform(rng, size), spec.alpha)
        return CoefficientSequence(log_abs, np.ones(size, dtype=complex), spec, seed)
    if kind == "log-exponential":
        log_abs = rng.exponential(1.0 / spec.alpha, size)
        return CoefficientSequence(log_abs, np.ones(size, dtype=complex), spec, seed)
    raise AssertionError(kind)


def classify_log_moment(spec: DistributionSpec) -> str:
    """Return ``"finite"`` or ``"infinite"`` for E[log+ |A_0|]."""
    if spec.kind in ("log-pareto", "shifted-log-pareto"):
        return "infinite" if spec.alpha <= 1 else "finite"
    return "finite"


@dataclass
class SequenceDiagnostics:
    """Root-normalised running maxima of ``|A_k|``, indexed by ``degrees`` (1..n)."""

    degrees: np.ndarray
    rootwise_max: np.ndarray
    window_max: np.ndarray
    window_b: float
    record_indices: np.ndarray
    log_rootwise_max: np.ndarray = field(repr=False, default=None)
    log_window_max: np.ndarray = field(repr=False, default=None)

    def at(self, n: int) -> tuple[float, float]:
        return float(self.rootwise_max[n - 1]), float(self.window_max[n - 1])


def _window_starts(degrees: np.ndarray, b: float) -> np.ndarray:
    # first index k with ceil(n - b log n) < k
    lo = np.ceil(degrees - b * np.log(degrees)).astype(np.int64) + 1
    return np.clip(lo, 0, None)


def _range_max(x: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """max(x[lo:hi+1]) for each query via a sparse table; requires lo <= hi."""
    table = [x]
    width = 1
    while 2 * width <= len(x):
        prev = table[-1]
        table.append(np.maximum(prev[:-width], prev[width:]))
        width *= 2
    length = hi - lo + 1
    level = np.floor(np.log2(length)).astype(np.int64)
    out = np.empty(len(lo))
    for j in np.unique(level):
        sel = level == j
        t = table[j]
        out[sel] = np.maximum(t[lo[sel]], t[hi[sel] - (1 << j) + 1])
    return out


def sequence_diagnostics(seq: CoefficientSequence, b: float = 10.0) -> SequenceDiagnostics:
    """Running maxima ``(max |A_k|)^(1/n)`` over [0, n] and over the trailing
    window ``ceil(n - b log n) < k <= n``, plus record indices.

    ``n`` is a record when ``|A_n|^(1/n) >= max_{1<=k<n} |A_k|^(1/k)``; n = 1
    always is.  An empty window (n = 1) falls back to ``|A_n|^(1/n)``.
    """
    if not b > 0:
        raise ValueError("b must be positive")
    la = np.asarray(seq.log_abs, dtype=float)
    if len(la) < 2:
        empty = np.array([], dtype=float)
        return SequenceDiagnostics(np.array([], dtype=np.int64), empty, empty, b,
                                   np.array([], dtype=np.int64), empty, empty)
    n_max = len(la) - 1
    degrees = np.arange(1, n_max + 1)
    log_run = np.maximum.accumulate(la)[1:]
    lo = _window_starts(degrees, b)
    hi = degrees.copy()
    empty = lo > hi
    lo_q = np.where(empty, hi, lo)
    log_win = _range_max(la, lo_q, hi)
    log_rootwise = log_run / degrees
    log_window = log_win / degrees
    with np.errstate(over="ignore"):
        rootwise = np.exp(log_rootwise)
        window = np.exp(log_window)

    per_index = la[1:] / degrees
    prev_best = np.concatenate(([-np.inf], np.maximum.accumulate(per_index)[:-1]))
    records = degrees[per_index >= prev_best]
    return SequenceDiagnostics(degrees, rootwise, window, b, records, log_rootwise, log_window)


@dataclass(frozen=True)
class Gap:
    start: int
    end: int
    estimated_q: float


@dataclass
class GapReport:
    gaps: list[Gap]
    c: float
    q: float
    min_end: int

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "q": self.q,
            "min_end": self.min_end,
            "gaps": [[g.start, g.end, g.estimated_q] for g in self.gaps],
        }


def detect_gaps(seq: CoefficientSequence, c: float, q: float, min_end: int = 10) -> GapReport:
    """Maximal runs ``[m, n_k]`` with ``|A_j| <= q**j`` throughout and ``m <= c*n_k``.

    Runs ending before ``min_end`` are ignored: near the origin ``q**j`` is
    close to 1 and short runs occur by chance for every law.
    """
    if not 0 < c < 1 or not 0 < q < 1:
        raise ValueError("need 0 < c < 1 and 0 < q < 1")
    la = np.asarray(seq.log_abs, dtype=float)
    j = np.arange(len(la))
    ok = la <= j * math.log(q)
    gaps = []
    if ok.any():
        edges = np.diff(np.concatenate(([0], ok.astype(np.int8), [0])))
        starts = np.flatnonzero(edges == 1)
        ends = np.flatnonzero(edges == -1) - 1
        for s, e in zip(starts, ends):
            if e < min_end or s > c * e:
                continue
            idx = np.arange(max(s, 1), e + 1)
            est = float(np.exp(np.max(la[idx] / idx))) if len(idx) else 0.0
            gaps.append(Gap(int(s), int(e), est))
    return GapReport(gaps, c, q, min_end)


def running_max_records(seq: CoefficientSequence) -> np.ndarray:
    """Indices n >= 1 with ``|A_n| = max_{1<=i<=n} |A_i|``."""
    la = np.asarray(seq.log_abs, dtype=float)[1:]
    if len(la) == 0:
        return np.array([], dtype=np.int64)
    return np.flatnonzero(la >= np.maximum.accumulate(la)) + 1
