"""Reproducible Monte Carlo experiments on G(n, p).

Determinism contract
--------------------
The edge stream is produced by a fixed, explicitly specified 64-bit
counter-based generator (no platform default), so the same (seed, sample
index) yields the same graph on every platform, run, and thread count.

Two-level SplitMix64 scheme (all arithmetic mod 2**64; the golden-ratio
increment lives in the counters, the finalizer is pure mixing)::

    mix64(z):
        z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
        z ^= z >> 27;  z *= 0x94D049BB133111EB
        z ^= z >> 31
    sample_key(seed, index) = mix64(seed + (index + 1) * GOLDEN)
    edge_value(key, j)      = mix64(key + (j + 1) * GOLDEN)

with GOLDEN = 0x9E3779B97F4A7C15 and j the 0-based lexicographic index of
the vertex pair (i1, i2), i1 < i2.  The pair is an edge iff
edge_value < floor(p * 2**64).

For p given as an exponent alpha (p = n**-alpha) the threshold is computed
by exact integer arithmetic (integer n-th root of 2**(64 b) // n**a for
alpha = a/b), so not even a libm call enters the stream definition.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt
from pathlib import Path

import numpy as np

from ._version import __version__
from .analysis import count_subgraph_copies, has_subgraph_copy
from .errors import DomainError, ValidationError
from .graphs import Graph, complete_graph, cycle_graph, parse_graph, path_graph
from .rational import parse_rational

GOLDEN = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1
GENERATOR_ID = "splitmix64-two-level-v1"

EVENTS = ("zero_copies", "has_copy", "copy_count_histogram")

SEED_ENV_VAR = "ZOL_SEED"


# ---- the generator -----------------------------------------------------------

def mix64(z: int) -> int:
    """SplitMix64 finalizer on a 64-bit word (pure-int reference version)."""
    z &= _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return z


def sample_key(seed: int, index: int) -> int:
    return mix64((seed + (index + 1) * GOLDEN) & _MASK64)


def _mix64_np(z: np.ndarray, inplace: bool = False) -> np.ndarray:
    if not inplace:
        z = z.copy()
    z ^= z >> np.uint64(30)
    z *= np.uint64(0xBF58476D1CE4E5B9)
    z ^= z >> np.uint64(27)
    z *= np.uint64(0x94D049BB133111EB)
    z ^= z >> np.uint64(31)
    return z


def integer_nth_root(x: int, n: int) -> int:
    """floor(x ** (1/n)) for non-negative integers, exact."""
    if x < 0 or n < 1:
        raise DomainError("need x >= 0 and n >= 1")
    if x == 0:
        return 0
    if n == 1:
        return x
    r = 1 << ((x.bit_length() + n - 1) // n)  # upper start for Newton descent
    while True:
        nxt = ((n - 1) * r + x // r ** (n - 1)) // n
        if nxt >= r:
            break
        r = nxt
    while r ** n > x:
        r -= 1
    return r


def threshold_for_probability(p: float) -> int:
    """floor(p * 2**64), clamped to [0, 2**64]."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"need 0 <= p <= 1, got {p}")
    return min(1 << 64, max(0, int(p * 2.0 ** 64)))


def threshold_for_exponent(n: int, alpha: Fraction) -> int:
    """floor(n**-alpha * 2**64) by exact integer arithmetic (no libm)."""
    if n < 1:
        raise DomainError("need n >= 1")
    if alpha < 0:
        raise DomainError("need alpha >= 0")
    a, b = alpha.numerator, alpha.denominator
    if n == 1 or a == 0:
        return 1 << 64
    return integer_nth_root((1 << (64 * b)) // n ** a, b)


def _pair_offsets(n: int) -> np.ndarray:
    i = np.arange(n, dtype=np.int64)
    return i * n - i * (i + 1) // 2


def edge_indices_to_pairs(index: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Invert the lexicographic pair index: j -> (i1, i2) with i1 < i2."""
    offsets = _pair_offsets(n)
    i1 = np.searchsorted(offsets, index, side="right") - 1
    i2 = index - offsets[i1] + i1 + 1
    return i1, i2


def _edge_counters(n: int) -> np.ndarray:
    m = n * (n - 1) // 2
    return np.arange(1, m + 1, dtype=np.uint64) * np.uint64(GOLDEN)


def sample_edge_array(n: int, threshold: int, seed: int, index: int,
                      counters: np.ndarray | None = None
                      ) -> tuple[np.ndarray, np.ndarray]:
    """Present edges of sample `index` as endpoint arrays (vectorized).

    `counters` may carry the precomputed _edge_counters(n) array; batch
    callers reuse it to avoid one allocation pass per sample.
    """
    m = n * (n - 1) // 2
    if m == 0 or threshold <= 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    if counters is None:
        counters = _edge_counters(n)
    key = sample_key(seed, index)
    values = _mix64_np(counters + np.uint64(key), inplace=True)
    if threshold >= 1 << 64:
        hits = np.arange(m, dtype=np.int64)
    else:
        hits = np.flatnonzero(values < np.uint64(threshold)).astype(np.int64)
    return edge_indices_to_pairs(hits, n)


def sample_gnp_edges_purepython(n: int, threshold: int, seed: int,
                                index: int) -> list[tuple[int, int]]:
    """Reference edge sampler used to cross-check the vectorized path."""
    key = sample_key(seed, index)
    edges = []
    j = 0
    for i1 in range(n):
        for i2 in range(i1 + 1, n):
            if mix64((key + (j + 1) * GOLDEN) & _MASK64) < threshold:
                edges.append((i1, i2))
            j += 1
    return edges


def sample_gnp(n: int, p: float, seed: int, index: int) -> Graph:
    """One G(n, p) draw; the stream depends only on (seed, index)."""
    threshold = threshold_for_probability(p)
    i1, i2 = sample_edge_array(n, threshold, seed, index)
    return Graph.from_edges(n, zip(i1.tolist(), i2.tolist()))


def sample_gnp_alpha(n: int, alpha: Fraction, seed: int, index: int) -> Graph:
    """One G(n, n**-alpha) draw with the exact-threshold exponent path."""
    threshold = threshold_for_exponent(n, alpha)
    i1, i2 = sample_edge_array(n, threshold, seed, index)
    return Graph.from_edges(n, zip(i1.tolist(), i2.tolist()))


# ---- experiments ---------------------------------------------------------------

def wilson_interval(hits: int, trials: int, z: float = 1.96
                    ) -> tuple[float, float]:
    """95% Wilson score interval; stable at frequencies near 0 and 1."""
    if trials < 1:
        raise DomainError("need trials >= 1")
    phat = hits / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


_BUILTIN_PATTERNS = {
    "K3": lambda: complete_graph(3),
    "K4": lambda: complete_graph(4),
    "edge": lambda: complete_graph(2),
}


def pattern_from_spec(spec) -> Graph:
    """Pattern references accepted in manifests: a builtin name ("K3", "K4",
    "edge"), {"clique": m}, {"cycle": d}, {"path": n}, {"edge_list": text},
    or {"file": path}."""
    if isinstance(spec, str):
        if spec in _BUILTIN_PATTERNS:
            return _BUILTIN_PATTERNS[spec]()
        raise ValidationError(f"unknown builtin pattern {spec!r}")
    if isinstance(spec, dict):
        if len(spec) != 1:
            raise ValidationError("pattern object must have exactly one key")
        kind, value = next(iter(spec.items()))
        if kind == "clique":
            return complete_graph(int(value))
        if kind == "cycle":
            return cycle_graph(int(value))
        if kind == "path":
            return path_graph(int(value))
        if kind == "edge_list":
            return parse_graph(value)
        if kind == "file":
            return parse_graph(Path(value).read_text())
        raise ValidationError(f"unknown pattern kind {kind!r}")
    raise ValidationError(f"bad pattern spec: {spec!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte Carlo experiment: event frequency for a pattern in G(n, p).

    Exactly one of `alpha` (p = n**-alpha) or `p` must be given.
    """

    n: int
    samples: int
    seed: int
    event: str
    pattern: Graph
    alpha: Fraction | None = None
    p: float | None = None
    name: str = "experiment"
    expect: dict | None = None

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise DomainError("need samples >= 1")
        if self.n < 1:
            raise DomainError("need n >= 1")
        if self.event not in EVENTS:
            raise DomainError(f"event must be one of {EVENTS}")
        if (self.alpha is None) == (self.p is None):
            raise DomainError("exactly one of alpha or p must be set")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise DomainError("need 0 <= p <= 1")

    @property
    def threshold(self) -> int:
        if self.alpha is not None:
            return threshold_for_exponent(self.n, self.alpha)
        return threshold_for_probability(self.p)

    def describe(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "event": self.event,
            "alpha": str(self.alpha) if self.alpha is not None else None,
            "p": self.p,
            "p_effective": self.threshold / 2.0 ** 64,
            "pattern_vertices": self.pattern.vertex_count,
            "pattern_edges": self.pattern.edge_count,
        }


@dataclass(frozen=True)
class ExperimentRecord:
    """Result of one experiment; frequency lies inside its Wilson interval."""

    config: dict
    hits: int
    frequency: float
    ci_low: float
    ci_high: float
    wall_time_s: float
    histogram: dict[int, int] | None = None
    version: str = __version__
    generator: str = GENERATOR_ID

    def to_json_dict(self) -> dict:
        out = {
            "config": self.config,
            "hits": self.hits,
            "frequency": self.frequency,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "wall_time_s": self.wall_time_s,
            "version": self.version,
            "generator": self.generator,
        }
        if self.histogram is not None:
            out["histogram"] = {str(k): v for k, v in sorted(self.histogram.items())}
        return out


CSV_FIELDS = ["name", "n", "samples", "seed", "event", "alpha", "p",
              "p_effective", "hits", "frequency", "ci_low", "ci_high",
              "wall_time_s", "version", "generator"]


def record_to_csv_row(record: ExperimentRecord) -> dict:
    row = {k: record.config.get(k) for k in
           ("name", "n", "samples", "seed", "event", "alpha", "p", "p_effective")}
    row.update(hits=record.hits, frequency=record.frequency,
               ci_low=record.ci_low, ci_high=record.ci_high,
               wall_time_s=record.wall_time_s, version=record.version,
               generator=record.generator)
    return row


def _edges_to_adjacency(i1: np.ndarray, i2: np.ndarray) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {}
    for a, b in zip(i1.tolist(), i2.tolist()):
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    return adj


def _has_triangle(i1: np.ndarray, i2: np.ndarray) -> bool:
    adj = _edges_to_adjacency(i1, i2)
    for a, b in zip(i1.tolist(), i2.tolist()):
        if adj[a] & adj[b]:
            return True
    return False


def _sample_has_copy(config: ExperimentConfig, threshold: int, index: int,
                     counters: np.ndarray) -> bool:
    i1, i2 = sample_edge_array(config.n, threshold, config.seed, index, counters)
    pattern = config.pattern
    if (pattern.vertex_count, pattern.edge_count) == (3, 3):
        return _has_triangle(i1, i2)  # fast path for the workhorse pattern
    host = Graph.from_edges(config.n, zip(i1.tolist(), i2.tolist()))
    return has_subgraph_copy(host, pattern)


def _sample_copy_count(config: ExperimentConfig, threshold: int, index: int,
                       counters: np.ndarray) -> int:
    i1, i2 = sample_edge_array(config.n, threshold, config.seed, index, counters)
    host = Graph.from_edges(config.n, zip(i1.tolist(), i2.tolist()))
    return count_subgraph_copies(host, config.pattern)


def estimate_event(config: ExperimentConfig, threads: int = 1,
                   out_path: str | Path | None = None) -> ExperimentRecord:
    """Estimate the event frequency across the config's sample stream.

    Aggregation is a plain sum over per-index indicators, so the result is
    independent of the thread schedule.  With `out_path` the record is
    appended to that file as one JSON line.
    """
    start = time.perf_counter()
    threshold = config.threshold
    counters = _edge_counters(config.n)
    histogram: Counter[int] | None = None

    if config.event == "copy_count_histogram":
        def work(index: int) -> int:
            return _sample_copy_count(config, threshold, index, counters)
    else:
        def work(index: int) -> bool:
            return _sample_has_copy(config, threshold, index, counters)

    indices = range(config.samples)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(work, indices, chunksize=16))
    else:
        outcomes = [work(i) for i in indices]

    if config.event == "copy_count_histogram":
        histogram = Counter(outcomes)
        hits = histogram.get(0, 0)  # headline frequency: P(no copy)
    elif config.event == "has_copy":
        hits = sum(1 for o in outcomes if o)
    else:  # zero_copies
        hits = sum(1 for o in outcomes if not o)

    frequency = hits / config.samples
    low, high = wilson_interval(hits, config.samples)
    record = ExperimentRecord(
        config=config.describe(), hits=hits, frequency=frequency,
        ci_low=low, ci_high=high,
        wall_time_s=time.perf_counter() - start,
        histogram=dict(histogram) if histogram is not None else None)
    if out_path is not None:
        path = Path(out_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("a") as fh:
            fh.write(json.dumps(record.to_json_dict()) + "\n")
    return record


# ---- manifests / suites ----------------------------------------------------------

def config_from_dict(doc: dict, seed_override: int | None = None
                     ) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ValidationError("experiment entry must be an object")
    required = {"n", "samples", "event", "pattern"}
    missing = required - doc.keys()
    if missing:
        raise ValidationError(f"experiment missing keys: {sorted(missing)}")
    if ("alpha" in doc) == ("p" in doc):
        raise ValidationError("exactly one of 'alpha' or 'p' must be given")
    seed = seed_override if seed_override is not None else doc.get("seed", 0)
    try:
        return ExperimentConfig(
            n=int(doc["n"]),
            samples=int(doc["samples"]),
            seed=int(seed),
            event=str(doc["event"]),
            pattern=pattern_from_spec(doc["pattern"]),
            alpha=parse_rational(str(doc["alpha"])) if "alpha" in doc else None,
            p=float(doc["p"]) if "p" in doc else None,
            name=str(doc.get("name", "experiment")),
            expect=doc.get("expect"))
    except DomainError as exc:
        raise ValidationError(str(exc)) from None


def check_expectation(record: ExperimentRecord, expect: dict | None
                      ) -> list[str]:
    """Breach messages for the thresholds declared in the manifest entry."""
    if not expect:
        return []
    breaches = []
    f = record.frequency
    if "min_frequency" in expect and f < expect["min_frequency"]:
        breaches.append(f"frequency {f:.6f} < min {expect['min_frequency']}")
    if "max_frequency" in expect and f > expect["max_frequency"]:
        breaches.append(f"frequency {f:.6f} > max {expect['max_frequency']}")
    if "target_frequency" in expect:
        tol = expect.get("tolerance", 0.0)
        target = expect["target_frequency"]
        if abs(f - target) > tol:
            breaches.append(
                f"|frequency {f:.6f} - target {target}| > tolerance {tol}")
    return breaches


@dataclass
class SuiteResult:
    records: list[ExperimentRecord]
    breaches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.breaches


def run_suite(manifest: dict | str | Path, out_dir: str | Path | None = None,
              threads: int = 1, seed_override: int | None = None
              ) -> SuiteResult:
    """Run every experiment in a manifest; optionally persist CSV + JSON.

    The manifest is {"experiments": [...]}; per-entry "expect" blocks turn
    into breach messages (the CLI maps any breach to a nonzero exit code).
    The ZOL_SEED environment variable, or seed_override, replaces every
    experiment's seed (smoke-test hook).  The results store appends:
    re-running into the same out_dir extends results.csv / results.json
    rather than replacing them.
    """
    if isinstance(manifest, (str, Path)):
        try:
            doc = json.loads(Path(manifest).read_text())
        except json.JSONDecodeError as exc:
            raise ValidationError(f"manifest is not valid JSON: {exc}") from None
    else:
        doc = manifest
    if not isinstance(doc, dict) or not isinstance(doc.get("experiments"), list):
        raise ValidationError("manifest must be {'experiments': [...]}")
    if seed_override is None and os.environ.get(SEED_ENV_VAR):
        try:
            seed_override = int(os.environ[SEED_ENV_VAR])
        except ValueError:
            raise ValidationError(
                f"{SEED_ENV_VAR} must be an integer, got "
                f"{os.environ[SEED_ENV_VAR]!r}") from None

    result = SuiteResult(records=[])
    for entry in doc["experiments"]:
        config = config_from_dict(entry, seed_override)
        record = estimate_event(config, threads=threads)
        result.records.append(record)
        for breach in check_expectation(record, config.expect):
            result.breaches.append(f"{config.name}: {breach}")

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        json_path = out / "results.json"
        store = {"records": [], "breaches": []}
        if json_path.exists():
            try:
                store = json.loads(json_path.read_text())
            except json.JSONDecodeError:
                raise ValidationError(
                    f"existing results store {json_path} is not valid JSON")
        store["records"].extend(r.to_json_dict() for r in result.records)
        store["breaches"].extend(result.breaches)
        json_path.write_text(json.dumps(store, indent=2) + "\n")

        csv_path = out / "results.csv"
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS)
        if not csv_path.exists():
            writer.writeheader()
        for r in result.records:
            writer.writerow(record_to_csv_row(r))
        with csv_path.open("a") as fh:
            fh.write(buf.getvalue())
    return result
