"""Monte Carlo ensembles, parameter sweeps and data-collapse rescaling.

Realization ``r`` of a config with seed ``s`` is generated with seed
``derive_seed(s, r)`` (SplitMix64), so every realization can be rebuilt on its
own and results do not depend on worker count or scheduling.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import metrics as M
from .config import NetworkConfig
from .errors import DegenerateInputError, InvalidParameterError, MissingColumnError, NoPeakError
from .graphcore import components
from .netgen import expected_mean_degree, generate
from .robustness import (RobustnessCurve, attack_order, critical_threshold, edge_cut_attack,
                         edge_removal_profile, node_removal_profile, refine_grid, removal_grid)
from .seeding import STREAM_PROTOCOL, derive_seed, numpy_rng

DEFAULT_REALIZATIONS = 1000
METRIC_SELECTORS = ("mean_degree", "second_moment", "giant_fraction", "avg_shortest_path",
                    "diameter", "avg_clustering")
ROBUSTNESS_SELECTORS = {"fc_random_node": "random_node", "fc_targeted": "targeted",
                        "fc_random_link": "random_link"}
PROTOCOLS = ("random_node", "targeted", "random_link", "edge_cut")
SWEEP_AXES = ("n", "rho", "n_p", "radius")


def realization_seed(seed, r):
    return derive_seed(seed, r)


def realization_config(config, r):
    return config.with_seed(realization_seed(config.seed, r))


def parallel_map(fn, items, threads=1):
    """Ordered map, in-process for ``threads <= 1`` and over a process pool otherwise."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))


def summarize(values):
    """Mean and standard error (unbiased variance) of the finite entries.

    Returns ``(mean, stderr, count)``; a single value has stderr 0.
    """
    v = [float(x) for x in values if math.isfinite(x)]
    if not v:
        return float("nan"), float("nan"), 0
    mean = math.fsum(v) / len(v)
    if len(v) == 1:
        return mean, 0.0, 1
    var = math.fsum((x - mean) ** 2 for x in v) / (len(v) - 1)
    return mean, math.sqrt(var / len(v)), len(v)


def _realization_metrics(task):
    config, selectors, want_counts = task
    g = generate(config)
    out = {}
    ds = M.degree_stats(g)
    out["mean_degree"] = ds.mean
    out["second_moment"] = ds.second_moment
    if "giant_fraction" in selectors:
        out["giant_fraction"] = components(g).giant_size / g.n
    if "avg_shortest_path" in selectors or "diameter" in selectors:
        try:
            l, d = M.path_stats(g)
        except DegenerateInputError:
            l, d = float("nan"), float("nan")
        out["avg_shortest_path"] = l
        out["diameter"] = float(d)
    if "avg_clustering" in selectors:
        out["avg_clustering"] = M.avg_clustering(g)
    counts = M.degree_counts(g) if want_counts else None
    return {k: out[k] for k in selectors if k in out}, counts


@dataclass
class EnsembleResult:
    """Per-metric means and standard errors over the realizations of one config.

    ``count`` is the number of realizations where a metric was defined (path
    metrics are undefined when the giant has fewer than two nodes).
    """

    config: NetworkConfig
    realizations: int
    mean: dict = field(default_factory=dict)
    stderr: dict = field(default_factory=dict)
    count: dict = field(default_factory=dict)
    raw: dict | None = None
    degree_counts: np.ndarray | None = None
    curves: dict = field(default_factory=dict)


def run_ensemble(config, realizations=DEFAULT_REALIZATIONS, selectors=METRIC_SELECTORS,
                 threads=1, keep_raw=False, degree_counts=False, **robustness_kw) -> EnsembleResult:
    """Generate ``realizations`` graphs and aggregate the selected metrics.

    Robustness selectors (``fc_random_node``, ``fc_targeted``,
    ``fc_random_link``) run the matching protocol on the same realizations and
    report the ensemble critical fraction with a bootstrap standard error.
    """
    if realizations < 1:
        raise InvalidParameterError("realizations must be >= 1")
    selectors = tuple(selectors)
    unknown = [s for s in selectors if s not in METRIC_SELECTORS and s not in ROBUSTNESS_SELECTORS]
    if unknown:
        raise InvalidParameterError(f"unknown selectors {unknown}")
    metric_sel = tuple(s for s in selectors if s in METRIC_SELECTORS)
    tasks = [(realization_config(config, r), metric_sel, degree_counts) for r in range(realizations)]
    try:
        outs = parallel_map(_realization_metrics, tasks, threads)
    except Exception as exc:
        raise RuntimeError(f"ensemble for {config.model} n={config.n} failed: {exc}") from exc
    res = EnsembleResult(config, realizations)
    raw = {s: [o[0][s] for o in outs] for s in metric_sel}
    for s in metric_sel:
        res.mean[s], res.stderr[s], res.count[s] = summarize(raw[s])
    if keep_raw:
        res.raw = raw
    if degree_counts:
        width = max(len(o[1]) for o in outs)
        total = np.zeros(width, dtype=np.int64)
        for _, c in outs:
            total[:len(c)] += c
        res.degree_counts = total
    for s in selectors:
        if s in ROBUSTNESS_SELECTORS:
            curve = run_robustness(config, ROBUSTNESS_SELECTORS[s], realizations,
                                   threads=threads, **robustness_kw)
            res.curves[s] = curve
            res.mean[s] = curve.f_c if curve.f_c is not None else float("nan")
            res.stderr[s] = curve.f_c_stderr if curve.f_c_stderr is not None else float("nan")
            res.count[s] = realizations
    return res


def _robustness_realization(task):
    config, protocol, mode, pair_budget = task
    g = generate(config)
    rng = numpy_rng(config.seed, STREAM_PROTOCOL)
    if protocol == "random_node":
        return node_removal_profile(g, rng.permutation(g.n))
    if protocol == "targeted":
        return node_removal_profile(g, attack_order(g, mode))
    if protocol == "random_link":
        return edge_removal_profile(g, rng.permutation(g.n_edges))
    if protocol == "edge_cut":
        return edge_cut_attack(g, rng, pair_budget), g.n
    raise InvalidParameterError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")


def _stack(profiles, grid):
    ng, iso = zip(*(p.observables(grid) for p in profiles))
    return np.array(ng), np.array(iso)


def _curve_from_matrix(grid, ng, iso):
    s_ng = [summarize(col) for col in ng.T]
    s_iso = [summarize(col) for col in iso.T]
    return RobustnessCurve(np.asarray(grid), np.array([s[0] for s in s_ng]),
                           np.array([s[0] for s in s_iso]),
                           n_g_stderr=np.array([s[1] for s in s_ng]),
                           n_iso_stderr=np.array([s[1] for s in s_iso]))


def _threshold_or_none(curve):
    try:
        return critical_threshold(curve)
    except NoPeakError:
        return None


def _bootstrap_fc(grid, ng, iso, seed, rounds):
    rng = numpy_rng(seed, STREAM_PROTOCOL + 100)
    r = iso.shape[0]
    vals = []
    for _ in range(rounds):
        pick = rng.integers(0, r, r)
        curve = RobustnessCurve(grid, ng[pick].mean(axis=0), iso[pick].mean(axis=0))
        fc = _threshold_or_none(curve)
        if fc is not None:
            vals.append(fc)
    if len(vals) < 2:
        return float("nan")
    return float(np.std(vals, ddof=1))


def _step_resample(curve, grid):
    """Piecewise-constant value of an edge-cut curve at each grid fraction."""
    idx = np.searchsorted(curve.f_grid, grid, side="right") - 1
    return curve.n_g[idx], curve.n_iso[idx]


def run_robustness(config, protocol, realizations=DEFAULT_REALIZATIONS, mode="adaptive",
                   grid_step=0.01, refine_step=0.002, refine_halfwidth=0.03, pair_budget=500,
                   threads=1, bootstrap=200) -> RobustnessCurve:
    """Ensemble-averaged robustness curve with its critical fraction.

    Node and random-link protocols are first averaged on a grid of spacing
    ``grid_step``; the grid is then refined to ``refine_step`` within
    ``refine_halfwidth`` of the isolated-cluster peak. The edge-cut protocol is
    resampled onto the ``grid_step`` grid up to the largest fraction reached by
    every realization.
    """
    if protocol not in PROTOCOLS:
        raise InvalidParameterError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")
    if realizations < 1:
        raise InvalidParameterError("realizations must be >= 1")
    tasks = [(realization_config(config, r), protocol, mode, pair_budget)
             for r in range(realizations)]
    outs = parallel_map(_robustness_realization, tasks, threads)
    if protocol == "edge_cut":
        limit = 1.0
        for curve, n in outs:
            shattered = curve.n_g[-1] * n < 2
            if not shattered:
                limit = min(limit, float(curve.f_grid[-1]))
        grid = removal_grid(grid_step)
        grid = grid[grid <= limit + 1e-12]
        pairs = [_step_resample(c, grid) for c, _ in outs]
        ng = np.array([p[0] for p in pairs])
        iso = np.array([p[1] for p in pairs])
        curve = _curve_from_matrix(grid, ng, iso)
        curve.f_c = _threshold_or_none(curve) if len(grid) >= 3 else None
        return curve
    grid = removal_grid(grid_step)
    ng, iso = _stack(outs, grid)
    coarse = _curve_from_matrix(grid, ng, iso)
    peak = _threshold_or_none(coarse)
    if peak is not None and refine_step and refine_step < grid_step:
        grid = refine_grid(grid, peak, refine_halfwidth, refine_step)
        ng, iso = _stack(outs, grid)
    curve = _curve_from_matrix(grid, ng, iso)
    curve.f_c = _threshold_or_none(curve)
    if curve.f_c is not None and bootstrap and realizations > 1:
        curve.f_c_stderr = _bootstrap_fc(grid, ng, iso, config.seed, bootstrap)
    return curve


def calibrate_radius(config, target_mean_degree, samples=2, rel_tol=1e-4):
    """Coverage radius giving the requested expected mean degree (SBQI/OFBQI).

    Bisects on log-radius using :func:`expected_mean_degree`, which for fixed
    seeds decreases monotonically with the radius.
    """
    if config.model not in ("SBQI", "OFBQI"):
        raise InvalidParameterError("radius calibration applies to SBQI and OFBQI only")
    base = replace(config, rho=None, radius=config.disk_radius)

    def k_at(r):
        return expected_mean_degree(replace(base, radius=r), samples)

    lo, hi = base.radius, base.radius
    while k_at(lo) < target_mean_degree:
        lo /= 2.0
        if lo < 1e-6:
            raise InvalidParameterError("target mean degree is not reachable")
    while k_at(hi) > target_mean_degree:
        hi *= 2.0
        if hi > 1e9:
            raise InvalidParameterError("target mean degree is not reachable")
    while hi / lo - 1.0 > rel_tol:
        mid = math.sqrt(lo * hi)
        if k_at(mid) > target_mean_degree:
            lo = mid
        else:
            hi = mid
    return replace(base, radius=math.sqrt(lo * hi))


@dataclass(frozen=True)
class SweepSpec:
    base: NetworkConfig
    axis: str
    values: tuple
    realizations: int = DEFAULT_REALIZATIONS
    metrics: tuple = METRIC_SELECTORS

    def __post_init__(self):
        axis = "n" if self.axis == "N" else self.axis
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "metrics", tuple(self.metrics))
        if axis not in SWEEP_AXES:
            raise InvalidParameterError(f"axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if not self.values:
            raise InvalidParameterError("sweep values must be nonempty")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise InvalidParameterError("sweep values must be strictly increasing")
        if self.realizations < 1:
            raise InvalidParameterError("realizations must be >= 1")

    def point_config(self, value):
        if self.axis == "n":
            return replace(self.base, n=int(value))
        if self.axis == "n_p":
            return replace(self.base, n_p=int(value))
        if self.axis == "rho":
            return replace(self.base, rho=float(value), radius=None)
        return replace(self.base, radius=float(value), rho=None)


@dataclass
class SweepResult:
    spec: SweepSpec
    points: list  # EnsembleResult per axis value

    def columns(self):
        cols = ["axis", "value", "model", "n", "radius", "rho", "n_p", "realizations"]
        for s in self.spec.metrics:
            cols += [f"{s}_mean", f"{s}_stderr"]
        return cols

    def rows(self):
        out = []
        for value, res in zip(self.spec.values, self.points):
            c = res.config
            row = [self.spec.axis, value, c.model, c.n, c.disk_radius, c.density, c.n_p,
                   res.realizations]
            for s in self.spec.metrics:
                row += [res.mean[s], res.stderr[s]]
            out.append(row)
        return out

    def records(self):
        cols = self.columns()
        return [dict(zip(cols, r)) for r in self.rows()]


def sweep(spec: SweepSpec, threads=1, **kw) -> SweepResult:
    points = [run_ensemble(spec.point_config(v), spec.realizations, spec.metrics,
                           threads=threads, **kw) for v in spec.values]
    return SweepResult(spec, points)


def data_collapse(table, mode="kmed"):
    """Append ``k_over_rho`` and ``ln_n_over_rho`` columns to copies of the rows.

    Each row needs ``n``, ``rho`` and a mean degree under ``mean_degree_mean``
    or ``mean_degree``.
    """
    if mode != "kmed":
        raise InvalidParameterError(f"unknown collapse mode {mode!r}")
    out = []
    for row in table:
        k_key = "mean_degree_mean" if "mean_degree_mean" in row else "mean_degree"
        for key in (k_key, "n", "rho"):
            if key not in row:
                raise MissingColumnError(key)
        new = dict(row)
        new["k_over_rho"] = row[k_key] / row["rho"]
        new["ln_n_over_rho"] = math.log(row["n"] / row["rho"])
        out.append(new)
    return out
