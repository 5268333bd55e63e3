"""Structural metrics of a single graph and the fitted scaling laws they are compared to."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import DegenerateInputError, InvalidParameterError
from .graphcore import components, hop_distance_summary

# fitted constants of the satellite mean-degree law
KMED_SLOPE = 4.5e5
KMED_INTERCEPT = 0.97
KMED_MU = 2.73
KMED_SIGMA = 0.126
# small-world prefactor c(rho) = exp(SW_A * rho**SW_B)
SW_A = 0.312
SW_B = -0.182
# connected while ln(R / rho) stays below this
CONNECTIVITY_LOG_BOUND = 17.0


@dataclass
class DegreeStats:
    mean: float
    second_moment: float
    histogram: np.ndarray  # P(k) for k = 0..k_max


def degree_counts(g):
    return np.bincount(g.degrees(), minlength=1)


def degree_stats(g) -> DegreeStats:
    k = g.degrees().astype(np.int64)
    # integer sums keep the moments exact up to the final division
    mean = int(k.sum()) / g.n
    second = int((k * k).sum()) / g.n
    counts = np.bincount(k, minlength=1)
    return DegreeStats(mean, second, counts / g.n)


def moments_from_counts(counts):
    counts = np.asarray(counts, dtype=np.int64)
    k = np.arange(len(counts), dtype=np.int64)
    total = int(counts.sum())
    return int((k * counts).sum()) / total, int((k * k * counts).sum()) / total


def log_binned_histogram(counts, bins_per_decade=10):
    """Degree histogram on logarithmic bins (k >= 1) for plotting.

    Returns ``(centers, density)`` where density is the probability per unit k.
    """
    counts = np.asarray(counts, dtype=float)
    kmax = len(counts) - 1
    if kmax < 1 or counts[1:].sum() == 0:
        return np.empty(0), np.empty(0)
    n_bins = max(1, int(math.ceil(math.log10(kmax + 1) * bins_per_decade)))
    edges = np.unique(np.floor(np.logspace(0, math.log10(kmax + 1), n_bins + 1)).astype(int))
    edges[-1] = kmax + 1
    total = counts.sum()
    centers, density = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mass = counts[lo:hi].sum()
        if mass > 0:
            centers.append(math.sqrt(lo * (hi - 1)) if hi - 1 > lo else float(lo))
            density.append(mass / total / (hi - lo))
    return np.array(centers), np.array(density)


@dataclass
class LogNormalFit:
    mu: float
    sigma: float
    ks_distance: float = float("nan")
    log_likelihood: float = float("nan")


def lognormal_pdf(k, mu, sigma):
    """Log-normal density ``exp(-(ln k - mu)^2 / 2 sigma^2) / (k sigma sqrt(2 pi))``."""
    k = np.asarray(k, dtype=float)
    if sigma <= 0:
        raise DegenerateInputError("log-normal density needs sigma > 0")
    pos = np.where(k > 0, k, 1.0)
    z = (np.log(pos) - mu) / sigma
    out = np.where(k > 0, np.exp(-0.5 * z * z) / (pos * sigma * math.sqrt(2 * math.pi)), 0.0)
    return out if out.ndim else float(out)


def lognormal_cdf(k, mu, sigma):
    k = np.asarray(k, dtype=float)
    if sigma <= 0:
        return np.where(k >= math.exp(mu), 1.0, 0.0)
    with np.errstate(divide="ignore"):
        return np.where(k > 0, stats.norm.cdf((np.log(k) - mu) / sigma), 0.0)


def _restricted_ecdf(counts):
    counts = np.asarray(counts, dtype=float)
    ks = np.arange(1, len(counts))
    mass = counts[1:]
    if mass.sum() == 0:
        raise DegenerateInputError("no node with degree >= 1")
    return ks, np.cumsum(mass) / mass.sum()


def ks_lognormal(counts, mu, sigma):
    """Sup distance between the k >= 1 empirical CDF and the fitted CDF at k + 0.5."""
    ks, ecdf = _restricted_ecdf(counts)
    model = lognormal_cdf(ks + 0.5, mu, sigma)
    return float(np.max(np.abs(ecdf - model)))


def ks_poisson(counts, lam):
    """Same statistic against a Poisson(lam) law conditioned on k >= 1."""
    ks, ecdf = _restricted_ecdf(counts)
    p0 = math.exp(-lam)
    model = (stats.poisson.cdf(ks, lam) - p0) / (1.0 - p0)
    return float(np.max(np.abs(ecdf - model)))


def lognormal_fit(k_mean, k2_mean, counts=None) -> LogNormalFit:
    """Moment-matched log-normal parameters.

    ``mu = ln(<k>^2 / sqrt(<k^2>))`` and ``sigma = sqrt(ln(<k^2> / <k>^2))``.
    When a degree count histogram is supplied, the KS distance and the
    log-likelihood of its k >= 1 part are filled in.
    """
    if not k_mean > 0:
        raise DegenerateInputError("mean degree must be > 0 for a log-normal fit")
    ratio = k2_mean / (k_mean * k_mean)
    if ratio < 1.0 - 1e-12:
        raise InvalidParameterError("<k^2> must be at least <k>^2")
    mu = math.log(k_mean * k_mean / math.sqrt(k2_mean))
    sigma = math.sqrt(max(math.log(ratio), 0.0))
    fit = LogNormalFit(mu, sigma)
    if counts is not None:
        fit.ks_distance = ks_lognormal(counts, mu, sigma)
        if sigma > 0:
            c = np.asarray(counts, dtype=float)
            ks = np.arange(1, len(c))
            with np.errstate(divide="ignore"):
                logp = np.log(lognormal_pdf(ks, mu, sigma))
            sel = c[1:] > 0
            fit.log_likelihood = float(np.sum(c[1:][sel] * logp[sel]))
    return fit


def _giant_nodes(g):
    part = components(g)
    nodes = part.giant_nodes()
    if len(nodes) < 2:
        raise DegenerateInputError("giant cluster has fewer than two nodes")
    return nodes


def path_stats(g):
    """``(avg_shortest_path, diameter)`` over pairs inside the giant cluster."""
    nodes = _giant_nodes(g)
    total, longest = hop_distance_summary(g, nodes)
    ng = len(nodes)
    return total / (ng * (ng - 1)), longest


def avg_shortest_path(g):
    return path_stats(g)[0]


def diameter(g):
    return path_stats(g)[1]


def local_clustering(g):
    """Per-node clustering ``2 t_i / (k_i (k_i - 1))``, zero where ``k_i < 2``."""
    a = g.to_sparse().astype(np.int64)
    # entry (i, j) of (A @ A) * A counts common neighbours of adjacent i, j
    tri = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() // 2
    k = g.degrees().astype(np.int64)
    pairs = k * (k - 1) // 2
    out = np.zeros(g.n)
    ok = pairs > 0
    out[ok] = tri[ok] / pairs[ok]
    return out


def avg_clustering(g):
    return float(math.fsum(local_clustering(g)) / g.n)


def kmed_amplitude(rho):
    return KMED_SLOPE * rho + KMED_INTERCEPT


def kmed_closed_form(rho, radius):
    """Predicted SBQI mean degree from density and coverage radius (km)."""
    if not (rho > 0 and radius > 0):
        raise InvalidParameterError("rho and radius must be > 0")
    log_area = math.log(math.pi * radius * radius)
    z = (math.log(log_area) - KMED_MU) / KMED_SIGMA
    return kmed_amplitude(rho) / (log_area * KMED_SIGMA * math.sqrt(2 * math.pi)) * math.exp(-0.5 * z * z)


def small_world_coefficient(rho):
    return math.exp(SW_A * rho ** SW_B)


def small_world_prediction(n, rho, k_mean):
    """Fitted average shortest path ``c(rho) ln n / ln(<k> / rho)``."""
    if n < 2:
        raise InvalidParameterError("n must be >= 2")
    if not (rho > 0 and k_mean > 0):
        raise InvalidParameterError("rho and mean degree must be > 0")
    denom = math.log(k_mean / rho)
    if denom <= 0:
        raise InvalidParameterError("ln(<k>/rho) must be positive")
    return small_world_coefficient(rho) * math.log(n) / denom


def connectivity_threshold(n):
    """Density above which ``ln(R / rho)`` drops below the connectivity bound."""
    if n < 2:
        raise InvalidParameterError("n must be >= 2")
    return (math.exp(-CONNECTIVITY_LOG_BOUND) * math.sqrt(n / math.pi)) ** (2.0 / 3.0)


REPORT_COLUMNS = ("n", "n_edges", "mean_degree", "second_moment", "giant_fraction",
                  "avg_shortest_path", "diameter", "avg_clustering")


@dataclass
class MetricReport:
    """Metrics of one realization. Path metrics are NaN when the giant has < 2 nodes."""

    n: int
    n_edges: int
    mean_degree: float
    second_moment: float
    giant_fraction: float
    avg_shortest_path: float
    diameter: float
    avg_clustering: float
    degree_histogram: np.ndarray

    def row(self):
        return [getattr(self, c) for c in REPORT_COLUMNS]

    def same_as(self, other):
        a = np.array(self.row(), dtype=float)
        b = np.array(other.row(), dtype=float)
        return (np.array_equal(a, b, equal_nan=True)
                and np.array_equal(self.degree_histogram, other.degree_histogram))


def metric_report(g, paths=True) -> MetricReport:
    ds = degree_stats(g)
    part = components(g)
    if paths and part.giant_size >= 2:
        l, d = path_stats(g)
    else:
        l, d = float("nan"), float("nan")
    return MetricReport(g.n, g.n_edges, ds.mean, ds.second_moment, part.giant_size / g.n,
                        l, float(d), avg_clustering(g), ds.histogram)
