"""Acceptance criteria, each at its stated tolerance.

Every test records one ``PASS``/``FAIL`` line; the lines are repeated in the
terminal summary. Shared ensembles are cached for the session.
"""
import functools
import itertools
import json
import math

import mpmath
import numpy as np
from hypothesis import given, settings

from qnetsim.channel import link_prob, p_sat
from qnetsim.cli import main
from qnetsim.config import NetworkConfig
from qnetsim.ensemble import calibrate_radius, run_ensemble, run_robustness
from qnetsim.graphcore import min_edge_cut
from qnetsim.metrics import (connectivity_threshold, kmed_closed_form, ks_poisson, lognormal_fit,
                             moments_from_counts, path_stats, small_world_prediction)
from qnetsim.netgen import generate
from qnetsim.robustness import breakdown_fraction

from conftest import graph_from
from test_graphcore import connected_after_removal, exhaustive_min_cut
from test_metrics import floyd_warshall, giant_by_oracle
from test_netgen import configs

RESULTS = {}
PATHS = ("mean_degree", "giant_fraction", "avg_shortest_path", "diameter")


def record(key, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'} criterion {key}: {detail}"
    RESULTS[key] = line
    print(line)
    assert passed, line


@functools.lru_cache(maxsize=None)
def ensemble(config, realizations, selectors=PATHS, degree_counts=False):
    return run_ensemble(config, realizations, selectors, degree_counts=degree_counts)


@functools.lru_cache(maxsize=None)
def robustness(config, protocol, realizations, pair_budget=500):
    return run_robustness(config, protocol, realizations, pair_budget=pair_budget)


def sbqi(n, **kw):
    return NetworkConfig(model="SBQI", n=n, **kw)


# ---------------------------------------------------------------- 1
def test_criterion_1_channel_analytics():
    mpmath.mp.dps = 50
    w = mpmath.mpf("2.5e-6") * 500 * 1000
    ref_p = 0.1 * (1 - mpmath.exp(-2 * mpmath.mpf("0.75") ** 2 / w ** 2))
    ref_pi = 1 - (1 - mpmath.mpf("0.051325") ** 2) ** 50
    got_p, got_pi = p_sat(500.0), link_prob(0.051325 ** 2, 50)
    ok = (abs(got_p - 0.051325) <= 1e-6 and abs(got_p - float(ref_p)) <= 1e-6
          and abs(got_pi - 0.12356) <= 1e-5 and abs(got_pi - float(ref_pi)) <= 1e-5)
    record("1", ok, f"p_sat(500)={got_p:.9f} (oracle {float(ref_p):.9f}), "
                    f"link_prob={got_pi:.9f} (oracle {float(ref_pi):.9f})")


# ---------------------------------------------------------------- 2
def test_criterion_2_giant_cluster_emergence():
    small = ensemble(sbqi(100, radius=1800.0), 200, ("giant_fraction",)).mean["giant_fraction"]
    large = ensemble(sbqi(1000, radius=1800.0), 200, ("giant_fraction",)).mean["giant_fraction"]
    record("2", small < 0.6 and large > 0.9, f"N_G/N = {small:.3f} at N=100, {large:.3f} at N=1000")


# ---------------------------------------------------------------- 3
def test_criterion_3_small_world_bound():
    worst_l, worst_d, parts = 0.0, 0.0, []
    for rho, n in itertools.product((2e-4, 5e-4), (500, 1000, 2000)):
        res = ensemble(sbqi(n, rho=rho), 100)
        l, d = res.mean["avg_shortest_path"], res.mean["diameter"]
        worst_l, worst_d = max(worst_l, l), max(worst_d, d)
        parts.append(f"({n},{rho:g}) l={l:.2f} d={d:.2f}")
    record("3", worst_l <= 4.5 and worst_d <= 11,
           f"max <l>={worst_l:.3f} (<=4.5), max <d>={worst_d:.3f} (<=11); " + ", ".join(parts))


# ---------------------------------------------------------------- 4
def test_criterion_4_diameter_contrast():
    d_s = ensemble(sbqi(1000, rho=2e-4, n_p=50), 100).mean["diameter"]
    d_o = ensemble(NetworkConfig(model="OFBQI", n=1000, rho=2e-4, n_p=1000), 100).mean["diameter"]
    record("4", 3 <= d_s <= 6 and d_o >= 2.5 * d_s,
           f"<d>_SBQI={d_s:.3f} (in [3,6]), <d>_OFBQI={d_o:.3f} (>= {2.5 * d_s:.3f})")


# ---------------------------------------------------------------- 5
def _ks_pair(config):
    counts = ensemble(config, 500, ("mean_degree",), True).degree_counts
    k1, k2 = moments_from_counts(counts)
    return lognormal_fit(k1, k2, counts).ks_distance, ks_poisson(counts, k1)


def test_criterion_5_degree_distribution_character():
    s_ln, s_po = _ks_pair(sbqi(1000, rho=2e-4, n_p=50))
    o_ln, o_po = _ks_pair(NetworkConfig(model="OFBQI", n=1000, rho=2e-4, n_p=1000))
    record("5", s_ln < s_po and o_po < o_ln,
           f"SBQI KS lognormal={s_ln:.4f} < Poisson={s_po:.4f}; "
           f"OFBQI KS Poisson={o_po:.4f} < lognormal={o_ln:.4f}")


# ---------------------------------------------------------------- 6
def test_criterion_6_closed_form_fits():
    worst_k, worst_l, parts, ok = 0.0, 0.0, [], True
    for rho, n in itertools.product((2e-4, 1e-3), (200, 500, 1000, 2000)):
        config = sbqi(n, rho=rho)
        res = ensemble(config, 100)
        k, l = res.mean["mean_degree"], res.mean["avg_shortest_path"]
        dk = abs(k - kmed_closed_form(rho, config.disk_radius)) / kmed_closed_form(rho, config.disk_radius)
        pred = small_world_prediction(n, rho, k)
        dl = abs(l - pred) / pred
        worst_k, worst_l = max(worst_k, dk), max(worst_l, dl)
        bad = dk > 0.25 or dl > 0.20
        ok &= not bad
        parts.append(f"({n},{rho:g}) dk={dk:.3f} dl={dl:.3f}{' X' if bad else ''}")
    record("6", ok, f"max k dev={worst_k:.3f} (<=0.25), max l dev={worst_l:.3f} (<=0.20); "
                    + ", ".join(parts))


# ---------------------------------------------------------------- 7
def test_criterion_7_connectivity_threshold():
    rho_c = connectivity_threshold(1000)
    rhos = rho_c * np.geomspace(0.05, 5.0, 25)
    frac = [ensemble(sbqi(1000, rho=float(r)), 100, ("giant_fraction",)).mean["giant_fraction"]
            for r in rhos]
    i = next(i for i in range(1, len(frac)) if frac[i - 1] < 0.5 <= frac[i])
    t = (0.5 - frac[i - 1]) / (frac[i] - frac[i - 1])
    cross = math.exp(math.log(rhos[i - 1]) + t * math.log(rhos[i] / rhos[i - 1]))
    ratio = max(cross / rho_c, rho_c / cross)
    record("7", ratio <= 3.0,
           f"N_G/N=0.5 at rho={cross:.3e}, predicted rho_c={rho_c:.3e}, factor {ratio:.3f} (<=3); "
           f"N_G/N at rho_c~{np.interp(math.log(rho_c), np.log(rhos), frac):.3f}")


# ---------------------------------------------------------------- 8
@functools.lru_cache(maxsize=None)
def fig6_config(model):
    if model == "ER":
        return NetworkConfig(model="ER", n=2000, er_mean_degree=6.0)
    if model == "BA":
        return NetworkConfig(model="BA", n=2000, ba_m=3)
    n_p = 50 if model == "SBQI" else 1000
    return calibrate_radius(NetworkConfig(model=model, n=2000, rho=2e-4, n_p=n_p), 6.0)


RANDOM_BANDS = {"SBQI": (0.85, 1.0), "BA": (0.85, 1.0), "OFBQI": (0.55, 0.80), "ER": (0.78, 0.88)}
TARGETED_BANDS = {"BA": (0.08, 0.20), "SBQI": (0.12, 0.32), "OFBQI": (0.25, 0.45), "ER": (0.33, 0.48)}


def test_criterion_8_robustness_thresholds():
    fc, parts, ok = {}, [], True
    for protocol, bands in (("random_node", RANDOM_BANDS), ("targeted", TARGETED_BANDS)):
        for model, (lo, hi) in bands.items():
            curve = robustness(fig6_config(model), protocol, 100)
            fc[protocol, model] = curve.f_c
            good = lo <= curve.f_c <= hi
            ok &= good
            parts.append(f"{protocol} {model} f_c={curve.f_c:.3f} in [{lo},{hi}]{'' if good else ' X'}")
    t = {m: fc["targeted", m] for m in TARGETED_BANDS}
    order = t["BA"] <= t["SBQI"] < t["OFBQI"] <= t["ER"]
    parts.append(f"targeted ordering BA<=SBQI<OFBQI<=ER {'holds' if order else 'violated X'}")
    record("8", ok and order, "; ".join(parts))


# ---------------------------------------------------------------- 9
def test_criterion_9_isolated_cluster_peak():
    runs = [(f"{p} {m}", robustness(fig6_config(m), p, 100))
            for p in ("random_node", "targeted") for m in RANDOM_BANDS]
    link = sbqi(2000, rho=2e-4)
    runs += [(f"{p} SBQI rho=2e-4", robustness(link, p, 100)) for p in ("random_node", "random_link")]
    worst, parts = 0.0, []
    for name, curve in runs:
        gap = abs(curve.f_c - breakdown_fraction(curve))
        worst = max(worst, gap)
        parts.append(f"{name} gap={gap:.3f}{' X' if gap > 0.05 else ''}")
    record("9", worst <= 0.05, f"max |f_c - f(n_g<0.05)|={worst:.3f} (<=0.05); " + "; ".join(parts))


# ---------------------------------------------------------------- 10
def test_criterion_10_oracle_suites(tmp_path):
    rng = np.random.default_rng(10)
    cut_ok = 0
    for _ in range(500):
        n = int(rng.integers(2, 9))
        pairs = list(itertools.combinations(range(n), 2))
        m = int(rng.integers(0, min(10, len(pairs)) + 1))
        edges = [pairs[i] for i in sorted(rng.choice(len(pairs), m, replace=False))]
        g = graph_from(n, edges)
        s, t = (int(x) for x in rng.choice(n, 2, replace=False))
        size, cut = min_edge_cut(g, s, t)
        e = [tuple(x) for x in g.edges().tolist()]
        drop = {e.index(c) for c in cut}
        cut_ok += (size == exhaustive_min_cut(n, e, s, t) == len(cut)
                   and not connected_after_removal(n, e, drop, s, t))
    path_ok = 0
    for _ in range(1000):
        n = int(rng.integers(2, 65))
        p = rng.uniform(0.5, 4.0) / n
        g = graph_from(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])
        D = floyd_warshall(g)
        giant = giant_by_oracle(D)
        if len(giant) < 2:
            path_ok += 1
            continue
        sub = D[np.ix_(giant, giant)]
        l, d = path_stats(g)
        path_ok += math.isclose(l, sub.sum() / (len(giant) * (len(giant) - 1)), rel_tol=1e-12) and d == sub.max()

    cases = []

    @settings(max_examples=10_000, database=None, deadline=None)
    @given(configs)
    def invariants(config):
        g = generate(config)
        a = g.to_sparse()
        assert (a != a.T).nnz == 0 and a.diagonal().sum() == 0
        assert all(np.all(np.diff(g.neighbors(i)) > 0) for i in range(g.n))
        assert int(g.degrees().sum()) == 2 * g.n_edges
        cases.append(1)

    try:
        invariants()
        inv_ok = True
    except AssertionError:
        inv_ok = False

    outputs = []
    sweep_cfg = tmp_path / "sweep.json"
    sweep_cfg.write_text(json.dumps({"base": {"model": "SBQI", "n": 100, "radius": 1800.0, "n_p": 50},
                                     "axis": "N", "values": [100, 1000], "realizations": 200,
                                     "metrics": ["giant_fraction"]}))
    rob_cfg = tmp_path / "rob.json"
    rob_cfg.write_text(json.dumps({"base": {"model": "ER", "n": 2000, "er_mean_degree": 6.0},
                                   "protocol": "targeted", "realizations": 100}))
    for run, threads in (("a", "1"), ("b", "2")):
        out = tmp_path / run
        assert main(["sweep", "--config", str(sweep_cfg), "--out", str(out), "--threads", threads]) == 0
        assert main(["robustness", "--config", str(rob_cfg), "--out", str(out), "--threads", threads]) == 0
        outputs.append(((out / "sweep.csv").read_bytes(), (out / "robustness.csv").read_bytes()))
    det_ok = outputs[0] == outputs[1]
    ok = cut_ok == 500 and path_ok == 1000 and inv_ok and len(cases) >= 10_000 and det_ok
    record("10", ok, f"min-cut {cut_ok}/500, paths {path_ok}/1000, generator invariants "
                     f"{len(cases)} cases {'ok' if inv_ok else 'FAILED'}, CSV determinism "
                     f"{'byte-identical' if det_ok else 'differs'}")


# ---------------------------------------------------------------- 11
def test_criterion_11a_link_failure_parity():
    config = sbqi(2000, rho=2e-4)
    node = robustness(config, "random_node", 100).f_c
    link = robustness(config, "random_link", 100).f_c
    record("11a", abs(node - link) <= 0.07,
           f"SBQI N=2000 rho=2e-4: f_c nodes={node:.3f}, links={link:.3f}, gap={abs(node - link):.3f} (<=0.07)")


def test_criterion_11b_edge_cut_ordering():
    reps = 20
    s = robustness(sbqi(1000, rho=2e-4, n_p=50), "edge_cut", reps, 1000)
    o = robustness(NetworkConfig(model="OFBQI", n=1000, rho=2e-4, n_p=1000), "edge_cut", reps, 1000)
    common = np.intersect1d(s.f_grid, o.f_grid)
    common = common[common >= 0.1 - 1e-12]
    sv = s.n_g[np.searchsorted(s.f_grid, common)]
    ov = o.n_g[np.searchsorted(o.f_grid, common)]
    above = sv > ov
    worst = int(np.argmin(sv - ov)) if len(common) else 0
    detail = (f"{int(above.sum())}/{len(common)} common f>=0.1 with SBQI above; "
              f"largest deficit at f={common[worst]:.2f}: SBQI {sv[worst]:.3f} vs OFBQI {ov[worst]:.3f}"
              if len(common) else "no common f >= 0.1")
    record("11b", len(common) > 0 and bool(above.all()), detail)
