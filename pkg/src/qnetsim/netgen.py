"""Single-realization generators for the SBQI, OFBQI, ER and BA models.

Pairwise models (SBQI, OFBQI, ER) draw one uniform per unordered pair from a
counter-based stream keyed by ``(seed, i, j)``; an edge exists iff
``u_ij <= Pi_ij``. Output is therefore independent of how pairs are batched.
"""
from __future__ import annotations

import numpy as np

from .channel import link_prob, p_fiber, p_sat, sample_positions, sat_distance
from .config import NetworkConfig
from .errors import InvalidParameterError
from .graph import Graph
from .seeding import (STREAM_PAIRS, STREAM_POSITIONS, STREAM_SEQUENTIAL, derive_seed,
                      numpy_rng, pair_uniforms, stream_key)

# upper bound on pairs evaluated at once; bounds memory at large n
PAIR_BLOCK = 1 << 22


def pair_blocks(n, block=PAIR_BLOCK):
    """Yield ``(I, J)`` index arrays covering all pairs ``i < j`` in row-major order."""
    i = 0
    while i < n - 1:
        rows = []
        count = 0
        while i < n - 1 and (not rows or count + (n - 1 - i) <= block):
            rows.append(i)
            count += n - 1 - i
            i += 1
        rows = np.asarray(rows, dtype=np.int64)
        lengths = n - 1 - rows
        I = np.repeat(rows, lengths)
        # J runs i+1..n-1 within each row
        starts = np.repeat(np.cumsum(lengths) - lengths, lengths)
        J = np.arange(len(I), dtype=np.int64) - starts + I + 1
        yield I, J


def _pairwise_graph(config, positions, prob_fn):
    n = config.n
    key = stream_key(config.seed, STREAM_PAIRS)
    us, vs = [], []
    for I, J in pair_blocks(n):
        prob = prob_fn(I, J)
        hit = pair_uniforms(key, I, J) <= prob
        us.append(I[hit])
        vs.append(J[hit])
    u = np.concatenate(us) if us else np.empty(0, np.int64)
    v = np.concatenate(vs) if vs else np.empty(0, np.int64)
    return Graph.from_edges(n, u, v, positions, config.model, config.seed)


def _check_model(config, model):
    if config.model != model:
        raise InvalidParameterError(f"config is for {config.model}, not {model}")


def sbqi_link_probabilities(positions, config):
    """Per-node downlink probabilities for SBQI placements."""
    return p_sat(sat_distance(positions, config.sat), config.sat)


def generate_sbqi(config: NetworkConfig) -> Graph:
    _check_model(config, "SBQI")
    pos = sample_positions(config.n, config.disk_radius, numpy_rng(config.seed, STREAM_POSITIONS))
    p = np.atleast_1d(sbqi_link_probabilities(pos, config))
    return _pairwise_graph(config, pos, lambda I, J: link_prob(p[I] * p[J], config.n_p))


def generate_ofbqi(config: NetworkConfig) -> Graph:
    _check_model(config, "OFBQI")
    pos = sample_positions(config.n, config.disk_radius, numpy_rng(config.seed, STREAM_POSITIONS))

    def prob(I, J):
        d = np.hypot(pos[I, 0] - pos[J, 0], pos[I, 1] - pos[J, 1])
        return link_prob(p_fiber(d, config.fiber), config.n_p)

    return _pairwise_graph(config, pos, prob)


def generate_er(config: NetworkConfig) -> Graph:
    _check_model(config, "ER")
    p = config.er_mean_degree / (config.n - 1)
    return _pairwise_graph(config, None, lambda I, J: p)


def generate_ba(config: NetworkConfig) -> Graph:
    """Preferential attachment grown from a clique on ``ba_m + 1`` nodes.

    Each arriving node draws ``ba_m`` distinct targets with probability
    proportional to current degree; repeated draws are discarded and redrawn.
    """
    _check_model(config, "BA")
    n, m = config.n, config.ba_m
    rng = numpy_rng(config.seed, STREAM_SEQUENTIAL)
    us, vs = [], []
    for a in range(m + 1):
        for b in range(a + 1, m + 1):
            us.append(a)
            vs.append(b)
    # one entry per edge endpoint: uniform draws from it are degree-proportional
    ends = np.empty(2 * (len(us) + (n - m - 1) * m), dtype=np.int64)
    fill = 0
    for a, b in zip(us, vs):
        ends[fill] = a
        ends[fill + 1] = b
        fill += 2
    for v in range(m + 1, n):
        chosen = []
        while len(chosen) < m:
            for idx in (rng.random(m - len(chosen)) * fill).astype(np.int64):
                t = int(ends[idx])
                if t not in chosen:
                    chosen.append(t)
        for t in chosen:
            us.append(t)
            vs.append(v)
            ends[fill] = t
            ends[fill + 1] = v
            fill += 2
    return Graph.from_edges(n, us, vs, None, "BA", config.seed)


GENERATORS = {
    "SBQI": generate_sbqi,
    "OFBQI": generate_ofbqi,
    "ER": generate_er,
    "BA": generate_ba,
}


def generate(config: NetworkConfig) -> Graph:
    """Dispatch on ``config.model``."""
    return GENERATORS[config.model](config)


def expected_mean_degree(config: NetworkConfig, samples=4):
    """Mean degree averaged over the link probabilities rather than sampled edges.

    For the geometric models, positions are drawn from ``samples`` derived
    seeds; ER and BA return their nominal values.
    """
    if config.model == "ER":
        return float(config.er_mean_degree)
    if config.model == "BA":
        m, n = config.ba_m, config.n
        return 2.0 * (m * (m + 1) / 2 + (n - m - 1) * m) / n
    total = 0.0
    for s in range(samples):
        rng = numpy_rng(derive_seed(config.seed, s), STREAM_POSITIONS)
        pos = sample_positions(config.n, config.disk_radius, rng)
        if config.model == "SBQI":
            p = np.atleast_1d(sbqi_link_probabilities(pos, config))
        acc = 0.0
        for I, J in pair_blocks(config.n):
            if config.model == "SBQI":
                pr = link_prob(p[I] * p[J], config.n_p)
            else:
                d = np.hypot(pos[I, 0] - pos[J, 0], pos[I, 1] - pos[J, 1])
                pr = link_prob(p_fiber(d, config.fiber), config.n_p)
            acc += float(np.sum(pr))
        total += 2.0 * acc / config.n
    return total / samples
