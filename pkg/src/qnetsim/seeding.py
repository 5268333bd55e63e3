"""Counter-based 64-bit hashing used for reproducible random streams.

Everything here is built on the SplitMix64 finalizer, which is a bijection on
64-bit integers. Per-pair uniforms are a pure function of (key, i, j), so graph
generation does not depend on evaluation order or on how pairs are batched.
"""
import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

# stream tags: distinct sub-keys derived from a single realization seed
STREAM_POSITIONS = 1
STREAM_PAIRS = 2
STREAM_SEQUENTIAL = 3
STREAM_PROTOCOL = 4


def mix64(z):
    """SplitMix64 finalizer for a Python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix64_array(z):
    """Vectorised SplitMix64 finalizer on a uint64 array (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def derive_seed(seed, index):
    """Seed of the ``index``-th element of the SplitMix64 sequence started at ``seed``.

    Injective in ``index`` for a fixed ``seed``.
    """
    return mix64((seed + (index + 1) * GOLDEN) & MASK64)


def stream_key(seed, stream):
    return mix64((seed ^ mix64(stream * GOLDEN)) & MASK64)


def numpy_rng(seed, stream):
    """A numpy Generator for one named stream of a realization seed."""
    return np.random.default_rng(np.random.SeedSequence([seed & MASK64, stream]))


def pair_uniforms(key, i, j):
    """Uniform variates in (0, 1] keyed by (key, i, j), with i, j < 2**32.

    The half-open interval is closed at 1 so that ``u <= p`` is never true for
    p = 0 and always true for p = 1.
    """
    i = np.asarray(i, dtype=np.uint64)
    j = np.asarray(j, dtype=np.uint64)
    counter = (i << np.uint64(32)) | j
    with np.errstate(over="ignore"):
        state = np.uint64(key) + counter * np.uint64(GOLDEN)
    bits = mix64_array(state) >> np.uint64(11)
    return (bits.astype(np.float64) + 1.0) * (1.0 / 9007199254740992.0)
