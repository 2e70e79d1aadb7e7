"""
Keyed randomness service: per-(seed, coordinate, token) uniform draws and tabulation hashing
"""
from dataclasses import dataclass
from typing import Iterable, Union

import mmh3
import numpy as np

_FMIX_C1 = np.uint64(0xFF51AFD7ED558CCD)
_FMIX_C2 = np.uint64(0xC4CEB9FE1A85EC53)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_SALT = np.uint64(0x2545F4914F6CDD1D)
_SHIFT_33 = np.uint64(33)
_SHIFT_11 = np.uint64(11)
_ONE = np.uint64(1)
_UNIT = 2.0 ** -53

ArrayLike = Union[int, np.ndarray, Iterable[int]]


def fmix64(x: ArrayLike) -> np.ndarray:
    """Murmur3 64-bit finalizer, applied elementwise with wraparound"""
    x = np.array(x, dtype=np.uint64, ndmin=1)
    with np.errstate(over="ignore"):
        x ^= x >> _SHIFT_33
        x *= _FMIX_C1
        x ^= x >> _SHIFT_33
        x *= _FMIX_C2
        x ^= x >> _SHIFT_33
    return x


def token_key(token: str) -> int:
    """Stable 64-bit key of an external token"""
    return mmh3.hash64(token.encode("utf-8"), seed=0, signed=False)[0]


def token_keys(tokens: Iterable[str]) -> np.ndarray:
    return np.fromiter((token_key(t) for t in tokens), dtype=np.uint64)


def coordinate_streams(seed: int, coords: ArrayLike) -> np.ndarray:
    """One 64-bit stream key per coordinate index"""
    coords = np.array(coords, dtype=np.uint64, ndmin=1)
    with np.errstate(over="ignore"):
        return fmix64(fmix64(coords * _GOLDEN + _GOLDEN) ^ np.uint64(seed))


def draw_bits(seed: int, coords: ArrayLike, keys: ArrayLike) -> np.ndarray:
    """64-bit draws for every (coordinate, key) pair; coords and keys broadcast"""
    streams = coordinate_streams(seed, coords)
    keys = np.array(keys, dtype=np.uint64, ndmin=1)
    with np.errstate(over="ignore"):
        return fmix64(fmix64(streams ^ keys) + _SALT)


def bits_to_uniform(bits: np.ndarray) -> np.ndarray:
    """Map 64-bit draws to (0, 1]; the top 53 bits keep the value exact in float64"""
    return ((bits >> _SHIFT_11) + _ONE).astype(np.float64) * _UNIT


def uniform_grid(seed: int, coords: ArrayLike, keys: ArrayLike) -> np.ndarray:
    return bits_to_uniform(draw_bits(seed, coords, keys))


@dataclass(frozen=True)
class RandomKey:
    global_seed: int
    coordinate_index: int
    token: str


def uniform01(key: RandomKey) -> float:
    """r(token) for one coordinate; deterministic, uniform on (0, 1]"""
    bits = draw_bits(key.global_seed, key.coordinate_index, token_key(key.token))
    return float(bits_to_uniform(bits)[0])


class TabulationHasher:
    """Simple tabulation over the 8 bytes of a 64-bit key"""

    KEY_BYTES = 8

    def __init__(self, seed: int):
        self.seed = seed
        rng = np.random.default_rng(seed)
        self.tables = rng.integers(0, 2 ** 64, size=(self.KEY_BYTES, 256), dtype=np.uint64)
        self.tables.setflags(write=False)

    def hash(self, keys: ArrayLike) -> np.ndarray:
        keys = np.array(keys, dtype=np.uint64, ndmin=1)
        out = np.zeros(keys.shape, dtype=np.uint64)
        for position in range(self.KEY_BYTES):
            byte = (keys >> np.uint64(8 * position)) & np.uint64(0xFF)
            out ^= self.tables[position][byte.astype(np.intp)]
        return out

    def buckets(self, keys: ArrayLike, buckets: int) -> np.ndarray:
        if buckets < 1:
            raise ValueError("bucket count must be at least 1")
        return (self.hash(keys) % np.uint64(buckets)).astype(np.int64)


def bucket_hash(h: TabulationHasher, index: int, buckets: int) -> int:
    """Bucket of one index in [0, buckets)"""
    return int(h.buckets(index, buckets)[0])


def derive_seed(seed: int, label: str) -> int:
    """Independent seed for a named sub-stream of a global seed"""
    return int(fmix64(np.uint64(seed) ^ np.uint64(token_key(label)))[0])


def step_keys(keys: ArrayLike, step: int) -> np.ndarray:
    """Per-walker keys for one step of an independent random walk"""
    keys = np.array(keys, dtype=np.uint64, ndmin=1)
    with np.errstate(over="ignore"):
        return fmix64(keys ^ fmix64(np.uint64(step) * _GOLDEN + _SALT))
