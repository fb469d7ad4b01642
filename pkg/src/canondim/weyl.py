"""Length-graded enumeration of the Weyl group and Bruhat covers.

An element ``w`` is stored as its key ``w(rho)`` in fundamental-weight
coordinates; ``rho = (1, ..., 1)`` is regular so the key determines ``w``.
Simple reflections act on keys by ``s_i(x) = x - x_i * alpha_i``.  The length
of ``w`` is the number of positive coroots pairing negatively with its key,
and ``s_i w`` is longer than ``w`` exactly when ``key[i] > 0``.

Covers are taken on the left: ``s_alpha w`` covers ``w`` when its length is
``l(w) + 1`` (which forces ``<key, alpha^vee> > 0``).  This indexes the
Schubert basis by ``w^{-1}``; under that relabelling the left covers used
here are the usual right covers ``w^{-1} s_alpha`` with the same ``alpha``,
so the Chevalley coefficient is ``<lambda, alpha^vee>``.

Each stratum is sorted lexicographically by key; the position in that order
is the element's stable index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .config import Budget
from .errors import InfeasibleScale, PreconditionError
from .polyalg import quantum_factor_product
from .rootsys import RootSystem

_OFFSET = 128


def pack_keys(keys: np.ndarray) -> np.ndarray:
    """Order-preserving uint64 code of each key row (8 bits per coordinate)."""
    keys = np.asarray(keys, dtype=np.int64)
    codes = np.zeros(keys.shape[0], dtype=np.uint64)
    for i in range(keys.shape[1]):
        codes = (codes << np.uint64(8)) | (keys[:, i] + _OFFSET).astype(np.uint64)
    return codes


def key_length(rs: RootSystem, keys: np.ndarray) -> np.ndarray:
    """Length of each element from its key."""
    keys = np.atleast_2d(keys)
    return (keys.astype(np.int64) @ rs.positive_coroots.T < 0).sum(axis=1)


def reflect(rs: RootSystem, keys: np.ndarray, i: int) -> np.ndarray:
    keys = np.atleast_2d(np.asarray(keys, dtype=np.int64))
    return keys - keys[:, i : i + 1] * rs.cartan[:, i][None, :]


@dataclass
class StratumCovers:
    """All cover edges from stratum ``k`` to ``k + 1``, sorted by (src, dst).

    ``root`` indexes ``rs.positive_roots``; the attached coroot is
    ``rs.positive_coroots[root]``.
    """

    k: int
    src: np.ndarray
    dst: np.ndarray
    root: np.ndarray

    def __len__(self):
        return len(self.src)

    def for_source(self, i: int) -> slice:
        lo, hi = np.searchsorted(self.src, [i, i + 1])
        return slice(int(lo), int(hi))


@dataclass
class WeylAtlas:
    rs: RootSystem
    strata: list = field(default_factory=list)
    codes: list = field(default_factory=list)
    covers: dict = field(default_factory=dict)

    @property
    def counts(self) -> list:
        return [len(s) for s in self.strata]

    @property
    def depth(self) -> int:
        return len(self.strata) - 1

    @property
    def complete(self) -> bool:
        return self.depth == self.rs.N

    def __len__(self):
        return sum(self.counts)

    def index_of(self, key) -> tuple:
        key = np.asarray(key, dtype=np.int64)
        k = int(key_length(self.rs, key)[0])
        if k > self.depth:
            raise PreconditionError(f"atlas only enumerated through length {self.depth}")
        code = pack_keys(key[None, :])[0]
        i = int(np.searchsorted(self.codes[k], code))
        if i >= len(self.codes[k]) or self.codes[k][i] != code:
            raise KeyError(tuple(key))
        return k, i

    def key(self, k: int, i: int) -> tuple:
        return tuple(int(x) for x in self.strata[k][i])

    def stratum_covers(self, k: int) -> StratumCovers:
        if k not in self.covers:
            if k + 1 > self.depth:
                raise PreconditionError(f"covers of stratum {k} need stratum {k + 1}; atlas depth is {self.depth}")
            self.covers[k] = compute_covers(self.rs, self.strata[k], self.strata[k + 1], self.codes[k + 1], k)
        return self.covers[k]


def _next_stratum(rs: RootSystem, keys: np.ndarray) -> tuple:
    parts = []
    for i in range(rs.n):
        sel = keys[keys[:, i] > 0]
        if len(sel):
            parts.append(reflect(rs, sel, i))
    if not parts:
        return np.zeros((0, rs.n), dtype=np.int16), np.zeros(0, dtype=np.uint64)
    cand = np.concatenate(parts)
    codes, first = np.unique(pack_keys(cand), return_index=True)
    return cand[first].astype(np.int16), codes


def compute_covers(rs: RootSystem, keys: np.ndarray, next_keys: np.ndarray, next_codes: np.ndarray, k: int) -> StratumCovers:
    """Cover edges from one stratum to the next, found by key membership."""
    if len(keys) == 0 or len(next_keys) == 0:
        e = np.zeros(0, dtype=np.int32)
        return StratumCovers(k, e, e.copy(), e.astype(np.int16))
    pair = keys.astype(np.int64) @ rs.positive_coroots.T
    src, root = np.nonzero(pair > 0)
    cand = keys[src].astype(np.int64) - pair[src, root][:, None] * rs.roots_in_weights[root]
    codes = pack_keys(cand)
    pos = np.searchsorted(next_codes, codes)
    pos = np.minimum(pos, len(next_codes) - 1)
    hit = next_codes[pos] == codes
    src, dst, root = src[hit], pos[hit], root[hit]
    order = np.lexsort((dst, src))
    return StratumCovers(
        k,
        src[order].astype(np.int32),
        dst[order].astype(np.int32),
        root[order].astype(np.int16),
    )


def expected_counts(rs: RootSystem) -> list:
    return quantum_factor_product(rs.profile.degrees).to_list()


def check_scale(rs: RootSystem, budget: Budget | None, max_length: int | None = None):
    """Refuse enumerations whose size exceeds the budget, naming the stratum."""
    if budget is None:
        return
    counts = expected_counts(rs)
    if max_length is not None:
        counts = counts[: max_length + 1]
    total = 0
    for k, c in enumerate(counts):
        total += c
        if total > budget.max_weyl_order:
            raise InfeasibleScale(
                f"{rs.spec.label}: Weyl enumeration exceeds {budget.max_weyl_order} elements "
                f"at length stratum {k} (|W| = {rs.profile.weyl_order})"
            )


def iter_strata(rs: RootSystem, budget: Budget | None = None, max_length: int | None = None) -> Iterator[tuple]:
    """Yield ``(k, keys, codes)`` one stratum at a time, from the identity upward."""
    check_scale(rs, budget, max_length)
    top = rs.N if max_length is None else min(max_length, rs.N)
    keys = np.ones((1, rs.n), dtype=np.int16)
    codes = pack_keys(keys)
    for k in range(top + 1):
        if budget is not None:
            budget.check_time(f"Weyl stratum {k}")
        yield k, keys, codes
        if k < top:
            keys, codes = _next_stratum(rs, keys)


def enumerate_weyl(rs: RootSystem, max_length: int | None = None, budget: Budget | None = None) -> WeylAtlas:
    atlas = WeylAtlas(rs)
    for _, keys, codes in iter_strata(rs, budget, max_length):
        atlas.strata.append(keys)
        atlas.codes.append(codes)
    return atlas


def covers(rs: RootSystem, atlas: WeylAtlas, key) -> list:
    """Cover list of the element with this key: ``[(index at length k+1, coroot), ...]``."""
    k, i = atlas.index_of(key)
    return covers_at(rs, atlas, k, i)


def covers_at(rs: RootSystem, atlas: WeylAtlas, k: int, i: int) -> list:
    if k == rs.N:
        return []
    sc = atlas.stratum_covers(k)
    sl = sc.for_source(i)
    return [(int(d), tuple(int(x) for x in rs.positive_coroots[a])) for d, a in zip(sc.dst[sl], sc.root[sl])]
