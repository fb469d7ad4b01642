"""Binary cache for Weyl atlases (``.cpdw`` files).

Layout, all little-endian::

    magic        4 bytes  b"CPDW"
    version      u32      1
    family       u8       ASCII letter
    rank         u8
    isogeny      u8       0 = simply connected, 1 = adjoint
    flags        u8       bit 0: cover lists present
    N            u32      number of positive roots
    strata       u32      S, number of length strata stored (N + 1 when complete)
    for k in 0 .. S-1:
        count    u64
        keys     count * rank  i32   keys w(rho), row-major, stratum order
    if covers:
      for k in 0 .. S-2:
        edges    u64      E
        fanout   count_k  u32   number of covers of each element of stratum k
        targets  E        u32   target index in stratum k+1, delta-encoded
                                within each element's list (first one absolute)
        coroots  E * rank i8    coroot coordinates attached to each cover
    crc32        u32      zlib.crc32 of every preceding byte

Any mismatch in magic, version, lengths or checksum is an input error.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np

from .errors import InputError
from .rootsys import ADJOINT, GroupSpec, build_root_system
from .weyl import StratumCovers, WeylAtlas, pack_keys

MAGIC = b"CPDW"
VERSION = 1
_HEAD = struct.Struct("<4sIBBBBII")


def cache_name(spec: GroupSpec) -> str:
    return f"{spec.family}{spec.rank}_{spec.short_isogeny}.cpdw"


def encode_atlas(atlas: WeylAtlas, spec: GroupSpec | None = None, with_covers: bool = True) -> bytes:
    rs = atlas.rs
    spec = spec or rs.spec
    n = rs.n
    parts = [
        _HEAD.pack(MAGIC, VERSION, ord(spec.family), spec.rank, int(spec.isogeny == ADJOINT),
                   int(with_covers), rs.N, len(atlas.strata)),
    ]
    for keys in atlas.strata:
        parts.append(struct.pack("<Q", len(keys)))
        parts.append(np.ascontiguousarray(keys, dtype="<i4").tobytes())
    if with_covers:
        for k in range(len(atlas.strata) - 1):
            cov = atlas.stratum_covers(k)
            fanout = np.bincount(cov.src, minlength=len(atlas.strata[k])).astype("<u4")
            dst = cov.dst.astype(np.int64)
            delta = dst.copy()
            same = np.zeros(len(dst), dtype=bool)
            same[1:] = cov.src[1:] == cov.src[:-1]
            delta[same] = dst[same] - dst[np.flatnonzero(same) - 1]
            coroots = rs.positive_coroots[cov.root.astype(np.int64)].astype("<i1")
            parts.append(struct.pack("<Q", len(dst)))
            parts.append(fanout.tobytes())
            parts.append(delta.astype("<u4").tobytes())
            parts.append(np.ascontiguousarray(coroots).tobytes())
    body = b"".join(parts)
    return body + struct.pack("<I", zlib.crc32(body))


def write_atlas(path, atlas: WeylAtlas, spec: GroupSpec | None = None, with_covers: bool = True) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(encode_atlas(atlas, spec, with_covers))
    tmp.replace(path)
    return path


class _Reader:
    def __init__(self, data: bytes, where: str):
        self.data, self.pos, self.where = data, 0, where

    def take(self, nbytes: int) -> bytes:
        if nbytes < 0 or self.pos + nbytes > len(self.data):
            raise InputError(f"{self.where}: truncated cache file")
        out = self.data[self.pos : self.pos + nbytes]
        self.pos += nbytes
        return out

    def array(self, dtype: str, count: int) -> np.ndarray:
        dt = np.dtype(dtype)
        return np.frombuffer(self.take(dt.itemsize * count), dtype=dt)


def decode_atlas(data: bytes, where: str = "<bytes>") -> tuple:
    """Return ``(spec, atlas)`` from cache bytes, validating everything."""
    if len(data) < _HEAD.size + 4:
        raise InputError(f"{where}: file too short for a cache header")
    body, (crc,) = data[:-4], struct.unpack("<I", data[-4:])
    magic = body[:4]
    if magic != MAGIC:
        raise InputError(f"{where}: bad magic {magic!r}")
    if zlib.crc32(body) != crc:
        raise InputError(f"{where}: checksum mismatch")
    r = _Reader(body, where)
    _, version, fam, rank, iso, flags, N, S = _HEAD.unpack(r.take(_HEAD.size))
    if version != VERSION:
        raise InputError(f"{where}: unsupported cache version {version}")
    spec = GroupSpec(chr(fam), rank, "ad" if iso else "sc")
    rs = build_root_system(spec)
    if N != rs.N or S > N + 1 or S < 1:
        raise InputError(f"{where}: header inconsistent with {spec.label} (N={N}, strata={S})")
    n = rs.n
    atlas = WeylAtlas(rs)
    for _ in range(S):
        (count,) = struct.unpack("<Q", r.take(8))
        keys = r.array("<i4", count * n).reshape(count, n).astype(np.int16)
        codes = pack_keys(keys)
        if count > 1 and not np.all(codes[1:] > codes[:-1]):
            raise InputError(f"{where}: stratum keys not strictly sorted")
        atlas.strata.append(keys)
        atlas.codes.append(codes)
    if flags & 1:
        known = pack_keys(rs.positive_coroots)
        order = np.argsort(known)
        known = known[order]
        for k in range(S - 1):
            (E,) = struct.unpack("<Q", r.take(8))
            fanout = r.array("<u4", len(atlas.strata[k])).astype(np.int64)
            if fanout.sum() != E:
                raise InputError(f"{where}: cover count mismatch in stratum {k}")
            delta = r.array("<u4", E).astype(np.int64)
            coroots = r.array("<i1", E * n).reshape(E, n)
            src = np.repeat(np.arange(len(fanout)), fanout)
            first = np.zeros(E, dtype=bool)
            starts = np.concatenate([[0], np.cumsum(fanout)[:-1]])[fanout > 0]
            first[starts] = True
            # undo the per-element delta encoding with a segmented cumulative sum
            csum = np.cumsum(delta)
            seg_base = np.maximum.accumulate(np.where(first, csum - delta, 0))
            dst = csum - seg_base
            if E and (dst.max() >= len(atlas.strata[k + 1]) or dst.min() < 0):
                raise InputError(f"{where}: cover target out of range in stratum {k}")
            codes = pack_keys(coroots.astype(np.int64))
            pos = np.minimum(np.searchsorted(known, codes), len(known) - 1)
            if E and not np.all(known[pos] == codes):
                raise InputError(f"{where}: unknown coroot in covers of stratum {k}")
            root = order[pos].astype(np.int16)
            atlas.covers[k] = StratumCovers(k, src.astype(np.int32), dst.astype(np.int32), root)
    if r.pos != len(body):
        raise InputError(f"{where}: {len(body) - r.pos} trailing bytes")
    return spec, atlas


def read_atlas(path) -> tuple:
    path = Path(path)
    if not path.exists():
        raise InputError(f"{path}: no such cache file")
    return decode_atlas(path.read_bytes(), str(path))


def atlas_equal(a: WeylAtlas, b: WeylAtlas) -> bool:
    if a.counts != b.counts or a.rs.spec.family != b.rs.spec.family or a.rs.n != b.rs.n:
        return False
    if any(not np.array_equal(x, y) for x, y in zip(a.strata, b.strata)):
        return False
    for k in set(a.covers) | set(b.covers):
        ca, cb = a.stratum_covers(k), b.stratum_covers(k)
        if not all(np.array_equal(getattr(ca, f), getattr(cb, f)) for f in ("src", "dst", "root")):
            return False
    return True
