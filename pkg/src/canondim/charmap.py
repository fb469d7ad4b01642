"""The mod-p image of the characteristic map inside the Schubert model of Ch*(X).

Degree-1 classes act on Schubert classes by the Chevalley rule

    c(lambda) . sigma_w = sum over covers w -> w' of <lambda, alpha^vee> sigma_w'

(see :mod:`canondim.weyl` for the cover convention).  The image ``R_p`` is
generated in degree 1, so its degree-(k+1) part is spanned by the products of
a basis of the degree-k part with the n lattice generators.  Each graded piece
is kept as a reduced row echelon basis over F_p, one stratum at a time.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .config import Budget
from .errors import ConsistencyFailure, InfeasibleScale, InputError, PreconditionError
from .linalg_modp import field_dtype, row_echelon_modp
from .polyalg import FactorizationFailure, IntPoly, quantum_factor_product, recover_degree_multiset
from .rootsys import GroupSpec, RootSystem, build_root_system, weight_lattice_basis
from .weyl import StratumCovers, WeylAtlas, check_scale, compute_covers, iter_strata


def is_prime(p: int) -> bool:
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)) or p < 2:
        return False
    return all(p % q for q in range(2, int(p**0.5) + 1))


def check_prime(p) -> int:
    if not is_prime(p):
        raise InputError(f"{p!r} is not a prime")
    return int(p)


@dataclass
class SchubertVector:
    """Sparse element of Ch^k(X) mod p: ``{stable index: residue}``."""

    degree: int
    entries: dict = field(default_factory=dict)
    p: int = 2

    def __post_init__(self):
        self.entries = {int(i): int(c) % self.p for i, c in self.entries.items() if int(c) % self.p}

    @classmethod
    def basis(cls, degree: int, index: int, p: int) -> "SchubertVector":
        return cls(degree, {index: 1}, p)

    @classmethod
    def from_dense(cls, degree: int, row, p: int) -> "SchubertVector":
        row = np.asarray(row)
        return cls(degree, {int(i): int(row[i]) for i in np.flatnonzero(row)}, p)

    def to_dense(self, size: int) -> np.ndarray:
        out = np.zeros(size, dtype=np.int64)
        for i, c in self.entries.items():
            out[i] = c
        return out

    def __bool__(self):
        return bool(self.entries)

    def __eq__(self, other):
        if not isinstance(other, SchubertVector):
            return NotImplemented
        return (self.degree, self.p, self.entries) == (other.degree, other.p, other.entries)


def lattice_basis(rs: RootSystem) -> np.ndarray:
    """Generators of the character lattice, one weight per row (omega coordinates)."""
    return weight_lattice_basis(rs)


def pairings(rs: RootSystem, cov: StratumCovers, weight) -> np.ndarray:
    """``<weight, alpha^vee>`` for every cover edge."""
    return rs.positive_coroots[cov.root.astype(np.int64)] @ np.asarray(weight, dtype=np.int64)


def multiplication_matrix(rs: RootSystem, cov: StratumCovers, weight, p: int, shape: tuple, dtype=np.float64) -> sp.csr_matrix:
    """Matrix of ``c(weight)`` from Ch^k to Ch^(k+1), rows indexed by stratum k."""
    coef = pairings(rs, cov, weight) % p
    keep = coef != 0
    return sp.csr_matrix(
        (coef[keep].astype(dtype), (cov.src[keep], cov.dst[keep])),
        shape=shape,
    )


def chevalley_multiply(rs: RootSystem, atlas: WeylAtlas, v: SchubertVector, weight) -> SchubertVector:
    """Multiply a Schubert vector by the degree-1 class of ``weight``."""
    k, p = v.degree, v.p
    if k == rs.N:
        return SchubertVector(k + 1, {}, p)
    if k > atlas.depth - 1:
        raise PreconditionError(f"no cover data from stratum {k}")
    cov = atlas.stratum_covers(k)
    coef = pairings(rs, cov, weight)
    out: dict = {}
    for i, c in v.entries.items():
        sl = cov.for_source(i)
        for d, a in zip(cov.dst[sl], coef[sl]):
            if a:
                out[int(d)] = (out.get(int(d), 0) + c * int(a)) % p
    return SchubertVector(k + 1, out, p)


@dataclass
class CharImageResult:
    spec: GroupSpec
    prime: int
    N: int
    n: int
    hilbert: IntPoly
    top_degree: int
    cd: int
    recovered_degrees: list | None
    recovery_error: str | None = None
    stratum_sizes: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def recovered(self) -> bool:
        return self.recovered_degrees is not None


def _memory_limit(budget: Budget) -> float | None:
    limit = budget.max_memory_mb
    try:
        phys = os.sysconf("SC_PAGE_SIZE") * os.sysconf("SC_PHYS_PAGES") / 2**20
    except (ValueError, OSError, AttributeError):
        return limit
    # leave headroom for the interpreter and the stratum arrays
    phys *= 0.8
    return phys if limit is None else min(limit, phys)


def _strata_pairs(rs: RootSystem, budget: Budget, atlas: WeylAtlas | None):
    """Yield ``(k, size_k, size_{k+1}, covers k -> k+1)`` for k = 0 .. N-1."""
    if atlas is not None:
        if not atlas.complete:
            raise PreconditionError("atlas must be enumerated through the longest element")
        for k in range(rs.N):
            budget.check_time(f"stratum {k}")
            yield k, atlas.counts[k], atlas.counts[k + 1], atlas.stratum_covers(k)
        return
    it = iter_strata(rs, budget)
    k, keys, _ = next(it)
    for k1, nkeys, ncodes in it:
        yield k, len(keys), len(nkeys), compute_covers(rs, keys, nkeys, ncodes, k)
        k, keys = k1, nkeys


def compute_char_image(
    spec: GroupSpec,
    p: int,
    budget: Budget | None = None,
    atlas: WeylAtlas | None = None,
    progress=None,
) -> CharImageResult:
    """Hilbert series of the mod-p image and the resulting canonical p-dimension."""
    p = check_prime(p)
    budget = (budget or Budget()).restart()
    rs = build_root_system(spec)
    if atlas is not None and (atlas.rs.spec.family, atlas.rs.spec.rank) != (spec.family, spec.rank):
        raise PreconditionError(f"atlas is for {atlas.rs.spec.label}, not {spec.label}")
    check_scale(rs, budget)
    mem_mb = _memory_limit(budget)
    gens = lattice_basis(rs)
    dtype = field_dtype(p, max(quantum_factor_product(rs.profile.degrees).coeffs))
    itemsize = np.dtype(dtype).itemsize
    t0 = time.monotonic()

    basis = np.ones((1, 1), dtype=dtype)
    dims = [1]
    sizes = [1]
    top = rs.N
    for k, m_k, m_next, cov in _strata_pairs(rs, budget, atlas):
        sizes.append(m_next)
        # resident: previous basis, one product block, the growing new basis
        need = itemsize * (len(basis) * (m_k + 2 * m_next) + min(len(gens) * len(basis), m_next) * m_next)
        if mem_mb is not None and need > mem_mb * 2**20:
            raise InfeasibleScale(
                f"{spec.label} p={p}: stratum {k + 1} needs ~{need / 2**20:.0f} MB "
                f"for {len(gens) * len(basis)} products of length {m_next}, over {mem_mb:.0f} MB"
            )
        bt = np.ascontiguousarray(basis.T)
        new = None
        for g in gens:
            M = multiplication_matrix(rs, cov, g, p, (m_k, m_next), dtype=dtype)
            new = row_echelon_modp(np.asarray(M.T @ bt).T, p, basis=new)
            if len(new[1]) == m_next:
                break  # already all of Ch^(k+1)
        basis = new[0]
        if progress is not None:
            progress(k + 1, len(basis), m_next)
        if not len(basis):
            # generated in degree 1: once a degree vanishes every later one does
            top = k
            break
        dims.append(len(basis))

    hilbert = IntPoly(dims)
    recovered, err = None, None
    try:
        recovered = recover_degree_multiset(hilbert, rs.n)
    except FactorizationFailure as exc:
        err = str(exc)
    result = CharImageResult(
        spec=spec,
        prime=p,
        N=rs.N,
        n=rs.n,
        hilbert=hilbert,
        top_degree=top,
        cd=rs.N - top,
        recovered_degrees=recovered,
        recovery_error=err,
        stratum_sizes=sizes[: len(dims)],
        seconds=time.monotonic() - t0,
    )
    _check_result(result, sizes)
    return result


def _check_result(res: CharImageResult, sizes: list):
    h = res.hilbert
    if h[0] != 1:
        raise ConsistencyFailure("image has no unit")
    for k, (a, b) in enumerate(zip(h.coeffs, sizes)):
        if a > b:
            raise ConsistencyFailure(f"image in degree {k} larger than Ch^{k}(X)", {"dim": a, "size": b})
    if res.recovered and sum(d - 1 for d in res.recovered_degrees) != res.top_degree:
        raise ConsistencyFailure("recovered degrees do not match the top degree")
