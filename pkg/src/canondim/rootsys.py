"""Root systems of the simple types, their invariant degrees and torsion primes.

Conventions
-----------
``cartan[i][j] = <alpha_j, alpha_i^vee>`` (Bourbaki numbering).  Roots are
integer vectors in the simple-root basis, coroots in the simple-coroot basis,
weights in the fundamental-weight basis.  With these choices the pairing
``<lambda, alpha^vee>`` is a plain integer dot product and the simple root
``alpha_j`` has fundamental-weight coordinates ``cartan[:, j]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm, prod

import numpy as np

from .errors import InputError

SIMPLY_CONNECTED = "simply_connected"
ADJOINT = "adjoint"

_ISOGENY_ALIASES = {
    "sc": SIMPLY_CONNECTED,
    "simply_connected": SIMPLY_CONNECTED,
    "ad": ADJOINT,
    "adjoint": ADJOINT,
}

_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 4}
_FIXED_RANKS = {"E": (6, 7, 8), "F": (4,), "G": (2,)}
FAMILIES = tuple("ABCDEFG")


@dataclass(frozen=True, order=True)
class GroupSpec:
    family: str
    rank: int
    isogeny: str = SIMPLY_CONNECTED

    def __post_init__(self):
        family = str(self.family).upper()
        object.__setattr__(self, "family", family)
        try:
            object.__setattr__(self, "isogeny", _ISOGENY_ALIASES[self.isogeny])
        except KeyError:
            raise InputError(f"unknown isogeny {self.isogeny!r}") from None
        if isinstance(self.rank, bool) or not isinstance(self.rank, (int, np.integer)):
            raise InputError(f"rank must be an integer, got {self.rank!r}")
        object.__setattr__(self, "rank", int(self.rank))
        if family in _MIN_RANK:
            if self.rank < _MIN_RANK[family]:
                raise InputError(f"type {family} needs rank >= {_MIN_RANK[family]}, got {self.rank}")
        elif family in _FIXED_RANKS:
            if self.rank not in _FIXED_RANKS[family]:
                raise InputError(f"type {family} has rank in {_FIXED_RANKS[family]}, got {self.rank}")
        else:
            raise InputError(f"unknown family {self.family!r}")

    @property
    def short_isogeny(self) -> str:
        return "sc" if self.isogeny == SIMPLY_CONNECTED else "ad"

    @property
    def label(self) -> str:
        return f"{self.family}{self.rank} {self.short_isogeny}"

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """Parse labels like ``"F4"``, ``"E6 ad"`` or ``"E7_sc"``."""
        parts = text.replace("_", " ").split()
        if not parts or len(parts) > 2:
            raise InputError(f"cannot parse group label {text!r}")
        head = parts[0]
        try:
            rank = int(head[1:])
        except ValueError:
            raise InputError(f"cannot parse group label {text!r}") from None
        isogeny = parts[1] if len(parts) == 2 else "sc"
        return cls(head[0], rank, isogeny)


def cartan_matrix(family: str, rank: int) -> np.ndarray:
    """Cartan matrix with ``C[i, j] = <alpha_j, alpha_i^vee>``."""
    n = rank
    C = 2 * np.eye(n, dtype=np.int64)

    def link(i, j, a=-1, b=-1):
        # a = <alpha_j, alpha_i^vee>, b = <alpha_i, alpha_j^vee>
        C[i, j] = a
        C[j, i] = b

    if family in "ABCD":
        for i in range(n - 1):
            link(i, i + 1)
        if family == "B" and n >= 2:
            # alpha_n short
            link(n - 2, n - 1, a=-1, b=-2)
        elif family == "C" and n >= 2:
            # alpha_n long
            link(n - 2, n - 1, a=-2, b=-1)
        elif family == "D":
            C[n - 2, n - 1] = C[n - 1, n - 2] = 0
            link(n - 3, n - 1)
    elif family == "E":
        # Bourbaki: 1-3-4-5-...-n chain, 2 attached to 4
        for i, j in [(0, 2), (2, 3), (1, 3)] + [(k, k + 1) for k in range(3, n - 1)]:
            link(i, j)
    elif family == "F":
        link(0, 1)
        link(1, 2, a=-1, b=-2)
        link(2, 3)
    elif family == "G":
        # alpha_1 short, alpha_2 long
        link(0, 1, a=-3, b=-1)
    else:
        raise InputError(f"unknown family {family!r}")
    return C


def _symmetrizer(C: np.ndarray) -> np.ndarray:
    """Half squared lengths d_i, i.e. d_i C[i, j] = d_j C[j, i], as coprime integers."""
    n = C.shape[0]
    d = [None] * n
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and C[i, j] != 0 and d[j] is None:
                d[j] = d[i] * int(C[i, j]) / int(C[j, i])
                stack.append(j)
    scale = lcm(*(x.denominator for x in d))
    return np.array([int(x * scale) for x in d], dtype=np.int64)


@dataclass(frozen=True)
class DegreeProfile:
    degrees: tuple
    exponents: tuple

    @property
    def weyl_order(self) -> int:
        return prod(self.degrees)


@dataclass(frozen=True, eq=False)
class RootSystem:
    spec: GroupSpec
    cartan: np.ndarray
    positive_roots: np.ndarray
    positive_coroots: np.ndarray
    symmetrizer: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.cartan.shape[0]

    @property
    def N(self) -> int:
        return self.positive_roots.shape[0]

    @property
    def dim_flag_variety(self) -> int:
        return self.N

    @cached_property
    def roots_in_weights(self) -> np.ndarray:
        """Positive roots expressed in fundamental-weight coordinates (N x n)."""
        return self.positive_roots @ self.cartan.T

    @cached_property
    def heights(self) -> np.ndarray:
        return self.positive_roots.sum(axis=1)

    def simple_reflection(self, i: int, root: np.ndarray) -> np.ndarray:
        """s_i applied to a vector in the simple-root basis."""
        out = np.array(root, dtype=np.int64)
        out[i] -= self.cartan[i] @ out
        return out

    @cached_property
    def profile(self) -> DegreeProfile:
        return degrees(self)


def _positive_root_closure(C: np.ndarray) -> list:
    n = C.shape[0]
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for r in frontier:
            v = np.array(r, dtype=np.int64)
            for i in range(n):
                w = v.copy()
                w[i] -= C[i] @ v
                t = tuple(int(x) for x in w)
                if min(t) >= 0 and any(t) and t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return sorted(seen, key=lambda t: (sum(t), t))


def build_root_system(spec: GroupSpec) -> RootSystem:
    if not isinstance(spec, GroupSpec):
        raise InputError(f"expected a GroupSpec, got {spec!r}")
    C = cartan_matrix(spec.family, spec.rank)
    d = _symmetrizer(C)
    roots = np.array(_positive_root_closure(C), dtype=np.int64)
    # alpha^vee coordinate j = c_j d_j / (|alpha|^2 / 2)
    B = d[:, None] * C
    half_len = np.einsum("ki,ij,kj->k", roots, B, roots) // 2
    coroots = roots * d[None, :]
    if np.any(coroots % half_len[:, None]):
        raise AssertionError("coroot coordinates are not integral")
    coroots = coroots // half_len[:, None]
    for a in (C, roots, coroots, d):
        a.setflags(write=False)
    return RootSystem(spec=spec, cartan=C, positive_roots=roots, positive_coroots=coroots, symmetrizer=d)


def degrees(rs: RootSystem) -> DegreeProfile:
    """Invariant degrees from the height distribution of the positive roots.

    The exponents are the conjugate partition of ``(h_1 >= h_2 >= ...)``
    where ``h_k`` counts positive roots of height ``k``.
    """
    counts = np.bincount(rs.heights)[1:]
    exponents = sorted(int((counts >= j).sum()) for j in range(1, rs.n + 1))
    return DegreeProfile(degrees=tuple(e + 1 for e in exponents), exponents=tuple(exponents))


@dataclass(frozen=True)
class TorsionData:
    primes: frozenset
    partial: bool = False
    note: str = ""


def torsion_primes(spec: GroupSpec) -> TorsionData:
    """Static torsion-prime table, restricted to the primes 2, 3, 5."""
    if not isinstance(spec, GroupSpec):
        raise InputError(f"expected a GroupSpec, got {spec!r}")
    fam, n, ad = spec.family, spec.rank, spec.isogeny == ADJOINT
    if fam == "A":
        if not ad:
            return TorsionData(frozenset())
        return TorsionData(
            frozenset(p for p in (2, 3, 5) if (n + 1) % p == 0),
            partial=True,
            note="adjoint type A: primes dividing n+1, listed only among 2, 3, 5",
        )
    if fam == "B":
        return TorsionData(frozenset({2}) if (n >= 3 or ad) else frozenset())
    if fam == "C":
        return TorsionData(frozenset({2}) if ad else frozenset())
    if fam == "D":
        return TorsionData(frozenset({2}))
    if fam in "GF":
        return TorsionData(frozenset({2}) if fam == "G" else frozenset({2, 3}))
    return TorsionData(frozenset({2, 3, 5}) if n == 8 else frozenset({2, 3}))


def weight_lattice_basis(rs: RootSystem) -> np.ndarray:
    """Generators of the character lattice in fundamental-weight coordinates (rows)."""
    if rs.spec.isogeny == SIMPLY_CONNECTED:
        return np.eye(rs.n, dtype=np.int64)
    # root lattice: row j is alpha_j = column j of the Cartan matrix
    return np.array(rs.cartan.T, dtype=np.int64)


def all_specs(max_rank: int = 8, isogenies=(SIMPLY_CONNECTED, ADJOINT)) -> list:
    """Every valid spec up to ``max_rank``; adjoint forms only where they differ."""
    out = []
    for fam in "ABCDEFG":
        ranks = _FIXED_RANKS.get(fam) or range(_MIN_RANK[fam], max_rank + 1)
        for n in ranks:
            if n > max_rank:
                continue
            for iso in isogenies:
                if iso == ADJOINT and fam in "FG" or iso == ADJOINT and fam == "E" and n == 8:
                    continue
                out.append(GroupSpec(fam, n, iso))
    return out
