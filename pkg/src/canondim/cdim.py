"""Canonical p-dimension calculators and the cross-checking orchestrator.

Five routes to ``cd_p(G)``:

* ``direct_charmap``: the top degree of the mod-p characteristic image,
  ``cd = N - deg P(R_p)``;
* ``closed_form``: ``N + n - sum(d_{i,p})`` from the mod-p degrees;
* ``chow_of_G``: ``deg(P(Ch X) / P(R_p))``, the top degree of ``Ch(G)``;
* ``p_exceptional``: ``sum d' (p^k - 1)`` over degrees ``d = d' p^k`` (odd p);
* ``cohomology_p2``: ``(deg P(H(G; F_2)) - sum deg a_i) / 2`` from external data.

:func:`compute_all` runs every route that has inputs and fails hard if any two
disagree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .charmap import CharImageResult, check_prime, compute_char_image
from .config import Budget
from .errors import ConsistencyFailure, InfeasibleScale, InputError
from .polyalg import IntPoly, NonExactDivision, exact_divide, quantum_factor_product
from .rootsys import GroupSpec, build_root_system, torsion_primes

CLOSED_FORM = "closed_form"
P_EXCEPTIONAL = "p_exceptional"
DIRECT = "direct_charmap"
CHOW_OF_G = "chow_of_G"
COHOMOLOGY_P2 = "cohomology_p2"
METHODS = (DIRECT, CHOW_OF_G, CLOSED_FORM, P_EXCEPTIONAL, COHOMOLOGY_P2)


@dataclass
class CdResult:
    spec: GroupSpec
    prime: int
    method: str
    cd: int | None
    support: dict = field(default_factory=dict)
    skipped_reason: str | None = None

    @property
    def computed(self) -> bool:
        return self.cd is not None


@dataclass(frozen=True)
class PExceptionalDegree:
    d: int
    d_prime: int
    k: int

    def __post_init__(self):
        if self.d_prime < 1 or self.k < 1 or self.d < 1:
            raise InputError(f"invalid p-exceptional factorization {self}")

    @classmethod
    def factor(cls, d: int, p: int) -> "PExceptionalDegree":
        """Split ``d = d' p^k`` with ``p`` not dividing ``d'``; needs ``k >= 1``."""
        d, p = int(d), check_prime(p)
        k, rest = 0, d
        while rest % p == 0 and rest > 0:
            rest //= p
            k += 1
        if d < 1 or k == 0:
            raise InputError(f"{d} is not divisible by {p}")
        return cls(d, rest, k)

    def validate(self, p: int):
        if self.d != self.d_prime * p**self.k or self.d_prime % p == 0:
            raise InputError(f"{self.d} != {self.d_prime} * {p}^{self.k} with {p} not dividing {self.d_prime}")


@dataclass
class CohomologyInput:
    family: str
    rank: int
    poincare: IntPoly
    odd_generator_degrees: list
    provenance: str
    isogeny: str = "sc"
    prime: int = 2

    def __post_init__(self):
        if not self.provenance or not self.provenance.strip():
            raise InputError("cohomology record needs a provenance citation")
        if self.poincare.is_zero:
            raise InputError("Poincare polynomial is zero")
        degs = [int(a) for a in self.odd_generator_degrees]
        self.odd_generator_degrees = degs
        if any(a % 2 == 0 or a < 1 for a in degs):
            raise InputError(f"generator degrees must be odd and positive, got {degs}")
        top = self.poincare.degree
        if sum(degs) > top:
            raise InputError(f"sum of generator degrees {sum(degs)} exceeds deg P = {top}")
        if (top - sum(degs)) % 2:
            raise InputError(f"deg P - sum deg a_i = {top - sum(degs)} is odd")

    @property
    def spec(self) -> GroupSpec:
        return GroupSpec(self.family, self.rank, self.isogeny)


def cd_closed_form(N: int, n: int, mod_p_degrees: Iterable[int]) -> int:
    degs = [int(d) for d in mod_p_degrees]
    if len(degs) != n:
        raise InputError(f"expected {n} mod-p degrees, got {len(degs)}")
    if any(d < 1 for d in degs):
        raise InputError(f"mod-p degrees must be positive, got {degs}")
    cd = N + n - sum(degs)
    if cd < 0 or sum(d - 1 for d in degs) > N:
        raise ConsistencyFailure(f"mod-p degrees {degs} give cd = {cd}; they cannot come from a rank-{n} group with N = {N}")
    return cd


def cd_from_p_exceptional(degrees: Iterable, p: int) -> int:
    """``sum d' (p^k - 1)``; accepts PExceptionalDegree values or plain ints."""
    p = check_prime(p)
    if p == 2:
        raise InputError("the p-exceptional formula is stated for odd primes; use the cohomology_p2 method at p = 2")
    total = 0
    for item in degrees:
        e = item if isinstance(item, PExceptionalDegree) else PExceptionalDegree.factor(item, p)
        e.validate(p)
        total += e.d_prime * (p**e.k - 1)
    return total


def cd_via_group_chow(p_chow_x: IntPoly, p_r: IntPoly) -> int:
    """Top degree of ``Ch(G) = Ch(X) / J_p`` from the two Hilbert series."""
    for name, poly in (("P(Ch X)", p_chow_x), ("P(R_p)", p_r)):
        if not poly.is_hilbert_series():
            raise InputError(f"{name} is not a Hilbert series: {poly}")
    try:
        q = exact_divide(p_chow_x, p_r)
    except NonExactDivision as exc:
        raise ConsistencyFailure(
            f"Ch(X) is not free over R_p: {exc}", {"remainder": exc.remainder.to_list(), "degree": exc.degree}
        ) from exc
    if not q.is_hilbert_series():
        raise ConsistencyFailure(f"quotient series {q} has negative coefficients")
    return q.degree


def cd_p2_cohomology(record: CohomologyInput) -> int:
    return (record.poincare.degree - sum(record.odd_generator_degrees)) // 2


def p_exceptional_search(group_chow: IntPoly, p: int, limit: int = 64) -> list:
    """Factor ``P(Ch G)`` as ``prod (1 - t^{d' p^k}) / (1 - t^{d'})``.

    Depth-first over the lowest surviving degree; returns the p-exceptional
    degrees of the first factorization found (smallest ``k`` first), or raises
    :class:`ConsistencyFailure` when none exists.
    """
    p = check_prime(p)

    def search(q: IntPoly, found: list):
        if q == 1:
            return found
        if len(found) >= limit:
            return None
        base = next(k for k in range(1, len(q)) if q[k])
        if q[base] < 0 or base % p == 0:
            return None
        k = 1
        while base * (p**k - 1) <= q.degree:
            factor = IntPoly([1 if j % base == 0 else 0 for j in range(base * (p**k - 1) + 1)])
            try:
                rest = exact_divide(q, factor)
            except NonExactDivision:
                rest = None
            if rest is not None and all(c >= 0 for c in rest):
                out = search(rest, found + [PExceptionalDegree(base * p**k, base, k)])
                if out is not None:
                    return out
            k += 1
        return None

    if not group_chow.is_hilbert_series():
        raise InputError(f"not a Hilbert series: {group_chow}")
    out = search(group_chow, [])
    if out is None:
        raise ConsistencyFailure(f"{group_chow} is not a product of truncated p-power factors for p = {p}")
    return out


@dataclass
class ComputeReport:
    spec: GroupSpec
    prime: int
    results: list
    verdict: str
    char_image: CharImageResult | None = None

    @property
    def cd(self) -> int | None:
        vals = {r.cd for r in self.results if r.computed}
        return vals.pop() if len(vals) == 1 else None

    def by_method(self, method: str) -> CdResult:
        return next(r for r in self.results if r.method == method)


def compute_all(
    spec: GroupSpec,
    p: int,
    budget: Budget | None = None,
    methods: Iterable[str] = METHODS,
    cohomology: Mapping | None = None,
    degree_data: Mapping | None = None,
    atlas=None,
    strict: bool = False,
) -> ComputeReport:
    """Run every applicable route for ``(spec, p)`` and demand agreement.

    ``cohomology`` maps ``GroupSpec`` to :class:`CohomologyInput` (p = 2 only);
    ``degree_data`` maps ``(GroupSpec, p)`` to a user-supplied multiset of
    mod-p degrees.  With ``strict`` an out-of-budget direct computation is an
    error instead of a skip.
    """
    p = check_prime(p)
    methods = list(methods)
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise InputError(f"unknown methods {sorted(unknown)}")
    rs = build_root_system(spec)
    N, n = rs.N, rs.n
    torsion = torsion_primes(spec)
    chow_x = quantum_factor_product(rs.profile.degrees)
    results = {}

    def skip(method, reason):
        results[method] = CdResult(spec, p, method, None, skipped_reason=reason)

    # Mod-p degree source: direct computation, user data, or the torsion table.
    char_image = None
    p_r, degs, deg_source = None, None, None
    if DIRECT in methods:
        try:
            char_image = compute_char_image(spec, p, budget, atlas=atlas)
        except InfeasibleScale as exc:
            if strict:
                raise
            skip(DIRECT, f"infeasible at this budget: {exc}")
        else:
            results[DIRECT] = CdResult(
                spec, p, DIRECT, char_image.cd,
                {
                    "hilbert": char_image.hilbert.to_list(),
                    "recovered_degrees": char_image.recovered_degrees,
                    "recovery_error": char_image.recovery_error,
                    "seconds": round(char_image.seconds, 3),
                },
            )
            p_r = char_image.hilbert
            if char_image.recovered:
                degs, deg_source = char_image.recovered_degrees, "recovered from the direct computation"
    if degs is None and degree_data and (spec, p) in degree_data:
        entry = degree_data[(spec, p)]
        degs, deg_source = list(entry["degrees"]), f"user-supplied ({entry.get('provenance', 'no provenance')})"
    if degs is None and p not in torsion.primes and not torsion.partial:
        degs, deg_source = list(rs.profile.degrees), "classical degrees (p is not a torsion prime)"
    if p_r is None and degs is not None:
        p_r = quantum_factor_product(degs)

    if CLOSED_FORM in methods:
        if degs is None:
            skip(CLOSED_FORM, "no mod-p degrees: direct computation unavailable or unrecovered, and no degree data")
        else:
            results[CLOSED_FORM] = CdResult(
                spec, p, CLOSED_FORM, cd_closed_form(N, n, degs), {"mod_p_degrees": sorted(degs), "source": deg_source}
            )

    group_chow = None
    if CHOW_OF_G in methods or P_EXCEPTIONAL in methods:
        if p_r is not None:
            q_cd = cd_via_group_chow(chow_x, p_r)
            group_chow = exact_divide(chow_x, p_r)
            if CHOW_OF_G in methods:
                results[CHOW_OF_G] = CdResult(
                    spec, p, CHOW_OF_G, q_cd,
                    {"group_chow_series": group_chow.to_list(), "source": "direct computation" if char_image else deg_source},
                )
        elif CHOW_OF_G in methods:
            skip(CHOW_OF_G, "no Hilbert series for R_p")

    if P_EXCEPTIONAL in methods:
        if p == 2:
            skip(P_EXCEPTIONAL, "stated for odd primes only; see cohomology_p2")
        elif group_chow is None:
            skip(P_EXCEPTIONAL, "no Ch(G) series to factor")
        else:
            try:
                exc_degs = p_exceptional_search(group_chow, p)
            except ConsistencyFailure as exc:
                skip(P_EXCEPTIONAL, f"no p-power factorization of Ch(G): {exc}")
            else:
                results[P_EXCEPTIONAL] = CdResult(
                    spec, p, P_EXCEPTIONAL, cd_from_p_exceptional(exc_degs, p),
                    {"p_exceptional": [[e.d, e.d_prime, e.k] for e in exc_degs], "source": "factorization of Ch(G) series"},
                )

    if COHOMOLOGY_P2 in methods:
        record = (cohomology or {}).get(spec)
        if p != 2:
            skip(COHOMOLOGY_P2, "only defined at p = 2")
        elif record is None:
            skip(COHOMOLOGY_P2, "no cohomology data record for this group")
        else:
            results[COHOMOLOGY_P2] = CdResult(
                spec, p, COHOMOLOGY_P2, cd_p2_cohomology(record),
                {"poincare_degree": record.poincare.degree, "odd_degrees": record.odd_generator_degrees, "provenance": record.provenance},
            )

    ordered = [results[m] for m in METHODS if m in results]
    report = ComputeReport(spec, p, ordered, "insufficient", char_image)
    computed = [r for r in ordered if r.computed]
    for r in computed:
        if not 0 <= r.cd <= N:
            raise ConsistencyFailure(f"{r.method} gave cd = {r.cd} outside [0, {N}]", {"report": report})
        if p not in torsion.primes and not torsion.partial and r.cd != 0:
            raise ConsistencyFailure(f"{r.method} gave cd = {r.cd} at a non-torsion prime", {"report": report})
    values = {r.cd for r in computed}
    if len(values) > 1:
        report.verdict = "disagree"
        raise ConsistencyFailure(
            f"{spec.label} p={p}: methods disagree: " + ", ".join(f"{r.method}={r.cd}" for r in computed),
            {"report": report},
        )
    if values:
        report.verdict = "agree"
    return report
