"""Exact integer polynomials in one variable, for Poincare and Hilbert series.

Coefficients are Python ints, so nothing overflows: the middle coefficients of
the E8 length generating function do not fit in 32 bits.
"""

from __future__ import annotations

from itertools import zip_longest
from typing import Iterable

from .errors import ConsistencyFailure, InputError


class IntPoly:
    """Immutable polynomial ``sum_k coeffs[k] t^k`` with integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "IntPoly":
        return cls([0] * k + [c])

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if not self.coeffs:
            raise InputError("the zero polynomial has no degree")
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == IntPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _coerce(other)
        return IntPoly(a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(-a for a in self.coeffs)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if self.is_zero or other.is_zero:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = IntPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def shift(self, k: int) -> "IntPoly":
        return IntPoly([0] * k + list(self.coeffs))

    def is_palindromic(self) -> bool:
        return self.coeffs == self.coeffs[::-1]

    def is_hilbert_series(self) -> bool:
        return bool(self.coeffs) and self.coeffs[0] == 1 and all(c >= 0 for c in self.coeffs)

    def to_list(self) -> list:
        return list(self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _coerce(x) -> IntPoly:
    if isinstance(x, IntPoly):
        return x
    if isinstance(x, int):
        return IntPoly([x])
    raise TypeError(f"cannot combine IntPoly with {type(x).__name__}")


class NonExactDivision(ConsistencyFailure):
    """Raised by :func:`exact_divide` when the remainder is nonzero."""

    def __init__(self, degree: int, remainder: IntPoly, partial_quotient: IntPoly):
        super().__init__(
            f"division is not exact: mismatch at quotient degree {degree}",
            {"degree": degree, "remainder": remainder.to_list(), "partial_quotient": partial_quotient.to_list()},
        )
        self.degree = degree
        self.remainder = remainder
        self.partial_quotient = partial_quotient


class FactorizationFailure(ConsistencyFailure):
    """Raised when a Hilbert series is not a product of ``[e]_t`` factors."""

    def __init__(self, reason: str, partial: list, residual: IntPoly):
        super().__init__(
            f"degree multiset not recoverable: {reason}",
            {"partial": list(partial), "residual": residual.to_list()},
        )
        self.partial = list(partial)
        self.residual = residual


def q_integer(d: int) -> IntPoly:
    """``1 + t + ... + t^(d-1)``."""
    if d < 1:
        raise InputError(f"factor degree must be >= 1, got {d}")
    return IntPoly([1] * d)


def quantum_factor_product(degree_list: Iterable[int]) -> IntPoly:
    """``prod_d (1 - t^d) / (1 - t)`` over a multiset of degrees; empty product is 1."""
    degs = sorted(int(d) for d in degree_list)
    if any(d < 1 for d in degs):
        raise InputError(f"all degrees must be >= 1, got {degs}")
    # multiplying by [d]_t is a running window sum of width d
    coeffs = [1]
    for d in degs:
        if d == 1:
            continue
        out = [0] * (len(coeffs) + d - 1)
        window = 0
        for k in range(len(out)):
            if k < len(coeffs):
                window += coeffs[k]
            if k - d >= 0:
                window -= coeffs[k - d]
            out[k] = window
        coeffs = out
    return IntPoly(coeffs)


def exact_divide(numerator: IntPoly, denominator: IntPoly) -> IntPoly:
    """Return ``q`` with ``q * denominator == numerator`` or raise :class:`NonExactDivision`.

    Division runs from the constant term upward, so the denominator must have
    constant term 1.  On failure, ``degree`` is the quotient degree whose
    coefficient would be needed to cancel the lowest surviving remainder term.
    """
    numerator, denominator = _coerce(numerator), _coerce(denominator)
    if denominator.is_zero or denominator[0] != 1:
        raise InputError("denominator must have constant term 1")
    if numerator.is_zero:
        return IntPoly()
    qdeg = numerator.degree - denominator.degree
    if qdeg < 0:
        raise NonExactDivision(0, numerator, IntPoly())
    den = denominator.coeffs
    q = []
    for k in range(qdeg + 1):
        c = numerator[k]
        for j in range(1, min(k, len(den) - 1) + 1):
            c -= den[j] * q[k - j]
        q.append(c)
    quotient = IntPoly(q)
    remainder = numerator - quotient * denominator
    if not remainder.is_zero:
        first = next(k for k, c in enumerate(remainder.coeffs) if c)
        raise NonExactDivision(first - denominator.degree, remainder, quotient)
    return quotient


def recover_degree_multiset(hilbert: IntPoly, n: int) -> list:
    """Find the multiset ``{e_1..e_n}`` with ``hilbert == prod_j [e_j]_t``.

    ``hilbert * (1-t)^n`` must equal ``prod_j (1 - t^{e_j})``; the factors are
    read off from the lowest degree upward.  Degree-1 entries are allowed.
    """
    hilbert = _coerce(hilbert)
    if not hilbert.is_hilbert_series():
        raise InputError("expected constant term 1 and nonnegative coefficients")
    if n < 0:
        raise InputError("n must be nonnegative")
    g = hilbert * IntPoly([1, -1]) ** n
    found = []
    while g != 1:
        k = next(k for k in range(1, len(g)) if g[k])
        if g[k] > 0:
            raise FactorizationFailure(f"positive coefficient at degree {k}", found, g)
        try:
            g = exact_divide(g, IntPoly.monomial(k, -1) + 1)
        except NonExactDivision:
            raise FactorizationFailure(f"1 - t^{k} does not divide the residual", found, g) from None
        found.append(k)
        if len(found) > n:
            raise FactorizationFailure(f"more than {n} factors needed", found, g)
    if len(found) != n:
        raise FactorizationFailure(f"found {len(found)} factors, expected {n}", found, g)
    return found

