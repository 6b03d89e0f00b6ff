"""Geometric codes of integer pairs and triples.

A triple ``(a, b, N)`` with ``b >= 2`` and ``b`` not dividing ``N`` is
re-parameterized as a combinatorial part ``(alpha, beta, gamma, a)`` and a
parametric part ``(t, u)``::

    alpha = N mod b      beta = b mod (alpha*a)      gamma = floor(N/b) mod a
    t = floor(b / (alpha*a))                         u = floor(floor(N/b) / a)

with inverse ``b = alpha*a*t + beta`` and ``N = b*(a*u + gamma) + alpha``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from math import gcd

from .errors import DomainError
from .numth import check_int64


@dataclass(frozen=True)
class PairCode:
    alpha: int
    a: int
    t: int


def encode_pair(a: int, n: int) -> PairCode:
    check_int64(a, "a")
    check_int64(n, "N")
    if not 0 < a < n:
        raise DomainError(f"need 0 < a < N, got a={a}, N={n}")
    return PairCode(n % a, a, n // a)


def decode_pair(code: PairCode) -> tuple[int, int]:
    return code.a, code.a * code.t + code.alpha


@dataclass(frozen=True)
class GeometricCode:
    alpha: int
    beta: int
    gamma: int
    a: int
    t: int
    u: int

    @property
    def comb(self) -> tuple[int, int, int, int]:
        return (self.alpha, self.beta, self.gamma, self.a)

    @property
    def b(self) -> int:
        return self.alpha * self.a * self.t + self.beta

    @property
    def N(self) -> int:
        return self.b * (self.a * self.u + self.gamma) + self.alpha

    def to_json(self) -> dict:
        return asdict(self)

    def __str__(self) -> str:
        return (
            f"alpha={self.alpha} beta={self.beta} gamma={self.gamma} "
            f"a={self.a} t={self.t} u={self.u}"
        )


def encode_triple(a: int, b: int, n: int) -> GeometricCode:
    for v, name in ((a, "a"), (b, "b"), (n, "N")):
        check_int64(v, name)
    if a < 1:
        raise DomainError(f"need a >= 1, got {a}")
    if b < 2:
        raise DomainError(f"need b >= 2, got {b}")
    if n < 1:
        raise DomainError(f"need N >= 1, got {n}")
    if n % b == 0:
        raise DomainError(f"b={b} divides N={n}")
    alpha = n % b
    q = n // b
    return GeometricCode(alpha, b % (alpha * a), q % a, a, b // (alpha * a), q // a)


def cond31(alpha: int, beta: int, gamma: int, a: int, t: int = 0, u: int = 0) -> bool:
    """Range conditions: ``0 < alpha < b``, ``0 <= beta < alpha*a``, ``0 <= gamma < a``, ``t, u >= 0``."""
    if a < 1 or alpha < 1 or t < 0 or u < 0:
        return False
    if not (0 <= beta < alpha * a and 0 <= gamma < a):
        return False
    b = alpha * a * t + beta
    return alpha < b


def cond32(alpha: int, beta: int, gamma: int, a: int) -> bool:
    """Coprimality: ``gcd(alpha, beta) = 1`` and ``gcd(a, alpha + beta*gamma) = 1``."""
    return gcd(alpha, beta) == 1 and gcd(a, alpha + beta * gamma) == 1


def check_conditions(c: GeometricCode) -> dict[str, bool]:
    return {
        "cond31": cond31(c.alpha, c.beta, c.gamma, c.a, c.t, c.u),
        "cond32": cond32(c.alpha, c.beta, c.gamma, c.a),
    }


def decode_code(c: GeometricCode) -> tuple[int, int, int]:
    if not cond31(c.alpha, c.beta, c.gamma, c.a, c.t, c.u):
        raise DomainError(f"code violates the range conditions: {c}")
    return c.a, c.b, c.N


def code_from_comb(comb, t: int, u: int) -> GeometricCode:
    alpha, beta, gamma, a = comb
    return GeometricCode(alpha, beta, gamma, a, t, u)
