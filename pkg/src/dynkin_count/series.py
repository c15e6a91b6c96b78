"""Integer power-series prefixes under binomial convolution."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple


@dataclass(frozen=True)
class SeriesPrefix:
    """Coefficients ``c_0 .. c_N`` of a formal power series in ``T``."""

    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a series prefix needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __mul__(self, other: "SeriesPrefix") -> "SeriesPrefix":
        return binomial_convolution(self, other)

    @classmethod
    def from_function(cls, f: Callable[[int], int], order: int) -> "SeriesPrefix":
        if order < 0:
            raise ValueError("order must be >= 0")
        return cls(tuple(f(n) for n in range(order + 1)))

    @classmethod
    def unit(cls, order: int) -> "SeriesPrefix":
        return cls((1,) + (0,) * order)


def A(n: int) -> int:
    """``(n+1)^(n-1)``, labelled trees on n+1 nodes; A(0) = 1."""
    return 1 if n == 0 else (n + 1) ** (n - 1)


def B(n: int) -> int:
    return n**n


def D(n: int) -> int:
    """``(n-1)^n``, fixed-point-free self-maps of an n-set."""
    return (n - 1) ** n


def seq_A(N: int) -> SeriesPrefix:
    return SeriesPrefix.from_function(A, N)


def seq_B(N: int) -> SeriesPrefix:
    return SeriesPrefix.from_function(B, N)


def seq_D(N: int) -> SeriesPrefix:
    return SeriesPrefix.from_function(D, N)


def binomial_convolution(F: SeriesPrefix, G: SeriesPrefix) -> SeriesPrefix:
    """``H(n) = Σ_k C(n,k) F(k) G(n-k)``."""
    if F.order != G.order:
        raise ValueError(f"order mismatch: {F.order} vs {G.order}")
    return SeriesPrefix(
        tuple(
            sum(math.comb(n, k) * F[k] * G[n - k] for k in range(n + 1))
            for n in range(F.order + 1)
        )
    )


def convolution_terms(F: SeriesPrefix, G: SeriesPrefix, n: int) -> Tuple[Tuple[int, int, int], ...]:
    """The summands ``(C(n,k), F(k), G(n-k))`` of ``(F*G)(n)``."""
    return tuple((math.comb(n, k), F[k], G[n - k]) for k in range(n + 1))


def abel_sum(x: int, y: int, z: int, n: int) -> int:
    """Right-hand side of Abel's identity ``Σ_k C(n,k) x (x-kz)^(k-1) (y+kz)^(n-k)``.

    The k = 0 term is taken as ``y^n``. Equals ``(x+y)^n`` whenever ``x != 0``.
    """
    if x == 0:
        raise ValueError("x must be nonzero")
    if n < 0:
        raise ValueError("n must be >= 0")
    total = y**n
    for k in range(1, n + 1):
        total += math.comb(n, k) * x * (x - k * z) ** (k - 1) * (y + k * z) ** (n - k)
    return total


# -- the three convolution identities ---------------------------------------

IDENTITIES: Dict[str, Tuple[str, str, Callable[[int], int]]] = {
    "A*A": ("A", "A", lambda n: 2 * (n + 2) ** (n - 1) if n else 1),
    "A*B": ("A", "B", lambda n: (n + 1) ** n),
    "A*D": ("A", "D", lambda n: n**n),
}

_SEQS = {"A": seq_A, "B": seq_B, "D": seq_D}


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    lhs: Tuple[int, ...]
    rhs: Tuple[int, ...]
    first_failure: Optional[int]

    @property
    def ok(self) -> bool:
        return self.first_failure is None


@dataclass(frozen=True)
class PropositionReport:
    order: int
    checks: Tuple[IdentityCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __getitem__(self, name: str) -> IdentityCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def verify_appendix_proposition(N: int) -> PropositionReport:
    """Check A*A = Σ 2(n+2)^(n-1) T^n, A*B = Σ (n+1)^n T^n and A*D = B up to order N."""
    if N < 0:
        raise ValueError("N must be >= 0")
    checks = []
    for name, (f, g, closed) in IDENTITIES.items():
        lhs = binomial_convolution(_SEQS[f](N), _SEQS[g](N)).coeffs
        rhs = tuple(closed(n) for n in range(N + 1))
        bad = next((n for n in range(N + 1) if lhs[n] != rhs[n]), None)
        checks.append(IdentityCheck(name, lhs, rhs, bad))
    return PropositionReport(N, tuple(checks))


def series_link_checks(n: int) -> Dict[str, Tuple[int, int]]:
    """Pairs ``(via series, closed form)`` tying A*A and D*A to e(A_n), e(D_n)."""
    from .counting import e_closed
    from .diagram import ConnectedDiagram

    out = {}
    if n >= 1:
        F = binomial_convolution(seq_A(n - 1), seq_A(n - 1))
        h = n + 1
        assert (h * F[n - 1]) % 2 == 0
        out[f"A{n}"] = (h * F[n - 1] // 2, e_closed(ConnectedDiagram("A", n)))
    if n >= 4:
        G = binomial_convolution(seq_D(n - 1), seq_A(n - 1))
        out[f"D{n}"] = ((n - 1) * 2 * G[n - 1], e_closed(ConnectedDiagram("D", n)))
    return out
