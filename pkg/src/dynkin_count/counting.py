"""Exact counts of complete exceptional sequences e(Δ).

Two independent routes: the closed-form table (combined over components by
the shuffle multinomial), and the vertex-deletion recursion
``e(Δ) = (h/2) * Σ_i e(Δ(i))`` applied per connected component.
"""

from __future__ import annotations

import math
import threading
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, Tuple, Union

from .diagram import (
    ConnectedDiagram,
    Diagram,
    as_diagram,
    coxeter_number,
    delete_vertex,
    weyl_order,
)

DiagramLike = Union[Diagram, ConnectedDiagram, str]

_EXCEPTIONAL_E = {
    ("E", 6): 2**9 * 3**4,
    ("E", 7): 2 * 3**12,
    ("E", 8): 2 * 3**5 * 5**7,
    ("F", 4): 2**4 * 3**3,
    ("G", 2): 6,
}


class UniformFormulaError(ArithmeticError):
    pass


def e_closed(d: ConnectedDiagram) -> int:
    f, n = d.family, d.rank
    if f == "A":
        return (n + 1) ** (n - 1)
    if f in "BC":
        return n**n
    if f == "D":
        return 2 * (n - 1) ** n
    return _EXCEPTIONAL_E[(f, n)]


def multinomial(ranks: Iterable[int]) -> int:
    """``(n_1 + ... + n_k)! / (n_1! ... n_k!)`` as a product of binomials."""
    total = 0
    out = 1
    for r in ranks:
        total += r
        out *= math.comb(total, r)
    return out


def shuffle(parts: Iterable[Tuple[int, int]]) -> int:
    """Combine ``(rank, count)`` pairs of disjoint components."""
    parts = list(parts)
    return multinomial(r for r, _ in parts) * math.prod(c for _, c in parts)


def e_of(d: DiagramLike) -> int:
    """e of a possibly disconnected diagram from the closed forms."""
    d = as_diagram(d)
    return shuffle((c.rank, e_closed(c)) for c in d)


# -- recursion --------------------------------------------------------------

def memo_key(d: DiagramLike) -> str:
    """Canonical key with B and C identified (their counts agree)."""
    d = as_diagram(d)
    return "+".join(sorted(f"{'B' if c.family == 'C' else c.family}{c.rank}" for c in d))


_memo: Dict[Tuple[str, int], int] = {}
_memo_lock = threading.Lock()


def _recursive_connected(d: ConnectedDiagram) -> int:
    fam = "B" if d.family == "C" else d.family
    key = (fam, d.rank)
    with _memo_lock:
        if key in _memo:
            return _memo[key]
    if d.rank == 1:
        value = 1
    else:
        h = coxeter_number(d)
        total = h * sum(e_recursive(delete_vertex(d, i)) for i in d.vertices())
        assert total % 2 == 0, f"h * sum is odd for {d}: {total}"
        value = total // 2
    with _memo_lock:
        _memo.setdefault(key, value)
    return value


def e_recursive(d: DiagramLike) -> int:
    """e via ``(h/2) Σ e(Δ(i))`` per component, combined by the shuffle."""
    d = as_diagram(d)
    return shuffle((c.rank, _recursive_connected(c)) for c in d)


def clear_cache() -> None:
    with _memo_lock:
        _memo.clear()


# -- per-vertex tables ------------------------------------------------------

@dataclass(frozen=True)
class BreakdownRow:
    vertex: int
    subdiagram: Diagram
    e: int


@dataclass(frozen=True)
class CountBreakdown:
    diagram: ConnectedDiagram
    rows: Tuple[BreakdownRow, ...]
    h: int
    total: int

    def to_dict(self) -> dict:
        return {
            "diagram": str(self.diagram),
            "h": str(self.h),
            "total": str(self.total),
            "rows": [
                {"vertex": r.vertex, "subdiagram": str(r.subdiagram), "e": str(r.e)}
                for r in self.rows
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CountBreakdown":
        diagram = as_diagram(data["diagram"]).components[0]
        rows = tuple(
            BreakdownRow(
                r["vertex"],
                Diagram() if r["subdiagram"] == "0" else as_diagram(r["subdiagram"]),
                int(r["e"]),
            )
            for r in data["rows"]
        )
        return cls(diagram, rows, int(data["h"]), int(data["total"]))


def e_breakdown(d: ConnectedDiagram) -> CountBreakdown:
    """Per-vertex table ``(i, Δ(i), e(Δ(i)))`` with h and the resulting total."""
    rows = []
    for i in d.vertices():
        sub = delete_vertex(d, i)
        rows.append(BreakdownRow(i, sub, e_of(sub)))
    h = coxeter_number(d)
    if d.rank == 1:
        return CountBreakdown(d, tuple(rows), h, 1)
    s = h * sum(r.e for r in rows)
    assert s % 2 == 0
    return CountBreakdown(d, tuple(rows), h, s // 2)


def verify_uniform_formula(d: ConnectedDiagram) -> Tuple[int, int, int]:
    """Return ``(e, n! h^n, |W|)`` after checking ``e * |W| == n! h^n``."""
    n = d.rank
    e = e_closed(d)
    rhs = math.factorial(n) * coxeter_number(d) ** n
    w = weyl_order(d)
    if e * w != rhs:
        raise UniformFormulaError(f"{d}: e*|W| = {e * w} but n!h^n = {rhs}")
    return e, rhs, w


def e_B_via_A(n: int) -> int:
    if n < 2:
        raise ValueError("n must be >= 2")
    return n * n * e_closed(ConnectedDiagram("A", n - 1))


# -- factorization ----------------------------------------------------------

_TRIAL_LIMIT = 10**6
_PRIME_LIMIT = 10**12


def factorize(c: int) -> Dict[int, int]:
    """Prime factorization ``{p: k}`` by trial division.

    A cofactor left over after trial division up to 10**6 is accepted as prime
    only below 10**12.
    """
    if c < 1:
        raise ValueError(f"cannot factorize {c}")
    out: Counter = Counter()
    p = 2
    while c > 1 and p <= _TRIAL_LIMIT and p * p <= c:
        while c % p == 0:
            out[p] += 1
            c //= p
        p += 1 if p == 2 else 2
    if c > 1:
        if p * p <= c and c >= _PRIME_LIMIT:
            raise ValueError(f"cofactor {c} is too large to certify as prime")
        out[c] += 1
    return dict(sorted(out.items()))


def format_factorization(f: Dict[int, int]) -> str:
    if not f:
        return "1"
    return "·".join(str(p) if k == 1 else f"{p}^{k}" for p, k in sorted(f.items()))
