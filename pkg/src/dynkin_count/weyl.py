"""Brute-force oracle: count reflection factorizations of a Coxeter element.

Weyl group elements are integer matrices acting on the root lattice in the
simple-root basis (column ``j`` is the image of ``alpha_j``). Every column of
a group element is a root, so entries stay bounded by the largest root
coefficient (6, in E8) and int64 arithmetic is exact.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from .diagram import ConnectedDiagram, as_diagram, coxeter_number

WeylElement = np.ndarray

BUDGETS = {"low": 50_000, "high": 5_000_000}


class BudgetExhausted(RuntimeError):
    """The search hit its node-expansion limit before finishing."""

    def __init__(self, budget: int, expansions: int):
        self.budget = budget
        self.expansions = expansions
        super().__init__(f"budget of {budget} node expansions exhausted")


def resolve_budget(budget: Union[None, int, str]) -> Optional[int]:
    if budget is None:
        return None
    if isinstance(budget, str):
        if budget in BUDGETS:
            return BUDGETS[budget]
        budget = int(budget)
    if budget < 1:
        raise ValueError("budget must be positive")
    return budget


@dataclass(frozen=True)
class RootSystem:
    diagram: ConnectedDiagram
    cartan: Tuple[Tuple[int, ...], ...]
    gram: np.ndarray
    positive_roots: Tuple[Tuple[int, ...], ...]
    reflections: Tuple[WeylElement, ...]

    @property
    def rank(self) -> int:
        return self.diagram.rank

    def simple_reflection(self, i: int) -> WeylElement:
        """Reflection in simple root ``i`` (1-based label)."""
        e = [0] * self.rank
        e[i - 1] = 1
        return self.reflections[self.positive_roots.index(tuple(e))]


def _gram_matrix(d: ConnectedDiagram) -> np.ndarray:
    n = d.rank
    lengths = d.root_lengths()
    g = np.zeros((n, n), dtype=np.int64)
    for i in d.vertices():
        g[i - 1, i - 1] = lengths[i]
    for (i, j), m in d.edges().items():
        # multiple edges join a short root of length 2 to a long one of length 2m
        ip = -max(lengths[i], lengths[j]) // 2
        g[i - 1, j - 1] = g[j - 1, i - 1] = ip
    return g


def reflection_matrix(gram: np.ndarray, beta: Sequence[int]) -> WeylElement:
    """Matrix of ``v -> v - 2(v,beta)/(beta,beta) beta`` in the simple-root basis."""
    b = np.asarray(beta, dtype=np.int64)
    gb = gram @ b
    bb = int(b @ gb)
    coeff = 2 * gb
    assert np.all(coeff % bb == 0), "non-crystallographic reflection"
    return np.eye(len(b), dtype=np.int64) - np.outer(b, coeff // bb)


def build_root_system(d: ConnectedDiagram) -> RootSystem:
    """Positive roots by closure of the simple roots under simple reflections."""
    d = as_diagram(d).components[0] if not isinstance(d, ConnectedDiagram) else d
    n = d.rank
    gram = _gram_matrix(d)
    cartan = tuple(
        tuple(int(2 * gram[i, j] // gram[i, i]) for j in range(n)) for i in range(n)
    )
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    simple_refl = [reflection_matrix(gram, s) for s in simple]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for r in frontier:
            v = np.array(r, dtype=np.int64)
            for s in simple_refl:
                w = tuple(int(x) for x in s @ v)
                if all(x >= 0 for x in w) and w not in roots:
                    roots.add(w)
                    nxt.append(w)
        frontier = nxt
    positive = tuple(sorted(roots, key=lambda r: (sum(r), r)))
    reflections = tuple(reflection_matrix(gram, r) for r in positive)
    for m in reflections:
        m.setflags(write=False)
    return RootSystem(d, cartan, gram, positive, reflections)


def coxeter_element(rs: RootSystem, order: Optional[Sequence[int]] = None) -> WeylElement:
    """Product ``s_{o1} s_{o2} ... s_{on}`` of the simple reflections."""
    n = rs.rank
    order = list(range(1, n + 1)) if order is None else list(order)
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError(f"{order} is not a permutation of 1..{n}")
    c = np.eye(n, dtype=np.int64)
    for i in order:
        c = c @ rs.simple_reflection(i)
    return c


def exact_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    m = [[int(x) for x in row] for row in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, nrows):
            for c in range(col + 1, ncols):
                m[r][c] = (p * m[r][c] - m[r][col] * m[rank][c]) // prev
            m[r][col] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def reflection_length(rs: Optional[RootSystem], w: WeylElement) -> int:
    """Minimal number of reflections with product ``w``: ``rank(w - I)``."""
    w = np.asarray(w)
    return exact_rank((w - np.eye(w.shape[0], dtype=w.dtype)).tolist())


def multiplicative_order(w: WeylElement, limit: int = 1000) -> int:
    n = w.shape[0]
    eye = np.eye(n, dtype=np.int64)
    p = w.copy()
    for k in range(1, limit + 1):
        if np.array_equal(p, eye):
            return k
        p = p @ w
    raise ValueError("order exceeds limit")


class _Search:
    """Depth-first count of geodesic reflection factorizations.

    From the remaining element ``w`` (initially ``c``) it branches only on
    reflections ``t`` with ``l(t w) = l(w) - 1``. Lengths are cached per
    element; with ``memo`` the subtree counts are cached as well.
    """

    def __init__(self, rs: RootSystem, budget: Optional[int], memo: bool):
        self.n = rs.rank
        self.stack = np.stack(rs.reflections)
        self.budget = budget
        self.memo: Optional[Dict[bytes, int]] = {} if memo else None
        self.lengths: Dict[bytes, int] = {}
        self.expansions = 0
        self.identity = np.eye(self.n, dtype=np.int64)

    def length(self, w: np.ndarray, key: bytes) -> int:
        ell = self.lengths.get(key)
        if ell is None:
            ell = reflection_length(None, w)
            self.lengths[key] = ell
        return ell

    def count(self, w: np.ndarray, remaining: int) -> int:
        key = w.tobytes()
        assert self.length(w, key) == remaining, "length descent broken"
        if remaining == 0:
            assert np.array_equal(w, self.identity)
            return 1
        if self.memo is not None and key in self.memo:
            return self.memo[key]
        self.expansions += 1
        if self.budget is not None and self.expansions > self.budget:
            raise BudgetExhausted(self.budget, self.expansions)
        total = 0
        children = self.stack @ w
        for child in children:
            ckey = child.tobytes()
            if self.length(child, ckey) == remaining - 1:
                total += self.count(child, remaining - 1)
        if self.memo is not None:
            self.memo[key] = total
        return total


def first_step_counts(
    rs: RootSystem,
    order: Optional[Sequence[int]] = None,
    budget: Union[None, int, str] = None,
    memo: bool = False,
    first: Optional[Sequence[int]] = None,
) -> Tuple[Dict[int, int], int]:
    """Number of factorizations starting with each reflection index.

    Returns ``({reflection index: count}, expansions)``; indices whose first
    step does not shorten ``c`` are omitted.
    """
    c = coxeter_element(rs, order)
    search = _Search(rs, resolve_budget(budget), memo)
    n = rs.rank
    search.expansions += 1
    out = {}
    indices = range(len(rs.reflections)) if first is None else first
    for k in indices:
        w = rs.reflections[k] @ c
        if search.length(w, w.tobytes()) == n - 1:
            out[k] = search.count(w, n - 1)
    return out, search.expansions


def _worker(args):
    d, order, budget, memo, first = args
    return first_step_counts(build_root_system(d), order, budget, memo, first)


def count_chain_factorizations(
    rs: RootSystem,
    order: Optional[Sequence[int]] = None,
    budget: Union[None, int, str] = None,
    memo: bool = False,
    jobs: int = 1,
) -> int:
    """Number of tuples ``(t_1, ..., t_n)`` of reflections with ``t_1 ... t_n = c``.

    ``c`` is the Coxeter element for ``order`` (default ``1..n``). Raises
    :class:`BudgetExhausted` when more than ``budget`` nodes are expanded.
    With ``jobs > 1`` the first reflection is split across worker processes,
    each holding its own caches; the budget then bounds the summed expansions.
    """
    limit = resolve_budget(budget)
    if jobs <= 1:
        counts, _ = first_step_counts(rs, order, limit, memo)
        return sum(counts.values())
    idx = list(range(len(rs.reflections)))
    chunks = [idx[j::jobs] for j in range(jobs)]
    total = 0
    expansions = 0
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for counts, exp in pool.map(
            _worker, [(rs.diagram, order, limit, memo, ch) for ch in chunks]
        ):
            total += sum(counts.values())
            expansions += exp
    if limit is not None and expansions > limit:
        raise BudgetExhausted(limit, expansions)
    return total


def chain_count(d: ConnectedDiagram, **kwargs) -> int:
    return count_chain_factorizations(build_root_system(d), **kwargs)


def expected_positive_roots(d: ConnectedDiagram) -> int:
    return d.rank * coxeter_number(d) // 2
