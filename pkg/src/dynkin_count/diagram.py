"""Dynkin diagrams: data model, parser, vertex deletion and classical tables.

Vertex labels are 1-based for every family:

* ``A_n``: path ``1 - 2 - ... - n``
* ``B_n`` / ``C_n``: path ``1 - ... - n`` with the double edge between
  ``n-1`` and ``n``; in ``B_n`` vertex ``n`` is the only short root, in
  ``C_n`` it is the only long root
* ``D_n``: vertices 1 and 2 both joined to 3, then path ``3 - 4 - ... - n``
* ``E_n``: vertex 1 joined to 4, path ``2 - 3 - 4 - ... - n``
* ``F_4``: ``1 - 2 = 3 - 4`` with 1, 2 short and 3, 4 long
* ``G_2``: ``1 ≡ 2`` with 1 short
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, NamedTuple, Tuple, Union

FAMILIES = "ABCDEFG"

LEGAL_RANKS = {
    "A": "rank >= 1",
    "B": "rank >= 2 (B1 reads as A1)",
    "C": "rank >= 2 (C1 reads as A1)",
    "D": "rank >= 2 (D1 reads as A1)",
    "E": "rank in {6,7,8}",
    "F": "rank = 4",
    "G": "rank = 2",
}

# squared root lengths; simple edges between roots of squared length L carry
# inner product -L/2, multiple edges join short (2) to long (2 * multiplicity)
SHORT = 2


class DiagramError(ValueError):
    """Base class for malformed diagram input."""


class DiagramSyntaxError(DiagramError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


class RankError(DiagramError):
    def __init__(self, family: str, rank: int):
        self.family = family
        self.rank = rank
        super().__init__(
            f"{family}{rank}: family {family} requires {LEGAL_RANKS[family]}"
        )


def _rank_ok(family: str, rank: int) -> bool:
    if family == "E":
        return rank in (6, 7, 8)
    if family == "F":
        return rank == 4
    if family == "G":
        return rank == 2
    return rank >= 1


@dataclass(frozen=True, order=True)
class ConnectedDiagram:
    """A connected Dynkin diagram, e.g. ``ConnectedDiagram("E", 6)``.

    ``B1``, ``C1`` and ``D1`` are normalized to ``A1``. ``D2`` and ``D3`` are
    kept as typed.
    """

    family: str
    rank: int

    def __post_init__(self):
        family = str(self.family).upper()
        if family not in FAMILIES or len(family) != 1:
            raise DiagramError(f"unknown Dynkin family {self.family!r}")
        rank = int(self.rank)
        if not _rank_ok(family, rank):
            raise RankError(family, rank)
        if family in "BCD" and rank == 1:
            family = "A"
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "rank", rank)

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    def vertices(self) -> range:
        return range(1, self.rank + 1)

    def edges(self) -> Dict[Tuple[int, int], int]:
        """Edges ``(i, j)`` with ``i < j`` mapped to their multiplicity."""
        f, n = self.family, self.rank
        if f in "ABC":
            edges = {(i, i + 1): 1 for i in range(1, n)}
            if f != "A" and n >= 2:
                edges[(n - 1, n)] = 2
            return edges
        if f == "D":
            edges = {}
            if n >= 3:
                edges[(1, 3)] = 1
                edges[(2, 3)] = 1
            edges.update({(i, i + 1): 1 for i in range(3, n)})
            return edges
        if f == "E":
            edges = {(1, 4): 1}
            edges.update({(i, i + 1): 1 for i in range(2, n)})
            return edges
        if f == "F":
            return {(1, 2): 1, (2, 3): 2, (3, 4): 1}
        return {(1, 2): 3}

    def root_lengths(self) -> Dict[int, int]:
        """Squared length of each simple root (short roots have length 2)."""
        f, n = self.family, self.rank
        lengths = {i: SHORT for i in self.vertices()}
        if f == "B":
            for i in range(1, n):
                lengths[i] = 2 * SHORT
        elif f == "C":
            lengths[n] = 2 * SHORT
        elif f == "F":
            lengths[3] = lengths[4] = 2 * SHORT
        elif f == "G":
            lengths[2] = 3 * SHORT
        return lengths

    def neighbors(self, v: int) -> List[int]:
        out = []
        for (i, j) in self.edges():
            if i == v:
                out.append(j)
            elif j == v:
                out.append(i)
        return sorted(out)


class Vertex(NamedTuple):
    component: int
    label: int


@dataclass(frozen=True)
class Diagram:
    """A finite multiset of connected Dynkin diagrams (possibly empty).

    The components are stored sorted by ``(family, rank)``, so equality does
    not depend on insertion order.
    """

    components: Tuple[ConnectedDiagram, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(sorted(self.components)))

    @classmethod
    def of(cls, *components: Union[ConnectedDiagram, str]) -> "Diagram":
        comps = []
        for c in components:
            if isinstance(c, str):
                comps.extend(parse_diagram(c).components)
            else:
                comps.append(c)
        return cls(tuple(comps))

    @property
    def rank(self) -> int:
        return sum(c.rank for c in self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[ConnectedDiagram]:
        return iter(self.components)

    def __add__(self, other: "Diagram") -> "Diagram":
        return Diagram(self.components + as_diagram(other).components)

    def vertices(self) -> Iterator[Vertex]:
        for k, c in enumerate(self.components):
            for i in c.vertices():
                yield Vertex(k, i)

    def is_connected(self) -> bool:
        return len(self.components) == 1

    def render(self) -> str:
        return render(self)

    def __str__(self) -> str:
        return render(self) or "0"


def as_diagram(d: Union[Diagram, ConnectedDiagram, str]) -> Diagram:
    if isinstance(d, Diagram):
        return d
    if isinstance(d, ConnectedDiagram):
        return Diagram((d,))
    if isinstance(d, str):
        return parse_diagram(d)
    raise TypeError(f"not a diagram: {d!r}")


def render(d: Union[Diagram, ConnectedDiagram]) -> str:
    """Canonical text form, e.g. ``"A2+A2+B3"``; the empty diagram renders as ``""``."""
    return "+".join(str(c) for c in as_diagram(d).components)


def parse_diagram(spec: str) -> Diagram:
    """Parse ``term ('+' term)*`` with ``term := [A-Ga-g][0-9]+``.

    Whitespace anywhere is ignored.

    >>> render(parse_diagram("b3 + A2+A2"))
    'A2+A2+B3'
    """
    pos = 0
    n = len(spec)
    comps: List[ConnectedDiagram] = []

    def skip_ws() -> None:
        nonlocal pos
        while pos < n and spec[pos].isspace():
            pos += 1

    while True:
        skip_ws()
        if pos >= n:
            raise DiagramSyntaxError("expected a family letter A-G", spec, pos)
        ch = spec[pos]
        if ch.upper() not in FAMILIES or not ch.isalpha():
            raise DiagramSyntaxError(f"expected a family letter A-G, got {ch!r}", spec, pos)
        family = ch.upper()
        pos += 1
        digits = []
        start = pos
        while True:
            skip_ws()
            if pos < n and spec[pos] in "0123456789":
                digits.append(spec[pos])
                pos += 1
            else:
                break
        if not digits:
            raise DiagramSyntaxError("expected a rank after family letter", spec, start)
        comps.append(ConnectedDiagram(family, int("".join(digits))))
        skip_ws()
        if pos >= n:
            break
        if spec[pos] != "+":
            raise DiagramSyntaxError(f"expected '+', got {spec[pos]!r}", spec, pos)
        pos += 1
    return Diagram(tuple(comps))


# -- classification of vertex-deleted subdiagrams ---------------------------

def _components(vertices: FrozenSet[int], adj: Mapping[int, Iterable[int]]) -> List[List[int]]:
    seen = set()
    out = []
    for v in sorted(vertices):
        if v in seen:
            continue
        stack = [v]
        comp = []
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w in vertices and w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append(sorted(comp))
    return out


def classify(
    vertices: Iterable[int],
    edges: Mapping[Tuple[int, int], int],
    lengths: Mapping[int, int],
) -> ConnectedDiagram:
    """Name the Dynkin type of a connected labelled graph.

    ``edges`` maps ``(i, j)`` pairs to multiplicities, ``lengths`` gives the
    squared root length per vertex. Paths become ``A``; forks become ``D`` or
    ``E``. Raises ``DiagramError`` if the graph is not a Dynkin diagram.
    """
    vs = sorted(vertices)
    vset = set(vs)
    es = {e: m for e, m in edges.items() if e[0] in vset and e[1] in vset}
    n = len(vs)
    adj: Dict[int, List[int]] = {v: [] for v in vs}
    for (i, j) in es:
        adj[i].append(j)
        adj[j].append(i)
    if len(_components(frozenset(vs), adj)) != 1:
        raise DiagramError(f"graph on {vs} is not connected")
    if len(es) != n - 1:
        raise DiagramError(f"graph on {vs} contains a cycle")
    if n == 1:
        return ConnectedDiagram("A", 1)

    mults = sorted(es.values())
    degrees = {v: len(adj[v]) for v in vs}
    if mults[-1] == 3:
        if n != 2:
            raise DiagramError("triple edge outside G2")
        return ConnectedDiagram("G", 2)
    if mults[-1] == 2:
        if mults.count(2) > 1 or max(degrees.values()) > 2:
            raise DiagramError("not a Dynkin diagram")
        (i, j), = [e for e, m in es.items() if m == 2]
        if n == 2:
            # B2 vs C2: the higher label is the end of the double edge
            return ConnectedDiagram("B" if lengths[j] < lengths[i] else "C", 2)
        if degrees[i] == 2 and degrees[j] == 2:
            if n != 4:
                raise DiagramError("double edge inside a path of rank != 4")
            return ConnectedDiagram("F", 4)
        short = sum(1 for v in vs if lengths[v] == min(lengths[u] for u in vs))
        return ConnectedDiagram("B" if short == 1 else "C", n)

    branch = [v for v in vs if degrees[v] >= 3]
    if not branch:
        return ConnectedDiagram("A", n)
    if len(branch) > 1 or degrees[branch[0]] > 3:
        raise DiagramError("not a Dynkin diagram")
    b = branch[0]
    arms = []
    for start in adj[b]:
        length, prev, cur = 1, b, start
        while degrees[cur] == 2:
            prev, cur = cur, next(w for w in adj[cur] if w != prev)
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return ConnectedDiagram("D", n)
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return ConnectedDiagram("E", n)
    raise DiagramError(f"fork with arms {arms} is not Dynkin")


def delete_vertex(d: ConnectedDiagram, v: int) -> Diagram:
    """The diagram obtained from ``d`` by removing vertex ``v`` and its edges."""
    if isinstance(v, Vertex):
        v = v.label
    if v not in d.vertices():
        raise DiagramError(f"{d} has no vertex {v} (labels are 1..{d.rank})")
    edges = d.edges()
    lengths = d.root_lengths()
    rest = frozenset(d.vertices()) - {v}
    adj: Dict[int, List[int]] = {u: [] for u in d.vertices()}
    for (i, j) in edges:
        adj[i].append(j)
        adj[j].append(i)
    return Diagram(tuple(classify(c, edges, lengths) for c in _components(rest, adj)))


# -- tables -----------------------------------------------------------------

_EXCEPTIONAL_H = {("E", 6): 12, ("E", 7): 18, ("E", 8): 30, ("F", 4): 12, ("G", 2): 6}
_EXCEPTIONAL_W = {
    ("E", 6): 2**7 * 3**4 * 5,
    ("E", 7): 2**10 * 3**4 * 5 * 7,
    ("E", 8): 2**14 * 3**5 * 5**2 * 7,
    ("F", 4): 2**7 * 3**2,
    ("G", 2): 12,
}


def coxeter_number(d: ConnectedDiagram) -> int:
    f, n = d.family, d.rank
    if f == "A":
        return n + 1
    if f in "BC":
        return 2 * n
    if f == "D":
        return 2 * (n - 1)
    return _EXCEPTIONAL_H[(f, n)]


def _weyl_order_connected(d: ConnectedDiagram) -> int:
    f, n = d.family, d.rank
    if f == "A":
        return math.factorial(n + 1)
    if f in "BC":
        return 2**n * math.factorial(n)
    if f == "D":
        return 2 ** (n - 1) * math.factorial(n)
    return _EXCEPTIONAL_W[(f, n)]


def weyl_order(d: Union[Diagram, ConnectedDiagram]) -> int:
    """Order of the Weyl group; multiplicative over components."""
    return math.prod(_weyl_order_connected(c) for c in as_diagram(d))


def automorphism_rho(d: ConnectedDiagram) -> Dict[int, int]:
    """The order-2 diagram automorphism for A_n (n >= 2), D_n and E6.

    Returns a label permutation as a dict; the identity for every other type.
    """
    f, n = d.family, d.rank
    perm = {i: i for i in d.vertices()}
    if f == "A" and n >= 2:
        perm = {i: n + 1 - i for i in d.vertices()}
    elif f == "D":
        perm[1], perm[2] = 2, 1
    elif f == "E" and n == 6:
        perm.update({2: 6, 6: 2, 3: 5, 5: 3})
    return perm


def connected_types(max_rank: int) -> List[ConnectedDiagram]:
    """Every connected Dynkin type of rank <= ``max_rank``, without repeats.

    ``B_n``, ``C_n`` start at rank 2 and ``D_n`` at rank 4, so each
    isomorphism class appears once.
    """
    out = []
    for n in range(1, max_rank + 1):
        out.append(ConnectedDiagram("A", n))
    for f in "BC":
        out.extend(ConnectedDiagram(f, n) for n in range(2, max_rank + 1))
    out.extend(ConnectedDiagram("D", n) for n in range(4, max_rank + 1))
    out.extend(ConnectedDiagram("E", n) for n in (6, 7, 8) if n <= max_rank)
    if max_rank >= 4:
        out.append(ConnectedDiagram("F", 4))
    if max_rank >= 2:
        out.append(ConnectedDiagram("G", 2))
    return sorted(out)
