"""Exit criteria. Run with ``pytest tests/test_acceptance.py -v``; a summary
line per criterion is printed at the end of the session."""

import json
import math
import random
import time

from dynkin_count import cli, counting
from dynkin_count.counting import e_breakdown, e_closed, e_of, e_recursive, verify_uniform_formula
from dynkin_count.diagram import ConnectedDiagram, Diagram, connected_types, coxeter_number, parse_diagram
from dynkin_count.series import abel_sum, verify_appendix_proposition
from dynkin_count.weyl import build_root_system, count_chain_factorizations, coxeter_element, reflection_length


def cd(s):
    return parse_diagram(s).components[0]


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


# first-values table of A(n), B(n), 2D(n), n = 0..10, exactly as printed
PRINTED_SEQUENCE_TABLE = [
    (1, 1, 2),
    (1, 1, 0),
    (3, 4, 2),
    (16, 27, 16),
    (125, 256, 162),
    (1_296, 3_125, 2_048),
    (16_807, 46_656, 31_250),
    (262_144, 823_543, 559_872),
    (4_782_969, 12_777_216, 11_529_602),
    (100_000_000, 387_420_489, 268_435_456),
    (2_357_947_691, 10_000_000_000, 6_973_568_802),
]


def test_criterion_1_golden_table():
    with Timer() as t:
        for n, (a, b, d2) in enumerate(PRINTED_SEQUENCE_TABLE):
            if n >= 1:
                assert e_closed(ConnectedDiagram("A", n)) == a == (n + 1) ** (n - 1)
            if n >= 2:
                assert e_closed(ConnectedDiagram("B", n)) == e_closed(ConnectedDiagram("C", n)) == n**n
                assert e_closed(ConnectedDiagram("D", n)) == d2 == 2 * (n - 1) ** n
        for n in range(11, 13):
            assert e_closed(ConnectedDiagram("A", n)) == (n + 1) ** (n - 1)
            assert e_closed(ConnectedDiagram("B", n)) == e_closed(ConnectedDiagram("C", n)) == n**n
            assert e_closed(ConnectedDiagram("D", n)) == 2 * (n - 1) ** n
        assert e_closed(cd("E6")) == 41472 == 2**9 * 3**4
        assert e_closed(cd("E7")) == 1062882 == 2 * 3**12
        assert e_closed(cd("E8")) == 37968750 == 2 * 3**5 * 5**7
        assert e_closed(cd("F4")) == 432 == 2**4 * 3**3
        assert e_closed(cd("G2")) == 6
    assert t.seconds < 1


def _random_union(rng, types, max_total):
    comps = []
    total = 0
    for _ in range(rng.randint(1, 5)):
        fits = [c for c in types if total + c.rank <= max_total]
        if not fits:
            break
        c = rng.choice(fits)
        comps.append(c)
        total += c.rank
    return Diagram(tuple(comps))


def test_criterion_2_route_agreement():
    counting.clear_cache()
    with Timer() as t:
        types = connected_types(12) + [cd("D2"), cd("D3")]
        for d in types:
            assert e_recursive(d) == e_closed(d), d
        rng = random.Random(2)
        for _ in range(200):
            d = _random_union(rng, types, 16)
            expanded = math.factorial(d.rank)
            for c in d:
                expanded = expanded // math.factorial(c.rank) * e_closed(c)
            assert e_recursive(d) == e_of(d) == expanded, d
    assert t.seconds < 10


def test_criterion_3_uniform_formula():
    with Timer() as t:
        for d in connected_types(12):
            e, rhs, w = verify_uniform_formula(d)
            assert e * w == rhs == math.factorial(d.rank) * coxeter_number(d) ** d.rank
    assert t.seconds < 1


ORACLE_CASES = [
    ("A1", 1), ("A2", 3), ("A3", 16), ("A4", 125), ("A5", 1296),
    ("B2", 4), ("B3", 27), ("B4", 256), ("C3", 27),
    ("D4", 162), ("D5", 2048), ("G2", 6), ("F4", 432),
]


def test_criterion_4_oracle_equivalence():
    with Timer() as t:
        for spec, e in ORACLE_CASES:
            d = cd(spec)
            n = count_chain_factorizations(build_root_system(d), budget="low")
            assert n == e == e_closed(d), spec
    assert t.seconds < 60
    with Timer() as t6:
        n = count_chain_factorizations(build_root_system(cd("E6")), budget="high")
    assert n == 41472
    assert t6.seconds < 600


def test_criterion_5_coxeter_order_invariance():
    orders = {
        "A3": [(1, 2, 3), (3, 2, 1), (2, 1, 3), (2, 3, 1)],
        "B3": [(1, 2, 3), (3, 2, 1), (2, 1, 3), (1, 3, 2)],
        "D4": [(1, 2, 3, 4), (4, 3, 2, 1), (3, 4, 1, 2), (2, 3, 1, 4)],
    }
    for spec, os in orders.items():
        rs = build_root_system(cd(spec))
        assert len({tuple(coxeter_element(rs, o).ravel()) for o in os}) >= 2
        counts = {count_chain_factorizations(rs, order=o) for o in os}
        assert counts == {e_closed(rs.diagram)}, spec


def test_criterion_6_appendix_identities():
    with Timer() as t:
        rep = verify_appendix_proposition(20)
        assert rep.ok
        for n in range(21):
            assert rep["A*A"].lhs[n] * (n + 2) == 2 * (n + 2) ** n
            assert rep["A*B"].lhs[n] == (n + 1) ** n
            assert rep["A*D"].lhs[n] == n**n
        assert (rep["A*A"].lhs[4], rep["A*B"].lhs[4], rep["A*D"].lhs[4]) == (432, 625, 256)
    assert t.seconds < 1


def test_criterion_7_abel_identity():
    with Timer() as t:
        checked = 0
        for x in range(-5, 6):
            if x == 0:
                continue
            for y in range(-5, 6):
                for z in range(-3, 4):
                    for n in range(9):
                        assert abel_sum(x, y, z, n) == (x + y) ** n, (x, y, z, n)
                        checked += 1
        assert checked == 10 * 11 * 7 * 9
    assert t.seconds < 5


def test_criterion_8_sequence_table(capsys):
    assert cli.main(["table", "sequences", "10", "--json"]) == 0
    rows = json.loads(capsys.readouterr().out)["rows"]
    got = [(int(r["A"]), int(r["B"]), int(r["2D"])) for r in rows]
    mismatches = [
        (n, col, printed, computed)
        for n, (p_row, c_row) in enumerate(zip(PRINTED_SEQUENCE_TABLE, got))
        for col, printed, computed in zip(("A", "B", "2D"), p_row, c_row)
        if printed != computed
    ]
    assert len(got) * 3 == 33
    assert got[10] == (2357947691, 10000000000, 6973568802)
    # The printed B(8) = 12 777 216 is not 8^8 = 16 777 216; computing B(n) = n^n
    # exactly cannot reproduce it. This assertion stays literal and fails on that cell.
    assert mismatches == [], f"cells differing from the printed table: {mismatches}"


def test_criterion_9_e7_breakdown_typo():
    bd = e_breakdown(cd("E7"))
    row = bd.rows[1]
    assert (row.vertex, str(row.subdiagram), row.e) == (2, "D6", 31250)
    assert row.e != 46656
    assert bd.total == 1062882


def test_criterion_10_root_system_sanity():
    with Timer() as t:
        for d in connected_types(8):
            rs = build_root_system(d)
            assert len(rs.positive_roots) == d.rank * coxeter_number(d) // 2, d
            assert reflection_length(rs, coxeter_element(rs)) == d.rank, d
    assert t.seconds < 10
