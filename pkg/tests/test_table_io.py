import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gyrofuzz import table_io
from gyrofuzz.gyro_core import verify_gyrogroup_axioms, verify_identities
from gyrofuzz.table_io import (GROUP, GYROGROUP, NOT_GYROGROUP, CayleyTable, TableParseError,
                              bundled_tables, load_table, parse_table, prove_gyrogroup,
                              resolve_table_path, serialize_table)

from .oracles import brute_force_verdict

KLEIN = """\
# Klein four-group
gyrotable 4
e a b c
e a b c
a e c b
b c e a
c b a e
"""

BUNDLED = bundled_tables()
GROUP_STEMS = [s for s in BUNDLED if s not in ("broken", "gyro8")]


def test_klein_parses_as_group():
    t = parse_table(KLEIN)
    assert t.order == 4
    assert t.names == ("e", "a", "b", "c")
    assert prove_gyrogroup(t).verdict == GROUP


def test_serialize_round_trip():
    t = parse_table(KLEIN)
    assert parse_table(serialize_table(t)) == t


@pytest.mark.parametrize("text,line,col", [
    ("", 1, 1),
    ("gyrotabel 2\ne a\ne a\na e\n", 1, 1),
    ("gyrotable two\ne a\ne a\na e\n", 1, 11),
    ("gyrotable 2\ne e\ne a\na e\n", 2, 3),
    ("gyrotable 2\ne a\ne a\na x\n", 4, 3),
    ("gyrotable 2\ne a\ne a\na\n", 4, 2),
    ("gyrotable 2\ne a\ne a\n", 4, 1),
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(TableParseError) as info:
        parse_table(text)
    assert (info.value.line, info.value.column) == (line, col)


def test_gyration_table_never_accepted():
    with pytest.raises(TableParseError, match="gyration table"):
        parse_table(KLEIN + "e a b c\n")


def test_bundled_fixtures_present():
    for stem in ("z2", "z3", "z4", "z5", "z6", "z7", "z8", "klein", "s3", "d4", "q8", "broken", "gyro8"):
        assert stem in BUNDLED


@pytest.mark.parametrize("stem", sorted(BUNDLED))
def test_verdicts_match_brute_force(stem):
    t = load_table(BUNDLED[stem])
    assert prove_gyrogroup(t).verdict == brute_force_verdict(t.cells)


@pytest.mark.parametrize("stem", GROUP_STEMS)
def test_bundled_groups(stem):
    t = load_table(BUNDLED[stem])
    assert prove_gyrogroup(t).verdict == GROUP


def test_gyro8_is_a_proper_gyrogroup():
    t = load_table(BUNDLED["gyro8"])
    assert prove_gyrogroup(t).verdict == GYROGROUP
    G = t.gyrogroup("gyro8")
    assert verify_gyrogroup_axioms(G, n=8 ** 4).passed
    assert verify_identities(G, n=8 ** 3).passed


def test_broken_fixture_diagnosis():
    d = prove_gyrogroup(load_table(BUNDLED["broken"]))
    assert d.verdict == NOT_GYROGROUP
    assert d.failing_axiom == "G3"
    assert d.witness == ("e", "g1", "g1")


def test_swapped_z4_cells():
    z4 = CayleyTable.from_function(["e", "g1", "g2", "g3"], lambda a, b: (a + b) % 4)
    cells = [list(r) for r in z4.cells]
    cells[1][1], cells[1][2] = cells[1][2], cells[1][1]
    d = prove_gyrogroup(CayleyTable(z4.names, tuple(map(tuple, cells))))
    assert d.verdict == NOT_GYROGROUP and d.witness is not None


def test_missing_identity():
    t = CayleyTable(("a", "b"), ((1, 1), (1, 1)))
    d = prove_gyrogroup(t)
    assert d.verdict == NOT_GYROGROUP
    assert d.failing_axiom.startswith("G1")


def _mutations(stem, count, seed):
    base = load_table(BUNDLED[stem])
    rng = random.Random(seed)
    n = base.order
    for _ in range(count):
        cells = [list(r) for r in base.cells]
        a, b = rng.randrange(n), rng.randrange(n)
        cells[a][b] = rng.randrange(n)
        yield CayleyTable(base.names, tuple(map(tuple, cells)))


@pytest.mark.parametrize("stem", ["z4", "klein", "s3", "gyro8"])
def test_mutated_tables_agree_with_brute_force(stem):
    for t in _mutations(stem, 40, seed=len(stem)):
        assert prove_gyrogroup(t).verdict == brute_force_verdict(t.cells)


@given(st.integers(min_value=1, max_value=3).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, n - 1), min_size=n, max_size=n), min_size=n, max_size=n)))
@settings(max_examples=200, deadline=None)
def test_random_small_magmas_agree_with_brute_force(cells):
    names = tuple(f"x{i}" for i in range(len(cells)))
    t = CayleyTable(names, tuple(map(tuple, cells)))
    assert prove_gyrogroup(t).verdict == brute_force_verdict(t.cells)


def test_path_resolution_falls_back_to_bundle(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert resolve_table_path("fixtures/z4.gt") == BUNDLED["z4"]
    with pytest.raises(FileNotFoundError):
        resolve_table_path("nope.gt")
