import json
import random

import pytest

from conftest import perms
from zigzag_jump.cli.dsl import compile_expr
from zigzag_jump.cli.dsl import parse
from zigzag_jump.engine import FormulaOracle
from zigzag_jump.engine import generate_greedy
from zigzag_jump.engine import generate_ordered
from zigzag_jump.patterns.formula import ALL
from zigzag_jump.patterns.formula import And
from zigzag_jump.patterns.formula import CountedPattern
from zigzag_jump.patterns.formula import Or
from zigzag_jump.patterns.mesh import MeshPattern
from zigzag_jump.perm_core import Permutation
from zigzag_jump.tame import check_formula
from zigzag_jump.tame import check_mesh
from zigzag_jump.verify import CountFixture
from zigzag_jump.verify import CountReport
from zigzag_jump.verify import CountRow
from zigzag_jump.verify import FixtureDefinition
from zigzag_jump.verify import VerificationError
from zigzag_jump.verify import VerificationLimitError
from zigzag_jump.verify import brute_enumerate
from zigzag_jump.verify import count_suite
from zigzag_jump.verify import derive_fixture
from zigzag_jump.verify import induced_levels
from zigzag_jump.verify import is_hereditary
from zigzag_jump.verify import is_zigzag
from zigzag_jump.verify import is_zigzag_by_nuts
from zigzag_jump.verify import load_fixture_definitions
from zigzag_jump.verify import validate_gray

P = Permutation.parse


def _formula(src):
    return compile_expr(parse(src), blowup_cap=1000)


def _generated_count(formula, n):
    return sum(1 for _ in generate_ordered(FormulaOracle(formula, n), n))


# --- 全探索 ---

def test_brute_enumerate_is_thread_independent():
    formula = _formula("cl(2,3,1)")
    assert len(brute_enumerate(formula, 5)) == 42
    assert brute_enumerate(formula, 5, threads=4) == brute_enumerate(formula, 5)
    assert brute_enumerate(ALL, 0) == {Permutation(())}


def test_induced_levels():
    levels = induced_levels(set(perms("1243", "1423", "4123", "4213", "2134")), 4)
    assert levels[3] == set(perms("123", "213"))
    assert levels[0] == {Permutation(())}


def test_zigzag_witness_for_321():
    report = is_zigzag(_formula("cl(3,2,1)"), 3)
    assert not report.ok
    assert report.witness == P("21")
    assert report.detail == "321 = c_1(21) missing"
    assert is_zigzag(_formula("cl(2,3,1)"), 5).ok


def test_hereditary_witness_for_barred_pattern():
    report = is_hereditary(_formula("bar(1,3,2,{4})"), 4)
    assert not report.ok
    assert report.witness == P("132")
    assert is_hereditary(_formula("cl(2,3,1)"), 6).ok
    assert is_hereditary(ALL, 4).ok


def test_verification_limit():
    with pytest.raises(VerificationLimitError):
        is_zigzag(ALL, 8, max_n=7)
    with pytest.raises(VerificationLimitError):
        is_hereditary(ALL, 8, max_n=7)


def test_zigzag_by_nuts_agrees():
    for src in ("cl(2,3,1)", "vinc(1,3,2;2)", "cl(3,2,1)", "cl(1,3,2,4)"):
        formula = _formula(src)
        language = brute_enumerate(formula, 4)
        assert is_zigzag_by_nuts(language, 4).ok == is_zigzag(formula, 4).ok, src


def test_zigzag_by_nuts_reports_witness():
    report = is_zigzag_by_nuts(brute_enumerate(_formula("cl(3,2,1)"), 3), 3)
    assert not report.ok
    assert report.witness is not None


# --- 生成列の検証 ---

def test_validate_gray_accepts_ordered_stream():
    oracle = FormulaOracle(_formula("vinc(1,3,2;2)"), 5)
    assert validate_gray(list(generate_ordered(oracle, 5)), oracle.contains, 5).ok


def test_validate_gray_rejections():
    member = FormulaOracle(ALL, 3).contains
    report = validate_gray(perms("132", "123"), member, 3)
    assert (report.ok, report.offending_index) == (False, 0)
    report = validate_gray(perms("123", "132", "123"), member, 3)
    assert (report.ok, report.offending_index) == (False, 2)
    report = validate_gray(perms("123", "312"), member, 3)
    assert (report.ok, report.offending_index) == (False, 1)
    assert "not minimal" in report.reason
    report = validate_gray(perms("123", "321"), member, 3)
    assert (report.ok, report.offending_index) == (False, 1)
    assert "not a jump" in report.reason
    report = validate_gray(perms("123", "132"), member, 3)
    assert (report.ok, report.offending_index) == (False, 2)


# --- カウント表 ---

def test_fixture_definitions_are_packaged():
    definitions = load_fixture_definitions()
    ids = [d.id for d in definitions]
    assert len(ids) == len(set(ids))
    assert {"catalan", "bell", "twisted-baxter", "schroeder", "peak-free", "x-shaped"} <= set(ids)
    for definition in definitions:
        assert check_formula(_formula(definition.pattern)).is_tame, definition.id


@pytest.mark.parametrize(
    "fixture_id, expected",
    [
        ("catalan", [1, 2, 5, 14, 42, 132]),
        ("bell", [1, 2, 5, 15, 52, 203]),
        ("twisted-baxter", [1, 2, 6, 22, 92, 422]),
        ("schroeder", [1, 2, 6, 22, 90, 394]),
        ("peak-free", [1, 2, 4, 8, 16, 32]),
        ("x-shaped", [1, 2, 6, 20, 68, 232]),
        ("two-stack-sortable", [1, 2, 6, 22, 91, 408]),
    ],
)
def test_derived_counts(fixture_id, expected):
    definition = next(d for d in load_fixture_definitions() if d.id == fixture_id)
    formula = _formula(definition.pattern)
    fixture = derive_fixture(definition, formula)
    assert list(fixture.counts) == expected
    assert [_generated_count(formula, n) for n in range(1, 7)] == expected


def test_count_suite_report():
    definition = FixtureDefinition("catalan", "cl(2,3,1)", "A000108", max_n=4)
    formula = _formula(definition.pattern)
    fixture = derive_fixture(definition, formula)
    report = count_suite([fixture], {"catalan": formula}, _generated_count, 5)
    assert report.ok
    assert [row.expected for row in report.rows] == [1, 2, 5, 14, None]
    assert "catalan\t5\t-\t42\t42\tok" in report.to_table()
    assert json.loads(report.to_json())[0] == {
        "fixture": "catalan", "n": 1, "expected": 1, "brute": 1, "generated": 1, "ok": True,
    }


def test_count_report_flags_mismatch():
    report = CountReport([CountRow("x", 3, 6, 6, 5)])
    assert not report.ok
    assert "MISMATCH" in report.to_table()


def test_fixture_requires_four_positive_terms():
    with pytest.raises(VerificationError):
        CountFixture("short", "all", "A000142", (1, 2, 6))
    with pytest.raises(VerificationError):
        CountFixture("zero", "all", "A000142", (1, 2, 0, 24))


# --- tame な式についての一括確認 ---

def _random_tame_leaf(rng):
    while True:
        k = rng.choice((3, 4))
        tau = Permutation(tuple(rng.sample(range(1, k + 1), k)))
        grid = [(i, j) for i in range(k + 1) for j in range(k + 1)]
        cells = frozenset(rng.sample(grid, rng.randint(0, 4)))
        pattern = MeshPattern(tau, cells)
        if check_mesh(pattern).is_tame:
            return CountedPattern(pattern, rng.choice((0, 0, 0, 1)))


def _random_tame_formulas(count, seed=2024):
    rng = random.Random(seed)
    formulas = []
    for _ in range(count):
        leaves = tuple(_random_tame_leaf(rng) for _ in range(rng.randint(1, 3)))
        if len(leaves) == 1:
            formulas.append(leaves[0])
        else:
            formulas.append(rng.choice((And, Or))(leaves))
    return formulas


def _assert_generation_sound(formula, n):
    assert is_hereditary(formula, n).ok
    assert is_zigzag(formula, n).ok
    oracle = FormulaOracle(formula, n)
    ordered = list(generate_ordered(oracle, n))
    assert validate_gray(ordered, oracle.contains, n).ok
    assert generate_greedy(oracle, n).sequence == ordered


@pytest.mark.parametrize("index, formula", list(enumerate(_random_tame_formulas(50))))
def test_tame_formulas_generate_gray_codes(index, formula):
    assert check_formula(formula).is_tame
    _assert_generation_sound(formula, 5)


@pytest.mark.slow
@pytest.mark.parametrize("n", [6, 7])
@pytest.mark.parametrize("index, formula", list(enumerate(_random_tame_formulas(50))))
def test_tame_formulas_at_lengths_six_and_seven(index, formula, n):
    _assert_generation_sound(formula, n)
