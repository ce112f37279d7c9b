import pytest

from zigzag_jump.core import CountLine
from zigzag_jump.core import NotTameError
from zigzag_jump.decode import DecodeError
from zigzag_jump.engine import GenStatus
from zigzag_jump.perm_core import Permutation
from zigzag_jump.tame import Verdict
from zigzag_jump.verify import VerificationLimitError


def test_compile_keeps_source_and_expression(core):
    compiled = core.compile_pattern("and(cl(2,4,1,3), cl(3,1,4,2))")
    assert compiled.source == "and(cl(2,4,1,3), cl(3,1,4,2))"
    assert core.transform("inv", compiled) == "and(cl(3,1,4,2),cl(2,4,1,3))"


def test_tame_report_lists_family_shortcuts(core):
    report = core.tame_report(core.compile_pattern("and(cl(2,3,1), vinc(1,3,2;2))"))
    assert report.verdict is Verdict.TAME
    assert len(report.children) == 4


def test_ordered_run_refuses_wild_pattern(core):
    compiled = core.compile_pattern("cl(3,2,1)")
    with pytest.raises(NotTameError) as excinfo:
        core.run_ordered(compiled, 3)
    assert excinfo.value.report.verdict is Verdict.NOT_TAME
    assert len(core.run_ordered(compiled, 3, force=True).records) == 5


def test_ordered_run_with_decoder(core):
    outcome = core.run_ordered(core.compile_pattern("cl(2,3,1)"), 3, decode="dyck")
    assert outcome.status is None
    assert [record.obj for record in outcome.records][0] == "UUUDDD"
    assert outcome.records[0].jump is None
    assert str(outcome.records[1].jump) == "3L1"


def test_greedy_run_reports_status(core):
    outcome = core.run_greedy(core.compile_pattern("cl(3,2,1)"), 3)
    assert outcome.status is GenStatus.STALLED_NO_JUMP
    assert [record.perm.compact() for record in outcome.records] == ["123", "132", "312"]
    seeded = core.run_greedy(core.compile_pattern("cl(2,3,1)"), 3, seed=Permutation.parse("321"))
    assert seeded.status is GenStatus.COMPLETE


def test_decoder_whitelist(core):
    compiled = core.compile_pattern("cl(2,3,1)")
    with pytest.raises(ValueError, match="Invalid decoder"):
        core.run_ordered(compiled, 3, decode="json")


def test_decode_domain_is_checked(core):
    with pytest.raises(DecodeError):
        core.check_decode_domain(core.compile_pattern("all").formula, 3, "setpart")
    core.check_decode_domain(core.compile_pattern("vinc(1,3,2;2)").formula, 4, "setpart")


def test_count_methods(core):
    compiled = core.compile_pattern("vinc(1,3,2;2)")
    assert core.count(compiled, [4], "both") == [CountLine(4, 15, 15)]
    assert core.count(compiled, [4], "gen") == [CountLine(4, None, 15)]
    with pytest.raises(ValueError, match="Invalid method"):
        core.count(compiled, [4], "guess")


def test_count_with_threads():
    from zigzag_jump.core import JumpCore

    threaded = JumpCore(blowup_cap=100, verify_max_n=7, timeout_seconds=60.0, decode_check_max_n=8, threads=2)
    lines = threaded.count(threaded.compile_pattern("cl(2,3,1)"), [1, 2, 3, 4, 5], "both")
    assert [line.brute for line in lines] == [1, 2, 5, 14, 42]
    assert all(line.agrees for line in lines)


def test_checks(core):
    wild = core.compile_pattern("cl(3,2,1)")
    zigzag = core.run_check("zigzag", wild, 3)
    assert not zigzag.holds
    assert zigzag.text == "zigzag: false (witness 21: 321 = c_1(21) missing)"
    assert core.run_check("hereditary", core.compile_pattern("cl(2,3,1)"), 5).text == "hereditary: true"
    cyclic = core.run_check("cyclic", core.compile_pattern("all"), 4)
    assert cyclic.holds
    assert cyclic.data["sizes"] == {2: 2, 3: 6}
    with pytest.raises(ValueError, match="Invalid check"):
        core.run_check("sorted", wild, 3)


def test_suite_respects_limit(core):
    with pytest.raises(VerificationLimitError):
        core.run_suite(8)
    report = core.run_suite(3)
    assert report.ok
    assert {row.fixture for row in report.rows} >= {"catalan", "bell", "schroeder"}
