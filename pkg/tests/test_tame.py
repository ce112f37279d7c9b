import random
from itertools import permutations

import pytest

from zigzag_jump.patterns import families
from zigzag_jump.patterns.formula import And
from zigzag_jump.patterns.formula import CountedPattern
from zigzag_jump.patterns.formula import Or
from zigzag_jump.patterns.mesh import MeshPattern
from zigzag_jump.patterns.pop import Pop
from zigzag_jump.perm_core import Permutation
from zigzag_jump.tame import Verdict
from zigzag_jump.tame import check_formula
from zigzag_jump.tame import check_mesh
from zigzag_jump.tame import is_tame
from zigzag_jump.tame import lemma_shortcuts

P = Permutation.parse
TAU = P("3241")

SIGMAS = {
    "s1": {(1, 4)},
    "s2": {(0, 0), (0, 1), (0, 3), (1, 3), (3, 3), (2, 2), (2, 0), (3, 0), (4, 0)},
    "s3": {(1, 3), (2, 4)},
    "s4": {(2, 3), (2, 4), (2, 2), (3, 2), (2, 1), (3, 0)},
    "s5": {(2, 3), (2, 4), (2, 1), (2, 0), (3, 0)},
    "s6": {(2, 4), (3, 4), (2, 1), (2, 0), (3, 0)},
    "s7": {(2, 4), (3, 4), (2, 1), (3, 1), (4, 1), (0, 0), (1, 0), (2, 0), (3, 0)},
}


def _report(name):
    return check_mesh(MeshPattern(TAU, frozenset(SIGMAS[name])))


@pytest.mark.parametrize(
    "name, verdict, failing, witness",
    [
        ("s1", Verdict.NOT_TAME, "(ii) top row shaded only next to maximum", (1, 4)),
        ("s2", Verdict.TAME, None, None),
        ("s3", Verdict.NOT_TAME, "(iii) left of maximum", (1, 3)),
        ("s4", Verdict.NOT_TAME, "(iii) left of maximum", ((3, 0), (2, 0))),
        ("s5", Verdict.TAME, None, None),
        ("s6", Verdict.NOT_TAME, "(iv) right of maximum", ((2, 1), (3, 1))),
        ("s7", Verdict.TAME, None, None),
    ],
)
def test_mesh_conditions_per_pattern(name, verdict, failing, witness):
    report = _report(name)
    assert report.verdict is verdict
    failed = [c for c in report.conditions if not c.passed]
    if failing is None:
        assert failed == []
    else:
        assert [c.name for c in failed] == [failing]
        assert failed[0].witness == witness


def test_sufficient_condition_failure_is_marked_incomplete():
    assert not _report("s1").incomplete
    assert _report("s3").incomplete
    assert _report("s6").incomplete


def test_maximum_at_boundary_is_not_tame():
    report = check_mesh(MeshPattern(P("321")))
    assert report.verdict is Verdict.NOT_TAME
    assert report.conditions[0].name == "(i) maximum not at boundary"
    assert report.conditions[0].witness == 1


def test_short_patterns_are_undecided():
    assert check_mesh(MeshPattern(P("21"))).verdict is Verdict.UNKNOWN


def test_formula_verdict_aggregates_leaves():
    tame = CountedPattern(MeshPattern(P("231")), 0)
    wild = CountedPattern(MeshPattern(P("321")), 0)
    short = CountedPattern(MeshPattern(P("12")), 0)
    assert check_formula(And((tame, tame))).verdict is Verdict.TAME
    assert check_formula(Or((tame, wild))).verdict is Verdict.NOT_TAME
    assert check_formula(And((tame, short))).verdict is Verdict.UNKNOWN
    assert is_tame(And(()))
    assert len(check_formula(And((tame, wild))).children) == 2


def test_counted_leaf_keeps_verdict():
    report = check_formula(CountedPattern(MeshPattern(P("231")), 2))
    assert report.children[0].subject.startswith("count(")
    assert report.is_tame


def test_report_rendering():
    report = _report("s3")
    text = report.to_text()
    assert "NotTame" in text
    assert "[FAIL] (iii) left of maximum at [1, 3]" in text
    assert report.to_dict()["conditions"][2]["witness"] == [1, 3]


# --- 族ごとの簡易判定とメッシュ判定の一致 ---

def _perms(k):
    return [Permutation(p) for p in permutations(range(1, k + 1))]


def _bruhat_pairs(tau):
    """τ(a) < τ(b) で、間の値がすべて帯 (τ(a), τ(b)) の外にある組。"""
    pairs = []
    for a in range(1, tau.n + 1):
        for b in range(a + 1, tau.n + 1):
            low, high = tau.value_at(a), tau.value_at(b)
            if low < high and not any(low < tau.value_at(i) < high for i in range(a + 1, b)):
                pairs.append((a, b))
    return pairs


def _families():
    for k in (3, 4):
        for tau in _perms(k):
            yield families.Classical(tau)
            yield families.Boxed(tau)
            for a in range(1, k):
                yield families.Vincular(tau, a)
                for b in range(1, k):
                    yield families.Bivincular(tau, a, frozenset({b}))
            for pair in _bruhat_pairs(tau):
                yield families.Bruhat(tau, frozenset({pair}))
    for tau_prime in _perms(4) + _perms(5):
        for bar in range(1, tau_prime.n + 1):
            yield families.Barred(tau_prime, frozenset({bar}))


def test_shortcuts_agree_with_mesh_conditions():
    for family in _families():
        shortcut = lemma_shortcuts(family).verdict
        full = check_formula(family.compile(blowup_cap=100)).verdict
        assert shortcut is full, family


def _random_perm(rng, k):
    return Permutation(tuple(rng.sample(range(1, k + 1), k)))


def _random_subset(rng, items, limit):
    return frozenset(rng.sample(items, rng.randint(0, min(limit, len(items)))))


def _random_pop(rng, k):
    order = rng.sample(range(1, k + 1), k)
    relations = {
        (order[i], order[j])
        for i in range(k)
        for j in range(i + 1, k)
        if rng.random() < 0.3
    }
    return Pop(k, frozenset(relations))


def _random_bruhat(rng, k):
    tau = _random_perm(rng, k)
    return families.Bruhat(tau, _random_subset(rng, _bruhat_pairs(tau), 3))


_SAMPLERS = {
    "classical": lambda rng, k: families.Classical(_random_perm(rng, k)),
    "boxed": lambda rng, k: families.Boxed(_random_perm(rng, k)),
    "vincular": lambda rng, k: families.Vincular(_random_perm(rng, k), rng.randint(1, k - 1)),
    "bivincular": lambda rng, k: families.Bivincular(
        _random_perm(rng, k), rng.randint(1, k - 1), _random_subset(rng, list(range(1, k)), k - 1)
    ),
    "bruhat": _random_bruhat,
    "barred": lambda rng, k: families.Barred(_random_perm(rng, k), frozenset({rng.randint(1, k)})),
    "pop": lambda rng, k: families.PartialOrder(_random_pop(rng, k)),
}


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(_SAMPLERS))
def test_shortcuts_agree_on_random_patterns_up_to_length_six(name):
    rng = random.Random(f"shortcut-{name}")
    sampler = _SAMPLERS[name]
    lengths = range(4, 7) if name == "barred" else range(3, 7)
    for _ in range(1000):
        family = sampler(rng, rng.choice(lengths))
        shortcut = lemma_shortcuts(family).verdict
        full = check_formula(family.compile(blowup_cap=10**6)).verdict
        assert shortcut is full, family


def test_pop_shortcut():
    peak = families.PartialOrder(Pop(3, frozenset({(1, 2), (3, 2)})))
    assert lemma_shortcuts(peak).verdict is Verdict.TAME
    assert check_formula(peak.compile(100)).verdict is Verdict.TAME
    low_maximal = families.PartialOrder(Pop(3, frozenset({(2, 1)})))
    assert lemma_shortcuts(low_maximal).verdict is Verdict.NOT_TAME


def test_dotted_shortcut_is_only_sufficient():
    assert lemma_shortcuts(families.Dotted(P("132"), frozenset({2, 3}))).verdict is Verdict.TAME
    assert lemma_shortcuts(families.Dotted(P("132"), frozenset({2}))).verdict is Verdict.UNKNOWN
    assert lemma_shortcuts(families.Dotted(P("312"), frozenset({1}))).verdict is Verdict.NOT_TAME


def test_multi_bar_shortcut_needs_length_five():
    short = families.Barred(P("1324"), frozenset({1, 4}))
    assert lemma_shortcuts(short).verdict is Verdict.UNKNOWN


def test_grid_and_counted_shortcuts():
    from zigzag_jump.patterns.formula import GridAtom

    assert lemma_shortcuts(families.Grid(GridAtom.from_rows([(-1, 1), (1, -1)]))).is_tame
    counted = families.Counted(families.Classical(P("231")), 2)
    assert lemma_shortcuts(counted).is_tame
    assert lemma_shortcuts(counted).subject.startswith("count(")
