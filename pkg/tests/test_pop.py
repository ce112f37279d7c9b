from itertools import combinations
from itertools import permutations

import pytest

from zigzag_jump.patterns.formula import And
from zigzag_jump.patterns.formula import CountedPattern
from zigzag_jump.patterns.formula import Or
from zigzag_jump.patterns.formula import evaluate
from zigzag_jump.patterns.mesh import BlowupError
from zigzag_jump.patterns.mesh import MeshPattern
from zigzag_jump.patterns.pop import InvalidPopError
from zigzag_jump.patterns.pop import Pop
from zigzag_jump.patterns.pop import compile_counted_pop
from zigzag_jump.patterns.pop import compile_pop
from zigzag_jump.patterns.pop import compositions
from zigzag_jump.patterns.pop import extension_patterns
from zigzag_jump.perm_core import Permutation

P = Permutation.parse

# 1 ≺ 2 ≻ 3: ピーク
PEAK = Pop(3, frozenset({(1, 2), (3, 2)}))
# 1 ≺ 2 ≻ 3 ≺ 4 ≻ 5
ZIGZAG = Pop(5, frozenset({(1, 2), (3, 2), (3, 4), (5, 4)}))


def _peak_count(pi):
    e = pi.entries
    return sum(1 for i, j, l in combinations(range(pi.n), 3) if e[i] < e[j] > e[l])


def test_linear_extensions_in_lex_order():
    assert list(PEAK.linear_extensions()) == [(1, 3, 2), (3, 1, 2)]
    assert extension_patterns(PEAK) == [P("132"), P("231")]
    assert PEAK.maximal_elements() == frozenset({2})
    assert str(PEAK) == "pop(3; 1<2, 3<2)"


def test_zigzag_pop_has_sixteen_extensions():
    assert len(list(ZIGZAG.linear_extensions())) == 16


def test_compile_pop_is_conjunction_of_classical_patterns():
    assert compile_pop(PEAK) == And((
        CountedPattern(MeshPattern(P("132")), 0),
        CountedPattern(MeshPattern(P("231")), 0),
    ))


def test_pop_avoidance_means_no_peak_shaped_triple():
    formula = compile_pop(PEAK)
    for entries in permutations(range(1, 6)):
        pi = Permutation(entries)
        assert evaluate(formula, pi) == (_peak_count(pi) == 0)


@pytest.mark.parametrize("relations", [{(1, 2), (2, 1)}, {(1, 1)}, {(1, 4)}])
def test_invalid_pops_are_rejected(relations):
    with pytest.raises(InvalidPopError):
        Pop(3, frozenset(relations))


def test_compositions():
    splits = list(compositions(2, 3))
    assert len(splits) == 6
    assert set(splits) == {(2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1)}
    assert list(compositions(4, 1)) == [(4,)]


def test_counted_pop_expands_into_or_of_splits():
    formula = compile_counted_pop(PEAK, 1, blowup_cap=100)
    assert isinstance(formula, Or)
    assert [[leaf.cap for leaf in term.children] for term in formula.children] == [[1, 0], [0, 1]]
    assert compile_counted_pop(PEAK, 0, blowup_cap=100) == compile_pop(PEAK)


@pytest.mark.parametrize("cap", [1, 2])
def test_counted_pop_bounds_occurrences(cap):
    formula = compile_counted_pop(PEAK, cap, blowup_cap=100)
    for entries in permutations(range(1, 6)):
        pi = Permutation(entries)
        assert evaluate(formula, pi) == (_peak_count(pi) <= cap)


def test_counted_pop_blowup():
    with pytest.raises(BlowupError) as excinfo:
        compile_counted_pop(ZIGZAG, 3, blowup_cap=10)
    assert excinfo.value.terms == 816
    assert excinfo.value.cap == 10
