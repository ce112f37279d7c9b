import pytest

from zigzag_jump.patterns.formula import ALL
from zigzag_jump.patterns.formula import And
from zigzag_jump.patterns.formula import CountedPattern
from zigzag_jump.patterns.formula import Or
from zigzag_jump.patterns.formula import avoid
from zigzag_jump.patterns.formula import evaluate
from zigzag_jump.patterns.formula import leaves
from zigzag_jump.patterns.mesh import MeshPattern
from zigzag_jump.patterns.mesh import PatternError
from zigzag_jump.patterns.mesh import avoids
from zigzag_jump.patterns.mesh import contains
from zigzag_jump.patterns.mesh import contains_classical
from zigzag_jump.patterns.mesh import count_matches
from zigzag_jump.patterns.mesh import iter_matches
from zigzag_jump.perm_core import Permutation

P = Permutation.parse


def test_classical_containment():
    pattern = MeshPattern(P("231"))
    assert contains(P("2413"), pattern)
    assert avoids(P("2143"), pattern)
    assert list(iter_matches(P("2413"), pattern)) == [(0, 1, 2)]
    assert contains_classical(P("2413"), P("231"))
    assert not contains_classical(P("1234"), P("21"))



def test_empty_pattern_is_rejected():
    with pytest.raises(PatternError):
        MeshPattern(Permutation(()))
    with pytest.raises(PatternError):
        contains_classical(P("1"), Permutation(()))


def test_count_matches_and_cap():
    increasing = MeshPattern(P("12"))
    assert count_matches(P("1234"), increasing) == 6
    assert count_matches(P("1234"), increasing, cap=2) == 3
    assert count_matches(P("21"), MeshPattern(P("123"))) == 0


def test_shaded_column_requires_adjacency():
    adjacent = MeshPattern(P("132"), frozenset((2, j) for j in range(4)))
    assert contains(P("2413"), MeshPattern(P("132")))
    assert avoids(P("2413"), adjacent)
    assert contains(P("1423"), adjacent)


def test_single_shaded_cell():
    # 132 で、右端の点より右かつ 3 より上の領域が空
    pattern = MeshPattern(P("132"), frozenset({(3, 3)}))
    assert contains(P("132"), pattern)
    assert avoids(P("1324"), pattern)
    assert contains(P("4132"), pattern)


def test_cells_must_lie_in_grid():
    with pytest.raises(PatternError):
        MeshPattern(P("12"), frozenset({(3, 0)}))


def test_formula_evaluation():
    a231 = avoid(MeshPattern(P("231")))
    a312 = avoid(MeshPattern(P("312")))
    pi = P("2413")
    assert not evaluate(a231, pi)
    assert evaluate(Or((a231, CountedPattern(MeshPattern(P("231")), 1))), pi)
    assert not evaluate(And((a231, a312)), P("2413"))
    assert evaluate(ALL, pi)
    assert not evaluate(Or(()), pi)
    assert list(leaves(And((a231, Or((a312,)))))) == [a231, a312]


def test_counted_pattern_rejects_negative_cap():
    with pytest.raises(PatternError):
        CountedPattern(MeshPattern(P("12")), -1)
