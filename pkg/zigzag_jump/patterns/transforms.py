import logging
from enum import Enum
from typing import Callable
from typing import Dict

from ..perm_core import Permutation
from ..perm_core import complement
from ..perm_core import inverse
from ..perm_core import reverse
from .formula import And
from .formula import CountedPattern
from .formula import GridAtom
from .formula import Or
from .formula import PatternFormula
from .mesh import MeshPattern
from .mesh import PatternError

# ロギング設定
transform_logger = logging.getLogger(__name__)
transform_logger.addHandler(logging.NullHandler())


class Transform(str, Enum):
    """置換と式に作用する対称変換。ROT は INV∘REV (= CPL∘INV)。"""
    REV = "rev"
    CPL = "cpl"
    INV = "inv"
    ROT = "rot"


_PERMUTATION_MAPS: Dict[Transform, Callable[[Permutation], Permutation]] = {
    Transform.REV: reverse,
    Transform.CPL: complement,
    Transform.INV: inverse,
    Transform.ROT: lambda pi: inverse(reverse(pi)),
}


def transform_permutation(op: Transform, pi: Permutation) -> Permutation:
    return _PERMUTATION_MAPS[Transform(op)](pi)


def transform_mesh(op: Transform, pattern: MeshPattern) -> MeshPattern:
    op = Transform(op)
    k = pattern.k
    tau = transform_permutation(op, pattern.tau)
    if op is Transform.REV:
        cells = {(k - i, j) for i, j in pattern.cells}
    elif op is Transform.CPL:
        cells = {(i, k - j) for i, j in pattern.cells}
    elif op is Transform.INV:
        cells = {(j, i) for i, j in pattern.cells}
    else:
        cells = {(j, k - i) for i, j in pattern.cells}
    return MeshPattern(tau, frozenset(cells))


def transform_grid(op: Transform, atom: GridAtom) -> GridAtom:
    """
    REV は列を左右反転して符号を反転、CPL は行を上下反転して符号を反転、INV は転置。
    """
    op = Transform(op)
    columns = atom.columns
    if op is Transform.ROT:
        return transform_grid(Transform.INV, transform_grid(Transform.REV, atom))
    if op is Transform.REV:
        new_columns = tuple(tuple(-v for v in column) for column in reversed(columns))
    elif op is Transform.CPL:
        new_columns = tuple(tuple(-v for v in reversed(column)) for column in columns)
    else:
        new_columns = tuple(
            tuple(columns[x][y] for x in range(len(columns))) for y in range(len(columns[0]))
        )
    return GridAtom(new_columns, atom.kind)


def transform_formula(op: Transform, formula: PatternFormula) -> PatternFormula:
    """式の各葉に変換を適用します (カウント上限は保存)。"""
    if isinstance(formula, CountedPattern):
        return CountedPattern(transform_mesh(op, formula.pattern), formula.cap)
    if isinstance(formula, GridAtom):
        return transform_grid(op, formula)
    if isinstance(formula, And):
        return And(tuple(transform_formula(op, child) for child in formula.children))
    if isinstance(formula, Or):
        return Or(tuple(transform_formula(op, child) for child in formula.children))
    raise PatternError(f"未知の式ノードです: {formula!r}")
