"""
パターン式: カウント付きメッシュパターンとグリッド原子を AND/OR で組み合わせた式と、その評価。
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterator
from typing import Tuple
from typing import Union

from ..perm_core import Permutation
from .grid import InvalidGridError
from .grid import geo_contains
from .grid import grid_contains
from .mesh import MeshPattern
from .mesh import PatternError
from .mesh import count_matches

# ロギング設定
formula_logger = logging.getLogger(__name__)
formula_logger.addHandler(logging.NullHandler())


@dataclass(frozen=True)
class CountedPattern:
    """高々 cap 回までの出現を許すメッシュパターン (cap = 0 は通常の回避)。"""
    pattern: MeshPattern
    cap: int = 0

    def __post_init__(self):
        if self.cap < 0:
            raise PatternError(f"出現回数の上限は非負でなければなりません: {self.cap}")


class GridKind(str, Enum):
    GRID = "grid"
    GEO = "geo"


@dataclass(frozen=True)
class GridAtom:
    """
    単調グリッドクラス (GRID) または幾何グリッドクラス (GEO) への所属を表す原子。
    columns[x][y] は左から x 列目・下から y 行目の成分 (0, +1, -1)。
    """
    columns: Tuple[Tuple[int, ...], ...]
    kind: GridKind = GridKind.GRID

    def __post_init__(self):
        columns = tuple(tuple(int(v) for v in column) for column in self.columns)
        if not columns or not columns[0]:
            raise InvalidGridError("グリッド行列が空です。")
        height = len(columns[0])
        if any(len(column) != height for column in columns):
            raise InvalidGridError("グリッド行列が矩形ではありません。")
        if any(v not in (-1, 0, 1) for column in columns for v in column):
            raise InvalidGridError(f"グリッド成分は 0, +1, -1 のみです: {columns}")
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "kind", GridKind(self.kind))

    @classmethod
    def from_rows(cls, rows_top_to_bottom, kind: GridKind = GridKind.GRID) -> "GridAtom":
        """上の行から順に並べた行リストから生成します。"""
        rows = [tuple(row) for row in rows_top_to_bottom]
        if not rows or not rows[0]:
            raise InvalidGridError("グリッド行列が空です。")
        if any(len(row) != len(rows[0]) for row in rows):
            raise InvalidGridError("グリッド行列が矩形ではありません。")
        bottom_up = list(reversed(rows))
        columns = tuple(tuple(row[x] for row in bottom_up) for x in range(len(rows[0])))
        return cls(columns, kind)

    @property
    def width(self) -> int:
        return len(self.columns)

    @property
    def height(self) -> int:
        return len(self.columns[0])

    def rows_top_to_bottom(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(
            tuple(column[y] for column in self.columns) for y in reversed(range(self.height))
        )


@dataclass(frozen=True)
class And:
    children: Tuple["PatternFormula", ...] = ()


@dataclass(frozen=True)
class Or:
    children: Tuple["PatternFormula", ...] = ()


PatternFormula = Union[CountedPattern, GridAtom, And, Or]

# 空の AND は全置換を表す
ALL = And(())


def evaluate(formula: PatternFormula, pi: Permutation) -> bool:
    """π が式を満たすか (L_n = {π ∈ S_n : π ⊨ F})。"""
    if isinstance(formula, CountedPattern):
        return count_matches(pi, formula.pattern, cap=formula.cap) <= formula.cap
    if isinstance(formula, GridAtom):
        if formula.kind is GridKind.GEO:
            return geo_contains(pi, formula)
        return grid_contains(pi, formula)
    if isinstance(formula, And):
        return all(evaluate(child, pi) for child in formula.children)
    if isinstance(formula, Or):
        return any(evaluate(child, pi) for child in formula.children)
    raise PatternError(f"未知の式ノードです: {formula!r}")


def leaves(formula: PatternFormula) -> Iterator[Union[CountedPattern, GridAtom]]:
    """式の葉 (カウント付きメッシュパターンとグリッド原子) を左から順に列挙します。"""
    if isinstance(formula, (And, Or)):
        for child in formula.children:
            yield from leaves(child)
    else:
        yield formula


def avoid(pattern: MeshPattern) -> CountedPattern:
    return CountedPattern(pattern, 0)
