import logging
from dataclasses import dataclass
from itertools import combinations
from typing import FrozenSet
from typing import Iterable
from typing import Iterator
from typing import Optional
from typing import Tuple

from ..perm_core import Permutation

# ロギング設定
mesh_logger = logging.getLogger(__name__)
mesh_logger.addHandler(logging.NullHandler())

Cell = Tuple[int, int]


# --- Custom Exceptions ---
class PatternError(Exception):
    """パターン定義・コンパイル関連のエラーベースクラス。"""
    pass


class CompilationError(PatternError):
    """パターン族からメッシュパターン式へのコンパイルに失敗した時のエラー。"""
    pass


class BlowupError(CompilationError):
    """カウント付き POP の展開が上限を超えた時のエラー。"""
    def __init__(self, message: str, terms: int, cap: int):
        super().__init__(message)
        self.terms = terms
        self.cap = cap


@dataclass(frozen=True)
class MeshPattern:
    """
    メッシュパターン (τ, C)。C は 0..k の格子セル (列, 行) の集合で、
    マッチした点の間の対応する領域に π の点が入ってはならないことを表します。
    """
    tau: Permutation
    cells: FrozenSet[Cell] = frozenset()

    def __post_init__(self):
        k = self.tau.n
        if k == 0:
            raise PatternError("パターンの長さは 1 以上でなければなりません。")
        cells = frozenset((int(i), int(j)) for i, j in self.cells)
        for i, j in cells:
            if not (0 <= i <= k and 0 <= j <= k):
                raise PatternError(f"セル ({i},{j}) は 0..{k} の範囲外です (τ={self.tau})。")
        object.__setattr__(self, "cells", cells)

    @property
    def k(self) -> int:
        return self.tau.n

    def sorted_cells(self) -> Tuple[Cell, ...]:
        return tuple(sorted(self.cells))


def _value_order(tau: Permutation) -> Tuple[int, ...]:
    # τ の値 1..k がそれぞれ何番目の位置にあるか (0 始まり)
    return tuple(tau.position_of(v) - 1 for v in range(1, tau.n + 1))


def iter_matches(pi: Permutation, pattern: MeshPattern) -> Iterator[Tuple[int, ...]]:
    """
    π における pattern の出現 (0 始まりの位置の組) を列挙します。
    """
    n, k = pi.n, pattern.k
    if k > n:
        return
    entries = pi.entries
    order = _value_order(pattern.tau)
    cells = pattern.sorted_cells()
    for combo in combinations(range(n), k):
        values = [entries[p] for p in combo]
        if any(values[order[r]] > values[order[r + 1]] for r in range(k - 1)):
            continue
        if cells and not _cells_empty(entries, combo, values, order, cells):
            continue
        yield combo


def _cells_empty(entries, combo, values, order, cells: Iterable[Cell]) -> bool:
    n = len(entries)
    # 列境界 (位置) と行境界 (値) に番兵を置く
    col_bounds = (-1,) + tuple(combo) + (n,)
    row_bounds = (0,) + tuple(values[idx] for idx in order) + (n + 1,)
    for i, j in cells:
        low_v, high_v = row_bounds[j], row_bounds[j + 1]
        for q in range(col_bounds[i] + 1, col_bounds[i + 1]):
            if low_v < entries[q] < high_v:
                return False
    return True


def count_matches(pi: Permutation, pattern: MeshPattern, cap: Optional[int] = None) -> int:
    """
    出現数を数えます。cap を与えた場合は cap + 1 に達した時点で打ち切ります。
    """
    count = 0
    for _ in iter_matches(pi, pattern):
        count += 1
        if cap is not None and count > cap:
            break
    return count


def contains(pi: Permutation, pattern: MeshPattern) -> bool:
    return count_matches(pi, pattern, cap=0) > 0


def contains_classical(pi: Permutation, tau: Permutation) -> bool:
    """網掛けのないパターン τ を部分列として含むか。"""
    return contains(pi, MeshPattern(tau))


def avoids(pi: Permutation, pattern: MeshPattern) -> bool:
    return not contains(pi, pattern)
