"""
単調グリッドクラス Grid(M) と幾何グリッドクラス Geo(M) の所属判定。

列の区切り (位置) と行の区切り (値) を全通り試し、各セルの点が成分の符号どおり
単調に並ぶかを調べます。Geo(M) ではさらに、各点をセルの対角線上のパラメータ t ∈ (0,1)
に置けるかを差分制約系 (二倍化グラフ上の負閉路検出) で判定します。
"""
import logging
from itertools import combinations_with_replacement
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

from ..perm_core import Permutation
from .mesh import PatternError

# ロギング設定
grid_logger = logging.getLogger(__name__)
grid_logger.addHandler(logging.NullHandler())

INF = float("inf")


class InvalidGridError(PatternError):
    """グリッド行列が空・非矩形・{0,±1} 以外の成分を持つ時のエラー。"""
    pass


def _cuts(n: int, parts: int):
    # 0 = b_0 <= b_1 <= ... <= b_parts = n
    for inner in combinations_with_replacement(range(n + 1), parts - 1):
        yield (0,) + inner + (n,)


def _strip_index(bounds: Sequence[int], coordinate: int) -> int:
    for index in range(len(bounds) - 1):
        if bounds[index] < coordinate <= bounds[index + 1]:
            return index
    raise ValueError(coordinate)


def _gridded_cells(pi: Permutation, columns, col_bounds, row_bounds) -> Optional[Dict[Tuple[int, int], List[int]]]:
    """区切りに従って点をセルへ振り分け、Grid(M) の条件を満たせばセル→位置リストを返します。"""
    cells: Dict[Tuple[int, int], List[int]] = {}
    for position, value in enumerate(pi.entries, start=1):
        x = _strip_index(col_bounds, position)
        y = _strip_index(row_bounds, value)
        sign = columns[x][y]
        if sign == 0:
            return None
        points = cells.setdefault((x, y), [])
        if points:
            last_value = pi.value_at(points[-1])
            if (value > last_value) != (sign > 0):
                return None
        points.append(position)
    return cells


def iter_griddings(pi: Permutation, atom):
    """Grid(M) の条件を満たす (列区切り, 行区切り, セル割当) を列挙します。"""
    columns = atom.columns
    width, height = len(columns), len(columns[0])
    for col_bounds in _cuts(pi.n, width):
        for row_bounds in _cuts(pi.n, height):
            cells = _gridded_cells(pi, columns, col_bounds, row_bounds)
            if cells is not None:
                yield col_bounds, row_bounds, cells


def grid_contains(pi: Permutation, atom) -> bool:
    for _ in iter_griddings(pi, atom):
        return True
    return False


def geo_contains(pi: Permutation, atom) -> bool:
    columns = atom.columns
    for col_bounds, row_bounds, cells in iter_griddings(pi, atom):
        if _diagonal_placement_exists(pi, columns, col_bounds, row_bounds, cells):
            return True
    return False


def _diagonal_placement_exists(pi, columns, col_bounds, row_bounds, cells) -> bool:
    """
    各点 p にパラメータ t_p ∈ (0,1) を割り当て、x 座標 = t_p、y 座標 = t_p (+1 セル) または
    1 - t_p (-1 セル) としたとき、列内の位置順と行内の値順を同時に実現できるか。
    """
    cell_of: Dict[int, Tuple[int, int]] = {}
    for cell, positions in cells.items():
        for position in positions:
            cell_of[position] = cell

    node_count = 2 * pi.n
    # 重み c の狭義制約を c * scale - 1 の整数で表す
    scale = 4 * node_count + 4
    dist = [[INF] * node_count for _ in range(node_count)]
    for node in range(node_count):
        dist[node][node] = 0

    def add_edge(source: int, target: int, bound: int) -> None:
        weight = bound * scale - 1
        if weight < dist[source][target]:
            dist[source][target] = weight

    def constrain(lhs: Tuple[int, int], rhs: Tuple[int, int]) -> None:
        # (node, offset) 同士の lhs < rhs を x_l - x_r < offset_r - offset_l として追加
        (left, left_offset), (right, right_offset) = lhs, rhs
        bound = right_offset - left_offset
        add_edge(right, left, bound)
        add_edge(left ^ 1, right ^ 1, bound)

    def x_coord(position: int) -> Tuple[int, int]:
        return (2 * (position - 1), 0)

    def y_coord(position: int) -> Tuple[int, int]:
        x, y = cell_of[position]
        if columns[x][y] > 0:
            return (2 * (position - 1), 0)
        return (2 * (position - 1) + 1, 1)

    for position in range(1, pi.n + 1):
        plus = 2 * (position - 1)
        add_edge(plus + 1, plus, 2)  # t < 1
        add_edge(plus, plus + 1, 0)  # t > 0

    for x in range(len(columns)):
        in_column = range(col_bounds[x] + 1, col_bounds[x + 1] + 1)
        for first, second in zip(in_column, in_column[1:]):
            constrain(x_coord(first), x_coord(second))

    for y in range(len(columns[0])):
        values = range(row_bounds[y] + 1, row_bounds[y + 1] + 1)
        in_row = [pi.position_of(v) for v in values]
        for first, second in zip(in_row, in_row[1:]):
            constrain(y_coord(first), y_coord(second))

    for middle in range(node_count):
        row_m = dist[middle]
        for source in range(node_count):
            through = dist[source][middle]
            if through == INF:
                continue
            row_s = dist[source]
            for target in range(node_count):
                candidate = through + row_m[target]
                if candidate < row_s[target]:
                    row_s[target] = candidate
        if any(dist[node][node] < 0 for node in range(node_count)):
            return False
    return True
