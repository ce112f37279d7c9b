import logging
import re
from dataclasses import dataclass
from dataclasses import field
from enum import Enum
from typing import Iterator
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

# ロギング設定
perm_logger = logging.getLogger(__name__)
perm_logger.addHandler(logging.NullHandler())


# --- Custom Exceptions ---
class PermutationError(Exception):
    """置換操作関連のエラーベースクラス。"""
    pass


class InvalidPermutationError(PermutationError):
    """1..n の並べ替えになっていない入力に対して送出されるエラー。"""
    pass


class InvalidJumpError(PermutationError):
    """ジャンプの前提条件 (飛び越す要素がすべて小さい) を満たさない時のエラー。"""
    pass


class InversionTableError(PermutationError):
    """反転表が不正 (範囲外の値や長さの不一致) な時のエラー。"""
    pass


class PositionError(PermutationError):
    """挿入位置が 1..n+1 の範囲外の時のエラー。"""
    pass


class Direction(str, Enum):
    """ジャンプの方向。"""
    LEFT = "L"
    RIGHT = "R"

    @property
    def sign(self) -> int:
        return -1 if self is Direction.LEFT else 1

    def opposite(self) -> "Direction":
        return Direction.RIGHT if self is Direction.LEFT else Direction.LEFT


@dataclass(frozen=True)
class Permutation:
    """
    1..n の並べ替え。entries は 1 始まりの値を並べたタプル (位置は 1 始まりで扱う)。
    空置換 (n = 0) も有効な値です。
    """
    entries: Tuple[int, ...]
    _positions: Tuple[int, ...] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        entries = tuple(self.entries)
        if sorted(entries) != list(range(1, len(entries) + 1)):
            raise InvalidPermutationError(f"1..{len(entries)} の並べ替えではありません: {entries}")
        positions = [0] * (len(entries) + 1)
        for index, value in enumerate(entries, start=1):
            positions[value] = index
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_positions", tuple(positions))

    # --- 生成 ---
    @classmethod
    def of(cls, *values: int) -> "Permutation":
        return cls(tuple(values))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """
        文字列から置換を読み取ります。"1 2 3"・"1,2,3"・"123" (n <= 9 のみ)・"()" を受け付けます。
        """
        stripped = text.strip()
        if stripped in ("", "()", "ε"):
            return cls(())
        if re.fullmatch(r"\d+", stripped):
            return cls(tuple(int(ch) for ch in stripped))
        tokens = [token for token in re.split(r"[\s,]+", stripped.strip("()")) if token]
        try:
            return cls(tuple(int(token) for token in tokens))
        except ValueError as e:
            raise InvalidPermutationError(f"置換として解釈できません: '{text}'") from e

    # --- 基本アクセサ ---
    @property
    def n(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def value_at(self, position: int) -> int:
        """1 始まりの位置 position にある値。"""
        return self.entries[position - 1]

    def position_of(self, value: int) -> int:
        """値 value の 1 始まりの位置。"""
        return self._positions[value]

    def compact(self) -> str:
        """n <= 9 なら区切りなしの表記、それ以外は空白区切り。"""
        if self.n <= 9:
            return "".join(str(v) for v in self.entries) or "()"
        return str(self)

    def __str__(self) -> str:
        if not self.entries:
            return "()"
        return " ".join(str(v) for v in self.entries)


@dataclass(frozen=True)
class JumpStep:
    """隣接する二つの置換を結ぶジャンプ (値・方向・歩数)。"""
    value: int
    direction: Direction
    steps: int

    def __str__(self) -> str:
        return f"{self.value}{self.direction.value}{self.steps}"


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def insert_largest(pi: Permutation, position: int) -> Permutation:
    """値 n+1 を 1 始まりの位置 position に挿入します (c_i 演算)。"""
    if not 1 <= position <= pi.n + 1:
        raise PositionError(f"挿入位置 {position} は 1..{pi.n + 1} の範囲外です。")
    entries = list(pi.entries)
    entries.insert(position - 1, pi.n + 1)
    return Permutation(tuple(entries))


def remove_largest(pi: Permutation) -> Permutation:
    """最大値 n を取り除きます (射影 p)。空置換には定義されません。"""
    if pi.n == 0:
        raise InvalidPermutationError("空置換から最大値は取り除けません。")
    return Permutation(tuple(v for v in pi.entries if v != pi.n))


def feasible_steps(pi: Permutation, value: int, direction: Direction) -> int:
    """value が direction 方向に飛び越せる (すべて value より小さい) 要素の最大個数。"""
    entries = pi.entries
    index = pi.position_of(value) - 1
    count = 0
    cursor = index + direction.sign
    while 0 <= cursor < len(entries) and entries[cursor] < value:
        count += 1
        cursor += direction.sign
    return count


def jump(pi: Permutation, value: int, direction: Direction, steps: int) -> Permutation:
    """
    value を direction 方向に steps 個の小さい要素を越えて移動させます (巡回シフト)。
    """
    if not 1 <= value <= pi.n:
        raise InvalidJumpError(f"値 {value} は置換 {pi} に含まれません。")
    if steps < 1 or steps > feasible_steps(pi, value, direction):
        raise InvalidJumpError(
            f"{value} を {direction.value} 方向へ {steps} 歩ジャンプできません: {pi}"
        )
    entries = list(pi.entries)
    index = pi.position_of(value) - 1
    del entries[index]
    entries.insert(index + direction.sign * steps, value)
    return Permutation(tuple(entries))


def max_jump(pi: Permutation, value: int, direction: Direction) -> Optional[Permutation]:
    """到達可能な最も遠いジャンプ。動けない場合は None。"""
    steps = feasible_steps(pi, value, direction)
    if steps == 0:
        return None
    return jump(pi, value, direction, steps)


def find_jump(source: Permutation, target: Permutation) -> Optional[JumpStep]:
    """source から target へ一回のジャンプで移れるなら、その JumpStep を返します。"""
    if source.n != target.n or source == target:
        return None
    diff = [i for i in range(source.n) if source.entries[i] != target.entries[i]]
    start, end = diff[0], diff[-1]
    window_src = source.entries[start:end + 1]
    window_dst = target.entries[start:end + 1]
    # 右へのジャンプ: 窓の先頭の値が末尾へ移る
    if window_src[1:] == window_dst[:-1] and window_src[0] == window_dst[-1]:
        value = window_src[0]
        if all(v < value for v in window_src[1:]):
            return JumpStep(value, Direction.RIGHT, end - start)
    if window_src[:-1] == window_dst[1:] and window_src[-1] == window_dst[0]:
        value = window_src[-1]
        if all(v < value for v in window_src[:-1]):
            return JumpStep(value, Direction.LEFT, end - start)
    return None


def peaks(pi: Permutation) -> List[int]:
    """ピーク (a_{i-1} < a_i > a_{i+1}) となる 1 始まりの位置の一覧。"""
    e = pi.entries
    return [i + 1 for i in range(1, len(e) - 1) if e[i - 1] < e[i] > e[i + 1]]


def nut(pi: Permutation) -> Permutation:
    """
    ナット: 最大値が左端か右端にある限り取り除き続けた結果 (空置換もありうる)。
    """
    current = pi
    while current.n > 0 and current.position_of(current.n) in (1, current.n):
        current = remove_largest(current)
    return current


def inverse(pi: Permutation) -> Permutation:
    return Permutation(tuple(pi.position_of(v) for v in range(1, pi.n + 1)))


def reverse(pi: Permutation) -> Permutation:
    return Permutation(tuple(reversed(pi.entries)))


def complement(pi: Permutation) -> Permutation:
    return Permutation(tuple(pi.n + 1 - v for v in pi.entries))


def standardize(values: Sequence[int]) -> Permutation:
    """相異なる整数列を、順序を保ったまま 1..k の置換に縮約します。"""
    ranks = {v: rank for rank, v in enumerate(sorted(values), start=1)}
    if len(ranks) != len(values):
        raise InvalidPermutationError(f"値が重複しています: {tuple(values)}")
    return Permutation(tuple(ranks[v] for v in values))


# --- 反転表 ---
# counts[v-1] は v より右にある v より小さい値の個数 (0..v-1)。
# このとき v の s 歩ジャンプは counts[v-1] だけを s 変化させる。

def to_inversion_table(pi: Permutation) -> Tuple[int, ...]:
    counts = []
    for v in range(1, pi.n + 1):
        pos = pi.position_of(v)
        counts.append(sum(1 for w in pi.entries[pos:] if w < v))
    return tuple(counts)


def from_inversion_table(counts: Sequence[int]) -> Permutation:
    entries: List[int] = []
    for v, count in enumerate(counts, start=1):
        if not 0 <= count <= v - 1:
            raise InversionTableError(f"値 {v} の反転数 {count} は 0..{v - 1} の範囲外です。")
        entries.insert(len(entries) - count, v)
    return Permutation(tuple(entries))
