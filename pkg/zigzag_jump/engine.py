"""
Algorithm J: 最小ジャンプによる網羅生成。

- generate_greedy: 訪問済み集合を持ち、大きい値から順に未訪問への最小ジャンプを試す貪欲版
- generate_ordered: L_{n-1} の並びから最大値を左右交互に掃引して L_n の並びを作る再帰版
  (訪問済み集合を持たない)
"""
import logging
import threading
from abc import ABC
from abc import abstractmethod
from dataclasses import dataclass
from dataclasses import field
from enum import Enum
from itertools import permutations
from typing import Dict
from typing import FrozenSet
from typing import Iterable
from typing import Iterator
from typing import List
from typing import Optional
from typing import Tuple

from .patterns.formula import PatternFormula
from .patterns.formula import evaluate
from .perm_core import Direction
from .perm_core import JumpStep
from .perm_core import Permutation
from .perm_core import feasible_steps
from .perm_core import find_jump
from .perm_core import identity
from .perm_core import insert_largest
from .perm_core import jump
from .perm_core import peaks
from .perm_core import remove_largest

# ロギング設定
engine_logger = logging.getLogger(__name__)
engine_logger.addHandler(logging.NullHandler())


# --- Custom Exceptions ---
class EngineError(Exception):
    """生成エンジン関連のエラーベースクラス。"""
    pass


class SeedNotInLanguageError(EngineError):
    """開始置換が L_n に属さない時のエラー。"""
    def __init__(self, seed: Permutation):
        super().__init__(f"開始置換 {seed} は言語に含まれません。")
        self.seed = seed


# --- 言語オラクル ---

class LanguageOracle(ABC):
    """
    長さ 0..n の置換について所属を答えるオラクル。結果はスレッド安全にキャッシュします。
    """

    def __init__(self, n: int):
        self.n = n
        self._cache: Dict[Tuple[int, ...], bool] = {}
        self._lock = threading.Lock()

    @abstractmethod
    def _member(self, pi: Permutation) -> bool:
        ...

    def contains(self, pi: Permutation) -> bool:
        key = pi.entries
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        result = self._member(pi)
        with self._lock:
            self._cache[key] = result
        return result

    def members(self, m: int) -> List[Permutation]:
        """長さ m の所属置換を辞書順に返します。"""
        return [
            pi for pi in (Permutation(p) for p in permutations(range(1, m + 1)))
            if self.contains(pi)
        ]

    def size(self, m: int) -> int:
        return len(self.members(m))

    @property
    def cache_size(self) -> int:
        return len(self._cache)


class FormulaOracle(LanguageOracle):
    """パターン式を満たす置換からなる言語 (長さに依らず同じ式で判定)。"""

    def __init__(self, formula: PatternFormula, n: int):
        super().__init__(n)
        self.formula = formula

    def _member(self, pi: Permutation) -> bool:
        return evaluate(self.formula, pi)


class ExplicitSetOracle(LanguageOracle):
    """
    長さ n の置換を明示的に与えた言語。長さ m < n では射影 p^{n-m}(L_n) で答えます。
    """

    def __init__(self, perms: Iterable[Permutation], n: int):
        super().__init__(n)
        level: FrozenSet[Permutation] = frozenset(perms)
        if any(pi.n != n for pi in level):
            raise EngineError(f"長さ {n} 以外の置換が含まれています。")
        self._levels: Dict[int, FrozenSet[Permutation]] = {n: level}
        for m in range(n, 0, -1):
            level = frozenset(remove_largest(pi) for pi in level)
            self._levels[m - 1] = level

    def _member(self, pi: Permutation) -> bool:
        return pi in self._levels.get(pi.n, frozenset())


# --- 最小ジャンプ ---

def minimal_jump(pi: Permutation, value: int, direction: Direction, oracle: LanguageOracle) -> Optional[Permutation]:
    """同じ値・同じ方向でより短いジャンプが言語外になる、最短の言語内ジャンプ先。"""
    for steps in range(1, feasible_steps(pi, value, direction) + 1):
        candidate = jump(pi, value, direction, steps)
        if oracle.contains(candidate):
            return candidate
    return None


class GenStatus(str, Enum):
    COMPLETE = "Complete"
    STALLED_NO_JUMP = "StalledNoJump"
    STALLED_AMBIGUOUS = "StalledAmbiguous"
    TRUNCATED = "Truncated"


@dataclass
class GenResult:
    sequence: List[Permutation]
    status: GenStatus
    steps: List[JumpStep] = field(default_factory=list)
    language_size: Optional[int] = None
    # StalledAmbiguous の時、両方向に動けた値
    ambiguous_value: Optional[int] = None


def generate_greedy(
    oracle: LanguageOracle,
    n: int,
    seed: Optional[Permutation] = None,
    limit: Optional[int] = None,
) -> GenResult:
    """
    貪欲版 Algorithm J。値 n..2 の順に、左右それぞれの最小ジャンプ先が未訪問かを調べ、
    最初に動ける値で一方向だけが可能ならジャンプし、両方向とも可能なら停止します。
    """
    current = seed if seed is not None else identity(n)
    if current.n != n or not oracle.contains(current):
        raise SeedNotInLanguageError(current)

    sequence = [current]
    steps: List[JumpStep] = []
    visited = {current.entries}
    engine_logger.info(f"貪欲生成を開始: n={n}, seed={current}")

    while True:
        if limit is not None and len(sequence) >= limit:
            return GenResult(sequence, GenStatus.TRUNCATED, steps)
        chosen: Optional[Permutation] = None
        for value in range(n, 1, -1):
            left = minimal_jump(current, value, Direction.LEFT, oracle)
            right = minimal_jump(current, value, Direction.RIGHT, oracle)
            left_ok = left is not None and left.entries not in visited
            right_ok = right is not None and right.entries not in visited
            if left_ok and right_ok:
                engine_logger.info(f"値 {value} が両方向に動けるため停止します: {current}")
                return GenResult(sequence, GenStatus.STALLED_AMBIGUOUS, steps, ambiguous_value=value)
            if left_ok or right_ok:
                chosen = left if left_ok else right
                break
        if chosen is None:
            break
        step = find_jump(current, chosen)
        engine_logger.debug(f"{current} -> {chosen} ({step})")
        steps.append(step)
        sequence.append(chosen)
        visited.add(chosen.entries)
        current = chosen

    size = oracle.size(n)
    status = GenStatus.COMPLETE if len(sequence) == size else GenStatus.STALLED_NO_JUMP
    engine_logger.info(f"貪欲生成を終了: {status.value} ({len(sequence)}/{size})")
    return GenResult(sequence, status, steps, language_size=size)


def generate_ordered(oracle: LanguageOracle, n: int) -> Iterator[Permutation]:
    """
    J(L_n) を順に返します。J(L_{n-1}) の偶数番目 (0 始まり) の置換には最大値を右端から左へ、
    奇数番目には左端から右へ挿入し、L_n に属するものだけを残します。
    """
    engine_logger.info(f"順序付き生成を開始: n={n}")
    return _ordered(oracle, n)


def _ordered(oracle: LanguageOracle, m: int) -> Iterator[Permutation]:
    if m == 0:
        yield Permutation(())
        return
    for index, parent in enumerate(_ordered(oracle, m - 1)):
        positions = range(m, 0, -1) if index % 2 == 0 else range(1, m + 1)
        for position in positions:
            child = insert_largest(parent, position)
            if oracle.contains(child):
                yield child


def annotate(sequence: Iterable[Permutation]) -> Iterator[Tuple[Permutation, Optional[JumpStep]]]:
    """各置換と、直前の置換からのジャンプ (先頭は None) の組を返します。"""
    previous: Optional[Permutation] = None
    for pi in sequence:
        yield pi, (find_jump(previous, pi) if previous is not None else None)
        previous = pi


def is_cyclic(oracle: LanguageOracle, n: int) -> bool:
    """J(L_n) の末尾と先頭が最小ジャンプで結ばれる ⇔ 2 <= i <= n-1 のすべてで |L_i| が偶数。"""
    return all(oracle.size(i) % 2 == 0 for i in range(2, n))


def closing_jump(oracle: LanguageOracle, n: int) -> Optional[JumpStep]:
    """J(L_n) の末尾から先頭への最小ジャンプ (存在しなければ None)。"""
    sequence = list(generate_ordered(oracle, n))
    if len(sequence) < 2:
        return None
    first, last = sequence[0], sequence[-1]
    step = find_jump(last, first)
    if step is None:
        return None
    if minimal_jump(last, step.value, step.direction, oracle) != first:
        return None
    return step


def seeds(oracle: LanguageOracle, n: int) -> List[Permutation]:
    """ピークを持たない L_n の置換 (どれも貪欲版の開始置換に使える)。"""
    return [pi for pi in oracle.members(n) if not peaks(pi)]
