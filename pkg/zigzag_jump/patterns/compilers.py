"""
各パターン族をメッシュパターン (またはその AND) へコンパイルする関数群。
"""
import logging
from typing import AbstractSet
from typing import Iterable
from typing import Tuple

from ..perm_core import Permutation
from ..perm_core import standardize
from .formula import And
from .formula import CountedPattern
from .formula import PatternFormula
from .mesh import CompilationError
from .mesh import MeshPattern

# ロギング設定
compiler_logger = logging.getLogger(__name__)
compiler_logger.addHandler(logging.NullHandler())


def _check_position(tau: Permutation, position: int, allowed: range, label: str) -> None:
    if position not in allowed:
        raise CompilationError(
            f"{label} の位置 {position} は {allowed.start}..{allowed.stop - 1} の範囲外です (τ={tau})。"
        )


def compile_classical(tau: Permutation) -> MeshPattern:
    return MeshPattern(tau, frozenset())


def compile_vincular(tau: Permutation, position: int) -> MeshPattern:
    """τ(a) と τ(a+1) が π でも隣接 ⇔ 列 a 全体を網掛け。"""
    k = tau.n
    _check_position(tau, position, range(1, k), "vincular")
    return MeshPattern(tau, frozenset((position, j) for j in range(k + 1)))


def compile_bivincular(tau: Permutation, position: int, rows: AbstractSet[int]) -> MeshPattern:
    """vincular に加え、b ∈ B の値 b と b+1 が π でも連続値 ⇔ 行 b 全体を網掛け。"""
    k = tau.n
    for b in rows:
        _check_position(tau, b, range(1, k), "bivincular の行")
    base = compile_vincular(tau, position)
    extra = {(i, b) for b in rows for i in range(k + 1)}
    return MeshPattern(tau, base.cells | frozenset(extra))


def compile_boxed(tau: Permutation) -> MeshPattern:
    k = tau.n
    return MeshPattern(tau, frozenset((i, j) for i in range(1, k) for j in range(1, k)))


def compile_bruhat(tau: Permutation, pairs: Iterable[Tuple[int, int]]) -> MeshPattern:
    """
    (a, b) ごとに矩形 a <= i < b, τ(a) <= j < τ(b) を網掛け。
    各組は τ(a) < τ(b) で、間の位置の値がすべて τ(a) 未満か τ(b) 超でなければなりません。
    """
    k = tau.n
    cells = set()
    for a, b in pairs:
        if not (1 <= a < b <= k):
            raise CompilationError(f"Bruhat の組 ({a},{b}) は 1 <= a < b <= {k} を満たしません。")
        if tau.value_at(a) >= tau.value_at(b):
            raise CompilationError(f"Bruhat の組 ({a},{b}) は τ(a) < τ(b) を満たしません (τ={tau})。")
        for i in range(a + 1, b):
            if tau.value_at(a) < tau.value_at(i) < tau.value_at(b):
                raise CompilationError(
                    f"Bruhat の組 ({a},{b}) の間の位置 {i} の値 {tau.value_at(i)} が "
                    f"τ(a)={tau.value_at(a)} と τ(b)={tau.value_at(b)} の間にあります (τ={tau})。"
                )
        cells.update(
            (i, j)
            for i in range(a, b)
            for j in range(tau.value_at(a), tau.value_at(b))
        )
    return MeshPattern(tau, frozenset(cells))


def remove_entries(tau_prime: Permutation, positions: AbstractSet[int]) -> Permutation:
    """指定位置 (1 始まり) の要素を取り除き標準化した置換。"""
    kept = [v for index, v in enumerate(tau_prime.entries, start=1) if index not in positions]
    return standardize(kept)


def compile_barred_single(tau_prime: Permutation, position: int) -> MeshPattern:
    """
    バー付きパターン (バーは位置 a、値 b) を (τ⁻, {(a-1, b-1)}) に変換します。
    """
    _check_position(tau_prime, position, range(1, tau_prime.n + 1), "バー")
    value = tau_prime.value_at(position)
    tau_minus = remove_entries(tau_prime, {position})
    return MeshPattern(tau_minus, frozenset({(position - 1, value - 1)}))


def check_bar_separation(tau_prime: Permutation, positions: AbstractSet[int]) -> None:
    """複数バーは位置も値も互いに隣接してはならない。"""
    ordered = sorted(positions)
    for first in ordered:
        for second in ordered:
            if first >= second:
                continue
            if second - first == 1:
                raise CompilationError(f"バー付き要素の位置 {first} と {second} が隣接しています (τ'={tau_prime})。")
            if abs(tau_prime.value_at(first) - tau_prime.value_at(second)) == 1:
                raise CompilationError(
                    f"バー付き要素の値 {tau_prime.value_at(first)} と {tau_prime.value_at(second)} が隣接しています (τ'={tau_prime})。"
                )


def compile_barred_multi(tau_prime: Permutation, positions: AbstractSet[int]) -> PatternFormula:
    """
    複数バーのパターンを、他のバー要素を取り除いた単一バーパターンの AND に分解します。
    """
    positions = frozenset(positions)
    if not positions:
        raise CompilationError("バー付き要素がありません。")
    for position in positions:
        _check_position(tau_prime, position, range(1, tau_prime.n + 1), "バー")
    if len(positions) == 1:
        return CountedPattern(compile_barred_single(tau_prime, next(iter(positions))), 0)
    check_bar_separation(tau_prime, positions)
    parts = []
    for position in sorted(positions):
        others = positions - {position}
        reduced = remove_entries(tau_prime, others)
        shifted = position - sum(1 for other in others if other < position)
        parts.append(CountedPattern(compile_barred_single(reduced, shifted), 0))
    return And(tuple(parts))


def consecutive_run(tau: Permutation, position: int) -> Tuple[int, int]:
    """
    position を含み、隣接位置の値が常に +1 (または常に -1) ずつ変わる最長の区間 [r, s]。
    """
    k = tau.n
    for step in (1, -1):
        r = position
        while r > 1 and tau.value_at(r) - tau.value_at(r - 1) == step:
            r -= 1
        s = position
        while s < k and tau.value_at(s + 1) - tau.value_at(s) == step:
            s += 1
        if r < s:
            return r, s
    return position, position


def compile_weak_barred(tau_prime: Permutation, position: int) -> MeshPattern:
    """
    弱バー付きパターン (任意の位置への拡張を禁止) を、バー要素を含む連続値区間 [r, s] の
    各点に対応する斜めのセル列で網掛けしたメッシュパターンに変換します。
    """
    _check_position(tau_prime, position, range(1, tau_prime.n + 1), "弱バー")
    r, s = consecutive_run(tau_prime, position)
    tau_minus = remove_entries(tau_prime, {position})
    cells = frozenset((r + i - 1, tau_prime.value_at(r + i) - 1) for i in range(s - r + 1))
    return MeshPattern(tau_minus, cells)


def compile_dotted(tau: Permutation, dotted: AbstractSet[int]) -> PatternFormula:
    """
    点付きパターン: 点のない各位置 j について、j を弱バーにしたパターンの AND。
    """
    for position in dotted:
        _check_position(tau, position, range(1, tau.n + 1), "点")
    parts = [
        CountedPattern(compile_weak_barred(tau, j), 0)
        for j in range(1, tau.n + 1)
        if j not in dotted
    ]
    return And(tuple(parts))
