import logging
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import FrozenSet
from typing import Iterator
from typing import List
from typing import Tuple

from ..perm_core import Permutation
from ..perm_core import inverse
from .formula import And
from .formula import CountedPattern
from .formula import Or
from .formula import PatternFormula
from .mesh import BlowupError
from .mesh import MeshPattern
from .mesh import PatternError

# ロギング設定
pop_logger = logging.getLogger(__name__)
pop_logger.addHandler(logging.NullHandler())


class InvalidPopError(PatternError):
    """関係が [k] 上の半順序を生成しない (範囲外・反射・循環) 時のエラー。"""
    pass


@dataclass(frozen=True)
class Pop:
    """
    半順序パターン (k, ≺)。relations の (a, b) は a ≺ b を表します。
    """
    k: int
    relations: FrozenSet[Tuple[int, int]] = frozenset()

    def __post_init__(self):
        if self.k < 1:
            raise InvalidPopError(f"POP の大きさは 1 以上でなければなりません: {self.k}")
        relations = frozenset((int(a), int(b)) for a, b in self.relations)
        for a, b in relations:
            if not (1 <= a <= self.k and 1 <= b <= self.k):
                raise InvalidPopError(f"関係 {a}≺{b} は [1..{self.k}] の範囲外です。")
            if a == b:
                raise InvalidPopError(f"反射的な関係 {a}≺{a} は許されません。")
        object.__setattr__(self, "relations", relations)
        if not any(True for _ in self.linear_extensions()):
            raise InvalidPopError(f"関係が循環しています: {sorted(relations)}")

    def linear_extensions(self) -> Iterator[Tuple[int, ...]]:
        """線形拡大 (下から上へ要素を並べた列) を辞書順に列挙します。"""
        below = {x: {a for a, b in self.relations if b == x} for x in range(1, self.k + 1)}

        def extend(prefix: List[int], placed: set):
            if len(prefix) == self.k:
                yield tuple(prefix)
                return
            for x in range(1, self.k + 1):
                if x not in placed and below[x] <= placed:
                    prefix.append(x)
                    placed.add(x)
                    yield from extend(prefix, placed)
                    placed.remove(x)
                    prefix.pop()

        yield from extend([], set())

    def maximal_elements(self) -> FrozenSet[int]:
        return frozenset(x for x in range(1, self.k + 1) if not any(a == x for a, _ in self.relations))

    def __str__(self) -> str:
        rels = ", ".join(f"{a}<{b}" for a, b in sorted(self.relations))
        return f"pop({self.k}; {rels})"


def extension_patterns(pop: Pop) -> List[Permutation]:
    """各線形拡大 x に対する古典パターン x^{-1} の一覧 (線形拡大の辞書順)。"""
    return [inverse(Permutation(x)) for x in pop.linear_extensions()]


def compile_pop(pop: Pop) -> PatternFormula:
    """π が P を回避 ⇔ π がすべての x^{-1} (x ∈ L(P)) を回避。"""
    patterns = extension_patterns(pop)
    pop_logger.debug(f"{pop} を {len(patterns)} 個の古典パターンに展開しました。")
    return And(tuple(CountedPattern(MeshPattern(tau), 0) for tau in patterns))


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """total を parts 個の非負整数に分ける組 (先頭成分の降順)。"""
    if parts == 1:
        yield (total,)
        return
    for bars in combinations(range(total + parts - 1), parts - 1):
        # 仕切りの位置から各成分を復元する
        previous = -1
        sizes = []
        for bar in bars:
            sizes.append(bar - previous - 1)
            previous = bar
        sizes.append(total + parts - 1 - previous - 1)
        yield tuple(sizes)


def compile_counted_pop(pop: Pop, cap: int, blowup_cap: int) -> PatternFormula:
    """
    出現回数が cap 以下 ⇔ 合計が cap の配分 (c_1..c_m) のいずれかについて、
    各 x_i^{-1} の出現が c_i 以下。配分の個数が blowup_cap を超えたら BlowupError。
    """
    if cap < 0:
        raise PatternError(f"出現回数の上限は非負でなければなりません: {cap}")
    if cap == 0:
        return compile_pop(pop)
    patterns = extension_patterns(pop)
    terms = comb(cap + len(patterns) - 1, len(patterns) - 1)
    if terms > blowup_cap:
        raise BlowupError(
            f"{pop} の出現上限 {cap} は {terms} 項に展開され、上限 {blowup_cap} を超えます。",
            terms=terms,
            cap=blowup_cap,
        )
    splits = sorted(compositions(cap, len(patterns)), reverse=True)
    return Or(tuple(
        And(tuple(CountedPattern(MeshPattern(tau), share) for tau, share in zip(patterns, split)))
        for split in splits
    ))
