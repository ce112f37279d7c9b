"""
パターン族の定義。DSL の各項はここの dataclass として表現され、compile() で
パターン式へ変換されます。族ごとの情報は tame モジュールの簡易判定でも使われます。
"""
from dataclasses import dataclass
from typing import FrozenSet
from typing import Tuple
from typing import Union

from ..perm_core import Permutation
from . import compilers
from .formula import CountedPattern
from .formula import GridAtom
from .formula import PatternFormula
from .mesh import CompilationError
from .mesh import MeshPattern
from .pop import Pop
from .pop import compile_counted_pop
from .pop import compile_pop


@dataclass(frozen=True)
class Classical:
    tau: Permutation

    def compile(self, blowup_cap: int) -> PatternFormula:
        return CountedPattern(compilers.compile_classical(self.tau), 0)


@dataclass(frozen=True)
class Vincular:
    tau: Permutation
    position: int

    def __post_init__(self):
        compilers.compile_vincular(self.tau, self.position)

    def compile(self, blowup_cap: int) -> PatternFormula:
        return CountedPattern(compilers.compile_vincular(self.tau, self.position), 0)


@dataclass(frozen=True)
class Bivincular:
    tau: Permutation
    position: int
    rows: FrozenSet[int] = frozenset()

    def __post_init__(self):
        compilers.compile_bivincular(self.tau, self.position, self.rows)

    def compile(self, blowup_cap: int) -> PatternFormula:
        return CountedPattern(compilers.compile_bivincular(self.tau, self.position, self.rows), 0)


@dataclass(frozen=True)
class Barred:
    """τ' と、バーの付いた位置 (1 始まり) の集合。"""
    tau_prime: Permutation
    bars: FrozenSet[int]

    def __post_init__(self):
        compilers.compile_barred_multi(self.tau_prime, self.bars)

    def compile(self, blowup_cap: int) -> PatternFormula:
        return compilers.compile_barred_multi(self.tau_prime, self.bars)


@dataclass(frozen=True)
class Boxed:
    tau: Permutation

    def compile(self, blowup_cap: int) -> PatternFormula:
        return CountedPattern(compilers.compile_boxed(self.tau), 0)


@dataclass(frozen=True)
class Bruhat:
    tau: Permutation
    pairs: FrozenSet[Tuple[int, int]]

    def __post_init__(self):
        compilers.compile_bruhat(self.tau, self.pairs)

    def compile(self, blowup_cap: int) -> PatternFormula:
        return CountedPattern(compilers.compile_bruhat(self.tau, self.pairs), 0)


@dataclass(frozen=True)
class Mesh:
    pattern: MeshPattern

    def compile(self, blowup_cap: int) -> PatternFormula:
        return CountedPattern(self.pattern, 0)


@dataclass(frozen=True)
class PartialOrder:
    pop: Pop

    def compile(self, blowup_cap: int) -> PatternFormula:
        return compile_pop(self.pop)


@dataclass(frozen=True)
class Dotted:
    tau: Permutation
    dots: FrozenSet[int]

    def __post_init__(self):
        compilers.compile_dotted(self.tau, self.dots)

    def compile(self, blowup_cap: int) -> PatternFormula:
        return compilers.compile_dotted(self.tau, self.dots)


@dataclass(frozen=True)
class WeakBarred:
    tau_prime: Permutation
    bar: int

    def __post_init__(self):
        compilers.compile_weak_barred(self.tau_prime, self.bar)

    def compile(self, blowup_cap: int) -> PatternFormula:
        return CountedPattern(compilers.compile_weak_barred(self.tau_prime, self.bar), 0)


@dataclass(frozen=True)
class Grid:
    atom: GridAtom

    def compile(self, blowup_cap: int) -> PatternFormula:
        return self.atom


@dataclass(frozen=True)
class Counted:
    """出現回数を cap 以下に制限した項。単一メッシュパターンか POP のみ。"""
    family: "Family"
    cap: int

    def __post_init__(self):
        if self.cap < 0:
            raise CompilationError(f"出現回数の上限は非負でなければなりません: {self.cap}")
        if isinstance(self.family, (Grid, Dotted, Counted)) or (
            isinstance(self.family, Barred) and len(self.family.bars) > 1
        ):
            raise CompilationError(
                f"count() は単一のメッシュパターンか POP にのみ適用できます: {type(self.family).__name__}"
            )

    def compile(self, blowup_cap: int) -> PatternFormula:
        if isinstance(self.family, PartialOrder):
            return compile_counted_pop(self.family.pop, self.cap, blowup_cap)
        inner = self.family.compile(blowup_cap)
        return CountedPattern(inner.pattern, self.cap)


Family = Union[
    Classical, Vincular, Bivincular, Barred, Boxed, Bruhat, Mesh, PartialOrder, Dotted, WeakBarred, Grid, Counted
]
