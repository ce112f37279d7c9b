"""
全探索による検証。生成エンジンとは独立に S_n を走査し、言語の性質と生成結果を確かめます。
"""
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import field
from importlib.resources import files
from itertools import permutations
from typing import Callable
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Set

from .patterns.formula import PatternFormula
from .patterns.formula import evaluate
from .perm_core import Direction
from .perm_core import Permutation
from .perm_core import find_jump
from .perm_core import identity
from .perm_core import insert_largest
from .perm_core import jump
from .perm_core import max_jump
from .perm_core import nut
from .perm_core import remove_largest

# ロギング設定
verify_logger = logging.getLogger(__name__)
verify_logger.addHandler(logging.NullHandler())


# --- Custom Exceptions ---
class VerificationError(Exception):
    """検証処理関連のエラーベースクラス。"""
    pass


class VerificationLimitError(VerificationError):
    """n が検証の上限を超えた時のエラー。"""
    pass


class VerificationTimeoutError(VerificationError):
    """全探索が制限時間を超えた時のエラー。"""
    pass


@dataclass(frozen=True)
class WitnessReport:
    """性質が成り立てば ok=True。成り立たなければ最初の反例を witness に持ちます。"""
    ok: bool
    witness: Optional[Permutation] = None
    detail: str = ""

    def to_dict(self) -> Dict[str, object]:
        return {
            "ok": self.ok,
            "witness": list(self.witness.entries) if self.witness is not None else None,
            "detail": self.detail,
        }


# --- 全探索 ---

def all_permutations(n: int) -> List[Permutation]:
    return [Permutation(p) for p in permutations(range(1, n + 1))]


def brute_enumerate(
    formula: PatternFormula,
    n: int,
    threads: int = 1,
    timeout_seconds: Optional[float] = None,
) -> Set[Permutation]:
    """S_n を全走査して式を満たす置換の集合を返します。"""
    started = time.monotonic()
    candidates = all_permutations(n)
    chunk = max(1, len(candidates) // max(1, threads * 4))
    chunks = [candidates[i:i + chunk] for i in range(0, len(candidates), chunk)]

    def scan(part: Sequence[Permutation]) -> List[Permutation]:
        if timeout_seconds is not None and time.monotonic() - started > timeout_seconds:
            raise VerificationTimeoutError(f"n={n} の全探索が {timeout_seconds} 秒を超えました。")
        return [pi for pi in part if evaluate(formula, pi)]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(scan, chunks))
    else:
        results = [scan(part) for part in chunks]
    found = {pi for part in results for pi in part}
    verify_logger.debug(f"全探索 n={n}: {len(found)} / {len(candidates)}")
    return found


def _check_limit(n: int, max_n: Optional[int]) -> None:
    if max_n is not None and n > max_n:
        raise VerificationLimitError(f"n={n} は検証の上限 {max_n} を超えています。")


def induced_levels(top: Set[Permutation], n: int) -> Dict[int, Set[Permutation]]:
    """L_n から射影 p を繰り返して L_{n-1}, ..., L_0 を作ります。"""
    levels = {n: set(top)}
    for m in range(n, 0, -1):
        levels[m - 1] = {remove_largest(pi) for pi in levels[m]}
    return levels


def is_zigzag(formula: PatternFormula, n: int, max_n: Optional[int] = None) -> WitnessReport:
    """
    L_n と誘導された L_{m-1} = p(L_m) について、各 π ∈ L_{m-1} の c_1(π) と c_m(π) が
    L_m に属するかを調べます (L_0 = {ε} も要求)。
    """
    _check_limit(n, max_n)
    levels = induced_levels(brute_enumerate(formula, n), n)
    if levels[0] != {Permutation(())}:
        return WitnessReport(False, None, f"L_{n} is empty")
    for m in range(1, n + 1):
        for pi in sorted(levels[m - 1], key=lambda p: p.entries):
            for position, label in ((1, "c_1"), (m, f"c_{m}")):
                child = insert_largest(pi, position)
                if child not in levels[m]:
                    return WitnessReport(False, pi, f"{child.compact()} = {label}({pi.compact()}) missing")
    return WitnessReport(True)


def is_zigzag_by_nuts(language: Set[Permutation], n: int) -> WitnessReport:
    """
    各 π ∈ L_n について、ナットの最大値を k (空なら 2) としたとき、k <= i <= n の各値 i の
    左右の最大ジャンプ先がすべて L_n に属するかを調べます。
    """
    for pi in sorted(language, key=lambda p: p.entries):
        core = nut(pi)
        k = max(core.n, 2)
        for value in range(k, n + 1):
            for direction in (Direction.LEFT, Direction.RIGHT):
                target = max_jump(pi, value, direction)
                if target is not None and target not in language:
                    return WitnessReport(
                        False, pi, f"maximum {direction.value}-jump of {value} gives {target.compact()}"
                    )
    return WitnessReport(True)


def is_hereditary(formula: PatternFormula, n: int, max_n: Optional[int] = None) -> WitnessReport:
    """2 <= m <= n について p(S_m(F)) = S_{m-1}(F) を調べます。"""
    _check_limit(n, max_n)
    below = brute_enumerate(formula, 1)
    for m in range(2, n + 1):
        current = brute_enumerate(formula, m)
        projected = {remove_largest(pi) for pi in current}
        difference = projected ^ below
        if difference:
            witness = min(difference, key=lambda p: p.entries)
            side = "only in p(L_m)" if witness in projected else "only in L_{m-1}"
            return WitnessReport(False, witness, f"{witness.compact()} {side} at m={m}")
        below = current
    return WitnessReport(True)


# --- 生成結果の検証 ---

@dataclass(frozen=True)
class GrayReport:
    ok: bool
    offending_index: Optional[int] = None
    reason: str = ""


def validate_gray(
    sequence: Sequence[Permutation],
    member: Callable[[Permutation], bool],
    n: int,
    reference: Optional[Set[Permutation]] = None,
) -> GrayReport:
    """
    生成列が (d) 恒等置換から始まり、(a) 重複がなく、(c) 隣接する置換が L_n に関して
    最小のジャンプで結ばれ、(b) 全体が L_n と一致するかを調べます。
    """
    if reference is None:
        reference = {pi for pi in all_permutations(n) if member(pi)}
    if not sequence:
        return GrayReport(not reference, 0 if reference else None, "empty sequence")
    if sequence[0] != identity(n):
        return GrayReport(False, 0, f"first element {sequence[0].compact()} is not the identity")
    seen: Set[Permutation] = set()
    for index, pi in enumerate(sequence):
        if pi in seen:
            return GrayReport(False, index, f"{pi.compact()} repeated")
        seen.add(pi)
        if index == 0:
            continue
        previous = sequence[index - 1]
        step = find_jump(previous, pi)
        if step is None:
            return GrayReport(False, index, f"{previous.compact()} -> {pi.compact()} is not a jump")
        for shorter in range(1, step.steps):
            if member(jump(previous, step.value, step.direction, shorter)):
                return GrayReport(False, index, f"jump {step} is not minimal")
    if seen != reference:
        return GrayReport(False, len(sequence), f"covers {len(seen & reference)} of {len(reference)}")
    return GrayReport(True)


# --- カウント表 ---

@dataclass(frozen=True)
class FixtureDefinition:
    """パッケージ同梱の数え上げ定義。数列そのものは全探索で導出します。"""
    id: str
    pattern: str
    oeis: str
    max_n: int = 6


@dataclass(frozen=True)
class CountFixture:
    id: str
    pattern: str
    oeis: str
    counts: Sequence[int]
    source: str = "DERIVED"

    def __post_init__(self):
        if len(self.counts) < 4 or any(c <= 0 for c in self.counts):
            raise VerificationError(f"{self.id}: 数列は長さ 4 以上の正の整数列でなければなりません。")


def load_fixture_definitions() -> List[FixtureDefinition]:
    """zigzag_jump.fixtures 内の count_fixtures.json を読み込みます。"""
    resource = files("zigzag_jump.fixtures") / "count_fixtures.json"
    verify_logger.info(f"Loading count fixtures from: {resource}")
    raw = json.loads(resource.read_text(encoding="utf-8"))
    return [FixtureDefinition(**entry) for entry in raw]


@dataclass
class CountRow:
    fixture: str
    n: int
    expected: Optional[int]
    brute: int
    generated: int

    @property
    def ok(self) -> bool:
        return self.brute == self.generated and self.expected in (None, self.brute)


@dataclass
class CountReport:
    rows: List[CountRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(row.ok for row in self.rows)

    def to_json(self) -> str:
        return json.dumps([dict(asdict(row), ok=row.ok) for row in self.rows], indent=2)

    def to_table(self) -> str:
        lines = ["fixture\tn\texpected\tbrute\tgenerated\tok"]
        for row in self.rows:
            expected = "-" if row.expected is None else str(row.expected)
            lines.append(
                f"{row.fixture}\t{row.n}\t{expected}\t{row.brute}\t{row.generated}\t{'ok' if row.ok else 'MISMATCH'}"
            )
        return "\n".join(lines)


def count_suite(
    fixtures: Sequence[CountFixture],
    formulas: Dict[str, PatternFormula],
    generate: Callable[[PatternFormula, int], int],
    max_n: int,
) -> CountReport:
    """
    各フィクスチャについて、期待値・全探索の件数・生成列の長さを n = 1..max_n で比べます。
    generate は (式, n) から生成列の長さを返す関数です。
    """
    report = CountReport()
    for fixture in fixtures:
        formula = formulas[fixture.id]
        for n in range(1, max_n + 1):
            expected = fixture.counts[n - 1] if n <= len(fixture.counts) else None
            row = CountRow(fixture.id, n, expected, len(brute_enumerate(formula, n)), generate(formula, n))
            if not row.ok:
                verify_logger.warning(f"件数の不一致: {row}")
            report.rows.append(row)
    return report


def derive_fixture(definition: FixtureDefinition, formula: PatternFormula) -> CountFixture:
    counts = [len(brute_enumerate(formula, n)) for n in range(1, definition.max_n + 1)]
    return CountFixture(definition.id, definition.pattern, definition.oeis, tuple(counts))

