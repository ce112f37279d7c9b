import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from dataclasses import field
from typing import Any
from typing import Callable
from typing import Dict
from typing import Iterable
from typing import List
from typing import Optional

from .cli.dsl import DslExpr
from .cli.dsl import compile_expr
from .cli.dsl import emit
from .cli.dsl import parse
from .cli.dsl import term_families
from .decode import DecodeError
from .decode import perm_to_bits
from .decode import perm_to_setpart
from .decode import perm_to_tree
from .decode import tree_to_dyck
from .engine import FormulaOracle
from .engine import GenStatus
from .engine import annotate
from .engine import generate_greedy
from .engine import generate_ordered
from .engine import is_cyclic
from .patterns.formula import PatternFormula
from .patterns.transforms import Transform
from .patterns.transforms import transform_formula
from .perm_core import JumpStep
from .perm_core import Permutation
from .tame import TameReport
from .tame import check_formula
from .tame import lemma_shortcuts
from .verify import CountReport
from .verify import VerificationLimitError
from .verify import brute_enumerate
from .verify import count_suite
from .verify import derive_fixture
from .verify import is_hereditary
from .verify import is_zigzag
from .verify import load_fixture_definitions

# ロガー設定
core_logger = logging.getLogger(__name__)
core_logger.addHandler(logging.NullHandler())


# --- Custom Exceptions ---
class JumpCoreError(Exception):
    """コア処理関連のエラーベースクラス。"""
    pass


class NotTameError(JumpCoreError):
    """順序付き生成に tame でない式が渡された時のエラー (--force で回避可能)。"""
    def __init__(self, report: TameReport):
        super().__init__(f"パターンが tame ではありません: {report.verdict.value} ({report.reason})")
        self.report = report


@dataclass(frozen=True)
class CompiledPattern:
    source: str
    expr: DslExpr
    formula: PatternFormula


@dataclass(frozen=True)
class GenRecord:
    index: int
    perm: Permutation
    jump: Optional[JumpStep]
    obj: Optional[str] = None

    def to_json(self) -> str:
        jump = None
        if self.jump is not None:
            jump = {"value": self.jump.value, "dir": self.jump.direction.value, "steps": self.jump.steps}
        return json.dumps({"index": self.index, "perm": list(self.perm.entries), "jump": jump, "object": self.obj})


@dataclass
class GenerationOutcome:
    records: List[GenRecord]
    # ordered モードでは None
    status: Optional[GenStatus] = None


@dataclass(frozen=True)
class CountLine:
    n: int
    brute: Optional[int]
    generated: Optional[int]

    @property
    def agrees(self) -> bool:
        return self.brute is None or self.generated is None or self.brute == self.generated


@dataclass
class CheckOutcome:
    kind: str
    holds: bool
    text: str
    data: Dict[str, Any] = field(default_factory=dict)


_DECODERS: Dict[str, Callable[[Permutation], Any]] = {
    "bits": perm_to_bits,
    "tree": perm_to_tree,
    "dyck": lambda pi: tree_to_dyck(perm_to_tree(pi)),
    "setpart": perm_to_setpart,
}


# --- JumpCore Class ---
class JumpCore:
    """
    DSL の解析、tame 判定、生成、デコード、全探索による検証を統合するコアクラス。
    """
    _ALLOWED_DECODERS = set(_DECODERS)
    _ALLOWED_CHECKS = {"tame", "zigzag", "hereditary", "cyclic"}
    _ALLOWED_METHODS = {"brute", "gen", "both"}

    def __init__(self,
                 blowup_cap: int,
                 verify_max_n: int,
                 timeout_seconds: float,
                 decode_check_max_n: int,
                 threads: int = 1):
        self.blowup_cap = blowup_cap
        self.verify_max_n = verify_max_n
        self.timeout_seconds = timeout_seconds
        self.decode_check_max_n = decode_check_max_n
        self.threads = max(1, threads)
        core_logger.info("JumpCore initialized.")

    # --- パターン ---
    def compile_pattern(self, source: str) -> CompiledPattern:
        expr = parse(source)
        formula = compile_expr(expr, self.blowup_cap)
        core_logger.info(f"パターンをコンパイルしました: {source}")
        return CompiledPattern(source, expr, formula)

    def tame_report(self, compiled: CompiledPattern) -> TameReport:
        """式全体の判定に、族ごとの簡易判定を子として添えたレポート。"""
        report = check_formula(compiled.formula)
        shortcuts = tuple(lemma_shortcuts(family) for family, _ in term_families(compiled.expr))
        return TameReport(report.subject, report.verdict, report.conditions, report.incomplete,
                          report.reason, report.children + shortcuts)

    def transform(self, op: str, compiled: CompiledPattern) -> str:
        return emit(transform_formula(Transform(op), compiled.formula))

    # --- 生成 ---
    def _decoder(self, decode: Optional[str]) -> Optional[Callable[[Permutation], Any]]:
        if decode is None:
            return None
        if decode not in self._ALLOWED_DECODERS:
            raise ValueError(f"Invalid decoder: '{decode}'. Allowed decoders are: {', '.join(sorted(self._ALLOWED_DECODERS))}")
        return _DECODERS[decode]

    def check_decode_domain(self, formula: PatternFormula, n: int, decode: str) -> None:
        """L_n がデコーダの定義域に含まれるかを、上限以下の n で全探索により確かめます。"""
        decoder = self._decoder(decode)
        if n > self.decode_check_max_n:
            core_logger.warning(f"n={n} は上限 {self.decode_check_max_n} を超えるため定義域の確認を省略します。")
            return
        for pi in sorted(brute_enumerate(formula, n, threads=self.threads), key=lambda p: p.entries):
            try:
                decoder(pi)
            except DecodeError as e:
                raise DecodeError(f"言語がデコーダ '{decode}' の定義域に含まれません: {e}") from e

    def _records(self, sequence: Iterable[Permutation], decode: Optional[str]) -> List[GenRecord]:
        decoder = self._decoder(decode)
        records = []
        for index, (pi, step) in enumerate(annotate(sequence)):
            obj = str(decoder(pi)) if decoder is not None else None
            records.append(GenRecord(index, pi, step, obj))
        return records

    def run_ordered(self, compiled: CompiledPattern, n: int, decode: Optional[str] = None,
                    force: bool = False) -> GenerationOutcome:
        report = check_formula(compiled.formula)
        if not report.is_tame:
            if not force:
                raise NotTameError(report)
            core_logger.warning(f"tame でない式で順序付き生成を強制します: {report.reason}")
        if decode is not None:
            self.check_decode_domain(compiled.formula, n, decode)
        oracle = FormulaOracle(compiled.formula, n)
        records = self._records(generate_ordered(oracle, n), decode)
        core_logger.info(f"順序付き生成が完了しました: {len(records)} 件")
        return GenerationOutcome(records)

    def run_greedy(self, compiled: CompiledPattern, n: int, seed: Optional[Permutation] = None,
                   decode: Optional[str] = None, limit: Optional[int] = None) -> GenerationOutcome:
        if decode is not None:
            self.check_decode_domain(compiled.formula, n, decode)
        oracle = FormulaOracle(compiled.formula, n)
        result = generate_greedy(oracle, n, seed=seed, limit=limit)
        return GenerationOutcome(self._records(result.sequence, decode), result.status)

    # --- 数え上げ ---
    def _count_generated(self, formula: PatternFormula, n: int) -> int:
        return sum(1 for _ in generate_ordered(FormulaOracle(formula, n), n))

    def _count_brute(self, formula: PatternFormula, n: int) -> int:
        return len(brute_enumerate(formula, n, threads=self.threads, timeout_seconds=self.timeout_seconds))

    def count(self, compiled: CompiledPattern, ns: Iterable[int], method: str) -> List[CountLine]:
        if method not in self._ALLOWED_METHODS:
            raise ValueError(f"Invalid method: '{method}'. Allowed methods are: {', '.join(sorted(self._ALLOWED_METHODS))}")
        formula = compiled.formula
        lines = []
        for n in ns:
            brute = generated = None
            if method == "both" and self.threads > 1:
                with ThreadPoolExecutor(max_workers=2) as pool:
                    brute_future = pool.submit(self._count_brute, formula, n)
                    generated_future = pool.submit(self._count_generated, formula, n)
                    brute, generated = brute_future.result(), generated_future.result()
            else:
                if method in ("brute", "both"):
                    brute = self._count_brute(formula, n)
                if method in ("gen", "both"):
                    generated = self._count_generated(formula, n)
            line = CountLine(n, brute, generated)
            if not line.agrees:
                core_logger.error(f"n={n} で件数が一致しません: brute={brute}, gen={generated}")
            lines.append(line)
        return lines

    def run_suite(self, max_n: int) -> CountReport:
        """同梱のフィクスチャ定義すべてについて数え上げ表を作ります。"""
        if max_n > self.verify_max_n:
            raise VerificationLimitError(f"n={max_n} は検証の上限 {self.verify_max_n} を超えています。")
        definitions = load_fixture_definitions()
        formulas = {d.id: self.compile_pattern(d.pattern).formula for d in definitions}
        fixtures = [derive_fixture(d, formulas[d.id]) for d in definitions]
        return count_suite(fixtures, formulas, self._count_generated, max_n)

    # --- 性質の確認 ---
    def run_check(self, kind: str, compiled: CompiledPattern, n: Optional[int]) -> CheckOutcome:
        if kind not in self._ALLOWED_CHECKS:
            raise ValueError(f"Invalid check: '{kind}'. Allowed checks are: {', '.join(sorted(self._ALLOWED_CHECKS))}")
        if kind == "tame":
            report = self.tame_report(compiled)
            return CheckOutcome(kind, report.is_tame, report.to_text(), report.to_dict())
        if n is None:
            raise ValueError(f"check {kind} には -n が必要です。")
        if kind == "cyclic":
            oracle = FormulaOracle(compiled.formula, n)
            holds = is_cyclic(oracle, n)
            sizes = {i: oracle.size(i) for i in range(2, n)}
            text = f"{'cyclic' if holds else 'not cyclic'} (|L_i| for 2<=i<n: {sizes})"
            return CheckOutcome(kind, holds, text, {"cyclic": holds, "sizes": sizes})
        checker = is_zigzag if kind == "zigzag" else is_hereditary
        report = checker(compiled.formula, n, max_n=self.verify_max_n)
        if report.ok:
            text = f"{kind}: true"
        else:
            witness = report.witness.compact() if report.witness is not None else "-"
            text = f"{kind}: false (witness {witness}: {report.detail})"
        return CheckOutcome(kind, report.ok, text, report.to_dict())
