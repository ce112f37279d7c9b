"""
パターンの「tame」判定。

tame なパターン (およびその AND/OR) を回避する置換の集合はジグザグ言語になり、
Algorithm J で網羅生成できます。メッシュパターンには 4 条件の判定、グリッド行列には
左上・右上成分の判定、各パターン族には族ごとの簡易判定を提供します。
"""
import logging
from dataclasses import dataclass
from dataclasses import field
from enum import Enum
from functools import singledispatch
from typing import Any
from typing import Dict
from typing import List
from typing import Optional
from typing import Tuple

from .patterns import families
from .patterns.compilers import consecutive_run
from .patterns.formula import CountedPattern
from .patterns.formula import GridAtom
from .patterns.formula import Or
from .patterns.formula import PatternFormula
from .patterns.formula import leaves
from .patterns.mesh import MeshPattern
from .patterns.mesh import PatternError

# ロギング設定
tame_logger = logging.getLogger(__name__)
tame_logger.addHandler(logging.NullHandler())


class Verdict(str, Enum):
    TAME = "Tame"
    NOT_TAME = "NotTame"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ConditionResult:
    """判定条件ひとつ分の結果。passed が None なら未評価。"""
    name: str
    passed: Optional[bool]
    witness: Optional[Any] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"condition": self.name, "passed": self.passed, "witness": _plain(self.witness)}


@dataclass(frozen=True)
class TameReport:
    subject: str
    verdict: Verdict
    conditions: Tuple[ConditionResult, ...] = ()
    # 必要条件 (i)(ii) は満たし、十分条件 (iii)(iv) のみ満たさない場合に True
    incomplete: bool = False
    reason: str = ""
    children: Tuple["TameReport", ...] = field(default_factory=tuple)

    @property
    def is_tame(self) -> bool:
        return self.verdict is Verdict.TAME

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "verdict": self.verdict.value,
            "incomplete": self.incomplete,
            "reason": self.reason,
            "conditions": [c.to_dict() for c in self.conditions],
            "children": [c.to_dict() for c in self.children],
        }

    def to_text(self, indent: int = 0) -> str:
        pad = "  " * indent
        head = f"{pad}{self.subject}: {self.verdict.value}"
        if self.incomplete:
            head += " (sufficient conditions only)"
        if self.reason:
            head += f" - {self.reason}"
        lines = [head]
        for condition in self.conditions:
            mark = {True: "ok", False: "FAIL", None: "-"}[condition.passed]
            suffix = f" at {_plain(condition.witness)}" if condition.witness is not None else ""
            lines.append(f"{pad}  [{mark}] {condition.name}{suffix}")
        for child in self.children:
            lines.append(child.to_text(indent + 1))
        return "\n".join(lines)


def _plain(value: Any) -> Any:
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    return value


def _mesh_subject(pattern: MeshPattern) -> str:
    cells = ",".join(f"({i},{j})" for i, j in pattern.sorted_cells())
    return f"mesh({pattern.tau.compact()}; {{{cells}}})"


# --- メッシュパターン ---

def check_mesh(pattern: MeshPattern) -> TameReport:
    """
    τ の最大値 k の位置を i として、次の 4 条件で判定します。
      (i)   i は 1 でも k でもない
      (ii)  a ∉ {i-1, i} なる (a, k) は網掛けされていない
      (iii) (i-1, k) が網掛けなら、a ≠ i-1 の (a, k-1) は網掛けされず、
            0 <= b <= k-2 について (i, b) ∈ C ⇒ (i-1, b) ∈ C
      (iv)  (i, k) が網掛けなら、a ≠ i の (a, k-1) は網掛けされず、
            0 <= b <= k-2 について (i-1, b) ∈ C ⇒ (i, b) ∈ C
    """
    subject = _mesh_subject(pattern)
    k = pattern.k
    if k < 3:
        return TameReport(subject, Verdict.UNKNOWN, reason=f"pattern length {k} < 3")

    cells = pattern.cells
    i = pattern.tau.position_of(k)

    cond_i = ConditionResult("(i) maximum not at boundary", 1 < i < k, None if 1 < i < k else i)

    top_offender = next((a for a in range(k + 1) if (a, k) in cells and a not in (i - 1, i)), None)
    cond_ii = ConditionResult(
        "(ii) top row shaded only next to maximum",
        top_offender is None,
        None if top_offender is None else (top_offender, k),
    )

    cond_iii = _side_condition("(iii) left of maximum", cells, k, anchor=i - 1, other=i)
    cond_iv = _side_condition("(iv) right of maximum", cells, k, anchor=i, other=i - 1)

    conditions = (cond_i, cond_ii, cond_iii, cond_iv)
    if not (cond_i.passed and cond_ii.passed):
        return TameReport(subject, Verdict.NOT_TAME, conditions, reason="necessary condition fails")
    if not (cond_iii.passed and cond_iv.passed):
        return TameReport(
            subject, Verdict.NOT_TAME, conditions, incomplete=True, reason="sufficient condition fails"
        )
    return TameReport(subject, Verdict.TAME, conditions)


def _side_condition(name: str, cells, k: int, anchor: int, other: int) -> ConditionResult:
    if (anchor, k) not in cells:
        return ConditionResult(name, True)
    for a in range(k + 1):
        if a != anchor and (a, k - 1) in cells:
            return ConditionResult(name, False, (a, k - 1))
    for b in range(k - 1):
        if (other, b) in cells and (anchor, b) not in cells:
            return ConditionResult(name, False, ((other, b), (anchor, b)))
    return ConditionResult(name, True)


# --- グリッド行列 ---

def check_grid(atom: GridAtom) -> TameReport:
    """左上成分が -1 かつ右上成分が +1 のとき、かつそのときに限り tame。"""
    rows = atom.rows_top_to_bottom()
    matrix = ";".join(",".join(f"{v:+d}" if v else "0" for v in row) for row in rows)
    subject = f"{atom.kind.value}([{matrix}])"
    top_left, top_right = rows[0][0], rows[0][-1]
    conditions = (
        ConditionResult("top-left entry is -1", top_left == -1, None if top_left == -1 else top_left),
        ConditionResult("top-right entry is +1", top_right == 1, None if top_right == 1 else top_right),
    )
    verdict = Verdict.TAME if all(c.passed for c in conditions) else Verdict.NOT_TAME
    return TameReport(subject, verdict, conditions)


# --- 式全体 ---

def check_leaf(leaf) -> TameReport:
    if isinstance(leaf, CountedPattern):
        report = check_mesh(leaf.pattern)
        if leaf.cap:
            return TameReport(
                f"count({report.subject}, {leaf.cap})",
                report.verdict,
                report.conditions,
                report.incomplete,
                report.reason,
            )
        return report
    if isinstance(leaf, GridAtom):
        return check_grid(leaf)
    raise PatternError(f"未知の葉です: {leaf!r}")


def check_formula(formula: PatternFormula) -> TameReport:
    """すべての葉が tame なら Tame。tame でない葉があれば NotTame、残りは Unknown。"""
    children = tuple(check_leaf(leaf) for leaf in leaves(formula))
    kind = "or" if isinstance(formula, Or) else "and"
    subject = f"{kind}[{len(children)} leaves]"
    if not children:
        return TameReport(subject, Verdict.TAME, reason="no constraint", children=children)
    failing = [c for c in children if c.verdict is Verdict.NOT_TAME]
    if failing:
        incomplete = all(c.incomplete for c in failing)
        verdict = Verdict.NOT_TAME
        reason = f"{len(failing)} of {len(children)} leaves not tame"
    elif any(c.verdict is Verdict.UNKNOWN for c in children):
        incomplete, verdict, reason = False, Verdict.UNKNOWN, "some leaves undecided"
    else:
        incomplete, verdict, reason = False, Verdict.TAME, ""
    tame_logger.debug(f"式の判定: {verdict.value} ({reason or 'all leaves tame'})")
    return TameReport(subject, verdict, incomplete=incomplete, reason=reason, children=children)


def is_tame(formula: PatternFormula) -> bool:
    return check_formula(formula).is_tame


# --- 族ごとの簡易判定 ---

def _max_interior(tau) -> Tuple[bool, int]:
    i = tau.position_of(tau.n)
    return 1 < i < tau.n, i


def _report(subject: str, minimum_k: int, k: int, conditions: List[ConditionResult]) -> TameReport:
    if k < minimum_k:
        return TameReport(subject, Verdict.UNKNOWN, tuple(conditions), reason=f"pattern length {k} < {minimum_k}")
    verdict = Verdict.TAME if all(c.passed for c in conditions) else Verdict.NOT_TAME
    return TameReport(subject, verdict, tuple(conditions))


def _interior_condition(tau) -> ConditionResult:
    ok, i = _max_interior(tau)
    return ConditionResult("maximum not at boundary", ok, None if ok else i)


@singledispatch
def lemma_shortcuts(family) -> TameReport:
    """族に固有の簡易判定。固有の判定がない族はコンパイル結果を check_formula で判定します。"""
    report = check_formula(family.compile(blowup_cap=10**9))
    return TameReport(type(family).__name__.lower(), report.verdict, report.conditions,
                      report.incomplete, report.reason, report.children)


@lemma_shortcuts.register
def _(family: families.Classical) -> TameReport:
    return _report(f"cl({family.tau.compact()})", 3, family.tau.n, [_interior_condition(family.tau)])


@lemma_shortcuts.register
def _(family: families.Boxed) -> TameReport:
    return _report(f"box({family.tau.compact()})", 3, family.tau.n, [_interior_condition(family.tau)])


@lemma_shortcuts.register
def _(family: families.Bruhat) -> TameReport:
    return _report(f"bruhat({family.tau.compact()})", 3, family.tau.n, [_interior_condition(family.tau)])


def _vincular_conditions(tau, position: int) -> List[ConditionResult]:
    _, i = _max_interior(tau)
    in_pair = i in (position, position + 1)
    return [
        _interior_condition(tau),
        ConditionResult("maximum inside adjacency", in_pair, None if in_pair else i),
    ]


@lemma_shortcuts.register
def _(family: families.Vincular) -> TameReport:
    tau = family.tau
    return _report(f"vinc({tau.compact()};{family.position})", 3, tau.n,
                   _vincular_conditions(tau, family.position))


@lemma_shortcuts.register
def _(family: families.Bivincular) -> TameReport:
    tau = family.tau
    conditions = _vincular_conditions(tau, family.position)
    row_free = (tau.n - 1) not in family.rows
    conditions.append(ConditionResult("row k-1 not adjacent-valued", row_free, None if row_free else tau.n - 1))
    return _report(f"bivinc({tau.compact()};{family.position})", 3, tau.n, conditions)


@lemma_shortcuts.register
def _(family: families.Barred) -> TameReport:
    """
    τ⁻ の最大値が端になく、最大のバー付き要素が k 未満か k-1 の隣の位置にあること。
    """
    tau_prime = family.tau_prime
    k = tau_prime.n
    subject = f"bar({tau_prime.compact()}; {sorted(family.bars)})"
    kept = [v for pos, v in enumerate(tau_prime.entries, start=1) if pos not in family.bars]
    largest_kept = max(kept) if kept else 0
    kept_position = kept.index(largest_kept) + 1 if kept else 0
    interior = 1 < kept_position < len(kept)
    largest_bar = max(family.bars, key=tau_prime.value_at)
    bar_value = tau_prime.value_at(largest_bar)
    beside = abs(largest_bar - tau_prime.position_of(k - 1)) == 1 if k > 1 else False
    bar_ok = bar_value < k or beside
    conditions = [
        ConditionResult("unbarred maximum not at boundary", interior, None if interior else kept_position),
        ConditionResult("largest bar below k or beside k-1", bar_ok, None if bar_ok else largest_bar),
    ]
    minimum = 4 if len(family.bars) == 1 else 5
    return _report(subject, minimum, k, conditions)


@lemma_shortcuts.register
def _(family: families.PartialOrder) -> TameReport:
    pop = family.pop
    maximal = pop.maximal_elements()
    ok_low, ok_high = 1 not in maximal, pop.k not in maximal
    conditions = [
        ConditionResult("1 is not maximal", ok_low, None if ok_low else 1),
        ConditionResult("k is not maximal", ok_high, None if ok_high else pop.k),
    ]
    return _report(str(pop), 3, pop.k, conditions)


@lemma_shortcuts.register
def _(family: families.Dotted) -> TameReport:
    """k が端になく、k を含む連続値区間の要素がすべて点付きであること (十分条件)。"""
    tau = family.tau
    k = tau.n
    subject = f"dot({tau.compact()}; {sorted(family.dots)})"
    if k < 3:
        return _report(subject, 3, k, [])
    r, s = consecutive_run(tau, tau.position_of(k))
    undotted = next((p for p in range(r, s + 1) if p not in family.dots), None)
    conditions = [
        _interior_condition(tau),
        ConditionResult("run through maximum fully dotted", undotted is None, undotted),
    ]
    report = _report(subject, 3, k, conditions)
    if report.verdict is Verdict.NOT_TAME and conditions[0].passed:
        # 十分条件のみなので、外れた場合は判定を保留する
        return TameReport(subject, Verdict.UNKNOWN, report.conditions, reason="shortcut does not apply")
    return report


@lemma_shortcuts.register
def _(family: families.Grid) -> TameReport:
    return check_grid(family.atom)


@lemma_shortcuts.register
def _(family: families.Counted) -> TameReport:
    inner = lemma_shortcuts(family.family)
    return TameReport(f"count({inner.subject}, {family.cap})", inner.verdict, inner.conditions,
                      inner.incomplete, inner.reason, inner.children)
