"""
パターン DSL の字句解析・構文解析・コンパイル・正規形出力。

    expr      := "all" | "none" | term | "and(" expr ("," expr)+ ")" | "or(" expr ("," expr)+ ")"
               | ("rev"|"cpl"|"inv"|"rot") "(" expr ")"
    term      := "cl(" perm ")" | "vinc(" perm ";" pos ")" | "bivinc(" perm ";" pos ";" intset ")"
               | "bar(" perm ")" | "box(" perm ")" | "bruhat(" perm ";" pairs ")"
               | "mesh(" perm ";" pairs ")" | "pop(" k ";" relations ")" | "dot(" perm ")"
               | "weakbar(" perm ")" | "grid(" matrix ")" | "geo(" matrix ")" | "count(" term "," int ")"

perm の要素は {3} でバー、<3> で点を表します。matrix は [-1,+1;+1,-1] のように上の行から並べます。
"""
import logging
import re
from dataclasses import dataclass
from typing import List
from typing import Optional
from typing import Set
from typing import Tuple
from typing import Union

from ..patterns import families
from ..patterns.formula import And
from ..patterns.formula import CountedPattern
from ..patterns.formula import GridAtom
from ..patterns.formula import GridKind
from ..patterns.formula import Or
from ..patterns.formula import PatternFormula
from ..patterns.mesh import MeshPattern
from ..patterns.mesh import PatternError
from ..patterns.pop import Pop
from ..patterns.transforms import Transform
from ..patterns.transforms import transform_formula
from ..perm_core import Permutation
from ..perm_core import PermutationError

# ロギング設定
dsl_logger = logging.getLogger(__name__)
dsl_logger.addHandler(logging.NullHandler())

Span = Tuple[int, int]


# --- Custom Exceptions ---
class DslError(Exception):
    """DSL 関連のエラーベースクラス。span は入力中の (開始, 終了) 位置。"""
    def __init__(self, message: str, span: Span):
        super().__init__(f"{message} (at {span[0]}..{span[1]})")
        self.span = span
        self.detail = message


class DslSyntaxError(DslError):
    pass


class DslSemanticError(DslError):
    pass


# --- 構文木 ---

@dataclass(frozen=True)
class AllExpr:
    span: Span


@dataclass(frozen=True)
class NoneExpr:
    span: Span


@dataclass(frozen=True)
class AndExpr:
    children: Tuple["DslExpr", ...]
    span: Span


@dataclass(frozen=True)
class OrExpr:
    children: Tuple["DslExpr", ...]
    span: Span


@dataclass(frozen=True)
class TransformExpr:
    op: Transform
    child: "DslExpr"
    span: Span


@dataclass(frozen=True)
class TermExpr:
    family: families.Family
    span: Span


DslExpr = Union[AllExpr, NoneExpr, AndExpr, OrExpr, TransformExpr, TermExpr]


# --- 字句解析 ---

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>[+-]?\d+)|(?P<name>[a-z]+)|(?P<punct>[(),;{}<>\[\]]))")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    start: int
    end: int


def _tokenize(src: str) -> List[_Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        match = _TOKEN_RE.match(src, pos)
        if match is None:
            start = len(src) - len(src[pos:].lstrip())
            raise DslSyntaxError(f"解釈できない文字 '{src[start]}'", (start, start + 1))
        kind = match.lastgroup
        tokens.append(_Token(kind, match.group(kind), match.start(kind), match.end()))
        pos = match.end()
    tokens.append(_Token("eof", "", len(src), len(src)))
    return tokens


_TERM_NAMES = {"cl", "vinc", "bivinc", "bar", "box", "bruhat", "mesh", "pop", "dot", "weakbar", "grid", "geo", "count"}


class _Parser:

    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.index = 0

    # --- トークン操作 ---
    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def _advance(self) -> _Token:
        token = self.current
        self.index += 1
        return token

    def _expect(self, text: str) -> _Token:
        token = self.current
        if token.text != text:
            found = token.text or "end of input"
            raise DslSyntaxError(f"'{text}' が必要ですが '{found}' がありました", (token.start, token.end))
        return self._advance()

    def _accept(self, text: str) -> bool:
        if self.current.text == text:
            self._advance()
            return True
        return False

    def _int(self) -> int:
        token = self.current
        if token.kind != "int":
            found = token.text or "end of input"
            raise DslSyntaxError(f"整数が必要ですが '{found}' がありました", (token.start, token.end))
        self._advance()
        return int(token.text)

    # --- 文法 ---
    def parse(self) -> "DslExpr":
        expr = self._expr()
        if self.current.kind != "eof":
            raise DslSyntaxError(f"余分な入力 '{self.current.text}'", (self.current.start, self.current.end))
        return expr

    def _expr(self) -> "DslExpr":
        token = self.current
        if token.kind != "name":
            found = token.text or "end of input"
            raise DslSyntaxError(f"式が必要ですが '{found}' がありました", (token.start, token.end))
        if token.text == "all":
            self._advance()
            return AllExpr((token.start, token.end))
        if token.text == "none":
            self._advance()
            return NoneExpr((token.start, token.end))
        if token.text in ("and", "or"):
            self._advance()
            self._expect("(")
            children = [self._expr()]
            while self._accept(","):
                children.append(self._expr())
            end = self._expect(")").end
            if len(children) < 2:
                raise DslSyntaxError(f"{token.text}() には 2 つ以上の式が必要です", (token.start, end))
            node = AndExpr if token.text == "and" else OrExpr
            return node(tuple(children), (token.start, end))
        if token.text in {t.value for t in Transform}:
            self._advance()
            self._expect("(")
            child = self._expr()
            end = self._expect(")").end
            return TransformExpr(Transform(token.text), child, (token.start, end))
        return self._term()

    def _term(self) -> TermExpr:
        token = self._advance()
        if token.kind != "name" or token.text not in _TERM_NAMES:
            raise DslSyntaxError(f"未知のパターン族 '{token.text}'", (token.start, token.end))
        self._expect("(")
        start = token.start
        try:
            family = getattr(self, f"_family_{token.text}")()
            end = self._expect(")").end
        except (PatternError, PermutationError) as e:
            end = self.current.end
            raise DslSemanticError(str(e), (start, end)) from e
        return TermExpr(family, (start, end))

    def _marked_perm(self) -> Tuple[Permutation, Set[int], Set[int]]:
        """要素列を読み、(置換, バー位置, 点位置) を返します。"""
        values, bars, dots = [], set(), set()
        while True:
            position = len(values) + 1
            if self._accept("{"):
                values.append(self._int())
                self._expect("}")
                bars.add(position)
            elif self._accept("<"):
                values.append(self._int())
                self._expect(">")
                dots.add(position)
            else:
                values.append(self._int())
            if not self._accept(","):
                break
        return Permutation(tuple(values)), bars, dots

    def _plain_perm(self) -> Permutation:
        token = self.current
        tau, bars, dots = self._marked_perm()
        if bars or dots:
            raise DslSyntaxError("この族ではバーや点は使えません", (token.start, self.current.start))
        return tau

    def _int_set(self) -> Set[int]:
        values: Set[int] = set()
        braced = self._accept("{")
        if self.current.kind == "int":
            values.add(self._int())
            while self._accept(","):
                values.add(self._int())
        if braced:
            self._expect("}")
        return values

    def _pairs(self) -> Set[Tuple[int, int]]:
        pairs: Set[Tuple[int, int]] = set()
        while self._accept("("):
            first = self._int()
            self._expect(",")
            second = self._int()
            self._expect(")")
            pairs.add((first, second))
            if not self._accept(","):
                break
        return pairs

    def _matrix(self) -> List[Tuple[int, ...]]:
        self._expect("[")
        rows = [[self._int()]]
        while True:
            if self._accept(","):
                rows[-1].append(self._int())
            elif self._accept(";"):
                rows.append([self._int()])
            else:
                break
        self._expect("]")
        return [tuple(row) for row in rows]

    # --- 各族 ---
    def _family_cl(self):
        return families.Classical(self._plain_perm())

    def _family_vinc(self):
        tau = self._plain_perm()
        self._expect(";")
        return families.Vincular(tau, self._int())

    def _family_bivinc(self):
        tau = self._plain_perm()
        self._expect(";")
        position = self._int()
        self._expect(";")
        return families.Bivincular(tau, position, frozenset(self._int_set()))

    def _family_bar(self):
        tau, bars, dots = self._marked_perm()
        if dots:
            raise PatternError("bar() では点は使えません。")
        return families.Barred(tau, frozenset(bars))

    def _family_weakbar(self):
        tau, bars, dots = self._marked_perm()
        if dots or len(bars) != 1:
            raise PatternError("weakbar() にはバー付き要素がちょうど 1 つ必要です。")
        return families.WeakBarred(tau, next(iter(bars)))

    def _family_dot(self):
        tau, bars, dots = self._marked_perm()
        if bars:
            raise PatternError("dot() ではバーは使えません。")
        return families.Dotted(tau, frozenset(dots))

    def _family_box(self):
        return families.Boxed(self._plain_perm())

    def _family_bruhat(self):
        tau = self._plain_perm()
        self._expect(";")
        return families.Bruhat(tau, frozenset(self._pairs()))

    def _family_mesh(self):
        tau = self._plain_perm()
        self._expect(";")
        return families.Mesh(MeshPattern(tau, frozenset(self._pairs())))

    def _family_pop(self):
        k = self._int()
        self._expect(";")
        relations = set()
        while self.current.kind == "int":
            first = self._int()
            if self._accept("<"):
                relations.add((first, self._int()))
            else:
                self._expect(">")
                relations.add((self._int(), first))
            if not self._accept(","):
                break
        return families.PartialOrder(Pop(k, frozenset(relations)))

    def _family_grid(self):
        return families.Grid(GridAtom.from_rows(self._matrix(), GridKind.GRID))

    def _family_geo(self):
        return families.Grid(GridAtom.from_rows(self._matrix(), GridKind.GEO))

    def _family_count(self):
        inner = self._term()
        self._expect(",")
        return families.Counted(inner.family, self._int())


def parse(src: str) -> DslExpr:
    """DSL 文字列を構文木に変換します。"""
    expr = _Parser(src).parse()
    dsl_logger.debug(f"DSL を解析しました: {src}")
    return expr


def compile_expr(expr: DslExpr, blowup_cap: int) -> PatternFormula:
    """構文木をパターン式に変換します (変換ノードは葉に適用済みの式になります)。"""
    if isinstance(expr, AllExpr):
        return And(())
    if isinstance(expr, NoneExpr):
        return Or(())
    if isinstance(expr, AndExpr):
        return And(tuple(compile_expr(child, blowup_cap) for child in expr.children))
    if isinstance(expr, OrExpr):
        return Or(tuple(compile_expr(child, blowup_cap) for child in expr.children))
    if isinstance(expr, TransformExpr):
        return transform_formula(expr.op, compile_expr(expr.child, blowup_cap))
    try:
        return expr.family.compile(blowup_cap)
    except PatternError as e:
        raise DslSemanticError(str(e), expr.span) from e


def term_families(expr: DslExpr) -> List[Tuple[families.Family, Span]]:
    """構文木に現れる族の項を左から順に列挙します (変換の内側も含む)。"""
    if isinstance(expr, TermExpr):
        return [(expr.family, expr.span)]
    if isinstance(expr, (AndExpr, OrExpr)):
        return [item for child in expr.children for item in term_families(child)]
    if isinstance(expr, TransformExpr):
        return term_families(expr.child)
    return []


# --- 正規形の出力 ---

def _perm_text(tau: Permutation, bar: Optional[int] = None) -> str:
    parts = []
    for position, value in enumerate(tau.entries, start=1):
        parts.append(f"{{{value}}}" if position == bar else str(value))
    return ",".join(parts)


def _as_barred(pattern: MeshPattern) -> str:
    (a, b), = pattern.cells
    # 値 b+1 を位置 a+1 に挿入し、それ以上の値を一つずらす
    shifted = [v + 1 if v > b else v for v in pattern.tau.entries]
    shifted.insert(a, b + 1)
    return f"bar({_perm_text(Permutation(tuple(shifted)), bar=a + 1)})"


def emit_mesh(pattern: MeshPattern) -> str:
    k = pattern.k
    tau = _perm_text(pattern.tau)
    cells = pattern.cells
    if not cells:
        return f"cl({tau})"
    for a in range(1, k):
        if cells == frozenset((a, j) for j in range(k + 1)):
            return f"vinc({tau};{a})"
    if len(cells) == 1:
        return _as_barred(pattern)
    if cells == frozenset((i, j) for i in range(1, k) for j in range(1, k)):
        return f"box({tau})"
    listed = ",".join(f"({i},{j})" for i, j in pattern.sorted_cells())
    return f"mesh({tau};{listed})"


def emit(formula: PatternFormula) -> str:
    """パターン式を正規形の DSL 文字列にします。"""
    if isinstance(formula, CountedPattern):
        base = emit_mesh(formula.pattern)
        return f"count({base},{formula.cap})" if formula.cap else base
    if isinstance(formula, GridAtom):
        rows = ";".join(",".join(f"{v:+d}" if v else "0" for v in row) for row in formula.rows_top_to_bottom())
        return f"{formula.kind.value}([{rows}])"
    if isinstance(formula, (And, Or)):
        kind = type(formula)
        flat: List[PatternFormula] = []
        for child in formula.children:
            flat.extend(child.children if isinstance(child, kind) else (child,))
        if not flat:
            return "all" if kind is And else "none"
        if len(flat) == 1:
            return emit(flat[0])
        name = "and" if kind is And else "or"
        return f"{name}({','.join(emit(child) for child in flat)})"
    raise PatternError(f"未知の式ノードです: {formula!r}")
