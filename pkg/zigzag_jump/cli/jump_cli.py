import click
import json
import sys
import logging
from dataclasses import dataclass
from typing import List, Optional

from ..settings import Settings
from ..core import JumpCore, CompiledPattern, GenerationOutcome, NotTameError
from ..decode import DecodeError
from ..engine import EngineError, GenStatus
from ..patterns.mesh import PatternError
from ..perm_core import Permutation, PermutationError
from ..verify import VerificationError
from .dsl import DslError

# CLIとしてのログ設定 (診断は標準エラーへ)
logging.basicConfig(
    level=(Settings.get("DEFAULT_LOG_LEVEL") or "WARNING").upper(),
    format='%(levelname)s: %(message)s',
)
logger = logging.getLogger(__name__)

# --- 終了コード ---
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_STALLED = 2
EXIT_AMBIGUOUS = 3
EXIT_MISMATCH = 4

_GREEDY_EXIT_CODES = {
    GenStatus.COMPLETE: EXIT_OK,
    GenStatus.TRUNCATED: EXIT_OK,
    GenStatus.STALLED_NO_JUMP: EXIT_STALLED,
    GenStatus.STALLED_AMBIGUOUS: EXIT_AMBIGUOUS,
}

# ユーザー入力に起因するエラー (終了コード 1)
_INPUT_ERRORS = (DslError, PatternError, PermutationError, DecodeError, EngineError, NotTameError,
                 VerificationError, ValueError)


# --- データクラス定義 ---
@dataclass
class GenParams:
    """gen コマンドの実行に必要なパラメータを格納するデータクラス"""
    pattern: str
    n: int
    mode: str
    seed: Optional[str]
    annotate: bool
    decode: Optional[str]
    output_format: str
    force: bool
    limit: Optional[int]


# --- グローバル設定 ---
@click.group()
@click.option(
    '--threads',
    type=int,
    default=Settings.get_int("DEFAULT_THREADS", 1),
    show_default=True,
    help='全探索と count --method both で使うスレッド数。'
)
@click.option(
    '--blowup-cap',
    type=int,
    default=Settings.get_int("DEFAULT_POP_BLOWUP_CAP", 10000),
    show_default=True,
    help='カウント付き POP の OR 展開の項数の上限。'
)
@click.option(
    '--max-n',
    type=int,
    default=Settings.get_int("DEFAULT_VERIFY_MAX_N", 7),
    show_default=True,
    help='全探索による検証で許す n の上限。'
)
@click.pass_context
def cli(ctx, threads, blowup_cap, max_n):
    """
    zigzag-jump-clicker CLI
    パターン回避置換の最小ジャンプによる網羅生成・数え上げ・性質の確認を行います。
    """
    ctx.ensure_object(dict)
    ctx.obj['THREADS'] = threads
    ctx.obj['BLOWUP_CAP'] = blowup_cap
    ctx.obj['MAX_N'] = max_n
    logger.info(f"--- CLI初期化完了 (threads={threads}, blowup_cap={blowup_cap}, max_n={max_n}) ---")


# --- 共通オプションデコレータ ---
def pattern_option(f):
    """全コマンドで共通の --pattern オプションを定義するデコレータ"""
    return click.option('-p', '--pattern', required=True, type=str, help='パターン DSL (例: "cl(2,3,1)")。')(f)


def _build_core(ctx: dict) -> JumpCore:
    return JumpCore(
        blowup_cap=ctx['BLOWUP_CAP'],
        verify_max_n=ctx['MAX_N'],
        timeout_seconds=Settings.get_float("DEFAULT_VERIFY_TIMEOUT_SECONDS", 300.0),
        decode_check_max_n=Settings.get_int("DEFAULT_DECODE_CHECK_MAX_N", 8),
        threads=ctx['THREADS'],
    )


def _fail(message: str, code: int = EXIT_USAGE) -> None:
    print(f"Error: {message}", file=sys.stderr)
    sys.exit(code)


def _compile(core: JumpCore, source: str) -> CompiledPattern:
    try:
        return core.compile_pattern(source)
    except DslError as e:
        _fail(f"{e.detail}\n  {source}\n  {' ' * e.span[0]}{'^' * max(1, e.span[1] - e.span[0])}")


def _parse_range(text: str) -> List[int]:
    """'1..8' または '5' を整数のリストにします。"""
    if '..' in text:
        low, high = text.split('..', 1)
        return list(range(int(low), int(high) + 1))
    return [int(text)]


def _print_records(outcome: GenerationOutcome, annotate: bool, output_format: str) -> None:
    for record in outcome.records:
        if output_format == 'jsonl':
            print(record.to_json())
            continue
        if annotate and record.jump is not None:
            print(f"  [{record.jump}]")
        print(record.obj if record.obj is not None else str(record.perm))


def _run_gen_command(ctx: dict, params: GenParams) -> None:
    """
    生成のメインフローを調整するメソッド。結果の出力と終了コードを決めます。
    """
    core = _build_core(ctx)
    compiled = _compile(core, params.pattern)
    try:
        if params.mode == 'ordered':
            outcome = core.run_ordered(compiled, params.n, decode=params.decode, force=params.force)
        else:
            seed = Permutation.parse(params.seed) if params.seed else None
            outcome = core.run_greedy(compiled, params.n, seed=seed, decode=params.decode, limit=params.limit)
    except _INPUT_ERRORS as e:
        logger.error(f"生成に失敗しました: {e}")
        _fail(str(e))
        return

    _print_records(outcome, params.annotate, params.output_format)
    if outcome.status is not None:
        print(f"status: {outcome.status.value}", file=sys.stderr)
        sys.exit(_GREEDY_EXIT_CODES[outcome.status])


# --- GEN コマンド ---
@cli.command()
@pattern_option
@click.option('-n', 'n', required=True, type=click.IntRange(min=0), help='置換の長さ。')
@click.option('--mode', type=click.Choice(['ordered', 'greedy']), default='ordered', show_default=True,
              help='ordered: 再帰的な掃引 (tame な式のみ)、greedy: 訪問済み集合を使う貪欲版。')
@click.option('--seed', default=None, help='greedy の開始置換 (既定は恒等置換)。')
@click.option('--annotate', is_flag=True, help='置換の間にジャンプ (値 方向 歩数) を表示します。')
@click.option('--decode', type=click.Choice(['bits', 'tree', 'dyck', 'setpart']), default=None,
              help='置換を対応する組合せ対象に変換して表示します。')
@click.option('--format', 'output_format', type=click.Choice(['lines', 'jsonl']), default='lines', show_default=True)
@click.option('--force', is_flag=True, help='tame でない式でも ordered で生成します。')
@click.option('--limit', type=click.IntRange(min=1), default=None, help='greedy で出力する最大件数。')
@click.pass_context
def gen(ctx, pattern, n, mode, seed, annotate, decode, output_format, force, limit):
    """
    [生成] パターンを回避する長さ n の置換を最小ジャンプの列として出力します。
    """
    params = GenParams(
        pattern=pattern,
        n=n,
        mode=mode,
        seed=seed,
        annotate=annotate,
        decode=decode,
        output_format=output_format,
        force=force,
        limit=limit,
    )
    _run_gen_command(ctx.obj, params)


# --- COUNT コマンド ---
@cli.command()
@pattern_option
@click.option('-n', '--n', 'n_range', required=True, help='長さ、または範囲 (例: 1..8)。')
@click.option('--method', type=click.Choice(['brute', 'gen', 'both']), default='both', show_default=True)
@click.pass_context
def count(ctx, pattern, n_range, method):
    """
    [数え上げ] 各 n について言語の大きさを全探索・生成列の長さで数えます。
    """
    core = _build_core(ctx.obj)
    compiled = _compile(core, pattern)
    try:
        lines = core.count(compiled, _parse_range(n_range), method)
    except _INPUT_ERRORS as e:
        _fail(str(e))
        return

    print("n\tbrute\tgen")
    for line in lines:
        brute = '-' if line.brute is None else str(line.brute)
        generated = '-' if line.generated is None else str(line.generated)
        print(f"{line.n}\t{brute}\t{generated}")
    if not all(line.agrees for line in lines):
        _fail("全探索と生成の件数が一致しません。", EXIT_MISMATCH)


# --- CHECK コマンド ---
@cli.command()
@click.argument('kind', type=click.Choice(['tame', 'zigzag', 'hereditary', 'cyclic']))
@pattern_option
@click.option('-n', 'n', type=click.IntRange(min=0), default=None, help='確認する長さ (tame 以外で必須)。')
@click.option('--format', 'output_format', type=click.Choice(['text', 'json']), default='text', show_default=True)
@click.pass_context
def check(ctx, kind, pattern, n, output_format):
    """
    [確認] tame / zigzag / hereditary / cyclic の性質を確認します。成り立たなければ終了コード 4。
    """
    core = _build_core(ctx.obj)
    compiled = _compile(core, pattern)
    try:
        outcome = core.run_check(kind, compiled, n)
    except _INPUT_ERRORS as e:
        _fail(str(e))
        return

    if output_format == 'json':
        print(json.dumps(dict(outcome.data, check=kind, holds=outcome.holds), indent=2))
    else:
        print(outcome.text)
    if not outcome.holds:
        sys.exit(EXIT_MISMATCH)


# --- TRANSFORM コマンド ---
@cli.command()
@click.option('--op', required=True, type=click.Choice(['rev', 'cpl', 'inv', 'rot']))
@pattern_option
@click.pass_context
def transform(ctx, op, pattern):
    """
    [変換] 対称変換を適用したパターンを正規形の DSL で出力します。
    """
    core = _build_core(ctx.obj)
    compiled = _compile(core, pattern)
    print(core.transform(op, compiled))


# --- SUITE コマンド ---
@cli.command()
@click.option('--max-n', 'suite_max_n', type=click.IntRange(min=1), default=6, show_default=True)
@click.option('--format', 'output_format', type=click.Choice(['table', 'json']), default='table', show_default=True)
@click.pass_context
def suite(ctx, suite_max_n, output_format):
    """
    [一括検証] 同梱のパターン族すべてについて全探索と生成列の件数を突き合わせます。
    """
    core = _build_core(ctx.obj)
    try:
        report = core.run_suite(suite_max_n)
    except _INPUT_ERRORS as e:
        _fail(str(e))
        return

    print(report.to_json() if output_format == 'json' else report.to_table())
    if not report.ok:
        sys.exit(EXIT_MISMATCH)


if __name__ == '__main__':
    cli(obj={})
