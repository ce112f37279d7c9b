"""
zigzag-jump-clicker のデフォルト設定値を定義するファイル。
CLIオプションや環境変数で上書きされない場合の基本値を提供します。
"""

# --- パターンのコンパイル設定 ---
# カウント付き POP を OR 展開するときの項数の上限
DEFAULT_POP_BLOWUP_CAP: int = 10000


# --- 検証設定 (verify.py で使用) ---
# 全探索による検証で許す n の上限 (--max-n で引き上げ可能)
DEFAULT_VERIFY_MAX_N: int = 7

# 全探索の制限時間（秒）
DEFAULT_VERIFY_TIMEOUT_SECONDS: float = 300.0

# --decode 指定時に定義域を全探索で確認する n の上限
DEFAULT_DECODE_CHECK_MAX_N: int = 8


# --- 実行設定 ---
# 全探索と count --method both で使うスレッド数
DEFAULT_THREADS: int = 1

# CLI のログレベル
DEFAULT_LOG_LEVEL: str = "WARNING"
