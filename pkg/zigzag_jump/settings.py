import os
import sys
from typing import Callable, Dict, Optional, TypeVar
from pathlib import Path
import importlib.util

T = TypeVar("T")

# config.py から読み取る設定名
KNOWN_KEYS = (
    "DEFAULT_POP_BLOWUP_CAP",
    "DEFAULT_VERIFY_MAX_N",
    "DEFAULT_VERIFY_TIMEOUT_SECONDS",
    "DEFAULT_DECODE_CHECK_MAX_N",
    "DEFAULT_THREADS",
    "DEFAULT_LOG_LEVEL",
)


class Settings:
    """
    生成・検証の既定値を、環境変数 → config.py の順に引くクラス。
    config.py からは KNOWN_KEYS に挙げた名前だけを文字列として取り込みます。
    """
    _file_values: Optional[Dict[str, str]] = None

    @classmethod
    def _file(cls) -> Dict[str, str]:
        if cls._file_values is None:
            cls._file_values = cls._read_config(Path(os.getcwd()) / 'config.py')
        return cls._file_values

    @staticmethod
    def _read_config(path: Path) -> Dict[str, str]:
        """config.py を実行し、既知の設定名のうち定義されているものを返します。"""
        if not path.exists():
            return {}
        try:
            spec = importlib.util.spec_from_file_location("zigzag_jump_config", str(path))
            module = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(module)
        except Exception as e:
            print(f"警告: config.pyのロード中にエラーが発生しました: {e}", file=sys.stderr)
            return {}
        values = {}
        for key in KNOWN_KEYS:
            raw = getattr(module, key, None)
            if raw is not None and str(raw).strip():
                values[key] = str(raw).strip()
        return values

    @classmethod
    def reload(cls):
        """次回の参照で config.py を読み直させます (テスト用)。"""
        cls._file_values = None

    def __init__(self):
        raise TypeError("Settingsクラスはインスタンス化できません。Settings.get()を使用してください。")

    @classmethod
    def get(cls, name: str) -> Optional[str]:
        env_value = (os.getenv(name) or "").strip()
        if env_value:
            return env_value
        return cls._file().get(name)

    @classmethod
    def _typed(cls, name: str, default: T, cast: Callable[[str], T], kind: str) -> T:
        value = cls.get(name)
        if value is None:
            return default
        try:
            return cast(value)
        except ValueError:
            print(f"警告: {name}={value!r} は{kind}ではないため {default} を使用します。", file=sys.stderr)
            return default

    @classmethod
    def get_int(cls, name: str, default: int) -> int:
        return cls._typed(name, default, int, "整数")

    @classmethod
    def get_float(cls, name: str, default: float) -> float:
        return cls._typed(name, default, float, "数値")
