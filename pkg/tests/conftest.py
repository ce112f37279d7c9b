import pytest

from zigzag_jump.core import JumpCore
from zigzag_jump.perm_core import Permutation


def perms(*texts):
    """"1234" 形式の文字列から置換のリストを作ります。"""
    return [Permutation.parse(text) for text in texts]


def compact(sequence):
    return [pi.compact() for pi in sequence]


@pytest.fixture
def core():
    return JumpCore(blowup_cap=10000, verify_max_n=7, timeout_seconds=60.0, decode_check_max_n=8)
