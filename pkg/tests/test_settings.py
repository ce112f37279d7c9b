import pytest

from zigzag_jump.settings import Settings


@pytest.fixture(autouse=True)
def fresh_settings():
    Settings.reload()
    yield
    Settings.reload()


def test_settings_cannot_be_instantiated():
    with pytest.raises(TypeError):
        Settings()


def test_config_file_in_working_directory(tmp_path, monkeypatch):
    (tmp_path / "config.py").write_text("DEFAULT_VERIFY_MAX_N = 5\nDEFAULT_LOG_LEVEL = 'info'\n", encoding="utf-8")
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("DEFAULT_VERIFY_MAX_N", raising=False)
    assert Settings.get_int("DEFAULT_VERIFY_MAX_N", 7) == 5
    assert Settings.get("DEFAULT_LOG_LEVEL") == "info"
    assert Settings.get("UNKNOWN_SETTING") is None


def test_environment_overrides_config_file(tmp_path, monkeypatch):
    (tmp_path / "config.py").write_text("DEFAULT_THREADS = 2\n", encoding="utf-8")
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("DEFAULT_THREADS", " 4 ")
    assert Settings.get_int("DEFAULT_THREADS", 1) == 4


def test_invalid_numbers_fall_back_to_default(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("DEFAULT_THREADS", "many")
    monkeypatch.setenv("DEFAULT_VERIFY_TIMEOUT_SECONDS", "soon")
    assert Settings.get_int("DEFAULT_THREADS", 1) == 1
    assert Settings.get_float("DEFAULT_VERIFY_TIMEOUT_SECONDS", 300.0) == 300.0
    assert "DEFAULT_THREADS" in capsys.readouterr().err


def test_broken_config_file_is_ignored(tmp_path, monkeypatch, capsys):
    (tmp_path / "config.py").write_text("raise RuntimeError('broken')\n", encoding="utf-8")
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("DEFAULT_THREADS", raising=False)
    assert Settings.get_int("DEFAULT_THREADS", 1) == 1
    assert "config.py" in capsys.readouterr().err


def test_only_known_keys_are_read_from_config_file(tmp_path, monkeypatch):
    (tmp_path / "config.py").write_text("DEFAULT_THREADS = 3\nOTHER_SETTING = 'x'\nDEFAULT_LOG_LEVEL = ''\n", encoding="utf-8")
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("DEFAULT_THREADS", raising=False)
    monkeypatch.delenv("DEFAULT_LOG_LEVEL", raising=False)
    assert Settings.get_int("DEFAULT_THREADS", 1) == 3
    assert Settings.get("OTHER_SETTING") is None
    assert Settings.get("DEFAULT_LOG_LEVEL") is None
