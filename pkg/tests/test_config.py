import pytest

from systolab.config import ConfigError, Settings, env_precision, env_threads, load_config, parse_config


def test_defaults_are_one():
    assert load_config(None) == Settings(1.0, 1.0, 1.0, 1.0)


def test_parse_with_comments(tmp_path):
    path = tmp_path / "c.cfg"
    path.write_text("# constants\nc1 = 2.5\n\nmetric_c=0.75  # scale\n")
    s = load_config(path)
    assert s.c1 == 2.5 and s.metric_c == 0.75 and s.c2 == 1.0


@pytest.mark.parametrize("text", ["c3 = 1", "c1 2", "c1 = abc", "gamma_n = -1", "c2 = 0"])
def test_bad_config(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_env(monkeypatch):
    monkeypatch.setenv("SYSTOLAB_PREC", "192")
    monkeypatch.setenv("SYSTOLAB_THREADS", "3")
    assert env_precision(256) == 192 and env_threads() == 3
    monkeypatch.setenv("SYSTOLAB_PREC", "lots")
    with pytest.raises(ConfigError):
        env_precision(256)
    monkeypatch.setenv("SYSTOLAB_THREADS", "0")
    with pytest.raises(ConfigError):
        env_threads()
    monkeypatch.delenv("SYSTOLAB_PREC")
    assert env_precision(256) == 256
