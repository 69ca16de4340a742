from fractions import Fraction

import pytest

from cylnogo import config
from cylnogo.config import CheckDefaults, load_manifest, parse_binding, parse_bindings
from cylnogo.errors import ConfigError


def test_bundled_manifest():
    manifest = load_manifest()
    assert manifest.version == "1.0.0"
    assert manifest.seed == 1729
    assert manifest.defaults("posrep-hom").options == {"bound": 8}
    assert manifest.defaults("no-such-check") == CheckDefaults()


def test_manifest_path_from_environment(tmp_path, monkeypatch):
    path = tmp_path / "manifest.json"
    path.write_text('{"version": "2.0.0", "checks": {"iden": {"bindings": {"nu": "1/2"}}}}')
    monkeypatch.setenv("CYLNOGO_MANIFEST", str(path))
    manifest = load_manifest()
    assert manifest.version == "2.0.0"
    assert manifest.seed == 0
    assert parse_bindings(manifest.defaults("iden").bindings) == {"nu": Fraction(1, 2)}


@pytest.mark.parametrize("content", ["{not json", '{"checks": {}}', '{"version": "1", "checks": {"iden": 3}}'])
def test_invalid_manifest(tmp_path, content):
    path = tmp_path / "manifest.json"
    path.write_text(content)
    with pytest.raises(ConfigError, match="invalid manifest"):
        load_manifest(str(path))


def test_missing_manifest(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_manifest(str(tmp_path / "missing.json"))


def test_parse_binding():
    assert parse_binding(None) is None
    assert parse_binding(" formal ") is None
    assert parse_binding("1/2") == Fraction(1, 2)
    assert parse_binding(-3) == -3
    with pytest.raises(ConfigError):
        parse_binding("l +")


def test_jobs_from_environment(monkeypatch):
    monkeypatch.setenv("CYLNOGO_JOBS", "3")
    assert config.default_jobs() == 3
    monkeypatch.setenv("CYLNOGO_JOBS", "0")
    assert config.default_jobs() == 1
    monkeypatch.setenv("CYLNOGO_JOBS", "many")
    with pytest.raises(ConfigError):
        config.default_jobs()
    monkeypatch.delenv("CYLNOGO_JOBS")
    assert config.default_jobs() >= 1
