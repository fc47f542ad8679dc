"""Config loading: defaults, file, environment, override precedence."""

from pathlib import Path

import pytest

from desamon.config import AppConfig, load_config, split_listen
from desamon.errors import ConfigError


def write_config(tmp_path, text):
    path = tmp_path / "service.conf"
    path.write_text(text)
    return path


class TestPrecedence:
    def test_defaults(self):
        config = load_config(None, env={})
        assert config.storage_path == Path("desamon.db")
        assert config.photo_dir == Path("desamon.db.photos")
        assert config.listen == "127.0.0.1:8765"
        assert config.photo_max_bytes == 10 * 1024 * 1024
        assert config.token_ttl_hours == 8
        assert len(config.token_key) >= 32  # ephemeral key generated

    def test_file_overrides_defaults(self, tmp_path):
        path = write_config(tmp_path, """
        storage.path = /tmp/x.db
        photos.dir = /tmp/ph
        photos.max_bytes = 1024
        server.listen = 0.0.0.0:9000
        auth.token_key = 0123456789abcdef0123456789abcdef
        auth.token_ttl_hours = 2
        """)
        config = load_config(path, env={})
        assert config.storage_path == Path("/tmp/x.db")
        assert config.photo_dir == Path("/tmp/ph")
        assert config.photo_max_bytes == 1024
        assert config.listen == "0.0.0.0:9000"
        assert config.token_ttl_hours == 2

    def test_env_overrides_file(self, tmp_path):
        path = write_config(tmp_path, "server.listen = 0.0.0.0:9000\n")
        config = load_config(path, env={"DESAMON_LISTEN": "127.0.0.1:7000"})
        assert config.listen == "127.0.0.1:7000"

    def test_explicit_overrides_beat_env(self, tmp_path):
        config = load_config(None, env={"DESAMON_LISTEN": "127.0.0.1:7000"},
                             overrides={"listen": "127.0.0.1:7001"})
        assert config.listen == "127.0.0.1:7001"

    def test_photo_dir_follows_storage_path(self, tmp_path):
        config = load_config(None, env={"DESAMON_STORAGE_PATH": str(tmp_path / "a.db")})
        assert config.photo_dir == tmp_path / "a.db.photos"


class TestRejections:
    def test_unknown_file_key(self, tmp_path):
        path = write_config(tmp_path, "storage.pth = typo.db\n")
        with pytest.raises(ConfigError, match="unknown configuration key"):
            load_config(path, env={})

    def test_bad_int_value(self, tmp_path):
        path = write_config(tmp_path, "photos.max_bytes = ten\n")
        with pytest.raises(ConfigError):
            load_config(path, env={})

    def test_bad_env_int(self):
        with pytest.raises(ConfigError):
            load_config(None, env={"DESAMON_TOKEN_TTL_HOURS": "soon"})

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read config file"):
            load_config(tmp_path / "absent.conf", env={})

    def test_empty_token_key_rejected(self, tmp_path):
        path = write_config(tmp_path, 'auth.token_key = ""\n')
        with pytest.raises(ConfigError, match="must not be empty"):
            load_config(path, env={})

    def test_non_positive_int_rejected(self, tmp_path):
        path = write_config(tmp_path, "photos.max_bytes = 0\n")
        with pytest.raises(ConfigError, match="must be positive"):
            load_config(path, env={})

    def test_unknown_override_field(self):
        with pytest.raises(ConfigError, match="unknown configuration field"):
            load_config(None, env={}, overrides={"storagepath": "x"})


class TestListen:
    def test_split(self):
        assert split_listen("127.0.0.1:8765") == ("127.0.0.1", 8765)

    @pytest.mark.parametrize("bad", ["nohost", "host:port", "host:", ":99", "h:0"])
    def test_bad_listen(self, bad):
        with pytest.raises(ConfigError):
            split_listen(bad)

    def test_host_port_properties(self, tmp_path):
        config = AppConfig(storage_path=tmp_path / "x.db", photo_dir=tmp_path / "ph",
                           token_key=b"k" * 32, listen="10.0.0.1:81")
        assert config.host == "10.0.0.1"
        assert config.port == 81
