"""
Tests for configuration loading, merging and validation
"""

import pytest
import yaml

from src.config import ConfigManager, RunConfig, worker_count
from src.config.settings import THREADS_ENV
from src.errors import InputError


@pytest.fixture(autouse=True)
def no_thread_env(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)


def user_file(tmp_path, data):
    path = tmp_path / "user.yaml"
    path.write_text(yaml.safe_dump(data))
    return str(path)


class TestDefaults:
    def test_pinned_values(self):
        settings = ConfigManager().run_config()
        assert settings.config_version == 2
        assert settings.solver.zeta == 0.05
        assert settings.solver.n_steps == 5000
        assert (settings.solver.readout, settings.solver.readout_stride) == ("best", 10)
        assert settings.tap.zeta == 0.01
        assert settings.calibrate.grid["zeta"] == [0.02, 0.05, 0.1]
        assert settings.batch.trials == 1000
        assert settings.tap.solvers == ["fw", "dia", "sa", "snn", "gfsnn"]
        assert settings.tap.dump_model is True

    def test_file_matches_model_defaults(self):
        assert ConfigManager().run_config() == RunConfig()

    def test_dot_access(self):
        config = ConfigManager()
        assert config.get("tap.group_size") == 1.0
        assert config.get("tap.missing", "fallback") == "fallback"
        assert config.get("solver.zeta.deeper") is None


class TestMerge:
    def test_user_values_override(self, tmp_path):
        config = ConfigManager(user_file(tmp_path, {"solver": {"zeta": 0.2}, "batch": {"trials": 10}}))
        settings = config.run_config()
        assert settings.solver.zeta == 0.2
        assert settings.solver.n_steps == 5000
        assert settings.batch.trials == 10

    def test_set_overrides_file(self, tmp_path):
        config = ConfigManager(user_file(tmp_path, {"batch": {"seed": 3}}))
        config.set("batch.seed", 9)
        assert config.run_config().batch.seed == 9

    def test_config_copy_is_detached(self):
        config = ConfigManager()
        config.config["solver"]["zeta"] = 1.0
        assert config.get("solver.zeta") == 0.05

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            ConfigManager(str(tmp_path / "absent.yaml"))

    def test_non_mapping_file(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(InputError):
            ConfigManager(str(path))


class TestValidation:
    def test_zero_trials(self, tmp_path):
        with pytest.raises(InputError):
            ConfigManager(user_file(tmp_path, {"batch": {"trials": 0}})).run_config()

    def test_unknown_key(self, tmp_path):
        with pytest.raises(InputError):
            ConfigManager(user_file(tmp_path, {"solver": {"zetta": 0.1}})).run_config()

    def test_non_positive_group_size(self, tmp_path):
        with pytest.raises(InputError):
            ConfigManager(user_file(tmp_path, {"tap": {"group_size": 0}})).run_config()

    @pytest.mark.parametrize("solver", [{"readout": "median"}, {"readout_stride": 0},
                                        {"trajectory_stride": -1}])
    def test_invalid_solver_section(self, tmp_path, solver):
        with pytest.raises(InputError):
            ConfigManager(user_file(tmp_path, {"solver": solver})).run_config()

    def test_negative_tap_feedback(self, tmp_path):
        with pytest.raises(InputError):
            ConfigManager(user_file(tmp_path, {"tap": {"zeta": -0.1}})).run_config()


class TestThreads:
    def test_default_single_worker(self):
        assert worker_count() == 1

    def test_explicit_value_wins(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "8")
        assert worker_count(2) == 2

    def test_environment_cap(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "4")
        assert worker_count() == 4

    @pytest.mark.parametrize("value", ["0", "many", "-2"])
    def test_invalid_environment(self, monkeypatch, value):
        monkeypatch.setenv(THREADS_ENV, value)
        with pytest.raises(InputError):
            ConfigManager()
