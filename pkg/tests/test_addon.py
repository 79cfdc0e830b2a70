from unittest.mock import Mock, patch

from spam_tomography_rooms_pkg.actions.base import ActionOutput, ActionResponse
from spam_tomography_rooms_pkg.addon import SpamTomographyRoomsAddon
from spam_tomography_rooms_pkg.configuration import CustomAddonConfig


class TestSpamTomographyRoomsAddon:
    def test_addon_initialization(self):
        addon = SpamTomographyRoomsAddon()

        assert addon.type == "tomography"
        assert addon.modules == ["actions", "configuration", "services", "storage", "utils"]
        assert isinstance(addon.config, CustomAddonConfig)
        assert addon.observer_callback is None
        assert addon.addon_id is None

    def test_logger_property(self):
        addon = SpamTomographyRoomsAddon()
        logger = addon.logger

        assert hasattr(logger, 'debug')
        assert hasattr(logger, 'info')
        assert hasattr(logger, 'warning')
        assert hasattr(logger, 'error')
        assert logger.addon_type == "tomography"

    def test_set_observer_callback(self):
        addon = SpamTomographyRoomsAddon()
        callback = Mock()

        addon.setObserverCallback(callback, "test_addon")

        assert addon.observer_callback == callback
        assert addon.addon_id == "test_addon"

    def test_spam_sweep_action(self, tmp_path):
        addon = SpamTomographyRoomsAddon()
        expected = ActionResponse(output=ActionOutput(), message="ok", code=200)

        with patch('spam_tomography_rooms_pkg.addon.spam_sweep', return_value=expected) as mock_sweep:
            result = addon.spam_sweep(output=str(tmp_path / "out.csv"))

            mock_sweep.assert_called_once_with(addon.config, output=str(tmp_path / "out.csv"))
            assert result is expected

    def test_fit_data_action_forwards_arguments(self):
        addon = SpamTomographyRoomsAddon()

        with patch('spam_tomography_rooms_pkg.addon.fit_data') as mock_fit:
            addon.fit_data(method="C", data="data.csv", truth="truth.json")

            mock_fit.assert_called_once_with(addon.config, method="C", data="data.csv", truth="truth.json", output=None)

    def test_fit_data_action_reports_missing_file(self, tmp_path):
        addon = SpamTomographyRoomsAddon()

        result = addon.fit_data(method="C", data=str(tmp_path / "absent.csv"))

        assert isinstance(result, ActionResponse)
        assert result.code == 500
        assert "absent.csv" in result.output.data["error"]

    def test_load_addon_config_success(self, addon_config):
        addon = SpamTomographyRoomsAddon()

        with patch('spam_tomography_rooms_pkg.addon.CustomAddonConfig') as MockConfig:
            mock_config_instance = Mock()
            MockConfig.return_value = mock_config_instance

            result = addon.loadAddonConfig(addon_config)

            MockConfig.assert_called_once_with(**addon_config)
            assert addon.config == mock_config_instance
            assert result is True

    def test_load_addon_config_real(self, addon_config):
        addon = SpamTomographyRoomsAddon()

        assert addon.loadAddonConfig(addon_config) is True
        assert addon.config.sweep.seed == 11

    def test_load_addon_config_failure(self):
        addon = SpamTomographyRoomsAddon()

        with patch('spam_tomography_rooms_pkg.addon.CustomAddonConfig', side_effect=Exception("Config error")):
            result = addon.loadAddonConfig({})

            assert result is False

    def test_load_addon_config_wrong_type(self, addon_config):
        addon = SpamTomographyRoomsAddon()

        assert addon.loadAddonConfig({**addon_config, "type": "cloud_storage"}) is False

    def test_test_method_success(self):
        addon = SpamTomographyRoomsAddon()

        assert addon.test() is True

    def test_test_method_mocked_module(self):
        addon = SpamTomographyRoomsAddon()

        with patch('importlib.import_module') as mock_import:
            mock_module = Mock()
            mock_module.__all__ = ['TestComponent']
            mock_module.TestComponent = Mock()
            mock_import.return_value = mock_module

            result = addon.test()

            assert result is True

    def test_test_method_import_error(self):
        addon = SpamTomographyRoomsAddon()

        with patch('importlib.import_module', side_effect=ImportError("Module not found")):
            result = addon.test()

            assert result is False

    def test_test_method_general_error(self):
        addon = SpamTomographyRoomsAddon()

        with patch('importlib.import_module', side_effect=Exception("General error")):
            result = addon.test()

            assert result is False

    def test_test_method_missing_component(self):
        addon = SpamTomographyRoomsAddon()

        with patch('importlib.import_module') as mock_import:
            mock_module = Mock(spec=[])
            mock_module.__all__ = ['Missing']
            mock_import.return_value = mock_module

            result = addon.test()

            assert result is False
