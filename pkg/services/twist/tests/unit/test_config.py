"""
Unit tests for the configuration profiles.

Key Concepts Demonstrated:
- Profile lookup by name and through ``TWISTLAB_ENV``
- Subclasses overriding only what differs from the base profile
"""

from __future__ import annotations

import pytest

from services.twist import config as profiles
from services.twist.config import Config, DevelopmentConfig, ProductionConfig, get_config

pytestmark = pytest.mark.unit


class TestProfiles:
    @pytest.mark.parametrize(
        "env, expected",
        [
            ("development", DevelopmentConfig),
            ("testing", profiles.TestingConfig),
            ("production", ProductionConfig),
        ],
    )
    def test_lookup_by_name(self, env, expected):
        """Test that each profile name resolves to its class."""
        assert get_config(env) is expected

    def test_unknown_name_falls_back_to_development(self):
        """Test that an unknown profile name yields the default profile."""
        assert get_config("staging") is DevelopmentConfig

    def test_environment_variable_selects_profile(self, monkeypatch):
        """Test that TWISTLAB_ENV is read when no name is passed."""
        monkeypatch.setenv("TWISTLAB_ENV", "production")
        assert get_config() is ProductionConfig

    def test_production_is_quiet_and_documented(self):
        """Test that production keeps the base limits without debug or testing flags."""
        assert not ProductionConfig.DEBUG
        assert not ProductionConfig.TESTING
        assert ProductionConfig.MAX_DIM == Config.MAX_DIM
        assert ProductionConfig.RANDOM_TRIPLES == Config.RANDOM_TRIPLES
        assert ProductionConfig.__doc__

    def test_testing_profile_samples_fewer_triples(self):
        """Test that the testing profile only trims the sampled work."""
        assert profiles.TestingConfig.TESTING
        assert profiles.TestingConfig.RANDOM_TRIPLES < Config.RANDOM_TRIPLES
        assert profiles.TestingConfig.MAX_DIM == Config.MAX_DIM
