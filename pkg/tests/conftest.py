"""
Shared fixtures.

Every test runs with the Smith normal form postcondition switched on and
with no CLI overrides left over from an earlier test.
"""

import pytest

import config


@pytest.fixture(autouse=True)
def check_snf(monkeypatch):
    monkeypatch.setenv("MICROCECH_CHECK_SNF", "1")
    config.configure()
    yield
    config.configure()
