import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from common.utility import readConfig, readTable, ROOT_DIR


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long running enumeration and battery checks")


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def settings():
    return readConfig(ROOT_DIR)


@pytest.fixture
def settings_copy(tmp_path):
    """
    A writable copy of settings.ini in a temporary directory
    """
    with open(os.path.join(ROOT_DIR, 'settings.ini')) as f:
        text = f.read()
    path = tmp_path / 'settings.ini'
    path.write_text(text)
    return path


@pytest.fixture(scope="session")
def table():
    """
    Loader for the shipped reference tables, e.g. table("plane23")
    """
    return readTable
