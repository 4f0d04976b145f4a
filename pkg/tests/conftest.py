import pytest

from leobeam.config import RunConfig
from leobeam.sim import build_context


@pytest.fixture(scope="session")
def default_config():
    return RunConfig.default()


@pytest.fixture(scope="session")
def default_ctx(default_config):
    return build_context(default_config)
