"""
Rigid Symbol Toolkit - Shared Test Fixtures
"""

import pytest

from models.schemas import Theory
from services.enumeration_service import EnumerationService
from utils.fixtures import clear_cache, load_appendix
from utils.settings import settings


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def appendix_rows():
    clear_cache()
    return load_appendix(settings.appendix_path)


@pytest.fixture(scope="session")
def enumeration():
    return EnumerationService(max_workers=1)


@pytest.fixture(params=[Theory.B, Theory.C, Theory.D], ids=lambda t: t.value)
def theory(request):
    return request.param
