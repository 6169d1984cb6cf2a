import rigidpy
import pytest


@pytest.fixture(autouse=True)
def add_rgd(doctest_namespace):
    doctest_namespace["rgd"] = rigidpy
