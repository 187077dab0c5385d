import os
from functools import lru_cache

import pytest

from perfcode.catalog import default_catalogue
from perfcode.spec import build, spec_order

SLOW_ORDER = 128  # E_2^7 dominates lattice time; property sweeps stop below it


@lru_cache(maxsize=None)
def cached_group(spec: str):
    return build(spec)


@lru_cache(maxsize=None)
def catalogue(max_order: int = 200) -> tuple:
    return tuple(default_catalogue(max_order))


def catalogue_groups(max_order: int = 200, skip=()):
    for spec in catalogue(max_order):
        if spec not in skip:
            yield spec, cached_group(spec)


@pytest.fixture
def group():
    return cached_group


def pytest_collection_modifyitems(config, items):
    if os.environ.get("PERFCODE_STRETCH") == "1":
        return
    skip = pytest.mark.skip(reason="set PERFCODE_STRETCH=1 to run the order-24288 computation")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def pytest_configure(config):
    config.addinivalue_line("markers", "stretch: long computation outside the default suite")


__all__ = ["cached_group", "catalogue", "catalogue_groups", "spec_order"]
