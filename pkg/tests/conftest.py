import functools

import pytest

from omlkit.bsa import enumerate_bsas
from omlkit.builders import (
    boolean_algebra,
    bowtie,
    direct_product,
    greechie_chain,
    horizontal_sum,
    mo,
)


@functools.lru_cache(maxsize=None)
def corpus_lattice(name):
    if name.startswith("2^") and name[2:].isdigit():
        return boolean_algebra(int(name[2:]))
    if name.startswith("MO(") and name[3:-1].isdigit():
        return mo(int(name[3:-1]))
    return {
        "bowtie": bowtie,
        "chain3": lambda: greechie_chain(3),
        "2^2xMO(2)": lambda: direct_product(boolean_algebra(2), mo(2)),
        "2^3+2^3": lambda: horizontal_sum(boolean_algebra(3), boolean_algebra(3)),
        "MO(2)x2^4": lambda: direct_product(mo(2), boolean_algebra(4)),
    }[name]()


@functools.lru_cache(maxsize=None)
def corpus_poset(name):
    return enumerate_bsas(corpus_lattice(name))


CORPUS = (
    [f"2^{n}" for n in range(1, 6)]
    + [f"MO({n})" for n in range(1, 6)]
    + ["bowtie", "chain3", "2^2xMO(2)", "2^3+2^3"]
)
SMALL = ["2^1", "2^2", "2^3", "MO(1)", "MO(2)", "MO(3)", "MO(4)", "bowtie"]


@pytest.fixture(params=CORPUS)
def corpus_name(request):
    return request.param


_acceptance = []


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    _acceptance.append((number, title, call.excinfo is None))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    results = {}
    for number, title, passed in _acceptance:
        prev = results.get(number, (title, True))
        results[number] = (title, prev[1] and passed)
    terminalreporter.section("acceptance criteria")
    for number, (title, passed) in sorted(results.items()):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number}. {title}")
