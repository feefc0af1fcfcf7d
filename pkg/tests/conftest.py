import os

import pytest

from pdd.acceptance import criteria

PROFILE = os.environ.get("PDD_ACCEPT_PROFILE", "quick")
_RESULTS: dict = {}


def criterion_result(cid: int):
    if cid not in _RESULTS:
        _RESULTS[cid] = criteria(PROFILE)[cid]()
    return _RESULTS[cid]


@pytest.fixture
def acceptance():
    return criterion_result


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section(f"acceptance criteria ({PROFILE} profile)")
    for cid in sorted(_RESULTS):
        r = _RESULTS[cid]
        terminalreporter.write_line(f"{r.line()}  [{r.runtime_s:.1f} s]")
    passed = sum(r.passed for r in _RESULTS.values())
    terminalreporter.write_line(f"{passed}/{len(_RESULTS)} criteria passed")
