"""Shared test plumbing: the acceptance recorder.

Acceptance tests register a numbered criterion; after the run a summary
section prints one PASS/FAIL line per criterion.
"""

import pytest

_LINES = {}


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    rep = yield
    setattr(item, "rep_" + rep.when, rep)
    return rep


class _Recorder:
    def __init__(self):
        self.number = None
        self.text = None

    def start(self, number: int, text: str):
        self.number = number
        self.text = text


@pytest.fixture
def acceptance(request):
    recorder = _Recorder()
    yield recorder
    if recorder.number is None:
        return
    rep = getattr(request.node, "rep_call", None)
    passed = bool(rep and rep.passed)
    _LINES[recorder.number] = (
        f"criterion {recorder.number:02d} {'PASS' if passed else 'FAIL'}  {recorder.text}"
    )


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_LINES):
        terminalreporter.write_line(_LINES[number])
