import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, derandomize=True)
settings.load_profile("default")


# ---------------------------------------------------------------- acceptance lines

_RESULTS: list[str] = []


class _Criterion:
    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.failed: list[str] = []

    def __call__(self, ok: bool, what: str) -> bool:
        if not ok:
            self.failed.append(what)
        return ok

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None:
            self.failed.append(f"{exc_type.__name__}: {exc}")
        status = "FAIL" if self.failed else "PASS"
        line = f"criterion {self.number:2d} {status}  {self.title}"
        if self.failed:
            line += "  [" + "; ".join(self.failed) + "]"
        _RESULTS.append(line)
        print(line)
        if exc is None and self.failed:
            raise AssertionError(line)
        return False


@pytest.fixture
def criterion():
    """Context manager recording one acceptance criterion as PASS or FAIL."""
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_RESULTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
