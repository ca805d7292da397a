import pytest

from gensupport.core import Signature
from gensupport.support import FullTuple, SupportProperty

# criterion number -> (passed, detail), filled in by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


def running_property(scope=("x", "y", "z")):
    """Some tuple sums to at least 2 and takes the smallest x value."""

    def fn(sig, S):
        m = sig[scope[0]].lo
        return m is not None and any(
            isinstance(e, FullTuple) and sum(e.values) >= 2 and e.values[0] == m for e in S
        )

    return SupportProperty("running", tuple(scope), fn, kind="tuple", monotone=True)


@pytest.fixture
def bool3():
    return Signature({v: {0, 1} for v in "xyz"})
