import pytest

from dlmetric.oracle import bfs_ball
from dlmetric.ring import validate_params


@pytest.fixture(scope="session")
def small_balls():
    """A few exhaustive balls that every structural test can afford to sweep."""
    configs = [(2, 2, 5), (2, 3, 4), (3, 2, 3), (3, 3, 2), (4, 5, 1)]
    return [bfs_ball(validate_params(d, q), r) for d, q, r in configs]


@pytest.fixture(scope="session")
def ball_d3q2_r7():
    return bfs_ball(validate_params(3, 2), 7)


_CRITERIA: dict = {}


class CriterionRecorder:
    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.ok = None
        self.details: list[str] = []

    def note(self, text: str) -> None:
        self.details.append(text)

    def check(self, ok: bool, text: str) -> bool:
        self.details.append(("ok: " if ok else "FAILED: ") + text)
        self.ok = ok if self.ok is None else (self.ok and ok)
        return ok

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        body = "; ".join(self.details)
        return f"[{status}] criterion {self.number}: {self.title} ({body})"


@pytest.fixture
def criterion(request):
    """Per-criterion recorder; an exception before any check counts as a failure."""
    recs = []

    def make(number: int, title: str) -> CriterionRecorder:
        rec = CriterionRecorder(number, title)
        recs.append(rec)
        _CRITERIA[number] = rec
        return rec

    yield make
    for rec in recs:
        if rec.ok is None or request.node.rep_call_failed:
            rec.ok = False


@pytest.hookimpl(hookwrapper=True, tryfirst=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call_failed = rep.failed
    elif rep.when == "setup":
        item.rep_call_failed = rep.failed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[number].line())
