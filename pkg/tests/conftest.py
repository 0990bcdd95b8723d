import pytest

_RESULTS: dict[int, tuple[str, str]] = {}


class CriterionRecorder:
    def __init__(self):
        self.number = None
        self.detail = ""

    def __call__(self, number: int, detail: str = "") -> None:
        self.number = number
        self.detail = detail


@pytest.fixture
def criterion(request):
    rec = CriterionRecorder()
    yield rec
    if rec.number is None:
        return
    report = getattr(request.node, "rep_call", None)
    ok = report is not None and report.passed
    line = f"criterion {rec.number}: {'PASS' if ok else 'FAIL'}  {rec.detail}".rstrip()
    _RESULTS[rec.number] = ("PASS" if ok else "FAIL", line)
    print(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        terminalreporter.write_line(_RESULTS[n][1])
