import pytest

_RESULTS: dict[int, tuple[str, str, str]] = {}


class Recorder:
    def __init__(self, number: int, title: str):
        self.number, self.title = number, title

    def passed(self, detail: str = "") -> None:
        _RESULTS[self.number] = ("PASS", self.title, detail)

    def failed(self, detail: str = "") -> None:
        _RESULTS[self.number] = ("FAIL", self.title, detail)

    def skipped(self, detail: str) -> None:
        _RESULTS[self.number] = ("SKIPPED", self.title, detail)
        pytest.skip(detail)

    def check(self, ok: bool, detail: str) -> None:
        (self.passed if ok else self.failed)(detail)
        assert ok, detail


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("criterion")
    rec = Recorder(*marker.args)
    _RESULTS.setdefault(rec.number, ("FAIL", rec.title, "did not complete"))
    return rec


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        status, title, detail = _RESULTS[number]
        terminalreporter.write_line(f"[{status:7s}] {number}. {title}: {detail}")
