import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("clrp", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("clrp")

_ACCEPTANCE = []


class Criterion:
    """Collects the checks of one acceptance criterion; every check runs even
    after an earlier one fails, and the line printed at the end says which."""

    def __init__(self, number, title):
        self.number, self.title = number, title
        self.failed = []
        self.notes = []

    def check(self, ok, what):
        if not ok:
            self.failed.append(what)
        return ok

    def note(self, text):
        self.notes.append(text)

    def line(self):
        status = "PASS" if not self.failed else "FAIL"
        detail = "; ".join(self.notes)
        if self.failed:
            detail = "failed: " + "; ".join(self.failed) + (" | " + detail if detail else "")
        return f"criterion {self.number:>2} {status}  {self.title}" + (f"  ({detail})" if detail else "")

    def finish(self):
        _ACCEPTANCE.append(self.line())
        print(self.line())
        assert not self.failed, self.line()


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
