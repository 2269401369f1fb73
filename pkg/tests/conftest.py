import pytest

ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture()
def record():
    """``record(n, ok, detail)`` stores the PASS/FAIL line of criterion ``n``."""

    def _record(n: int, ok: bool, detail: str) -> None:
        status = "PASS" if ok else "FAIL"
        ACCEPTANCE[n] = (status, detail)
        print(f"criterion {n}: {status} ({detail})")

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {status} ({detail})")
