import contextlib
import time

import pytest

_criteria: dict[int, tuple[str, str, str]] = {}


@pytest.fixture
def criterion():
    """Context manager recording one acceptance criterion as PASS or FAIL.

    Exceptions are recorded and then re-raised so the test itself still fails.
    """

    @contextlib.contextmanager
    def record(number: int, title: str):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            _criteria[number] = ("FAIL", title, f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}")
            print(f"ACCEPTANCE {number:>2} FAIL  {title}")
            raise
        _criteria[number] = ("PASS", title, f"{time.perf_counter() - start:.1f}s")
        print(f"ACCEPTANCE {number:>2} PASS  {title}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        status, title, note = _criteria[number]
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}  ({note})")
