import pytest

_LINES = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """``record(number, passed, detail)`` for the acceptance summary.

    ``partial=True`` marks a criterion checked only on a reduced scope; it
    never prints as a plain PASS.
    """
    lines = request.config.stash.setdefault(_LINES, [])

    def record(number, passed, detail, partial=False):
        status = "FAIL" if not passed else "PARTIAL" if partial else "PASS"
        line = f"criterion {number:>2}: {status}  {detail}"
        lines.append((number, line))
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
