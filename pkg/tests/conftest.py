import pytest

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance verdict; all verdicts are echoed in the terminal summary."""
    store = request.config.stash[_RESULTS]

    def record(number, passed, detail, seconds):
        line = f"CRITERION {number:2d}: {'PASS' if passed else 'FAIL'}  ({seconds:.1f} s)  {detail}"
        store[number] = line
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter, config):
    store = config.stash.get(_RESULTS, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(store):
        terminalreporter.write_line(store[n])
