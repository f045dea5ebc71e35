import pytest

from kleinroute import _backend

BACKENDS = sorted(_backend.BACKENDS)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def compiled():
    if "cython" not in _backend.BACKENDS:
        pytest.skip("compiled kernels not built")
    return "cython"


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance  # noqa: PLC0415

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
