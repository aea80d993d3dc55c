import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from extcorr import DataMatrix, SignPattern, gen_fc, gen_fu

settings.register_profile(
    "default",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def fc3():
    return gen_fc(SignPattern.parse("++-"), 50, seed=7)


@pytest.fixture
def fu3():
    return gen_fu(3, 50, seed=7)


@pytest.fixture
def write_csv_text(tmp_path):
    def _write(text, name="data.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


def random_dataset(rng, n=None, m=None, max_n=8, max_m=60):
    """Random DataMatrix with a mix of independent and coupled columns."""
    n = n or int(rng.integers(2, max_n + 1))
    m = m or int(rng.integers(max(3, n + 1), max_m + 1))
    x = rng.standard_normal((m, n))
    mix = rng.standard_normal((n, n)) * rng.uniform(0, 2)
    values = x + x @ np.triu(mix, 1)
    values = values * rng.uniform(0.1, 100, n) + rng.uniform(-50, 50, n)
    return DataMatrix.from_array(values)


@st.composite
def datasets(draw, max_n=8, max_m=60):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_dataset(np.random.default_rng(seed), max_n=max_n, max_m=max_m)


_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        detail = getattr(item, "acceptance_detail", "")
        _ACCEPTANCE[marker.args[0]] = (marker.args[1], report.passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE):
        title, passed, detail = _ACCEPTANCE[key]
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] C{key}: {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)


@pytest.fixture
def record(request):
    """Attach a one-line detail string to the acceptance summary."""

    def _record(text):
        request.node.acceptance_detail = text

    return _record
