import numpy as np
import pytest
from hypothesis import settings

from tempobench.core.data import SplitDataset

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def random_dataset(seed, n=24, n_train=12, n_test=8, n_classes=2, name="toy"):
    rs = np.random.default_rng(seed)
    y_train = np.arange(n_train) % n_classes
    y_test = np.arange(n_test) % n_classes
    X_train = rs.normal(size=(n_train, n)) + y_train[:, None]
    X_test = rs.normal(size=(n_test, n)) + y_test[:, None]
    return SplitDataset(name, X_train, y_train, X_test, y_test, tuple(str(c) for c in range(n_classes)))


@pytest.fixture
def toy():
    return random_dataset(0)


ACCEPTANCE_LINES = []


def report_criterion(number, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
