import json

import pytest

from ara_insider.scenario_io import bundled, from_document, load_file

D1 = ("anom. det. & data prov.", "info. sec. & train.", "random audits")
ATTACKS = ("small", "medium", "large")

# Predictive attack probabilities obtained with the attacker model in the
# published example; used as exact input where noted.
REF_ATTACK_PROBS = {
    D1[0]: (0.067, 0.090, 0.843),
    D1[1]: (0.499, 0.189, 0.312),
    D1[2]: (0.196, 0.105, 0.699),
}
REF_PSI_DA = {
    D1[0]: (-13.0, -0.25, 11.5),
    D1[1]: (-23.5, -7.5, 8.0),
    D1[2]: (-62.5, -53.0, -43.5),
}


@pytest.fixture(scope="session")
def dad():
    return load_file(bundled("golden_dad"))


@pytest.fixture(scope="session")
def culture():
    return load_file(bundled("golden_culture"))


@pytest.fixture(scope="session")
def simultaneous():
    return load_file(bundled("simultaneous_demo"))


@pytest.fixture
def dad_doc():
    return json.loads(bundled("golden_dad").read_text(encoding="utf-8"))


@pytest.fixture
def culture_doc():
    return json.loads(bundled("golden_culture").read_text(encoding="utf-8"))


def rebuild(doc):
    return from_document(doc)


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
