import pytest

import preassess as pa


@pytest.fixture(scope="session")
def sample_graph():
    return pa.load_ontology(pa.sample_ontology_text())


@pytest.fixture(scope="session")
def sample_ruleset(sample_graph):
    return pa.generate_rules(sample_graph)


@pytest.fixture(scope="session")
def sample_bank(sample_graph):
    return pa.load_bank(pa.sample_bank_text(), sample_graph)


@pytest.fixture
def event_log(tmp_path):
    return pa.EventLog(str(tmp_path / "events.log"))


def pytest_runtest_logreport(report):
    """Print one visible pass/fail line per acceptance criterion."""
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else "FAIL"
    print(f"\n[acceptance] {status} {name}", flush=True)
