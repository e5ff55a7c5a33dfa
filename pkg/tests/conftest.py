import pytest

from mara import catalog

# one "criterion N: PASS/FAIL ..." line per acceptance criterion, filled by test_acceptance
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def cluster():
    return catalog.cluster_deal_needed()


@pytest.fixture
def orderings():
    return catalog.three_agent_orderings()


@pytest.fixture
def transfer():
    return catalog.single_resource_transfer()


@pytest.fixture
def unequal():
    return catalog.least_unequal_not_fairest()


@pytest.fixture
def equitable_tail():
    return catalog.equitable_after_optimum()


@pytest.fixture
def lorenz3():
    return catalog.lorenz_needs_three_agents()


@pytest.fixture
def envy():
    return catalog.envy_versus_pareto()
