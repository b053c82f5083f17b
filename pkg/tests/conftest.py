import pytest

from zetalab.zeros import scan_zeros

BIG_T1 = 10100.0


@pytest.fixture(scope="session")
def big_catalog():
    """Certified zeros on [14, 10100]; about 10 s to build."""
    return scan_zeros(14.0, BIG_T1)


@pytest.fixture(scope="session")
def catalog100():
    return scan_zeros(14.0, 100.0)


@pytest.fixture(scope="session")
def catalog_1100(big_catalog):
    """Restriction of the big catalog to [14, 1100], cheap to serialize."""
    from zetalab.zeros import ZeroCatalog

    zs = tuple(z for z in big_catalog.zeros if z.gamma <= 1100.0)
    return ZeroCatalog(zs, (14.0, 1100.0))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
