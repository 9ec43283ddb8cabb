import pytest

from polarhull import boolean, posets, rings


def small_posets():
    return [P for n in (1, 2, 3) for P in posets.all_posets(n)]


@pytest.fixture(scope="session")
def poset_spec():
    return posets.build_poset_capacitor(small_posets())


@pytest.fixture(scope="session")
def ba_spec():
    return boolean.build_ba_capacitor([boolean.from_atoms(n) for n in (1, 2, 3)])


@pytest.fixture(scope="session")
def ring_spec():
    F2 = rings.f2()
    return rings.build_ring_capacitor([F2, rings.product(F2, F2, "F2xF2"), rings.column_ring()])


@pytest.fixture(scope="session")
def small_poset_universe():
    """1-chain, 2-chain, 2-antichain and all monotone maps."""
    return posets.materialize_poset_universe(
        [posets.FinPoset.chain(1), posets.FinPoset.chain(2), posets.FinPoset.antichain(2)])


@pytest.fixture(scope="session")
def mid_poset_universe():
    """Posets with at most two elements plus their MacNeille completions."""
    return posets.materialize_poset_universe(
        [P for n in (1, 2) for P in posets.all_posets(n)], closure=True)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or \
        __import__("sys").modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
