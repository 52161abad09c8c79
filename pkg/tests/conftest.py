import pytest
from hypothesis import HealthCheck, settings

from omegasep.algebra import alphabet_completion
from omegasep.corpus import all_algebras, evena_automaton, infa, infinitely_many_a_automaton, universal

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=100,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def infa_pair():
    return infa()


@pytest.fixture(scope="session")
def infa_completed(infa_pair):
    return alphabet_completion(infa_pair[0])


@pytest.fixture(scope="session")
def corpus():
    return all_algebras()


@pytest.fixture(scope="session")
def automata():
    return {"infa": infinitely_many_a_automaton(), "evena": evena_automaton()}


@pytest.fixture(scope="session")
def trivial():
    return universal()


_ACCEPTANCE: dict[int, tuple[str, bool, str, float]] = {}


@pytest.fixture(scope="session")
def record():
    def _record(number, title, ok, detail, seconds):
        _ACCEPTANCE[number] = (title, ok, detail, seconds)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, ok, detail, secs = _ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} [{n:2d}] {title} ({secs:.1f}s): {detail}")
