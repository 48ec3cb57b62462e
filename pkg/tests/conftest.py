import pytest

from qduflo.cli.parse import load
from qduflo.liealg import chevalley_q


@pytest.fixture(scope="session")
def corpus():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load(name)
        return cache[name]
    return get


@pytest.fixture(scope="session")
def sl2(corpus):
    return corpus("sl2.alg")


@pytest.fixture(scope="session")
def q_of(corpus):
    def get(name):
        obj = corpus(name)
        return obj if name.endswith(".q") else chevalley_q(obj)
    return get


# acceptance lines, echoed in the terminal summary so they show without -s
ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    import time

    class Recorder:
        def __init__(self):
            self.t0 = time.perf_counter()

        def report(self, number, label, ok, limit_s, detail="", extra_s=0.0):
            dt = time.perf_counter() - self.t0 + extra_s
            within = dt <= limit_s
            status = "PASS" if ok and within else "FAIL"
            line = (f"[criterion {number:>2}] {status}  {label}  "
                    f"({dt:.2f}s, limit {limit_s:g}s, exact){'  ' + detail if detail else ''}")
            ACCEPTANCE_LINES.append(line)
            print(line)
            assert ok, line
            assert within, f"{line}: time limit exceeded"
    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip("]"))):
            terminalreporter.write_line(line)
