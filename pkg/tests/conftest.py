import itertools

import pytest

from gcvss.graph import build_graph

ACCEPTANCE_LINES = []


class ScriptedRng:
    """Stand-in for a numpy Generator that replays fixed draws."""

    def __init__(self, *draws):
        self.draws = list(draws)

    def integers(self, low, high=None, size=None):
        return self.draws.pop(0)

    def choice(self, a, size=None, replace=True):
        return self.draws.pop(0)


@pytest.fixture
def example1():
    # 4 vertices, edges 1-3, 1-4, 2-3, 3-4
    return build_graph(4, [(1, 3), (1, 4), (2, 3), (3, 4)])


def brute_force_colorings(g, n):
    """All proper colorings with digits < n, in lexicographic order."""
    for digits in itertools.product(range(n), repeat=g.m):
        if all(digits[i - 1] != digits[j - 1] for i, j in g.edges):
            yield digits


def brute_force_chromatic(g):
    return next(n for n in range(1, g.m + 1) if any(True for _ in brute_force_colorings(g, n)))


def brute_force_clique(g):
    best = 1
    for size in range(2, g.m + 1):
        for vs in itertools.combinations(range(1, g.m + 1), size):
            if all(g.has_edge(a, b) for a, b in itertools.combinations(vs, 2)):
                best = size
                break
    return best


@pytest.fixture
def acceptance():
    class Recorder:
        def record(self, number, title, ok, detail=""):
            line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
            if detail:
                line += f" -- {detail}"
            ACCEPTANCE_LINES.append(line)
            print(line)
            return ok

    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
