import os
import sys
from pathlib import Path

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from diffauction.network import AuctionInstance, BuyerType

settings.register_profile(
    "default", deadline=None, max_examples=150, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", deadline=None, max_examples=400, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"
sys.path.insert(0, str(Path(__file__).parent))


@st.composite
def instances(draw, max_n=7, max_k=4, max_value=20, min_n=0):
    """Arbitrary digraph instances, cycles allowed."""
    n = draw(st.integers(min_n, max_n))
    k = draw(st.integers(1, max_k))
    values = draw(st.lists(st.integers(0, max_value), min_size=n, max_size=n))
    types = []
    for i in range(n):
        others = [j for j in range(n) if j != i]
        f = draw(st.sets(st.sampled_from(others), max_size=3)) if others else set()
        types.append(BuyerType(values[i], frozenset(f)))
    direct = draw(st.sets(st.integers(0, n - 1), max_size=n)) if n else set()
    return AuctionInstance(k=k, seller_followers=frozenset(direct), types=tuple(types), value_cap=max_value)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
