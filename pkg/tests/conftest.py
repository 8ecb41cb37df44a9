import os
import random
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from abgog.abelian import FgAbGroup  # noqa: E402
from abgog.gog import load  # noqa: E402
from abgog.sampling import random_graph  # noqa: E402

DATA = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def data_path(name):
    return os.path.join(DATA, name)


@pytest.fixture
def bs23():
    return load(data_path("bs23.gog"))


@pytest.fixture
def torsion_graph():
    return load(data_path("torsion.gog"))


@pytest.fixture
def two_vertex():
    return load(data_path("gbs_two_vertex.gog"))


groups = st.builds(FgAbGroup, st.integers(0, 3),
                   st.lists(st.integers(2, 6), max_size=2).map(tuple))

seeds = st.integers(0, 10 ** 6)


def graph_from_seed(seed, **kw):
    return random_graph(random.Random(seed), **kw)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
