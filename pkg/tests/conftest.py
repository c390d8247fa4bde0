import numpy as np
import pytest

from gspurify.graphs import GraphKind, standard_graph


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def ghz3():
    return standard_graph(GraphKind.GHZ, 3)


@pytest.fixture
def ghz4():
    return standard_graph(GraphKind.GHZ, 4)


@pytest.fixture
def path4():
    return standard_graph(GraphKind.LINEAR_CLUSTER, 4)


@pytest.fixture
def ring4():
    return standard_graph(GraphKind.CLOSED_CLUSTER, 4)


@pytest.fixture
def small_graphs(ghz3, ghz4, path4, ring4):
    return [ghz3, ghz4, path4, ring4]
