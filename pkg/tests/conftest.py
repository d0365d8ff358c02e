import pytest

from spectralwalk import build_path, make_domain

# The two hand-checked reference configurations used throughout:
#   A: middle three vertices of a 5-path; single interior vertex, L = [2]
#   B: middle four vertices of a 6-path; interior pair, L = [[2,-1],[-1,2]]


@pytest.fixture(scope="session")
def path3():
    """Standalone unit-weight 3-path (graph-level examples)."""
    return build_path(3)


@pytest.fixture(scope="session")
def fixture_a():
    return make_domain(build_path(5), {1, 2, 3})


@pytest.fixture(scope="session")
def fixture_b():
    return make_domain(build_path(6), {1, 2, 3, 4})
