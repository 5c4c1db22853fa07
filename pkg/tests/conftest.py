import pytest

from lleb.models.primary import primary_points_by_k
from lleb.models.trivial import Params

# Bifurcation points on T for f=1.6, d=0.1: k -> ((t_1, zeta_1), (t_2, zeta_2))
TABLE = {
    1: ((0.10528, 2.63750), (0.77130, 2.24888)),
    2: ((-0.18543, 2.28327), (0.75556, 2.25196)),
    3: ((-0.52046, 1.25702), (0.72127, 2.26952)),
    4: ((-0.72866, 0.13682), (0.66089, 2.32248)),
    5: ((-0.77281, -0.18666), (0.56321, 2.42954)),
    6: ((-0.61695, 0.80166), (0.40312, 2.58449)),
    7: ((-0.20600, 2.24085), (0.01535, 2.57475)),
}
TABLE_TOL = 2e-5


@pytest.fixture(scope="session")
def params():
    return Params(d=0.1, f=1.6)


@pytest.fixture(scope="session")
def by_k(params):
    return primary_points_by_k(params)
