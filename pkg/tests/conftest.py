import pytest

from src.harness import HarnessContext
from src.root_datum import RootDatum
from src.sampling import RadialGrid

# small grids keep the suite fast; accuracy targets below are set for them
SMALL_X_MAX = 12.0
SMALL_LAMBDA_MAX = 24.0
SMALL_ORDER = 24

@pytest.fixture(scope="session")
def radial_grid():
    return RadialGrid.build(SMALL_X_MAX, SMALL_ORDER)

@pytest.fixture(scope="session")
def spectral_grid():
    return RadialGrid.build(SMALL_LAMBDA_MAX, SMALL_ORDER)

@pytest.fixture(scope="session")
def datum():
    return RootDatum.rank_one(1.0, 0.0)

@pytest.fixture(scope="session")
def context(datum, radial_grid, spectral_grid):
    return HarnessContext.build(datum, radial_grid, spectral_grid)

@pytest.fixture(scope="session")
def calibrated(context):
    return context.datum

# the grids of configs/default.toml, for the multi-datum acceptance checks
DATA = [(1.0, 0.0), (2.0, 1.0), (0.5, 0.3)]

@pytest.fixture(scope="session", params=DATA, ids=lambda m: f"m={m[0]:g},{m[1]:g}")
def datum_context(request):
    return HarnessContext.build(RootDatum.rank_one(*request.param), RadialGrid.build(16.0, 32),
                                RadialGrid.build(40.0, 32))

@pytest.fixture(scope="session")
def product_context():
    radial = RadialGrid.build(8.0, 12)
    spectral = RadialGrid.build(16.0, 12)
    return HarnessContext.build(RootDatum.flat_product(1.0, 2.0), radial, spectral)

@pytest.fixture
def small_config_text():
    return """
output_dir = "out"
seed = 7

[datum]
kind = "rank_one"
multiplicities = [1.0, 0.0]

[grid]
x_max = 12.0
lambda_max = 24.0
panel_order = 24

[[suites]]
id = "hy"
check = "hausdorff_young"
p = 1.5

[[suites]]
id = "closed"
check = "closed_forms"
"""
