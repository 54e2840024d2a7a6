"""
Shared pytest fixtures and configuration.
"""
import pytest
import tempfile
import shutil
from pathlib import Path
from typing import Generator

from spherebounds.core.options import SolverOptions
from spherebounds.solvers.sphere_constants import cached_grid


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for testing."""
    temp_path = Path(tempfile.mkdtemp())
    yield temp_path
    shutil.rmtree(temp_path)


@pytest.fixture(scope="session")
def opts() -> SolverOptions:
    """Default solver options."""
    return SolverOptions()


@pytest.fixture(scope="session")
def small_opts() -> SolverOptions:
    """Coarse options for tests that only need the right branch or sign."""
    return SolverOptions(grid_size=48, max_grid_size=96, max_iterations=4000)


@pytest.fixture(scope="session")
def grid1():
    """Gauss-Jacobi grid on the circle."""
    return cached_grid(1, 64)


@pytest.fixture(scope="session")
def grid3():
    """Gauss-Jacobi grid on S^3."""
    return cached_grid(3, 64)


@pytest.fixture
def options_yaml(temp_dir: Path) -> Path:
    """A solver options file overriding a few knobs."""
    path = temp_dir / "solver.yaml"
    path.write_text("grid_size: 64\nmax_iterations: 5000\nseeds: [0.2, 0.4]\n")
    return path


@pytest.fixture
def potential_csv(temp_dir: Path) -> Path:
    """A smooth potential sampled on a uniform latitude grid."""
    import numpy as np

    z = np.linspace(-1.0, 1.0, 21)
    path = temp_dir / "potential.csv"
    rows = "\n".join(f"{zi:.17g},{2.0 + zi ** 2:.17g}" for zi in z)
    path.write_text("z,V\n" + rows + "\n")
    return path
