import numpy as np
import pytest

from henonlab import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile every jit kernel once so timed tests measure compute, not JIT."""
    a, b = 1.4, 0.3
    _kernels.lyap_largest_kernel(0.1, 0.1, a, b, 1.0, 0.0, 10, 2, 1, 1e8)
    _kernels.lyap_spectrum_kernel(0.1, 0.1, a, b, 1.0, 0.0, 10, 2, 1e8)
    _kernels.classify_kernel(0.1, 0.1, a, b, 0.5, 0.5, 10, 8, 1e-6, 4, 10, 2, 1, 1e-3, 1e8)
    _kernels.scan_grid_kernel(
        np.array([0.5]), np.array([0.5]), a, b, 0, 2, 0.0, 1.0, 0.0, 1.0,
        10, 2, 1, 10, 8, 1e-6, 4, 1e-3, 1e8,
    )
    _kernels.bifurcation_line_kernel(
        np.array([0.5]), np.array([0.5]), a, b, 0, 10, 8, 1e-6, 4, 4,
        10, 2, 1, 1e-3, 1e8, True,
    )
    _kernels.period_of_tail(np.zeros((8, 2)), 1e-6, 4)
    _kernels.mix2(np.uint64(1), np.uint64(2))
    _kernels.mix3(np.uint64(1), np.uint64(2), np.uint64(3))
    _kernels.unif_at(np.uint64(1), 1)
