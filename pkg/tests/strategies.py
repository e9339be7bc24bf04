"""Hypothesis strategies shared across test modules."""
import math

import numpy as np
from hypothesis import strategies as st

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@st.composite
def pointers(draw):
    """Physical (F, G) with F**2 + G**2 <= 1."""
    g = draw(unit)
    f = draw(unit) * math.sqrt(1 - g * g)
    return f, g


@st.composite
def density_matrices(draw, dim=2):
    parts = draw(
        st.lists(st.floats(min_value=-1, max_value=1, allow_nan=False), min_size=2 * dim * dim, max_size=2 * dim * dim)
    )
    z = np.array(parts[: dim * dim]).reshape(dim, dim) + 1j * np.array(parts[dim * dim :]).reshape(dim, dim)
    rho = z @ z.conj().T + 1e-3 * np.eye(dim)
    return rho / np.trace(rho).real


@st.composite
def unit_observables(draw):
    theta = draw(st.floats(min_value=0, max_value=math.pi))
    phi = draw(st.floats(min_value=0, max_value=2 * math.pi))
    u = (math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta))
    return np.array([[u[2], u[0] - 1j * u[1]], [u[0] + 1j * u[1], -u[2]]])


def assert_s_close(got: float, want: float, n: int, tol: float = 1e-10) -> None:
    """Compare S values; near S = 0 compare S**n, where the n-th root's
    infinite slope does not amplify rounding in the I terms."""
    if want > 1e-3:
        assert abs(got - want) < tol, (got, want)
    else:
        assert abs(got**n - want**n) < tol, (got, want)
