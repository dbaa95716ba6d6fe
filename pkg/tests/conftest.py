import numpy as np
import pytest

from alipdrs import AlipParams, DrsMotion, Plane, SinusoidTerm


@pytest.fixture
def params():
    return AlipParams(m=46.1, H=0.9, g=9.81, T_step=0.4, W=0.2)


@pytest.fixture
def drs_case_a():
    return DrsMotion(terms=(SinusoidTerm("x", 0.04, 0.4),))


@pytest.fixture
def drs_static():
    return DrsMotion()


def dynamics_matrix(params, plane):
    """Continuous dynamics matrix, assembled independently of the library."""
    a = 1.0 / (params.m * params.H)
    b = params.m * params.g
    if plane is Plane.SAGITTAL:
        return np.array([[0.0, a], [b, 0.0]])
    return np.array([[0.0, -a], [-b, 0.0]])


def expm_series(A, dt, tol=1e-18):
    """Truncated-series matrix exponential oracle."""
    out = np.eye(2)
    term = np.eye(2)
    for k in range(1, 200):
        term = term @ A * (dt / k)
        out = out + term
        if np.abs(term).max() < tol * max(1.0, np.abs(out).max()):
            break
    return out


def rk4_flow(params, drs, plane, state0, t1, t2, h=1e-5):
    """Fixed-step RK4 integration oracle of the continuous dynamics."""
    A = dynamics_matrix(params, plane)
    axis = plane.axis

    def f(t, x):
        return A @ x + np.array([-drs.velocity(axis, t), 0.0])

    n = int(round((t2 - t1) / h))
    h = (t2 - t1) / n if n else 0.0
    x = np.array(state0, dtype=float)
    t = t1
    for _ in range(n):
        k1 = f(t, x)
        k2 = f(t + 0.5 * h, x + 0.5 * h * k1)
        k3 = f(t + 0.5 * h, x + 0.5 * h * k2)
        k4 = f(t + h, x + h * k3)
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return x


def quad_forcing(params, drs, plane, t1, t2):
    """Adaptive-quadrature oracle of the defining forcing integral."""
    from scipy.integrate import quad

    A = dynamics_matrix(params, plane)
    axis = plane.axis
    out = np.zeros(2)
    for i in range(2):
        def integrand(tau, i=i):
            f = np.array([-drs.velocity(axis, tau), 0.0])
            return (expm_series(A, t2 - tau) @ f)[i]
        out[i], _ = quad(integrand, t1, t2, epsabs=1e-12, epsrel=1e-12, limit=300)
    return out
