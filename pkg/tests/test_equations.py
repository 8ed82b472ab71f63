import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from activeflux.equations import Burgers, DomainError, Euler, LinearAdvection, split_jacobian
from activeflux.verify import random_euler_states

EULER = Euler(1.4)


def fd_jacobian(fun, U, rel=1e-6):
    J = np.empty((3, 3))
    for j in range(3):
        h = rel * max(abs(U[j]), 1e-3)
        e = np.zeros(3)
        e[j] = h
        J[:, j] = (fun(U + e) - fun(U - e)) / (2 * h)
    return J


def test_euler_flux_at_rest_is_pressure_only():
    np.testing.assert_allclose(EULER.flux([1.0, 0.0, 1.0]), [0.0, 0.4, 0.0], atol=1e-15)


def test_euler_flux_moving_state_by_hand():
    # rho = v = p = 1: E = 1/0.4 + 1/2 = 3, F = (1, 1 + 1, (3 + 1) * 1)
    U = EULER.conserved(1.0, 1.0, 1.0)
    np.testing.assert_allclose(U, [1.0, 1.0, 3.0])
    np.testing.assert_allclose(EULER.flux(U), [1.0, 2.0, 4.0], rtol=1e-15)


def test_scalar_fluxes():
    assert Burgers().flux(np.array([2.0])) == pytest.approx(2.0)
    assert LinearAdvection(3.0).flux(np.array([2.0])) == pytest.approx(6.0)


def test_euler_flux_rejects_nonpositive_density():
    with pytest.raises(DomainError, match="density"):
        EULER.flux([0.0, 0.0, 1.0])


def test_eigenvalues_examples():
    U = EULER.conserved(1.0, 0.0, 1.0 / 1.4)
    np.testing.assert_allclose(EULER.eigenvalues(U), [-1.0, 0.0, 1.0], atol=1e-15)
    assert LinearAdvection(1.0).eigenvalues(np.array([0.3])) == pytest.approx(1.0)
    assert Burgers().eigenvalues(np.array([-1.0])) == pytest.approx(-1.0)


def test_eigenvalues_reject_negative_pressure():
    with pytest.raises(DomainError, match="pressure"):
        EULER.eigenvalues([1.0, 2.0, 1.0])


def test_mirror_states_negate_and_reverse_eigenvalues():
    a = EULER.eigenvalues(EULER.conserved(1.3, 0.7, 2.0))
    b = EULER.eigenvalues(EULER.conserved(1.3, -0.7, 2.0))
    np.testing.assert_allclose(a, -b[::-1], rtol=1e-14)


def test_eigensystem_reconstructs_analytic_jacobian(rng):
    U = random_euler_states(rng, 1000)
    R, lam, Rinv = EULER.eigensystem(U)
    J = np.einsum("nij,nj,njk->nik", R, lam, Rinv)
    Ja = EULER.jacobian(U)
    scale = np.linalg.norm(Ja, axis=(1, 2))[:, None, None]
    assert np.max(np.abs(J - Ja) / scale) < 1e-12
    eye = np.einsum("nij,njk->nik", Rinv, R)
    assert np.max(np.abs(eye - np.eye(3))) < 1e-12
    np.testing.assert_allclose(R[:, 0, :], 1.0)


def test_eigensystem_matches_finite_difference_jacobian(rng):
    U = random_euler_states(rng, 1000)
    R, lam, Rinv = EULER.eigensystem(U)
    J = np.einsum("nij,nj,njk->nik", R, lam, Rinv)
    worst = 0.0
    for i in range(U.shape[0]):
        Jfd = fd_jacobian(EULER.flux, U[i])
        worst = max(worst, np.linalg.norm(J[i] - Jfd) / np.linalg.norm(Jfd))
    assert worst <= 1e-5


def test_scalar_eigensystem_is_trivial():
    R, lam, Rinv = LinearAdvection(2.0).eigensystem(np.array([[0.5]]))
    assert R[0, 0, 0] == 1.0 and Rinv[0, 0, 0] == 1.0 and lam[0, 0] == 2.0


def test_split_jacobian_sums_to_jacobian(rng):
    U = random_euler_states(rng, 200)
    Jp, Jm = split_jacobian(EULER, U)
    np.testing.assert_allclose(Jp + Jm, EULER.jacobian(U), rtol=1e-10, atol=1e-10 * np.abs(EULER.jacobian(U)).max())


def test_pressure_examples():
    assert EULER.pressure([1.0, 0.0, 1.0]) == pytest.approx(0.4)
    assert EULER.pressure([2.0, 2.0, 2.0]) == pytest.approx(0.4)
    # linear in E at zero velocity
    assert EULER.pressure([3.0, 0.0, 5.0]) == pytest.approx(0.4 * 5.0)


def test_admissibility_examples():
    assert EULER.is_admissible([1.0, 0.0, 1.0])
    assert not EULER.is_admissible([1.0, 2.0, 1.0])
    assert not EULER.is_admissible([np.nan, 0.0, 1.0])
    assert not EULER.is_admissible([1.0, 0.0, np.inf])
    k = LinearAdvection(1.0, bounds=(0.0, 1.0))
    assert k.is_admissible(np.array([0.0])) and k.is_admissible(np.array([1.0]))
    assert not k.is_admissible(np.array([1.0 + 1e-16 * 4]))


def test_gamma_must_exceed_one():
    with pytest.raises(ValueError):
        Euler(1.0)


@given(
    st.floats(1e-3, 1e3), st.floats(-50.0, 50.0), st.floats(1e-3, 1e3),
)
def test_primitive_round_trip(rho, v, p):
    U = EULER.conserved(rho, v, p)
    r, w, q = EULER.primitive(U)
    assert r == pytest.approx(rho, rel=1e-14)
    assert w == pytest.approx(v, rel=1e-14, abs=1e-14)
    # cancellation in E - m^2 / (2 rho) costs up to the kinetic-to-internal energy ratio
    kin = 0.5 * rho * v * v / (p / 0.4)
    assert q == pytest.approx(p, rel=1e-14 * (1.0 + 4.0 * kin))


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1), st.floats(0.0, 1.0))
def test_admissible_set_is_convex(seed, t):
    r = np.random.default_rng(seed)
    U1, U2 = random_euler_states(r, 2)
    assert EULER.is_admissible(t * U1 + (1.0 - t) * U2)
