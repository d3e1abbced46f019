import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import square_plane_wave_amplitudes
from spinfilter.errors import DegenerateBasisError, EnergyRangeError
from spinfilter.square import (
    SquareDevice,
    contact_bases,
    design_filter_square,
    energy_grid,
    full_s_matrix,
    hamiltonian,
    link_matrices,
    loop_phase,
    phi_r_square,
    self_energy,
    tilted_basis_square,
    transmission,
    transmission_amplitude,
)
from spinfilter.su2 import IDENTITY, SIGMA_X, SIGMA_Y, eig_unitary2, is_unitary

FILTER_THETA = 2 * np.arcsin(2**-0.25)

devices = st.builds(
    SquareDevice,
    t=st.floats(0.5, 2.0),
    theta_l=st.floats(0.0, np.pi),
    phi_b=st.floats(-1.0, 1.0),
    so_kind=st.sampled_from(["rashba", "dresselhaus", "none"]),
    geometry=st.sampled_from(["sym", "asym"]),
)


def _filter_device(**kw):
    phi_b, theta_l = design_filter_square()
    return SquareDevice(theta_l=theta_l, phi_b=phi_b, **kw)


def _eq160(theta_l, phi_b):
    c, s = np.cos(theta_l / 2), np.sin(theta_l / 2)
    return (
        np.exp(2j * np.pi * phi_b)
        * (c * IDENTITY - 1j * s * SIGMA_X)
        @ (c * IDENTITY + 1j * s * SIGMA_Y)
        @ (c * IDENTITY + 1j * s * SIGMA_X)
        @ (c * IDENTITY - 1j * s * SIGMA_Y)
    )


def _same_up_to_phase(u, v, atol=1e-9):
    return abs(abs(np.vdot(u, v)) - np.linalg.norm(u) * np.linalg.norm(v)) < atol


def test_links_trivial():
    for m in link_matrices(SquareDevice(t=1.3)):
        assert np.allclose(m, -1.3 * IDENTITY)


def test_bottom_link_at_pi():
    bottom = link_matrices(SquareDevice(theta_l=np.pi))[0]
    assert np.allclose(bottom, 1j * SIGMA_Y)


@given(devices)
def test_link_singular_values(d):
    for m in link_matrices(d):
        assert np.allclose(np.linalg.svd(m, compute_uv=False), d.t)


@given(devices)
def test_hamiltonian_hermitian(d):
    h = hamiltonian(d)
    assert np.allclose(h, h.conj().T, atol=1e-12)


def test_ab_weights_constraint():
    with pytest.raises(ValueError):
        SquareDevice(ab_weights=(0, 0, 0, 0))


def test_loop_phase_trivial():
    assert np.allclose(loop_phase(SquareDevice()), IDENTITY)


@settings(max_examples=50)
@given(st.floats(0, 2 * np.pi), st.floats(-1, 1))
def test_loop_phase_matches_closed_product(theta_l, phi_b):
    assert np.allclose(loop_phase(SquareDevice(theta_l=theta_l, phi_b=phi_b)), _eq160(theta_l, phi_b), atol=1e-12)


def test_loop_phase_filter_eigenvalues():
    phases, _ = eig_unitary2(loop_phase(_filter_device()))
    assert np.allclose(np.exp(1j * phases), [-1, 1], atol=1e-12)


def test_loop_phase_small_angle_against_eig():
    d = SquareDevice(theta_l=0.3)
    phases, _ = eig_unitary2(loop_phase(d))
    phi_r = phi_r_square(0.3)
    assert np.allclose(phases, [2 * np.pi * phi_r, -2 * np.pi * phi_r], atol=1e-12)


@pytest.mark.parametrize("kind", ["rashba", "dresselhaus"])
def test_loop_phase_eigenphases_random(kind):
    rng = np.random.default_rng(7)
    for theta_l, phi_b in zip(rng.uniform(0, np.pi, 100), rng.uniform(-0.5, 0.5, 100)):
        phases, _ = eig_unitary2(loop_phase(SquareDevice(theta_l=theta_l, phi_b=phi_b, so_kind=kind)))
        expected = 2 * np.pi * (phi_b + np.array([1, -1]) * phi_r_square(theta_l))
        z = np.exp(1j * phases)
        ze = np.exp(1j * expected)
        assert np.allclose(np.sort_complex(z), np.sort_complex(ze), atol=1e-10) or np.allclose(
            np.sort_complex(z), np.sort_complex(ze[::-1]), atol=1e-10
        )


def test_phi_r_square_values():
    assert phi_r_square(0.0) == 0.0
    assert phi_r_square(FILTER_THETA) == pytest.approx(0.25, abs=1e-15)
    assert phi_r_square(np.pi) == pytest.approx(0.5, abs=1e-15)


def test_phi_r_square_monotone():
    vals = [phi_r_square(x) for x in np.linspace(0, np.pi, 500)]
    assert np.all(np.diff(vals) > 0)


def test_phi_r_square_small_angle():
    # lowest order: 2 pi phi_R = (theta l)^2 / 2
    for x in (1e-2, 1e-3):
        assert phi_r_square(x) / (x**2 / (4 * np.pi)) == pytest.approx(1, rel=1e-3)


def test_tilted_basis_matches_closed_form():
    up, down = tilted_basis_square(_filter_device())
    up_ref = np.array([2**-0.25 * np.exp(-1j * np.pi / 4), -np.sqrt(1 - 1 / np.sqrt(2))])
    down_ref = np.array([np.sqrt(1 - 1 / np.sqrt(2)), 2**-0.25 * np.exp(1j * np.pi / 4)])
    assert _same_up_to_phase(up, up_ref)
    assert _same_up_to_phase(down, down_ref)
    assert np.allclose(np.abs(up_ref), [np.sqrt(2) * 0.5946, 0.5412], atol=1e-4)


def test_tilted_basis_degenerate():
    with pytest.raises(DegenerateBasisError):
        tilted_basis_square(SquareDevice(theta_l=1e-9, phi_b=0.2))


def test_tilted_basis_eigenvalue_labels():
    d = SquareDevice(theta_l=0.8, phi_b=0.1)
    up, down = tilted_basis_square(d)
    u = loop_phase(d)
    phi_r = phi_r_square(0.8)
    assert np.allclose(u @ up, np.exp(2j * np.pi * (0.1 + phi_r)) * up)
    assert np.allclose(u @ down, np.exp(2j * np.pi * (0.1 - phi_r)) * down)


def test_self_energy_values():
    d = SquareDevice(t=1.0)
    assert np.allclose(self_energy(d, 0.0)[0], -1j * IDENTITY)
    assert np.allclose(self_energy(d, 1.0)[1], (1 - 1j * np.sqrt(3)) / 2 * IDENTITY)
    for e in (2.0, -2.0, 3.0):
        with pytest.raises(EnergyRangeError):
            self_energy(d, e)
    assert self_energy(d, 0.4)[0][0, 0].imag < 0


def test_transmission_trivial_square_frozen():
    # values from the plane-wave matching oracle: T = 1 at E = 0, 60/61 at E = t/2
    d = SquareDevice()
    rec = transmission(d, 0.0)
    assert rec.basis_fallback
    assert np.allclose(rec.coefficients, [1, 0, 0, 1], atol=1e-12)
    assert np.allclose(transmission(d, 0.5).coefficients, [60 / 61, 0, 0, 60 / 61], atol=1e-12)
    assert np.allclose(transmission(SquareDevice(geometry="asym"), 0.0).coefficients, 0, atol=1e-12)


def test_transmission_half_flux_blocks_everything():
    d = SquareDevice(phi_b=0.5)
    assert np.allclose(transmission(d, 0.0).coefficients, 0, atol=1e-12)
    for e in energy_grid(n=50):
        assert transmission(d, e).up_output + transmission(d, e).down_output < 1e-12


@settings(max_examples=60, deadline=None)
@given(devices, st.floats(-0.99, 0.99))
def test_transmission_matches_plane_wave_oracle(d, x):
    e = 2 * d.t * x
    amp = square_plane_wave_amplitudes(d.t, d.theta_l, d.phi_b, e, d.output_site, d.so_kind.value)
    assert np.allclose(np.abs(amp) ** 2, np.abs(transmission_amplitude(d, e)) ** 2, atol=1e-10)


@settings(max_examples=60, deadline=None)
@given(devices, st.floats(-0.99, 0.99))
def test_transmission_bounds(d, x):
    rec = transmission(d, 2 * d.t * x)
    t = np.array(rec.coefficients)
    assert np.all(t >= -1e-10) and np.all(t <= 1 + 1e-10)
    assert t.sum() <= 2 + 1e-10


def test_transmission_explicit_basis():
    d = _filter_device()
    rec = transmission(d, 0.3, basis=(np.array([1, 0]), np.array([0, 1])))
    assert np.allclose(rec.t_matrix, transmission_amplitude(d, 0.3))
    assert rec.T.sum() == pytest.approx(transmission(d, 0.3).T.sum())


def test_output_basis_is_holonomy_eigenbasis_at_output():
    d = _filter_device()
    b_in, b_out, fallback = contact_bases(d)
    assert not fallback
    bottom, _, _, right = (m / -d.t for m in link_matrices(d))
    p = right @ bottom
    u_out = p @ loop_phase(d) @ p.conj().T
    assert np.allclose(u_out @ b_out[:, 0], -b_out[:, 0])
    assert np.allclose(u_out @ b_out[:, 1], b_out[:, 1])


@settings(max_examples=40, deadline=None)
@given(devices, st.floats(-0.99, 0.99))
def test_s_matrix_unitary(d, x):
    s = full_s_matrix(d, 2 * d.t * x)
    assert np.allclose(s.conj().T @ s, np.eye(4), atol=1e-10)


def test_s_matrix_block_matches_amplitude():
    d = SquareDevice(theta_l=0.9, phi_b=0.17, t=1.4, geometry="asym")
    s = full_s_matrix(d, 0.6)
    assert np.allclose(np.abs(s[2:4, 0:2]), np.abs(transmission_amplitude(d, 0.6)))


def test_s_matrix_spin_independent_device():
    s = full_s_matrix(SquareDevice(), 0.7)
    assert np.allclose(s[0::2, 1::2], 0) and np.allclose(s[1::2, 0::2], 0)


def test_s_matrix_filter_null_direction():
    d = _filter_device()
    s = full_s_matrix(d, -0.4)
    b_in, b_out, _ = contact_bases(d)
    block = s[2:4, 0:2]
    assert np.linalg.norm(b_out[:, 0].conj() @ block) < 1e-12
    assert np.linalg.norm(block @ b_in[:, 0]) < 1e-12


def test_s_matrix_outside_band():
    with pytest.raises(EnergyRangeError):
        full_s_matrix(SquareDevice(), 2.5)


def test_design_filter_square():
    phi_b, theta_l = design_filter_square()
    assert phi_b == 0.25
    assert theta_l == pytest.approx(2 * np.arcsin(2**-0.25), abs=1e-12)
    assert f"{theta_l:.3f}" == "1.998" and str(theta_l).startswith("1.997")
    assert abs(phi_r_square(theta_l) - 0.25) <= 1e-12


def test_filter_symmetric():
    d = _filter_device()
    recs = [transmission(d, e) for e in energy_grid()]
    assert max(r.up_output for r in recs) <= 1e-10
    assert max(r.down_output for r in recs) > 0.5


def test_filter_asymmetric_fails():
    d = _filter_device(geometry="asym")
    assert max(transmission(d, e).up_output for e in energy_grid()) > 1e-3


def test_flux_reversal_swaps_spins():
    phi_b, theta_l = design_filter_square()
    d = SquareDevice(theta_l=theta_l, phi_b=-phi_b)
    recs = [transmission(d, e) for e in energy_grid(n=100)]
    assert max(r.down_output for r in recs) <= 1e-10
    assert max(r.up_output for r in recs) > 0.5


@pytest.mark.parametrize(
    "weights",
    [(1.0, 0.0, 0.0, 0.0), (0.0, 0.0, 0.0, 1.0), (0.25, -0.25, -0.25, 0.25), (0.5, 0.3, 0.0, 0.8)],
)
def test_abelian_gauge_invariance(weights):
    base = SquareDevice(theta_l=1.2, phi_b=0.37)
    moved = SquareDevice(theta_l=1.2, phi_b=0.37, ab_weights=weights)
    for e in energy_grid(n=40):
        t0 = np.abs(transmission_amplitude(base, e)) ** 2
        t1 = np.abs(transmission_amplitude(moved, e)) ** 2
        assert np.allclose(t0, t1, atol=1e-10)
        assert np.allclose(transmission(base, e).T, transmission(moved, e).T, atol=1e-10)
