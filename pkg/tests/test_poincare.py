import dataclasses
import math

import numpy as np
import pytest

from oracles import literal_map_inertial, literal_map_juggler
from stickjuggle.errors import NonDescendingPostImpulse
from stickjuggle.flight import flight_constants, precession_increment, propagate_flight
from stickjuggle.impulse import application_point_inertial, apply_impulse, impulse_direction_inertial, kinetic_energy
from stickjuggle.poincare import PoincareSection, block_rotation, map_inertial, map_juggler
from stickjuggle.rotations import angular_momentum, euler_rate_matrix, rot_z
from stickjuggle.states import (
    ControlInput,
    SectionStateInertial,
    SectionStateJuggler,
    SectionVelocities,
    to_inertial,
    to_juggler,
)

B = math.pi / 3


def random_case(rng, fp, J=0.1 * 0.5**2 / 12):
    """A perturbed fixed-point state and input whose flight is admissible."""
    y0 = fp.y_star.as_array()
    u0 = fp.u_star.as_array()
    while True:
        y = y0 + rng.normal(scale=[0.2, 0.2, 0.2, 0.3, 0.3, 0.3, 0.5, 0.3])
        u = u0 + rng.normal(scale=[0.05, 0.003, 0.1])
        u[0] = abs(u[0])
        u[1] = min(abs(u[1]), 0.25)
        bd_plus = y[7] - u[0] * u[1] * math.cos(u[2]) / J
        if bd_plus < -0.5:
            return SectionStateJuggler.from_array(y), ControlInput.from_array(u)


def test_fixed_point_maps_to_itself(fp_ref, params):
    nxt, rec = map_juggler(fp_ref.y_star, fp_ref.u_star, B, params)
    assert np.max(np.abs(nxt.as_array() - fp_ref.y_star.as_array())) < 1e-9
    assert abs(rec.delta_alpha - 2 * math.pi / 3) < 1e-9
    np.testing.assert_allclose(nxt.v_bar, [1.6991, 0.9810, -2.9430], atol=1e-4)


def test_three_steps_close_the_orbit(fp_ref, params):
    y = to_inertial(fp_ref.y_star, 0.4)
    sec = PoincareSection(B, params)
    cur = y
    for _ in range(3):
        cur, _ = sec.map_inertial(cur, fp_ref.u_star)
    np.testing.assert_allclose(cur.as_array()[:6], y.as_array()[:6], atol=1e-8)
    assert abs(cur.alpha - y.alpha - 2 * math.pi) < 1e-8
    np.testing.assert_allclose(cur.as_array()[7:], y.as_array()[7:], atol=1e-8)


def test_height_bookkeeping(rng, fp_ref, params):
    yj, u = random_case(rng, fp_ref)
    y = to_inertial(yj, 1.1)
    nxt, rec = map_inertial(y, u, B, params)
    vz_plus = y.v[2] + u.I / params.m * impulse_direction_inertial(y.alpha, B, u.phi)[2]
    d = rec.flight.delta
    assert nxt.h[2] - y.h[2] == pytest.approx(vz_plus * d - 0.5 * params.g * d * d, abs=1e-13)


def test_composition_of_impulse_and_flight(rng, fp_ref, params):
    for _ in range(20):
        yj, u = random_case(rng, fp_ref)
        y = to_inertial(yj, rng.uniform(-3, 3))
        post = apply_impulse(SectionVelocities(y.v, y.alpha_dot, y.beta_dot), u, y.alpha, B, params)
        fc = flight_constants(post.alpha_dot, post.beta_dot, B)
        full = propagate_flight(dataclasses.replace(y.to_full(B), v=post.v, alpha_dot=post.alpha_dot,
                                                    beta_dot=post.beta_dot), fc, params)
        nxt, rec = map_inertial(y, u, B, params)
        np.testing.assert_allclose(nxt.h, full.h, atol=1e-13)
        np.testing.assert_allclose(nxt.v, full.v, atol=1e-13)
        assert nxt.alpha == full.alpha and nxt.beta_dot == full.beta_dot
        assert rec.next is nxt and rec.pre is y


def test_literal_component_maps(rng, fp_ref, params):
    m, J, g = params.m, params.J, params.g
    for _ in range(50):
        yj, u = random_case(rng, fp_ref)
        nxt_j, _ = map_juggler(yj, u, B, params)
        np.testing.assert_allclose(nxt_j.as_array(), literal_map_juggler(yj.as_array(), u.as_array(), B, m, J, g),
                                   atol=1e-11)
        y = to_inertial(yj, rng.uniform(-3, 3))
        nxt_i, _ = map_inertial(y, u, B, params)
        np.testing.assert_allclose(nxt_i.as_array(), literal_map_inertial(y.as_array(), u.as_array(), B, m, J, g),
                                   atol=1e-11)


def test_commutes_with_frame_rotation(rng, fp_ref, params):
    for _ in range(50):
        yj, u = random_case(rng, fp_ref)
        a = rng.uniform(-10, 10)
        y = to_inertial(yj, a)
        nxt_i, _ = map_inertial(y, u, B, params)
        nxt_j, _ = map_juggler(to_juggler(y, a), u, B, params)
        np.testing.assert_allclose(to_juggler(nxt_i, nxt_i.alpha).as_array(), nxt_j.as_array(), atol=1e-10)
        np.testing.assert_allclose(rot_z(nxt_i.alpha) @ nxt_j.h_bar, nxt_i.h, atol=1e-10)


def test_independent_of_cyclic_coordinates(rng, fp_ref, params):
    """Shifting alpha (with h, v rotated along) leaves the juggler image unchanged."""
    yj, u = random_case(rng, fp_ref)
    ref = None
    for a in (0.0, 0.7, -2.0, 11.0):
        y = to_inertial(yj, a)
        nxt, _ = map_inertial(y, u, B, params)
        img = to_juggler(nxt, nxt.alpha).as_array()
        ref = img if ref is None else ref
        np.testing.assert_allclose(img, ref, atol=1e-10)


def test_block_rotation_structure():
    R = block_rotation(0.8)
    np.testing.assert_allclose(R[0:3, 0:3], rot_z(0.8))
    np.testing.assert_allclose(R[3:6, 3:6], rot_z(0.8))
    assert np.array_equal(R[6:, 6:], np.eye(2))
    assert np.count_nonzero(R[0:3, 3:]) == 0 and np.count_nonzero(R[6:, :6]) == 0


def test_step_energy_bookkeeping(rng, fp_ref, params):
    """Kinetic-energy change equals impulse times the average of pre and post velocities."""
    for _ in range(30):
        yj, u = random_case(rng, fp_ref)
        y = to_inertial(yj, rng.uniform(-3, 3))
        _, rec = map_inertial(y, u, B, params)
        post = rec.post
        f = impulse_direction_inertial(y.alpha, B, u.phi)
        L = np.cross(application_point_inertial(y.alpha, B, u.r), u.I * f)
        S = euler_rate_matrix(y.alpha, B)
        w0 = S @ [y.alpha_dot, y.beta_dot, 0]
        w1 = S @ [post.alpha_dot, post.beta_dot, 0]
        work = u.I * f @ (y.v + post.v) / 2 + L @ (w0 + w1) / 2
        dke = kinetic_energy(post.v, post.alpha_dot, B, post.beta_dot, params) - kinetic_energy(
            y.v, y.alpha_dot, B, y.beta_dot, params)
        assert dke == pytest.approx(work, abs=1e-12, rel=1e-10)
        # the angular impulse is fully accounted for
        H0 = angular_momentum(y.alpha, B, y.alpha_dot, y.beta_dot, params.J)
        H1 = angular_momentum(y.alpha, B, post.alpha_dot, post.beta_dot, params.J)
        np.testing.assert_allclose(H1 - H0, L, atol=1e-12)


def test_rejects_non_descending(fp_ref, params):
    # without an impulse the ascending arrival rate is kept, so no flight exists
    y = fp_ref.y_star
    with pytest.raises(NonDescendingPostImpulse):
        map_juggler(y, ControlInput(0.0, 0.0, 0.0), B, params)
    with pytest.raises(NonDescendingPostImpulse):
        map_inertial(to_inertial(y, 0.0), ControlInput(0.0, 0.0, 0.0), B, params)


def test_frame_transforms(rng):
    y = SectionStateInertial(rng.normal(size=3), rng.normal(size=3), 0.3, 1.0, -2.0)
    assert np.array_equal(to_juggler(y, 0.0).as_array(), np.delete(y.as_array(), 6))
    for a in rng.uniform(-7, 7, size=20):
        back = to_inertial(to_juggler(y, a), a)
        np.testing.assert_allclose(back.h, y.h, atol=1e-12)
        np.testing.assert_allclose(back.v, y.v, atol=1e-12)
        assert math.isclose(np.linalg.norm(to_juggler(y, a).h_bar), np.linalg.norm(y.h), rel_tol=1e-14)


def test_section_is_immutable(params):
    sec = PoincareSection(B, params)
    with pytest.raises(dataclasses.FrozenInstanceError):
        sec.beta_star = 1.0


def test_vector_map_matches_object_map(fp_ref, params):
    sec = PoincareSection(B, params)
    y = fp_ref.y_star.as_array() + 0.01
    out = sec.juggler_vector_map(y, fp_ref.u_star.as_array())
    nxt, _ = sec.map_juggler(SectionStateJuggler.from_array(y), fp_ref.u_star)
    assert np.array_equal(out, nxt.as_array())
    assert precession_increment(2.0, -1.0, B) > 0
