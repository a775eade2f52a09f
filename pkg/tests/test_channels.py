import math

import numpy as np
import pytest

from ngcorr.channels import (
    apply_loss,
    beam_splitter,
    ecs_loss_analytic,
    ecs_weights,
    loss_kraus,
)
from ngcorr.fock import distance, expect, ladder_ops, pure_state, tensor
from ngcorr.states import StateSpec, coherent_amps, make_state


def test_loss_kraus_completeness():
    ks = loss_kraus(0.63, 15)
    total = sum(k.conj().T @ k for k in ks.ops)
    assert np.max(np.abs(total - np.eye(15))) < 1e-12


def test_loss_identity_and_full_loss():
    st = make_state(StateSpec("coherent", {"gamma": 0.8}, cutoff=16))
    same = apply_loss(st, 1.0)
    assert distance("trace", st, same) < 1e-12
    dead = apply_loss(st, 0.0)
    assert dead.rho[0, 0].real == pytest.approx(1.0, abs=1e-12)


def test_loss_composition():
    st = make_state(StateSpec("coherent", {"gamma": 0.9}, cutoff=18))
    once = apply_loss(st, 0.6 * 0.7)
    twice = apply_loss(apply_loss(st, 0.7), 0.6)
    assert distance("trace", once, twice) < 1e-12


def test_loss_scales_coherent_amplitude():
    st = make_state(StateSpec("coherent", {"gamma": 1.1}, cutoff=25))
    out = apply_loss(st, 0.49)
    target = make_state(StateSpec("coherent", {"gamma": 1.1 * 0.7}, cutoff=25))
    assert distance("trace", out, target) < 1e-12


def test_beam_splitter_on_coherent_vacuum():
    eta = 0.64
    cut = 18
    g = 0.9
    coh = pure_state(coherent_amps(g, cut), (cut,), validate=False)
    vac = make_state(StateSpec("vacuum", {"modes": 1}, cutoff=cut))
    joint = tensor(coh, vac)
    u = beam_splitter(eta, cut)
    from ngcorr.fock import FockState

    out = FockState(joint.dims, u.mat @ joint.rho @ u.mat.conj().T, validate=False)
    ta = pure_state(coherent_amps(g * math.sqrt(eta), cut), (cut,), validate=False)
    tb = pure_state(coherent_amps(g * math.sqrt(1 - eta), cut), (cut,), validate=False)
    assert distance("trace", out, tensor(ta, tb)) < 1e-8


def test_hong_ou_mandel_null():
    cut = 6
    vec = np.zeros((cut, cut), dtype=complex)
    vec[1, 1] = 1.0
    joint = pure_state(vec.ravel(), (cut, cut), validate=False)
    u = beam_splitter(0.5, cut)
    out = u.mat @ vec.ravel()
    out = out.reshape(cut, cut)
    assert abs(out[1, 1]) < 1e-12  # the coincidence amplitude cancels


def test_ecs_weights_normalized():
    for g, eta in ((0.5, 0.3), (1.0, 0.8), (1.5, 0.6)):
        w_bell, w_even = ecs_weights(g, eta)
        assert w_bell >= 0 and w_even >= 0
        assert w_bell + w_even == pytest.approx(1.0, abs=1e-12)


def test_ecs_loss_analytic_matches_kraus():
    for g, eta in ((0.5, 0.4), (1.0, 0.7)):
        cut = 22
        target = apply_loss(make_state(StateSpec("ecs", {"gamma": g}, cutoff=cut)), eta)
        closed = ecs_loss_analytic(g, eta, cut)
        assert distance("trace", target, closed) < 1e-10


def test_ecs_loss_unit_transmittance_is_pure():
    st = ecs_loss_analytic(0.8, 1.0, 20)
    assert st.purity() == pytest.approx(1.0, abs=1e-10)
