"""Bosonic loss channels and beam-splitter unitaries."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .errors import BadEta, TruncationError
from .fock import FockState, OperatorMatrix, _check_modes, _ladder_raw, hermitize
from .states import coherent_amps


@dataclass(frozen=True)
class KrausSet:
    """Kraus decomposition of a single-mode loss channel at transmittance eta."""

    ops: tuple
    eta: float


@lru_cache(maxsize=None)
def loss_kraus(eta, cutoff):
    """Single-mode loss Kraus operators K_k = sqrt((1-eta)^k / k!) eta^(n/2) a^k.

    Rank equals the cutoff, which is exact in the truncated space; the
    completeness relation holds on levels unaffected by truncation.
    """
    if not 0.0 <= eta <= 1.0:
        raise BadEta(f"eta = {eta} outside [0, 1]")
    a = _ladder_raw(cutoff)
    n = np.arange(cutoff, dtype=float)
    if eta == 0.0:
        eta_half_n = np.where(n == 0, 1.0, 0.0)
    else:
        eta_half_n = eta ** (n / 2.0)
    ops = []
    ak = np.eye(cutoff, dtype=complex)
    for k in range(cutoff):
        if eta == 1.0 and k > 0:
            break
        if k > 0:
            ak = a @ ak
        coef = math.exp(0.5 * (k * math.log1p(-eta) - gammaln(k + 1))) if eta < 1.0 else (1.0 if k == 0 else 0.0)
        op = coef * (eta_half_n[:, None] * ak)
        if np.max(np.abs(op)) > 1e-300:
            ops.append(op)
    return KrausSet(ops=tuple(ops), eta=float(eta))


def _apply_mode_kraus(rho, dims, mode, kraus):
    left = math.prod(dims[:mode])
    dm = dims[mode]
    right = math.prod(dims[mode + 1 :])
    arr = rho.reshape(left, dm, right, left, dm, right)
    out = np.zeros_like(arr)
    for k in kraus:
        t = np.tensordot(k, arr, axes=([1], [1]))  # a,L,R,l,c,r
        t = np.tensordot(t, k.conj(), axes=([4], [1]))  # a,L,R,l,r,d
        out += t.transpose(1, 0, 2, 3, 5, 4)
    return out.reshape(rho.shape)


def apply_loss(state, eta, modes=None):
    """Pure-loss channel (beam-splitter mixing with vacuum) on the given modes."""
    if not 0.0 <= eta <= 1.0:
        raise BadEta(f"eta = {eta} outside [0, 1]")
    modes = range(state.n_modes) if modes is None else modes
    modes = _check_modes(state.dims, modes)
    rho = np.array(state.rho)
    for m in modes:
        ks = loss_kraus(float(eta), state.dims[m])
        rho = _apply_mode_kraus(rho, state.dims, m, ks.ops)
    return FockState(state.dims, hermitize(rho), validate=False)


@lru_cache(maxsize=None)
def _bs_unitary_raw(eta, dims):
    """Two-mode beam splitter with a -> sqrt(eta) a + sqrt(1-eta) b on coherent inputs."""
    if not 0.0 <= eta <= 1.0:
        raise BadEta(f"eta = {eta} outside [0, 1]")
    n1, n2 = dims
    theta = math.acos(math.sqrt(eta))
    a = np.kron(_ladder_raw(n1), np.eye(n2))
    b = np.kron(np.eye(n1), _ladder_raw(n2))
    # U = exp(theta (a b† - a† b)) = exp(i theta H), H = i(a† b - a b†)
    h = 1j * (a.conj().T @ b - a @ b.conj().T)
    w, v = np.linalg.eigh(hermitize(h))
    u = (v * np.exp(1j * theta * w)) @ v.conj().T
    u.setflags(write=False)
    return u


def beam_splitter(eta, cutoff):
    """Two-mode beam-splitter unitary at transmittance eta.

    Built through the eigendecomposition of the Hermitian generator, so it
    is unitary to solver precision with no series truncation.
    """
    u = _bs_unitary_raw(float(eta), (cutoff, cutoff))
    return OperatorMatrix((cutoff, cutoff), u, unitary=True)


def ecs_weights(gamma, eta):
    """Mixture weights of the Bell-type and even/odd branches of a lossy ECS."""
    g = float(gamma)

    def n_plus(x):
        return 2.0 + 2.0 * math.exp(-2.0 * x * x)

    def n_minus(x):
        return 2.0 - 2.0 * math.exp(-2.0 * x * x)

    denom = 4.0 * n_minus(math.sqrt(2.0) * g)
    gl = math.sqrt(max(0.0, 2.0 - 2.0 * eta)) * g
    gt = math.sqrt(2.0 * eta) * g
    w_bell = n_plus(gl) * n_minus(gt) / denom
    w_even = n_minus(gl) * n_plus(gt) / denom
    return w_bell, w_even


def ecs_loss_branches(gamma, eta, cutoff):
    """Normalized branch vectors (bell, even) of the lossy ECS in Fock basis."""
    g = float(gamma)
    ge = math.sqrt(eta) * g
    if ge == 0.0:
        plus = coherent_amps(0.0, cutoff)
        minus = np.zeros(cutoff, dtype=complex)
        minus[min(1, cutoff - 1)] = 1.0
    else:
        c = coherent_amps(ge, cutoff)
        cm = coherent_amps(-ge, cutoff)
        plus = c + cm
        minus = c - cm
        plus = plus / np.linalg.norm(plus)
        minus = minus / np.linalg.norm(minus)
    bell = (np.kron(plus, minus) + np.kron(minus, plus)) / math.sqrt(2.0)

    def n_plus(x):
        return 2.0 + 2.0 * math.exp(-2.0 * x * x)

    def n_minus(x):
        return 2.0 - 2.0 * math.exp(-2.0 * x * x)

    norm = 2.0 * math.sqrt(n_plus(math.sqrt(2.0 * eta) * g))
    ca = n_plus(ge) / norm
    cb = n_minus(ge) / norm
    even = ca * np.kron(plus, plus) + cb * np.kron(minus, minus)
    even_norm = np.linalg.norm(even)
    if even_norm > 0:
        even = even / even_norm
    return bell, even


def ecs_loss_analytic(gamma, eta, cutoff, tail_tol=1e-6):
    """Closed-form lossy ECS: rank-2 mixture of a Bell branch and an even branch."""
    if not 0.0 <= eta <= 1.0:
        raise BadEta(f"eta = {eta} outside [0, 1]")
    if not float(gamma) > 0.0:
        raise ValueError("gamma must be > 0")
    w_bell, w_even = ecs_weights(gamma, eta)
    bell, even = ecs_loss_branches(gamma, eta, cutoff)
    rho = w_bell * np.outer(bell, bell.conj()) + w_even * np.outer(even, even.conj())
    state = FockState((cutoff, cutoff), hermitize(rho), validate=False)
    if state.tail_mass >= tail_tol:
        raise TruncationError(
            f"lossy-ECS tail mass {state.tail_mass:.3e} >= {tail_tol}"
        )
    return state
