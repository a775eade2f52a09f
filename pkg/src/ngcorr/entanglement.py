"""Entanglement monotones: two-qubit entanglement of formation and
logarithmic negativity on truncated Fock states.

All values are in nats.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import TruncationError
from .fock import DEFAULT_TAIL_TOL, hermitize, partial_transpose

_SY_SY = np.kron(
    np.array([[0.0, -1.0j], [1.0j, 0.0]]), np.array([[0.0, -1.0j], [1.0j, 0.0]])
)


def concurrence_two_qubit(params):
    """Concurrence of a two-qubit state from its spin-flipped spectrum."""
    rho = params.to_matrix()
    flipped = _SY_SY @ rho.conj() @ _SY_SY
    w = np.linalg.eigvals(rho @ flipped)
    roots = np.sqrt(np.clip(np.real(w), 0.0, None))
    roots.sort()
    return max(0.0, roots[-1] - roots[0] - roots[1] - roots[2])


def _binary_entropy(p):
    q = 1.0 - p
    out = 0.0
    if p > 0.0:
        out -= p * math.log(p)
    if q > 0.0:
        out -= q * math.log(q)
    return out


def eof_two_qubit(params):
    """Entanglement of formation of a two-qubit state, in nats."""
    c = concurrence_two_qubit(params)
    return _binary_entropy(0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - c * c))))


def log_negativity_fock(state, tail_tol=DEFAULT_TAIL_TOL):
    """Logarithmic negativity ln of the trace norm of the partial transpose."""
    if state.tail_mass >= tail_tol:
        raise TruncationError(
            f"tail mass {state.tail_mass:.3e} >= {tail_tol}; negativity unreliable"
        )
    pt = partial_transpose(state, state.n_modes - 1)
    w = np.linalg.eigvalsh(hermitize(pt.mat))
    return max(0.0, float(math.log(np.sum(np.abs(w)))))
