"""Truncated Fock-space linear algebra for multimode bosonic states.

Conventions: hbar = 1, vacuum quadrature variance 1/2, natural logarithms.
Mode 0 is always the slowest (leftmost) Kronecker factor.
"""

from __future__ import annotations

import math
from collections import namedtuple
from functools import lru_cache

import numpy as np

from .errors import BadModeIndex, DimMismatch, InvalidCutoff

#: Eigenvalues below this are treated as exactly zero in fractional or
#: negative matrix powers (double-precision eigensolver noise scale).
EIG_SUPPORT_FLOOR = 1e-12

#: Default tolerance on the population of the highest retained Fock level.
DEFAULT_TAIL_TOL = 1e-6

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10


def hermitize(mat):
    """Return (M + M†)/2, killing accumulated asymmetric round-off."""
    return 0.5 * (mat + mat.conj().T)


def _tail_mass(rho, dims):
    """Largest single-mode population of the highest retained level."""
    n = len(dims)
    diag = np.real(np.diagonal(rho)).reshape(dims)
    worst = 0.0
    for m in range(n):
        sl = [slice(None)] * n
        sl[m] = dims[m] - 1
        worst = max(worst, float(np.sum(diag[tuple(sl)])))
    return worst


class FockState:
    """Density matrix of an n-mode state with per-mode Fock cutoffs.

    ``dims`` lists the number of retained levels per mode (levels
    ``0 .. N-1``).  ``rho`` is the full density matrix on the tensor
    product space, with mode 0 as the slower Kronecker index.
    ``tail_mass`` records the worst single-mode top-level population;
    convergence-sensitive operations compare it against a tolerance
    instead of silently truncating.
    """

    __slots__ = ("dims", "rho", "tail_mass")

    def __init__(self, dims, rho, validate=True):
        dims = tuple(int(d) for d in dims)
        rho = np.asarray(rho, dtype=complex)
        d = math.prod(dims)
        if rho.shape != (d, d):
            raise DimMismatch(f"rho shape {rho.shape} != ({d}, {d}) from dims {dims}")
        if validate:
            herm_err = np.max(np.abs(rho - rho.conj().T))
            if herm_err > HERMITICITY_TOL:
                raise ValueError(f"rho not Hermitian: max asymmetry {herm_err:.3e}")
            tr = np.trace(rho).real
            if abs(tr - 1.0) > TRACE_TOL:
                raise ValueError(f"trace(rho) = {tr!r}, expected 1")
        rho.setflags(write=False)
        self.dims = dims
        self.rho = rho
        self.tail_mass = _tail_mass(rho, dims)

    @property
    def dim(self):
        return self.rho.shape[0]

    @property
    def n_modes(self):
        return len(self.dims)

    def assert_physical(self, tol=PSD_TOL):
        """Full positivity check (O(d^3)); raises ValueError on failure."""
        w = np.linalg.eigvalsh(hermitize(self.rho))
        if w[0] < -tol:
            raise ValueError(f"rho has eigenvalue {w[0]:.3e} < -{tol}")
        return self

    def purity(self):
        return float(np.sum(np.abs(self.rho) ** 2))

    def __repr__(self):
        return f"FockState(dims={self.dims}, tail_mass={self.tail_mass:.3e})"


class OperatorMatrix:
    """Operator on a truncated multimode Fock space.

    Hermitian/unitary tags are promises checked at construction time.
    """

    __slots__ = ("dims", "mat", "hermitian", "unitary")

    def __init__(self, dims, mat, hermitian=False, unitary=False):
        dims = tuple(int(d) for d in dims)
        mat = np.asarray(mat, dtype=complex)
        d = math.prod(dims)
        if mat.shape != (d, d):
            raise DimMismatch(f"mat shape {mat.shape} != ({d}, {d}) from dims {dims}")
        if hermitian and np.max(np.abs(mat - mat.conj().T)) > 1e-10:
            raise ValueError("operator tagged Hermitian is not")
        if unitary:
            err = np.max(np.abs(mat.conj().T @ mat - np.eye(d)))
            if err > 1e-10:
                raise ValueError(f"operator tagged unitary is not (defect {err:.3e})")
        mat.setflags(write=False)
        self.dims = dims
        self.mat = mat
        self.hermitian = hermitian
        self.unitary = unitary

    @property
    def dim(self):
        return self.mat.shape[0]

    def __repr__(self):
        return f"OperatorMatrix(dims={self.dims}, hermitian={self.hermitian}, unitary={self.unitary})"


LadderOps = namedtuple("LadderOps", ["annihilation", "creation", "number", "q", "p"])


@lru_cache(maxsize=None)
def _ladder_raw(cutoff):
    a = np.zeros((cutoff, cutoff), dtype=complex)
    ks = np.arange(1, cutoff)
    a[ks - 1, ks] = np.sqrt(ks)
    return a


@lru_cache(maxsize=None)
def ladder_ops(cutoff):
    """Single-mode ladder and quadrature operators at the given cutoff.

    q = (a + a†)/sqrt(2), p = (a - a†)/(i sqrt(2)); [q, p] = i holds on
    levels away from the truncation edge.
    """
    if cutoff < 2:
        raise InvalidCutoff(f"cutoff must be >= 2, got {cutoff}")
    a = _ladder_raw(cutoff)
    adag = a.conj().T
    q = (a + adag) / np.sqrt(2)
    p = (a - adag) / (1j * np.sqrt(2))
    dims = (cutoff,)
    return LadderOps(
        annihilation=OperatorMatrix(dims, a),
        creation=OperatorMatrix(dims, adag),
        number=OperatorMatrix(dims, adag @ a, hermitian=True),
        q=OperatorMatrix(dims, q, hermitian=True),
        p=OperatorMatrix(dims, p, hermitian=True),
    )


def _embed_single_mode(op, dims, mode):
    """Kron-embed a single-mode matrix into the full space."""
    left = np.eye(math.prod(dims[:mode]))
    right = np.eye(math.prod(dims[mode + 1 :]))
    return np.kron(np.kron(left, op), right)


@lru_cache(maxsize=None)
def quadrature_ops(dims):
    """Tuple (q_1, p_1, ..., q_n, p_n) of raw matrices on the full space."""
    dims = tuple(dims)
    out = []
    for m, d in enumerate(dims):
        ops = ladder_ops(d)
        out.append(_embed_single_mode(ops.q.mat, dims, m))
        out.append(_embed_single_mode(ops.p.mat, dims, m))
    return tuple(out)


def tensor(a, b):
    """Kronecker product of two states or two operators; a is the slower factor."""
    if isinstance(a, FockState) and isinstance(b, FockState):
        return FockState(a.dims + b.dims, np.kron(a.rho, b.rho), validate=False)
    if isinstance(a, OperatorMatrix) and isinstance(b, OperatorMatrix):
        return OperatorMatrix(
            a.dims + b.dims,
            np.kron(a.mat, b.mat),
            hermitian=a.hermitian and b.hermitian,
            unitary=a.unitary and b.unitary,
        )
    raise TypeError("tensor operands must both be FockState or both OperatorMatrix")


def _check_modes(dims, modes):
    n = len(dims)
    modes = sorted(set(int(m) for m in modes))
    if not modes:
        raise BadModeIndex("empty mode set")
    if modes[0] < 0 or modes[-1] >= n:
        raise BadModeIndex(f"modes {modes} out of range for {n}-mode state")
    return modes


def partial_trace(state, keep):
    """Trace out all modes not listed in ``keep`` (kept in original order)."""
    keep = _check_modes(state.dims, keep)
    n = state.n_modes
    traced = [m for m in range(n) if m not in keep]
    arr = state.rho.reshape(state.dims + state.dims)
    ncur = n
    for m in sorted(traced, reverse=True):
        arr = np.trace(arr, axis1=m, axis2=m + ncur)
        ncur -= 1
    kept_dims = tuple(state.dims[m] for m in keep)
    d = math.prod(kept_dims)
    return FockState(kept_dims, arr.reshape(d, d), validate=False)


def partial_transpose(state, mode):
    """Transpose one mode of the density matrix; output may be non-positive."""
    modes = _check_modes(state.dims, [mode])
    m = modes[0]
    n = state.n_modes
    arr = state.rho.reshape(state.dims + state.dims)
    arr = np.swapaxes(arr, m, m + n)
    mat = hermitize(arr.reshape(state.dim, state.dim))
    return OperatorMatrix(state.dims, mat, hermitian=True)


def _as_matrix(x):
    if isinstance(x, FockState):
        return x.rho, x.dims
    if isinstance(x, OperatorMatrix):
        return x.mat, x.dims
    x = np.asarray(x, dtype=complex)
    return x, (x.shape[0],)


def truncate_state(state, tol=1e-9, minimum=4):
    """Shrink per-mode cutoffs so the population at and above the new top
    level stays below ``tol`` per mode.  Two margin levels are kept above
    the support so quadratic operators are edge-clean (the top retained
    level of a truncated quadrature operator misses its upward coupling).
    Returns the input when nothing can be cut."""
    n = state.n_modes
    diag = np.real(np.diagonal(state.rho)).reshape(state.dims)
    new_dims = []
    for m in range(n):
        pops = np.apply_over_axes(np.sum, diag, [ax for ax in range(n) if ax != m])
        pops = pops.ravel()
        keep = state.dims[m]
        while keep > minimum and pops[keep - 1 :].sum() < tol:
            keep -= 1
        keep = min(state.dims[m], keep + 2)
        new_dims.append(keep)
    new_dims = tuple(new_dims)
    if new_dims == state.dims:
        return state
    arr = state.rho.reshape(state.dims + state.dims)
    sl = tuple(slice(0, d) for d in new_dims)
    arr = arr[sl + sl]
    d = math.prod(new_dims)
    rho = arr.reshape(d, d)
    rho = rho / np.trace(rho).real
    return FockState(new_dims, rho, validate=False)


def matrix_power_on_support(state, s):
    """Hermitian matrix power with eigenvalues below the support floor zeroed.

    Eigenvalues below EIG_SUPPORT_FLOOR are excluded from the support, so
    negative powers act as pseudo-inverse powers.
    """
    mat, dims = _as_matrix(state)
    if not math.isfinite(s):
        raise ValueError("power must be finite")
    w, v = np.linalg.eigh(hermitize(mat))
    pw = np.zeros_like(w)
    # positive powers tolerate arbitrarily small eigenvalues; the floor is
    # only needed where they would be amplified
    on = w > (0.0 if s >= 0 else EIG_SUPPORT_FLOOR)
    pw[on] = w[on] ** s
    out = (v * pw) @ v.conj().T
    return OperatorMatrix(dims, hermitize(out), hermitian=True)


def _check_same_dims(a, b):
    if a.dims != b.dims:
        raise DimMismatch(f"dims {a.dims} != {b.dims}")


def distance(kind, a, b):
    """Trace distance (1/2)tr|A-B| or Hilbert-Schmidt distance sqrt(tr(A-B)^2)."""
    _check_same_dims(a, b)
    delta = a.rho - b.rho
    if kind == "trace":
        w = np.linalg.eigvalsh(hermitize(delta))
        return float(0.5 * np.sum(np.abs(w)))
    if kind == "hilbert_schmidt":
        return float(np.sqrt(np.sum(np.abs(delta) ** 2)))
    raise ValueError(f"unknown distance kind {kind!r}")


def overlap(a, b):
    """tr[rho sigma] for two Hermitian matrices, via an elementwise sum."""
    _check_same_dims(a, b)
    return float(np.real(np.sum(a.rho * b.rho.conj())))


def fidelity(kind, a, b):
    """Uhlmann fidelity (tr sqrt(sqrt(A) B sqrt(A)))^2 or its superfidelity bound.

    The superfidelity G = tr[AB] + sqrt(1 - tr A^2) sqrt(1 - tr B^2)
    upper-bounds the Uhlmann value for density matrices.
    """
    _check_same_dims(a, b)
    if kind == "uhlmann":
        # tr sqrt(sqrt(A) B sqrt(A)) equals the nuclear norm of
        # diag(sqrt(wb)) Vb^dag Va diag(sqrt(wa)) built from the separate
        # eigensystems; the singular values resolve the geometric tail of
        # the product spectrum without squaring it below the noise floor,
        # which an eigensolve of the assembled kernel cannot do
        eps = np.finfo(float).eps
        wa, va = np.linalg.eigh(hermitize(a.rho))
        ka = wa > float(wa[-1]) * wa.size * eps
        wb, vb = np.linalg.eigh(hermitize(b.rho))
        kb = wb > float(wb[-1]) * wb.size * eps
        cross = (vb[:, kb].conj().T @ va[:, ka]) * np.sqrt(wa[ka])[None, :]
        cross = np.sqrt(wb[kb])[:, None] * cross
        s = np.linalg.svd(cross, compute_uv=False)
        return float(np.sum(s) ** 2)
    if kind == "super":
        ov = overlap(a, b)
        ia = math.sqrt(max(0.0, 1.0 - a.purity()))
        ib = math.sqrt(max(0.0, 1.0 - b.purity()))
        return float(ov + ia * ib)
    raise ValueError(f"unknown fidelity kind {kind!r}")


def expect(op, state):
    """<O> = tr[O rho]; real part returned for Hermitian operators."""
    mat = op.mat if isinstance(op, OperatorMatrix) else np.asarray(op)
    val = np.sum(mat.T * state.rho)
    if isinstance(op, OperatorMatrix) and op.hermitian:
        return float(val.real)
    return complex(val)


def pure_state(vec, dims, normalize=True, validate=True):
    """|psi><psi| as a FockState from a flat amplitude vector."""
    vec = np.asarray(vec, dtype=complex).ravel()
    if normalize:
        vec = vec / np.linalg.norm(vec)
    return FockState(dims, np.outer(vec, vec.conj()), validate=validate)
