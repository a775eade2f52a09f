"""Covariance-matrix calculus and Gaussian reference states.

Quadrature ordering is (q1, p1, q2, p2, ...); the symplectic form is
Omega = diag-block [[0, 1], [-1, 0]] and the vacuum covariance is I/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .errors import (
    BadSpec,
    ConvergenceFailure,
    DomainError,
    MeanMismatch,
    TruncationError,
    UnphysicalCM,
)
from .fock import FockState, hermitize, ladder_ops, quadrature_ops
from .states import displacement

PHYSICALITY_TOL = 1e-9


@lru_cache(maxsize=None)
def omega(n_modes):
    w = np.array([[0.0, 1.0], [-1.0, 0.0]])
    out = np.kron(np.eye(n_modes), w)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class GaussianSpec:
    """First moments and covariance matrix of an n-mode Gaussian state."""

    means: np.ndarray
    cm: np.ndarray

    def __post_init__(self):
        means = np.asarray(self.means, dtype=float).ravel()
        cm = np.asarray(self.cm, dtype=float)
        if cm.shape != (means.size, means.size) or means.size % 2 != 0:
            raise BadSpec(f"inconsistent Gaussian shapes {means.shape} / {cm.shape}")
        if np.max(np.abs(cm - cm.T)) > 1e-10:
            raise UnphysicalCM("covariance matrix not symmetric")
        cm = 0.5 * (cm + cm.T)
        n = means.size // 2
        w = np.linalg.eigvalsh(cm + 0.5j * omega(n))
        if w[0] < -PHYSICALITY_TOL:
            raise UnphysicalCM(
                f"Gamma + (i/2) Omega has eigenvalue {w[0]:.3e} < -{PHYSICALITY_TOL}"
            )
        means.setflags(write=False)
        cm.setflags(write=False)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "cm", cm)

    @property
    def n_modes(self):
        return self.means.size // 2


@dataclass(frozen=True)
class StandardFormCM:
    """Two-mode standard form diag blocks a, a | b, b and off-diagonals c, d."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if self.a < 0.5 - PHYSICALITY_TOL or self.b < 0.5 - PHYSICALITY_TOL:
            raise UnphysicalCM(f"standard form a={self.a}, b={self.b} below 1/2")
        if self.c < abs(self.d) - 1e-9 or self.c < -1e-12:
            raise UnphysicalCM("standard-form convention requires c >= |d|, c >= 0")

    def assemble(self):
        a, b, c, d = self.a, self.b, self.c, self.d
        return np.array(
            [
                [a, 0.0, c, 0.0],
                [0.0, a, 0.0, d],
                [c, 0.0, b, 0.0],
                [0.0, d, 0.0, b],
            ]
        )

    def to_spec(self):
        return GaussianSpec(np.zeros(4), self.assemble())


@dataclass(frozen=True)
class SymplecticDecomp:
    """Symplectic S and thermal eigenvalues with S Gamma S^T = diag(lambda_j I_2)."""

    S: np.ndarray
    lambdas: tuple


def extract_moments(state):
    """Raw (means, cm) pair without the physicality gate of GaussianSpec."""
    qp = quadrature_ops(state.dims)
    rho = state.rho
    n2 = len(qp)
    means = np.array([np.sum(op.T * rho).real for op in qp])
    prods = [op @ rho for op in qp]
    cm = np.empty((n2, n2))
    for i in range(n2):
        for j in range(i, n2):
            sym = np.sum(qp[j].T * prods[i]).real  # tr[Qj Qi rho]
            ji = np.sum(qp[i].T * prods[j]).real
            cm[i, j] = cm[j, i] = 0.5 * (sym + ji) - means[i] * means[j]
    return means, cm


def moments_from_fock(state, tail_tol=None):
    """Extract first moments and the symmetrized covariance matrix."""
    if tail_tol is not None and state.tail_mass >= tail_tol:
        raise TruncationError(
            f"tail mass {state.tail_mass:.3e} >= {tail_tol}; moments unreliable"
        )
    return GaussianSpec(*extract_moments(state))


def _single_mode_williamson_local(block):
    """Symplectic 2x2 S with S A S^T = sqrt(det A) I."""
    det = np.linalg.det(block)
    if det <= 0:
        raise UnphysicalCM("local covariance block not positive definite")
    nu = math.sqrt(det)
    w, v = np.linalg.eigh(block)
    inv_sqrt = (v * (1.0 / np.sqrt(w))) @ v.T
    s = math.sqrt(nu) * inv_sqrt  # symmetric, det 1 => symplectic
    return s, nu


def standard_form(spec):
    """Reduce a two-mode covariance matrix to standard form by local symplectics.

    Returns the standard-form parameters and the local pair (S_A, S_B) with
    (S_A + S_B) Gamma (S_A + S_B)^T equal to the assembled standard form.
    """
    if spec.n_modes != 2:
        raise BadSpec("standard form defined for two-mode states")
    cm = spec.cm
    sa, a = _single_mode_williamson_local(cm[:2, :2])
    sb, b = _single_mode_williamson_local(cm[2:, 2:])
    cblk = sa @ cm[:2, 2:] @ sb.T
    u, sv, vt = np.linalg.svd(cblk)
    s1, s2 = sv
    if np.linalg.det(u) < 0:
        u = u.copy()
        u[:, 1] *= -1.0
        s2 = -s2
    if np.linalg.det(vt) < 0:
        vt = vt.copy()
        vt[1, :] *= -1.0
        s2 = -s2
    local_a = u.T @ sa
    local_b = vt @ sb
    sf = StandardFormCM(a=float(a), b=float(b), c=float(s1), d=float(s2))
    return sf, (local_a, local_b)


def standard_form_symplectic_eigs(sf):
    """Closed-form symplectic eigenvalues lambda^2 = l +- sqrt(l^2 - m).

    l = (a^2 + b^2 + 2cd)/2, m = (ab - c^2)(ab - d^2); cross-checked at
    build time against the eigenvalues of i Omega Gamma.
    """
    a, b, c, d = sf.a, sf.b, sf.c, sf.d
    ell = 0.5 * (a * a + b * b + 2.0 * c * d)
    m = (a * b - c * c) * (a * b - d * d)
    disc = max(0.0, ell * ell - m)
    root = math.sqrt(disc)
    lam1 = math.sqrt(max(0.0, ell + root))
    lam2 = math.sqrt(max(0.0, ell - root))
    return lam1, lam2


def _symplectic_eigs_raw(cm):
    """One representative per +-nu pair of eigenvalues of i Omega Gamma.

    Eigenvalues of the (possibly complex, symmetric) covariance matrix come
    in sign pairs; greedy matching of e with -e is robust even when real
    parts sit numerically on a branch point.
    """
    n = cm.shape[0] // 2
    ev = list(np.linalg.eigvals(1j * omega(n) @ cm))
    reps = []
    while ev:
        e = ev.pop(0)
        j = min(range(len(ev)), key=lambda k: abs(ev[k] + e))
        partner = ev.pop(j)
        pick = e if (e.real, e.imag) >= (partner.real, partner.imag) else partner
        reps.append(pick)
    reps.sort(key=lambda z: (-z.real, -z.imag))
    return np.array(reps)


def symplectic_eigs(spec):
    """Symplectic spectrum of a physical covariance matrix, descending."""
    ev = _symplectic_eigs_raw(spec.cm)
    if np.max(np.abs(ev.imag)) > 1e-8:
        raise UnphysicalCM("complex symplectic spectrum")
    lam = ev.real
    if lam.size and lam[-1] < 0.5 - PHYSICALITY_TOL:
        raise UnphysicalCM(f"symplectic eigenvalue {lam[-1]} < 1/2")
    return [float(x) for x in lam]


def williamson(spec):
    """Williamson normal form via the real Schur form of Gamma^-1/2 Omega Gamma^-1/2.

    Self-verifies S Omega S^T = Omega and S Gamma S^T = diag(lambda_j I_2)
    on every call.
    """
    cm = spec.cm
    n = spec.n_modes
    w, v = np.linalg.eigh(cm)
    if w[0] <= 0:
        raise UnphysicalCM("covariance matrix not positive definite")
    inv_sqrt = (v * (1.0 / np.sqrt(w))) @ v.T
    b = inv_sqrt @ omega(n) @ inv_sqrt
    b = 0.5 * (b - b.T)
    t, r = scipy.linalg.schur(b, output="real")
    lambdas = []
    r = r.copy()
    for j in range(n):
        i = 2 * j
        bj = t[i, i + 1]
        if bj < 0:
            r[:, [i, i + 1]] = r[:, [i + 1, i]]
            bj = -bj
        if bj <= 0:
            raise ConvergenceFailure("degenerate Schur block in Williamson step")
        lambdas.append(1.0 / bj)
    order = sorted(range(n), key=lambda j: -lambdas[j])
    perm = []
    for j in order:
        perm.extend([2 * j, 2 * j + 1])
    r = r[:, perm]
    lambdas = [lambdas[j] for j in order]
    delta_sqrt = np.diag(np.repeat(np.sqrt(lambdas), 2))
    s = delta_sqrt @ r.T @ inv_sqrt
    # self-check both decomposition invariants
    if np.max(np.abs(s @ omega(n) @ s.T - omega(n))) > 1e-8:
        raise ConvergenceFailure("Williamson S is not symplectic")
    target = np.diag(np.repeat(lambdas, 2))
    if np.max(np.abs(s @ cm @ s.T - target)) > 1e-7 * max(1.0, np.max(np.abs(cm))):
        raise ConvergenceFailure("Williamson S does not diagonalize Gamma")
    return SymplecticDecomp(S=s, lambdas=tuple(float(x) for x in lambdas))


#: Near-pure symplectic eigenvalues are capped at 1/2 + this margin before
#: forming the Gibbs exponent.  The cap leaks spurious population of this
#: order into the synthesized state, which order-1/2 entropies amplify to
#: sqrt(cap); it therefore sits near the double-precision floor.
PURITY_CAP = 1e-13

#: Extra synthesis levels per mode.  The top retained level of the truncated
#: quadratic form loses its upward ladder coupling, producing a spurious
#: eigenvalue near half the true top energy; its Boltzmann weight
#: ~exp(-beta n_top / 2) would dominate the tail of the synthesized state.
#: Building in an enlarged space and truncating back removes it.
GIBBS_MARGIN = 8


def reference_gaussian_fock(spec, cutoff, tail_tol=None, check_moments=True):
    """Synthesize the Gaussian state with the given moments in Fock basis.

    Built as a Gibbs exponential of the quadratic form fixed by the
    Williamson decomposition, then displaced to the requested means.
    """
    n = spec.n_modes
    dims = (cutoff,) * n if np.isscalar(cutoff) else tuple(cutoff)
    if len(dims) != n:
        raise BadSpec("cutoff tuple length must match the mode count")
    dec = williamson(spec)
    lambdas = np.maximum(np.array(dec.lambdas), 0.5 + PURITY_CAP)
    betas = np.log((lambdas + 0.5) / (lambdas - 0.5))
    g = dec.S.T @ np.diag(np.repeat(betas, 2)) @ dec.S
    work = tuple(dm + GIBBS_MARGIN for dm in dims)
    d = math.prod(work)
    # assemble h = (1/2) sum_ij g_ij Q_i Q_j from per-mode blocks: same-mode
    # products are local matmuls, cross-mode products are Kronecker factors
    local = []
    for dm in work:
        ops = ladder_ops(dm)
        local.append((ops.q.mat, ops.p.mat))
    h = np.zeros((d, d), dtype=complex)
    eyes = [np.eye(dm) for dm in work]
    for i in range(2 * n):
        mi, ai = divmod(i, 2)
        for j in range(2 * n):
            if g[i, j] == 0.0:
                continue
            mj, aj = divmod(j, 2)
            if mi == mj:
                factors = list(eyes)
                factors[mi] = local[mi][ai] @ local[mi][aj]
            else:
                factors = list(eyes)
                factors[mi] = local[mi][ai]
                factors[mj] = local[mj][aj]
            term = factors[0]
            for f in factors[1:]:
                term = np.kron(term, f)
            h += 0.5 * g[i, j] * term
    w, v = np.linalg.eigh(hermitize(h))
    expw = np.exp(-(w - w[0]))
    rho = (v * expw) @ v.conj().T
    rho = rho / np.trace(rho).real
    if np.any(np.abs(spec.means) > 1e-12):
        disp = None
        for m in range(n):
            alpha = (spec.means[2 * m] + 1j * spec.means[2 * m + 1]) / math.sqrt(2.0)
            dm = displacement(alpha, work[m]).mat
            disp = dm if disp is None else np.kron(disp, dm)
        rho = disp @ rho @ disp.conj().T
    sl = tuple(slice(0, dm) for dm in dims)
    rho = rho.reshape(*work, *work)[sl + sl].reshape(math.prod(dims), math.prod(dims))
    rho = rho / np.trace(rho).real
    state = FockState(dims, hermitize(rho), validate=False)
    if tail_tol is not None and state.tail_mass >= tail_tol:
        raise TruncationError(
            f"reference-state tail mass {state.tail_mass:.3e} >= {tail_tol}"
        )
    if check_moments and state.tail_mass < 1e-7:
        back_means, back_cm = extract_moments(state)
        err = max(
            np.max(np.abs(back_cm - spec.cm)), np.max(np.abs(back_means - spec.means))
        )
        # second moments amplify the truncated tail by roughly the top
        # retained photon number, so the bound scales with the tail mass
        if err > max(1e-6, 1e4 * state.tail_mass):
            raise ConvergenceFailure(
                f"synthesized moments deviate by {err:.3e} despite converged tail"
            )
    return state


def g_func(x, alpha):
    """g(x, alpha) = 1 / ((x + 1/2)^alpha - (x - 1/2)^alpha); g(x, 1) = 1."""
    if x < 0.5 - PHYSICALITY_TOL:
        raise DomainError(f"g undefined for x = {x} < 1/2")
    x = max(x, 0.5)
    if alpha == 1.0:
        return 1.0
    return 1.0 / ((x + 0.5) ** alpha - (x - 0.5) ** alpha)


def _g_complex(x, alpha):
    xp = complex(x + 0.5)
    xm = complex(x - 0.5)
    return 1.0 / (xp**alpha - xm**alpha)


def _zeta(x, beta):
    """Thermal parameter of sigma^beta / tr[sigma^beta] for a single mode."""
    xp = complex(x + 0.5)
    xm = complex(x - 0.5)
    if abs(xm) < 1e-15:
        return 0.5
    return 0.5 * (xp**beta + xm**beta) / (xp**beta - xm**beta)


def _thermal_entropy(x):
    """Von Neumann entropy of a thermal mode with symplectic eigenvalue x."""
    if x <= 0.5:
        return 0.0
    return float((x + 0.5) * math.log(x + 0.5) - (x - 0.5) * math.log(x - 0.5))


def _h_compose(cm1, cm2):
    """Covariance matrix of the (generally non-Hermitian) product sigma1 sigma2."""
    n2 = cm1.shape[0]
    om = omega(n2 // 2)
    i2 = 0.5j * om
    inv = np.linalg.inv(cm1 + cm2)
    return -i2 + (cm2 + i2) @ inv @ (cm1 + i2)


def compose_rule(spec1, spec2):
    """Gaussian product rule sigma1 sigma2 = prefactor * gaussian(h).

    Requires equal means; the prefactor is det(Gamma1 + Gamma2)^(-1/2).
    """
    if np.max(np.abs(spec1.means - spec2.means)) > 1e-9:
        raise MeanMismatch("composition rule requires equal first moments")
    det = np.linalg.det(spec1.cm + spec2.cm)
    if det <= 0:
        raise UnphysicalCM("det(Gamma1 + Gamma2) <= 0")
    pref = 1.0 / math.sqrt(det)
    h = _h_compose(spec1.cm, spec2.cm)
    if np.max(np.abs(h.imag)) > 1e-9 * max(1.0, np.max(np.abs(h.real))):
        raise UnphysicalCM("composed covariance matrix is not real (non-commuting pair)")
    return pref, GaussianSpec(spec1.means, 0.5 * (h.real + h.real.T))


def _standard_of(spec_or_sf):
    if isinstance(spec_or_sf, StandardFormCM):
        return spec_or_sf
    return standard_form(spec_or_sf)[0]


def gaussian_mi(kind, spec, alpha=None):
    """Closed-form mutual information of a two-mode Gaussian state.

    kinds: 'renyi' (entropy-combination type), 'sandwiched' (relative-entropy
    type, evaluated through the composition-rule pipeline), 'hilbert_schmidt'.
    alpha = 1 evaluates the common von Neumann limit analytically.
    """
    sf = _standard_of(spec)
    a, b, c, d = sf.a, sf.b, sf.c, sf.d
    if abs(c) < 1e-15 and abs(d) < 1e-15 and (
        kind in ("hs", "hilbert_schmidt") or (alpha is not None and float(alpha) > 0)
    ):
        # product state: every correlation measure vanishes, and the entropic
        # pipeline below hits removable 0/0 limits for pure marginals
        return 0.0
    if kind in ("hs", "hilbert_schmidt"):
        m1 = (a * b - c * c) * (a * b - d * d)
        m2 = (4 * a * b - c * c) * (4 * a * b - d * d)
        if m1 <= 0 or m2 <= 0:
            raise UnphysicalCM("standard form outside the physical region")
        val = 0.25 / math.sqrt(m1) + 0.25 / (a * b) - 2.0 / math.sqrt(m2)
        return math.sqrt(max(0.0, val))
    if alpha is None:
        raise DomainError("entropic kinds require alpha")
    alpha = float(alpha)
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    lam1, lam2 = standard_form_symplectic_eigs(sf)
    if alpha == 1.0:
        return (
            _thermal_entropy(a)
            + _thermal_entropy(b)
            - _thermal_entropy(lam1)
            - _thermal_entropy(lam2)
        )
    if kind == "renyi":
        num = g_func(a, alpha) * g_func(b, alpha)
        den = g_func(lam1, alpha) * g_func(lam2, alpha)
        return float(math.log(num / den) / (1.0 - alpha))
    if kind == "sandwiched":
        return _sandwiched_gaussian(sf, alpha)
    raise ValueError(f"unknown gaussian_mi kind {kind!r}")


def _sandwiched_gaussian(sf, alpha):
    """Composition-rule pipeline for the relative-entropy type mutual information.

    For alpha > 1 the rescaled marginal covariance is an analytic
    continuation (negative thermal parameter), so the intermediate algebra
    is done over the complex field and the result is realized at the end.
    """
    a, b = sf.a, sf.b
    # A pure correlated two-mode Gaussian state has a geometric Schmidt
    # spectrum, so the defining trace diverges for alpha >= 2.
    lam1, _ = standard_form_symplectic_eigs(sf)
    # the purity margin sits above the sqrt(eps) cancellation noise that the
    # symplectic eigenvalue inherits from (ab - c^2)(ab - d^2)
    if alpha >= 2.0 and lam1 <= 0.5 + 1e-7 and sf.c > 1e-9:
        return math.inf
    beta = (1.0 - alpha) / (2.0 * alpha)
    gm = sf.assemble().astype(complex)
    za = _zeta(a, beta)
    zb = _zeta(b, beta)
    gprime = np.diag([za, za, zb, zb]).astype(complex)
    term1 = (2.0 * alpha / (alpha - 1.0)) * np.log(
        _g_complex(a, beta) * _g_complex(b, beta)
    )
    det1 = np.linalg.det(gprime + gm)
    h1 = _h_compose(gprime, gm)
    det2 = np.linalg.det(h1 + gprime)
    h2 = _h_compose(h1, gprime)
    lam = _symplectic_eigs_raw(h2)
    # thermal-series ratio |(lam - 1/2)/(lam + 1/2)| touching the unit
    # circle marks the end of the convergent region of the defining trace
    if max(abs((l - 0.5) / (l + 0.5)) for l in lam) >= 1.0 - 1e-9:
        return math.inf
    term2 = -(alpha / (2.0 * (alpha - 1.0))) * np.log(det1 * det2)
    term3 = (1.0 / (alpha - 1.0)) * np.log(
        _g_complex(lam[0], alpha) * _g_complex(lam[1], alpha)
    )
    total = term1 + term2 + term3
    if abs(total.imag) > 1e-6 * max(1.0, abs(total.real)):
        raise ConvergenceFailure(
            f"sandwiched pipeline returned complex value {total!r}"
        )
    return float(total.real)


def gaussian_log_negativity(spec):
    """Logarithmic negativity max(0, -ln 2 nu_-) from the PPT covariance matrix."""
    if spec.n_modes != 2:
        raise BadSpec("Gaussian log-negativity implemented for two modes")
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    cm_pt = flip @ spec.cm @ flip
    ev = _symplectic_eigs_raw(cm_pt)
    if np.max(np.abs(ev.imag)) > 1e-8:
        raise UnphysicalCM("complex spectrum of partially transposed Gamma")
    nu_min = float(np.min(ev.real))
    if nu_min <= 0:
        raise UnphysicalCM("nonpositive symplectic eigenvalue after PPT")
    return max(0.0, -math.log(2.0 * nu_min))


def analytic_cm(family, **params):
    """Closed-form covariance matrices: lossy ECS and photon-number entangled state."""
    if family == "ecs_loss":
        gamma = float(params["gamma"])
        eta = float(params["eta"])
        g2 = 2.0 * gamma * gamma
        x = (eta * gamma * gamma / math.sinh(g2)) * np.diag(
            [math.exp(g2), math.exp(-g2)]
        )
        half = 0.5 * np.eye(2)
        cm = np.block([[x + half, x], [x, x + half]])
        return GaussianSpec(np.zeros(4), cm)
    if family == "pnes":
        coeffs = np.asarray(params["coeffs"], dtype=complex)
        k = np.arange(coeffs.size)
        a = float(np.sum(k * np.abs(coeffs) ** 2))
        b = float(np.real(np.sum((k[:-1] + 1) * coeffs[:-1].conj() * coeffs[1:])))
        cm = np.array(
            [
                [a + 0.5, 0.0, b, 0.0],
                [0.0, a + 0.5, 0.0, -b],
                [b, 0.0, a + 0.5, 0.0],
                [0.0, -b, 0.0, a + 0.5],
            ]
        )
        return GaussianSpec(np.zeros(4), cm)
    raise BadSpec(f"unknown analytic covariance family {family!r}")
