"""Construction of the bosonic states used throughout the package."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .errors import BadSpec, TruncationError
from .fock import (
    DEFAULT_TAIL_TOL,
    FockState,
    OperatorMatrix,
    _ladder_raw,
    pure_state,
)

FAMILIES = (
    "vacuum",
    "coherent",
    "thermal",
    "cat",
    "ecs",
    "pnes",
    "tmsv",
    "cv_werner",
    "photon_correlated",
)


@dataclass(frozen=True)
class StateSpec:
    """Named state family with parameters and an optional per-mode cutoff."""

    family: str
    params: dict = field(default_factory=dict)
    cutoff: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise BadSpec(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        p = self.params
        if self.family == "pnes":
            coeffs = np.asarray(p.get("coeffs", ()), dtype=complex)
            if coeffs.size < 1:
                raise BadSpec("pnes requires a nonempty coefficient list")
            if abs(np.sum(np.abs(coeffs) ** 2) - 1.0) > 1e-12:
                raise BadSpec("pnes coefficients must satisfy sum |c_k|^2 = 1")
            levels = p.get("levels")
            if levels is not None and len(levels) != coeffs.size:
                raise BadSpec("pnes levels must match coefficient count")
        if self.family == "cv_werner":
            f = float(p.get("f", -1.0))
            r = float(p.get("r", -1.0))
            if not 0.0 <= f <= 1.0:
                raise BadSpec(f"cv_werner fraction f = {f} outside [0, 1]")
            if r < 0.0:
                raise BadSpec(f"cv_werner squeezing r = {r} must be >= 0")
        if self.family in ("thermal", "photon_correlated"):
            if float(p.get("nbar", -1.0)) < 0.0:
                raise BadSpec("mean photon number nbar must be >= 0")
        if self.family in ("cat", "ecs") and not abs(complex(p.get("gamma", 0))) > 0:
            raise BadSpec(f"{self.family} requires a nonzero amplitude gamma")


def default_cutoff(gamma):
    """Cutoff rule keeping coherent-tail mass below ~1e-8."""
    g = abs(gamma)
    if g <= 1.2:
        return 20
    if g <= 2.5:
        return 30
    return 40


def coherent_cutoff(gamma, tol=1e-7, minimum=8):
    """Smallest cutoff with Poisson tail mass below tol, plus margin."""
    mu = abs(gamma) ** 2
    if mu == 0.0:
        return minimum
    return max(minimum, int(poisson.isf(tol, mu)) + 4)


def thermal_cutoff(nbar, tol=1e-6, minimum=8, maximum=80):
    """Smallest cutoff with geometric tail mass below tol."""
    if nbar <= 1e-9:
        return minimum
    n = math.ceil(math.log(tol) / math.log(nbar / (nbar + 1.0)))
    return int(min(max(minimum, n), maximum))


def coherent_amps(gamma, cutoff):
    """Fock amplitudes of |gamma>, truncated (not renormalized)."""
    n = np.arange(cutoff)
    gamma = complex(gamma)
    if gamma == 0:
        amps = np.zeros(cutoff, dtype=complex)
        amps[0] = 1.0
        return amps
    # log-domain magnitude avoids overflow of gamma**n / sqrt(n!)
    logmag = n * math.log(abs(gamma)) - 0.5 * gammaln(n + 1.0) - 0.5 * abs(gamma) ** 2
    phase = np.exp(1j * n * np.angle(gamma))
    return np.exp(logmag) * phase


def cat_basis(gamma, cutoff, tail_tol=DEFAULT_TAIL_TOL):
    """Orthonormal even/odd cat vectors built from |gamma> and |-gamma>."""
    g = complex(gamma)
    if g == 0:
        raise BadSpec("cat basis undefined at gamma = 0")
    c = coherent_amps(g, cutoff)
    cm = coherent_amps(-g, cutoff)
    plus = c + cm
    minus = c - cm
    plus = plus / np.linalg.norm(plus)
    minus = minus / np.linalg.norm(minus)
    tail = max(abs(plus[-1]) ** 2, abs(minus[-1]) ** 2)
    if tail >= tail_tol:
        raise TruncationError(f"cat-basis tail mass {tail:.3e} >= {tail_tol}")
    return plus, minus


def displacement(alpha, cutoff):
    """Displacement unitary exp(alpha a† - alpha* a) on the truncated space.

    Built by exponentiating the (truncated) Hermitian generator, so the
    result is exactly unitary even though it deviates from the ideal
    displacement near the truncation edge.
    """
    a = _ladder_raw(cutoff)
    k = alpha * a.conj().T - np.conjugate(alpha) * a
    h = 1j * k  # Hermitian
    w, v = np.linalg.eigh(h)
    u = (v * np.exp(-1j * w)) @ v.conj().T
    return OperatorMatrix((cutoff,), u, unitary=True)


def _thermal_diag(nbar, cutoff):
    if nbar <= 0:
        d = np.zeros(cutoff)
        d[0] = 1.0
        return d
    k = np.arange(cutoff)
    return np.exp(k * math.log(nbar / (nbar + 1.0)) - math.log(nbar + 1.0))


def _tmsv_vec(r, cutoff):
    k = np.arange(cutoff)
    amps = np.tanh(r) ** k / np.cosh(r)
    vec = np.zeros((cutoff, cutoff), dtype=complex)
    vec[k, k] = amps
    return vec.ravel()


def make_state(spec, tail_tol=DEFAULT_TAIL_TOL):
    """Build the FockState described by ``spec``.

    Raises TruncationError when the top-level population meets or exceeds
    ``tail_tol``, signalling that the requested cutoff is too small.
    """
    fam = spec.family
    p = spec.params
    if fam == "vacuum":
        modes = int(p.get("modes", 2))
        cut = spec.cutoff or 4
        vec = np.zeros(cut**modes, dtype=complex)
        vec[0] = 1.0
        state = pure_state(vec, (cut,) * modes, validate=False)
    elif fam == "coherent":
        g = complex(p["gamma"])
        cut = spec.cutoff or default_cutoff(g)
        state = pure_state(coherent_amps(g, cut), (cut,), validate=False)
    elif fam == "thermal":
        nbar = float(p["nbar"])
        cut = spec.cutoff or thermal_cutoff(nbar, tail_tol * 1e-2)
        d = _thermal_diag(nbar, cut)
        state = FockState((cut,), np.diag(d / d.sum()).astype(complex), validate=False)
    elif fam == "cat":
        g = complex(p["gamma"])
        sign = int(p.get("sign", +1))
        cut = spec.cutoff or default_cutoff(g)
        plus, minus = cat_basis(g, cut, tail_tol=tail_tol)
        state = pure_state(plus if sign >= 0 else minus, (cut,), validate=False)
    elif fam == "ecs":
        g = complex(p["gamma"])
        cut = spec.cutoff or default_cutoff(g)
        c = coherent_amps(g, cut)
        cm = coherent_amps(-g, cut)
        vec = np.kron(c, c) - np.kron(cm, cm)
        state = pure_state(vec, (cut, cut), validate=False)
    elif fam == "pnes":
        coeffs = np.asarray(p["coeffs"], dtype=complex)
        levels = p.get("levels")
        levels = np.arange(coeffs.size) if levels is None else np.asarray(levels, int)
        cut = spec.cutoff or max(int(levels.max()) + 2, 4)
        vec = np.zeros((cut, cut), dtype=complex)
        vec[levels, levels] = coeffs
        state = pure_state(vec.ravel(), (cut, cut), validate=False)
    elif fam == "tmsv":
        r = float(p["r"])
        cut = spec.cutoff or thermal_cutoff(math.sinh(r) ** 2, tail_tol * 1e-2)
        state = pure_state(_tmsv_vec(r, cut), (cut, cut), validate=False)
    elif fam == "cv_werner":
        f = float(p["f"])
        r = float(p["r"])
        cut = spec.cutoff or thermal_cutoff(math.sinh(r) ** 2, tail_tol * 1e-2)
        vac = np.zeros(cut * cut, dtype=complex)
        vac[0] = 1.0
        phi = _tmsv_vec(r, cut)
        phi = phi / np.linalg.norm(phi)
        rho = (1.0 - f) * np.outer(vac, vac.conj()) + f * np.outer(phi, phi.conj())
        state = FockState((cut, cut), rho, validate=False)
    elif fam == "photon_correlated":
        nbar = float(p["nbar"])
        cut = spec.cutoff or thermal_cutoff(nbar, tail_tol * 1e-2)
        d = _thermal_diag(nbar, cut)
        d = d / d.sum()
        rho = np.zeros((cut * cut, cut * cut), dtype=complex)
        idx = np.arange(cut) * cut + np.arange(cut)
        rho[idx, idx] = d
        state = FockState((cut, cut), rho, validate=False)
    else:  # pragma: no cover - guarded by StateSpec
        raise BadSpec(f"unknown family {fam!r}")
    if state.tail_mass >= tail_tol:
        raise TruncationError(
            f"{fam} tail mass {state.tail_mass:.3e} >= {tail_tol}; increase cutoff"
        )
    return state
