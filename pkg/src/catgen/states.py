"""Number-basis states and phase-space tools shared by every engine.

The workhorse state is the squeezed two-photon superposition

    |r, theta> = S(r) [cos(theta/2)|0> + sin(theta/2)|2>],

with the squeeze operator fixed once for the whole package as

    S(r) = exp[-(r/2)(a^2 - a^†^2)].

Under this convention positive r stretches the position wavefunction:
the squeezed vacuum is pi^(-1/4) s^(-1/2) exp(-x^2 / 2 s^2) with s = e^r.
A round-trip test and a matrix-exponential cross-check pin the sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eig_banded
from scipy.sparse import diags_array
from scipy.sparse.linalg import expm_multiply
from scipy.special import gammaln, eval_genlaguerre

from .errors import DomainError, TruncationError

__all__ = [
    "R_MAX",
    "ThetaParams",
    "CatTarget",
    "FockVector",
    "FockDensityMatrix",
    "WignerGrid",
    "db_to_r",
    "r_to_db",
    "wrap_theta",
    "default_cutoff",
    "mean_photon_number",
    "theta_extrema",
    "extremal_mean_photons",
    "squeezed_theta_fock",
    "squeeze_matrix",
    "squeeze_fock",
    "cat_fock",
    "fidelity",
    "hermite_functions",
    "position_wavefunction",
    "wigner",
]

SQRT2 = np.sqrt(2.0)
LOG2 = np.log(2.0)

# Squeezing beyond this is outside the validated numerical envelope: work
# dimensions scale like e^{2|r|} and double precision runs out of headroom.
R_MAX = 3.0


def db_to_r(db: float) -> float:
    """Squeezing strength r for a level quoted in dB: r = dB * ln(10) / 20."""
    return float(db) * np.log(10.0) / 20.0


def r_to_db(r: float) -> float:
    """Inverse of :func:`db_to_r`."""
    return float(r) * 20.0 / np.log(10.0)


def wrap_theta(theta: float) -> float:
    """Map an angle into [0, 2*pi)."""
    return float(np.mod(theta, 2.0 * np.pi))


@dataclass(frozen=True)
class ThetaParams:
    """Squeezing strength and superposition angle of a |r, theta> state.

    theta is wrapped into [0, 2*pi) at construction. |r| is capped at
    R_MAX; everything downstream assumes finite parameters.
    """

    r: float
    theta: float

    def __post_init__(self):
        if not (np.isfinite(self.r) and np.isfinite(self.theta)):
            raise DomainError("r and theta must be finite")
        if abs(self.r) > R_MAX:
            raise DomainError(f"|r| = {abs(self.r):g} exceeds R_MAX = {R_MAX}")
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "theta", wrap_theta(self.theta))

    @classmethod
    def from_db(cls, db: float, theta: float) -> "ThetaParams":
        return cls(db_to_r(db), theta)


@dataclass(frozen=True)
class CatTarget:
    """Coherent-superposition target: parity-projected |alpha>, then squeezed.

    alpha : real amplitude (> 0); parity : 'even' or 'odd';
    r_post : squeezing applied after the parity projection (negative values
    un-squeeze, as used when comparing against squeezed engine outputs).
    """

    alpha: float
    parity: str
    r_post: float = 0.0

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise DomainError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if not np.isfinite(self.alpha) or self.alpha < 0:
            raise DomainError("alpha must be finite and non-negative")
        if self.parity == "odd" and self.alpha == 0:
            raise DomainError("odd cat with alpha = 0 has zero norm")
        if abs(self.r_post) > R_MAX:
            raise DomainError(f"|r_post| exceeds R_MAX = {R_MAX}")


@dataclass(frozen=True)
class FockVector:
    """Pure state amplitudes over photon numbers 0..cutoff."""

    amps: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amps, dtype=complex)
        if a.ndim != 1 or a.size == 0:
            raise DomainError("amplitudes must be a non-empty 1-D array")
        object.__setattr__(self, "amps", a)

    @property
    def cutoff(self) -> int:
        return self.amps.size - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> "FockVector":
        n = self.norm()
        if n == 0.0:
            raise DomainError("cannot normalize the zero vector")
        return FockVector(self.amps / n)

    def mean_photon(self) -> float:
        w = np.abs(self.amps) ** 2
        tot = w.sum()
        if tot == 0.0:
            return 0.0
        return float(np.arange(w.size) @ w / tot)

    def tail_mass(self, frac: float = 0.1) -> float:
        """Fraction of the squared norm held by the top `frac` of entries."""
        w = np.abs(self.amps) ** 2
        tot = w.sum()
        if tot == 0.0:
            return 0.0
        k0 = int(np.floor((1.0 - frac) * w.size))
        return float(w[k0:].sum() / tot)

    def padded(self, cutoff: int) -> "FockVector":
        if cutoff < self.cutoff:
            raise DomainError("padding cannot shrink a vector")
        out = np.zeros(cutoff + 1, dtype=complex)
        out[: self.amps.size] = self.amps
        return FockVector(out)


@dataclass(frozen=True)
class FockDensityMatrix:
    """Density matrix over photon numbers 0..cutoff (may be unnormalized)."""

    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.size == 0:
            raise DomainError("density matrix must be square and non-empty")
        object.__setattr__(self, "mat", m)

    @classmethod
    def from_pure(cls, state: FockVector) -> "FockDensityMatrix":
        return cls(np.outer(state.amps, np.conj(state.amps)))

    @property
    def cutoff(self) -> int:
        return self.mat.shape[0] - 1

    def trace(self) -> float:
        return float(np.real(np.trace(self.mat)))

    def purity(self) -> float:
        tr = self.trace()
        if tr == 0.0:
            return 0.0
        return float(np.real(np.trace(self.mat @ self.mat)) / tr**2)

    def normalized(self) -> "FockDensityMatrix":
        tr = self.trace()
        if tr == 0.0:
            raise DomainError("cannot normalize a zero-trace matrix")
        return FockDensityMatrix(self.mat / tr)

    def mean_photon(self) -> float:
        tr = self.trace()
        if tr == 0.0:
            return 0.0
        return float(np.real(np.arange(self.mat.shape[0]) @ np.real(np.diag(self.mat))) / tr)


@dataclass(frozen=True)
class WignerGrid:
    """Sampled quasi-probability distribution, values[i, j] = W(x[i], p[j])."""

    x_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray = field(repr=False)

    def integral(self) -> float:
        dx = self.x_axis[1] - self.x_axis[0]
        dp = self.p_axis[1] - self.p_axis[0]
        return float(self.values.sum() * dx * dp)


def default_cutoff(nbar: float) -> int:
    """Even Fock cutoff 2*ceil(nbar + 6*sqrt(nbar + 1)).

    Keeps the neglected tail below ~1e-10 for squeezing up to 10 dB.
    """
    if not np.isfinite(nbar) or nbar < 0:
        raise DomainError("nbar must be finite and non-negative")
    return int(2 * np.ceil(nbar + 6.0 * np.sqrt(nbar + 1.0)))


def mean_photon_number(params: ThetaParams) -> float:
    """Closed-form <n> of |r, theta>."""
    r, th = params.r, params.theta
    return float(
        np.cosh(2 * r) * (1.5 - np.cos(th)) + np.sinh(2 * r) * np.sin(th) / SQRT2 - 0.5
    )


def theta_extrema(r: float) -> tuple[float, float]:
    """Angles maximizing / minimizing <n> at fixed r, in [0, 2*pi).

    theta_max = pi - arctan(tanh(2r)/sqrt(2)), theta_min the antipode;
    at r = 0 the minimizer wraps to 0 (== 2*pi).
    """
    phi = np.arctan(np.tanh(2.0 * r) / SQRT2)
    return wrap_theta(np.pi - phi), wrap_theta(2.0 * np.pi - phi)


def extremal_mean_photons(r: float) -> tuple[float, float]:
    """Closed-form <n> at theta_max and theta_min."""
    t = np.tanh(2.0 * r)
    root = np.sqrt(2.0 / (t * t + 2.0))
    ch, sh = np.cosh(2.0 * r), np.sinh(2.0 * r)
    cross = sh * t / np.sqrt(2.0 * (t * t + 2.0))
    n_max = ch * (root + 1.5) + cross - 0.5
    n_min = ch * (-root + 1.5) - cross - 0.5
    return float(n_max), float(n_min)


def _pair_coefficients(r: float, theta: float, n_pairs: int) -> np.ndarray:
    """Amplitudes B_n on |2n> for |r, theta>, n = 0..n_pairs."""
    n = np.arange(n_pairs + 1)
    t = np.tanh(r)
    half = 0.5 * theta
    s2r, c2r = np.sinh(2.0 * r), np.cosh(2.0 * r)
    a_0 = np.cos(half) - np.sin(half) * s2r / (2.0 * SQRT2)
    a_p = np.sin(half) * (c2r + 1.0) / (2.0 * SQRT2)
    a_m = np.sin(half) * (c2r - 1.0) / (2.0 * SQRT2)
    a_pm = -np.sin(half) * s2r / SQRT2

    # sqrt((2n)!) / (2^n n!) in log space; overflows factorials past n ~ 85
    lognorm = 0.5 * gammaln(2 * n + 1) - n * LOG2 - gammaln(n + 1)

    pow_n = np.power(t, n)
    pow_np1 = np.power(t, n + 1)
    pow_nm1 = np.zeros(n_pairs + 1)
    pow_nm1[1:] = np.power(t, n[1:] - 1)  # n = 0 term carries a 2n = 0 factor

    bracket = a_0 * pow_n + 2 * n * a_p * pow_nm1 + (2 * n + 1) * a_m * pow_np1 + 2 * n * a_pm * pow_n
    return np.exp(lognorm) * bracket / np.sqrt(np.cosh(r))


def squeezed_theta_fock(
    params: ThetaParams, cutoff: int | None = None, tol: float | None = 1e-8
) -> FockVector:
    """Fock expansion of |r, theta>; support on even photon numbers only.

    Parameters
    ----------
    params : ThetaParams
    cutoff : highest photon number kept; defaults to
        default_cutoff(mean_photon_number(params)).
    tol : tail-mass tolerance (top 10% of the window); None disables the check.

    Raises
    ------
    TruncationError
        If the retained window holds too much weight near its top.
    """
    if cutoff is None:
        cutoff = default_cutoff(mean_photon_number(params))
    if cutoff < 2:
        raise DomainError("cutoff must be at least 2")
    amps = np.zeros(cutoff + 1, dtype=complex)
    amps[0::2] = _pair_coefficients(params.r, params.theta, cutoff // 2)
    out = FockVector(amps)
    if tol is not None and out.tail_mass() > tol:
        raise TruncationError(
            f"tail mass {out.tail_mass():.3e} above {tol:.1e} at cutoff {cutoff}"
        )
    return out


def _squeeze_work_dim(n_in: int, r: float, n_out: int) -> int:
    # Photon support spreads by ~e^{2|r|} under squeezing; pad generously.
    # Extra headroom above the requested output keeps boundary reflections
    # of the truncated generator away from the retained block.
    spread = int(np.ceil((n_in + 9) * np.exp(2.0 * abs(r)) + 16))
    return max(spread, n_out + 1 + max(24, (n_out + 1) // 2), n_in + 3)


def _squeeze_band(r: float, dim: int) -> np.ndarray:
    # G[m+2, m] = (r/2) sqrt((m+1)(m+2)), G skew-symmetric, zero elsewhere
    m = np.arange(dim - 2)
    return (r / 2.0) * np.sqrt((m + 1.0) * (m + 2.0))


def squeeze_matrix(r: float, dim: int, columns: int | None = None) -> np.ndarray:
    """Number-basis matrix of S(r) = exp[-(r/2)(a^2 - a^dag^2)], truncated.

    The generator G is real skew-symmetric and pentadiagonal; conjugating
    by diag(i^floor(m/2)) turns iG into a real symmetric banded matrix, so
    the exponential comes from one banded eigensolve and is orthogonal to
    machine precision. Naive column recurrences amplify roundoff
    exponentially and are not used.

    Returns the first `columns` columns (default: all). Columns whose
    squeezed image would spill past `dim` are images under the *truncated*
    generator; callers needing untruncated amplitudes must pass `dim` with
    headroom (squeeze_fock does this automatically).
    """
    if abs(r) > R_MAX:
        raise DomainError(f"|r| exceeds R_MAX = {R_MAX}")
    if columns is None:
        columns = dim
    if r == 0.0:
        return np.eye(dim, columns)
    band = np.zeros((3, dim))
    band[2, : dim - 2] = -_squeeze_band(r, dim)  # H = i D G D^-1 has -g on band
    w, v = eig_banded(band, lower=True)
    d = 1j ** (np.arange(dim) // 2)
    S = (v * np.exp(-1j * w)) @ v.T
    S = np.conj(d)[:, None] * S * d[None, :]
    return np.ascontiguousarray(S.real[:, :columns])


def _apply_squeeze(amps: np.ndarray, r: float, wd: int) -> np.ndarray:
    """exp(G) @ amps on a wd-dimensional window via sparse expm_multiply."""
    g = _squeeze_band(r, wd)
    G = diags_array([g, -g], offsets=[-2, 2], format="csr")
    vec = np.zeros(wd, dtype=complex)
    vec[: amps.size] = amps
    return expm_multiply(G, vec)


def squeeze_fock(
    state: FockVector, r: float, cutoff: int | None = None, tol: float | None = 1e-8
) -> FockVector:
    """Apply S(r) to a Fock vector.

    The product is computed in a padded working dimension chosen from the
    input support and r, then truncated to `cutoff` (default: the even
    cutoff rule applied to the squeezed state's own <n>).

    Raises
    ------
    TruncationError
        If the weight beyond the requested cutoff exceeds `tol`.
    """
    if abs(r) > R_MAX:
        raise DomainError(f"|r| exceeds R_MAX = {R_MAX}")
    if r == 0.0:
        return state if cutoff is None else state.padded(max(cutoff, state.cutoff))
    wd = _squeeze_work_dim(state.cutoff, r, cutoff or 0)
    full = _apply_squeeze(state.amps, r, wd)
    if cutoff is None:
        # floor from the shared cutoff rule, extended data-driven so the
        # discarded tail stays well under the tolerance
        nbar = FockVector(full).mean_photon()
        floor = min(default_cutoff(nbar), wd - 1)
        w = np.abs(full) ** 2
        tail = np.cumsum(w[::-1])[::-1]
        target = (0.1 * tol if tol is not None else 1e-9) * w.sum()
        ok = np.nonzero(tail <= target)[0]
        data_cut = int(ok[0]) if ok.size else wd
        cutoff = min(max(floor, data_cut + data_cut % 2), wd - 1)
    kept = full[: cutoff + 1]
    lost = float(np.sum(np.abs(full[cutoff + 1 :]) ** 2))
    total = float(np.sum(np.abs(full) ** 2))
    if tol is not None and total > 0 and lost / total > tol:
        raise TruncationError(
            f"squeeze tail {lost / total:.3e} beyond cutoff {cutoff} exceeds {tol:.1e}"
        )
    return FockVector(kept)


def cat_fock(target: CatTarget, cutoff: int | None = None, tol: float | None = 1e-8) -> FockVector:
    """Normalized parity cat in the Fock basis, squeezed by r_post.

    Amplitudes proportional to alpha^n / sqrt(n!) on the selected parity.
    For alpha = 0 (even) returns vacuum.
    """
    a = target.alpha
    a2 = a * a
    if target.parity == "even":
        nbar0 = a2 * np.tanh(a2) if a2 > 0 else 0.0
        start = 0
    else:
        nbar0 = a2 / np.tanh(a2)
        start = 1
    base_cut = max(default_cutoff(nbar0), int(np.ceil(4.0 * a2)))
    if target.r_post == 0.0 and cutoff is not None:
        base_cut = max(base_cut, cutoff)
    n = np.arange(start, base_cut + 1, 2)
    amps = np.zeros(base_cut + 1, dtype=complex)
    if a == 0.0:
        amps[0] = 1.0
    else:
        logw = n * np.log(a) - 0.5 * gammaln(n + 1)
        w = np.exp(logw - logw.max())
        amps[n] = w / np.linalg.norm(w)
    vec = FockVector(amps)
    if target.r_post != 0.0:
        return squeeze_fock(vec, target.r_post, cutoff=cutoff, tol=tol)
    if cutoff is not None:
        vec = FockVector(vec.amps[: cutoff + 1])
        if tol is not None and abs(1.0 - vec.norm() ** 2) > tol:
            raise TruncationError(f"cat cutoff {cutoff} below 4|alpha|^2 support")
    return vec


def _pad_pair(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = max(a.size, b.size)
    if a.size < n:
        a = np.concatenate([a, np.zeros(n - a.size, dtype=complex)])
    if b.size < n:
        b = np.concatenate([b, np.zeros(n - b.size, dtype=complex)])
    return a, b


def fidelity(a: FockVector | FockDensityMatrix, b: FockVector) -> float:
    """|<b|a>|^2 for pure a, <b|a|b> for mixed a; cutoffs auto-padded.

    Inputs are normalized defensively (mixed states by their trace), so the
    result always lands in [0, 1] up to roundoff.
    """
    if isinstance(a, FockDensityMatrix):
        bv = b.amps / b.norm()
        n = max(a.mat.shape[0], bv.size)
        rho = np.zeros((n, n), dtype=complex)
        rho[: a.mat.shape[0], : a.mat.shape[1]] = a.mat
        tr = np.real(np.trace(rho))
        if tr == 0.0:
            return 0.0
        vb = np.zeros(n, dtype=complex)
        vb[: bv.size] = bv
        return float(np.real(np.conj(vb) @ rho @ vb) / tr)
    va, vb = _pad_pair(a.amps, b.amps)
    na, nb = np.linalg.norm(va), np.linalg.norm(vb)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.abs(np.vdot(vb, va)) ** 2 / (na * nb) ** 2)


def hermite_functions(n_max: int, x: np.ndarray) -> np.ndarray:
    """Harmonic-oscillator eigenfunctions phi_0..phi_n_max sampled at x.

    Stable normalized recurrence; phi_n orthonormal with unit weight.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = np.pi ** (-0.25) * np.exp(-0.5 * x * x)
    if n_max >= 1:
        out[1] = SQRT2 * x * out[0]
    for n in range(1, n_max):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * x * out[n] - np.sqrt(n / (n + 1)) * out[n - 1]
    return out


def position_wavefunction(state: FockVector, x: np.ndarray) -> np.ndarray:
    """psi(x) = sum_n a_n phi_n(x) for the quadrature x = (a + a^dag)/sqrt(2)."""
    basis = hermite_functions(state.cutoff, np.asarray(x, dtype=float))
    return np.tensordot(state.amps, basis, axes=(0, 0))


def wigner(
    state: FockVector | FockDensityMatrix,
    x_axis: np.ndarray | None = None,
    p_axis: np.ndarray | None = None,
) -> WignerGrid:
    """Wigner function with the conventions integral(W) = 1, vacuum W(0,0) = 1/pi.

    Evaluated as a Laguerre series over density-matrix elements,

        W_{|m><n|}(x, p) = (1/pi) (-1)^n sqrt(n!/m!) (sqrt(2) z)^{m-n}
                           e^{-(x^2+p^2)} L_n^{m-n}(2(x^2+p^2)),   z = x - i p,

    summed with Hermitian pairing so the result is exactly real.
    """
    if x_axis is None:
        x_axis = np.linspace(-6.0, 6.0, 201)
    if p_axis is None:
        p_axis = np.linspace(-6.0, 6.0, 201)
    x_axis = np.asarray(x_axis, dtype=float)
    p_axis = np.asarray(p_axis, dtype=float)

    if isinstance(state, FockVector):
        v = state.amps
        rho = np.outer(v, np.conj(v))
    else:
        rho = state.mat
    dim = rho.shape[0]

    X, P = np.meshgrid(x_axis, p_axis, indexing="ij")
    Z = X - 1j * P
    r2 = 2.0 * (X * X + P * P)
    env = np.exp(-(X * X + P * P))

    thr = 1e-15 * max(np.abs(rho).max(), 1e-300)
    W = np.zeros_like(X)
    zpow = np.ones_like(Z)
    for d in range(dim):
        offd = np.diagonal(rho, offset=-d)  # rho[n + d, n]
        idx = np.nonzero(np.abs(offd) > thr)[0]
        if idx.size:
            acc = np.zeros_like(Z)
            for n in idx:
                coef = offd[n] * (-1.0) ** n * np.exp(
                    0.5 * (gammaln(n + 1) - gammaln(n + d + 1)) + 0.5 * d * LOG2
                )
                acc += coef * eval_genlaguerre(n, d, r2)
            contrib = np.real(acc * zpow)
            W += contrib if d == 0 else 2.0 * contrib
        zpow = zpow * Z
    W *= env / np.pi
    return WignerGrid(x_axis, p_axis, W)
