"""Exact fractional Brownian motion synthesis on uniform grids.

Paths are generated by circulant embedding of the fractional Gaussian noise
covariance (Davies–Harte): the fGn autocovariance sequence is embedded in a
circulant matrix whose FFT gives a nonnegative spectrum, complex Gaussians
are shaped by the square-root spectrum, and one inverse transform yields an
exact-in-distribution unit-step fGn sample. Cumulative summation and the
self-similar rescaling (T/n_steps)^H produce the path, so Var(B_t) = t^{2H}
holds exactly in distribution.

Every path is a pure function of (H, n_steps, dim, seed): the generator is
the counter-based Philox keyed by the seed, and components consume disjoint
slices of a single draw. Callers may generate paths concurrently.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import NegativeSpectrum, NonDividingFactor

HORIZON = 1.0

# Eigenvalues in [-EIG_CLAMP_REL * max_eig, 0) are rounding noise and are
# clamped to zero; anything lower means the embedding itself failed.
EIG_CLAMP_REL = 1e-10


@dataclass(frozen=True)
class HurstParameter:
    """Roughness index of the driving noise, restricted to (0, 1)."""

    value: float

    def __post_init__(self):
        if not (0.0 < self.value < 1.0):
            raise ValueError(f"Hurst parameter must lie in (0,1), "
                             f"got {self.value}")


def as_hurst(h) -> HurstParameter:
    return h if isinstance(h, HurstParameter) else HurstParameter(float(h))


@dataclass(frozen=True, eq=False)
class FbmPath:
    """A d-dimensional fBm path on the uniform grid t_k = k/n_steps."""

    hurst: HurstParameter
    horizon: float
    n_steps: int
    dim: int
    values: np.ndarray = field(repr=False)  # (n_steps + 1, dim)
    seed: int

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * (self.horizon / self.n_steps)


def fgn_autocovariance(H, lag: int) -> float:
    """Unit-step fractional Gaussian noise autocovariance at an integer lag.

    0.5*(|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}); equals 1 at lag 0 and
    vanishes for lag >= 1 when H = 1/2.
    """
    if lag < 0:
        raise ValueError("lag must be nonnegative")
    return float(_fgn_autocov_array(as_hurst(H).value, np.array([lag]))[0])


def _fgn_autocov_array(h: float, lags: np.ndarray) -> np.ndarray:
    k = lags.astype(np.float64)
    e = 2.0 * h
    return 0.5 * (np.abs(k + 1.0) ** e - 2.0 * np.abs(k) ** e
                  + np.abs(k - 1.0) ** e)


def fbm_covariance(H, s: float, t: float) -> float:
    """Closed-form covariance 0.5*(s^{2H} + t^{2H} - |t-s|^{2H})."""
    e = 2.0 * as_hurst(H).value
    return 0.5 * (s ** e + t ** e - abs(t - s) ** e)


def _embedding_spectrum(h: float, nfft: int) -> np.ndarray:
    """Eigenvalues of the circulant embedding of the fGn covariance."""
    rho = _fgn_autocov_array(h, np.arange(nfft + 1))
    # first circulant row: rho_0 .. rho_{nfft}, then mirrored rho_{nfft-1}..rho_1
    row = np.concatenate([rho, rho[-2:0:-1]])
    lam = np.fft.fft(row).real
    floor = -EIG_CLAMP_REL * lam.max()
    if lam.min() < floor:
        raise NegativeSpectrum(
            f"circulant eigenvalue {lam.min():.3e} below tolerance "
            f"{floor:.3e} for H={h}, size={nfft}")
    return np.maximum(lam, 0.0)


def _next_pow2(n: int) -> int:
    return 1 << (int(n) - 1).bit_length()


def sample_fbm(H, n_steps: int, dim: int = 1, seed: int = 0) -> FbmPath:
    """Draw an exact d-dimensional fBm path on a uniform grid of [0, 1].

    Deterministic given (H, n_steps, dim, seed). The embedding pads the grid
    size to a power of two internally; a contiguous prefix of a stationary
    fGn sample keeps the exact law, so arbitrary n_steps >= 1 are supported.
    """
    hurst = as_hurst(H)
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if dim < 1:
        raise ValueError("dim must be >= 1")
    nfft = _next_pow2(n_steps)
    m = 2 * nfft
    lam = _embedding_spectrum(hurst.value, nfft)

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    normals = rng.standard_normal((dim, m))

    # Hermitian-symmetric spectral noise: real weights at modes 0 and nfft,
    # complex pairs elsewhere; E|z_k|^2 = lam_k / m for every mode.
    z = np.empty((dim, m), dtype=np.complex128)
    re = normals[:, :nfft + 1]
    im = normals[:, nfft + 1:]
    z[:, 0] = np.sqrt(lam[0] / m) * re[:, 0]
    z[:, nfft] = np.sqrt(lam[nfft] / m) * re[:, nfft]
    coeff = np.sqrt(lam[1:nfft] / (2.0 * m))
    z[:, 1:nfft] = coeff * (re[:, 1:nfft] + 1j * im)
    z[:, nfft + 1:] = np.conj(z[:, 1:nfft][:, ::-1])

    fgn = np.fft.fft(z, axis=1).real[:, :n_steps]
    scale = (HORIZON / n_steps) ** hurst.value
    values = np.empty((n_steps + 1, dim), dtype=np.float64)
    values[0] = 0.0
    np.cumsum(fgn.T * scale, axis=0, out=values[1:])
    return FbmPath(hurst=hurst, horizon=HORIZON, n_steps=int(n_steps),
                   dim=int(dim), values=values, seed=int(seed))


def subsample(path: FbmPath, factor: int) -> FbmPath:
    """Restrict a path to every factor-th grid point (bit-exact copies)."""
    factor = int(factor)
    if factor < 1 or path.n_steps % factor != 0:
        raise NonDividingFactor(
            f"factor {factor} does not divide n_steps {path.n_steps}")
    return FbmPath(hurst=path.hurst, horizon=path.horizon,
                   n_steps=path.n_steps // factor, dim=path.dim,
                   values=path.values[::factor].copy(), seed=path.seed)


def derive_path_seed(master_seed: int, stream_index: int,
                     path_index: int) -> int:
    """Collision-safe 64-bit seed for one (stream, path) cell.

    Pure function of its arguments (SeedSequence spawn-key hashing), so path
    generation can be distributed over any number of workers.
    """
    ss = np.random.SeedSequence(entropy=int(master_seed),
                                spawn_key=(int(stream_index),
                                           int(path_index)))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class CovarianceCheck:
    s: float
    t: float
    empirical: float
    theoretical: float
    stderr: float

    @property
    def sigmas(self) -> float:
        return abs(self.empirical - self.theoretical) / self.stderr


def covariance_self_test(H, n_steps: int, n_paths: int, pairs, seed: int = 0,
                         stream_index: int = 0):
    """Empirical vs closed-form covariances with Monte Carlo standard errors.

    Each (s, t) pair must lie on the grid. Returns one CovarianceCheck per
    pair; the caller decides the sigma tolerance.
    """
    hurst = as_hurst(H)
    idx = []
    for s, t in pairs:
        for u in (s, t):
            j = u * n_steps
            if abs(j - round(j)) > 1e-9:
                raise ValueError(f"pair point {u} is off the grid "
                                 f"(n_steps={n_steps})")
        idx.append((round(s * n_steps), round(t * n_steps)))

    prods = np.empty((n_paths, len(idx)), dtype=np.float64)
    for i in range(n_paths):
        path = sample_fbm(hurst, n_steps, dim=1,
                          seed=derive_path_seed(seed, stream_index, i))
        b = path.values[:, 0]
        for j, (a, c) in enumerate(idx):
            prods[i, j] = b[a] * b[c]

    out = []
    for j, (s, t) in enumerate(pairs):
        emp = float(prods[:, j].mean())
        se = float(prods[:, j].std(ddof=1) / np.sqrt(n_paths))
        out.append(CovarianceCheck(s=float(s), t=float(t), empirical=emp,
                                   theoretical=fbm_covariance(hurst, s, t),
                                   stderr=se))
    return out
