"""Drift catalog: symbolic specs, Gaussian mollification, norms, validators.

A drift is described symbolically together with its Besov metadata; only the
effective regularity gamma - d/p enters the admissibility and rate formulas.
Mollification convolves with the Gaussian kernel of variance 1/n. Closed
forms are used wherever they exist (Dirac, indicator kinds); the singular
power-law kind is integrated by adaptive Gauss-Kronrod quadrature split at
the origin, and generic smooth drifts by Gauss-Hermite quadrature.

Vector-valued norm convention: sup_norm and lip_const take the maximum over
output components (per-component sup / sup-gradient), which makes the
indicator kinds' norms equal to their scalar 1-d factors.
"""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from . import _backend
from .exceptions import PositiveRegularity, QuadratureNonConvergence, StepTooLarge
from .fbm import as_hurst

# Reference boxes for grid-based norm searches (diagnostic use).
SMOOTH_NORM_BOX = 8.0
POWER_NORM_BOX = 2.0

_GH_ORDER = 48
_GH_PROBE_ORDER = 64
_QUAD_EPSREL = 1e-8
_QUAD_EPSABS = 1e-14


@dataclass(frozen=True)
class BesovMeta:
    """Besov-space grading (regularity gamma, integrability p, dimension)."""

    gamma: float
    p: float  # in [1, inf]; math.inf allowed
    dim: int

    @property
    def effective_regularity(self) -> float:
        # d/inf = 0
        if math.isinf(self.p):
            return self.gamma
        return self.gamma - self.dim / self.p


def _smooth_transition(t: np.ndarray) -> np.ndarray:
    """C-infinity ramp: 0 for t <= 0, 1 for t >= 1 (exp(-1/t) profile)."""
    t = np.asarray(t, dtype=np.float64)
    lo = np.clip(t, 1e-300, None)
    hi = np.clip(1.0 - t, 1e-300, None)
    a = np.where(t > 0.0, np.exp(-1.0 / lo), 0.0)
    b = np.where(t < 1.0, np.exp(-1.0 / hi), 0.0)
    return a / (a + b)


def bump_cutoff(y):
    """Smooth bump: 1 on [-1/2, 1/2], supported in [-1, 1]."""
    r = np.abs(np.asarray(y, dtype=np.float64))
    return _smooth_transition(2.0 - 2.0 * r)


@dataclass(frozen=True)
class DriftSpec:
    """Symbolic drift descriptor with its Besov metadata.

    Use the constructors (`dirac`, `indicator_half_line`, ...) rather than
    filling fields directly.
    """

    kind: str
    besov: BesovMeta
    weight: tuple = ()                      # dirac
    alpha: float = 0.0                      # power_singularity
    cutoff: Optional[Callable] = None       # power_singularity
    support: tuple = (-1.0, 1.0)            # power_singularity
    fn: Optional[Callable] = None           # smooth, vectorised (..., d)
    lipschitz_bound: float = math.inf       # smooth

    @staticmethod
    def dirac(weight=(1.0,), dim: Optional[int] = None) -> "DriftSpec":
        w = tuple(float(a) for a in np.atleast_1d(weight))
        d = len(w) if dim is None else int(dim)
        if len(w) != d:
            raise ValueError("weight length must equal dim")
        return DriftSpec(kind="dirac", weight=w,
                         besov=BesovMeta(gamma=0.0, p=1.0, dim=d))

    @staticmethod
    def indicator_half_line() -> "DriftSpec":
        return DriftSpec(kind="indicator_half_line",
                         besov=BesovMeta(gamma=0.0, p=math.inf, dim=1))

    @staticmethod
    def indicator_quadrant() -> "DriftSpec":
        return DriftSpec(kind="indicator_quadrant",
                         besov=BesovMeta(gamma=0.0, p=math.inf, dim=2))

    @staticmethod
    def power_singularity(alpha: float, cutoff: Optional[Callable] = None,
                          support=(-1.0, 1.0)) -> "DriftSpec":
        if not 0.0 < alpha < 1.0:
            raise ValueError("power exponent must lie in (0,1)")
        return DriftSpec(kind="power_singularity", alpha=float(alpha),
                         cutoff=bump_cutoff if cutoff is None else cutoff,
                         support=(float(support[0]), float(support[1])),
                         besov=BesovMeta(gamma=-float(alpha), p=math.inf,
                                         dim=1))

    @staticmethod
    def smooth(fn: Callable, lipschitz_bound: float, dim: int = 1,
               besov: Optional[BesovMeta] = None) -> "DriftSpec":
        meta = besov if besov is not None else BesovMeta(gamma=1.0,
                                                         p=math.inf, dim=dim)
        return DriftSpec(kind="smooth", fn=fn,
                         lipschitz_bound=float(lipschitz_bound), besov=meta)

    @property
    def dim(self) -> int:
        return self.besov.dim

    @property
    def effective_regularity(self) -> float:
        return self.besov.effective_regularity


class MollifiedDrift:
    """The smoothed drift b^n (Gaussian kernel of variance 1/n).

    Immutable after construction; `eval` is reentrant and safe to share
    across workers. `kind_code`/`params` are set for drifts the stepping
    kernels evaluate natively.
    """

    def __init__(self, spec: DriftSpec, n: int, eval_fn: Callable,
                 kind_code: Optional[int] = None,
                 params: Optional[np.ndarray] = None,
                 closed_sup: Optional[float] = None,
                 closed_lip: Optional[float] = None,
                 norm_box: float = SMOOTH_NORM_BOX):
        self.spec = spec
        self.n = int(n)
        self.eval = eval_fn
        self.kind_code = kind_code
        self.params = params
        self._closed_sup = closed_sup
        self._closed_lip = closed_lip
        self._norm_box = norm_box

    @property
    def dim(self) -> int:
        return self.spec.dim

    @cached_property
    def sup_norm(self) -> float:
        if self._closed_sup is not None:
            return self._closed_sup
        return _grid_sup(self.eval, self.dim, self._norm_box)

    @cached_property
    def lip_const(self) -> float:
        if self._closed_lip is not None:
            return self._closed_lip
        return _grid_lip(self.eval, self.dim, self._norm_box)

    @property
    def c1_norm(self) -> float:
        return self.sup_norm + self.lip_const


def mollify(spec: DriftSpec, n: int) -> MollifiedDrift:
    """Convolve the drift with the Gaussian kernel of variance 1/n."""
    if n < 1:
        raise ValueError("mollification level must be >= 1")
    n = int(n)
    d = spec.dim
    if spec.kind == "dirac":
        amp = (n / (2.0 * math.pi)) ** (0.5 * d)
        params = np.array([0.5 * n, amp, *spec.weight], dtype=np.float64)
        code = _backend.DRIFT_DIRAC
        wmax = max(abs(a) for a in spec.weight)
        return MollifiedDrift(
            spec, n, _native_eval(code, params), code, params,
            closed_sup=wmax * amp,
            closed_lip=wmax * amp * math.sqrt(n) * math.exp(-0.5))
    if spec.kind == "indicator_half_line":
        params = np.array([math.sqrt(0.5 * n)], dtype=np.float64)
        code = _backend.DRIFT_STEP
        return MollifiedDrift(spec, n, _native_eval(code, params), code,
                              params, closed_sup=1.0,
                              closed_lip=math.sqrt(n / (2.0 * math.pi)))
    if spec.kind == "indicator_quadrant":
        params = np.array([math.sqrt(0.5 * n)], dtype=np.float64)
        code = _backend.DRIFT_QUADRANT
        return MollifiedDrift(spec, n, _native_eval(code, params), code,
                              params, closed_sup=1.0,
                              closed_lip=math.sqrt(n / (2.0 * math.pi)))
    if spec.kind == "power_singularity":
        return MollifiedDrift(spec, n, _power_eval(spec, n),
                              norm_box=POWER_NORM_BOX)
    if spec.kind == "smooth":
        return MollifiedDrift(spec, n, _smooth_eval(spec, n))
    raise ValueError(f"unknown drift kind {spec.kind!r}")


def _native_eval(code: int, params: np.ndarray) -> Callable:
    def eval_fn(x):
        return _backend.eval_drift(code, params, x)
    return eval_fn


def _power_eval(spec: DriftSpec, n: int) -> Callable:
    """Pointwise Gauss-Kronrod convolution for kappa(y)|y|^-alpha."""
    alpha = spec.alpha
    cutoff = spec.cutoff
    lo, hi = spec.support
    coef = math.sqrt(n / (2.0 * math.pi))
    half_n = 0.5 * n

    def point(x: float) -> float:
        def integrand(y):
            u = x - y
            return (coef * math.exp(-half_n * u * u)
                    * float(cutoff(y)) * abs(y) ** (-alpha))

        total = 0.0
        pieces = []
        if lo < 0.0 < hi:
            pieces = [(lo, 0.0), (0.0, hi)]  # split at the singular point
        else:
            pieces = [(lo, hi)]
        for a, b in pieces:
            val, err = quad(integrand, a, b, epsabs=_QUAD_EPSABS,
                            epsrel=_QUAD_EPSREL, limit=200)
            if not math.isfinite(val):
                raise QuadratureNonConvergence(
                    f"convolution quadrature returned {val} at x={x}")
            if err > 50.0 * max(_QUAD_EPSABS, _QUAD_EPSREL * abs(val)):
                raise QuadratureNonConvergence(
                    f"quadrature error {err:.2e} too large at x={x}")
            total += val
        return total

    def eval_fn(x):
        x = np.asarray(x, dtype=np.float64)
        flat = x.reshape(-1)
        out = np.array([point(float(v)) for v in flat])
        return out.reshape(x.shape)

    return eval_fn


def _gh_rule(n: int, dim: int, order: int):
    """Gauss-Hermite offsets/weights for E[f(x + Z/sqrt(n))], Z std normal."""
    t, w = np.polynomial.hermite.hermgauss(order)
    scale = math.sqrt(2.0 / n)
    if dim == 1:
        offsets = (scale * t)[:, None]
        weights = w / math.sqrt(math.pi)
    else:
        grids = np.meshgrid(*([scale * t] * dim), indexing="ij")
        offsets = np.stack([g.ravel() for g in grids], axis=-1)
        wgrids = np.meshgrid(*([w] * dim), indexing="ij")
        weights = np.ones(offsets.shape[0])
        for g in wgrids:
            weights = weights * g.ravel()
        weights = weights / math.pi ** (0.5 * dim)
    return offsets, weights


def _smooth_eval(spec: DriftSpec, n: int) -> Callable:
    """Gaussian-expectation quadrature for a smooth vectorised drift."""
    fn = spec.fn
    d = spec.dim
    offsets, weights = _gh_rule(n, d, _GH_ORDER)

    def eval_fn(x):
        x = np.asarray(x, dtype=np.float64)
        pts = x[..., None, :] + offsets
        vals = fn(pts)
        return np.einsum("...qd,q->...d", vals, weights)

    # construction-time convergence probe against a higher order
    probe = np.linspace(-2.0, 2.0, 5)[:, None] * np.ones(d)
    off2, w2 = _gh_rule(n, d, _GH_PROBE_ORDER)
    v1 = eval_fn(probe)
    v2 = np.einsum("...qd,q->...d", fn(probe[..., None, :] + off2), w2)
    scale = 1.0 + np.abs(v2)
    if np.max(np.abs(v1 - v2) / scale) > 1e-8:
        raise QuadratureNonConvergence(
            "Gauss-Hermite orders disagree; drift too rough for the "
            "smooth-kind quadrature")
    return eval_fn


def _grid_sup(eval_fn, dim: int, box: float) -> float:
    """Sup over the reference box of the max-over-components magnitude."""
    npts = 513 if dim == 1 else 65
    lo = np.full(dim, -box)
    hi = np.full(dim, box)
    best = 0.0
    for _ in range(3):
        axes = [np.linspace(lo[i], hi[i], npts) for i in range(dim)]
        grids = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
        mags = np.max(np.abs(eval_fn(pts)), axis=-1)
        j = int(np.argmax(mags))
        best = float(mags[j])
        center = pts[j]
        width = (hi - lo) / (npts - 1) * 2.0
        lo = center - width
        hi = center + width
    return best


def _grid_lip(eval_fn, dim: int, box: float) -> float:
    """Finite-difference sup-gradient estimate over the reference box."""
    npts = 1025 if dim == 1 else 129
    lo = np.full(dim, -box)
    hi = np.full(dim, box)
    best = 0.0
    for _ in range(3):
        axes = [np.linspace(lo[i], hi[i], npts) for i in range(dim)]
        grids = np.meshgrid(*axes, indexing="ij")
        pts = np.stack(grids, axis=-1)
        vals = eval_fn(pts)
        slopes = np.zeros(grids[0].shape)
        center = None
        for ax in range(dim):
            step = axes[ax][1] - axes[ax][0]
            diff = np.max(np.abs(np.diff(vals, axis=ax)), axis=-1) / step
            m = float(diff.max())
            if m > best or center is None:
                if m > best:
                    best = m
                idx = np.unravel_index(int(np.argmax(diff)), diff.shape)
                center = np.array([axes[i][idx[i]] for i in range(dim)])
        width = (hi - lo) / (npts - 1) * 4.0
        lo = center - width
        hi = center + width
    return best


def sup_norm(m: MollifiedDrift) -> float:
    """Sup norm of the mollified drift (exact for Dirac/indicator kinds)."""
    return m.sup_norm


def lip_const(m: MollifiedDrift) -> float:
    """Lipschitz constant (sup-gradient part of the C^1 norm)."""
    return m.lip_const


@dataclass(frozen=True)
class AdmissibleRange:
    """Largest Hurst parameter compatible with the drift's regularity."""

    h_max: float
    limit_case_admissible: bool

    def classify(self, H) -> str:
        v = as_hurst(H).value
        if v < self.h_max - 1e-12:
            return "sub-critical"
        if abs(v - self.h_max) <= 1e-12 and self.limit_case_admissible:
            return "limit"
        return "out-of-theory"


def admissible_hurst(spec: DriftSpec) -> AdmissibleRange:
    """Admissible Hurst range for a drift of effective regularity r <= 0.

    r < 0: H < 1/(2(1-r)) is sub-critical; H equal to the bound is the limit
    case, admitted only for p < inf. r = 0: the whole range H < 1/2
    (exclusive).
    """
    r = spec.effective_regularity
    if r > 0:
        raise PositiveRegularity(
            f"effective regularity {r} > 0 is outside this library's scope")
    if r == 0.0:
        return AdmissibleRange(h_max=0.5, limit_case_admissible=False)
    h_max = 1.0 / (2.0 * (1.0 - r))
    limit_ok = (not math.isinf(spec.besov.p)
                and spec.besov.gamma > 1.0 - 1.0 / (2.0 * h_max) - 1e-12)
    return AdmissibleRange(h_max=h_max, limit_case_admissible=limit_ok)


def theoretical_rate(spec: DriftSpec) -> float:
    """Strong-convergence order 1/(2(1-r)) for r < 0, 1/2 for r = 0.

    At the limit-case Hurst value the true rate carries a non-explicit
    constant; diagnostics report such configurations as unquantified rather
    than changing this value.
    """
    r = spec.effective_regularity
    if r > 0:
        raise PositiveRegularity(
            f"effective regularity {r} > 0 is outside this library's scope")
    if r == 0.0:
        return 0.5
    return 1.0 / (2.0 * (1.0 - r))


def coupled_mollification_level(h: float, spec: DriftSpec) -> int:
    """Step-to-mollification coupling floor(h^(-1/(1-r))), r <= 0."""
    if not 0.0 < h < 0.5:
        raise StepTooLarge(f"step {h} outside (0, 1/2)")
    r = spec.effective_regularity
    if r > 0:
        raise PositiveRegularity(
            "coupling rule needs effective regularity <= 0")
    val = h ** (-1.0 / (1.0 - r))
    snapped = round(val)
    if abs(val - snapped) <= 1e-9 * max(1.0, abs(val)):
        val = snapped
    return int(math.floor(val))


@dataclass(frozen=True)
class TamingDiagnostic:
    """Taming products for one (H, h, n) triple vs the coupled-family anchor.

    `flagged` means the pair left the uniformly-tamed domain: a product
    exceeds the family's value at the coarsest admissible step h0 = 1/4 with
    its coupled level.
    """

    hurst: float
    h: float
    n: int
    eta: float
    sup_product: float
    c1_product: float
    sup_bound: float
    c1_bound: float

    @property
    def flagged(self) -> bool:
        slack = 1.0 + 1e-9
        return (self.sup_product > self.sup_bound * slack
                or self.c1_product > self.c1_bound * slack)


def check_taming_condition(spec: DriftSpec, H, h: float, n: int,
                           eta: Optional[float] = None) -> TamingDiagnostic:
    """Products ||b^n||_inf h^{1/2-H} and ||b^n||_C1 h^{1/2+H-eta}.

    eta defaults to H/2 (any fixed fraction of H gives a monotone
    diagnostic).
    """
    hv = as_hurst(H).value
    if not 0.0 < h < 1.0:
        raise ValueError("step must lie in (0,1)")
    eta_v = 0.5 * hv if eta is None else float(eta)
    m = mollify(spec, n)
    e_sup = 0.5 - hv
    e_c1 = 0.5 + hv - eta_v
    h0 = 0.25
    if spec.effective_regularity <= 0:
        n0 = coupled_mollification_level(h0, spec)
    else:
        n0 = n  # coupling undefined for positive regularity; self-anchor
    m0 = mollify(spec, n0)
    return TamingDiagnostic(
        hurst=hv, h=float(h), n=int(n), eta=eta_v,
        sup_product=m.sup_norm * h ** e_sup,
        c1_product=m.c1_norm * h ** e_c1,
        sup_bound=m0.sup_norm * h0 ** e_sup,
        c1_bound=m0.c1_norm * h0 ** e_c1)
