"""Critical-angle geometry and numerical verification of the spectral bounds.

The tangent angles ``t`` where the odd-harmonic deviation ``f`` vanishes are
the curve's critical angles; the corresponding arc-length points come in
antipodal pairs ``s`` and ``s + pi`` with parallel tangents.  Every closed
curve has at least six sign-changing zeros of ``f``.  Two lower bounds for
the ground-state energy hang on this geometry:

* If some set of angles ``{t_i}`` meets every closed window of length pi/2
  and ``|f| <= alpha`` on it, then ``lambda >= (1 + 2 alpha/pi)^-2``.  The
  sharp such alpha (``lemma3_alpha``) is the window min-max of ``|f|``.
* Consequently ``lambda >= 1`` whenever the critical angles are pi/2-dense
  (``max_circular_gap <= pi/2``), and for every convex curve
  ``lambda > (1 + 1/(1 + 8/pi))^-2 = 0.60847...`` because alpha can always
  be chosen below ``pi / (2 (1 + 8/pi))``.

The verifiers below check each link of that chain on a concrete curve with
explicit numerical slack; they do not re-derive anything symbolically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.ndimage import minimum_filter1d
from scipy.optimize import minimize_scalar

from .curve import (
    TWO_PI,
    CurveGeometry,
    CurveSpec,
    HarmonicSplit,
    embed,
    split_fg,
)
from .errors import NotApplicable, ZeroProjection
from .spectral import Scheme, SpectralResult, converge_lambda

PI = np.pi
HALF_PI = 0.5 * np.pi

#: refined zeros satisfy |f| below this
_ZERO_VALUE_TOL = 1e-10
#: bisection interval width target
_ZERO_WIDTH_TOL = 1e-12
#: circular tolerance for merging duplicate zeros
_ZERO_MERGE_TOL = 1e-10
#: grace when classifying a gap as <= pi/2 (refined zeros carry ~1e-12 error)
_GAP_GRACE = 1e-9


def theorem1_constant() -> float:
    """The universal ground-state floor (1 + 1/(1 + 8/pi))^-2 = 0.608478..."""
    return (1.0 + 1.0 / (1.0 + 8.0 / PI)) ** (-2.0)


def alpha_window_bound() -> float:
    """pi / (2 (1 + 8/pi)) = 0.442915...; no convex curve's alpha* reaches it."""
    return PI / (2.0 * (1.0 + 8.0 / PI))


# ---------------------------------------------------------------------------
# critical angles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CriticalAngleSet:
    """Zeros of f in [0, 2*pi), split into sign-changing and tangential."""

    angles: np.ndarray
    sign_changes: np.ndarray
    f_identically_zero: bool

    @property
    def n_sign_changes(self) -> int:
        return int(np.count_nonzero(self.sign_changes))

    @property
    def n_critical_points(self) -> int:
        """Arc-length critical points; one per angle (antipodal pairs map to
        antipodal point pairs)."""
        return int(self.angles.size)


def _f_extrema(split: HarmonicSplit) -> np.ndarray:
    """All zeros of f' in [0, 2*pi), from the companion matrix of f' in z=e^it.

    Exact up to eigenvalue roundoff, so interior extrema of f cannot be
    missed between grid samples; one Newton step polishes each root.
    """
    hs = [h for h in split.f_harmonics if h.a != 0.0 or h.b != 0.0]
    if not hs:
        return np.empty(0)
    m = max(h.n for h in hs)
    poly = np.zeros(2 * m + 1, dtype=complex)
    for h in hs:
        c = 0.5 * h.n * (h.a + 1j * h.b)
        poly[m + h.n] += c
        poly[m - h.n] += np.conj(c)
    roots = np.roots(poly[::-1])
    on_circle = np.abs(np.abs(roots) - 1.0) < 1e-6
    t = np.sort(np.mod(np.angle(roots[on_circle]), TWO_PI))
    if t.size == 0:
        return t
    # one Newton polish on f' (second derivative of f)
    fn, fa, fb = split._fn, split._fa, split._fb
    for _ in range(2):
        nt = np.multiply.outer(fn, t)
        fp = (fn * fa) @ np.cos(nt) - (fn * fb) @ np.sin(nt)
        fpp = -(fn * fn * fa) @ np.sin(nt) - (fn * fn * fb) @ np.cos(nt)
        safe = np.abs(fpp) > 1e-14
        t = np.where(safe, t - fp / np.where(safe, fpp, 1.0), t)
    t = np.mod(t, TWO_PI)
    t.sort()
    keep = np.concatenate(([True], np.diff(t) > 1e-9))
    return t[keep]


def _bisect_zeros(fun, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Vector bisection on brackets with opposite-sign endpoints."""
    flo = fun(lo)
    for _ in range(64):
        if np.max(hi - lo) < _ZERO_WIDTH_TOL:
            break
        mid = 0.5 * (lo + hi)
        fm = fun(mid)
        same = np.sign(fm) == np.sign(flo)
        lo = np.where(same, mid, lo)
        flo = np.where(same, fm, flo)
        hi = np.where(same, hi, mid)
        exact = fm == 0.0
        lo = np.where(exact, mid, lo)
        hi = np.where(exact, mid, hi)
    return 0.5 * (lo + hi)


def critical_angles(split: HarmonicSplit, grid: Optional[int] = None) -> CriticalAngleSet:
    """Locate the zeros of f, classified by whether f changes sign.

    Sign changes are bracketed on a dense grid and bisected to 1e-12 width.
    Interior extrema of f (found exactly through the companion matrix of f')
    guard against pairs of zeros hiding inside one grid cell and supply the
    tangential zeros, detected by |f| dipping below 1e-10 without a sign
    change.
    """
    if split.f_is_zero:
        empty = np.empty(0)
        empty.setflags(write=False)
        return CriticalAngleSet(angles=empty, sign_changes=empty.astype(bool), f_identically_zero=True)

    m = grid if grid is not None else max(2048, 128 * split.f_max_n)
    step = TWO_PI / m
    t = np.arange(m) * step
    fv = split.f(t)
    sgn = np.sign(fv)

    zeros: list[float] = []
    flips: list[bool] = []

    # exact zeros landing on grid nodes
    on_grid = np.flatnonzero(fv == 0.0)
    for j in on_grid:
        zeros.append(t[j])
        flips.append(bool(sgn[(j - 1) % m] * sgn[(j + 1) % m] < 0))

    prod = sgn * np.roll(sgn, -1)
    bracket_cells = np.flatnonzero(prod < 0)
    lo = list(t[bracket_cells])
    hi = list(t[bracket_cells] + step)

    # extrema pass: tangential zeros and sub-grid sign-change pairs
    has_bracket = np.zeros(m, dtype=bool)
    has_bracket[bracket_cells] = True
    for e in _f_extrema(split):
        fe = float(split.f(e))
        cell = int(e / step) % m
        if abs(fe) < _ZERO_VALUE_TOL:
            zeros.append(e)
            flips.append(False)
        elif not has_bracket[cell] and sgn[cell] != 0 and np.sign(fe) != sgn[cell]:
            left, right = t[cell], t[cell] + step
            lo.extend([left, e])
            hi.extend([e, right])

    if lo:
        found = _bisect_zeros(split.f, np.asarray(lo), np.asarray(hi))
        zeros.extend(np.mod(found, TWO_PI))
        flips.extend([True] * found.size)

    angles = np.asarray(zeros)
    flips_arr = np.asarray(flips, dtype=bool)
    order = np.argsort(angles)
    angles, flips_arr = angles[order], flips_arr[order]

    # merge duplicates (keep the sign-changing classification when present)
    keep_angles: list[float] = []
    keep_flips: list[bool] = []
    for ang, fl in zip(angles, flips_arr):
        if keep_angles and abs(ang - keep_angles[-1]) < _ZERO_MERGE_TOL:
            keep_flips[-1] = keep_flips[-1] or fl
        else:
            keep_angles.append(float(ang))
            keep_flips.append(bool(fl))
    if len(keep_angles) > 1 and (TWO_PI - keep_angles[-1] + keep_angles[0]) < _ZERO_MERGE_TOL:
        keep_flips[0] = keep_flips[0] or keep_flips[-1]
        keep_angles.pop()
        keep_flips.pop()

    out_a = np.asarray(keep_angles)
    out_f = np.asarray(keep_flips, dtype=bool)
    out_a.setflags(write=False)
    out_f.setflags(write=False)
    return CriticalAngleSet(angles=out_a, sign_changes=out_f, f_identically_zero=False)


def check_lemma1(cas: CriticalAngleSet) -> bool:
    """True when f has at least six sign-changing zeros (guaranteed for any
    nontrivial f of a closed curve)."""
    if cas.f_identically_zero:
        raise ValueError("lemma 1 concerns nontrivial f; this curve has f == 0")
    return cas.n_sign_changes >= 6


def max_circular_gap(cas: CriticalAngleSet) -> float:
    """Largest circular spacing between consecutive critical angles.

    Zero when f vanishes identically (every angle is critical).  The pi/2
    density condition for the unit lower bound is ``gap <= pi/2``: a gap of
    exactly pi/2 still puts a zero in every half-open pi/2 window.
    """
    if cas.f_identically_zero:
        return 0.0
    if cas.angles.size == 0:
        raise ValueError("no critical angles found for a nontrivial f")
    a = np.sort(cas.angles)
    if a.size == 1:
        return TWO_PI
    gaps = np.diff(a)
    return float(max(gaps.max(), TWO_PI - a[-1] + a[0]))


def theorem2_applicable(cas: CriticalAngleSet) -> bool:
    return cas.f_identically_zero or max_circular_gap(cas) <= HALF_PI + _GAP_GRACE


# ---------------------------------------------------------------------------
# window min-max of |f|  (the sharp alpha for the density bound)
# ---------------------------------------------------------------------------


def _refine_max(fun: Callable, lo: float, hi: float, xtol: float = 1e-8) -> float:
    """Shrinking-grid maximization of a Lipschitz function on [lo, hi]."""
    best = -np.inf
    while hi - lo > xtol:
        xs = np.linspace(lo, hi, 25)
        vals = [fun(x) for x in xs]
        j = int(np.argmax(vals))
        best = max(best, float(vals[j]))
        step = (hi - lo) / 24.0
        lo, hi = xs[j] - 2.0 * step, xs[j] + 2.0 * step
    return best


class _WindowMin:
    """Exact minimum of f (or |f|) over angle windows.

    On a window the minimum sits at an endpoint, at an interior extremum of
    f (located exactly through the companion matrix of f'), or equals zero
    when a zero of f falls inside, so no sampling of f is required.
    """

    def __init__(self, split: HarmonicSplit):
        self.split = split
        zeros = np.sort(critical_angles(split).angles)
        self.zeros2 = np.concatenate([zeros, zeros + TWO_PI])
        ext = np.sort(_f_extrema(split))
        vals = np.atleast_1d(split.f(ext))
        self.ext2 = np.concatenate([ext, ext + TWO_PI])
        self.vals2 = np.concatenate([vals, vals])

    def _has_zero(self, lo, hi):
        return np.searchsorted(self.zeros2, hi, side="left") > np.searchsorted(
            self.zeros2, lo, side="right"
        )

    def abs_min(self, start: float, width: float = HALF_PI) -> float:
        lo = float(np.mod(start, TWO_PI))
        hi = lo + width
        if self._has_zero(lo, hi):
            return 0.0
        m = min(abs(float(self.split.f(lo))), abs(float(self.split.f(hi))))
        j0, j1 = np.searchsorted(self.ext2, lo), np.searchsorted(self.ext2, hi)
        if j1 > j0:
            m = min(m, float(np.abs(self.vals2[j0:j1]).min()))
        return m

    def signed_min(self, start: float, width: float = HALF_PI) -> float:
        lo = float(np.mod(start, TWO_PI))
        hi = lo + width
        m = min(float(self.split.f(lo)), float(self.split.f(hi)))
        j0, j1 = np.searchsorted(self.ext2, lo), np.searchsorted(self.ext2, hi)
        if j1 > j0:
            m = min(m, float(self.vals2[j0:j1].min()))
        if self._has_zero(lo, hi):
            m = min(m, 0.0)
        return m

    def abs_min_grid(self, starts: np.ndarray, width: float = HALF_PI) -> np.ndarray:
        lo = np.mod(starts, TWO_PI)
        hi = lo + width
        out = np.minimum(
            np.abs(self.split.f(lo)), np.abs(self.split.f(np.mod(hi, TWO_PI)))
        )
        mask = (self.ext2[None, :] >= lo[:, None]) & (self.ext2[None, :] <= hi[:, None])
        ext_min = np.where(mask, np.abs(self.vals2)[None, :], np.inf).min(axis=1)
        out = np.minimum(out, ext_min)
        has_zero = np.searchsorted(self.zeros2, hi) > np.searchsorted(self.zeros2, lo)
        out[has_zero] = 0.0
        return out


def lemma3_alpha(split: HarmonicSplit, resolution: int = 4096) -> float:
    """Smallest alpha whose sublevel set {|f| <= alpha} meets every closed
    pi/2 window; equals max over window starts of the window minimum of |f|.

    Exact window minima are evaluated on a dense grid of window starts
    (resolution >= 4096) and every near-maximal cluster is refined by local
    subdivision to 1e-8 in the start angle.
    """
    if split.f_is_zero:
        return 0.0
    wm = _WindowMin(split)
    m = max(resolution, 4096)
    step = TWO_PI / m
    grid_vals = wm.abs_min_grid(np.arange(m) * step)
    coarse = float(grid_vals.max())
    if coarse == 0.0:
        return 0.0
    lip = float(np.sum(split._fn * (np.abs(split._fa) + np.abs(split._fb))))
    near = np.flatnonzero(grid_vals >= coarse - 2.0 * lip * step)

    # group near-maximal starts into circular clusters
    clusters: list[tuple[int, int]] = []
    start = prev = int(near[0])
    for idx in near[1:]:
        if idx == prev + 1:
            prev = int(idx)
        else:
            clusters.append((start, prev))
            start = prev = int(idx)
    clusters.append((start, prev))
    if len(clusters) > 1 and clusters[0][0] == 0 and clusters[-1][1] == m - 1:
        s0, _ = clusters.pop()
        _, e1 = clusters[0]
        clusters[0] = (s0 - m, e1)

    alpha = coarse
    for s_idx, e_idx in clusters[:24]:
        alpha = max(alpha, _refine_max(wm.abs_min, s_idx * step - step, e_idx * step + step))
    return float(alpha)


# ---------------------------------------------------------------------------
# inequality records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InequalityRecord:
    """One verified inequality, oriented as lhs >= rhs - slack."""

    name: str
    description: str
    lhs: float
    rhs: float
    slack: float

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    @property
    def passed(self) -> bool:
        return self.margin >= -self.slack

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "slack": self.slack,
            "pass": self.passed,
        }


def verify_fprime_bound(split: HarmonicSplit, quad_n: int = 8192) -> InequalityRecord:
    """Total variation bound: integral of |f'| over a period never exceeds
    2*pi (convexity plus the antisymmetry of f under half-turns)."""
    t = np.arange(quad_n) * (TWO_PI / quad_n)
    total = float(np.sum(np.abs(split.f_prime(t))) * TWO_PI / quad_n)
    return InequalityRecord(
        name="fprime_total_variation",
        description="integral |f'| dt <= 2*pi",
        lhs=TWO_PI,
        rhs=total,
        slack=1e-6,
    )


def verify_sine_orthogonality(
    split: HarmonicSplit,
    deltas: Optional[Sequence[float]] = None,
    quad_n: Optional[int] = None,
) -> float:
    """Max over phases of |integral f(t) sin(t + delta) dt|.

    Exact (up to roundoff) for the trigonometric f under the periodic
    trapezoid rule once the grid exceeds twice the top harmonic.
    """
    if deltas is None:
        deltas = np.arange(14) * (PI / 7.0)
    n = quad_n if quad_n is not None else 1 << max(6, int(np.ceil(np.log2(2 * split.f_max_n + 8))))
    t = np.arange(n) * (TWO_PI / n)
    fv = split.f(t)
    residuals = [abs(float(np.sum(fv * np.sin(t + d)) * TWO_PI / n)) for d in np.atleast_1d(deltas)]
    return max(residuals)


@dataclass(frozen=True)
class SignSetReport:
    """Layout and inequality checks for a curve with a zero-free gap > pi/2."""

    records: tuple[InequalityRecord, ...]
    gap: float
    t0: float
    rotation: float
    alpha: float
    omega_plus_measure: float
    omega_minus_measure: float


_GAUSS_NODES = np.polynomial.legendre.leggauss(64)


def _gauss(fun: Callable, a: float, b: float) -> float:
    x, wgt = _GAUSS_NODES
    mid, rad = 0.5 * (a + b), 0.5 * (b - a)
    return float(rad * np.sum(wgt * fun(mid + rad * x)))


def verify_sign_set_inequalities(split: HarmonicSplit, slack: float = 1e-5) -> SignSetReport:
    """Check the sign-set inequalities on a curve whose critical angles leave
    a gap larger than pi/2.

    The frame is rotated so consecutive sign-changing zeros t0 in (0, pi/2)
    and pi bound the zero-free stretch with f > 0 between them.  With alpha
    the largest level such that f > alpha on some closed pi/2 sub-window,
    the checks are: both signed masses of f on [0, t0) reach alpha, the
    support of f on [0, t0) is shorter than pi/2, and the total variation of
    f dominates 4*alpha*(1 + 8/pi).

    Raises
    ------
    NotApplicable
        No qualifying gap exists (for instance when the pi/2 density
        condition holds), or a qualifying gap is bounded by a tangential
        zero.
    """
    cas = critical_angles(split)
    if cas.f_identically_zero:
        raise NotApplicable("f vanishes identically; there is no sign structure")
    a = np.sort(cas.angles)
    gaps = np.concatenate([np.diff(a), [TWO_PI - a[-1] + a[0]]])
    j = int(np.argmax(gaps))
    gap = float(gaps[j])
    if gap <= HALF_PI + _GAP_GRACE:
        raise NotApplicable("every pi/2 window contains a critical angle")

    z_lo = float(a[j])
    z_hi = z_lo + gap
    flag_lo = bool(cas.sign_changes[j])
    flag_hi = bool(cas.sign_changes[(j + 1) % a.size])
    if not (flag_lo and flag_hi):
        raise NotApplicable("the widest gap is bounded by a tangential zero")
    if float(split.f(0.5 * (z_lo + z_hi))) < 0.0:
        z_lo += PI
        z_hi += PI

    rotation = z_hi - PI
    t0 = PI - gap

    def F(u):
        return split.f(u + rotation)

    # largest alpha with f > alpha on a closed pi/2 window inside [t0, pi]
    wm = _WindowMin(split)

    def vfun(s: float) -> float:
        return wm.signed_min(s + rotation)

    starts = np.linspace(t0, PI - HALF_PI, 257)
    vals = [vfun(s) for s in starts]
    k = int(np.argmax(vals))
    lo = starts[max(k - 1, 0)]
    hi = starts[min(k + 1, len(starts) - 1)]
    alpha = max(float(vals[k]), _refine_max(vfun, lo, hi))

    # partition [0, t0) at interior zeros and integrate f by sign
    interior = np.sort(np.mod(a - rotation, TWO_PI))
    interior = interior[(interior > 1e-12) & (interior < t0 - 1e-12)]
    edges = np.concatenate([[0.0], interior, [t0]])
    plus_mass = minus_mass = plus_len = minus_len = 0.0
    for left, right in zip(edges[:-1], edges[1:]):
        if right - left < 1e-12:
            continue
        val = _gauss(F, left, right)
        sign = float(F(0.5 * (left + right)))
        if sign >= 0.0:
            plus_mass += val
            plus_len += right - left
        else:
            minus_mass += val
            minus_len += right - left

    t = np.arange(8192) * (TWO_PI / 8192)
    tv = float(np.sum(np.abs(split.f_prime(t))) * TWO_PI / 8192)

    records = (
        InequalityRecord(
            name="omega_plus_mass",
            description="integral of f over {f>0} in [0,t0) >= alpha",
            lhs=plus_mass,
            rhs=alpha,
            slack=slack,
        ),
        InequalityRecord(
            name="omega_minus_mass",
            description="-integral of f over {f<0} in [0,t0) >= alpha",
            lhs=-minus_mass,
            rhs=alpha,
            slack=slack,
        ),
        InequalityRecord(
            name="omega_support",
            description="|{f>0}| + |{f<0}| on [0,t0) < pi/2",
            lhs=HALF_PI,
            rhs=plus_len + minus_len,
            slack=0.0,
        ),
        InequalityRecord(
            name="fprime_chain",
            description="integral |f'| >= 4*alpha*(1 + 8/pi)",
            lhs=tv,
            rhs=4.0 * alpha * (1.0 + 8.0 / PI),
            slack=slack,
        ),
        InequalityRecord(
            name="alpha_window_below_universal",
            description="window alpha < pi/(2*(1+8/pi))",
            lhs=alpha_window_bound(),
            rhs=alpha,
            slack=1e-8,
        ),
    )
    return SignSetReport(
        records=records,
        gap=gap,
        t0=t0,
        rotation=float(np.mod(rotation, TWO_PI)),
        alpha=alpha,
        omega_plus_measure=plus_len,
        omega_minus_measure=minus_len,
    )


# ---------------------------------------------------------------------------
# projections of the R-weighted curve
# ---------------------------------------------------------------------------


def _weighted_coords(geom: CurveGeometry, R: np.ndarray):
    x = R * np.cos(geom.t_of_s)
    y = R * np.sin(geom.t_of_s)
    return x, y


def projection_I(geom: CurveGeometry, R: np.ndarray, beta: float) -> float:
    """Rayleigh quotient of the projection h = x sin(beta) - y cos(beta),
    where (x, y) = R (cos phi, sin phi) is the ground-state-weighted curve.

    h vanishes at two points whose arc distance is pi - 2 f(beta), which is
    why I(beta) >= (1 + 2|f(beta)|/pi)^-2.  h is differentiated spectrally.
    """
    if R.shape != geom.t_of_s.shape:
        raise ValueError("R must be sampled on the geometry grid")
    x, y = _weighted_coords(geom, R)
    h = x * np.sin(beta) - y * np.cos(beta)
    n = h.size
    norm = np.sqrt(float(np.sum(h * h)) * TWO_PI / n)
    if norm < 1e-12:
        raise ZeroProjection(f"projection onto beta={beta:g} has zero norm")
    ik = 1j * np.arange(n // 2 + 1)
    if n % 2 == 0:
        ik[-1] = 0.0
    hp = np.fft.irfft(ik * np.fft.rfft(h), n=n)
    return float(np.sum(hp * hp) / np.sum(h * h))


def projection_sweep(geom: CurveGeometry, R: np.ndarray, betas: np.ndarray) -> np.ndarray:
    """Vectorized I(beta) over many directions via Parseval; identical (to
    roundoff) to calling projection_I per angle."""
    x, y = _weighted_coords(geom, R)
    n = x.size
    xh, yh = np.fft.rfft(x), np.fft.rfft(y)
    w = np.full(n // 2 + 1, 2.0)
    w[0] = 1.0
    if n % 2 == 0:
        w[-1] = 1.0
    k2 = np.arange(n // 2 + 1, dtype=float) ** 2
    if n % 2 == 0:
        k2[-1] = 0.0
    axx = float(np.sum(w * np.abs(xh) ** 2))
    ayy = float(np.sum(w * np.abs(yh) ** 2))
    axy = float(np.sum(w * (xh * np.conj(yh)).real))
    bxx = float(np.sum(w * k2 * np.abs(xh) ** 2))
    byy = float(np.sum(w * k2 * np.abs(yh) ** 2))
    bxy = float(np.sum(w * k2 * (xh * np.conj(yh)).real))
    sb, cb = np.sin(betas), np.cos(betas)
    num = bxx * sb * sb - 2.0 * bxy * sb * cb + byy * cb * cb
    den = axx * sb * sb - 2.0 * axy * sb * cb + ayy * cb * cb
    return num / den


# ---------------------------------------------------------------------------
# full report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    """Every verified inequality for one curve, with margins."""

    records: tuple[InequalityRecord, ...]
    alpha_star: float
    lambda_lower_bound: float
    lambda_computed: float
    theorem2_applicable: bool
    max_gap: float
    n_sign_changes: int
    f_identically_zero: bool
    sign_set_applicable: bool
    spectral: SpectralResult

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failed_records(self) -> tuple[InequalityRecord, ...]:
        return tuple(r for r in self.records if not r.passed)

    def to_json_dict(self) -> dict:
        return {
            "records": [r.to_json_dict() for r in self.records],
            "alpha_star": self.alpha_star,
            "lambda_lower_bound": self.lambda_lower_bound,
            "lambda_computed": self.lambda_computed,
            "theorem2_applicable": self.theorem2_applicable,
            "max_gap": self.max_gap,
            "n_sign_changes": self.n_sign_changes,
            "f_identically_zero": self.f_identically_zero,
            "sign_set_applicable": self.sign_set_applicable,
            "pass": self.passed,
            "spectral": self.spectral.to_json_dict(),
        }


def full_report(
    spec: CurveSpec,
    tol: float = 1e-5,
    lambda_tol: float = 1e-8,
    beta_grid: int = 360,
    _factor: int = 1,
) -> BoundReport:
    """Run every verification on one curve.

    ``tol`` is the numerical slack applied to the lambda lower bounds; grid
    resolutions are doubled and the report recomputed once if any inequality
    fails at the first attempt.
    """
    split = split_fg(spec)
    sp = converge_lambda(spec, lambda_tol, Scheme.FOURIER_COLLOCATION)
    lam = sp.best

    cas = critical_angles(split, grid=None if _factor == 1 else 2 * max(2048, 128 * split.f_max_n))
    gap = max_circular_gap(cas)
    th2 = theorem2_applicable(cas)

    alpha_star = lemma3_alpha(split, resolution=4096 * _factor)
    lower = (1.0 + 2.0 * alpha_star / PI) ** (-2.0)

    records: list[InequalityRecord] = []
    if not cas.f_identically_zero:
        records.append(
            InequalityRecord(
                name="six_sign_changes",
                description="f has >= 6 sign-changing zeros",
                lhs=float(cas.n_sign_changes),
                rhs=6.0,
                slack=0.0,
            )
        )
    records.append(verify_fprime_bound(split, quad_n=8192 * _factor))
    records.append(
        InequalityRecord(
            name="sine_orthogonality",
            description="max_delta |integral f sin(t+delta)| <= 1e-10",
            lhs=1e-10,
            rhs=verify_sine_orthogonality(split),
            slack=0.0,
        )
    )
    records.append(
        InequalityRecord(
            name="lambda_above_window_bound",
            description="lambda >= (1 + 2*alpha*/pi)^-2",
            lhs=lam,
            rhs=lower,
            slack=tol,
        )
    )
    records.append(
        InequalityRecord(
            name="lambda_above_universal_floor",
            description="lambda >= (1 + 1/(1+8/pi))^-2",
            lhs=lam,
            rhs=theorem1_constant(),
            slack=tol,
        )
    )
    if th2:
        records.append(
            InequalityRecord(
                name="lambda_above_one",
                description="pi/2-dense critical angles force lambda >= 1",
                lhs=lam,
                rhs=1.0,
                slack=tol,
            )
        )
    records.append(
        InequalityRecord(
            name="alpha_star_below_universal",
            description="alpha* < pi/(2*(1+8/pi))",
            lhs=alpha_window_bound(),
            rhs=alpha_star,
            slack=1e-8,
        )
    )

    geom = embed(spec, sp.N)
    betas = np.arange(beta_grid * _factor) * (TWO_PI / (beta_grid * _factor))
    ivals = projection_sweep(geom, sp.R, betas)
    bound = (1.0 + 2.0 * np.abs(split.f(betas)) / PI) ** (-2.0)
    records.append(
        InequalityRecord(
            name="projection_bound",
            description="I(beta) >= (1 + 2|f(beta)|/pi)^-2 on the beta grid",
            lhs=float(np.min(ivals - bound)),
            rhs=0.0,
            slack=tol,
        )
    )

    sign_set_applicable = False
    try:
        ss = verify_sign_set_inequalities(split, slack=tol)
        records.extend(ss.records)
        sign_set_applicable = True
    except NotApplicable:
        pass

    report = BoundReport(
        records=tuple(records),
        alpha_star=alpha_star,
        lambda_lower_bound=lower,
        lambda_computed=lam,
        theorem2_applicable=th2,
        max_gap=gap,
        n_sign_changes=cas.n_sign_changes if not cas.f_identically_zero else 0,
        f_identically_zero=cas.f_identically_zero,
        sign_set_applicable=sign_set_applicable,
        spectral=sp,
    )
    if not report.passed and _factor == 1:
        return full_report(spec, tol=tol, lambda_tol=lambda_tol, beta_grid=beta_grid, _factor=2)
    return report
