"""Convex closed plane curves of length 2*pi, represented by Fourier data.

A smooth strictly convex closed curve is encoded through the inverse of its
tangent-angle function.  Writing ``t`` for the tangent angle and ``s`` for arc
length, the inverse satisfies

    phi^-1(t) = t + sum_{n>=2} a_n sin(n t) + b_n cos(n t),

so the curve is fully determined by the coefficients ``{(n, a_n, b_n)}``.
Indices 0 and 1 are absent: the constant is fixed to zero by shifting the arc
length origin, and the closure of the curve forbids first harmonics.  Strict
convexity means ``(phi^-1)'(t) = 1 + sum n (a_n cos nt - b_n sin nt) > 0``.

The deviation ``phi^-1(t) - t`` splits into an even-index part ``g`` and an
odd-index part ``f``; ``f`` measures how far the curve is from being
point-symmetric and satisfies ``f(t + pi) = -f(t)``.

Angles and arc lengths are handled as lifted reals: the maps below commute
with adding 2*pi, and callers reduce with :func:`wrap_angle` when needed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .errors import NoConvergence, RejectBadIndex, RejectDuplicateIndex, RejectNonConvex

TWO_PI = 2.0 * np.pi

#: Default floor for the certified minimum of (phi^-1)'.
DEFAULT_CONVEXITY_FLOOR = 1e-6


class Harmonic(NamedTuple):
    n: int
    a: float
    b: float


HarmonicLike = Union[Harmonic, Sequence, dict]


def wrap_angle(t):
    """Reduce a lifted angle (or array of angles) into [0, 2*pi)."""
    return np.mod(t, TWO_PI)


def _as_harmonics(entries: Iterable[HarmonicLike]) -> tuple[Harmonic, ...]:
    out = []
    for e in entries:
        if isinstance(e, Harmonic):
            out.append(e)
        elif isinstance(e, dict):
            out.append(Harmonic(int(e["n"]), float(e.get("a", 0.0)), float(e.get("b", 0.0))))
        else:
            n, a, b = e
            out.append(Harmonic(int(n), float(a), float(b)))
    return tuple(out)


def _series(ns, sa, cb, t):
    """Evaluate sum sa_i*sin(n_i t) + cb_i*cos(n_i t) at t (scalar or array)."""
    t_arr = np.asarray(t, dtype=float)
    if ns.size == 0:
        out = np.zeros_like(t_arr)
        return out if t_arr.ndim else float(out)
    nt = np.multiply.outer(ns, t_arr)
    out = sa @ np.sin(nt) + cb @ np.cos(nt)
    return out if t_arr.ndim else float(out)


@dataclass(frozen=True)
class CurveSpec:
    """Validated Fourier data of phi^-1 minus its linear part.

    Instances are immutable and safe to share between workers.  Construct via
    :func:`build_curve`, which certifies convexity.
    """

    harmonics: tuple[Harmonic, ...]
    max_n: int
    #: certified lower bound on min (phi^-1)' over [0, 2*pi)
    min_slope: float

    @cached_property
    def _ns(self) -> np.ndarray:
        return np.array([h.n for h in self.harmonics], dtype=float)

    @cached_property
    def _as(self) -> np.ndarray:
        return np.array([h.a for h in self.harmonics], dtype=float)

    @cached_property
    def _bs(self) -> np.ndarray:
        return np.array([h.b for h in self.harmonics], dtype=float)

    def deviation(self, t):
        """g(t) + f(t) = phi^-1(t) - t."""
        return _series(self._ns, self._as, self._bs, t)

    def slope(self, t):
        """(phi^-1)'(t) = 1 + sum n (a_n cos nt - b_n sin nt)."""
        return 1.0 + _series(self._ns, -self._ns * self._bs, self._ns * self._as, t)

    def slope_prime(self, t):
        """d/dt of (phi^-1)'."""
        n2 = self._ns * self._ns
        return _series(self._ns, -n2 * self._as, -n2 * self._bs, t)

    def slope_second(self, t):
        n3 = self._ns ** 3
        return _series(self._ns, n3 * self._bs, -n3 * self._as, t)

    @property
    def coefficient_l1(self) -> float:
        """sum n (|a_n| + |b_n|); < 1 certifies convexity outright."""
        return float(np.sum(self._ns * (np.abs(self._as) + np.abs(self._bs))))


def _min_slope(spec_like: CurveSpec, max_n: int) -> float:
    """Certified minimum of (phi^-1)' by dense sampling plus one Newton polish.

    The grid places >= 64 samples per period of the highest harmonic, so the
    sampled minimum sits well inside the quadratic basin of the true one; a
    single Newton step on the derivative then lands at refinement-level error.
    """
    m = max(4096, 64 * max_n)
    t = np.linspace(0.0, TWO_PI, m, endpoint=False)
    vals = spec_like.slope(t)
    i = int(np.argmin(vals))
    best = float(vals[i])
    t0 = t[i]
    d1 = spec_like.slope_prime(t0)
    d2 = spec_like.slope_second(t0)
    if d2 > 0.0:
        step = d1 / d2
        if abs(step) <= TWO_PI / m:
            cand = float(spec_like.slope(t0 - step))
            best = min(best, cand)
    return best


def build_curve(
    harmonics: Iterable[HarmonicLike],
    convexity_floor: float = DEFAULT_CONVEXITY_FLOOR,
) -> CurveSpec:
    """Validate coefficients and return an immutable curve description.

    Parameters
    ----------
    harmonics : iterable of (n, a, b)
        Fourier coefficients with integer index n >= 2.  An empty list is the
        unit circle.
    convexity_floor : float
        Reject the curve unless the certified minimum of (phi^-1)' exceeds
        this value.

    Raises
    ------
    RejectBadIndex, RejectDuplicateIndex, RejectNonConvex
    """
    hs = _as_harmonics(harmonics)
    for h in hs:
        if h.n < 2:
            raise RejectBadIndex(f"harmonic index {h.n} < 2")
    ns = [h.n for h in hs]
    if len(set(ns)) != len(ns):
        raise RejectDuplicateIndex(f"duplicate harmonic indices in {sorted(ns)}")
    hs = tuple(sorted(hs, key=lambda h: h.n))
    max_n = hs[-1].n if hs else 0

    if not hs:
        return CurveSpec(harmonics=(), max_n=0, min_slope=1.0)
    spec = CurveSpec(harmonics=hs, max_n=max_n, min_slope=1.0)
    # Fast accept: 1 - sum n(|a|+|b|) is a certified lower bound on the slope.
    l1 = spec.coefficient_l1
    if 1.0 - l1 > convexity_floor:
        min_slope = 1.0 - l1
    else:
        min_slope = _min_slope(spec, max_n)
        if min_slope <= convexity_floor:
            raise RejectNonConvex(min_slope, convexity_floor)
    return CurveSpec(harmonics=hs, max_n=max_n, min_slope=float(min_slope))


@dataclass(frozen=True)
class HarmonicSplit:
    """Even-index (g) and odd-index (f) parts of the deviation phi^-1(t) - t."""

    g_harmonics: tuple[Harmonic, ...]
    f_harmonics: tuple[Harmonic, ...]

    @cached_property
    def _gn(self):
        return np.array([h.n for h in self.g_harmonics], dtype=float)

    @cached_property
    def _ga(self):
        return np.array([h.a for h in self.g_harmonics], dtype=float)

    @cached_property
    def _gb(self):
        return np.array([h.b for h in self.g_harmonics], dtype=float)

    @cached_property
    def _fn(self):
        return np.array([h.n for h in self.f_harmonics], dtype=float)

    @cached_property
    def _fa(self):
        return np.array([h.a for h in self.f_harmonics], dtype=float)

    @cached_property
    def _fb(self):
        return np.array([h.b for h in self.f_harmonics], dtype=float)

    @property
    def f_is_zero(self) -> bool:
        """True when every f coefficient vanishes (point-symmetric curve)."""
        return bool(np.all(self._fa == 0.0) and np.all(self._fb == 0.0))

    @property
    def f_max_n(self) -> int:
        nz = [h.n for h in self.f_harmonics if h.a != 0.0 or h.b != 0.0]
        return max(nz) if nz else 0

    @property
    def max_n(self) -> int:
        ns = [h.n for h in self.g_harmonics + self.f_harmonics]
        return max(ns) if ns else 0

    def f(self, t):
        return _series(self._fn, self._fa, self._fb, t)

    def g(self, t):
        return _series(self._gn, self._ga, self._gb, t)

    def f_prime(self, t):
        return _series(self._fn, -self._fn * self._fb, self._fn * self._fa, t)

    def g_prime(self, t):
        return _series(self._gn, -self._gn * self._gb, self._gn * self._ga, t)

    def reassemble(self) -> CurveSpec:
        """Merge g and f back into a validated CurveSpec (lossless)."""
        return build_curve(self.g_harmonics + self.f_harmonics)


def split_fg(spec: CurveSpec) -> HarmonicSplit:
    """Split a curve into its even-index part g and odd-index part f."""
    g = tuple(h for h in spec.harmonics if h.n % 2 == 0)
    f = tuple(h for h in spec.harmonics if h.n % 2 == 1)
    return HarmonicSplit(g_harmonics=g, f_harmonics=f)


def eval_phi_inverse(spec: CurveSpec, t):
    """Arc length s = phi^-1(t) = t + g(t) + f(t), on the lift.

    The deviation is 2*pi periodic, so the map commutes with t -> t + 2*pi
    and is continuous and strictly increasing on the whole real line.
    """
    t_arr = np.asarray(t, dtype=float)
    out = t_arr + spec.deviation(wrap_angle(t_arr))
    return out if t_arr.ndim else float(out)


_PHI_TOL = 1e-12
_PHI_MAX_ITER = 200


def eval_phi(spec: CurveSpec, s):
    """Tangent angle t = phi(s), inverse of :func:`eval_phi_inverse` on the lift.

    Bisection-bracketed Newton on the strictly increasing lift; terminates
    when |phi^-1(t) - s| < 1e-12.

    Raises
    ------
    NoConvergence
        After 200 iterations; only reachable if the spec violates its
        convexity certificate.
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    amp = float(np.sum(np.abs(spec._as) + np.abs(spec._bs)))
    lo = s_arr - amp - 1e-9
    hi = s_arr + amp + 1e-9
    t = s_arr.copy()
    f_val = t + spec.deviation(wrap_angle(t)) - s_arr
    for _ in range(_PHI_MAX_ITER):
        active = np.abs(f_val) >= _PHI_TOL
        if not active.any():
            break
        lo = np.where(active & (f_val < 0), t, lo)
        hi = np.where(active & (f_val > 0), t, hi)
        slope = spec.slope(wrap_angle(t))
        t_new = t - f_val / np.maximum(slope, 1e-12)
        outside = (t_new <= lo) | (t_new >= hi)
        t_new = np.where(outside, 0.5 * (lo + hi), t_new)
        t = np.where(active, t_new, t)
        f_val = t + spec.deviation(wrap_angle(t)) - s_arr
    else:
        raise NoConvergence(
            "phi(s) iteration cap exceeded; the spec likely violates its convexity floor"
        )
    return t if np.ndim(s) else float(t[0])


def curvature(spec: CurveSpec, s):
    """Curvature kappa(s) = 1 / (phi^-1)'(phi(s)) > 0."""
    t = eval_phi(spec, s)
    return 1.0 / spec.slope(wrap_angle(t))


@dataclass(frozen=True)
class CurveGeometry:
    """Uniform arc-length sampling of a curve and its planar embedding."""

    s_grid: np.ndarray
    t_of_s: np.ndarray
    kappa: np.ndarray
    xy: np.ndarray
    closure_residual: float

    @property
    def n(self) -> int:
        return self.s_grid.size


def embed(spec: CurveSpec, N: int) -> CurveGeometry:
    """Embed the curve in the plane on an N-point uniform arc-length grid.

    x and y come from cumulative trapezoid quadrature of (cos phi, sin phi);
    the full-period trapezoid sum of the tangent vector is reported as
    ``closure_residual`` (it vanishes spectrally fast in N because the
    integrand is smooth and periodic).
    """
    if N < 8:
        raise ValueError("N must be at least 8")
    s = np.arange(N) * (TWO_PI / N)
    t = eval_phi(spec, s)
    kap = 1.0 / spec.slope(wrap_angle(t))
    c, sn = np.cos(t), np.sin(t)
    h = TWO_PI / N
    # cumulative trapezoid with x(0) = y(0) = 0
    x = np.concatenate(([0.0], np.cumsum(0.5 * h * (c[:-1] + c[1:]))))
    y = np.concatenate(([0.0], np.cumsum(0.5 * h * (sn[:-1] + sn[1:]))))
    residual = float(np.hypot(h * c.sum(), h * sn.sum()))
    xy = np.column_stack([x, y])
    for arr in (s, t, kap, xy):
        arr.setflags(write=False)
    return CurveGeometry(s_grid=s, t_of_s=t, kappa=kap, xy=xy, closure_residual=residual)


# ---------------------------------------------------------------------------
# Curve file format: {"harmonics": [{"n": 3, "a": 0.1, "b": 0.0}, ...]}
# Writer emits ascending indices and 17 significant digits, which round-trips
# IEEE doubles bit-exactly.
# ---------------------------------------------------------------------------


def curve_to_json(spec: CurveSpec) -> str:
    items = ", ".join(
        '{"n": %d, "a": %s, "b": %s}' % (h.n, format(h.a, ".17g"), format(h.b, ".17g"))
        for h in spec.harmonics
    )
    return '{"harmonics": [%s]}' % items


def curve_from_json(text: str, convexity_floor: float = DEFAULT_CONVEXITY_FLOOR) -> CurveSpec:
    try:
        doc = json.loads(text)
        entries = doc["harmonics"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ValueError(f"not a curve file: {exc}") from exc
    if not isinstance(entries, list):
        raise ValueError("'harmonics' must be a list")
    return build_curve(entries, convexity_floor=convexity_floor)


def dump_curve(spec: CurveSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(curve_to_json(spec) + "\n")


def load_curve(path, convexity_floor: float = DEFAULT_CONVEXITY_FLOOR) -> CurveSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return curve_from_json(fh.read(), convexity_floor=convexity_floor)
