"""Closed-form and reduced solutions of the curvature flows.

Traveling waves of the KdV flow are Weierstrass elliptic functions,
``f(s) = -2 P(s + w3) + lambda/6``, evaluated here through Jacobi elliptic
functions on the bounded real branch. A direct integration of the third-order
traveling-wave equation serves as an independent oracle.

For a traveling wave the matrices ``L = P + lambda K`` and K form a Lax pair,
``L' = [L, K]``, so ``mu = F L F^-1`` is constant along the curve.

Self-similar solutions ``kappa(s, t) = kappa_g(s / sqrt(r)) / r`` with
``r = (a t + b)^(2/3)`` reduce the flow to an ODE whose solutions are obtained
from the second Painleve equation ``v'' = 2 v^3 - x v - c`` by the map
``kappa = v' - v^2``.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np
from loguru import logger
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.special import ellipj, ellipk

from . import spectral
from .exceptions import (
    DomainError,
    InstabilityError,
    InvalidParametersError,
    NearPoleError,
    PartialSolution,
    PoleEncounteredError,
)
from .geometry import frenet_matrix, lie_algebra_element
from .hierarchy import MotionSpec

DEFAULT_POLE_TOLERANCE = 1e-8
DEFAULT_PAINLEVE_TOLERANCE = 1e-10
DEFAULT_POLE_MARGIN = 0.25
BLOWUP_LEVEL = 1e8

Profile = np.ndarray | Callable[[np.ndarray], np.ndarray]


# Weierstrass functions


@dataclass(frozen=True)
class WeierstrassParams:
    """Invariants, roots and half-periods of a Weierstrass function with three real roots.

    Attributes:
        g2: First invariant.
        g3: Second invariant.
        e1: Largest root of ``4x^3 - g2 x - g3``.
        e2: Middle root.
        e3: Smallest root.
        omega1: Real half-period.
        omega3: Magnitude of the imaginary half-period.

    Examples:
        >>> p = WeierstrassParams.from_invariants(4.0, 0.0)
        >>> [round(e, 12) for e in (p.e1, p.e2, p.e3)]
        [1.0, 0.0, -1.0]

    """

    g2: float
    g3: float
    e1: float
    e2: float
    e3: float
    omega1: float
    omega3: float

    @classmethod
    def from_invariants(cls, g2: float, g3: float) -> WeierstrassParams:
        """Compute roots and half-periods.

        Raises:
            InvalidParametersError: Unless ``27 g3^2 - g2^3 < 0`` (three distinct real roots).

        """
        g2, g3 = float(g2), float(g3)
        if 27.0 * g3**2 - g2**3 >= 0.0:
            raise InvalidParametersError(g2, g3, "27*g3^2 - g2^3 must be negative")
        roots = np.sort(np.real(np.roots([4.0, 0.0, -g2, -g3])))[::-1]
        scale = max(1.0, abs(g2), abs(g3))
        if np.max(np.abs(4.0 * roots**3 - g2 * roots - g3)) > 1e-10 * scale:
            raise InvalidParametersError(g2, g3, "roots of the cubic could not be resolved")
        e1, e2, e3 = (float(r) for r in roots)
        root = np.sqrt(e1 - e3)
        m = (e2 - e3) / (e1 - e3)
        return cls(
            g2=g2,
            g3=g3,
            e1=e1,
            e2=e2,
            e3=e3,
            omega1=float(ellipk(m) / root),
            omega3=float(ellipk(1.0 - m) / root),
        )

    @property
    def parameter(self) -> float:
        """Jacobi parameter ``m = (e2 - e3) / (e1 - e3)``."""
        return (self.e2 - self.e3) / (self.e1 - self.e3)

    @property
    def period(self) -> float:
        """Real period ``2 omega1``."""
        return 2.0 * self.omega1


def weierstrass_p(
    x: float | np.ndarray,
    params: WeierstrassParams,
    *,
    shifted: bool = False,
    pole_tolerance: float = DEFAULT_POLE_TOLERANCE,
) -> tuple[float | np.ndarray, float | np.ndarray]:
    """Evaluate ``(P(x), P'(x))`` on the real axis or on the line through w3.

    With ``z = sqrt(e1 - e3) x`` and ``m`` the Jacobi parameter,
    ``P(x) = e3 + (e1 - e3) / sn(z)^2`` and
    ``P(x + w3) = e3 + (e2 - e3) sn(z)^2``; the shifted branch is bounded and
    oscillates in ``[e3, e2]``.

    Args:
        x: Real argument(s).
        params: Invariants with three real roots.
        shifted: Evaluate ``P(x + w3)`` instead of ``P(x)``.
        pole_tolerance: Smallest admitted distance to a pole on the real axis.

    Returns:
        The value and the derivative.

    Raises:
        NearPoleError: If an unshifted argument is within ``pole_tolerance`` of ``2 k w1``.

    Examples:
        >>> p = WeierstrassParams.from_invariants(4.0, 0.0)
        >>> value, slope = weierstrass_p(p.omega1, p)
        >>> round(float(value), 10), round(float(slope), 10)
        (1.0, -0.0)

    """
    x_arr = np.asarray(x, dtype=float)
    spread = params.e1 - params.e3
    root = np.sqrt(spread)
    sn, cn, dn, _ = ellipj(root * x_arr, params.parameter)
    if shifted:
        value = params.e3 + (params.e2 - params.e3) * sn**2
        slope = 2.0 * (params.e2 - params.e3) * root * sn * cn * dn
    else:
        distance = np.abs(x_arr - params.period * np.round(x_arr / params.period))
        if np.any(distance < pole_tolerance):
            index = int(np.argmin(distance))
            raise NearPoleError(float(x_arr.flat[index]), float(distance.flat[index]))
        value = params.e3 + spread / sn**2
        slope = -2.0 * spread * root * cn * dn / sn**3
    if value.ndim == 0:
        return float(value), float(slope)
    return value, slope


def invariants_from_initial_data(lam: float, f0: float, f0p: float, f0pp: float) -> tuple[float, float]:
    """Invariants ``(g2, g3)`` of the traveling wave through the given initial data.

    With ``h = -(f - lambda/6) / 2`` the wave equation integrates twice to
    ``h'^2 = 4h^3 - g2 h - g3``; hence ``g2 = 12 h^2 - 2 h''`` and
    ``g3 = 4 h^3 - g2 h - h'^2``.

    Examples:
        >>> invariants_from_initial_data(0.0, 2.0, 0.0, -8.0)
        (4.0, 0.0)

    """
    h = -0.5 * (f0 - lam / 6.0)
    hp = -0.5 * f0p
    hpp = -0.5 * f0pp
    g2 = 12.0 * h**2 - 2.0 * hpp
    g3 = 4.0 * h**3 - g2 * h - hp**2
    return float(g2), float(g3)


def weierstrass_jet(x: np.ndarray, params: WeierstrassParams) -> list[np.ndarray]:
    """Jet ``[P, P', P'', P''']`` of ``P(x + w3)`` differentiated through the Jacobi functions.

    With ``u = sqrt(e1 - e3) x``, ``P = e3 + (e2 - e3) sn^2 u`` and the
    derivatives follow from ``sn' = cn dn``, ``cn' = -sn dn`` and
    ``dn' = -m sn cn``, without using the differential equation of P.

    Examples:
        >>> p = WeierstrassParams.from_invariants(4.0, 0.0)
        >>> value, slope, second, third = weierstrass_jet(np.array([0.4]), p)
        >>> bool(np.allclose(second, 6 * value**2 - 2.0)), bool(np.allclose(third, 12 * value * slope))
        (True, True)

    """
    x = np.asarray(x, dtype=float)
    m = params.parameter
    root = np.sqrt(params.e1 - params.e3)
    spread = params.e2 - params.e3
    sn, cn, dn, _ = ellipj(root * x, m)
    return [
        params.e3 + spread * sn**2,
        2.0 * spread * root * sn * cn * dn,
        2.0 * spread * root**2 * (cn**2 * dn**2 - sn**2 * dn**2 - m * sn**2 * cn**2),
        8.0 * spread * root**3 * sn * cn * dn * (m * sn**2 - m * cn**2 - dn**2),
    ]


def traveling_wave_jet(lam: float, params: WeierstrassParams, s: np.ndarray) -> list[np.ndarray]:
    """Exact jet ``[f, f', f'', f''']`` of ``f(s) = -2 P(s + w3) + lambda/6``."""
    p, dp, ddp, dddp = weierstrass_jet(np.asarray(s, dtype=float), params)
    return [-2.0 * p + lam / 6.0, -2.0 * dp, -2.0 * ddp, -2.0 * dddp]


def traveling_wave(lam: float, params: WeierstrassParams, s_grid: np.ndarray) -> np.ndarray:
    """Bounded periodic traveling-wave profile ``-2 P(s + w3) + lambda/6`` of period ``2 w1``."""
    return traveling_wave_jet(lam, params, s_grid)[0]


def traveling_wave_residual(lam: float, params: WeierstrassParams, n: int = 256) -> float:
    """Max of ``|f''' + 6 f f' - lambda f'|`` over n nodes of one period, from the exact jet."""
    f, f1, _, f3 = traveling_wave_jet(lam, params, spectral.grid(params.period, n))
    return float(np.max(np.abs(f3 + 6.0 * f * f1 - lam * f1)))


def traveling_wave_ode(
    lam: float,
    f0: float,
    f0p: float,
    f0pp: float,
    s_grid: np.ndarray,
    *,
    rtol: float = 1e-12,
    atol: float = 1e-12,
    blowup: float = BLOWUP_LEVEL,
) -> np.ndarray:
    """Integrate ``f''' = lambda f' - 6 f f'`` from ``s_grid[0]`` and sample it on the grid.

    Raises:
        InstabilityError: If ``|f|`` exceeds ``blowup`` before the end of the grid.

    """
    s_grid = np.asarray(s_grid, dtype=float)

    def rhs(_: float, y: np.ndarray) -> list[float]:
        return [y[1], y[2], lam * y[1] - 6.0 * y[0] * y[1]]

    def escape(_: float, y: np.ndarray) -> float:
        return blowup - abs(y[0])

    escape.terminal = True  # type: ignore[attr-defined]
    if s_grid.size == 1:
        return np.array([f0])
    result = solve_ivp(
        rhs,
        (s_grid[0], s_grid[-1]),
        [f0, f0p, f0pp],
        method="DOP853",
        t_eval=s_grid,
        rtol=rtol,
        atol=atol,
        events=escape,
    )
    if result.status != 0:
        stop = float(result.t[-1]) if result.t.size else float(s_grid[0])
        raise InstabilityError(stop, blowup, blowup)
    return result.y[0]


def stationary_profile(s: np.ndarray) -> list[np.ndarray]:
    """Jet ``[k, k', k'', k''']`` of the stationary curvature ``k = -2 s^-2``."""
    s = np.asarray(s, dtype=float)
    return [-2.0 / s**2, 4.0 / s**3, -12.0 / s**4, 48.0 / s**5]


def stationary_residual(s: np.ndarray) -> float:
    """Max of ``|k''' + 6 k k'|`` for ``k = -2 s^-2`` on the given nodes (zero up to rounding)."""
    k, k1, _, k3 = stationary_profile(s)
    return float(np.max(np.abs(k3 + 6.0 * k * k1)))


# Lax pair


@dataclass(frozen=True, eq=False)
class LaxPair:
    """Sampled Lax pair ``(L, K)`` with ``L = P + lambda K``.

    Attributes:
        lam: Spectral parameter (the wave speed).
        s: Sample grid.
        k: Frenet generators, shape ``(N, 4, 4)``.
        p: Motion matrices, shape ``(N, 4, 4)``.

    """

    lam: float
    s: np.ndarray
    k: np.ndarray
    p: np.ndarray

    @property
    def l(self) -> np.ndarray:  # noqa: E743
        """The matrices ``P + lambda K``."""
        return self.p + self.lam * self.k

    @property
    def h(self) -> float:
        """Grid step."""
        return float(self.s[1] - self.s[0])


def finite_difference_jet(values: np.ndarray, h: float, order: int) -> list[np.ndarray]:
    """Repeated second-order differences ``[v, v', ..., v^(order)]``."""
    jets = [np.asarray(values, dtype=float)]
    for _ in range(order):
        jets.append(np.gradient(jets[-1], h, edge_order=2))
    return jets


def build_lax(
    motion: MotionSpec,
    kappa: np.ndarray | Sequence[np.ndarray],
    lam: float,
    *,
    h: float | None = None,
    s: np.ndarray | None = None,
) -> LaxPair:
    """Assemble ``K[kappa]`` and ``P[kappa]`` on a grid.

    Args:
        motion: Motion supplying ``p1..p6``.
        kappa: Curvature samples or a precomputed jet ``[kappa, kappa', ...]``.
        lam: Spectral parameter.
        h: Grid step, required to differentiate plain samples.
        s: Grid nodes; ``k h`` by default.

    Returns:
        The sampled pair.

    """
    is_jet = not isinstance(kappa, np.ndarray) or np.ndim(kappa) == 2
    if is_jet:
        jets = [np.asarray(v, dtype=float) for v in kappa]
    else:
        if h is None:
            raise ValueError("a grid step is needed to differentiate curvature samples")  # noqa: TRY003
        jets = finite_difference_jet(kappa, h, max(motion.order, 0))
    n = jets[0].size
    if s is None:
        s = (h or 1.0) * np.arange(n)
    p1, p2, p3, p4, p5, p6 = motion.evaluate(jets)
    p = lie_algebra_element(np.stack([p1, p2, p3], axis=-1), np.stack([p4, p5, p6], axis=-1))
    return LaxPair(lam=float(lam), s=np.asarray(s, dtype=float), k=frenet_matrix(jets[0]), p=p)


def lax_residual(pair: LaxPair, h: float | None = None) -> float:
    """Max-norm of ``dL/ds - (L K - K L)`` at interior nodes, centred differences."""
    h = h or pair.h
    big_l = pair.l
    derivative = (big_l[2:] - big_l[:-2]) / (2.0 * h)
    inner_l, inner_k = big_l[1:-1], pair.k[1:-1]
    bracket = inner_l @ inner_k - inner_k @ big_l[1:-1]
    return float(np.max(np.abs(derivative - bracket)))


def mu_invariant(pair: LaxPair, frames: np.ndarray) -> float:
    """Spread ``max_s |mu(s) - mu(s0)|`` of ``mu = F L F^-1`` in the max-entry norm."""
    frames = np.asarray(frames, dtype=float)
    mu = frames @ pair.l @ np.linalg.inv(frames)
    return float(np.max(np.abs(mu - mu[0])))


def charpoly_spread(pair: LaxPair) -> np.ndarray:
    """Spread of each characteristic-polynomial coefficient of ``L(s)`` along the grid."""
    coefficients = np.array([np.real(np.poly(m)) for m in pair.l])
    return np.max(coefficients, axis=0) - np.min(coefficients, axis=0)


# Painleve II and similarity solutions


@dataclass(frozen=True, eq=False)
class Painleve2Solution:
    """Dense solution of ``v'' = 2 v^3 - x v - c`` sampled on a grid.

    Attributes:
        c: Parameter of the equation.
        x: Grid.
        v: Solution values.
        vp: First derivative values.

    """

    c: float
    x: np.ndarray
    v: np.ndarray
    vp: np.ndarray
    dense: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)

    def second_derivative(self) -> np.ndarray:
        """``v''`` from the equation itself."""
        return 2.0 * self.v**3 - self.x * self.v - self.c


def _painleve_rhs(c: float) -> Callable[[float, np.ndarray], list[float]]:
    def rhs(x: float, y: np.ndarray) -> list[float]:
        return [y[1], 2.0 * y[0] ** 3 - x * y[0] - c]

    return rhs


def _integrate_branch(c: float, x0: float, y0: list[float], x_end: float, tolerance: float) -> tuple:
    def escape(_: float, y: np.ndarray) -> float:
        return BLOWUP_LEVEL - abs(y[0])

    escape.terminal = True  # type: ignore[attr-defined]
    result = solve_ivp(
        _painleve_rhs(c),
        (x0, x_end),
        y0,
        method="DOP853",
        rtol=tolerance,
        atol=tolerance * 1e-2,
        dense_output=True,
        events=escape,
    )
    return result.sol, result.status, float(result.t[-1])


def painleve2_solve(
    c: float,
    v0: float,
    v0p: float,
    x_grid: np.ndarray,
    *,
    x0: float = 0.0,
    tolerance: float = DEFAULT_PAINLEVE_TOLERANCE,
) -> Painleve2Solution:
    """Integrate Painleve II from data at ``x0`` in both directions and sample it on ``x_grid``.

    Args:
        c: Parameter of the equation.
        v0: ``v(x0)``.
        v0p: ``v'(x0)``.
        x_grid: Increasing sample points.
        x0: Abscissa of the initial data.
        tolerance: Relative tolerance of the adaptive DOP853 integrator.

    Returns:
        The sampled solution with dense output attached.

    Raises:
        PoleEncounteredError: If ``|v|`` escapes to the blow-up level or the step
            size collapses; the error carries the samples computed so far.

    """
    x_grid = np.asarray(x_grid, dtype=float)
    lower, upper = float(x_grid[0]), float(x_grid[-1])
    branches: list[tuple[Callable, float, float]] = []
    for end in (lower, upper):
        if end == x0:
            continue
        dense, status, reached = _integrate_branch(c, x0, [v0, v0p], end, tolerance)
        branches.append((dense, min(x0, reached), max(x0, reached)))
        if status != 0:
            valid = np.zeros(x_grid.size, dtype=bool)
            for _, a, b in branches:
                valid |= (x_grid >= a) & (x_grid <= b)
            partial = _sample(branches, x_grid[valid], x0, v0, v0p)
            logger.warning(f"Painleve II solution (c={c}, v0={v0}, v0p={v0p}) blows up near x = {reached:.6g}")
            raise PoleEncounteredError(reached, PartialSolution(x=x_grid[valid], values=partial.T))

    values = _sample(branches, x_grid, x0, v0, v0p)

    def dense_output(x: np.ndarray) -> np.ndarray:
        return _sample(branches, np.atleast_1d(np.asarray(x, dtype=float)), x0, v0, v0p)

    return Painleve2Solution(c=float(c), x=x_grid, v=values[0], vp=values[1], dense=dense_output)


def painleve2_pole_free(
    c: float,
    v0: float,
    v0p: float,
    x_grid: np.ndarray,
    *,
    x0: float = 0.0,
    tolerance: float = DEFAULT_PAINLEVE_TOLERANCE,
    margin: float = DEFAULT_POLE_MARGIN,
) -> Painleve2Solution:
    """Solve Painleve II on the part of ``x_grid`` that keeps ``margin`` away from movable poles.

    Every pole met on either side of ``x0`` cuts the grid at ``margin`` from the
    pole, on the side of ``x0``, and the equation is solved again.

    Raises:
        PoleEncounteredError: If fewer than two nodes survive a cut.

    Examples:
        >>> solution = painleve2_pole_free(0.0, 0.1, 0.0, np.linspace(-5.0, 2.0, 701))
        >>> bool(-3.6 < solution.x[0] < -3.3), float(solution.x[-1])
        (True, 2.0)

    """
    x_grid = np.asarray(x_grid, dtype=float)
    while True:
        try:
            return painleve2_solve(c, v0, v0p, x_grid, x0=x0, tolerance=tolerance)
        except PoleEncounteredError as e:
            keep = x_grid > e.x_pole + margin if e.x_pole < x0 else x_grid < e.x_pole - margin
            if np.count_nonzero(keep) < 2 or np.all(keep):
                raise
            x_grid = x_grid[keep]
            logger.info(f"Pole near x = {e.x_pole:.6g}; window cut to [{x_grid[0]:.6g}, {x_grid[-1]:.6g}]")


def _sample(branches: list, x: np.ndarray, x0: float, v0: float, v0p: float) -> np.ndarray:
    out = np.empty((2, x.size))
    out[0], out[1] = v0, v0p
    for dense, a, b in branches:
        inside = (x >= a) & (x <= b) & (x != x0)
        if np.any(inside):
            out[:, inside] = dense(x[inside])
    return out


def painleve2_residual(solution: Painleve2Solution, delta: float = 1e-3) -> float:
    """A-posteriori residual of the equation from the dense output.

    ``v''`` is the fourth-order central difference of the dense ``v'`` with
    spacing ``delta``; nodes closer than ``2 delta`` to the window ends are skipped.
    """
    if solution.dense is None:
        raise ValueError("the solution carries no dense output")  # noqa: TRY003
    x = solution.x
    inner = x[(x - 2 * delta >= x[0]) & (x + 2 * delta <= x[-1])]

    def vp(points: np.ndarray) -> np.ndarray:
        return solution.dense(points)[1]

    second = (-vp(inner + 2 * delta) + 8 * vp(inner + delta) - 8 * vp(inner - delta) + vp(inner - 2 * delta)) / (
        12 * delta
    )
    v = solution.dense(inner)[0]
    return float(np.max(np.abs(second - (2 * v**3 - inner * v - solution.c))))


def miura_scale(a: float) -> float:
    """Return ``lambda = cbrt(-a/3)``, the scaling that maps the a-equation to the a = -3 form."""
    if a == 0:
        raise ValueError("the similarity rate must be nonzero")  # noqa: TRY003
    return float(np.cbrt(-a / 3.0))


def miura_curvature(solution: Painleve2Solution, a: float = 1.0) -> tuple[np.ndarray, list[np.ndarray]]:
    """Curvature ``kappa(x) = lam^2 (v' - v^2)(lam x)`` and its exact first three derivatives.

    The Painleve variable is ``y = lam x`` with ``lam = cbrt(-a/3)``. Derivatives
    of ``v' - v^2`` are eliminated with the equation, so only v and v' enter.

    Returns:
        The x nodes (increasing) and ``[kappa, kappa', kappa'', kappa''']``.

    """
    lam = miura_scale(a)
    y, v, w = solution.x, solution.v, solution.vp
    c = solution.c
    v2 = 2.0 * v**3 - y * v - c
    v3 = 6.0 * v**2 * w - v - y * w
    v4 = 12.0 * v * w**2 + 6.0 * v**2 * v2 - 2.0 * w - y * v2
    jet = [
        w - v**2,
        v2 - 2.0 * v * w,
        v3 - 2.0 * w**2 - 2.0 * v * v2,
        v4 - 6.0 * w * v2 - 2.0 * v * v3,
    ]
    x = y / lam
    order = np.argsort(x)
    return x[order], [(lam ** (k + 2) * k_y)[order] for k, k_y in enumerate(jet)]


def miura_check(solution: Painleve2Solution, a: float = 1.0) -> float:
    """Max residual of ``k''' + 6 k k' - (a/3)(x k' + 2 k)`` for ``k`` from the Miura map.

    All derivatives of k come from v and v' through the equation, so the
    residual is exact up to rounding at every node.

    Examples:
        >>> x = np.linspace(-1.0, 1.0, 201)
        >>> miura_check(painleve2_solve(0.0, 0.0, 0.0, x))
        0.0

    """
    x, (k0, k1, _, k3) = miura_curvature(solution, a)
    residual = k3 + 6.0 * k0 * k1 - (a / 3.0) * (x * k1 + 2.0 * k0)
    return float(np.max(np.abs(residual)))


def similarity_scale(a: float, b: float, t: float) -> float:
    """Return ``r(t) = (a t + b)^(2/3)``.

    Raises:
        DomainError: If ``a t + b <= 0``.

    """
    base = a * t + b
    if base <= 0:
        raise DomainError(a, b, t)
    return float(base ** (2.0 / 3.0))


def rescale_curvature(
    x: np.ndarray,
    kappa: Profile,
    r: float,
    s: np.ndarray | None = None,
) -> np.ndarray:
    """Apply the scaling ``kappa -> kappa(s / sqrt(r)) / r``.

    Args:
        x: Nodes of the profile.
        kappa: Profile samples on ``x`` (interpolated with a not-a-knot cubic
            spline, NaN outside the nodes) or a vectorised function.
        r: Positive scale.
        s: Output nodes, ``x`` by default.

    Returns:
        The rescaled profile on ``s``.

    """
    if r <= 0:
        raise ValueError(f"the scale must be positive, got {r}")  # noqa: TRY003
    x = np.asarray(x, dtype=float)
    s = x if s is None else np.asarray(s, dtype=float)
    arguments = s / np.sqrt(r)
    if callable(kappa):
        return np.asarray(kappa(arguments), dtype=float) / r
    spline = CubicSpline(x, np.asarray(kappa, dtype=float), extrapolate=False)
    return spline(arguments) / r


def similarity_profile(x: np.ndarray, kappa_profile: Profile, a: float, b: float, t: float) -> np.ndarray:
    """Curvature of the self-similar family at time t on the nodes x.

    Raises:
        DomainError: If ``a t + b <= 0``.

    """
    return rescale_curvature(x, kappa_profile, similarity_scale(a, b, t))
