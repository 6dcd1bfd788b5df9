"""Time evolution of curvature and of null curves under hierarchy motions.

Curvature is evolved on a uniform periodic grid. Spatial derivatives are
spectral and the nonlinear part of the flow is dealiased with the two-thirds
rule. The linear part, read off the degree-one monomials of the right-hand
side, is integrated exactly by an integrating factor and the remainder by
classical RK4; plain RK4 on the full right-hand side is available for
comparison.

Curves are evolved through their frames, ``F <- F exp(dt P[kappa])``, and the
curvature is recomputed from the evolved points after every step. Periodic
curvature gives a curve that repeats under its monodromy ``M = F(L) F(0)^-1``,
which supplies the ghost points needed by the finite-difference stencil at the
ends of the period.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from loguru import logger
from scipy.linalg import expm

from . import spectral
from .diffpoly import DiffPoly
from .exceptions import FrameDriftError, InstabilityError
from .geometry import (
    DEFAULT_FRAME_TOLERANCE,
    DEFAULT_PSEUDO_ARC_TOLERANCE,
    STENCIL_HALF_WIDTH,
    CurveSample,
    central_jets,
    curvature_from_curve,
    frenet_matrix,
    integrate_frenet,
    lie_algebra_element,
    metric_residual,
    minkowski_inner,
    rkmk4_step,
)
from .hierarchy import HierarchyTable, MotionSpec, generate, linear_symbol, nonlinear_part

DEFAULT_INSTABILITY_FACTOR = 1e3
GHOST_NODES = STENCIL_HALF_WIDTH

StepCallback = Callable[[int, int], None]


@dataclass(frozen=True, eq=False)
class CurvatureGrid:
    """Periodic curvature samples ``kappa(k L / N)``.

    Attributes:
        length: Period L.
        values: N samples, N a power of two and at least 16.

    """

    length: float
    values: np.ndarray

    def __post_init__(self) -> None:
        """Validate the sample count and finiteness."""
        n = np.size(self.values)
        if n < 16 or n & (n - 1):
            raise ValueError(f"the sample count must be a power of two >= 16, got {n}")  # noqa: TRY003
        if not np.all(np.isfinite(self.values)):
            raise ValueError("curvature samples must be finite")  # noqa: TRY003
        if self.length <= 0:
            raise ValueError(f"the period must be positive, got {self.length}")  # noqa: TRY003

    @classmethod
    def from_function(cls, function: Callable[[np.ndarray], np.ndarray], length: float, n: int) -> CurvatureGrid:
        """Sample a function on the periodic grid."""
        return cls(length=length, values=np.asarray(function(spectral.grid(length, n)), dtype=float))

    @property
    def n(self) -> int:
        """Number of samples."""
        return int(np.size(self.values))

    @property
    def h(self) -> float:
        """Grid step L/N."""
        return self.length / self.n

    @property
    def s(self) -> np.ndarray:
        """Grid nodes."""
        return spectral.grid(self.length, self.n)

    def jet(self, order: int) -> list[np.ndarray]:
        """Spectral jet ``[kappa, kappa', ..., kappa^(order)]``."""
        return spectral.jet(self.values, self.length, order)


@dataclass(frozen=True, eq=False)
class FlowState:
    """A snapshot of an evolution.

    Attributes:
        t: Time.
        grid: Curvature at time t.
        frames: Curve frames, shape ``(N, 4, 4)``, when the curve is evolved.
        conserved: Values of the conserved functionals P_0, P_1, P_2.

    """

    t: float
    grid: CurvatureGrid
    frames: np.ndarray | None = None
    conserved: tuple[float, ...] = ()


def _rhs(motion: MotionSpec | DiffPoly) -> DiffPoly:
    return motion.rhs if isinstance(motion, MotionSpec) else motion


def conserved_functionals(grid: CurvatureGrid, table: HierarchyTable | None = None, m: int = 2) -> np.ndarray:
    """Return ``P_k = (L/N) sum p_k[kappa]`` for ``k = 0..m``.

    Args:
        grid: Curvature samples.
        table: Hierarchy table supplying the densities (generated when omitted).
        m: Index of the last functional, at most the table depth.

    Returns:
        Array of m+1 values.

    Examples:
        >>> grid = CurvatureGrid(2 * np.pi, np.full(16, 0.5))
        >>> [round(float(v), 12) for v in conserved_functionals(grid)]
        [1.570796326795, 0.785398163397, 0.785398163397]

    """
    table = table or generate(m)
    if m > table.n:
        raise ValueError(f"the table holds densities up to {table.n}, asked for {m}")  # noqa: TRY003
    order = max(p.order for p in table.p[: m + 1])
    jets = grid.jet(max(order, 0))
    values = [np.broadcast_to(np.asarray(p.evaluate(jets), dtype=float), grid.values.shape) for p in table.p[: m + 1]]
    return np.array([grid.h * float(np.sum(v)) for v in values])


def suggested_time_step(motion: MotionSpec | DiffPoly, grid: CurvatureGrid, safety: float = 0.5) -> float:
    """Time step for the integrating-factor stepper from a bound on the nonlinear part.

    Each nonlinear monomial ``c u0^e0 ... u_j^ej`` contributes
    ``|c| deg max|kappa|^(deg-1) k_max^order`` to the bound of its Jacobian; RK4
    is stable up to about 2.8 divided by that bound.
    """
    k_max = np.pi * grid.n / grid.length
    amplitude = max(float(np.max(np.abs(grid.values))), 1.0)
    bound = 0.0
    for mono, coeff in nonlinear_part(_rhs(motion)).terms.items():
        bound += abs(float(coeff)) * mono.degree * amplitude ** (mono.degree - 1) * k_max ** max(mono.order, 0)
    if bound == 0.0:
        return 0.1 * grid.length
    return safety * 2.8 / bound


class _SpectralFlow:
    """Right-hand side of a flow split into exact linear and dealiased nonlinear parts."""

    def __init__(self, rhs: DiffPoly, length: float, n: int) -> None:
        self.length = length
        self.n = n
        self.rhs = rhs
        self.symbol = linear_symbol(rhs, spectral.wavenumbers(length, n))
        if n % 2 == 0:
            self.symbol[-1] = self.symbol[-1].real
        self.nonlinear = nonlinear_part(rhs)
        self.mask = spectral.dealias_mask(n)

    def nonlinear_hat(self, spectrum: np.ndarray) -> np.ndarray:
        if self.nonlinear.is_zero:
            return np.zeros_like(spectrum)
        jets = spectral.jet_from_spectrum(spectrum, self.length, self.n, max(self.nonlinear.order, 0))
        values = np.broadcast_to(np.asarray(self.nonlinear.evaluate(jets), dtype=float), (self.n,))
        return self.mask * np.fft.rfft(values)

    def full_hat(self, spectrum: np.ndarray) -> np.ndarray:
        return self.symbol * spectrum + self.nonlinear_hat(spectrum)

    def ifrk4(self, spectrum: np.ndarray, dt: float) -> np.ndarray:
        e = np.exp(0.5 * dt * self.symbol)
        e2 = e * e
        a = dt * self.nonlinear_hat(spectrum)
        b = dt * self.nonlinear_hat(e * (spectrum + 0.5 * a))
        c = dt * self.nonlinear_hat(e * spectrum + 0.5 * b)
        d = dt * self.nonlinear_hat(e2 * spectrum + e * c)
        return e2 * spectrum + (e2 * a + 2.0 * e * (b + c) + d) / 6.0

    def rk4(self, spectrum: np.ndarray, dt: float) -> np.ndarray:
        k1 = self.full_hat(spectrum)
        k2 = self.full_hat(spectrum + 0.5 * dt * k1)
        k3 = self.full_hat(spectrum + 0.5 * dt * k2)
        k4 = self.full_hat(spectrum + dt * k3)
        return spectrum + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def _schedule(dt: float, t_end: float) -> tuple[int, float]:
    if dt <= 0 or t_end < 0:
        raise ValueError(f"need dt > 0 and T >= 0, got dt={dt}, T={t_end}")  # noqa: TRY003
    steps = int(np.ceil(t_end / dt - 1e-9)) if t_end > 0 else 0
    return steps, (t_end / steps if steps else dt)


def _check_growth(values: np.ndarray, t: float, limit: float) -> None:
    peak = float(np.max(np.abs(values)))
    if not np.isfinite(peak) or peak > limit:
        raise InstabilityError(t, peak, limit)


def evolve_curvature(
    motion: MotionSpec | DiffPoly,
    grid0: CurvatureGrid,
    dt: float,
    t_end: float,
    *,
    snap_every: int = 1,
    method: str = "ifrk4",
    instability_factor: float = DEFAULT_INSTABILITY_FACTOR,
    table: HierarchyTable | None = None,
    on_step: StepCallback | None = None,
) -> list[FlowState]:
    """Evolve periodic curvature under ``kappa_t = rhs[kappa]``.

    Args:
        motion: A MotionSpec or directly the right-hand side polynomial.
        grid0: Initial curvature.
        dt: Requested time step; shortened so that steps divide ``t_end``.
        t_end: Final time.
        snap_every: Snapshot cadence in steps; the final state is always kept.
        method: ``"ifrk4"`` (integrating factor) or ``"rk4"``.
        instability_factor: Abort when ``max|kappa|`` exceeds this multiple of
            the initial maximum, floored at one.
        table: Hierarchy table for the conserved functionals.
        on_step: Called with ``(step, total)`` after every step.

    Returns:
        Snapshots, starting with the initial state.

    Raises:
        InstabilityError: If the solution grows beyond the threshold.

    """
    if method not in ("ifrk4", "rk4"):
        raise ValueError(f"unknown time stepper {method!r}")  # noqa: TRY003
    log = logger.bind(stage="evolve")
    table = table or generate(2)
    flow = _SpectralFlow(_rhs(motion), grid0.length, grid0.n)
    steps, dt = _schedule(dt, t_end)
    limit = instability_factor * max(float(np.max(np.abs(grid0.values))), 1.0)
    advance = flow.ifrk4 if method == "ifrk4" else flow.rk4

    def snapshot(t: float, values: np.ndarray) -> FlowState:
        grid = CurvatureGrid(grid0.length, values)
        return FlowState(t=t, grid=grid, conserved=tuple(conserved_functionals(grid, table).tolist()))

    log.info(f"Evolving {flow.rhs} on N={grid0.n}, L={grid0.length:g}: {steps} steps of dt={dt:.3e} ({method})")
    states = [snapshot(0.0, grid0.values.copy())]
    spectrum = np.fft.rfft(grid0.values)
    for step in range(1, steps + 1):
        spectrum = advance(spectrum, dt)
        values = np.fft.irfft(spectrum, n=grid0.n)
        t = step * dt
        _check_growth(values, t, limit)
        if step % snap_every == 0 or step == steps:
            states.append(snapshot(t, values))
            log.debug(f"t={t:.4f} max|kappa|={np.max(np.abs(values)):.6g}")
        if on_step is not None:
            on_step(step, steps)
    return states


# curve evolution


def curve_from_grid(grid: CurvatureGrid) -> CurveSample:
    """Reconstruct one period of the curve of a periodic curvature from the identity frame."""
    midpoints = spectral.shift(grid.values, grid.length, 0.5 * grid.h)[:-1]
    return integrate_frenet(grid.values, grid.h, midpoints=midpoints)


def monodromy(curve: CurveSample, length: float | None = None) -> np.ndarray:
    """Return ``M = F(L) F(0)^-1`` for a curve of periodic curvature.

    The curve samples one period on ``s_k = k h``; the missing frame at ``s = L``
    is obtained with one more Lie-group step using the periodic interpolant of
    the curvature.

    Args:
        curve: Curve with frames and periodic curvature samples.
        length: Period; ``N h`` by default.

    Returns:
        The 4x4 monodromy, so that ``F(s + L) = M F(s)``.

    """
    if curve.frames is None or curve.kappa is None:
        raise ValueError("monodromy needs a curve with frames and curvature")  # noqa: TRY003
    length = length or curve.h * curve.size
    kappa = np.asarray(curve.kappa, dtype=float)
    middle = spectral.shift(kappa, length, 0.5 * curve.h)[-1]
    k = frenet_matrix(np.array([kappa[-1], middle, kappa[0]]))
    last = rkmk4_step(curve.frames[-1], k[0], k[1], k[2], curve.h)
    return last @ np.linalg.inv(curve.frames[0])


def _act(matrix: np.ndarray, points: np.ndarray) -> np.ndarray:
    return matrix[1:, 0] + points @ matrix[1:, 1:].T


def extended_points(points: np.ndarray, mono: np.ndarray, pad: int = GHOST_NODES) -> np.ndarray:
    """Pad one period of points with ghost nodes ``gamma(s +- L) = M^(+-1) gamma(s)``."""
    before = _act(np.linalg.inv(mono), points[-pad:])
    after = _act(mono, points[:pad])
    return np.concatenate([before, points, after])


def periodic_curvature(
    points: np.ndarray,
    mono: np.ndarray,
    h: float,
    tolerance: float = DEFAULT_PSEUDO_ARC_TOLERANCE,
) -> np.ndarray:
    """Curvature at every node of one period, using ghost nodes at both ends."""
    padded = extended_points(points, mono)
    s = h * np.arange(-GHOST_NODES, points.shape[0] + GHOST_NODES)
    return curvature_from_curve(CurveSample(s=s, points=padded), tolerance)[GHOST_NODES:-GHOST_NODES]


def motion_matrices(motion: MotionSpec, kappa: np.ndarray, length: float) -> np.ndarray:
    """Assemble ``P[kappa]`` at every node from spectral jets, shape ``(N, 4, 4)``."""
    jets = spectral.jet(kappa, length, max(motion.order, 0))
    p1, p2, p3, p4, p5, p6 = motion.evaluate(jets)
    return lie_algebra_element(np.stack([p1, p2, p3], axis=-1), np.stack([p4, p5, p6], axis=-1))


def _smooth(kappa: np.ndarray) -> np.ndarray:
    spectrum = np.fft.rfft(kappa)
    return np.fft.irfft(spectral.dealias_mask(kappa.size) * spectrum, n=kappa.size)


def evolve_curve(
    motion: MotionSpec,
    curve0: CurveSample,
    dt: float,
    t_end: float,
    *,
    length: float | None = None,
    snap_every: int = 1,
    tolerance: float = DEFAULT_FRAME_TOLERANCE,
    arc_tolerance: float = DEFAULT_PSEUDO_ARC_TOLERANCE,
    instability_factor: float = DEFAULT_INSTABILITY_FACTOR,
    on_step: StepCallback | None = None,
) -> list[FlowState]:
    """Evolve a periodic null curve by ``F <- F exp(dt P[kappa])``.

    After every step the curvature is recomputed from the evolved points with
    the finite-difference extractor, and the two-thirds filter removes the
    high modes of the extraction noise before the next jet is taken.

    Args:
        motion: The local motion.
        curve0: One period of the curve, with frames and curvature.
        dt: Requested time step.
        t_end: Final time.
        length: Period, ``N h`` by default.
        snap_every: Snapshot cadence in steps.
        tolerance: Largest admitted frame metric residual.
        arc_tolerance: Natural-parameter tolerance of the extractor.
        instability_factor: Growth threshold relative to the initial maximum, floored at one.
        on_step: Called with ``(step, total)`` after every step.

    Returns:
        Snapshots with frames attached, starting with the initial state.

    Raises:
        FrameDriftError: If a frame leaves the group.
        InstabilityError: If the curvature blows up.

    """
    if curve0.frames is None or curve0.kappa is None:
        raise ValueError("curve evolution needs frames and curvature")  # noqa: TRY003
    log = logger.bind(stage="evolve_curve")
    length = length or curve0.h * curve0.size
    mono = monodromy(curve0, length)
    steps, dt = _schedule(dt, t_end)
    table = generate(2)
    kappa = np.asarray(curve0.kappa, dtype=float)
    frames = np.array(curve0.frames, dtype=float)
    limit = instability_factor * max(float(np.max(np.abs(kappa))), 1.0)

    def snapshot(t: float, values: np.ndarray, current: np.ndarray) -> FlowState:
        grid = CurvatureGrid(length, values)
        conserved = tuple(conserved_functionals(grid, table).tolist())
        return FlowState(t=t, grid=grid, frames=current.copy(), conserved=conserved)

    log.info(f"Evolving curve of {curve0.size} nodes with p3 = {motion.p3}: {steps} steps of dt={dt:.3e}")
    states = [snapshot(0.0, kappa, frames)]
    for step in range(1, steps + 1):
        frames = frames @ expm(dt * motion_matrices(motion, kappa, length))
        t = step * dt
        residual = metric_residual(frames)
        worst = int(np.argmax(residual))
        if residual[worst] > tolerance:
            raise FrameDriftError(float(residual[worst]), tolerance, worst)
        kappa = _smooth(periodic_curvature(frames[:, 1:, 0], mono, curve0.h, arc_tolerance))
        _check_growth(kappa, t, limit)
        if step % snap_every == 0 or step == steps:
            states.append(snapshot(t, kappa, frames))
        if on_step is not None:
            on_step(step, steps)
    return states


def _expm_minus_identity(a: np.ndarray) -> np.ndarray:
    """Return ``exp(a) - I`` as ``a phi1(a)``, read off the exponential of ``[[a, I], [0, 0]]``."""
    n = a.shape[-1]
    block = np.zeros((*a.shape[:-2], 2 * n, 2 * n))
    block[..., :n, :n] = a
    block[..., :n, n:] = np.eye(n)
    return a @ expm(block)[..., :n, n:]


def consistency_check(motion: MotionSpec, curve0: CurveSample, dt: float, length: float | None = None) -> float:
    """Compare the curvature change of one curve step with the symbolic flow.

    Returns ``max |(kappa_after - kappa_before) / dt - rhs[kappa0]|`` over the
    nodes. The change is taken from the point increment ``delta`` of the step,
    ``kappa_after - kappa_before = 1/4 <D3 delta, 2 D3 g + D3 delta>`` with the
    seven-point third difference D3, so no two extracted curvatures are
    subtracted; the jet of ``kappa0`` is spectral.

    Examples:
        >>> from nullflow.hierarchy import motion_from_p3
        >>> curve = curve_from_grid(CurvatureGrid(2 * np.pi, np.full(32, 0.1)))
        >>> consistency_check(motion_from_p3(DiffPoly.zero()), curve, 1e-3)
        0.0

    """
    if curve0.frames is None or curve0.kappa is None:
        raise ValueError("the consistency check needs frames and curvature")  # noqa: TRY003
    length = length or curve0.h * curve0.size
    mono = monodromy(curve0, length)
    linear = mono.copy()
    linear[1:, 0] = 0.0
    kappa0 = np.asarray(curve0.kappa, dtype=float)
    points = curve0.frames[:, 1:, 0]
    delta = (curve0.frames @ _expm_minus_identity(dt * motion_matrices(motion, kappa0, length)))[:, 1:, 0]
    inner = slice(GHOST_NODES, -GHOST_NODES)
    d3_points = central_jets(extended_points(points, mono), curve0.h)[2][inner]
    d3_delta = central_jets(extended_points(delta, linear), curve0.h)[2][inner]
    change = 0.25 * np.asarray(minkowski_inner(d3_delta, 2.0 * d3_points + d3_delta))
    predicted = np.broadcast_to(
        np.asarray(motion.rhs.evaluate(spectral.jet(kappa0, length, max(motion.rhs.order, 0))), dtype=float),
        kappa0.shape,
    )
    discrepancy = float(np.max(np.abs(change / dt - predicted)))
    logger.debug(f"Consistency of p3 = {motion.p3} at dt={dt:.1e}, h={curve0.h:.3e}: {discrepancy:.3e}")
    return discrepancy
