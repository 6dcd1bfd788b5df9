"""Null curves in Minkowski 3-space.

Minkowski space carries the inner product ``<x, y> = -(x1 y3 + x3 y1) + x2 y2``.
An affine frame ``(x; a1, a2, a3)`` is stored as the 4x4 matrix
``[[1, 0], [x, a]]`` whose columns 1..3 are the vectors t, n, b; frames act on
the right by the Lie algebra, ``F' = F K``.

Key Components:
    minkowski_inner: the Lorentzian inner product, vectorised over leading axes.
    frenet_matrix: the Frenet-Serret generator K(kappa).
    integrate_frenet: reconstruction of a curve from its curvature with a
        fourth-order Runge-Kutta-Munthe-Kaas stepper (frames stay on the group).
    curvature_from_curve: finite-difference extraction of kappa = 1/4 <g''', g'''>.
    pseudo_arc_reparametrize: resampling of a null curve in its natural parameter.
    rescale_curve: the dilation that divides the curvature by a constant.
    tangent_field: numerical tangent vector components of a local motion.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from loguru import logger
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import CubicSpline
from scipy.linalg import expm, sqrtm

from .exceptions import FlexPointError, FrameDriftError, NotNullError, NotPseudoArcError

METRIC = np.array([[0.0, 0.0, -1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0]])
TIME_WITNESS = np.array([1.0, 0.0, 1.0])

DEFAULT_FRAME_TOLERANCE = 1e-8
DEFAULT_PSEUDO_ARC_TOLERANCE = 1e-3
DEFAULT_NULL_TOLERANCE = 1e-4
FLEX_TOLERANCE = 1e-6

KappaSource = np.ndarray | Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class MVec3:
    """A vector of Minkowski 3-space in the standard basis.

    Examples:
        >>> e2 = MVec3(0.0, 1.0, 0.0)
        >>> minkowski_inner(e2, e2)
        1.0

    """

    x1: float
    x2: float
    x3: float

    @classmethod
    def from_array(cls, values: np.ndarray) -> MVec3:
        """Build from a length-3 array."""
        x1, x2, x3 = (float(v) for v in values)
        return cls(x1, x2, x3)

    def as_array(self) -> np.ndarray:
        """Return the coordinates as a float array."""
        return np.array([self.x1, self.x2, self.x3])


def _coords(x: MVec3 | np.ndarray) -> np.ndarray:
    return x.as_array() if isinstance(x, MVec3) else np.asarray(x, dtype=float)


def minkowski_inner(x: MVec3 | np.ndarray, y: MVec3 | np.ndarray) -> float | np.ndarray:
    """Lorentzian inner product, vectorised over leading axes.

    Examples:
        >>> minkowski_inner(np.array([1.0, 0, 0]), np.array([0, 0, 1.0]))
        -1.0

    """
    a, b = _coords(x), _coords(y)
    value = -(a[..., 0] * b[..., 2] + a[..., 2] * b[..., 0]) + a[..., 1] * b[..., 1]
    return float(value) if np.ndim(value) == 0 else value


def minkowski_norm(x: MVec3 | np.ndarray) -> float | np.ndarray:
    """Return ``sqrt(|<x, x>|)``."""
    value = np.sqrt(np.abs(minkowski_inner(x, x)))
    return float(value) if np.ndim(value) == 0 else value


def is_future_directed(x: MVec3 | np.ndarray) -> bool | np.ndarray:
    """Return True where ``<x, e1 + e3> < 0``."""
    value = np.asarray(minkowski_inner(x, TIME_WITNESS)) < 0
    return bool(value) if value.ndim == 0 else value


def frenet_matrix(kappa: float | np.ndarray) -> np.ndarray:
    """Return the Frenet-Serret generator ``K(kappa)``, shape ``(..., 4, 4)``.

    With ``F' = F K``: ``g' = t``, ``t' = n``, ``n' = -2 kappa t + b`` and
    ``b' = -2 kappa n``.

    Examples:
        >>> frenet_matrix(0.5)[1:, 1:]
        array([[ 0., -1.,  0.],
               [ 1.,  0., -1.],
               [ 0.,  1.,  0.]])

    """
    kappa = np.asarray(kappa, dtype=float)
    k = np.zeros((*kappa.shape, 4, 4))
    k[..., 1, 0] = 1.0
    k[..., 2, 1] = 1.0
    k[..., 3, 2] = 1.0
    k[..., 1, 2] = -2.0 * kappa
    k[..., 2, 3] = -2.0 * kappa
    return k


def lie_algebra_element(q: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Return the element ``X(q, v)`` of e(2,1); both arguments broadcast over leading axes.

    ``q`` is the translation column and ``v = (v1, v2, v3)`` fills the
    so(2,1) block ``[[v2, v3, 0], [v1, 0, v3], [0, v1, -v2]]``.
    """
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=float)
    shape = np.broadcast_shapes(q.shape[:-1], v.shape[:-1])
    x = np.zeros((*shape, 4, 4))
    x[..., 1:, 0] = q
    x[..., 1, 1] = v[..., 1]
    x[..., 1, 2] = v[..., 2]
    x[..., 2, 1] = v[..., 0]
    x[..., 2, 3] = v[..., 2]
    x[..., 3, 2] = v[..., 0]
    x[..., 3, 3] = -v[..., 1]
    return x


def is_in_lie_algebra(x: np.ndarray, tolerance: float = 1e-12) -> bool:
    """Return True iff x has the shape of an element of e(2,1).

    The first row vanishes and the linear block A satisfies ``A^T g + g A = 0``.
    """
    x = np.asarray(x, dtype=float)
    a = x[1:, 1:]
    return bool(
        np.max(np.abs(x[0])) <= tolerance and np.max(np.abs(a.T @ METRIC + METRIC @ a)) <= tolerance,
    )


def metric_residual(frames: np.ndarray) -> np.ndarray:
    """Return ``max |<a_i, a_j> - g_ij|`` for each frame in a ``(..., 4, 4)`` stack."""
    a = np.asarray(frames, dtype=float)[..., 1:, 1:]
    gram = np.swapaxes(a, -1, -2) @ METRIC @ a
    return np.max(np.abs(gram - METRIC), axis=(-2, -1))


@dataclass(frozen=True, eq=False)
class Frame:
    """An element of E(2,1): a point and a positive null-adapted basis.

    Attributes:
        matrix: The 4x4 matrix ``[[1, 0], [x, (a1 a2 a3)]]``.

    Examples:
        >>> f = Frame.identity()
        >>> f.a1
        MVec3(x1=1.0, x2=0.0, x3=0.0)
        >>> f.is_valid()
        True

    """

    matrix: np.ndarray

    @classmethod
    def identity(cls) -> Frame:
        """Return the standard frame at the origin."""
        return cls(np.eye(4))

    @classmethod
    def from_vectors(cls, point: np.ndarray, a1: np.ndarray, a2: np.ndarray, a3: np.ndarray) -> Frame:
        """Assemble a frame from a point and three vectors."""
        m = np.eye(4)
        m[1:, 0] = _coords(point)
        m[1:, 1] = _coords(a1)
        m[1:, 2] = _coords(a2)
        m[1:, 3] = _coords(a3)
        return cls(m)

    @property
    def point(self) -> MVec3:
        """Origin of the frame."""
        return MVec3.from_array(self.matrix[1:, 0])

    @property
    def a1(self) -> MVec3:
        """First null vector (the tangent t)."""
        return MVec3.from_array(self.matrix[1:, 1])

    @property
    def a2(self) -> MVec3:
        """Unit spacelike vector (the normal n)."""
        return MVec3.from_array(self.matrix[1:, 2])

    @property
    def a3(self) -> MVec3:
        """Second null vector (the binormal b)."""
        return MVec3.from_array(self.matrix[1:, 3])

    def residual(self) -> float:
        """Largest deviation of the Gram matrix from g."""
        return float(metric_residual(self.matrix))

    def is_valid(self, tolerance: float = DEFAULT_FRAME_TOLERANCE) -> bool:
        """Check the metric, time orientation and orientation conditions."""
        a = self.matrix[1:, 1:]
        return bool(
            self.residual() <= tolerance
            and is_future_directed(a[:, 0])
            and is_future_directed(a[:, 2])
            and np.linalg.det(a) > 0,
        )

    def __matmul__(self, other: Frame) -> Frame:
        """Compose two frames as group elements."""
        return Frame(self.matrix @ other.matrix)


@dataclass(frozen=True, eq=False)
class CurveSample:
    """A null curve sampled on a uniform grid of its natural parameter.

    Attributes:
        s: Strictly increasing uniform grid.
        points: Curve points, shape ``(n, 3)``.
        frames: Optional Frenet frames, shape ``(n, 4, 4)``.
        kappa: Optional curvature samples, shape ``(n,)``.
        meta: Scalar metadata such as the total length.
        valid: Optional mask of the nodes whose points can be trusted by the
            extractor; all nodes when omitted.

    """

    s: np.ndarray
    points: np.ndarray
    frames: np.ndarray | None = None
    kappa: np.ndarray | None = None
    meta: dict[str, float] = field(default_factory=dict, compare=False)
    valid: np.ndarray | None = None

    def __post_init__(self) -> None:
        """Validate grid uniformity and frame/point agreement."""
        s = np.asarray(self.s, dtype=float)
        if s.ndim != 1 or s.size < 2:
            raise ValueError("a curve needs at least two samples")  # noqa: TRY003
        steps = np.diff(s)
        if np.any(steps <= 0) or np.max(np.abs(steps - steps[0])) > 1e-9 * max(1.0, abs(steps[0])):
            raise ValueError("the parameter grid must be strictly increasing and uniform")  # noqa: TRY003
        if np.shape(self.points) != (s.size, 3):
            raise ValueError(f"points must have shape ({s.size}, 3), got {np.shape(self.points)}")  # noqa: TRY003
        if self.frames is not None and not np.allclose(self.frames[:, 1:, 0], self.points, rtol=0, atol=1e-12):
            raise ValueError("frame origins must coincide with the curve points")  # noqa: TRY003
        if self.valid is not None and np.shape(self.valid) != (s.size,):
            raise ValueError(f"the validity mask must have shape ({s.size},)")  # noqa: TRY003

    @property
    def h(self) -> float:
        """Grid step."""
        return float(self.s[1] - self.s[0])

    @property
    def size(self) -> int:
        """Number of samples."""
        return int(np.size(self.s))

    def frame(self, index: int) -> Frame:
        """Return the frame at a sample index."""
        if self.frames is None:
            raise ValueError("this curve carries no frames")  # noqa: TRY003
        return Frame(self.frames[index])


# integration


def _commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def _dexpinv(omega: np.ndarray, a: np.ndarray) -> np.ndarray:
    # right-trivialised form for F' = F A, truncated after the double commutator
    first = _commutator(omega, a)
    return a + 0.5 * first + _commutator(omega, first) / 12.0


def _kappa_stages(
    kappa: KappaSource, h: float, s0: float, n: int | None, midpoints: np.ndarray | None
) -> tuple[np.ndarray, np.ndarray]:
    if callable(kappa):
        if n is None:
            raise ValueError("the number of samples is required when kappa is a function")  # noqa: TRY003
        s = s0 + h * np.arange(n)
        return np.asarray(kappa(s), dtype=float), np.asarray(kappa(s[:-1] + 0.5 * h), dtype=float)
    nodes = np.asarray(kappa, dtype=float)
    if midpoints is None:
        s = s0 + h * np.arange(nodes.size)
        midpoints = CubicSpline(s, nodes)(s[:-1] + 0.5 * h) if nodes.size > 1 else np.empty(0)
    return nodes, np.asarray(midpoints, dtype=float)


def rkmk4_step(frame: np.ndarray, k_start: np.ndarray, k_mid: np.ndarray, k_end: np.ndarray, h: float) -> np.ndarray:
    """Advance ``F' = F A(s)`` one step with the classical Munthe-Kaas scheme.

    Args:
        frame: Current 4x4 group element.
        k_start: A at the left node.
        k_mid: A at the midpoint.
        k_end: A at the right node.
        h: Step size.

    Returns:
        The group element ``F exp(Omega)`` at the right node.

    """
    k1 = h * k_start
    k2 = h * _dexpinv(0.5 * k1, k_mid)
    k3 = h * _dexpinv(0.5 * k2, k_mid)
    k4 = h * _dexpinv(k3, k_end)
    omega = (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
    return frame @ expm(omega)


def _project(frame: np.ndarray) -> np.ndarray:
    a = frame[1:, 1:]
    s = np.linalg.solve(METRIC, a.T @ METRIC @ a)
    root = np.real(sqrtm(s))
    projected = frame.copy()
    projected[1:, 1:] = a @ np.linalg.inv(root)
    return projected


def _rk4_step(frame: np.ndarray, k_start: np.ndarray, k_mid: np.ndarray, k_end: np.ndarray, h: float) -> np.ndarray:
    d1 = frame @ k_start
    d2 = (frame + 0.5 * h * d1) @ k_mid
    d3 = (frame + 0.5 * h * d2) @ k_mid
    d4 = (frame + h * d3) @ k_end
    return _project(frame + h * (d1 + 2.0 * d2 + 2.0 * d3 + d4) / 6.0)


def integrate_frenet(
    kappa: KappaSource,
    h: float,
    frame0: Frame | None = None,
    *,
    s0: float = 0.0,
    n: int | None = None,
    midpoints: np.ndarray | None = None,
    method: str = "rkmk4",
    tolerance: float = DEFAULT_FRAME_TOLERANCE,
) -> CurveSample:
    """Reconstruct a null curve from its curvature.

    Args:
        kappa: Curvature samples on ``s_k = s0 + k h`` or a vectorised function of s.
        h: Grid step, positive.
        frame0: Initial frame, the identity frame at the origin by default.
        s0: First grid node.
        n: Number of samples; required when ``kappa`` is a function.
        midpoints: Curvature at the interval midpoints. Interpolated with a
            not-a-knot cubic spline when omitted.
        method: ``"rkmk4"`` (Lie-group stepper) or ``"rk4"`` (classical RK4
            followed by projection onto the group).
        tolerance: Largest admitted metric residual.

    Returns:
        The curve with frames and curvature attached.

    Raises:
        FrameDriftError: If a frame leaves the group by more than ``tolerance``.

    Examples:
        >>> curve = integrate_frenet(np.zeros(11), 0.1)
        >>> bool(np.allclose(curve.points[-1], [1.0, 0.5, 1.0 / 6.0]))
        True

    """
    if h <= 0:
        raise ValueError(f"step size must be positive, got {h}")  # noqa: TRY003
    if method not in ("rkmk4", "rk4"):
        raise ValueError(f"unknown Frenet stepper {method!r}")  # noqa: TRY003
    nodes, mids = _kappa_stages(kappa, h, s0, n, midpoints)
    start = (frame0 or Frame.identity()).matrix
    k_nodes, k_mids = frenet_matrix(nodes), frenet_matrix(mids)
    step = rkmk4_step if method == "rkmk4" else _rk4_step

    frames = np.empty((nodes.size, 4, 4))
    frames[0] = start
    for k in range(nodes.size - 1):
        frames[k + 1] = step(frames[k], k_nodes[k], k_mids[k], k_nodes[k + 1], h)

    residual = metric_residual(frames) - metric_residual(start)
    worst = int(np.argmax(residual))
    if residual[worst] > tolerance:
        raise FrameDriftError(float(residual[worst]), tolerance, worst)
    logger.debug(f"Integrated {nodes.size} frames with {method}, metric drift {residual[worst]:.2e}")

    s = s0 + h * np.arange(nodes.size)
    return CurveSample(s=s, points=frames[:, 1:, 0].copy(), frames=frames, kappa=nodes.copy())


# extraction


STENCIL_HALF_WIDTH = 3

# seven-point central weights on g_{k-3} .. g_{k+3}; orders 6, 6 and 4
_STENCILS = (
    (np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0, 1),
    (np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]) / 180.0, 2),
    (np.array([1.0, -8.0, 13.0, 0.0, -13.0, 8.0, -1.0]) / 8.0, 3),
)


def central_jets(points: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Seven-point central differences of g', g'' and g'''.

    ``g'`` and ``g''`` are sixth order, ``g'''`` is fourth order. The
    ``STENCIL_HALF_WIDTH`` nodes at each end are NaN.

    Examples:
        >>> s = np.linspace(0.0, 1.0, 11)
        >>> _, _, d3 = central_jets(np.stack([s, s**2 / 2, s**3 / 6], axis=-1), 0.1)
        >>> bool(np.allclose(d3[3:-3], [0.0, 0.0, 1.0]))
        True

    """
    points = np.asarray(points, dtype=float)
    width = STENCIL_HALF_WIDTH
    count = points.shape[0] - 2 * width
    jets = []
    for weights, order in _STENCILS:
        out = np.full_like(points, np.nan)
        if count > 0:
            out[width:-width] = sum(c * points[j : j + count] for j, c in enumerate(weights) if c) / h**order
        jets.append(out)
    return jets[0], jets[1], jets[2]


def _check_flex(d1: np.ndarray, d2: np.ndarray) -> None:
    valid = np.all(np.isfinite(d1), axis=1) & np.all(np.isfinite(d2), axis=1)
    wedge = np.linalg.norm(np.cross(d1[valid], d2[valid]), axis=1)
    scale = np.linalg.norm(d1[valid], axis=1) * np.linalg.norm(d2[valid], axis=1)
    flat = wedge <= FLEX_TOLERANCE * np.maximum(scale, np.finfo(float).tiny)
    if np.any(flat):
        raise FlexPointError(int(np.flatnonzero(valid)[np.argmax(flat)]))


def curvature_from_curve(curve: CurveSample, tolerance: float = DEFAULT_PSEUDO_ARC_TOLERANCE) -> np.ndarray:
    """Estimate ``kappa = 1/4 <g''', g'''>`` by finite differences.

    ``g'''`` uses the seven-point central stencil, so the three nodes at each
    end carry no estimate and are returned as NaN, as are the nodes outside
    ``curve.valid``.

    Args:
        curve: Curve sampled in its natural parameter.
        tolerance: Largest admitted deviation of ``<g'', g''>`` from 1.

    Returns:
        Curvature at every node, NaN where the stencil does not fit.

    Raises:
        NotPseudoArcError: If the samples are not in the natural parameter.
        FlexPointError: If ``g'`` and ``g''`` are parallel at some node.

    """
    points = np.asarray(curve.points, dtype=float)
    d1, d2, d3 = central_jets(points, curve.h)
    if curve.valid is not None:
        for jet in (d1, d2, d3):
            jet[~np.asarray(curve.valid, dtype=bool)] = np.nan
    _check_flex(d1, d2)
    deviation = np.abs(minkowski_inner(d2, d2) - 1.0)
    worst = float(np.nanmax(deviation)) if np.any(np.isfinite(deviation)) else 0.0
    if worst > tolerance:
        raise NotPseudoArcError(worst, tolerance)
    return 0.25 * minkowski_inner(d3, d3)


def frame_from_jet(d1: np.ndarray, d2: np.ndarray, d3: np.ndarray, point: np.ndarray | None = None) -> np.ndarray:
    """Frenet frame ``t = g'``, ``n = g''``, ``b = g''' + 1/2 <g''', g'''> g'``.

    Arguments broadcast over leading axes; the result has shape ``(..., 4, 4)``.
    """
    d1, d2, d3 = (np.asarray(v, dtype=float) for v in (d1, d2, d3))
    shape = np.broadcast_shapes(d1.shape, d2.shape, d3.shape)[:-1]
    b = d3 + 0.5 * np.asarray(minkowski_inner(d3, d3))[..., None] * d1
    frames = np.zeros((*shape, 4, 4))
    frames[..., 0, 0] = 1.0
    if point is not None:
        frames[..., 1:, 0] = point
    frames[..., 1:, 1] = d1
    frames[..., 1:, 2] = d2
    frames[..., 1:, 3] = b
    return frames


def frenet_frames(curve: CurveSample) -> np.ndarray:
    """Frenet frames from finite-difference jets; boundary nodes are NaN."""
    points = np.asarray(curve.points, dtype=float)
    d1, d2, d3 = central_jets(points, curve.h)
    return frame_from_jet(d1, d2, d3, point=points)


def rescale_curve(curve: CurveSample, r: float) -> CurveSample:
    """Return the dilated curve ``r g(sigma / sqrt(r))`` in its own natural parameter.

    The dilation keeps the curve null and divides the curvature by ``r``; the
    natural parameter becomes ``sigma = sqrt(r) s`` and the frame columns scale
    by ``sqrt(r)``, 1 and ``1/sqrt(r)``.

    Examples:
        >>> curve = integrate_frenet(np.full(9, 0.5), 0.1)
        >>> wide = rescale_curve(curve, 4.0)
        >>> float(wide.h), float(wide.kappa[0]), float(wide.frames[0, 1, 1])
        (0.2, 0.125, 2.0)

    Raises:
        ValueError: If ``r`` is not positive.

    """
    if not r > 0:
        raise ValueError(f"the dilation factor must be positive, got {r}")  # noqa: TRY003
    root = float(np.sqrt(r))
    frames = None
    if curve.frames is not None:
        frames = np.array(curve.frames, dtype=float)
        frames[:, 1:, 0] *= r
        frames[:, 1:, 1] *= root
        frames[:, 1:, 3] /= root
    kappa = None if curve.kappa is None else np.asarray(curve.kappa, dtype=float) / r
    meta = {key: value * root if key == "length" else value for key, value in curve.meta.items()}
    return CurveSample(
        s=root * np.asarray(curve.s, dtype=float),
        points=r * np.asarray(curve.points, dtype=float),
        frames=frames,
        kappa=kappa,
        meta=meta,
        valid=curve.valid,
    )


def pseudo_arc_reparametrize(
    t: np.ndarray,
    points: np.ndarray,
    n: int | None = None,
    *,
    null_tolerance: float = DEFAULT_NULL_TOLERANCE,
    arc_tolerance: float = DEFAULT_PSEUDO_ARC_TOLERANCE,
    refine: int = 8,
    boundary_band: int = 8,
) -> CurveSample:
    """Resample a null curve on a uniform grid of its natural parameter.

    Each coordinate is interpolated by a not-a-knot cubic spline in t. The
    natural parameter ``s(t) = int <g'', g''>^(1/4) dt`` is the antiderivative
    of a cubic spline through the speed on a grid ``refine`` times finer than
    t; it is inverted by a second spline and the curve is resampled on ``n``
    uniform s-nodes.

    The spline end conditions perturb the last few input intervals. Output
    nodes that map into the first or last ``boundary_band`` intervals (at most
    a quarter of them) are left out of ``valid``, so the extractor returns NaN
    there.

    Args:
        t: Strictly increasing, possibly non-uniform parameter values.
        points: Curve points, shape ``(len(t), 3)``.
        n: Number of output samples (defaults to ``len(t)``).
        null_tolerance: Largest admitted ``|<g', g'>| / |g'|^2``.
        arc_tolerance: Largest admitted deviation of the output ``<g'', g''>`` from 1.
        refine: Subdivision factor of the quadrature grid.
        boundary_band: Input intervals at each end whose resampled points are
            marked invalid.

    Returns:
        The resampled curve, ``s`` starting at 0, with its ``valid`` mask.

    Raises:
        NotNullError: If the velocity is not a future-directed null vector.
        FlexPointError: If ``<g'', g''>`` vanishes.
        NotPseudoArcError: If the resampled curve fails the natural-parameter check.

    """
    t = np.asarray(t, dtype=float)
    points = np.asarray(points, dtype=float)
    spline = CubicSpline(t, points, axis=0)
    d1, d2 = spline(t, 1), spline(t, 2)

    normalised = np.asarray(minkowski_inner(d1, d1)) / np.maximum(np.sum(d1 * d1, axis=1), np.finfo(float).tiny)
    bad = (np.abs(normalised) > null_tolerance) | ~np.asarray(is_future_directed(d1))
    if np.any(bad):
        index = int(np.argmax(bad))
        raise NotNullError(index, float(normalised[index]))

    fine = np.concatenate([np.linspace(a, b, refine, endpoint=False) for a, b in zip(t[:-1], t[1:], strict=True)])
    fine = np.append(fine, t[-1])
    speed2 = np.asarray(minkowski_inner(spline(fine, 2), spline(fine, 2)))
    if np.any(speed2 <= FLEX_TOLERANCE):
        raise FlexPointError(int(np.argmax(speed2 <= FLEX_TOLERANCE)) // refine)
    arc = CubicSpline(fine, speed2**0.25).antiderivative()(fine)

    count = n or t.size
    s = np.linspace(0.0, arc[-1], count)
    t_of_s = np.clip(CubicSpline(arc, fine)(s), t[0], t[-1])
    band = min(boundary_band, (t.size - 1) // 4)
    valid = (t_of_s >= t[band]) & (t_of_s <= t[-1 - band])
    curve = CurveSample(s=s, points=spline(t_of_s), meta={"length": float(arc[-1])}, valid=valid)

    _, d2_out, _ = central_jets(curve.points, curve.h)
    deviation = np.abs(np.asarray(minkowski_inner(d2_out, d2_out)) - 1.0)
    deviation[~valid] = np.nan
    if np.any(np.isfinite(deviation)) and np.nanmax(deviation) > arc_tolerance:
        raise NotPseudoArcError(float(np.nanmax(deviation)), arc_tolerance)
    return curve


# tangent fields


@dataclass(frozen=True, eq=False)
class TangentField:
    """Numerical components of an infinitesimal motion of a null curve.

    Attributes:
        p1: Tangential component.
        p2: Normal component.
        p3: Binormal component.
        p4: Maurer-Cartan entry.
        p5: Maurer-Cartan entry.
        p6: Maurer-Cartan entry.
        c: Induced variation of the curvature.

    """

    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray
    p4: np.ndarray
    p5: np.ndarray
    p6: np.ndarray
    c: np.ndarray


def tangent_field(kappa: np.ndarray, p3: np.ndarray, h: float, constant: float | None = None) -> TangentField:
    """Complete a binormal component to a tangent vector and its curvature variation.

    ``p2 = -p3'``, ``p1 = p3''/2 + int_0^s kappa' p3 + constant``,
    ``p4 = -p3'' - 2 kappa p3 + p1``, ``p5 = p1' + 2 kappa p3'``,
    ``p6 = p5' - 2 kappa p4`` and ``c = -p6'/2 - kappa p5``. Derivatives are
    second-order differences, the integral is the trapezoid rule.

    Args:
        kappa: Curvature samples.
        p3: Binormal component on the same grid.
        h: Grid step.
        constant: Integration constant of p1; ``kappa(0) p3(0)`` when omitted,
            which makes p1 the local expression ``p3''/2 + kappa p3`` for constant p3.

    Returns:
        The TangentField.

    """
    kappa = np.asarray(kappa, dtype=float)
    p3 = np.broadcast_to(np.asarray(p3, dtype=float), kappa.shape).astype(float)
    if constant is None:
        constant = float(kappa[0] * p3[0])

    def d(v: np.ndarray) -> np.ndarray:
        return np.gradient(v, h, edge_order=2)

    dp3 = d(p3)
    ddp3 = d(dp3)
    dkappa = d(kappa)
    p1 = 0.5 * ddp3 + cumulative_trapezoid(dkappa * p3, dx=h, initial=0.0) + constant
    p2 = -dp3
    p4 = -ddp3 - 2.0 * kappa * p3 + p1
    p5 = d(p1) + 2.0 * kappa * dp3
    p6 = d(p5) - 2.0 * kappa * p4
    c = -0.5 * d(p6) - kappa * p5
    return TangentField(p1=p1, p2=p2, p3=p3, p4=p4, p5=p5, p6=p6, c=c)
