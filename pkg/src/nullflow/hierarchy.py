"""KdV hierarchy by Lenard recursion and curvature motions of null curves.

The gradients g_n are generated from g_0 = 1/2 by solving ``D g_n = SD g_{n-1}``
with the exact primitive, where ``SD = D^3 + 4 u0 D + 2 u1`` is the second
Hamiltonian operator. Densities p_n are reconstructed from the gradients with
the homotopy formula, so ``E(p_n) = g_n`` holds exactly.

A local motion of a null curve is determined by its binormal component p3.
:func:`motion_from_p3` derives the remaining components of the tangent field
together with the induced evolution of the curvature, and
:func:`hierarchy_motion` selects the motion whose curvature flow is the n-th
member of the hierarchy.

Example::

    from nullflow.hierarchy import generate, hierarchy_motion

    table = generate(3)
    print(table.g[3])                  # 10*u0^3 + 10*u0*u2 + 5*u1^2 + u4
    print(hierarchy_motion(2).rhs)     # -6*u0*u1 - u3
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

import numpy as np
from loguru import logger

from .diffpoly import (
    DiffPoly,
    apply_script_D,
    equal_mod_D,
    is_total_derivative,
    jet_variable,
    potential_from_gradient,
    primitive,
    total_derivative,
)
from .exceptions import NotAdmissibleError

DEFAULT_MAX_DEPTH = 8
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class HierarchyTable:
    """Gradients and densities of the first n+1 conserved functionals.

    Attributes:
        g: Gradients ``g[0..n]`` with ``g[0] = 1/2``.
        p: Densities ``p[0..n]`` with ``E(p[k]) = g[k]``.

    """

    g: tuple[DiffPoly, ...]
    p: tuple[DiffPoly, ...]

    @property
    def n(self) -> int:
        """Index of the last generated member."""
        return len(self.g) - 1

    def to_json(self) -> dict[str, Any]:
        """Serialize as ``{"n", "g", "p", "rhs"}``; ``rhs`` is null for n = 0."""
        return {
            "n": self.n,
            "g": [w.to_json() for w in self.g],
            "p": [w.to_json() for w in self.p],
            "rhs": kdv_rhs(self.n).to_json() if self.n >= 1 else None,
        }


@dataclass(frozen=True)
class MotionSpec:
    """Components of a local vector field along a null curve.

    The tangent field is ``p1 t + p2 n + p3 b``; p4, p5 and p6 fill the
    Lie-algebra valued t-component of the Maurer-Cartan form, and ``rhs`` is
    the induced time derivative of the curvature.

    Attributes:
        p1: Tangential component.
        p2: Normal component, ``-D p3``.
        p3: Binormal component (the generator).
        p4: Entry of the t-form, ``-1/2 D^2 p3 - 2 u0 p3 + D^-1(u1 p3)``.
        p5: Entry of the t-form, ``1/2 SD p3``.
        p6: Entry of the t-form, ``D p5 - 2 u0 p4``.
        rhs: Curvature evolution, ``1/2 SD p4``.

    """

    p1: DiffPoly
    p2: DiffPoly
    p3: DiffPoly
    p4: DiffPoly
    p5: DiffPoly
    p6: DiffPoly
    rhs: DiffPoly

    @property
    def components(self) -> tuple[DiffPoly, ...]:
        """The six components ``(p1, ..., p6)`` in order."""
        return (self.p1, self.p2, self.p3, self.p4, self.p5, self.p6)

    @property
    def order(self) -> int:
        """Highest jet order needed to evaluate every component and the rhs."""
        return max(w.order for w in (*self.components, self.rhs))

    def evaluate(self, jet: list[np.ndarray] | tuple[np.ndarray, ...]) -> tuple[np.ndarray, ...]:
        """Evaluate ``(p1, ..., p6)`` on a jet of curvature samples.

        Args:
            jet: Arrays ``(kappa, kappa', kappa'', ...)`` of equal shape.

        Returns:
            Six arrays shaped like ``jet[0]``.

        """
        shape = np.shape(jet[0])
        return tuple(np.broadcast_to(np.asarray(w.evaluate(jet), dtype=float), shape).copy() for w in self.components)

    def to_json(self) -> dict[str, Any]:
        """Serialize every component and the rhs in polynomial JSON form."""
        names = ("p1", "p2", "p3", "p4", "p5", "p6")
        document: dict[str, Any] = {name: w.to_json() for name, w in zip(names, self.components, strict=True)}
        document["rhs"] = self.rhs.to_json()
        return document


def lenard_step(g_prev: DiffPoly) -> DiffPoly:
    """Return the next gradient, the primitive of ``SD g_prev``.

    Raises:
        NotExactError: If ``SD g_prev`` is not a total derivative.

    Examples:
        >>> str(lenard_step(DiffPoly.parse("u0")))
        '3*u0^2 + u2'

    """
    return primitive(apply_script_D(g_prev))


@lru_cache(maxsize=None)
def _chain(n: int) -> tuple[tuple[DiffPoly, ...], tuple[DiffPoly, ...]]:
    if n == 0:
        g0 = DiffPoly.constant(HALF)
        return (g0,), (potential_from_gradient(g0),)
    g, p = _chain(n - 1)
    g_n = lenard_step(g[-1])
    p_n = potential_from_gradient(g_n)
    logger.debug(f"Lenard step {n}: {len(g_n.terms)} gradient terms, {len(p_n.terms)} density terms")
    return (*g, g_n), (*p, p_n)


def generate(n: int, max_depth: int = DEFAULT_MAX_DEPTH) -> HierarchyTable:
    """Generate the gradients and densities up to index n.

    Args:
        n: Index of the last member, ``n >= 0``.
        max_depth: Largest n accepted; the term count grows combinatorially.

    Returns:
        The immutable table ``g[0..n]``, ``p[0..n]``. Tables are cached.

    Raises:
        ValueError: If n is negative or exceeds ``max_depth``.

    Examples:
        >>> [str(w) for w in generate(2).g]
        ['1/2', 'u0', '3*u0^2 + u2']

    """
    if n < 0:
        raise ValueError(f"hierarchy index must be non-negative, got {n}")  # noqa: TRY003
    if n > max_depth:
        raise ValueError(f"hierarchy index {n} exceeds the depth bound {max_depth}")  # noqa: TRY003
    g, p = _chain(n)
    return HierarchyTable(g=g, p=p)


def kdv_rhs(n: int) -> DiffPoly:
    """Return the n-th flow ``-D g_n`` after checking it equals ``-SD g_{n-1}``.

    Examples:
        >>> str(kdv_rhs(2))
        '-6*u0*u1 - u3'

    """
    if n < 1:
        raise ValueError(f"flows start at n = 1, got {n}")  # noqa: TRY003
    g = generate(n, max_depth=max(n, DEFAULT_MAX_DEPTH)).g
    first, second = hamiltonian_forms(n, g)
    if first != second:
        raise RuntimeError(f"Hamiltonian forms of flow {n} disagree")  # noqa: TRY003
    return -first


def hamiltonian_forms(n: int, g: tuple[DiffPoly, ...] | None = None) -> tuple[DiffPoly, DiffPoly]:
    """Return ``(D g_n, SD g_{n-1})``, the two Hamiltonian forms of the n-th flow.

    Args:
        n: Flow index, ``n >= 1``.
        g: Precomputed gradients, generated when omitted.

    Returns:
        Both representations; they are equal polynomials.

    """
    if g is None:
        g = generate(n, max_depth=max(n, DEFAULT_MAX_DEPTH)).g
    return total_derivative(g[n]), apply_script_D(g[n - 1])


def density_table() -> list[tuple[DiffPoly, DiffPoly, bool]]:
    """Compare the first conserved densities in their textbook form with the generated ones.

    Returns:
        Triples ``(textbook density, generated density, equal modulo im(D))``
        for the momentum-like functionals u/2, u^2/2 and u^3 - u1^2/2.

    """
    textbook = [
        DiffPoly.parse("1/2*u0"),
        DiffPoly.parse("1/2*u0^2"),
        DiffPoly.parse("u0^3 - 1/2*u1^2"),
    ]
    generated = generate(2).p
    return [(a, b, equal_mod_D(a, b)) for a, b in zip(textbook, generated, strict=True)]


def is_admissible(p3: DiffPoly) -> bool:
    """Return True iff ``u1 * p3`` is a total derivative, i.e. p3 defines a local motion.

    Examples:
        >>> is_admissible(DiffPoly.parse("u0^2"))
        True
        >>> is_admissible(DiffPoly.parse("u1"))
        False

    """
    return is_total_derivative(jet_variable(1) * p3)


def motion_from_p3(p3: DiffPoly) -> MotionSpec:
    """Derive the full local motion generated by a binormal component.

    All integration constants are zero. The curvature evolution is
    ``1/2 SD p4``; before returning, it is checked against the structure
    equation form ``-1/2 D p6 - u0 p5`` and against ``-1/4 SD D^-1 SD p3``.

    Args:
        p3: Binormal component with ``E(u1 p3) = 0``.

    Returns:
        The MotionSpec.

    Raises:
        NotAdmissibleError: If ``u1 p3`` is not a total derivative.

    Examples:
        >>> m = motion_from_p3(DiffPoly.constant(2))
        >>> str(m.p6), str(m.rhs)
        ('4*u0^2 + 2*u2', '-6*u0*u1 - u3')

    """
    if not is_admissible(p3):
        raise NotAdmissibleError(str(p3))
    u0, u1 = jet_variable(0), jet_variable(1)

    integral = primitive(u1 * p3)
    d_p3 = total_derivative(p3)
    dd_p3 = total_derivative(d_p3)

    p1 = HALF * dd_p3 + integral
    p2 = -d_p3
    p4 = -HALF * dd_p3 - 2 * u0 * p3 + integral
    p5 = total_derivative(p1) + 2 * u0 * d_p3
    p6 = total_derivative(p5) - 2 * u0 * p4
    rhs = HALF * apply_script_D(p4)

    sd_p3 = apply_script_D(p3)
    checks = {
        "p5 = 1/2 SD p3": p5 == HALF * sd_p3,
        "D p4 = -1/2 SD p3": total_derivative(p4) == -HALF * sd_p3,
        "rhs = -1/2 D p6 - u0 p5": rhs == -HALF * total_derivative(p6) - u0 * p5,
        "rhs = -1/4 SD D^-1 SD p3": rhs == -Fraction(1, 4) * apply_script_D(primitive(sd_p3)),
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise RuntimeError(f"motion identities failed for p3 = {p3}: {', '.join(failed)}")  # noqa: TRY003

    logger.debug(f"Motion for p3 = {p3}: rhs = {rhs}")
    return MotionSpec(p1=p1, p2=p2, p3=p3, p4=p4, p5=p5, p6=p6, rhs=rhs)


def hierarchy_motion(n: int) -> MotionSpec:
    """Return the motion whose curvature flow is the n-th KdV flow, ``p3 = 4 g_{n-2}``.

    Raises:
        ValueError: If ``n < 2``.

    Examples:
        >>> str(hierarchy_motion(2).p3)
        '2'

    """
    if n < 2:
        raise ValueError(f"curve motions exist for n >= 2, got {n}")  # noqa: TRY003
    g = generate(n - 2, max_depth=max(n, DEFAULT_MAX_DEPTH)).g
    motion = motion_from_p3(4 * g[n - 2])
    if motion.rhs != kdv_rhs(n):
        raise RuntimeError(f"motion {n} does not induce the KdV flow {n}")  # noqa: TRY003
    return motion


def linear_symbol(rhs: DiffPoly, wavenumbers: np.ndarray) -> np.ndarray:
    """Fourier symbol of the linear part of a flow.

    A degree-one monomial ``c * u_j`` acts on ``exp(i k s)`` as ``c (i k)^j``.

    Args:
        rhs: Right-hand side of the flow.
        wavenumbers: Angular wavenumbers k.

    Returns:
        Complex array ``L(k) = sum_j c_j (i k)^j``.

    """
    k = np.asarray(wavenumbers, dtype=float)
    symbol = np.zeros(k.shape, dtype=complex)
    for mono, coeff in rhs.homogeneous_part(1).terms.items():
        symbol += float(coeff) * (1j * k) ** mono.order
    return symbol


def nonlinear_part(rhs: DiffPoly) -> DiffPoly:
    """Return the rhs without its linear terms."""
    return rhs - rhs.homogeneous_part(1)
