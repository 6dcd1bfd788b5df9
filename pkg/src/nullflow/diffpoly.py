"""Exact differential polynomials in one dependent variable.

This module implements the algebra of polynomial differential functions
J[u]: polynomials with exact rational coefficients in the jet variables
u0, u1, u2, ... (u_j stands for the j-th derivative of u with respect to s).
The independent variable s never appears explicitly.

Key Components:
    Monomial: product of jet variables with positive exponents.
    DiffPoly: immutable, canonical map from monomials to nonzero Fractions.
    total_derivative: the derivation D with D(u_j) = u_{j+1}.
    euler_operator: the variational derivative E, whose kernel is im(D).
    primitive: exact inverse of D on total derivatives, by integration by parts.
    potential_from_gradient: reconstructs a density from its gradient with
        the homotopy formula.

Example::

    from nullflow.diffpoly import DiffPoly, euler_operator, total_derivative

    w = DiffPoly.parse("u0*u1")
    dw = total_derivative(w)            # u0*u2 + u1^2
    assert euler_operator(dw).is_zero

Text grammar::

    poly   := term (("+" | "-") term)*
    term   := coeff | [coeff "*"] factor ("*" factor)*
    factor := "u" INT ("^" INT)?
    coeff  := INT ["/" INT] | DECIMAL
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Any

import numpy as np

from .exceptions import JetTooShortError, NotExactError, NotGradientError, PolynomialParseError

Scalar = int | Fraction
JetValue = float | np.ndarray


@dataclass(frozen=True)
class Monomial:
    """A product of jet variables ``u_j ** e_j``.

    Attributes:
        exponents: Pairs ``(j, e)`` sorted by jet order ``j``, all ``e >= 1``.
            The empty tuple is the constant monomial 1.

    Examples:
        >>> m = Monomial.from_mapping({0: 2, 2: 1})
        >>> m.degree, m.order
        (3, 2)
        >>> str(m)
        'u0^2*u2'

    """

    exponents: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        """Validate that orders are increasing and exponents positive."""
        orders = [j for j, _ in self.exponents]
        if orders != sorted(set(orders)):
            raise ValueError(f"jet orders must be strictly increasing: {self.exponents}")  # noqa: TRY003
        if any(j < 0 or e < 1 for j, e in self.exponents):
            raise ValueError(f"orders must be >= 0 and exponents >= 1: {self.exponents}")  # noqa: TRY003

    @classmethod
    def from_mapping(cls, exponents: Mapping[int, int]) -> Monomial:
        """Build a monomial from an order -> exponent mapping, dropping zero exponents."""
        return cls(tuple(sorted((int(j), int(e)) for j, e in exponents.items() if e != 0)))

    @classmethod
    def variable(cls, order: int) -> Monomial:
        """Return the monomial ``u_order``."""
        return cls(((order, 1),))

    @property
    def degree(self) -> int:
        """Total degree (sum of exponents)."""
        return sum(e for _, e in self.exponents)

    @property
    def order(self) -> int:
        """Highest jet order present, -1 for the constant monomial."""
        return self.exponents[-1][0] if self.exponents else -1

    def exponent(self, order: int) -> int:
        """Return the exponent of ``u_order`` (0 when absent)."""
        for j, e in self.exponents:
            if j == order:
                return e
        return 0

    def as_dict(self) -> dict[int, int]:
        """Return the exponents as a plain dictionary."""
        return dict(self.exponents)

    def __mul__(self, other: Monomial) -> Monomial:
        """Multiply two monomials."""
        merged = self.as_dict()
        for j, e in other.exponents:
            merged[j] = merged.get(j, 0) + e
        return Monomial.from_mapping(merged)

    def shifted(self, order: int, delta: int) -> Monomial:
        """Return the monomial with the exponent of ``u_order`` changed by ``delta``."""
        merged = self.as_dict()
        merged[order] = merged.get(order, 0) + delta
        if merged[order] < 0:
            raise ValueError(f"negative exponent for u{order}")  # noqa: TRY003
        return Monomial.from_mapping(merged)

    @property
    def sort_key(self) -> tuple[int, int, tuple[int, ...]]:
        """Graded key (degree, highest order, exponent vector from the top order down)."""
        vector = tuple(self.exponent(j) for j in range(self.order, -1, -1))
        return (self.degree, self.order, vector)

    def __str__(self) -> str:
        """Render as ``u0^2*u2``; the constant monomial renders as ``1``."""
        if not self.exponents:
            return "1"
        return "*".join(f"u{j}^{e}" if e > 1 else f"u{j}" for j, e in self.exponents)


ONE = Monomial()


def _as_fraction(value: Scalar | str | float) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    return Fraction(value)


class DiffPoly:
    """Immutable differential polynomial with exact rational coefficients.

    Two DiffPolys are equal iff their term maps are identical; zero
    coefficients are never stored.

    Examples:
        >>> p = DiffPoly.parse("3*u0^2 + u2")
        >>> str(p)
        '3*u0^2 + u2'
        >>> p.degree, p.order
        (2, 2)
        >>> str(p - p)
        '0'

    """

    __slots__ = ("_hash", "_terms")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None) -> None:
        """Create a polynomial from a monomial -> coefficient mapping.

        Args:
            terms: Coefficients keyed by monomial. Zero entries are dropped.

        """
        cleaned = {m: _as_fraction(c) for m, c in (terms or {}).items() if c != 0}
        self._terms: Mapping[Monomial, Fraction] = MappingProxyType(cleaned)
        self._hash: int | None = None

    # construction

    @classmethod
    def zero(cls) -> DiffPoly:
        """Return the zero polynomial."""
        return cls()

    @classmethod
    def constant(cls, value: Scalar | str) -> DiffPoly:
        """Return the constant polynomial ``value``."""
        return cls({ONE: _as_fraction(value)})

    @classmethod
    def variable(cls, order: int) -> DiffPoly:
        """Return the jet variable ``u_order``."""
        return cls({Monomial.variable(order): 1})

    @classmethod
    def parse(cls, text: str) -> DiffPoly:
        """Parse the text grammar described in the module docstring."""
        return _Parser(text).parse()

    @classmethod
    def from_json(cls, document: Iterable[Mapping[str, Any]]) -> DiffPoly:
        """Rebuild a polynomial from :meth:`to_json` output."""
        terms: dict[Monomial, Fraction] = {}
        for item in document:
            mono = Monomial.from_mapping({int(j): int(e) for j, e in item["exponents"].items()})
            terms[mono] = terms.get(mono, Fraction(0)) + Fraction(item["coeff"])
        return cls(terms)

    # inspection

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        """Read-only view of the term map."""
        return self._terms

    @property
    def is_zero(self) -> bool:
        """True for the zero polynomial."""
        return not self._terms

    @property
    def degree(self) -> int:
        """Total degree, -1 for the zero polynomial."""
        return max((m.degree for m in self._terms), default=-1)

    @property
    def order(self) -> int:
        """Highest jet order present, -1 when the polynomial is constant."""
        return max((m.order for m in self._terms), default=-1)

    @property
    def constant_term(self) -> Fraction:
        """Value of the polynomial at u = 0."""
        return self._terms.get(ONE, Fraction(0))

    def without_constant(self) -> DiffPoly:
        """Return the polynomial with its constant term removed."""
        return DiffPoly({m: c for m, c in self._terms.items() if m != ONE})

    def homogeneous_part(self, degree: int) -> DiffPoly:
        """Return the terms of the given total degree."""
        return DiffPoly({m: c for m, c in self._terms.items() if m.degree == degree})

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in canonical (graded, descending) order."""
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key, reverse=True)

    def partial(self, order: int) -> DiffPoly:
        """Partial derivative with respect to ``u_order``."""
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            e = mono.exponent(order)
            if e:
                key = mono.shifted(order, -1)
                out[key] = out.get(key, Fraction(0)) + coeff * e
        return DiffPoly(out)

    def antiderivative(self, order: int) -> DiffPoly:
        """Antiderivative with respect to ``u_order`` with no added constant."""
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            e = mono.exponent(order)
            out[mono.shifted(order, 1)] = coeff / (e + 1)
        return DiffPoly(out)

    # ring structure

    def __add__(self, other: DiffPoly | Scalar) -> DiffPoly:
        """Add a polynomial or a scalar."""
        other = _coerce(other)
        merged = dict(self._terms)
        for mono, coeff in other._terms.items():
            merged[mono] = merged.get(mono, Fraction(0)) + coeff
        return DiffPoly(merged)

    __radd__ = __add__

    def __neg__(self) -> DiffPoly:
        """Negate."""
        return DiffPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: DiffPoly | Scalar) -> DiffPoly:
        """Subtract a polynomial or a scalar."""
        return self + (-_coerce(other))

    def __rsub__(self, other: Scalar) -> DiffPoly:
        """Subtract from a scalar."""
        return _coerce(other) - self

    def __mul__(self, other: DiffPoly | Scalar) -> DiffPoly:
        """Multiply by a polynomial or a rational scalar."""
        if not isinstance(other, DiffPoly):
            factor = _as_fraction(other)
            return DiffPoly({m: c * factor for m, c in self._terms.items()})
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                key = m1 * m2
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return DiffPoly(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> DiffPoly:
        """Raise to a non-negative integer power."""
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")  # noqa: TRY003
        result = DiffPoly.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        """Compare term maps; scalars compare as constant polynomials."""
        if isinstance(other, int | Fraction):
            other = DiffPoly.constant(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return dict(self._terms) == dict(other._terms)

    def __hash__(self) -> int:
        """Hash of the canonical term set."""
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        """True unless the polynomial is zero."""
        return not self.is_zero

    # rendering

    def __str__(self) -> str:
        """Render in the text grammar, e.g. ``10*u0^3 + 10*u0*u2 + 5*u1^2 + u4``."""
        if self.is_zero:
            return "0"
        pieces: list[str] = []
        for index, (mono, coeff) in enumerate(self.sorted_terms()):
            sign = "-" if coeff < 0 else "+"
            magnitude = abs(coeff)
            if mono == ONE:
                body = str(magnitude)
            elif magnitude == 1:
                body = str(mono)
            else:
                body = f"{magnitude}*{mono}"
            if index == 0:
                pieces.append(f"-{body}" if sign == "-" else body)
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        """Developer representation."""
        return f"DiffPoly({str(self)!r})"

    def to_json(self) -> list[dict[str, Any]]:
        """Serialize as a list of ``{"coeff": "p/q", "exponents": {"j": e}}`` in canonical order."""
        return [
            {"coeff": str(coeff), "exponents": {str(j): e for j, e in mono.exponents}}
            for mono, coeff in self.sorted_terms()
        ]

    # numerics

    def evaluate(self, jet: Sequence[JetValue]) -> JetValue:
        """Evaluate at a jet ``(u0, u1, ..., u_h)``; see :func:`evaluate`."""
        return evaluate(self, jet)


def _coerce(value: DiffPoly | Scalar) -> DiffPoly:
    if isinstance(value, DiffPoly):
        return value
    return DiffPoly.constant(value)


def jet_variable(order: int) -> DiffPoly:
    """Return ``u_order`` as a polynomial (shorthand for :meth:`DiffPoly.variable`)."""
    return DiffPoly.variable(order)


# ring operations


def add(a: DiffPoly, b: DiffPoly) -> DiffPoly:
    """Return ``a + b``."""
    return a + b


def mul(a: DiffPoly, b: DiffPoly) -> DiffPoly:
    """Return ``a * b``."""
    return a * b


def scale(a: DiffPoly, r: Scalar | str) -> DiffPoly:
    """Return ``r * a`` for a rational ``r``."""
    return a * _as_fraction(r)


# variational calculus


def total_derivative(w: DiffPoly, times: int = 1) -> DiffPoly:
    """Apply the total derivative ``D = sum_p u_{p+1} d/du_p`` ``times`` times.

    Examples:
        >>> str(total_derivative(DiffPoly.parse("u0*u1")))
        'u0*u2 + u1^2'

    """
    result = w
    for _ in range(times):
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in result.terms.items():
            for j, e in mono.exponents:
                key = mono.shifted(j, -1).shifted(j + 1, 1)
                out[key] = out.get(key, Fraction(0)) + coeff * e
        result = DiffPoly(out)
    return result


def euler_operator(w: DiffPoly) -> DiffPoly:
    """Return ``E(w) = sum_l (-1)^l D^l (dw/du_l)``.

    Examples:
        >>> str(euler_operator(DiffPoly.parse("u1^2")))
        '-2*u2'

    """
    result = DiffPoly.zero()
    for order in range(w.order + 1):
        term = total_derivative(w.partial(order), order)
        result = result + term if order % 2 == 0 else result - term
    return result


def is_total_derivative(w: DiffPoly) -> bool:
    """Return True iff ``E(w) == 0``."""
    return euler_operator(w).is_zero


def equal_mod_D(a: DiffPoly, b: DiffPoly) -> bool:  # noqa: N802
    """Return True iff ``a - b`` is a total derivative."""
    return is_total_derivative(a - b)


def primitive(w: DiffPoly) -> DiffPoly:
    """Return the primitive ``p`` of ``w`` with ``D(p) = w`` and ``p(0) = 0``.

    The highest jet variable is eliminated by integration by parts: writing
    ``w = A * u_m + B`` with ``A, B`` of order below ``m``, the antiderivative
    ``Q`` of ``A`` in ``u_{m-1}`` satisfies ``w - D(Q)`` of order below ``m``.

    Args:
        w: A density with ``E(w) = 0``.

    Returns:
        The unique primitive vanishing at u = 0.

    Raises:
        NotExactError: If ``E(w) != 0``, or if ``w`` has a nonzero constant
            term, which is ``D(c*s)`` and has no s-autonomous primitive.

    Examples:
        >>> str(primitive(DiffPoly.parse("u3 + 6*u0*u1")))
        '3*u0^2 + u2'

    """
    if not is_total_derivative(w):
        raise NotExactError(str(w))

    result = DiffPoly.zero()
    rest = w
    while not rest.is_zero:
        top = rest.order
        if top <= 0:
            raise NotExactError(str(w), reason="constant remainder has no s-autonomous primitive")
        coefficient = rest.partial(top)
        if coefficient.order == top:
            raise NotExactError(str(w), reason=f"nonlinear in u{top}")
        piece = coefficient.antiderivative(top - 1)
        result = result + piece
        rest = rest - total_derivative(piece)
    return result


def apply_script_D(w: DiffPoly) -> DiffPoly:  # noqa: N802
    """Apply the Lenard operator ``D^3 + 4 u0 D + 2 u1``.

    Examples:
        >>> str(apply_script_D(DiffPoly.parse("u0")))
        '6*u0*u1 + u3'

    """
    u0, u1 = jet_variable(0), jet_variable(1)
    dw = total_derivative(w)
    return total_derivative(dw, 2) + 4 * u0 * dw + 2 * u1 * w


def potential_from_gradient(g: DiffPoly) -> DiffPoly:
    """Reconstruct a density from its variational gradient.

    The homotopy formula ``p = int_0^1 g[eps*u] * u0 d eps`` is integrated
    term by term: a monomial of degree ``d`` in ``g`` contributes
    ``coeff/(d+1)`` times the monomial multiplied by ``u0``. The result has
    no constant term.

    Raises:
        NotGradientError: If ``E(p) != g``.

    Examples:
        >>> str(potential_from_gradient(DiffPoly.parse("3*u0^2 + u2")))
        'u0^3 + 1/2*u0*u2'

    """
    u0 = Monomial.variable(0)
    density = DiffPoly({mono * u0: coeff / (mono.degree + 1) for mono, coeff in g.terms.items()})
    if euler_operator(density) != g:
        raise NotGradientError(str(g))
    return density


def evaluate(w: DiffPoly, jet: Sequence[JetValue]) -> JetValue:
    """Evaluate ``w`` at a jet; entries may be floats or equally shaped arrays.

    Args:
        w: The polynomial.
        jet: Values ``(u0, u1, ..., u_h)`` with ``h >= w.order``.

    Returns:
        The numeric value (an array when the jet entries are arrays).

    Raises:
        JetTooShortError: If the jet has fewer than ``w.order + 1`` entries.

    Examples:
        >>> evaluate(DiffPoly.parse("3*u0^2 + u2"), [2, 0, 1])
        13.0

    """
    if w.order >= len(jet):
        raise JetTooShortError(w.order, len(jet))
    values = [np.asarray(v, dtype=float) for v in jet[: w.order + 1]]
    total: Any = 0.0
    for mono, coeff in w.terms.items():
        term: Any = float(coeff)
        for j, e in mono.exponents:
            term = term * values[j] ** e
        total = total + term
    if isinstance(total, np.ndarray) and total.ndim == 0:
        return float(total)
    if not isinstance(total, np.ndarray):
        return float(total)
    return total


def render(w: DiffPoly) -> str:
    """Render ``w`` in the text grammar."""
    return str(w)


def parse(text: str) -> DiffPoly:
    """Parse ``text`` in the text grammar."""
    return DiffPoly.parse(text)


_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d+)?(?:/\d+)?)|(?P<var>u(?P<order>\d+))|(?P<op>[-+*^]))",
)


class _Parser:
    """Recursive-descent parser for the polynomial text grammar."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = list(self._tokenize())
        self.index = 0

    def _tokenize(self) -> Iterator[tuple[str, str, int]]:
        position = 0
        stripped = self.text.rstrip()
        while position < len(stripped):
            match = _TOKEN.match(stripped, position)
            if match is None or match.end() == position:
                raise PolynomialParseError(self.text, position, "unexpected character")
            if match.group("var"):
                yield ("var", match.group("order"), match.start("var"))
            elif match.group("number"):
                yield ("number", match.group("number"), match.start("number"))
            else:
                yield ("op", match.group("op"), match.start("op"))
            position = match.end()

    def _peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _take(self) -> tuple[str, str, int]:
        token = self._peek()
        if token is None:
            raise PolynomialParseError(self.text, len(self.text), "unexpected end of input")
        self.index += 1
        return token

    def parse(self) -> DiffPoly:
        if not self.tokens:
            raise PolynomialParseError(self.text, 0, "empty polynomial")
        total = DiffPoly.zero()
        sign = 1
        token = self._peek()
        if token is not None and token[0] == "op" and token[1] in "+-":
            sign = -1 if self._take()[1] == "-" else 1
        total = total + sign * self._term()
        while (token := self._peek()) is not None:
            if token[0] != "op" or token[1] not in "+-":
                raise PolynomialParseError(self.text, token[2], "expected '+' or '-'")
            sign = -1 if self._take()[1] == "-" else 1
            total = total + sign * self._term()
        return total

    def _coefficient(self, value: str, position: int) -> Fraction:
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as e:
            raise PolynomialParseError(self.text, position, f"invalid coefficient {value!r}") from e

    def _term(self) -> DiffPoly:
        coeff = Fraction(1)
        exponents: dict[int, int] = {}
        kind, value, position = self._take()
        if kind == "number":
            coeff = self._coefficient(value, position)
            token = self._peek()
            if token is None or token[1] != "*":
                return DiffPoly.constant(coeff)
            self._take()
            kind, value, position = self._take()
        while True:
            if kind != "var":
                raise PolynomialParseError(self.text, position, "expected a factor 'u<order>'")
            power = 1
            token = self._peek()
            if token is not None and token[1] == "^":
                self._take()
                kind_e, value_e, position_e = self._take()
                if kind_e != "number" or not value_e.isdigit():
                    raise PolynomialParseError(self.text, position_e, "expected an integer exponent")
                power = int(value_e)
            exponents[int(value)] = exponents.get(int(value), 0) + power
            token = self._peek()
            if token is None or token[1] != "*":
                break
            self._take()
            kind, value, position = self._take()
        return DiffPoly({Monomial.from_mapping(exponents): coeff})
