"""Scalar coefficient fields with optional analytic partial derivatives.

Every differential-form coefficient, metric entry, and vector-field component
in this package is a :class:`ScalarField`: a vectorized map from points of
shape (N, dim) to values of shape (N,).  A field may know its own partial
derivatives (again as ScalarFields, lazily built and cached), in which case
exterior derivatives downstream come out at round-off accuracy; otherwise the
form operations fall back to chart-aware finite differences.

Sums, products, quotients, and negation propagate analytic partials through
the usual calculus rules, so composite quantities (Hodge duals, interior
products, Reeb normalizations) stay analytic whenever their ingredients are.
"""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

ValueFn = Callable[[np.ndarray], np.ndarray]
# maker(axis) -> ScalarField for d/dx_axis, or None if unavailable
PartialMaker = Callable[[int], Optional["ScalarField"]]


class ScalarField:
    """A pointwise scalar with value function and optional partials."""

    __slots__ = ("fn", "partial_maker", "const", "_partial_cache")

    def __init__(self, fn: ValueFn, partial_maker: PartialMaker | None = None,
                 const: float | None = None):
        self.fn = fn
        self.partial_maker = partial_maker
        self.const = const
        self._partial_cache: dict[int, ScalarField | None] = {}

    # -- evaluation ------------------------------------------------------

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        if self.const is not None:
            return np.full(pts.shape[:-1], self.const)
        out = self.fn(pts)
        return np.broadcast_to(np.asarray(out, dtype=float), pts.shape[:-1])

    # -- analytic structure ------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.const == 0.0

    @property
    def has_partials(self) -> bool:
        return self.const is not None or self.partial_maker is not None

    def partial(self, axis: int) -> Optional["ScalarField"]:
        """Analytic d(self)/dx_axis as a ScalarField, or None if unknown."""
        if self.const is not None:
            return ZERO
        if self.partial_maker is None:
            return None
        if axis not in self._partial_cache:
            self._partial_cache[axis] = self.partial_maker(axis)
        return self._partial_cache[axis]

    # -- algebra -----------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.const is not None and other.const is not None:
            return constant(self.const + other.const)
        a, b = self, other

        def maker(axis):
            pa, pb = a.partial(axis), b.partial(axis)
            if pa is None or pb is None:
                return None
            return pa + pb

        if not (a.has_partials and b.has_partials):
            maker = None
        return ScalarField(lambda pts: a(pts) + b(pts), maker)

    __radd__ = __add__

    def __neg__(self):
        if self.const is not None:
            return constant(-self.const)
        a = self

        def maker(axis):
            pa = a.partial(axis)
            return None if pa is None else -pa

        return ScalarField(lambda pts: -a(pts), maker if a.has_partials else None)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return ZERO
        if self.const is not None and other.const is not None:
            return constant(self.const * other.const)
        if self.const == 1.0:
            return other
        if other.const == 1.0:
            return self
        a, b = self, other

        def maker(axis):
            pa, pb = a.partial(axis), b.partial(axis)
            if pa is None or pb is None:
                return None
            return pa * b + a * pb

        if not (a.has_partials and b.has_partials):
            maker = None
        return ScalarField(lambda pts: a(pts) * b(pts), maker)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.const is not None:
            return self * (1.0 / other.const)
        if self.is_zero:
            return ZERO
        a, b = self, other

        def maker(axis):
            pa, pb = a.partial(axis), b.partial(axis)
            if pa is None or pb is None:
                return None
            return (pa * b - a * pb) / (b * b)

        if not (a.has_partials and b.has_partials):
            maker = None
        return ScalarField(lambda pts: a(pts) / b(pts), maker)


def _coerce(x):
    if isinstance(x, ScalarField):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return constant(float(x))
    return NotImplemented


def constant(c: float) -> ScalarField:
    c = float(c)
    return ScalarField(lambda pts: np.full(pts.shape[:-1], c), None, const=c)


ZERO = constant(0.0)
ONE = constant(1.0)


def from_function(fn: ValueFn) -> ScalarField:
    """Wrap a plain numeric function; derivatives fall back to finite differences."""
    return ScalarField(fn, None)


def wave(coeffs: dict[int, float], phase: float = 0.0, amplitude: float = 1.0) -> ScalarField:
    """amplitude * cos(sum_a coeffs[a] * x_a + phase).

    Closed under differentiation (each partial is another wave), so these
    fields carry exact partials to every order.  ``sin`` is the phase shift
    -pi/2: sin(u) = cos(u - pi/2).
    """
    coeffs = {int(a): float(c) for a, c in coeffs.items() if c != 0.0}
    amplitude = float(amplitude)
    phase = float(phase)
    if amplitude == 0.0:
        return ZERO

    def value(pts):
        u = np.full(pts.shape[:-1], phase)
        for a, c in coeffs.items():
            u = u + c * pts[..., a]
        return amplitude * np.cos(u)

    def maker(axis):
        c = coeffs.get(axis, 0.0)
        if c == 0.0:
            return ZERO
        return wave(coeffs, phase + 0.5 * math.pi, amplitude * c)

    return ScalarField(value, maker)


def sin_wave(coeffs: dict[int, float], phase: float = 0.0, amplitude: float = 1.0) -> ScalarField:
    return wave(coeffs, phase - 0.5 * math.pi, amplitude)


def monomial(axis: int, power: int = 1, amplitude: float = 1.0) -> ScalarField:
    """amplitude * x_axis**power, with exact partials (power may be negative)."""
    axis = int(axis)
    power = int(power)
    amplitude = float(amplitude)
    if amplitude == 0.0:
        return ZERO
    if power == 0:
        return constant(amplitude)

    def value(pts):
        return amplitude * pts[..., axis] ** power

    def maker(ax):
        if ax != axis:
            return ZERO
        return monomial(axis, power - 1, amplitude * power)

    return ScalarField(value, maker)


def coordinate(axis: int) -> ScalarField:
    return monomial(axis, 1, 1.0)


def lift_spatial(sf: ScalarField) -> ScalarField:
    """View a 3-d field as a field on the spacetime chart (x0 prepended).

    The lifted field is x0-independent; spatial partials shift by one axis.
    """
    if sf.const is not None:
        return sf

    def value(pts):
        return sf(pts[..., 1:])

    def maker(axis):
        if axis == 0:
            return ZERO
        p = sf.partial(axis - 1)
        return None if p is None else lift_spatial(p)

    return ScalarField(value, maker if sf.has_partials else None)


def restrict_time(sf: ScalarField, x0: float) -> ScalarField:
    """Freeze the x0 coordinate of a spacetime field, yielding a 3-d field."""
    if sf.const is not None:
        return sf
    x0 = float(x0)

    def value(pts):
        full = np.concatenate(
            [np.full(pts.shape[:-1] + (1,), x0), pts], axis=-1)
        return sf(full)

    def maker(axis):
        p = sf.partial(axis + 1)
        return None if p is None else restrict_time(p, x0)

    return ScalarField(value, maker if sf.has_partials else None)
