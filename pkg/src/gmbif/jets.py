"""Truncated bivariate power series (jets) and planar vector-field transforms.

A :class:`Jet2` of order N stores sum c_ij x^i y^j over i + j <= N.  Products
and compositions are truncated at N.  On top of that sit coordinate changes
(:func:`substitute`), time reparametrisations (:func:`time_rescale`),
re-centring (:func:`translate`) and the Lienard reduction used by the
normal-form pipelines.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import DomainError, JetError
from .model import Params, State

MAX_ORDER = 8
DEFAULT_ORDER = 5

_MASKS: dict[int, np.ndarray] = {}


def _mask(order: int) -> np.ndarray:
    m = _MASKS.get(order)
    if m is None:
        idx = np.arange(order + 1)
        m = np.add.outer(idx, idx) <= order
        m.setflags(write=False)
        _MASKS[order] = m
    return m


def _mul_grid(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Truncated product of two coefficient grids of order n."""
    out = np.zeros_like(a)
    for i, j in zip(*np.nonzero(a)):
        if i + j > n:
            continue
        out[i:, j:] += a[i, j] * b[: n + 1 - i, : n + 1 - j]
    out[~_mask(n)] = 0.0
    return out


def monomials(order: int) -> list[tuple[int, int]]:
    """Monomial exponents (i, j) in storage order: by total degree, x-power descending."""
    return [(i, k - i) for k in range(order + 1) for i in range(k, -1, -1)]


def _check_order(order: int) -> int:
    if not isinstance(order, (int, np.integer)) or not 0 <= order <= MAX_ORDER:
        raise JetError(f"jet order must be an integer in [0, {MAX_ORDER}], got {order!r}")
    return int(order)


class Jet2:
    """Immutable truncated series in two variables."""

    __slots__ = ("order", "_g")

    def __init__(self, order: int, grid: np.ndarray | None = None):
        order = _check_order(order)
        if grid is None:
            g = np.zeros((order + 1, order + 1))
        else:
            g = np.array(grid, dtype=float)
            if g.shape != (order + 1, order + 1):
                raise JetError(f"grid shape {g.shape} does not match order {order}")
            g = np.where(_mask(order), g, 0.0)
        g.setflags(write=False)
        self.order = order
        self._g = g

    @classmethod
    def _wrap(cls, order: int, g: np.ndarray) -> Jet2:
        # internal: g is already masked and owned by the new jet
        obj = object.__new__(cls)
        g.setflags(write=False)
        obj.order = order
        obj._g = g
        return obj

    # constructors -------------------------------------------------------
    @classmethod
    def zeros(cls, order: int = DEFAULT_ORDER) -> Jet2:
        return cls(order)

    @classmethod
    def constant(cls, value: float, order: int = DEFAULT_ORDER) -> Jet2:
        g = np.zeros((order + 1, order + 1))
        g[0, 0] = value
        return cls(order, g)

    @classmethod
    def var(cls, which: int, order: int = DEFAULT_ORDER) -> Jet2:
        """The coordinate jet x (which=0) or y (which=1)."""
        g = np.zeros((order + 1, order + 1))
        if order >= 1:
            g[(1, 0) if which == 0 else (0, 1)] = 1.0
        return cls(order, g)

    @classmethod
    def from_dict(cls, terms: Mapping[tuple[int, int], float], order: int = DEFAULT_ORDER) -> Jet2:
        g = np.zeros((order + 1, order + 1))
        for (i, j), val in terms.items():
            if i < 0 or j < 0:
                raise JetError("negative exponent")
            if i + j <= order:
                g[i, j] += val
        return cls(order, g)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[float], order: int = DEFAULT_ORDER) -> Jet2:
        vals = np.asarray(list(coeffs), dtype=float)
        mons = monomials(order)
        if vals.shape != (len(mons),):
            raise JetError(f"expected {len(mons)} coefficients for order {order}")
        g = np.zeros((order + 1, order + 1))
        for (i, j), val in zip(mons, vals):
            g[i, j] = val
        return cls(order, g)

    # access -------------------------------------------------------------
    @property
    def coeffs(self) -> np.ndarray:
        """Dense triangular coefficient vector, length (N+1)(N+2)/2."""
        return np.array([self._g[m] for m in monomials(self.order)])

    @property
    def grid(self) -> np.ndarray:
        return self._g

    def __getitem__(self, ij: tuple[int, int]) -> float:
        i, j = ij
        if i < 0 or j < 0 or i + j > self.order:
            return 0.0
        return float(self._g[i, j])

    def const(self) -> float:
        return float(self._g[0, 0])

    def to_dict(self, atol: float = 0.0) -> dict[tuple[int, int], float]:
        return {m: float(self._g[m]) for m in monomials(self.order) if abs(self._g[m]) > atol}

    def degree_part(self, k: int) -> Jet2:
        g = np.zeros_like(self._g)
        for i in range(k + 1):
            if i <= self.order and k - i <= self.order and k <= self.order:
                g[i, k - i] = self._g[i, k - i]
        return Jet2(self.order, g)

    def without_constant(self) -> Jet2:
        g = self._g.copy()
        g[0, 0] = 0.0
        return Jet2(self.order, g)

    def truncate(self, order: int) -> Jet2:
        order = _check_order(order)
        g = np.zeros((order + 1, order + 1))
        n = min(order, self.order) + 1
        g[:n, :n] = self._g[:n, :n]
        return Jet2(order, g)

    def scale_magnitude(self, degree: int) -> float:
        return max((abs(self[i, degree - i]) for i in range(degree + 1)), default=0.0)

    def allclose(self, other: Jet2, rtol: float = 1e-12, atol: float = 1e-12) -> bool:
        self._same(other)
        return bool(np.allclose(self._g, other._g, rtol=rtol, atol=atol))

    def evaluate(self, x: float, y: float) -> float:
        xs = x ** np.arange(self.order + 1)
        ys = y ** np.arange(self.order + 1)
        return float(xs @ self._g @ ys)

    # arithmetic ---------------------------------------------------------
    def _same(self, other: Jet2) -> None:
        if not isinstance(other, Jet2):
            raise JetError(f"expected Jet2, got {type(other).__name__}")
        if other.order != self.order:
            raise JetError(f"order mismatch: {self.order} vs {other.order}")

    def _coerce(self, other: object) -> Jet2:
        if isinstance(other, Jet2):
            self._same(other)
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Jet2.constant(float(other), self.order)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> Jet2:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Jet2(self.order, self._g + o._g)

    __radd__ = __add__

    def __sub__(self, other: object) -> Jet2:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Jet2(self.order, self._g - o._g)

    def __rsub__(self, other: object) -> Jet2:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Jet2(self.order, o._g - self._g)

    def __neg__(self) -> Jet2:
        return Jet2(self.order, -self._g)

    def __mul__(self, other: object) -> Jet2:
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Jet2(self.order, self._g * float(other))
        if not isinstance(other, Jet2):
            return NotImplemented
        self._same(other)
        return Jet2._wrap(self.order, _mul_grid(self._g, other._g, self.order))

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> Jet2:
        if isinstance(other, Jet2):
            return self * other.reciprocal()
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Jet2(self.order, self._g / float(other))
        return NotImplemented

    def __rtruediv__(self, other: object) -> Jet2:
        return self.reciprocal() * other

    def __pow__(self, k: int) -> Jet2:
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise JetError("only non-negative integer powers are supported")
        out = Jet2.constant(1.0, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def reciprocal(self) -> Jet2:
        """1/a as a geometric series in the non-constant part."""
        a0 = self._g[0, 0]
        if a0 == 0.0:
            raise JetError("reciprocal of a jet with zero constant term")
        h = self.without_constant() * (1.0 / a0)
        out = Jet2.constant(1.0, self.order)
        term = Jet2.constant(1.0, self.order)
        for _ in range(self.order):
            term = term * (-h)
            out = out + term
        return out * (1.0 / a0)

    def deriv(self, which: int) -> Jet2:
        """Partial derivative in x (0) or y (1); the top-degree part is lost."""
        n = self.order
        g = np.zeros_like(self._g)
        k = np.arange(1, n + 1, dtype=float)
        if which == 0:
            g[:n, :] = self._g[1:, :] * k[:, None]
        else:
            g[:, :n] = self._g[:, 1:] * k[None, :]
        return Jet2(n, g)

    def compose(self, g1: Jet2, g2: Jet2) -> Jet2:
        """self(g1, g2) by nested Horner evaluation, truncated at the argument order.

        Arguments may carry constant terms; the result is then the truncated
        expansion of the polynomial self(g1, g2).
        """
        g1._same(g2)
        n = g1.order
        a = self._g
        m = self.order
        # powers of g2, then Horner in g1 over the rows of a
        pw = [np.zeros((n + 1, n + 1))]
        pw[0][0, 0] = 1.0
        for _ in range(m):
            pw.append(_mul_grid(pw[-1], g2._g, n))
        p2 = np.array(pw)
        out = np.zeros((n + 1, n + 1))
        for i in range(m, -1, -1):
            inner = np.tensordot(a[i, : m + 1 - i], p2[: m + 1 - i], axes=1)
            out = _mul_grid(out, g1._g, n) + inner
        return Jet2(n, out)

    def __repr__(self) -> str:
        terms = " + ".join(f"{v:.6g}*x^{i}y^{j}" for (i, j), v in self.to_dict().items())
        return f"Jet2(order={self.order}, {terms or '0'})"


@dataclass(frozen=True)
class PlanarJetField:
    """Vector field (xdot, ydot) expanded about the origin."""

    fx: Jet2
    fy: Jet2

    def __post_init__(self) -> None:
        if self.fx.order != self.fy.order:
            raise JetError("field components must share one order")

    @property
    def order(self) -> int:
        return self.fx.order

    def linear_part(self) -> np.ndarray:
        return np.array([[self.fx[1, 0], self.fx[0, 1]], [self.fy[1, 0], self.fy[0, 1]]])

    def table(self, atol: float = 0.0) -> dict[str, dict[tuple[int, int], float]]:
        return {"x": self.fx.to_dict(atol), "y": self.fy.to_dict(atol)}

    def truncate(self, order: int) -> PlanarJetField:
        return PlanarJetField(self.fx.truncate(order), self.fy.truncate(order))

    def evaluate(self, x: float, y: float) -> tuple[float, float]:
        return self.fx.evaluate(x, y), self.fy.evaluate(x, y)

    def allclose(self, other: PlanarJetField, rtol: float = 1e-12, atol: float = 1e-12) -> bool:
        return self.fx.allclose(other.fx, rtol, atol) and self.fy.allclose(other.fy, rtol, atol)


Transform = tuple[Jet2, Jet2]


def identity(order: int = DEFAULT_ORDER) -> Transform:
    return Jet2.var(0, order), Jet2.var(1, order)


def expand_gm_field(params: Params, center: State | tuple[float, float], order: int = DEFAULT_ORDER) -> PlanarJetField:
    """Taylor expansion of the model field about ``center``.

    Built from jets of u and v, with 1/v expanded as a series; constant terms
    are kept, so off-equilibrium centres are allowed.
    """
    u0, v0 = center
    if not v0 > 0.0:
        raise DomainError(f"expansion centre needs v > 0, got {v0!r}")
    u = Jet2.var(0, order) + u0
    v = Jet2.var(1, order) + v0
    fx = params.c * (params.beta * (u * u) * v.reciprocal() - u)
    fy = params.b + u * u - params.d * v
    return PlanarJetField(fx, fy)


def _origin_fixing(t: Transform, atol: float = 1e-14) -> None:
    for comp in t:
        if abs(comp.const()) > atol:
            raise JetError("transform must fix the origin (zero constant terms)")


def substitute(field: PlanarJetField, transform: Transform) -> PlanarJetField:
    """Rewrite the field in new coordinates z, where old = transform(z).

    New field = (DT)^-1 F(T(z)); the inverse Jacobian is the adjugate over
    the determinant series.
    """
    t1, t2 = transform
    if t1.order != field.order or t2.order != field.order:
        raise JetError("transform order must match field order")
    _origin_fixing(transform)
    lin = np.array([[t1[1, 0], t1[0, 1]], [t2[1, 0], t2[0, 1]]])
    if abs(np.linalg.det(lin)) < 1e-300:
        raise JetError("transform has a singular linear part")
    g1 = field.fx.compose(t1, t2)
    g2 = field.fy.compose(t1, t2)
    a, b = t1.deriv(0), t1.deriv(1)
    c, d = t2.deriv(0), t2.deriv(1)
    inv_det = (a * d - b * c).reciprocal()
    return PlanarJetField((d * g1 - b * g2) * inv_det, (a * g2 - c * g1) * inv_det)


def compose_transforms(outer: Transform, inner: Transform) -> Transform:
    """outer(inner(z)) componentwise."""
    return outer[0].compose(*inner), outer[1].compose(*inner)


def invert_transform(transform: Transform) -> Transform:
    """Inverse of an origin-fixing transform with invertible linear part.

    Fixed-point iteration S <- L^-1 (z - N(S)), exact after ``order`` sweeps.
    """
    t1, t2 = transform
    _origin_fixing(transform)
    n = t1.order
    lin = np.array([[t1[1, 0], t1[0, 1]], [t2[1, 0], t2[0, 1]]])
    if abs(np.linalg.det(lin)) < 1e-300:
        raise JetError("transform has a singular linear part")
    li = np.linalg.inv(lin)
    x, y = identity(n)
    n1 = t1 - (lin[0, 0] * x + lin[0, 1] * y)
    n2 = t2 - (lin[1, 0] * x + lin[1, 1] * y)
    s1, s2 = li[0, 0] * x + li[0, 1] * y, li[1, 0] * x + li[1, 1] * y
    for _ in range(n + 1):
        r1 = x - n1.compose(s1, s2)
        r2 = y - n2.compose(s1, s2)
        s1 = li[0, 0] * r1 + li[0, 1] * r2
        s2 = li[1, 0] * r1 + li[1, 1] * r2
    return s1, s2


def push_forward(field: PlanarJetField, new_of_old: Transform) -> PlanarJetField:
    """Field in coordinates z = new_of_old(old)."""
    return substitute(field, invert_transform(new_of_old))


def time_rescale(field: PlanarJetField, factor: Jet2 | float) -> PlanarJetField:
    """Multiply the field by ``factor`` = dt/dtau (orbits unchanged when factor > 0)."""
    if not isinstance(factor, Jet2):
        factor = Jet2.constant(float(factor), field.order)
    if factor.const() == 0.0:
        raise JetError("time rescaling factor needs a nonzero constant term")
    return PlanarJetField(field.fx * factor, field.fy * factor)


def translate(field: PlanarJetField, shift: tuple[float, float]) -> PlanarJetField:
    """Re-expand about ``shift``: G(z) = F(z + shift) (exact on the truncated polynomial)."""
    x, y = identity(field.order)
    g1, g2 = x + shift[0], y + shift[1]
    return PlanarJetField(field.fx.compose(g1, g2), field.fy.compose(g1, g2))


def lienard_form(field: PlanarJetField, variant: str = "exact", max_iter: int = 200) -> PlanarJetField:
    """Reduce to xdot = y, ydot = G(x, y) via (x, y) -> (x, xdot).

    ``exact``: y_new is the whole first component and the old y is recovered
    from it by fixed-point iteration (constant terms allowed, in which case
    truncation is lossy beyond the working order).  ``truncated``: y_new is
    the first component truncated at degree 2, a near-identity change that
    does not make xdot equal to y exactly.
    """
    fx, fy = field.fx, field.fy
    n = field.order
    a01 = fx[0, 1]
    if a01 == 0.0:
        raise JetError("Lienard reduction needs a nonzero y coefficient in xdot")
    x, y = identity(n)
    if variant == "truncated":
        keep = {m: v for m, v in fx.to_dict().items() if sum(m) <= 2}
        return push_forward(field, (x, Jet2.from_dict(keep, n)))
    if variant != "exact":
        raise JetError(f"unknown Lienard variant {variant!r}")
    rest = fx - a01 * y
    q = (y - rest.compose(x, y * 0.0)) / a01
    for _ in range(max_iter):
        nxt = (y - rest.compose(x, q)) / a01
        if np.allclose(nxt.grid, q.grid, rtol=0.0, atol=1e-15 * max(1.0, np.abs(q.grid).max())):
            q = nxt
            break
        q = nxt
    ydot = fx.deriv(0) * fx + fx.deriv(1) * fy
    return PlanarJetField(y, ydot.compose(x, q))
