"""Vector fields, quadratic differentials, the beta map, and PDE residuals.

Conventions, fixed once here and used by every other module:

  * half-plane metric (dx^2 + dy^2)/y^2, disk metric 4(dx^2+dy^2)/(1-|z|^2)^2;
  * beta sends a vector field xi on the half-plane to the coefficient f of
    the quadratic differential f dz^2 through
        conj(f)(z) = -8/(z - zbar)^2 * d(xi)/d(zbar) = (2/y^2) d(xi)/d(zbar);
  * disk-model harmonicity and beta are DEFINED by Cayley transport to the
    half-plane: xi_H(z) = xi_D(C(z))/C'(z) and
    f_D(w) = f_H(Cinv(w)) * (Cinv'(w))^2, with C(z) = (z - i)/(z + i).

Derivatives are central finite differences (two-point first derivatives,
five-point fourth-order second derivatives) with default step
h = 1e-4 * max(1, |z|); closed-form catalog fields carry exact derivative
callables that the same entry points use instead, which is what makes the
stencil-order tests meaningful.
"""

import numpy as np

from .errors import BoundsMissing, DomainViolation, TooCloseToBoundary
from .moebius import cayley, cayley_deriv, cayley_inv, cayley_inv_deriv

HALFPLANE = "halfplane"
DISK = "disk"


def default_step(z):
    return 1e-4 * max(1.0, abs(z))


def metric_factor_sq(model, z):
    """Conformal factor lambda^2: 1/Im(z)^2 on H, 4/(1-|z|^2)^2 on D."""
    if model == HALFPLANE:
        y = z.imag
        if y <= 0:
            raise DomainViolation("half-plane point needs Im z > 0")
        return 1.0 / (y * y)
    r2 = abs(z) ** 2
    if r2 >= 1.0:
        raise DomainViolation("disk point needs |z| < 1")
    return 4.0 / (1.0 - r2) ** 2


class FieldEvaluator(object):
    """Evaluatable vector field: point -> complex tangent vector.

    tag is one of 'closed-form', 'quadrature', 'grid'; exact is an optional
    dict of derivative callables ('dzbar', 'dx', 'dy', 'dxx', 'dyy') used in
    place of finite differences when present.
    """

    __slots__ = ("model", "fn", "tag", "exact")

    def __init__(self, model, fn, tag="quadrature", exact=None):
        self.model = model
        self.fn = fn
        self.tag = tag
        self.exact = exact or {}

    def __call__(self, z):
        return self.fn(z)


class QuadDiff(object):
    """Coefficient f of a quadratic differential q = f dz^2 on one model."""

    __slots__ = ("model", "coeff", "exact", "holomorphic")

    def __init__(self, model, coeff, exact=None, holomorphic=False):
        self.model = model
        self.coeff = coeff
        self.exact = exact or {}
        self.holomorphic = holomorphic

    def __call__(self, z):
        return self.coeff(z)


class BoundsReport(object):
    """Sup of |f| Im^2, |f_z| Im^3, |f_zz| Im^4 over a sample grid."""

    __slots__ = ("D", "K1", "K2")

    def __init__(self, D, K1, K2):
        self.D = float(D)
        self.K1 = float(K1)
        self.K2 = float(K2)

    def __repr__(self):
        return "BoundsReport(D=%g, K1=%g, K2=%g)" % (self.D, self.K1, self.K2)


def field_to_halfplane(xi):
    """Cayley pullback: xi_H(z) = xi_D(C(z)) / C'(z)."""
    if xi.model == HALFPLANE:
        return xi

    def fn(z):
        return xi(cayley(z)) / cayley_deriv(z)

    return FieldEvaluator(HALFPLANE, fn, tag=xi.tag)


def field_to_disk(xi):
    """Cayley pushforward: xi_D(w) = C'(Cinv(w)) * xi_H(Cinv(w))."""
    if xi.model == DISK:
        return xi

    def fn(w):
        z = cayley_inv(w)
        return cayley_deriv(z) * xi(z)

    return FieldEvaluator(DISK, fn, tag=xi.tag)


def qd_to_halfplane(q):
    """f_H(z) = f_D(C(z)) * C'(z)^2."""
    if q.model == HALFPLANE:
        return q

    def coeff(z):
        return q(cayley(z)) * cayley_deriv(z) ** 2

    return QuadDiff(HALFPLANE, coeff, holomorphic=q.holomorphic)


def qd_to_disk(q):
    """f_D(w) = f_H(Cinv(w)) * (Cinv'(w))^2."""
    if q.model == DISK:
        return q

    def coeff(w):
        return q(cayley_inv(w)) * cayley_inv_deriv(w) ** 2

    return QuadDiff(DISK, coeff, holomorphic=q.holomorphic)


def _dzbar_fd(fn, z, h):
    dx = (fn(z + h) - fn(z - h)) / (2.0 * h)
    dy = (fn(z + 1j * h) - fn(z - 1j * h)) / (2.0 * h)
    return 0.5 * (dx + 1j * dy)


def _dz_fd(fn, z, h):
    dx = (fn(z + h) - fn(z - h)) / (2.0 * h)
    dy = (fn(z + 1j * h) - fn(z - 1j * h)) / (2.0 * h)
    return 0.5 * (dx - 1j * dy)


def _second_fd(fn, z, h, direction):
    # five-point fourth-order stencil along the given unit direction
    d = direction * h
    return (-fn(z - 2 * d) + 16 * fn(z - d) - 30 * fn(z)
            + 16 * fn(z + d) - fn(z + 2 * d)) / (12.0 * h * h)


def beta(xi, z, h=None):
    """The quadratic-differential coefficient f with
    conj(f) = (2/y^2) d(xi)/d(zbar) at the half-plane point z.

    For a disk field, z is a disk point and the value is the transported
    coefficient f_D(z); closed-form fields with an exact 'dzbar' skip the
    finite differences entirely.
    """
    z = complex(z)
    if xi.model == DISK:
        w = z
        zh = cayley_inv(w)
        if h is None:
            h = default_step(zh)
        if "dzbar" in xi.exact:
            g = xi.exact["dzbar"](w)
            cp = cayley_deriv(zh)
            fh = (2.0 / zh.imag ** 2) * (cp / np.conj(cp)) * np.conj(g)
        else:
            fh = beta(field_to_halfplane(xi), zh, h)
        return fh * cayley_inv_deriv(w) ** 2
    if h is None:
        h = default_step(z)
    if z.imag <= 2 * h:
        raise TooCloseToBoundary("beta needs Im z > 2h (Im z = %g, h = %g)"
                                 % (z.imag, h))
    if "dzbar" in xi.exact:
        dzbar = xi.exact["dzbar"](z)
    else:
        dzbar = _dzbar_fd(xi.fn, z, h)
    return np.conj((2.0 / z.imag ** 2) * dzbar)


def harmonic_residual(xi, z, h=None):
    """Residual pair (r1, r2) of the half-plane harmonicity equations

        r1 = xi1_xx + xi1_yy - (2/y)(xi2_x + xi1_y)
        r2 = xi2_xx + xi2_yy + (2/y)(xi1_x - xi2_y)

    at the half-plane point z (disk fields are transported first).
    """
    z = complex(z)
    if h is None:
        h = default_step(z)
    if z.imag <= 2 * h:
        raise TooCloseToBoundary("harmonic_residual needs Im z > 2h")
    field = field_to_halfplane(xi)
    ex = field.exact if xi.model == HALFPLANE else {}
    if {"dx", "dy", "dxx", "dyy"} <= set(ex):
        fx, fy = ex["dx"](z), ex["dy"](z)
        fxx, fyy = ex["dxx"](z), ex["dyy"](z)
    else:
        fn = field.fn
        fx = (fn(z + h) - fn(z - h)) / (2.0 * h)
        fy = (fn(z + 1j * h) - fn(z - 1j * h)) / (2.0 * h)
        fxx = _second_fd(fn, z, h, 1.0)
        fyy = _second_fd(fn, z, h, 1j)
    y = z.imag
    r1 = fxx.real + fyy.real - (2.0 / y) * (fx.imag + fy.real)
    r2 = fxx.imag + fyy.imag + (2.0 / y) * (fx.real - fy.imag)
    return r1, r2


def holomorphy_residual(q, z, h=None):
    """|df/dzbar| at an interior point, by central differences."""
    z = complex(z)
    if h is None:
        h = default_step(z)
    if q.model == HALFPLANE and z.imag <= 2 * h:
        raise TooCloseToBoundary("holomorphy_residual needs Im z > 2h")
    if q.model == DISK and abs(z) >= 1.0 - 2 * h:
        raise TooCloseToBoundary("holomorphy_residual needs |z| < 1 - 2h")
    return abs(_dzbar_fd(q, z, h))


def qd_norm(q, z):
    """Pointwise invariant magnitude of q = f dz^2.

    |f| Im(z)^2 on the half-plane, |f| (1-|z|^2)^2/4 on the disk; the two
    agree under Cayley transport.
    """
    z = complex(z)
    if q.model == HALFPLANE:
        return abs(q(z)) * z.imag ** 2
    return abs(q(z)) * (1.0 - abs(z) ** 2) ** 2 / 4.0


def derivative_bounds(q, grid):
    """BoundsReport over a half-plane grid:
    D = max |f| Im^2, K1 = max |f_z| Im^3, K2 = max |f_zz| Im^4.

    Disk differentials are transported to the half-plane first.  Exact
    derivative callables ('fz', 'fzz') are used when the differential
    carries them; otherwise holomorphic central differences with step
    min(default, Im(z)/10).
    """
    qh = qd_to_halfplane(q)
    ex = q.exact if q.model == HALFPLANE else {}
    D = K1 = K2 = 0.0
    for z in grid:
        z = complex(z)
        y = z.imag
        if y <= 0:
            raise DomainViolation("bounds grid must lie in the half-plane")
        f = qh(z)
        if "fz" in ex and "fzz" in ex:
            fz, fzz = ex["fz"](z), ex["fzz"](z)
        else:
            h = min(default_step(z), 0.1 * y)
            fz = _dz_fd(qh.coeff, z, h)
            fzz = (qh(z + h) - 2.0 * f + qh(z - h)) / (h * h)
        D = max(D, abs(f) * y ** 2)
        K1 = max(K1, abs(fz) * y ** 3)
        K2 = max(K2, abs(fzz) * y ** 4)
    return BoundsReport(D, K1, K2)


def beltrami_of(q, z):
    """mu = (z - zbar)^2 conj(f(z)) at a half-plane point."""
    z = complex(z)
    f = qd_to_halfplane(q)(z)
    return (z - np.conj(z)) ** 2 * np.conj(f)


def _exp_field(a, b):
    # xi(z) = exp(a z + b zbar): every derivative is closed form, which
    # pins the empirical order of all stencils against exact values.
    def fn(z):
        return np.exp(a * z + b * np.conj(z))

    return FieldEvaluator(
        HALFPLANE, fn, tag="closed-form",
        exact={
            "dzbar": lambda z: b * fn(z),
            "dx": lambda z: (a + b) * fn(z),
            "dy": lambda z: 1j * (a - b) * fn(z),
            "dxx": lambda z: (a + b) ** 2 * fn(z),
            "dyy": lambda z: -((a - b) ** 2) * fn(z),
        })


def killing_field_halfplane(alpha, beta_, gamma):
    """Real combination alpha + beta z + gamma z^2 (sl(2,R) Killing basis)."""

    def fn(z):
        return alpha + beta_ * z + gamma * z * z

    return FieldEvaluator(
        HALFPLANE, fn, tag="closed-form",
        exact={
            "dzbar": lambda z: 0.0 + 0.0j,
            "dx": lambda z: beta_ + 2.0 * gamma * z,
            "dy": lambda z: 1j * (beta_ + 2.0 * gamma * z),
            "dxx": lambda z: 2.0 * gamma + 0.0j,
            "dyy": lambda z: -2.0 * gamma + 0.0j,
        })


def catalog():
    """Closed-form fields with exact derivatives for stencil-order tests."""
    poly = FieldEvaluator(
        HALFPLANE,
        lambda z: z * z * np.conj(z),
        tag="closed-form",
        exact={
            "dzbar": lambda z: z * z,
            "dx": lambda z: 2.0 * z * np.conj(z) + z * z,
            "dy": lambda z: 2j * z * np.conj(z) - 1j * z * z,
            "dxx": lambda z: 2.0 * np.conj(z) + 4.0 * z,
            "dyy": lambda z: 4.0 * z - 2.0 * np.conj(z),
        })
    return {
        "exp": _exp_field(0.3 + 0.2j, -0.1 + 0.4j),
        "exp2": _exp_field(-0.2 + 0.5j, 0.3 - 0.1j),
        "poly": poly,
        "killing1": killing_field_halfplane(1.0, 0.0, 0.0),
        "killingz": killing_field_halfplane(0.0, 1.0, 0.0),
        "killingz2": killing_field_halfplane(0.0, 0.0, 1.0),
    }
