"""Explicit harmonic vector fields on the half-plane.

Constructions, all solving the potential equation
d(xi)/d(zbar) = Im(z)^2 conj(f)/2 for a holomorphic coefficient f
(equivalently beta(xi) = f with the library normalization):

  * wolpert_field       - the textbook contour-integral solution, with the
                          potential equation in the (z - zbar)^2 scale;
  * monomial_field      - closed-form field for f = z^n (binomial sum);
  * shifted_field       - closed-form field for f = (z - a)^n;
  * y_power_field       - y^n f(z) with its predicted differential;
  * xi_c                - cutoff integral along the vertical segment;
  * xi_reg              - the regularized limit of xi_c minus its
                          first-order holomorphic Taylor part at i, with a
                          certified a-priori tail cutoff;
  * closed_disk_extension - Cayley pushforward of xi_reg to the closed disk;
  * RationalQD          - coefficients sum c_j (P_j z + Q_j)^(-4) with all
                          poles below the real axis, for which xi_reg and
                          all bounds are exact closed forms (no quadrature).

xi_reg is evaluated piecewise so that every quadrature panel sees a smooth
integrand and the dropped tail has the explicit bound K2 |z-i|^2 / (4c):

  xi_reg(z) = P1 + P2 + P3 + P4 with s = max(1, Im z), y0 = max(Im z, eps):
    P1 = Integral_{y0}^{s} i t^2 conj(f(zbar + 2it)) dt          (Im z < 1)
    P2 = -Integral_{1}^{s} i t^2 [conj f(-i+2it)
                                  + conj f'(-i+2it) (z-i)] dt    (Im z > 1)
    P3 = Integral_{s}^{c} i t^2 [conj f(zbar+2it) - conj f(-i+2it)
                                  - conj f'(-i+2it) (z-i)] dt
    P4 = conj(f(i)) (z - i) / 2
  with cutoff c = max(2, 2s, K2 |z-i|^2/(4 tail_tol)), so the dropped piece
  of P3 is bounded by t^2 K2 |z-i|^2 / (2 (2t-s)^4) integrated past c, which
  is below K2 |z-i|^2/(4c) = tail_tol for c >= 2s.

P3's bracket is the second-order Taylor remainder in z of the holomorphic
function z -> conj(f(zbar + 2it)) around i, which is what makes the whole
subtraction kill exactly the value and z-derivative of the cutoff integral
at the base point: xi_reg(i) = 0 identically and beta(xi_reg) = f.
"""

import numpy as np

from . import quadrature
from .errors import BoundsMissing, DomainViolation
from .moebius import cayley, cayley_deriv, cayley_inv
from .qdiff import (DISK, HALFPLANE, BoundsReport, FieldEvaluator, QuadDiff,
                    default_step)

_BOUNDARY_EPS = 1e-8


def _vec(fn, arr):
    """Evaluate a scalar-or-vector callable on an array of points."""
    arr = np.asarray(arr, dtype=complex)
    try:
        out = np.asarray(fn(arr), dtype=complex)
        if out.shape == arr.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([fn(p) for p in arr.ravel()],
                    dtype=complex).reshape(arr.shape)


def _coeff_fn(f):
    return f.coeff if isinstance(f, QuadDiff) else f


def wolpert_field(f, w, z, tol=1e-10, max_panels=400):
    """conj of the segment integral of (zbar - zeta)^2 f(zeta) from w to z.

    Solves d(xi)/d(zbar) = (z - zbar)^2 conj(f) (the -8 multiple of the
    library's beta normalization).
    """
    fn = _coeff_fn(f)
    w = complex(w)
    z = complex(z)
    if w == z:
        return 0.0 + 0.0j
    zb = np.conj(z)

    def integrand(t):
        zeta = w + t * (z - w)
        return (zb - zeta) ** 2 * _vec(fn, zeta) * (z - w)

    val = quadrature.adaptive_quad(integrand, 0.0, 1.0, tol,
                                   max_panels=max_panels)
    return np.conj(val)


def xi_c(f, c, z, tol=1e-10, f_domain=HALFPLANE, max_panels=400):
    """Cutoff integral int_{Im z}^{c} i t^2 conj(f(zbar + 2it)) dt.

    f_domain 'halfplane' requires the evaluation segment to stay inside
    Im > 0; pass 'entire' for polynomial coefficients.
    """
    fn = _coeff_fn(f)
    z = complex(z)
    y = z.imag
    c = float(c)
    if f_domain == HALFPLANE and min(y, c) <= y / 2.0:
        # points zbar + 2it have Im = 2t - y, positive only for t > y/2
        raise DomainViolation("vertical segment exits the half-plane")
    zb = np.conj(z)

    def integrand(t):
        return 1j * t * t * np.conj(_vec(fn, zb + 2j * t))

    if y == c:
        return 0.0 + 0.0j
    return quadrature.adaptive_quad(integrand, y, c, tol,
                                    max_panels=max_panels)


def _binomial(n, k):
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def monomial_field(n):
    """Closed-form harmonic field with beta = z^n:
    xi(z) = Integral_0^{Im z} -i t^2 (z - 2it)^n dt, expanded binomially.
    """
    n = int(n)
    if n < 0:
        raise DomainViolation("monomial degree must be >= 0")
    coeffs = [( _binomial(n, k), (-2j) ** (n - k), n - k + 3)
              for k in range(n + 1)]

    def fn(z):
        y = z.imag
        acc = 0.0 + 0.0j
        for k, (binom, pw, m) in enumerate(coeffs):
            acc += binom * z ** k * pw * (-1j) * y ** m / m
        return acc

    return FieldEvaluator(
        HALFPLANE, fn, tag="closed-form",
        exact={"dzbar": lambda z: 0.5 * z.imag ** 2 * np.conj(z) ** n})


def shifted_field(n, a):
    """Closed-form harmonic field with beta = (z - a)^n: the monomial
    construction with z replaced by z - conj(a) in the binomial part.
    """
    n = int(n)
    a = complex(a)
    ab = np.conj(a)
    coeffs = [(_binomial(n, k), (-2j) ** (n - k), n - k + 3)
              for k in range(n + 1)]

    def fn(z):
        y = z.imag
        u = z - ab
        acc = 0.0 + 0.0j
        for k, (binom, pw, m) in enumerate(coeffs):
            acc += binom * u ** k * pw * (-1j) * y ** m / m
        return acc

    return FieldEvaluator(
        HALFPLANE, fn, tag="closed-form",
        exact={"dzbar":
               lambda z: 0.5 * z.imag ** 2 * (np.conj(z) - ab) ** n})


def y_power_field(n, f, fprime=None):
    """xi = y^n f(z) with f holomorphic; exact dzbar = (i n / 2) y^{n-1} f."""
    fn = _coeff_fn(f)

    def field(z):
        return z.imag ** n * fn(z)

    exact = {"dzbar": lambda z: 0.5j * n * z.imag ** (n - 1) * fn(z)}
    if fprime is not None:
        exact["dx"] = lambda z: z.imag ** n * fprime(z)
        exact["dy"] = lambda z: (n * z.imag ** (n - 1) * fn(z)
                                 + 1j * z.imag ** n * fprime(z))
    return FieldEvaluator(HALFPLANE, field, tag="closed-form", exact=exact)


def predicted_qd(n, f):
    """The differential Lemma-predicted for y^n f: coeff -n i y^{n-3} conj f."""
    fn = _coeff_fn(f)

    def coeff(z):
        return -1j * n * z.imag ** (n - 3) * np.conj(fn(z))

    return QuadDiff(HALFPLANE, coeff)


def _fprime(f, u, exact_fz=None):
    if exact_fz is not None:
        return _vec(exact_fz, u)
    u = np.asarray(u, dtype=complex)
    h = np.minimum(1e-4 * np.maximum(1.0, np.abs(u)), 0.1 * u.imag)
    return (_vec(f, u + h) - _vec(f, u - h)) / (2.0 * h)


def certified_cutoff(z, K2, tail_tol):
    """Smallest cutoff with dropped tail below tail_tol: the a-priori bound
    is K2 |z - i|^2 / (4c), enforced together with c >= max(2, 2s)."""
    z = complex(z)
    s = max(1.0, z.imag)
    return max(2.0, 2.0 * s, K2 * abs(z - 1j) ** 2 / (4.0 * tail_tol))


def xi_reg(f, bounds, z, tail_tol=1e-12, cutoff=None, max_panels=600):
    """Regularized harmonic field value at z (Im z >= 0 allowed).

    bounds must supply K2 (the certified-tail constant); the quadrature
    tolerance is tail_tol/10 scaled by max(1, |z - i|^2), matching how the
    tail bound itself scales.
    """
    if bounds is None:
        raise BoundsMissing("xi_reg needs a BoundsReport for its cutoff")
    fn = _coeff_fn(f)
    exact_fz = f.exact.get("fz") if isinstance(f, QuadDiff) else None
    z = complex(z)
    if z.imag < 0:
        raise DomainViolation("xi_reg is defined for Im z >= 0")
    y = z.imag
    y0 = max(y, _BOUNDARY_EPS)
    s = max(1.0, y)
    c = cutoff if cutoff is not None else certified_cutoff(z, bounds.K2,
                                                           tail_tol)
    tol = (tail_tol / 10.0) * max(1.0, abs(z - 1j) ** 2)
    zb = np.conj(z)
    dz = z - 1j

    total = 0.0 + 0.0j
    if y0 < s:
        def p1(t):
            return 1j * t * t * np.conj(_vec(fn, zb + 2j * t))

        total += quadrature.adaptive_quad(p1, y0, s, tol,
                                          max_panels=max_panels)
    if s > 1.0:
        def p2(t):
            base = -1j + 2j * t
            return -1j * t * t * (np.conj(_vec(fn, base))
                                  + np.conj(_fprime(fn, base, exact_fz)) * dz)

        total += quadrature.adaptive_quad(p2, 1.0, s, tol,
                                          max_panels=max_panels)

    def p3(t):
        base = -1j + 2j * t
        return 1j * t * t * (np.conj(_vec(fn, zb + 2j * t))
                             - np.conj(_vec(fn, base))
                             - np.conj(_fprime(fn, base, exact_fz)) * dz)

    breaks = quadrature.geometric_breaks(s, c)
    total += quadrature.adaptive_quad(p3, s, c, tol, max_panels=max_panels,
                                      initial_breaks=breaks)
    total += 0.5 * np.conj(_vec(fn, np.array(1j))) * dz
    return complex(total)


def xi_reg_field(f, bounds, tail_tol=1e-12, exact_beta=False):
    """xi_reg as a FieldEvaluator.

    exact_beta=True attaches the analytic d/d(zbar) = Im^2 conj(f)/2 (exact
    in the regularized limit) so downstream beta calls skip finite
    differences; leave False when the finite-difference beta is itself the
    quantity under test.
    """
    fn = _coeff_fn(f)

    def field(z):
        return xi_reg(f, bounds, z, tail_tol=tail_tol)

    exact = {}
    if exact_beta:
        exact["dzbar"] = lambda z: 0.5 * z.imag ** 2 * np.conj(fn(z))
    return FieldEvaluator(HALFPLANE, field, tag="quadrature", exact=exact)


def closed_disk_extension(f, bounds, w, tail_tol=1e-12):
    """Continuous extension to the closed disk: the Cayley pushforward
    C'(z) xi_reg(z) at z = Cinv(w), with value 0 at w = 1 (the image of
    the half-plane boundary point at infinity)."""
    w = complex(w)
    if abs(w) > 1.0 + 1e-12:
        raise DomainViolation("closed_disk_extension needs |w| <= 1")
    if abs(w - 1.0) < 1e-13:
        return 0.0 + 0.0j
    z = cayley_inv(w)
    return cayley_deriv(z) * xi_reg(f, bounds, z, tail_tol=tail_tol)


def closed_disk_extension_field(f, bounds, tail_tol=1e-12):
    def fn(w):
        return closed_disk_extension(f, bounds, w, tail_tol=tail_tol)

    return FieldEvaluator(DISK, fn, tag="quadrature")


class RationalQD(object):
    """f(z) = sum_j c_j (P_j z + Q_j)^(-4) with every pole -Q_j/P_j in the
    open lower half-plane, so f is bounded holomorphic on closed Im z >= 0.

    For these coefficients the cutoff integral has an elementary
    antiderivative, so xi_reg needs no quadrature and no cutoff at all:
    with A_j(z) = conj(P_j) z + conj(Q_j) and B_j = -2i conj(P_j),

       conj(f(zbar + 2it)) = sum_j conj(c_j) (A_j(z) + B_j t)^(-4),

    and the integrals I4/I5 below are the exact tails from a finite lower
    limit to infinity.
    """

    def __init__(self, c, P, Q):
        self.c = np.atleast_1d(np.asarray(c, dtype=complex))
        self.P = np.atleast_1d(np.asarray(P, dtype=complex))
        self.Q = np.atleast_1d(np.asarray(Q, dtype=complex))
        if not (self.c.shape == self.P.shape == self.Q.shape):
            raise DomainViolation("c, P, Q must have matching shapes")
        poles = -self.Q / self.P
        if np.any(poles.imag >= 0):
            raise DomainViolation("all poles must lie strictly below R")

    def _terms(self, z, power):
        z = np.asarray(z, dtype=complex)
        base = np.multiply.outer(self.P, z) + self.Q.reshape(
            self.Q.shape + (1,) * z.ndim)
        return base ** (-power)

    def coeff(self, z):
        scalar = np.isscalar(z) or np.asarray(z).ndim == 0
        val = np.tensordot(self.c, self._terms(z, 4), axes=(0, 0))
        return complex(val) if scalar else val

    def coeff_fz(self, z):
        scalar = np.isscalar(z) or np.asarray(z).ndim == 0
        val = np.tensordot(-4.0 * self.c * self.P, self._terms(z, 5),
                           axes=(0, 0))
        return complex(val) if scalar else val

    def coeff_fzz(self, z):
        scalar = np.isscalar(z) or np.asarray(z).ndim == 0
        val = np.tensordot(20.0 * self.c * self.P ** 2, self._terms(z, 6),
                           axes=(0, 0))
        return complex(val) if scalar else val

    def quad_diff(self):
        return QuadDiff(HALFPLANE, self.coeff,
                        exact={"fz": self.coeff_fz, "fzz": self.coeff_fzz},
                        holomorphic=True)

    @staticmethod
    def _i4(a, A, B):
        # int_a^inf i t^2 (A + B t)^(-4) dt
        u = A + B * a
        return -1j / B ** 3 * (-1.0 / u + A / u ** 2 - A ** 2 / (3.0 * u ** 3))

    @staticmethod
    def _i5(a, A, B):
        # int_a^inf i t^2 (A + B t)^(-5) dt
        u = A + B * a
        return -1j / B ** 3 * (-0.5 / u ** 2 + 2.0 * A / (3.0 * u ** 3)
                               - 0.25 * A ** 2 / u ** 4)

    def xi_reg_exact(self, z):
        """Closed-form xi_reg: the c -> infinity limit taken literally."""
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        cb = np.conj(self.c)[:, None]
        Pb = np.conj(self.P)[:, None]
        Qb = np.conj(self.Q)[:, None]
        B = -2j * Pb
        Az = Pb * z[None, :] + Qb
        Ai = Pb * 1j + Qb
        y0 = z.imag[None, :]
        val = np.sum(cb * self._i4(y0, Az, B), axis=0)
        val -= np.sum(cb * self._i4(1.0, Ai, B), axis=0)
        fi = complex(self.coeff(1j))
        slope = -0.5 * np.conj(fi) + np.sum(
            (-4.0 * cb * Pb) * self._i5(1.0, Ai, B), axis=0)
        val -= (z - 1j) * slope
        # the Leibniz constant enters the subtracted slope with sign -1/2,
        # leaving the explicit +conj(f(i))(z-i)/2 of the piecewise form
        return complex(val[0]) if scalar else val

    def xi_reg_field(self, exact_beta=False):
        exact = {}
        if exact_beta:
            exact["dzbar"] = lambda z: 0.5 * z.imag ** 2 * np.conj(
                self.coeff(z))
        return FieldEvaluator(HALFPLANE, self.xi_reg_exact,
                              tag="closed-form", exact=exact)

    def bounds(self, grid=None):
        from .qdiff import derivative_bounds
        if grid is None:
            xs = np.linspace(-6.0, 6.0, 41)
            ys = np.concatenate([np.geomspace(1e-3, 1.0, 25),
                                 np.linspace(1.2, 12.0, 28)])
            grid = [complex(x, y) for y in ys for x in xs]
        return derivative_bounds(self.quad_diff(), grid)


def rational_plus_i4():
    """The reference coefficient f(z) = (z + i)^(-4)."""
    return RationalQD([1.0], [1.0], [1j])
