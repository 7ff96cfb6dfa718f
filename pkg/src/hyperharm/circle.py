"""L2 analysis of vector fields on the boundary circle.

A CircleField holds N uniform samples X(e^{2 pi i k/N}); the discrete
Fourier transform gives coefficients c_n for |n| <= N/2, and every
operation below is phrased in terms of samples or coefficients.

The tangential/holomorphic splitting pairs each negative frequency m <= -1
with its mirror 2 - m,

    X1 = sum_{m <= -1} (c_m z^m - conj(c_m) z^{2-m}),    X2 = X - X1,

so X1 is exactly tangential sample-by-sample and X2 keeps only frequencies
n >= 0.  The mirrored frequencies reach 2 + N/2, so split outputs are
synthesized on a doubled grid of 2N samples; restricted to the original
sample points their sum reproduces the input to roundoff.

poisson_extend is the rotation-equivariant convolution of the tangential
scalar f (with X = f * iz) against the kernel vector field

    K(z) = i (1 - |z|^2)^3 / ((1 - z)(1 - zbar)^3),

namely F(X)(z) = mean_k f_k w_k K(conj(w_k) z).  The extra factor w_k
(absent from a bare scalar convolution) is what makes the extension carry
Killing fields to Killing fields; the bare variant stays available behind
rotation_factor=False.  d/d(zbar) of the extension is exact through
dK/d(ubar) = 3i (1 - |u|^2)^2 / (1 - ubar)^4, so downstream beta calls on
extensions need no finite differences.
"""

import json
from collections import namedtuple

import numpy as np

from .errors import (ConstraintViolation, DomainViolation, NotTangential,
                     TooCloseToBoundary)
from .moebius import apply, derivative
from .qdiff import DISK, FieldEvaluator

FourierSplit = namedtuple("FourierSplit", ["tangential_part", "h2_part"])


def circle_points(N):
    return np.exp(2j * np.pi * np.arange(N) / N)


def _check_n(N):
    if N < 64 or (N & (N - 1)) != 0:
        raise ConstraintViolation("N must be a power of two >= 64, got %r"
                                  % (N,))


class CircleField(object):
    """N uniform complex samples of a vector field on the unit circle."""

    __slots__ = ("samples",)

    def __init__(self, samples):
        samples = np.asarray(samples, dtype=complex)
        if samples.ndim != 1:
            raise ConstraintViolation("samples must be a 1-d array")
        _check_n(samples.size)
        self.samples = samples

    @property
    def N(self):
        return self.samples.size

    @property
    def points(self):
        return circle_points(self.N)

    @classmethod
    def from_function(cls, fn, N=4096):
        _check_n(N)
        pts = circle_points(N)
        try:
            vals = np.asarray(fn(pts), dtype=complex)
            if vals.shape != pts.shape:
                raise ValueError
        except (TypeError, ValueError):
            vals = np.array([fn(p) for p in pts], dtype=complex)
        return cls(vals)

    def coeffs(self):
        """FFT bins: index n holds c_n for 0 <= n <= N/2, c_{n-N} above."""
        return np.fft.fft(self.samples) / self.N

    def coeff(self, n):
        if abs(n) > self.N // 2:
            return 0.0 + 0.0j
        return self.coeffs()[n % self.N]

    def norm(self):
        return float(np.sqrt(np.mean(np.abs(self.samples) ** 2)))

    def __add__(self, other):
        return CircleField(self.samples + other.samples)

    def __sub__(self, other):
        return CircleField(self.samples - other.samples)

    def __mul__(self, scalar):
        return CircleField(self.samples * scalar)

    __rmul__ = __mul__

    def to_json(self):
        return {"N": int(self.N),
                "samples": [[v.real, v.imag] for v in self.samples]}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, (str, bytes)):
            obj = json.loads(obj)
        samples = np.array([complex(re, im) for re, im in obj["samples"]])
        if int(obj["N"]) != samples.size:
            raise ConstraintViolation("declared N does not match samples")
        return cls(samples)


def is_tangential(X, tol=1e-8):
    """True when X = f * iz with f real: Im(X conj(iz)) below tol at every
    sample."""
    resid = np.imag(X.samples * np.conj(1j * X.points))
    return bool(np.max(np.abs(resid)) < tol)


def split_tangential_h2(X):
    """Split X into an exactly tangential part and a nonneg-frequency part.

    Both parts come back on a doubled grid (2N samples) because the mirror
    frequencies 2 - m exceed the input Nyquist bin.
    """
    N = X.N
    c = X.coeffs()
    M = 2 * N
    c1 = np.zeros(M, dtype=complex)
    c2 = np.zeros(M, dtype=complex)
    # the Nyquist bin of the input is read as frequency +N/2 and stays in
    # the h2 part untouched
    for n in range(0, N // 2 + 1):
        c2[n] = c[n]
    for m in range(-(N // 2 - 1), 0):
        cm = c[m % N]
        c1[m % M] += cm
        c1[(2 - m) % M] -= np.conj(cm)
        c2[(2 - m) % M] += np.conj(cm)
    x1 = np.fft.ifft(c1) * M
    x2 = np.fft.ifft(c2) * M
    return FourierSplit(CircleField(x1), CircleField(x2))


KILLING_BASIS_FUNCTIONS = (
    lambda z: 1j * z,
    lambda z: (z * z - 1.0) / 2.0,
    lambda z: 1j * (z * z + 1.0) / 2.0,
)


class KillingTriple(object):
    """(a, b) with a complex, b real, encoding z -> a + i b z - conj(a) z^2.

    Basis correspondence: iz <-> (0, 1); (z^2-1)/2 <-> (-1/2, 0);
    i(z^2+1)/2 <-> (i/2, 0).  The su(1,1) matrix form is
    [[i b/2, a], [conj(a), -i b/2]], and pulling back along gamma in SU(1,1)
    is matrix conjugation gamma^{-1} X gamma.
    """

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a = complex(a)
        self.b = float(b)

    def __repr__(self):
        return "KillingTriple(a=%r, b=%r)" % (self.a, self.b)

    def field(self, z):
        return self.a + 1j * self.b * z - np.conj(self.a) * z * z

    def __call__(self, z):
        return self.field(z)

    def circle_field(self, N=4096):
        return CircleField.from_function(self.field, N)

    def field_evaluator(self):
        return FieldEvaluator(DISK, self.field, tag="closed-form",
                              exact={"dzbar": lambda z: 0.0 + 0.0j})

    @classmethod
    def from_basis_coords(cls, t):
        t1, t2, t3 = [float(v) for v in t]
        return cls(complex(-t2 / 2.0, t3 / 2.0), t1)

    def basis_coords(self):
        return np.array([self.b, -2.0 * self.a.real, 2.0 * self.a.imag])

    def su11_matrix(self):
        return np.array([[0.5j * self.b, self.a],
                         [np.conj(self.a), -0.5j * self.b]], dtype=complex)

    @classmethod
    def from_su11_matrix(cls, X):
        return cls(X[0, 1], 2.0 * X[0, 0].imag)

    def pullback(self, gamma):
        if gamma.model != "SU11":
            raise DomainViolation("Killing pullback needs an SU11 map")
        g = gamma.mat
        ginv = np.array([[g[1, 1], -g[0, 1]], [-g[1, 0], g[0, 0]]])
        return KillingTriple.from_su11_matrix(ginv @ self.su11_matrix() @ g)

    def __add__(self, other):
        return KillingTriple(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return KillingTriple(self.a - other.a, self.b - other.b)

    def __mul__(self, scalar):
        scalar = float(scalar)
        return KillingTriple(self.a * scalar, self.b * scalar)

    __rmul__ = __mul__

    def norm(self):
        return float(np.sqrt(abs(self.a) ** 2 + self.b ** 2))

    def to_json(self):
        return {"a": [self.a.real, self.a.imag], "b": self.b}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, (str, bytes)):
            obj = json.loads(obj)
        return cls(complex(obj["a"][0], obj["a"][1]), obj["b"])


def killing_project(X):
    """Least-squares fit of X onto the real span of the Killing basis.

    Returns (KillingTriple, residual), residual in the discrete L2 norm
    sqrt(mean |X - fit|^2).
    """
    pts = X.points
    B = np.stack([f(pts) for f in KILLING_BASIS_FUNCTIONS], axis=1)
    A = np.concatenate([B.real, B.imag], axis=0)
    rhs = np.concatenate([X.samples.real, X.samples.imag])
    t, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    fit = B @ t
    resid = float(np.sqrt(np.mean(np.abs(X.samples - fit) ** 2)))
    return KillingTriple.from_basis_coords(t), resid


def scalar_poisson(f, z, N=4096):
    """Poisson integral mean_k f_k (1 - |z|^2)/|w_k - z|^2 of real boundary
    data."""
    z = complex(z)
    if abs(z) >= 1.0 - 1e-6:
        raise TooCloseToBoundary("scalar_poisson needs |z| < 1 - 1e-6")
    if isinstance(f, CircleField):
        vals = f.samples.real
        pts = f.points
    elif callable(f):
        pts = circle_points(N)
        vals = np.real(np.array([f(p) for p in pts]))
    else:
        vals = np.asarray(f, dtype=float)
        pts = circle_points(vals.size)
    kern = (1.0 - abs(z) ** 2) / np.abs(pts - z) ** 2
    return float(np.mean(vals * kern))


def poisson_kernel_field(z):
    """K(z) = i (1 - |z|^2)^3 / ((1 - z)(1 - zbar)^3) for |z| < 1."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1.0):
        raise DomainViolation("poisson_kernel_field needs |z| < 1")
    zb = np.conj(z)
    val = 1j * (1.0 - np.abs(z) ** 2) ** 3 / ((1.0 - z) * (1.0 - zb) ** 3)
    return complex(val) if val.ndim == 0 else val


def _kernel_dubar(u):
    # d K / d(ubar) = 3i (1 - |u|^2)^2 / (1 - ubar)^4
    ub = np.conj(u)
    return 3j * (1.0 - np.abs(u) ** 2) ** 2 / (1.0 - ub) ** 4


def tangential_scalar(X, tol=1e-8):
    """The real factor f with X = f * iz; raises NotTangential when the
    imaginary residue exceeds tol."""
    raw = X.samples * np.conj(1j * X.points) / np.abs(X.points) ** 2
    if np.max(np.abs(raw.imag)) >= tol:
        raise NotTangential("imaginary residue %.3e exceeds %.1e"
                            % (float(np.max(np.abs(raw.imag))), tol))
    return raw.real


def poisson_extend_batch(f_samples, pts, zs, rotation_factor=True,
                         deriv=False, chunk=131072):
    """Convolution values at many disk points; zs is a 1-d complex array."""
    zs = np.asarray(zs, dtype=complex)
    out = np.zeros(zs.shape, dtype=complex)
    wconj = np.conj(pts)
    weight = f_samples * (pts if rotation_factor else 1.0)
    if deriv:
        weight = weight * pts
    step = max(1, chunk // pts.size)
    for lo in range(0, zs.size, step):
        block = zs[lo:lo + step]
        u = wconj[None, :] * block[:, None]
        vals = _kernel_dubar(u) if deriv else (
            1j * (1.0 - np.abs(u) ** 2) ** 3
            / ((1.0 - u) * (1.0 - np.conj(u)) ** 3))
        out[lo:lo + step] = vals @ weight / pts.size
    return out


def poisson_extend(X, rotation_factor=True, tol=1e-8):
    """Harmonic extension of a tangential circle field to the open disk."""
    f = tangential_scalar(X, tol)
    pts = X.points

    def fn(z):
        return complex(poisson_extend_batch(
            f, pts, np.array([z], dtype=complex), rotation_factor)[0])

    def dzbar(z):
        return complex(poisson_extend_batch(
            f, pts, np.array([z], dtype=complex), rotation_factor,
            deriv=True)[0])

    return FieldEvaluator(DISK, fn, tag="closed-form",
                          exact={"dzbar": dzbar})


def kernel_mass(eps, N=4096):
    """(numeric, closed_form) mass of the kernel restricted near the
    boundary.

    On |z| = 1 the restricted kernel is exactly
    i (1-s^2)^3 z^3 / ((1-sz)(z-s)^3) with s = 1 - eps, and the mass is
    taken of its near-boundary approximant with (1-s^2)^3 ~ 8 eps^3:

        numeric = (1/(2 pi i)) Int  i 8 eps^3 z^3 / ((1-sz)(z-s)^3) dz

    by trapezoid sampling (the integrand's analyticity annulus shrinks
    like eps, so the sample count is raised to at least 24/eps), and

        closed_form = i 8 eps^3 Res(f, s),
        Res(f, s) = (6s - 12s^3 + 8s^5 - 2s^7) / (2 (1-s^2)^4),

    the residue at the only enclosed pole.  Both tend to i as eps -> 0,
    which is the Dirac-approximation property of the kernel family.
    """
    eps = float(eps)
    if not 0.0 < eps < 1.0:
        raise DomainViolation("kernel_mass needs 0 < eps < 1")
    need = 24.0 / eps
    n_eff = max(int(N), 64)
    while n_eff < need:
        n_eff *= 2
    s = 1.0 - eps
    pts = circle_points(n_eff)
    # path integral: dz = i z dtheta, so (1/(2 pi i)) Int g dz = mean(g * z)
    g = 1j * 8.0 * eps ** 3 * pts ** 3 / ((1.0 - s * pts) * (pts - s) ** 3)
    numeric = complex(np.mean(g * pts))
    res = (6.0 * s - 12.0 * s ** 3 + 8.0 * s ** 5 - 2.0 * s ** 7) \
        / (2.0 * (1.0 - s * s) ** 4)
    closed = 1j * 8.0 * eps ** 3 * res
    return numeric, closed


def radial_l2_restriction(field, r, N=4096):
    """Sample a disk field on the circle of radius r, indexed by angle."""
    r = float(r)
    if not 0.0 < r < 1.0:
        raise DomainViolation("radial restriction needs 0 < r < 1")
    pts = circle_points(N)
    try:
        vals = np.asarray(field(r * pts), dtype=complex)
        if vals.shape != pts.shape:
            raise ValueError
    except (TypeError, ValueError):
        vals = np.array([field(r * p) for p in pts], dtype=complex)
    return CircleField(vals)


def pullback_circle(gamma, fn, N=4096):
    """(gamma^* X)(w) = X(gamma w)/gamma'(w) sampled on the unit circle;
    fn must be evaluable on the whole circle (closed-form fields)."""
    pts = circle_points(N)
    vals = np.array([fn(apply(gamma, p)) / derivative(gamma, p)
                     for p in pts], dtype=complex)
    return CircleField(vals)
