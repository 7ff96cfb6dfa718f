"""Moebius-map algebra for the half-plane and disk models.

Maps are stored as unit-determinant 2x2 complex matrices (entries a, b, c, d)
tagged with the model they act on: SL2R for the upper half-plane, SU11 for
the unit disk.  Composition is matrix multiplication; the matrix sign
ambiguity +-M is resolved at construction by making the first entry of
modulus > 1e-12 have positive real part (positive imaginary part when the
real part vanishes), which keeps trace^2 and classification well defined.

The point at infinity on the half-plane boundary is the module constant
INFINITY; the Cayley transform carries it to the disk boundary point 1.
"""

import cmath

import numpy as np

from .errors import ConstraintViolation, IdentityMap, PoleAtPoint

SL2R = "SL2R"
SU11 = "SU11"

_SIGN_EPS = 1e-12
_POLE_EPS = 1e-14


class _Infinity(object):
    __slots__ = ()

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def _normalize_sign(mat):
    for v in mat.ravel():
        if abs(v) > _SIGN_EPS:
            if abs(v.real) <= _SIGN_EPS:
                return mat if v.imag > 0 else -mat
            return mat if v.real > 0 else -mat
    return mat


class MoebiusMap(object):
    """Unit-determinant matrix [[a, b], [c, d]] acting as z -> (az+b)/(cz+d)."""

    __slots__ = ("mat", "model")

    def __init__(self, a, b, c, d, model, normalize=True):
        mat = np.array([[a, b], [c, d]], dtype=complex)
        if normalize:
            det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
            if abs(det) < _SIGN_EPS:
                raise ConstraintViolation("degenerate matrix, det ~ 0")
            mat = mat / cmath.sqrt(det)
            mat = _normalize_sign(mat)
        self.mat = mat
        self.model = model

    @property
    def a(self):
        return self.mat[0, 0]

    @property
    def b(self):
        return self.mat[0, 1]

    @property
    def c(self):
        return self.mat[1, 0]

    @property
    def d(self):
        return self.mat[1, 1]

    def __repr__(self):
        return "MoebiusMap(%r, %r, %r, %r, model=%r)" % (
            self.a, self.b, self.c, self.d, self.model)

    def validate(self, tol=1e-10):
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > tol:
            raise ConstraintViolation("determinant %r not 1" % (det,))
        if self.model == "SL2R":
            if max(abs(v.imag) for v in self.mat.ravel()) > tol:
                raise ConstraintViolation("SL2R entries must be real")
        elif self.model == "SU11":
            if abs(self.d - np.conj(self.a)) > tol or \
                    abs(self.c - np.conj(self.b)) > tol:
                raise ConstraintViolation("SU11 needs d = conj(a), c = conj(b)")
        else:
            raise ConstraintViolation("unknown model %r" % (self.model,))
        return self


def identity(model="SL2R"):
    return MoebiusMap(1, 0, 0, 1, model)


def compose(m1, m2):
    """Matrix product m1 @ m2, i.e. the map z -> m1(m2(z))."""
    if m1.model != m2.model:
        raise ConstraintViolation("cannot compose across models")
    p = m1.mat @ m2.mat
    return MoebiusMap(p[0, 0], p[0, 1], p[1, 0], p[1, 1], m1.model)


def inverse(m):
    return MoebiusMap(m.d, -m.b, -m.c, m.a, m.model)


def trace_sq(m):
    t = m.a + m.d
    return (t * t).real


def apply(m, z):
    """Evaluate (az+b)/(cz+d); INFINITY maps to a/c (or INFINITY if c = 0)."""
    if z is INFINITY:
        if abs(m.c) < _POLE_EPS:
            return INFINITY
        return m.a / m.c
    den = m.c * z + m.d
    if abs(den) < _POLE_EPS:
        return INFINITY if abs(m.a * z + m.b) > _POLE_EPS else \
            _raise_pole(m, z)
    return (m.a * z + m.b) / den


def _raise_pole(m, z):
    raise PoleAtPoint("map degenerate at z = %r" % (z,))


def apply_strict(m, z):
    """As apply, but a pole raises instead of returning INFINITY."""
    den = m.c * z + m.d
    if abs(den) < _POLE_EPS:
        raise PoleAtPoint("cz + d ~ 0 at z = %r" % (z,))
    return (m.a * z + m.b) / den


def derivative(m, z):
    den = m.c * z + m.d
    if abs(den) < _POLE_EPS:
        raise PoleAtPoint("cz + d ~ 0 at z = %r" % (z,))
    return 1.0 / (den * den)


def classify(m, tol=1e-9):
    """One of 'identity', 'elliptic', 'parabolic', 'hyperbolic'."""
    if np.max(np.abs(m.mat - np.eye(2))) < 1e-9 or \
            np.max(np.abs(m.mat + np.eye(2))) < 1e-9:
        return "identity"
    t2 = trace_sq(m)
    if abs(t2 - 4.0) <= tol:
        return "parabolic"
    return "hyperbolic" if t2 > 4.0 else "elliptic"


def fixed_points(m):
    """Solutions of gamma(z) = z, i.e. c z^2 + (d-a) z - b = 0.

    Hyperbolic maps give two boundary points, parabolic one, elliptic the
    single interior fixed point (the mirror root outside the domain is
    dropped).  INFINITY appears when c = 0.
    """
    if classify(m) == "identity":
        raise IdentityMap("every point is fixed")
    cls = classify(m)
    if abs(m.c) < _POLE_EPS:
        pts = [INFINITY]
        if abs(m.d - m.a) > _POLE_EPS:
            pts.insert(0, m.b / (m.d - m.a))
        return pts
    disc = (m.d - m.a) ** 2 + 4.0 * m.c * m.b
    sq = cmath.sqrt(disc)
    r1 = (-(m.d - m.a) + sq) / (2.0 * m.c)
    r2 = (-(m.d - m.a) - sq) / (2.0 * m.c)
    if cls == "parabolic":
        return [0.5 * (r1 + r2)]
    if cls == "elliptic":
        # keep the root inside the model's domain
        if m.model == "SU11":
            return [r1 if abs(r1) < 1.0 else r2]
        return [r1 if r1.imag > 0 else r2]
    return [r1, r2]


def shares_fixed_point(m1, m2, tol=1e-8):
    def keyed(pts):
        out = []
        for p in pts:
            out.append(p)
        return out

    for p in keyed(fixed_points(m1)):
        for q in keyed(fixed_points(m2)):
            if p is INFINITY or q is INFINITY:
                if p is INFINITY and q is INFINITY:
                    return True
                continue
            if abs(p - q) < tol:
                return True
    return False


def cayley(z):
    """Half-plane to disk: C(z) = (z - i)/(z + i); C(INFINITY) = 1."""
    if z is INFINITY:
        return 1.0 + 0.0j
    return (z - 1j) / (z + 1j)


def cayley_inv(w):
    """Disk to half-plane: C^{-1}(w) = i(1 + w)/(1 - w); w = 1 is the pole."""
    if abs(w - 1.0) < _POLE_EPS:
        raise PoleAtPoint("cayley_inv has its pole at w = 1")
    return 1j * (1.0 + w) / (1.0 - w)


def cayley_deriv(z):
    """C'(z) = 2i/(z + i)^2."""
    return 2j / ((z + 1j) ** 2)


def cayley_inv_deriv(w):
    """(C^{-1})'(w) = 2i/(1 - w)^2."""
    return 2j / ((1.0 - w) ** 2)


def pullback_field(m, xi):
    """(m* xi)(z) = xi(m(z)) / m'(z) for a callable field xi."""

    def pulled(z):
        return xi(apply_strict(m, z)) / derivative(m, z)

    return pulled


def pushforward_field(m, xi):
    """(m_* xi)(m(z)) = m'(z) xi(z), realized as pullback along m^{-1}."""
    return pullback_field(inverse(m), xi)


# Cayley conjugation between the matrix groups: T gamma T^{-1} with
# T = [[1, -i], [1, i]]/(1+i), det T = 1.
_T = np.array([[1.0, -1j], [1.0, 1j]], dtype=complex) / (1.0 + 1j)
_TINV = np.linalg.inv(_T)


def to_disk_map(m):
    if m.model == "SU11":
        return m
    p = _T @ m.mat @ _TINV
    return MoebiusMap(p[0, 0], p[0, 1], p[1, 0], p[1, 1], "SU11")


def to_halfplane_map(m):
    if m.model == "SL2R":
        return m
    p = _TINV @ m.mat @ _T
    return MoebiusMap(p[0, 0], p[0, 1], p[1, 0], p[1, 1], "SL2R")


def zero_to_z(z0):
    """SU11 map sending 0 to z0: w -> (w + z0)/(conj(z0) w + 1), |z0| < 1."""
    z0 = complex(z0)
    if abs(z0) >= 1.0:
        raise ConstraintViolation("zero_to_z needs |z0| < 1")
    s = 1.0 / np.sqrt(1.0 - abs(z0) ** 2)
    return MoebiusMap(s, s * z0, s * np.conj(z0), s, "SU11", normalize=False)


def stab1_element(a, b, tol=1e-10):
    """SU11 map [[a, b], [conj b, conj a]] fixing the boundary point 1.

    Requires |a|^2 - |b|^2 = 1 (unit determinant) and a + b real (fixing 1).
    """
    a = complex(a)
    b = complex(b)
    if abs((abs(a) ** 2 - abs(b) ** 2) - 1.0) > tol:
        raise ConstraintViolation("|a|^2 - |b|^2 must equal 1")
    if abs((a + b).imag) > tol:
        raise ConstraintViolation("a + b must be real to fix 1")
    return MoebiusMap(a, b, np.conj(b), np.conj(a), "SU11", normalize=False)


def to_json(m):
    return {
        "model": m.model,
        "a": [m.a.real, m.a.imag],
        "b": [m.b.real, m.b.imag],
        "c": [m.c.real, m.c.imag],
        "d": [m.d.real, m.d.imag],
    }


def from_json(obj):
    if isinstance(obj, (str, bytes)):
        import json
        obj = json.loads(obj)

    def pick(key):
        re, im = obj[key]
        return complex(re, im)

    return MoebiusMap(pick("a"), pick("b"), pick("c"), pick("d"),
                      obj["model"]).validate()
