"""Finite-dimensional normed-space descriptors and their computations.

Three space kinds: l^p sequence spaces, n x n matrices under the
spectral norm (row-major flattening, so every downstream solver sees a
coordinate vector), and the max-normed direct sum of two spaces.
Functionals act through the conjugate-linear pairing

    pair(f, v) = sum_i conj(f_i) v_i,

i.e. functional coordinates live in the conjugate space; this single
convention fixes how sesquilinear forms are identified with bilinear
ones throughout the package.

Coordinates are stored complex128 regardless of the field tag; a
real-field vector must carry exactly zero imaginary parts.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .errors import DimensionMismatchError, FieldMismatchError
from .linalg import spectral_norm as _spectral_norm
from .linalg import svd as _svd


# ---------------------------------------------------------------------------
# space descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpaceSpec:
    kind: str                       # "lp" | "spectral" | "suminf"
    field: str                      # "real" | "complex"
    p: Optional[float] = None       # lp only; math.inf allowed
    dim: Optional[int] = None       # lp only
    n: Optional[int] = None         # spectral only
    left: Optional["SpaceSpec"] = None
    right: Optional["SpaceSpec"] = None

    def __post_init__(self):
        if self.field not in ("real", "complex"):
            raise FieldMismatchError(f"unknown field {self.field!r}")
        if self.kind == "lp":
            if self.p is None or self.dim is None or self.dim < 1:
                raise DimensionMismatchError("lp space needs p and dim >= 1")
            if not (self.p >= 1.0):
                raise DimensionMismatchError(f"p must be >= 1, got {self.p}")
        elif self.kind == "spectral":
            if self.n is None or self.n < 1:
                raise DimensionMismatchError("spectral space needs n >= 1")
        elif self.kind == "suminf":
            if self.left is None or self.right is None:
                raise DimensionMismatchError("suminf needs left and right operands")
            if self.left.field != self.field or self.right.field != self.field:
                raise FieldMismatchError("suminf operands must share the field tag")
        else:
            raise DimensionMismatchError(f"unknown space kind {self.kind!r}")

    @property
    def total_dim(self) -> int:
        if self.kind == "lp":
            return self.dim
        if self.kind == "spectral":
            return self.n * self.n
        return self.left.total_dim + self.right.total_dim

    @property
    def dual_exponent(self) -> float:
        """Holder conjugate for lp spaces."""
        if self.kind != "lp":
            raise DimensionMismatchError("dual_exponent is an lp notion")
        if self.p == 1.0:
            return math.inf
        if math.isinf(self.p):
            return 1.0
        return self.p / (self.p - 1.0)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def lp(p, dim, field="real"):
        return SpaceSpec(kind="lp", field=field, p=float(p), dim=int(dim))

    @staticmethod
    def spectral(n, field="complex"):
        return SpaceSpec(kind="spectral", field=field, n=int(n))

    @staticmethod
    def suminf(left, right):
        return SpaceSpec(kind="suminf", field=left.field, left=left, right=right)

    # -- JSON ----------------------------------------------------------------

    def to_json_dict(self):
        if self.kind == "lp":
            p = "inf" if math.isinf(self.p) else self.p
            return {"kind": "lp", "p": p, "dim": self.dim, "field": self.field}
        if self.kind == "spectral":
            return {"kind": "spectral", "n": self.n, "field": self.field}
        return {"kind": "suminf",
                "left": self.left.to_json_dict(),
                "right": self.right.to_json_dict()}

    @staticmethod
    def from_json_dict(d):
        kind = d.get("kind")
        if kind == "lp":
            p = d["p"]
            p = math.inf if p == "inf" else float(p)
            return SpaceSpec.lp(p, int(d["dim"]), d.get("field", "real"))
        if kind == "spectral":
            return SpaceSpec.spectral(int(d["n"]), d.get("field", "complex"))
        if kind == "suminf":
            left = SpaceSpec.from_json_dict(d["left"])
            right = SpaceSpec.from_json_dict(d["right"])
            if "field" in d and d["field"] != left.field:
                raise FieldMismatchError("suminf field tag disagrees with operands")
            return SpaceSpec.suminf(left, right)
        raise DimensionMismatchError(f"unknown space kind {kind!r}")

    def to_json(self):
        return json.dumps(self.to_json_dict())


def _validate_coords(space, data):
    c = np.asarray(data, dtype=np.complex128).reshape(-1)
    if c.size != space.total_dim:
        raise DimensionMismatchError(
            f"{c.size} coordinates for a {space.total_dim}-dimensional space")
    if space.field == "real" and np.any(c.imag != 0.0):
        raise FieldMismatchError("real-field coordinates carry imaginary parts")
    c.flags.writeable = False
    return c


@dataclass(frozen=True)
class Vec:
    """A point of a space, as flat coordinates."""
    space: SpaceSpec
    coords: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class Functional:
    """A dual-space element acting on its primal space through
    pair(f, v) = sum conj(f_i) v_i."""
    space: SpaceSpec
    coords: np.ndarray = field(repr=False)


def vec(space, data) -> Vec:
    return Vec(space, _validate_coords(space, data))


def functional(space, data) -> Functional:
    return Functional(space, _validate_coords(space, data))


def _split(space, c):
    dl = space.left.total_dim
    return c[:dl], c[dl:]


# ---------------------------------------------------------------------------
# norms and pairing (coordinate-level workers, public wrappers below)
# ---------------------------------------------------------------------------

def norm_coords(space, c):
    if space.kind == "lp":
        a = np.abs(c)
        if math.isinf(space.p):
            return float(np.max(a)) if a.size else 0.0
        if space.p == 1.0:
            return float(np.sum(a))
        if space.p == 2.0:
            return float(np.sqrt(np.sum(a * a)))
        return float(np.sum(a ** space.p) ** (1.0 / space.p))
    if space.kind == "spectral":
        return _spectral_norm(c.reshape(space.n, space.n))
    cl, cr = _split(space, c)
    return max(norm_coords(space.left, cl), norm_coords(space.right, cr))


def dual_norm_coords(space, c):
    if space.kind == "lp":
        q = space.dual_exponent
        a = np.abs(c)
        if math.isinf(q):
            return float(np.max(a)) if a.size else 0.0
        if q == 1.0:
            return float(np.sum(a))
        if q == 2.0:
            return float(np.sqrt(np.sum(a * a)))
        return float(np.sum(a ** q) ** (1.0 / q))
    if space.kind == "spectral":
        return float(np.sum(_svd(c.reshape(space.n, space.n)).s))
    cl, cr = _split(space, c)
    return dual_norm_coords(space.left, cl) + dual_norm_coords(space.right, cr)


def pair_coords(f, v):
    return complex(np.vdot(f, v))


def norm(v: Vec) -> float:
    return norm_coords(v.space, v.coords)


def dual_norm(f: Functional) -> float:
    return dual_norm_coords(f.space, f.coords)


def pair(f: Functional, v: Vec):
    if f.space.total_dim != v.space.total_dim:
        raise DimensionMismatchError("functional/vector dimension mismatch")
    val = pair_coords(f.coords, v.coords)
    return val.real if f.space.field == "real" else val


# ---------------------------------------------------------------------------
# dual-ball projection (Euclidean-nearest point with dual norm <= 1)
# ---------------------------------------------------------------------------

def _simplex_project(a, radius=1.0):
    """Euclidean projection of a (nonnegative entries assumed) onto
    { w : w >= 0, sum w = radius }.  Sort-based O(d log d)."""
    u = np.sort(a)[::-1]
    css = np.cumsum(u)
    idx = np.nonzero(u * np.arange(1, a.size + 1) > (css - radius))[0]
    rho = idx[-1]
    theta = (css[rho] - radius) / (rho + 1.0)
    return np.maximum(a - theta, 0.0)


def _l1_ball_project(c, radius=1.0):
    a = np.abs(c)
    if np.sum(a) <= radius:
        return c.copy()
    w = _simplex_project(a, radius)
    out = np.zeros_like(c)
    nz = a > 0
    out[nz] = c[nz] * (w[nz] / a[nz])
    return out


def _lq_ball_project(c, q, radius=1.0, tol=1e-12, max_iter=100):
    """Projection onto { ||g||_q <= radius } for 1 < q < inf, phases
    preserved.  Safeguarded Newton on the Lagrange multiplier of the
    modulus problem  b + mu q b^{q-1} = a."""
    a = np.abs(c)
    if radius <= 0:
        return np.zeros_like(c)
    if np.sum((a / radius) ** q) <= 1.0:
        return c.copy()

    def moduli(mu):
        if q == 2.0:
            return a / (1.0 + 2.0 * mu)
        if q == 3.0:
            # rationalized form, stable as mu -> 0
            return 2.0 * a / (1.0 + np.sqrt(1.0 + 12.0 * mu * a))
        if q == 1.5:
            x = (-1.5 * mu + np.sqrt(2.25 * mu * mu + 4.0 * a)) / 2.0
            return x * x
        # bisection per coordinate on b + mu*q*b^(q-1) = a
        lo = np.zeros_like(a)
        hi = a.copy()
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            g = mid + mu * q * mid ** (q - 1.0) - a
            hi = np.where(g > 0, mid, hi)
            lo = np.where(g > 0, lo, mid)
        return 0.5 * (lo + hi)

    def excess(mu):
        b = moduli(mu)
        return float(np.sum((b / radius) ** q)) - 1.0

    lo_mu, hi_mu = 0.0, 1.0
    while excess(hi_mu) > 0:
        hi_mu *= 2.0
        if hi_mu > 1e18:
            break
    mu = 0.5 * hi_mu
    for _ in range(max_iter):
        r = excess(mu)
        if abs(r) <= tol:
            break
        if r > 0:
            lo_mu = mu
        else:
            hi_mu = mu
        b = moduli(mu)
        dbdmu = -q * b ** (q - 1.0) / (1.0 + mu * q * (q - 1.0) *
                                       np.where(b > 0, b, 1.0) ** (q - 2.0))
        drdmu = float(np.sum(q * (b / radius) ** (q - 1.0) * dbdmu / radius))
        step = mu - r / drdmu if drdmu < 0 else None
        mu = step if step is not None and lo_mu < step < hi_mu \
            else 0.5 * (lo_mu + hi_mu)
    b = moduli(mu)
    out = np.zeros_like(c)
    nz = a > 0
    out[nz] = c[nz] * (b[nz] / a[nz])
    return out


def _dual_project_coords(space, c, radius=1.0):
    if radius <= 0.0:
        return np.zeros_like(c)
    if space.kind == "lp":
        q = space.dual_exponent
        if math.isinf(q):
            a = np.abs(c)
            scale = np.minimum(1.0, radius / np.where(a > 0, a, 1.0))
            return c * scale
        if q == 1.0:
            return _l1_ball_project(c, radius)
        if q == 2.0:
            nc = float(np.linalg.norm(c))
            return c if nc <= radius else c * (radius / nc)
        return _lq_ball_project(c, q, radius)
    if space.kind == "spectral":
        n = space.n
        r = _svd(c.reshape(n, n))
        if float(np.sum(r.s)) <= radius:
            return c.copy()
        s = _simplex_project(r.s, radius)
        k = s.size
        M = (r.U[:, :k] * s) @ r.V[:, :k].conj().T
        return M.reshape(-1)
    # suminf dual ball: { dual_L(f) + dual_R(g) <= radius }; split the
    # budget by a golden-section search (each piece is convex in the split)
    cl, cr = _split(space, c)
    if dual_norm_coords(space, c) <= radius:
        return c.copy()

    def dist2(s):
        gl = _dual_project_coords(space.left, cl, s)
        gr = _dual_project_coords(space.right, cr, radius - s)
        return (float(np.sum(np.abs(cl - gl) ** 2)) +
                float(np.sum(np.abs(cr - gr) ** 2)))

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = 0.0, radius
    x1, x2 = b - invphi * (b - a), a + invphi * (b - a)
    f1, f2 = dist2(x1), dist2(x2)
    for _ in range(40):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = dist2(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = dist2(x2)
    s = x1 if f1 <= f2 else x2
    gl = _dual_project_coords(space.left, cl, s)
    gr = _dual_project_coords(space.right, cr, radius - s)
    return np.concatenate([gl, gr])


def dual_ball_project(f: Functional) -> Functional:
    g = _dual_project_coords(f.space, np.asarray(f.coords))
    if f.space.field == "real":
        g = g.real.astype(np.complex128)
    return functional(f.space, g)


# ---------------------------------------------------------------------------
# norming vectors / functionals (Holder-equality constructions)
# ---------------------------------------------------------------------------

def _phase(z):
    a = np.abs(z)
    out = np.ones_like(z)
    nz = a > 0
    out[nz] = z[nz] / a[nz]
    return out


def norming_vector(space, f):
    """Unit-ball vector v with pair(f, v) = dual_norm(f) (real,
    nonnegative).  f is a coordinate array."""
    f = np.asarray(f, dtype=np.complex128)
    if space.kind == "lp":
        a = np.abs(f)
        if not np.any(a > 0):
            return np.zeros_like(f)
        p = space.p
        if math.isinf(p):          # dual is l1: sign vector
            v = np.where(a > 0, _phase(f), 0.0)
            return v
        if p == 1.0:               # dual is linf: mass on a top coordinate
            j = int(np.argmax(a))
            v = np.zeros_like(f)
            v[j] = _phase(f[j:j + 1])[0]
            return v
        q = space.dual_exponent
        nq = float(np.sum(a ** q) ** (1.0 / q))
        v = _phase(f) * (a / nq) ** (q - 1.0)
        return v
    if space.kind == "spectral":
        n = space.n
        r = _svd(f.reshape(n, n))
        k = int(np.sum(r.s > 1e-14 * max(r.s[0], 1e-300)))
        if k == 0:
            return np.zeros_like(f)
        V = r.U[:, :k] @ r.V[:, :k].conj().T
        return V.reshape(-1)
    cl, cr = _split(space, f)
    return np.concatenate([norming_vector(space.left, cl),
                           norming_vector(space.right, cr)])


def norming_functional_of(space, x):
    """A canonical subdifferential representative: coordinates f with
    dual_norm(f) = 1 and pair(f, x) = norm(x), for x != 0."""
    x = np.asarray(x, dtype=np.complex128)
    if space.kind == "lp":
        a = np.abs(x)
        p = space.p
        if math.isinf(p):
            j = int(np.argmax(a))
            f = np.zeros_like(x)
            f[j] = _phase(x[j:j + 1])[0]
            return f
        if p == 1.0:
            return np.where(a > 0, _phase(x), 0.0)
        nx = norm_coords(space, x)
        return _phase(x) * (a / nx) ** (p - 1.0)
    if space.kind == "spectral":
        n = space.n
        r = _svd(x.reshape(n, n))
        F = np.outer(r.U[:, 0], r.V[:, 0].conj())
        return F.reshape(-1)
    cl, cr = _split(space, x)
    nl = norm_coords(space.left, cl)
    nr = norm_coords(space.right, cr)
    out = np.zeros_like(x)
    dl = space.left.total_dim
    if nl >= nr:
        out[:dl] = norming_functional_of(space.left, cl)
    else:
        out[dl:] = norming_functional_of(space.right, cr)
    return out


def sup_linear(space, c):
    """(value, argmax v): supremum of |sum_k c_k v_k| over the unit
    ball (note: no conjugation -- used for bilinear forms)."""
    c = np.asarray(c, dtype=np.complex128)
    v = np.conj(norming_vector(space, c))
    val = complex(np.dot(c, v))
    return abs(val), v


# ---------------------------------------------------------------------------
# extreme points (finite sets only; real polyhedral balls)
# ---------------------------------------------------------------------------

EXTREME_CAP = 4096


def extreme_points(space):
    """The unit ball's extreme points as rows, or None when the set is
    infinite or too large to enumerate."""
    if space.field != "real":
        return None
    if space.kind == "lp":
        d = space.dim
        if space.p == 1.0:
            E = np.concatenate([np.eye(d), -np.eye(d)], axis=0)
            return E.astype(np.complex128)
        if math.isinf(space.p):
            if 2 ** d > EXTREME_CAP:
                return None
            bits = np.array(np.meshgrid(*([[-1.0, 1.0]] * d),
                                        indexing="ij")).reshape(d, -1).T
            return bits.astype(np.complex128)
        return None
    if space.kind == "suminf":
        EL = extreme_points(space.left)
        ER = extreme_points(space.right)
        if EL is None or ER is None or EL.shape[0] * ER.shape[0] > EXTREME_CAP:
            return None
        out = np.empty((EL.shape[0] * ER.shape[0], space.total_dim),
                       dtype=np.complex128)
        k = 0
        for a in EL:
            for b in ER:
                out[k, :a.size] = a
                out[k, a.size:] = b
                k += 1
        return out
    return None


# ---------------------------------------------------------------------------
# batched helpers for multi-start ascent (lp vectorized, others loop)
# ---------------------------------------------------------------------------

def norm_rows(space, C):
    if space.kind == "lp":
        A = np.abs(C)
        if math.isinf(space.p):
            return np.max(A, axis=1)
        if space.p == 1.0:
            return np.sum(A, axis=1)
        return np.sum(A ** space.p, axis=1) ** (1.0 / space.p)
    return np.array([norm_coords(space, row) for row in C])


def norming_vector_rows(space, C):
    if space.kind == "lp":
        A = np.abs(C)
        p = space.p
        ph = np.where(A > 0, C / np.where(A > 0, A, 1.0), 0.0)
        if math.isinf(p):
            return ph
        if p == 1.0:
            out = np.zeros_like(C)
            j = np.argmax(A, axis=1)
            rows = np.arange(C.shape[0])
            out[rows, j] = ph[rows, j]
            return out
        q = space.dual_exponent
        nq = np.sum(A ** q, axis=1) ** (1.0 / q)
        nq = np.where(nq > 0, nq, 1.0)
        return ph * (A / nq[:, None]) ** (q - 1.0)
    return np.stack([norming_vector(space, row) for row in C])
