"""Direct Birkhoff-James orthogonality verdict.

x is orthogonal to y when ||x + lambda y|| >= ||x|| for every scalar
lambda.  The margin min_lambda ||x + lambda y|| - ||x|| is computed by
minimizing the convex map g(lambda) = ||x + lambda y||: golden section
over the real line, or alternating golden sweeps over Re/Im plus one
Nelder-Mead polish over the complex plane.  The search never needs to
leave |lambda| <= 2||x||/||y||, where g already exceeds ||x||.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import DimensionMismatchError, ZeroVectorError
from .spaces import Vec, norm_coords, pair_coords

DEFAULT_TOL = 1e-8


@dataclass
class Verdict:
    """Outcome of the margin minimization.

    ``margin`` is always <= 0 (lambda = 0 is feasible); orthogonality
    means margin >= -tol.  A margin inside (-tol, -tol/10) is flagged
    borderline by storing ``evaluations`` with a negative sign, so
    equivalence tests can exclude instances that must not flap.
    """

    orthogonal: bool
    margin: float
    lambda_star: complex
    evaluations: int
    tol: float

    @property
    def borderline(self) -> bool:
        return self.evaluations < 0

    @property
    def num_evaluations(self) -> int:
        return abs(self.evaluations)


def _golden_scalar(f, a, b, value_tol, max_iter=200):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while it < max_iter and (b - a) > value_tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
        it += 1
    return (x1, f1) if f1 <= f2 else (x2, f2)


def bj_margin(x: Vec, y: Vec, tol: float = DEFAULT_TOL) -> Verdict:
    """Margin verdict for x perpendicular-to y (Birkhoff-James).

    Raises ``ZeroVectorError`` for x = 0 (the characterization theorems
    assume x != 0; note the definition makes 0 orthogonal to
    everything).  y = 0 returns orthogonal with margin 0.
    """
    if x.space.total_dim != y.space.total_dim or x.space != y.space:
        raise DimensionMismatchError("x and y must live in the same space")
    if tol <= 0:
        raise ValueError("tol must be positive")
    space = x.space
    xc, yc = np.asarray(x.coords), np.asarray(y.coords)
    nx = norm_coords(space, xc)
    if nx == 0.0:
        raise ZeroVectorError("bj_margin requires x != 0")
    ny = norm_coords(space, yc)
    if ny == 0.0:
        return Verdict(True, 0.0, 0.0 + 0.0j, 1, tol)

    evals = [0]

    def g_real(t):
        evals[0] += 1
        return norm_coords(space, xc + t * yc)

    def g_cplx(re, im):
        evals[0] += 1
        return norm_coords(space, xc + complex(re, im) * yc)

    R = 2.0 * nx / ny
    step_tol = min(tol / max(ny, 1.0), tol) * 1e-2

    if space.field == "real":
        lam, val = _golden_scalar(g_real, -R, R, step_tol)
        lam_star = complex(lam, 0.0)
    else:
        # alternating golden sweeps over Re/Im with shrinking brackets,
        # an 8-direction compass polish for non-smooth corners, then one
        # Nelder-Mead pass
        re, im = 0.0, 0.0
        val = g_cplx(re, im)
        radius = R
        for _sweep in range(60):
            re, _ = _golden_scalar(lambda t: g_cplx(t, im),
                                   re - radius, re + radius, step_tol)
            im, v2 = _golden_scalar(lambda t: g_cplx(re, t),
                                    im - radius, im + radius, step_tol)
            improved = val - v2
            val = min(val, v2)
            radius = max(radius * 0.5, 64.0 * step_tol)
            if improved <= tol * 1e-3 and radius <= 256.0 * step_tol:
                break
        s = 0.5 * math.sqrt(0.5)
        dirs = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0),
                (s, s), (s, -s), (-s, s), (-s, -s)]
        step = max(radius, 16.0 * step_tol)
        while step > step_tol:
            cand = [(g_cplx(re + step * dr, im + step * di), dr, di)
                    for dr, di in dirs]
            best = min(cand)
            if best[0] < val:
                val = best[0]
                re += step * best[1]
                im += step * best[2]
            else:
                step *= 0.5
        res = minimize(lambda z: g_cplx(z[0], z[1]), np.array([re, im]),
                       method="Nelder-Mead",
                       options={"xatol": step_tol, "fatol": tol * 1e-4,
                                "maxfev": 300})
        if res.fun < val:
            val = float(res.fun)
            re, im = float(res.x[0]), float(res.x[1])
        lam_star = complex(re, im)

    margin = min(val - nx, 0.0)
    if margin >= -tol:
        margin = min(margin, 0.0)
    orthogonal = margin >= -tol
    borderline = (-tol < margin < -tol / 10.0)
    n_evals = evals[0]
    return Verdict(orthogonal, margin, lam_star,
                   -n_evals if borderline else n_evals, tol)


def hilbert_coincidence(x: Vec, y: Vec, tol: float = DEFAULT_TOL) -> bool:
    """On l2 spaces Birkhoff-James orthogonality is inner-product
    orthogonality; returns |<x, y>| <= tol ||x|| ||y||."""
    space = x.space
    if space.kind != "lp" or space.p != 2.0:
        raise DimensionMismatchError("hilbert_coincidence needs an Lp(2, n) space")
    if space != y.space:
        raise DimensionMismatchError("x and y must live in the same space")
    ip = pair_coords(x.coords, y.coords)
    nx = norm_coords(space, x.coords)
    ny = norm_coords(space, y.coords)
    return abs(ip) <= tol * nx * ny
