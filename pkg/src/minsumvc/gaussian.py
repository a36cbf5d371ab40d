"""Standard normal CDF, its inverse, and the Gaussian-copula quantities
behind the hardness constructions.

For correlation rho in [-1, 1] and u, v in [0, 1], the copula value

    C_rho(u, v) = Pr[X <= Phi^-1(u) and Y <= Phi^-1(v)]

for (X, Y) bivariate standard normal with correlation rho.  Closed forms:
C_1(u, v) = min(u, v), C_0(u, v) = u*v, C_-1(u, v) = max(0, u + v - 1).

The general case is computed by one-dimensional quadrature of

    integral phi(z) * Phi((Phi^-1(v) - rho*z) / sqrt(1 - rho^2)) dz

over z <= Phi^-1(u), truncated at |z| <= 8.  The region where the inner
Phi factor is saturated (0 or 1 beyond 8 standard deviations) is integrated
in closed form; Gauss-Legendre nodes cover the remaining transition window,
with a node-doubling check on the scalar path.

The diagonal slice C_rho(r, r), its derivative in r, and its integral over
r in [0, 1] are what the hardness bounds consume.  The derivative has the
conditional-CDF closed form 2 * Phi(sqrt((1-rho)/(1+rho)) * Phi^-1(r)).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtr

SQRT2 = math.sqrt(2.0)
SQRT_TAU = math.sqrt(2.0 * math.pi)

# Truncation radius for normal tails; Phi(-8) ~ 6.2e-16.
Z_CUT = 8.0

_GL_CACHE = {}


def _gauss_legendre(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def phi_pdf(x):
    return math.exp(-0.5 * x * x) / SQRT_TAU


def phi_cdf(x):
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-x / SQRT2)


# Rational initial guess for the inverse normal CDF (Acklam's coefficients),
# refined by two Newton steps against phi_cdf.
_INV_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
          1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_INV_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
          6.680131188771972e+01, -1.328068155288572e+01)
_INV_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
          -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_INV_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
          3.754408661907416e+00)
_P_LOW = 0.02425


def _phi_inv_guess(p):
    a, b, c, d = _INV_A, _INV_B, _INV_C, _INV_D
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    if p > 1.0 - _P_LOW:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
                ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    q = p - 0.5
    r = q * q
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / \
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)


def phi_inv(p):
    """Inverse standard normal CDF on (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError("phi_inv requires 0 < p < 1")
    x = _phi_inv_guess(p)
    for _ in range(2):
        pdf = phi_pdf(x)
        if pdf <= 0.0:
            break
        x -= (phi_cdf(x) - p) / pdf
    return x


def phi_inv_vec(p):
    """Vectorized phi_inv; same rational-guess plus Newton construction."""
    p = np.asarray(p, dtype=np.float64)
    if np.any(p <= 0.0) or np.any(p >= 1.0):
        raise ValueError("phi_inv requires 0 < p < 1")
    a, b, c, d = _INV_A, _INV_B, _INV_C, _INV_D
    x = np.empty_like(p)

    low = p < _P_LOW
    high = p > 1.0 - _P_LOW
    mid = ~(low | high)

    if np.any(low):
        q = np.sqrt(-2.0 * np.log(p[low]))
        x[low] = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
                 ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    if np.any(high):
        q = np.sqrt(-2.0 * np.log(1.0 - p[high]))
        x[high] = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
                   ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    if np.any(mid):
        q = p[mid] - 0.5
        r = q * q
        x[mid] = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / \
                 (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)

    for _ in range(2):
        pdf = np.exp(-0.5 * x * x) / SQRT_TAU
        x = x - (ndtr(x) - p) / pdf
    return x


def _copula_quad(rho, bx, by, n_nodes):
    """Quadrature for C_rho at quantiles (bx, by), |rho| < 1, rho != 0.

    Splits [-Z_CUT, min(bx, Z_CUT)] into the part where the inner Phi factor
    is saturated at 1 (closed form) and the transition window (Gauss-Legendre).
    """
    s = math.sqrt(1.0 - rho * rho)
    a0 = -Z_CUT
    b0 = min(bx, Z_CUT)
    if b0 <= a0:
        return 0.0
    # endpoints where (by - rho z)/s hits +Z_CUT and -Z_CUT
    z_plus = (by - Z_CUT * s) / rho
    z_minus = (by + Z_CUT * s) / rho
    z_plus_c = max(a0, min(z_plus, b0))
    if rho < 0.0:
        # factor increases with z, saturates at 1 above z_plus
        ones = max(0.0, float(ndtr(b0) - ndtr(z_plus_c)))
    else:
        # factor decreases with z, saturates at 1 below z_plus
        ones = max(0.0, float(ndtr(z_plus_c) - ndtr(a0)))
    qa = max(a0, min(min(z_plus, z_minus), b0))
    qb = max(a0, min(max(z_plus, z_minus), b0))
    if qb <= qa:
        return ones
    t, w = _gauss_legendre(n_nodes)
    half = 0.5 * (qb - qa)
    mid = 0.5 * (qb + qa)
    z = mid + half * t
    vals = np.exp(-0.5 * z * z) / SQRT_TAU * ndtr((by - rho * z) / s)
    return ones + half * float(np.dot(w, vals))


def gaussian_copula(rho, x, y):
    """C_rho(x, y) for x, y in [0, 1], rho in [-1, 1].

    Quadrature path targets 1e-10 absolute via node doubling; exact closed
    forms at rho in {-1, 0-ish, 1} and at the boundary arguments.
    """
    if not -1.0 <= rho <= 1.0:
        raise ValueError("rho must lie in [-1, 1]")
    if not 0.0 <= x <= 1.0 or not 0.0 <= y <= 1.0:
        raise ValueError("x and y must lie in [0, 1]")
    if x == 0.0 or y == 0.0:
        return 0.0
    if x == 1.0:
        return y
    if y == 1.0:
        return x
    if rho == 1.0:
        return min(x, y)
    if rho == -1.0:
        return max(0.0, x + y - 1.0)
    bx = phi_inv(x)
    by = phi_inv(y)
    if abs(rho) < 1e-12:
        return float(y * (ndtr(min(bx, Z_CUT)) - ndtr(-Z_CUT)))
    val = _copula_quad(rho, bx, by, 96)
    for n in (192, 384):
        ref = _copula_quad(rho, bx, by, n)
        if abs(ref - val) <= 1e-10:
            return ref
        val = ref
    return val


def copula_diag(rho, r):
    """C_rho(r, r)."""
    return gaussian_copula(rho, r, r)


def copula_diag_grid(rho, r, n_nodes=160):
    """Vectorized C_rho(r_i, r_i) over an array of r values in [0, 1].

    Same saturated-region decomposition as the scalar path, with fixed
    Gauss-Legendre nodes on each transition window.  Agreement with the
    scalar route is pinned by tests.
    """
    if not -1.0 <= rho <= 1.0:
        raise ValueError("rho must lie in [-1, 1]")
    r = np.asarray(r, dtype=np.float64)
    if np.any(r < 0.0) or np.any(r > 1.0):
        raise ValueError("r must lie in [0, 1]")
    if rho == 1.0:
        return r.copy()
    if rho == -1.0:
        return np.maximum(0.0, 2.0 * r - 1.0)

    out = np.zeros_like(r)
    tiny = ndtr(-Z_CUT)
    inner = (r > tiny) & (r < 1.0 - 1e-16)
    out[r >= 1.0 - 1e-16] = r[r >= 1.0 - 1e-16]
    if not np.any(inner):
        return out
    b = phi_inv_vec(r[inner])

    if abs(rho) < 1e-12:
        out[inner] = r[inner] * (ndtr(np.minimum(b, Z_CUT)) - tiny)
        return out

    s = math.sqrt(1.0 - rho * rho)
    a0 = -Z_CUT
    b0 = np.minimum(b, Z_CUT)
    z1 = (b + Z_CUT * s) / rho
    z2 = (b - Z_CUT * s) / rho
    if rho < 0.0:
        z_lo, z_hi = z1, z2
    else:
        z_lo, z_hi = z2, z1
    qa = np.clip(z_lo, a0, b0)
    qb = np.clip(z_hi, a0, b0)
    if rho < 0.0:
        ones = np.maximum(0.0, ndtr(b0) - ndtr(qb))
    else:
        ones = np.maximum(0.0, ndtr(qa) - ndtr(a0))

    t, w = _gauss_legendre(n_nodes)
    half = 0.5 * (qb - qa)
    mid = 0.5 * (qb + qa)
    z = mid[None, :] + half[None, :] * t[:, None]
    vals = np.exp(-0.5 * z * z) / SQRT_TAU * ndtr((b[None, :] - rho * z) / s)
    quad = half * (w @ vals)
    out[inner] = ones + quad
    return out


def copula_diag_deriv(rho, r):
    """d/dr of C_rho(r, r), from the conditional-CDF closed form.

    Equals 2 * Phi(sqrt((1-rho)/(1+rho)) * Phi^-1(r)); ranges over (0, 2).
    """
    if not -1.0 < rho < 1.0:
        raise ValueError("rho must lie in (-1, 1)")
    if not 0.0 < r < 1.0:
        raise ValueError("r must lie in (0, 1)")
    return 2.0 * phi_cdf(math.sqrt((1.0 - rho) / (1.0 + rho)) * phi_inv(r))


def copula_diag_integral(rho, min_exp=12, tol=1e-7, max_exp=15):
    """integral over r in [0, 1] of C_rho(r, r) dr.

    Composite Simpson on a uniform dyadic grid of at least 2^min_exp + 1
    nodes; the value on the doubled grid must agree within tol (the halved
    grid is the stride-2 subgrid, so one evaluation serves both).
    """
    if not -1.0 <= rho <= 1.0:
        raise ValueError("rho must lie in [-1, 1]")
    prev = None
    for g in range(min_exp, max_exp + 1):
        n = (1 << g) + 1
        r = np.linspace(0.0, 1.0, n)
        vals = copula_diag_grid(rho, r)
        full = _simpson_uniform(vals, 1.0 / (n - 1))
        half = _simpson_uniform(vals[::2], 2.0 / (n - 1))
        if abs(full - half) <= tol:
            return full
        prev = full
    return prev


def _simpson_uniform(vals, h):
    n = vals.size
    if n < 3 or n % 2 == 0:
        raise ValueError("composite Simpson needs an odd node count >= 3")
    return float(h / 3.0 * (vals[0] + vals[-1] + 4.0 * vals[1:-1:2].sum() + 2.0 * vals[2:-2:2].sum()))
