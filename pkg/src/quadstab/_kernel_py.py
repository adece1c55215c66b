"""Pure-Python leaf tracer; reference implementation of the compiled kernel.

A leaf of phase theta is a level set Im(e^{-i pi theta} w) = level of the
distinguished coordinate w = int f dz, where f = p^{(N-2)/2}.  The tracer
integrates the unit direction field by RK4 in arclength, follows the square
root branch by continuity, accumulates w with Gauss-Legendre quadrature, and
projects each new point back onto the level set with one Newton step.
"""
import cmath
import math

import numpy as np

ESCAPED = 0
HIT = 1
BUDGET = 2
BRANCH = 3

_GL_X, _GL_W = (list(map(float, a)) for a in np.polynomial.legendre.leggauss(4))
_LOC_X, _LOC_W = (list(map(float, a)) for a in np.polynomial.legendre.leggauss(10))
# nodes for the s^2 substitution live on [0, 1], ordered from s=1 down to s=0
_LOC_S = [0.5 * (1.0 + x) for x in reversed(_LOC_X)]
_LOC_SW = [0.5 * w for w in reversed(_LOC_W)]


def _peval(coeffs, z):
    acc = 0j
    for c in coeffs:
        acc = acc * z + c
    return acc


def fvalue(coeffs, N, z, fref):
    """p(z)^{(N-2)/2}, on the branch closest to ``fref`` when N is odd."""
    p = _peval(coeffs, z)
    if N % 2 == 0:
        return p ** ((N - 2) // 2)
    val = cmath.sqrt(p) * p ** ((N - 3) // 2)
    if (val * fref.conjugate()).real < 0:
        val = -val
    return val


def local_integral(coeffs, N, z, fz, b):
    """Integral of f from z to the zero b along the straight segment."""
    dz = z - b
    acc = 0j
    fprev = fz
    for s, w in zip(_LOC_S, _LOC_SW):
        fv = fvalue(coeffs, N, b + dz * s * s, fprev)
        fprev = fv
        acc += w * fv * 2.0 * s
    return -acc * dz


def local_abs_integral(coeffs, N, z, b):
    """Integral of |f| |dz| from z to the zero b along the straight segment."""
    dz = z - b
    acc = 0.0
    for s, w in zip(_LOC_S, _LOC_SW):
        acc += w * abs(_peval(coeffs, b + dz * s * s)) ** ((N - 2) / 2.0) * 2.0 * s
    return acc * abs(dz)


def _step(coeffs, N, rot, irot, sigma, level, z, fz, w, h):
    """One RK4 step of arclength h, projected back onto the level set.

    Returns the new point, f and w there, and the arclength of |f|.
    """
    k1 = _direction(rot, sigma, fz)
    za = z + 0.5 * h * k1
    fa = fvalue(coeffs, N, za, fz)
    k2 = _direction(rot, sigma, fa)
    zb = z + 0.5 * h * k2
    fb = fvalue(coeffs, N, zb, fa)
    k3 = _direction(rot, sigma, fb)
    zc = z + h * k3
    fc = fvalue(coeffs, N, zc, fb)
    k4 = _direction(rot, sigma, fc)
    zn = z + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
    # Gauss-Legendre for the increment of w along the chord
    half = 0.5 * (zn - z)
    mid = 0.5 * (zn + z)
    fprev = fz
    dw = 0j
    for x, wt in zip(_GL_X, _GL_W):
        fv = fvalue(coeffs, N, mid + half * x, fprev)
        fprev = fv
        dw += wt * fv
    dw *= half
    fn = fvalue(coeffs, N, zn, fprev)
    wn = w + dw
    # Newton projection onto the level set
    g = irot * fn
    gg = abs(g) ** 2
    if gg > 0.0:
        r = (irot * wn).imag - level
        delta = -r * 1j * g.conjugate() / gg
        zn = zn + delta
        wn = wn + fn * delta
        fn = fvalue(coeffs, N, zn, fn)
    # Hermite midpoint of the step for Simpson's rule in arclength
    zm = 0.5 * (z + zn) + 0.125 * h * (k1 - _direction(rot, sigma, fn))
    seg = h * (abs(fz) + 4.0 * abs(fvalue(coeffs, N, zm, fz)) + abs(fn)) / 6.0
    return zn, fn, wn, seg


def _direction(rot, sigma, f):
    a = abs(f)
    if a == 0.0:
        return 0j
    return sigma * rot * f.conjugate() / a


def trace_leaf(coeffs, roots, N, phase, z0, f0, w0, level, sigma, step_factor, r_stop,
               capture, stop_radius, hit_tol, w_scale, max_steps, skip):
    """Trace one leaf from z0.

    Returns (points, code, hit_index, w_end, near_min, f_end, steps, length).
    The step is ``step_factor`` over the rotation rate bound
    (N/2) * sum 1/|z - r_j| of the direction field.  An escaping leaf ends
    exactly on the circle |z| = r_stop.
    """
    rot = cmath.exp(1j * math.pi * phase)
    irot = rot.conjugate()
    nz = len(roots)
    z = complex(z0)
    fz = complex(f0)
    w = complex(w0)
    pts = [z]
    near_min = math.inf
    target = -1
    steps = 0
    length = 0.0
    half_n = 0.5 * N

    while steps < max_steps:
        steps += 1
        rate = 0.0
        for j in range(nz):
            rate += 1.0 / abs(z - roots[j])
        h = step_factor / (half_n * rate)
        zn, fn, wn, seg = _step(coeffs, N, rot, irot, sigma, level, z, fz, w, h)
        if N % 2 == 1 and abs(cmath.phase(fn / fz)) > 0.5 * math.pi:
            return pts, BRANCH, -1, w, near_min, fz, steps, length
        if abs(zn) >= r_stop:
            # land on the circle: regula falsi (Illinois) on the step length
            lo, hi = 0.0, h
            glo, ghi = abs(z) - r_stop, abs(zn) - r_stop
            side = 0
            for _ in range(60):
                hm = (lo * ghi - hi * glo) / (ghi - glo)
                zm, fm, wm, sm = _step(coeffs, N, rot, irot, sigma, level, z, fz, w, hm)
                gm = abs(zm) - r_stop
                zn, fn, wn, seg = zm, fm, wm, sm
                if abs(gm) <= 1e-14 * r_stop:
                    break
                if gm > 0:
                    hi, ghi = hm, gm
                    if side == -1:
                        glo *= 0.5
                    side = -1
                else:
                    lo, glo = hm, gm
                    if side == 1:
                        ghi *= 0.5
                    side = 1
            pts.append(zn)
            return pts, ESCAPED, -1, wn, near_min, fn, steps, length + seg
        pts.append(zn)
        length += seg
        z, fz, w = zn, fn, wn
        if target >= 0:
            # stop on arrival or at the closest passage, whichever comes first
            gap = irot * local_integral(coeffs, N, z, fz, roots[target])
            if abs(z - roots[target]) < stop_radius or sigma * gap.real <= 0.0:
                w = w + gap * rot
                length += local_abs_integral(coeffs, N, z, roots[target])
                pts.append(roots[target])
                return pts, HIT, target, w, near_min, fz, steps, length
            continue
        for j in range(nz):
            if j == skip:
                continue
            dj = abs(z - roots[j])
            if dj < capture:
                gap = irot * local_integral(coeffs, N, z, fz, roots[j])
                if sigma * gap.real > 0.0:
                    eta = abs(gap.imag) / w_scale
                    if eta < near_min:
                        near_min = eta
                    if eta < hit_tol:
                        target = j
                        if dj < stop_radius:
                            w = w + gap * rot
                            length += local_abs_integral(coeffs, N, z, roots[j])
                            pts.append(roots[j])
                            return pts, HIT, j, w, near_min, fz, steps, length
    return pts, BUDGET, -1, w, near_min, fz, steps, length
