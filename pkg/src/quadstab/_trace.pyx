# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled leaf tracer.  Same contract as the pure-Python ``_kernel_py``."""
from libc.math cimport sqrt, fabs, atan2, cos, sin, copysign, INFINITY, M_PI

import numpy as np

from ._kernel_py import ESCAPED, HIT, BUDGET, BRANCH

cdef double _GL_X[4]
cdef double _GL_W[4]
cdef double _LOC_S[10]
cdef double _LOC_SW[10]

_x, _w = np.polynomial.legendre.leggauss(4)
for _i in range(4):
    _GL_X[_i] = _x[_i]
    _GL_W[_i] = _w[_i]
_x, _w = np.polynomial.legendre.leggauss(10)
for _i in range(10):
    _LOC_S[_i] = 0.5 * (1.0 + _x[9 - _i])
    _LOC_SW[_i] = 0.5 * _w[9 - _i]


cdef inline double cabs_(double complex z) nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef inline double complex conj_(double complex z) nogil:
    return z.real - 1j * z.imag


cdef inline double complex csqrt_(double complex z) nogil:
    cdef double r = cabs_(z)
    cdef double re = sqrt(0.5 * (r + z.real))
    cdef double im = copysign(sqrt(0.5 * (r - z.real)), z.imag)
    return re + 1j * im


cdef class _Poly:
    cdef double complex[64] c
    cdef int m
    cdef int N

    def __init__(self, coeffs, int N):
        self.m = len(coeffs)
        if self.m > 64:
            raise ValueError("degree too large for the compiled kernel")
        for i in range(self.m):
            self.c[i] = coeffs[i]
        self.N = N

    cdef inline double complex peval(self, double complex z) nogil:
        cdef double complex acc = 0
        cdef int i
        for i in range(self.m):
            acc = acc * z + self.c[i]
        return acc

    cdef inline double complex f(self, double complex z, double complex ref) nogil:
        cdef double complex p = self.peval(z)
        cdef double complex val = 1
        cdef int i
        if self.N % 2 == 0:
            for i in range((self.N - 2) // 2):
                val = val * p
            return val
        for i in range((self.N - 3) // 2):
            val = val * p
        val = val * csqrt_(p)
        if (val * conj_(ref)).real < 0:
            val = -val
        return val

    cdef inline double absf(self, double complex z) nogil:
        return cabs_(self.peval(z)) ** (0.5 * (self.N - 2))

    cdef double complex local_integral(self, double complex z, double complex fz, double complex b) nogil:
        cdef double complex dz = z - b
        cdef double complex acc = 0
        cdef double complex fprev = fz
        cdef double complex fv
        cdef double s
        cdef int i
        for i in range(10):
            s = _LOC_S[i]
            fv = self.f(b + dz * s * s, fprev)
            fprev = fv
            acc = acc + _LOC_SW[i] * fv * 2.0 * s
        return -acc * dz

    cdef double local_abs_integral(self, double complex z, double complex b) nogil:
        cdef double complex dz = z - b
        cdef double acc = 0
        cdef double s
        cdef int i
        for i in range(10):
            s = _LOC_S[i]
            acc += _LOC_SW[i] * self.absf(b + dz * s * s) * 2.0 * s
        return acc * cabs_(dz)


def fvalue(coeffs, int N, z, fref):
    return _Poly(coeffs, N).f(z, fref)


def local_integral(coeffs, int N, z, fz, b):
    return _Poly(coeffs, N).local_integral(z, fz, b)


def local_abs_integral(coeffs, int N, z, b):
    return _Poly(coeffs, N).local_abs_integral(z, b)


cdef inline double complex _direction(double complex rot, double sigma, double complex f) nogil:
    cdef double a = cabs_(f)
    if a == 0.0:
        return 0
    return sigma * rot * conj_(f) / a


cdef struct StepOut:
    double complex z
    double complex f
    double complex w
    double seg


cdef StepOut _step(_Poly P, double complex rot, double complex irot, double sigma, double level,
                   double complex z, double complex fz, double complex w, double h):
    cdef StepOut out
    cdef double complex k1, k2, k3, k4, za, zb, zc, zn, fa, fb, fc, fn, half, mid, fprev, fv, dw, wn, g, delta, zm
    cdef double gg, r
    cdef int i
    k1 = _direction(rot, sigma, fz)
    za = z + 0.5 * h * k1
    fa = P.f(za, fz)
    k2 = _direction(rot, sigma, fa)
    zb = z + 0.5 * h * k2
    fb = P.f(zb, fa)
    k3 = _direction(rot, sigma, fb)
    zc = z + h * k3
    fc = P.f(zc, fb)
    k4 = _direction(rot, sigma, fc)
    zn = z + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
    half = 0.5 * (zn - z)
    mid = 0.5 * (zn + z)
    fprev = fz
    dw = 0
    for i in range(4):
        fv = P.f(mid + half * _GL_X[i], fprev)
        fprev = fv
        dw = dw + _GL_W[i] * fv
    dw = dw * half
    fn = P.f(zn, fprev)
    wn = w + dw
    g = irot * fn
    gg = g.real * g.real + g.imag * g.imag
    if gg > 0.0:
        r = (irot * wn).imag - level
        delta = -r * 1j * conj_(g) / gg
        zn = zn + delta
        wn = wn + fn * delta
        fn = P.f(zn, fn)
    zm = 0.5 * (z + zn) + 0.125 * h * (k1 - _direction(rot, sigma, fn))
    out.seg = h * (cabs_(fz) + 4.0 * cabs_(P.f(zm, fz)) + cabs_(fn)) / 6.0
    out.z = zn
    out.f = fn
    out.w = wn
    return out


def trace_leaf(coeffs, roots, int N, double phase, z0, f0, w0, double level, double sigma,
               double step_factor, double r_stop, double capture, double stop_radius,
               double hit_tol, double w_scale, long max_steps, int skip):
    """Trace one leaf from z0; see ``_kernel_py.trace_leaf``."""
    cdef _Poly P = _Poly(coeffs, N)
    cdef int nz = len(roots)
    cdef double complex[64] rts
    cdef int j, side, it
    if nz > 64:
        raise ValueError("too many zeros for the compiled kernel")
    for j in range(nz):
        rts[j] = roots[j]
    cdef double complex rot = cos(M_PI * phase) + 1j * sin(M_PI * phase)
    cdef double complex irot = conj_(rot)
    cdef double complex z = z0
    cdef double complex fz = f0
    cdef double complex w = w0
    cdef double complex gap
    cdef double near_min = INFINITY
    cdef int target = -1
    cdef long steps = 0
    cdef double length = 0.0
    cdef double half_n = 0.5 * N
    cdef double rate, h, lo, hi, glo, ghi, hm, gm, dj, eta, ang
    cdef StepOut st, sm
    pts = [complex(z)]
    while steps < max_steps:
        steps += 1
        rate = 0.0
        for j in range(nz):
            rate += 1.0 / cabs_(z - rts[j])
        h = step_factor / (half_n * rate)
        st = _step(P, rot, irot, sigma, level, z, fz, w, h)
        if N % 2 == 1:
            gap = st.f / fz
            ang = fabs(atan2(gap.imag, gap.real))
            if ang > 0.5 * M_PI:
                return pts, BRANCH, -1, complex(w), near_min, complex(fz), steps, length
        if cabs_(st.z) >= r_stop:
            lo = 0.0
            hi = h
            glo = cabs_(z) - r_stop
            ghi = cabs_(st.z) - r_stop
            side = 0
            for it in range(60):
                hm = (lo * ghi - hi * glo) / (ghi - glo)
                sm = _step(P, rot, irot, sigma, level, z, fz, w, hm)
                gm = cabs_(sm.z) - r_stop
                st = sm
                if fabs(gm) <= 1e-14 * r_stop:
                    break
                if gm > 0:
                    hi = hm
                    ghi = gm
                    if side == -1:
                        glo *= 0.5
                    side = -1
                else:
                    lo = hm
                    glo = gm
                    if side == 1:
                        ghi *= 0.5
                    side = 1
            pts.append(complex(st.z))
            return pts, ESCAPED, -1, complex(st.w), near_min, complex(st.f), steps, length + st.seg
        pts.append(complex(st.z))
        length += st.seg
        z = st.z
        fz = st.f
        w = st.w
        if target >= 0:
            # stop on arrival or at the closest passage, whichever comes first
            gap = irot * P.local_integral(z, fz, rts[target])
            if cabs_(z - rts[target]) < stop_radius or sigma * gap.real <= 0.0:
                w = w + gap * rot
                length += P.local_abs_integral(z, rts[target])
                pts.append(complex(rts[target]))
                return pts, HIT, target, complex(w), near_min, complex(fz), steps, length
            continue
        for j in range(nz):
            if j == skip:
                continue
            dj = cabs_(z - rts[j])
            if dj < capture:
                gap = irot * P.local_integral(z, fz, rts[j])
                if sigma * gap.real > 0.0:
                    eta = fabs(gap.imag) / w_scale
                    if eta < near_min:
                        near_min = eta
                    if eta < hit_tol:
                        target = j
                        if dj < stop_radius:
                            w = w + gap * rot
                            length += P.local_abs_integral(z, rts[j])
                            pts.append(complex(rts[j]))
                            return pts, HIT, j, complex(w), near_min, complex(fz), steps, length
    return pts, BUDGET, -1, complex(w), near_min, complex(fz), steps, length
