"""Compiled scalar kernels for the 1-jet Morse model.

Everything here takes the packed parameter vector built by
``MorseProblem.packed()``:

    P = [k, U, eps0, eps1, m, x1, kink_half_width, blend_width, metric]

with ``metric`` 0 for the flat metric on (a, theta) and 1 for the metric
pulled back by the untwisting map (a, theta) -> (a, theta + eta(a)).
"""

import math

import numpy as np
from numba import config, njit, prange

# the TBB found on many systems is too old for numba and only produces a warning
config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

TWO_PI = 2.0 * math.pi

# 16-point Gauss-Legendre rule on [-1, 1]
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


@njit(cache=True)
def smoothstep(t):
    """Clamped quintic smoothstep and its first two derivatives."""
    if t <= 0.0:
        return 0.0, 0.0, 0.0
    if t >= 1.0:
        return 1.0, 0.0, 0.0
    s = t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
    ds = 30.0 * t * t * (1.0 - t) * (1.0 - t)
    dds = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t)
    return s, ds, dds


@njit(cache=True)
def eta(a, P):
    k, U = P[0], P[1]
    width = U / 5.0
    s, ds, dds = smoothstep((a - 0.6 * U) / width)
    c = TWO_PI * k
    return c * s, c * ds / width, c * dds / (width * width)


@njit(cache=True)
def g_profile(a, P):
    """G(a), G'(a), G''(a): even, minimum at 0, equal to exp(eps0 (|a| - U)) for |a| >= U."""
    U, eps0, m, wG = P[1], P[2], P[4], P[7]
    r = abs(a)
    sg = 1.0 if a >= 0.0 else -1.0
    if r >= U:
        q, dq, ddq = r - U, 1.0, 0.0
    else:
        rm = math.sqrt(r * r + m * m)
        q1 = rm - math.sqrt(U * U + m * m)
        dq1 = r / rm
        ddq1 = m * m / (rm * rm * rm)
        q2 = r - U
        b, db, ddb = smoothstep((r - (U - wG)) / wG)
        db /= wG
        ddb /= wG * wG
        q = q1 + b * (q2 - q1)
        dq = dq1 + db * (q2 - q1) + b * (1.0 - dq1)
        ddq = ddq1 + ddb * (q2 - q1) + 2.0 * db * (1.0 - dq1) - b * ddq1
    G = math.exp(eps0 * q)
    return G, sg * eps0 * dq * G, (eps0 * ddq + eps0 * eps0 * dq * dq) * G


@njit(cache=True)
def _ramp(y, d):
    # C^1 ramp: 0 below -d, y above d, quadratic blend in between
    if y <= -d:
        return 0.0, 0.0
    if y >= d:
        return y, 1.0
    return (y + d) * (y + d) / (4.0 * d), (y + d) / (2.0 * d)


@njit(cache=True)
def h_prime(x, P):
    """Wrapping Hamiltonian derivative H'(x) = ramp(x - x1)^2 and H''(x)."""
    r, dr = _ramp(x - P[5], P[6])
    return r * r, 2.0 * r * dr


@njit(cache=True)
def _gl_integral(lo, hi, P):
    # int_lo^hi exp(eps0 t) H'(t) dt on a piece where the integrand is analytic
    if hi <= lo:
        return 0.0
    eps0 = P[2]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    acc = 0.0
    for i in range(_GL_X.shape[0]):
        t = mid + half * _GL_X[i]
        acc += _GL_W[i] * math.exp(eps0 * t) * h_prime(t, P)[0]
    return acc * half


@njit(cache=True)
def h_tilde(x, P):
    """eps0 * int_0^x exp(eps0 t) H'(t) dt and its first two derivatives."""
    eps0, x1, d = P[2], P[5], P[6]
    lo, hi = x1 - d, x1 + d
    val = 0.0
    if x > lo:
        val += _gl_integral(lo, min(x, hi), P)
    if x > hi:
        # split the quadratic piece so the rule stays accurate on long ranges
        n = int(math.ceil((x - hi) / 2.0))
        step = (x - hi) / n
        for j in range(n):
            val += _gl_integral(hi + j * step, hi + (j + 1) * step, P)
    hp, hpp = h_prime(x, P)
    e = math.exp(eps0 * x)
    return eps0 * val, eps0 * e * hp, eps0 * e * (eps0 * hp + hpp)


@njit(cache=True)
def h_value(a, th, P):
    eps1, U = P[3], P[1]
    G = g_profile(a, P)[0]
    et = eta(a, P)[0]
    val = -eps1 * G * math.cos(th + et)
    x = abs(a) - U
    if x > 0.0:
        val -= h_tilde(x, P)[0]
    return val


@njit(cache=True)
def h_grad(a, th, P):
    eps1, U = P[3], P[1]
    G, dG, _ = g_profile(a, P)
    et, det, _ = eta(a, P)
    psi = th + et
    c, s = math.cos(psi), math.sin(psi)
    ha = -eps1 * (dG * c - G * s * det)
    hth = eps1 * G * s
    x = abs(a) - U
    if x > 0.0:
        sg = 1.0 if a >= 0.0 else -1.0
        ha -= sg * h_tilde(x, P)[1]
    return ha, hth


@njit(cache=True)
def h_hessian(a, th, P):
    eps1, U = P[3], P[1]
    G, dG, ddG = g_profile(a, P)
    et, det, ddet = eta(a, P)
    psi = th + et
    c, s = math.cos(psi), math.sin(psi)
    haa = -eps1 * (ddG * c - 2.0 * dG * s * det - G * c * det * det - G * s * ddet)
    hat = eps1 * (dG * s + G * c * det)
    htt = eps1 * G * c
    x = abs(a) - U
    if x > 0.0:
        haa -= h_tilde(x, P)[2]
    return haa, hat, htt


@njit(cache=True)
def inverse_metric(a, P):
    """Entries (g11, g12, g22) of the inverse metric at a."""
    if P[8] == 0.0:
        return 1.0, 0.0, 1.0
    det = eta(a, P)[1]
    return 1.0, -det, 1.0 + det * det


@njit(cache=True)
def flow_field(a, th, P, sign):
    """sign = -1: negative gradient flow; +1: ascending flow."""
    ha, ht = h_grad(a, th, P)
    g11, g12, g22 = inverse_metric(a, P)
    return sign * (g11 * ha + g12 * ht), sign * (g12 * ha + g22 * ht)


@njit(cache=True)
def eval_many(a, th, P):
    n = a.shape[0]
    v = np.empty(n)
    ga = np.empty(n)
    gt = np.empty(n)
    for i in range(n):
        v[i] = h_value(a[i], th[i], P)
        ga[i], gt[i] = h_grad(a[i], th[i], P)
    return v, ga, gt


@njit(cache=True)
def wrap_angle(x):
    """Representative of x modulo 2 pi in (-pi, pi]."""
    y = x - TWO_PI * math.floor((x + math.pi) / TWO_PI)
    if y <= -math.pi:
        y += TWO_PI
    return y


@njit(cache=True, parallel=True)
def newton_many(a0, th0, P, tol_grad, max_iter, max_step):
    """Damped Newton on the gradient from many seeds.

    Returns final (a, theta), the gradient norm and a convergence flag.
    """
    n = a0.shape[0]
    a_out = np.empty(n)
    t_out = np.empty(n)
    gnorm = np.empty(n)
    ok = np.zeros(n, dtype=np.bool_)
    for i in prange(n):
        a, th = a0[i], th0[i]
        gn = 0.0
        for _ in range(max_iter):
            ga, gt = h_grad(a, th, P)
            gn = math.sqrt(ga * ga + gt * gt)
            if gn < tol_grad:
                ok[i] = True
                break
            haa, hat, htt = h_hessian(a, th, P)
            det = haa * htt - hat * hat
            if det == 0.0:
                break
            da = -(htt * ga - hat * gt) / det
            dt = -(-hat * ga + haa * gt) / det
            norm = math.sqrt(da * da + dt * dt)
            if norm > max_step:
                da *= max_step / norm
                dt *= max_step / norm
            a += da
            th += dt
        a_out[i] = a
        t_out[i] = th
        gnorm[i] = gn
    return a_out, t_out, gnorm, ok


# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                                49.0 / 176.0, -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                                -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)

# ray outcomes
RUNNING, LANDED, ESCAPED, STALLED, EXHAUSTED, STEP_FAILURE = 0, 1, 2, 3, 4, 5


@njit(cache=True)
def _dopri_step(a, th, h, P, sign, k1a, k1t):
    k2a, k2t = flow_field(a + h * _A21 * k1a, th + h * _A21 * k1t, P, sign)
    k3a, k3t = flow_field(a + h * (_A31 * k1a + _A32 * k2a),
                          th + h * (_A31 * k1t + _A32 * k2t), P, sign)
    k4a, k4t = flow_field(a + h * (_A41 * k1a + _A42 * k2a + _A43 * k3a),
                          th + h * (_A41 * k1t + _A42 * k2t + _A43 * k3t), P, sign)
    k5a, k5t = flow_field(a + h * (_A51 * k1a + _A52 * k2a + _A53 * k3a + _A54 * k4a),
                          th + h * (_A51 * k1t + _A52 * k2t + _A53 * k3t + _A54 * k4t),
                          P, sign)
    k6a, k6t = flow_field(a + h * (_A61 * k1a + _A62 * k2a + _A63 * k3a + _A64 * k4a + _A65 * k5a),
                          th + h * (_A61 * k1t + _A62 * k2t + _A63 * k3t + _A64 * k4t + _A65 * k5t),
                          P, sign)
    na = a + h * (_B1 * k1a + _B3 * k3a + _B4 * k4a + _B5 * k5a + _B6 * k6a)
    nt = th + h * (_B1 * k1t + _B3 * k3t + _B4 * k4t + _B5 * k5t + _B6 * k6t)
    k7a, k7t = flow_field(na, nt, P, sign)
    ea = h * (_E1 * k1a + _E3 * k3a + _E4 * k4a + _E5 * k5a + _E6 * k6a + _E7 * k7a)
    et = h * (_E1 * k1t + _E3 * k3t + _E4 * k4t + _E5 * k5t + _E6 * k6t + _E7 * k7t)
    return na, nt, ea, et, k7a, k7t


@njit(cache=True)
def integrate_ray(a, th, P, sign, targets, tol_endpoint, window, rtol, atol,
                  t_max, max_steps, record):
    """Adaptive Dormand-Prince integration of one flow line.

    Stops when the point comes within ``tol_endpoint`` of one of ``targets``
    (rows of (a, theta)), leaves |a| <= window, stalls, or exhausts its budget.
    When ``record`` is set every accepted step is stored.
    """
    cap = max_steps + 1 if record else 1
    path = np.empty((cap, 2))
    path[0, 0], path[0, 1] = a, th
    n_rec = 1
    t = 0.0
    h = 1e-2
    k1a, k1t = flow_field(a, th, P, sign)
    status = RUNNING
    hit = -1
    steps = 0
    while status == RUNNING:
        if steps >= max_steps or t >= t_max:
            status = EXHAUSTED
            break
        na, nt, ea, et, k7a, k7t = _dopri_step(a, th, h, P, sign, k1a, k1t)
        sa = atol + rtol * max(abs(a), abs(na))
        st = atol + rtol * max(abs(th), abs(nt))
        err = max(abs(ea) / sa, abs(et) / st)
        if err <= 1.0:
            t += h
            a, th = na, nt
            k1a, k1t = k7a, k7t
            steps += 1
            if record:
                path[n_rec, 0], path[n_rec, 1] = a, th
                n_rec += 1
            for j in range(targets.shape[0]):
                da = a - targets[j, 0]
                dt = wrap_angle(th - targets[j, 1])
                if da * da + dt * dt <= tol_endpoint * tol_endpoint:
                    status = LANDED
                    hit = j
                    break
            if status != RUNNING:
                break
            if abs(a) > window:
                status = ESCAPED
                break
            if math.sqrt(k1a * k1a + k1t * k1t) < 1e-14:
                status = STALLED
                break
        if err == 0.0:
            fac = 5.0
        else:
            fac = min(5.0, max(0.2, 0.9 * err ** -0.2))
        h *= fac
        if h < 1e-12:
            status = STEP_FAILURE
    return status, hit, a, th, t, steps, path[:n_rec]


@njit(cache=True, parallel=True)
def integrate_fan(a0, th0, P, sign, targets, tol_endpoint, window, rtol, atol,
                  t_max, max_steps):
    n = a0.shape[0]
    status = np.empty(n, dtype=np.int64)
    hit = np.empty(n, dtype=np.int64)
    a_end = np.empty(n)
    th_end = np.empty(n)
    for i in prange(n):
        s, j, a, th, _, _, _ = integrate_ray(a0[i], th0[i], P, sign, targets, tol_endpoint,
                                             window, rtol, atol, t_max, max_steps, False)
        status[i] = s
        hit[i] = j
        a_end[i] = a
        th_end[i] = th
    return status, hit, a_end, th_end
