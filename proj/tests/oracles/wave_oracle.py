"""Reference values for the potential, regular-solution and bracketing tests.

Two independent routes, neither sharing code with the C++ library:
  * mpmath's hyp1f1 at high precision for the growing-member coefficient L(k)
    and its roots (eigenvalues, even/odd gaps at large d);
  * scipy's DOP853 integrator on the Schroedinger equation itself for
    wavefunction profiles and node counts.
Run with `python3 wave_oracle.py`; the printed values are frozen into the tests.
"""
import math

import mpmath as mp
import numpy as np
from scipy.integrate import solve_ivp


def v_sym(x, alpha, g1, g2, d):
    y = abs(x) - d
    return -2 * g1**2 * math.exp(-alpha * y) + g2**2 * math.exp(-2 * alpha * y)


def growing_coefficient(k, alpha, g1, g2, d, parity):
    """c_grow of the regular solution, f_+ = e^{-t/2} t^mu M(mu-kappa+1/2, 1+2mu, t)."""
    alpha, g1, g2, d, k = (mp.mpf(v) for v in (alpha, g1, g2, d, k))
    kappa = g1**2 / (alpha * g2)
    mu = k / alpha
    t0 = 2 * g2 / alpha * mp.exp(alpha * d)
    a, b = mu - kappa + mp.mpf(1) / 2, 1 + 2 * mu
    f = mp.exp(-t0 / 2) * t0**mu * mp.hyp1f1(a, b, t0)
    dfdt = mp.exp(-t0 / 2) * t0**mu * (mp.hyp1f1(a, b, t0) * (mu / t0 - mp.mpf(1) / 2)
                                       + a / b * mp.hyp1f1(a + 1, b + 1, t0))
    dfdx = -alpha * t0 * dfdt
    return -dfdx / (2 * k) if parity == "even" else f / (2 * k)


def level(k_guess, params, parity, dps, width):
    with mp.workdps(dps):
        lo, hi = mp.mpf(k_guess) - width, mp.mpf(k_guess) + width
        return mp.findroot(lambda k: growing_coefficient(k, *params, parity), (lo, hi), solver="anderson")


def profile(k, params, parity, xs):
    alpha, g1, g2, d = params
    E = -k * k
    y0 = [1.0, 0.0] if parity == "even" else [0.0, 1.0]
    rhs = lambda x, y: [y[1], (v_sym(x, alpha, g1, g2, d) - E) * y[0]]
    sol = solve_ivp(rhs, (0.0, max(xs)), y0, method="DOP853", rtol=1e-13, atol=1e-15, t_eval=xs)
    return sol.y[0]


def nodes(k, params, parity, x_max):
    xs = np.linspace(1e-9, x_max, 20001)
    psi = profile(k, params, parity, xs)
    return int(np.sum(np.sign(psi[1:]) != np.sign(psi[:-1])))


def show(label, value, digits=17):
    print(f"{label:50s} {mp.nstr(value, digits)}")


fig = (1.0, 1.8, 1.8, 1.0)

show("v_sym(0), d=1, alpha=g=1", v_sym(0.0, 1.0, 1.0, 1.0, 1.0))
show("e^2 - 2e", mp.e**2 - 2 * mp.e)
show("t0 = 3.6 e", 3.6 * mp.e)

k_even = level("1.3557", fig, "even", 40, mp.mpf("1e-4"))
k_odd = level("1.2681", fig, "odd", 40, mp.mpf("1e-4"))
show("k even level 0 (d=1)", k_even, 20)
show("k odd level 0 (d=1)", k_odd, 20)
show("gap pair 0 (d=1)", k_even**2 - k_odd**2, 20)

for parity, k in (("even", 1.355765), ("odd", 1.268113)):
    xs = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
    print(f"profile {parity} k={k}:", " ".join(f"{v:.12e}" for v in profile(k, fig, parity, xs)))

for parity, k in (("even", 1.354), ("even", 1.358), ("odd", 1.2681), ("odd", 1.2682)):
    psi8 = profile(k, fig, parity, [8.0])[0]
    show(f"psi(8) {parity} k={k}", psi8, 6)

for parity, k in (("even", 2.5), ("even", 1.0), ("even", 0.3), ("odd", 1.0), ("odd", 0.3)):
    print(f"half-line nodes on (0, 14] {parity} k={k}: {nodes(k, fig, parity, 14.0)}")

with mp.workdps(40):
    for parity, guess in (("even", "0.401"), ("odd", "0.2476")):
        show(f"k {parity} level 1 (d=1)", level(guess, fig, parity, 40, mp.mpf("1e-3")), 20)

for d, dps in ((2, 60), (3, 80), (4, 160), (5, 380)):
    params = (1.0, 1.8, 1.8, float(d))
    with mp.workdps(dps):
        ke = level("1.3", params, "even", dps, mp.mpf("1e-3"))
        ko = level("1.3", params, "odd", dps, mp.mpf("1e-3"))
        show(f"gap pair 0 (d={d})", abs(ke**2 - ko**2), 12)


def full_line_level(n, alpha, g1, g2, x_left, x_right):
    """Dirichlet shooting on [x_left, x_right] by bisection on the node count."""
    V = lambda x: -2 * g1**2 * math.exp(-alpha * x) + g2**2 * math.exp(-2 * alpha * x)

    def count(E):
        rhs = lambda x, y: [y[1], (V(x) - E) * y[0]]
        xs = np.linspace(x_left, x_right, 40001)
        sol = solve_ivp(rhs, (x_left, x_right), [0.0, 1e-30], method="DOP853", rtol=1e-12, atol=1e-300, t_eval=xs)
        psi = sol.y[0][1:]
        return int(np.sum(np.sign(psi[1:]) != np.sign(psi[:-1])))

    lo, hi = -(g1**4) / g2**2, 0.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if count(mid) > n:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


show("full-line Morse E0, alpha=g=1", full_line_level(0, 1.0, 1.0, 1.0, -4.0, 40.0), 10)
for n in (0, 1):
    show(f"full-line Morse E{n}, alpha=1, g=1.8", full_line_level(n, 1.0, 1.8, 1.8, -3.0, 40.0), 10)

deep = (1.0, 5.0, 5.0, 2.0)
with mp.workdps(60):
    for n_guess in ("4.5", "3.5", "2.5"):
        ke = level(n_guess, deep, "even", 60, mp.mpf("0.3"))
        ko = level(n_guess, deep, "odd", 60, mp.mpf("0.3"))
        show(f"deep well gamma=5 d=2 k even/odd near {n_guess}", ke, 15)
        show("", ko, 15)


def single_well_level(n, parity, alpha, g, d, x_max):
    """Lowest-first sector levels of -v_sym by half-line shooting with node counting."""
    V = lambda x: -v_sym(x, alpha, g, g, d)
    y0 = [1.0, 0.0] if parity == "even" else [0.0, 1.0]

    def count(E):
        rhs = lambda x, y: [y[1], (V(x) - E) * y[0]]
        xs = np.linspace(1e-9, x_max, 20001)
        psi = solve_ivp(rhs, (0.0, x_max), y0, method="DOP853", rtol=1e-12, atol=1e-14, t_eval=xs).y[0]
        return int(np.sum(np.sign(psi[1:]) != np.sign(psi[:-1])))

    lo, hi = V(0.0), 0.0
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        if count(mid) > n:
            hi = mid
        else:
            lo = mid
    return math.sqrt(-0.5 * (lo + hi))


show("single well alpha=g=1 d=1.5 even level 0, k", single_well_level(0, "even", 1.0, 1.0, 1.5, 12.0), 10)
show("single well alpha=g=1 d=1.5 odd level 0, k", single_well_level(0, "odd", 1.0, 1.0, 1.5, 12.0), 10)
