"""Independent reference values for the unit tests.

Uses mpmath (Bessel zeros, quadrature) and scipy's solve_ivp on the plain
radial equation, so nothing here shares code with the library. The printed
numbers are copied into tests/*.cpp.
"""
import numpy as np
import mpmath as mp
from scipy.integrate import solve_ivp

mp.mp.dps = 30


def f(N, u):
    return np.sign(u) * abs(u) ** (4.0 / (N - 2) + 1)


def zeros_of_ivp(N, lam, a, count, r_max=200.0):
    # series start u = a + b r^2 + k r^4, well inside the core of width a^{-2/(N-2)}
    r0 = 1e-5 * min(1.0, abs(a) ** (-2.0 / (N - 2))) if a != 0 else 1e-5
    fa = f(N, a)
    b = -(fa + lam * a) / (2 * N)
    dfa = (4.0 / (N - 2) + 1) * abs(a) ** (4.0 / (N - 2))
    k = (fa + lam * a) * (dfa + lam) / (8 * N * (N + 2))
    y0 = [a + b * r0**2 + k * r0**4, 2 * b * r0 + 4 * k * r0**3]

    def rhs(r, y):
        return [y[1], -(N - 1) / r * y[1] - f(N, y[0]) - lam * y[0]]

    ev = lambda r, y: y[0]
    sol = solve_ivp(rhs, (r0, r_max), y0, method="DOP853", rtol=1e-13, atol=1e-16,
                    events=ev, dense_output=True)
    z = list(sol.t_events[0][:count])
    return z, sol


def main():
    print("# Bessel zeros")
    for nu, h in [(1, 1), (1, 2), (1.5, 1), (1.5, 2), (2, 1), (2, 2)]:
        print(f"j({nu},{h}) = {mp.nstr(mp.besseljzero(nu, h), 20)}")

    print("# psi integrals int r^w |psi_h|^p, psi_h(0) = -1")
    for N, h, p, w in [(4, 1, 2, 3), (5, 1, 2, 4), (5, 1, mp.mpf(10) / 3, 4), (6, 1, 2, 5), (4, 2, 2, 3)]:
        nu = mp.mpf(N) / 2 - 1
        j = mp.besseljzero(nu, h)
        psi = lambda r: -mp.gamma(nu + 1) * (2 / (j * r)) ** nu * mp.besselj(nu, j * r) if r > 0 else -1
        val = mp.quad(lambda r: r**w * abs(psi(r)) ** p, [0, 0.5, 1])
        print(f"psi_integral({N},{h},{mp.nstr(p, 6)},{w}) = {mp.nstr(val, 20)}")

    print("# IVP zeros at lambda = 1")
    for N, a, cnt in [(4, 1.0, 1), (3, 1.0, 2), (5, 2.0, 1), (6, 1.0, 1)]:
        z, sol = zeros_of_ivp(N, 1.0, a, cnt)
        print(f"ivp N={N} a={a}: zeros = {[f'{x:.16g}' for x in z]}, u'(z1) = {sol.sol(z[0])[1]:.16g}")

    print("# branch lambda = R_2^2 for m = 2")
    for N, a in [(3, 1.0), (4, 1.0), (5, 1.0), (6, 1.0), (3, 100.0)]:
        z, _ = zeros_of_ivp(N, 1.0, a, 2)
        print(f"shoot N={N} m=2 a={a}: lambda = {z[1]**2:.16g}, r_lambda = {z[0]/z[1]:.16g}, eps = {z[0]**2:.16g}")

    print("# N = 6 limit problem, m = 2")
    z, sol = zeros_of_ivp(6, 1.0, -0.5, 1)
    R = z[0]
    lb = R * R
    print(f"lambda_bar = {lb:.16g}")
    # u_bar(r) = -R^2 u(R r) solves the limit problem on the unit ball with u_bar(0) = lb/2
    ub = lambda r: -R * R * sol.sol(R * r)[0] if r > 1e-5 else lb / 2

    def rhs(r, y):
        u = ub(r)
        p, dp, h, dh = y
        return [dp, -5 / r * dp - (2 * abs(u) + lb) * p - u, dh, -5 / r * dh - (2 * abs(u) + lb) * h]

    r0 = 1e-5
    # p(0) = 0, p'' (0) = -u(0)/6 ; h(0) = 1, h''(0) = -(2u(0)+lb)/6
    u0 = lb / 2
    y0 = [-u0 / 12 * r0**2, -u0 / 6 * r0, 1 - (2 * u0 + lb) / 12 * r0**2, -(2 * u0 + lb) / 6 * r0]
    s = solve_ivp(rhs, (r0, 1.0), y0, method="DOP853", rtol=1e-13, atol=1e-16, dense_output=True)
    p1, h1 = s.y[0, -1], s.y[2, -1]
    c = -p1 / h1
    hmax = max(1.0, np.max(np.abs(s.y[2])))
    print(f"v0_bar(0) = {c:.16g}, selector = {1 - 2 * c:.16g}, margin = {abs(h1) / hmax:.16g}")
    print(f"u_bar'(1) = {-R**3 * sol.sol(R)[1]:.16g}")

    print("# N = 4 first eigenvalue squared zero and 2/A1")
    j11 = mp.besseljzero(1, 1)
    print(f"mu(4,1) = {mp.nstr(j11**2, 20)}")


main()
