"""Independent high-precision reference values frozen into the C++ tests.

Run with: python3 tests/oracle/reference_values.py
"""
from mpmath import mp, mpf, mpc, sin, cos, exp, pi, sqrt, atan, legendre, quad, expm1, log

mp.dps = 40

C = mpf(299792458)
EV = mpf("1.602176634e-19")
H = mpf("6.62607015e-34")
HBAR = H / (2 * pi)
EV_MASS = EV / C**2
CS = mpf("2.20694650e-25")


def amp(phases, k, x):
    return sum((2 * l + 1) * sin(d) * exp(1j * d) * legendre(l, x)
               for l, d in enumerate(phases)) / k


def f12_quad(p1, p2, k):
    g = lambda x: amp(p1, k, x) * amp(p2, k, x).conjugate()
    return 2 * pi * quad(g, [-1, 1])


def show(name, value):
    if isinstance(value, mpc):
        print(f"{name} = {mp.nstr(value.real, 17)} {mp.nstr(value.imag, 17)}i")
    else:
        print(f"{name} = {mp.nstr(value, 17)}")


show("f({0.1,0.05}, k=2, theta=pi/3)", amp([mpf("0.1"), mpf("0.05")], 2, cos(pi / 3)))
show("F12({0.3},{0.3}, k=1)", f12_quad([mpf("0.3")], [mpf("0.3")], 1))
show("F12({0.2,0.1},{-0.1,0.3,0.05}, k=3)",
     f12_quad([mpf("0.2"), mpf("0.1")], [mpf("-0.1"), mpf("0.3"), mpf("0.05")], 3))
show("sigma({0.2,0.1}, k=3)", f12_quad([mpf("0.2"), mpf("0.1")], [mpf("0.2"), mpf("0.1")], 3).real)

# Ramsey: full first-order probability with s-wave sets
k, d = mpf("1e10"), mpf("1e-8")
p1, p2 = [mpf("0.01")], [mpf("-0.01")]
F = f12_quad(p1, p2, k)
a1, a2 = amp(p1, k, 1), amp(p2, k, 1)
phi = pi / 2
P2 = (1 + cos(phi)) / 2 + ((F.real / (4 * pi) - (a1 + a2).imag / (2 * k)) * cos(phi)
                           + (F.imag / (4 * pi) + (a1 - a2).real / (2 * k)) * sin(phi)) / d**2
show("P2_full({0.01},{-0.01}, k=1e10, d=1e-8, pi/2)", P2)
show("P2_pw({0.1},{0}, k=1, d=10, pi/2)", mpf(1) / 2 + sin(mpf("0.2")) / 400)
A = mpf("1e-3")
show("shift*T for A=1e-3", atan(2 * A))
for x in ("1e-2", "1e-3", "1e-4"):
    x = mpf(x)
    show(f"(x - atan x)/x at x={mp.nstr(x, 3)}", (x - atan(x)) / x)

# Ensemble
rho = mpf("0.4") * mpf("1e15")  # eV/m^3
n1 = rho / 1
show("n at 1 eV", n1)
show("eV mass", EV_MASS)
mu1 = EV_MASS * CS / (EV_MASS + CS)
show("ensemble Ramsey shift, 1 eV, re_df=6.7e-23 (exact mu)", 2 * pi * n1 * HBAR * mpf("6.7e-23") / mu1)
show("sqrt(pi^2/8 - 1)", sqrt(pi**2 / 8 - 1))
v = C / 1000
for m, dd in ((1, mpf("1e-4")), (mpf("1e5"), mpf("1e-8"))):
    n = rho / m
    rA = mpf("1e-12")
    full = n * v * pi * rA**2 / (-expm1(-rA**2 / (2 * dd**2)))
    show(f"N_sc at m={m} eV", full)

# Sensitivity (mu = m_chi)
rho_kg = rho * EV_MASS


def response(m):
    mk = m * EV_MASS
    return rho_kg * HBAR / (mk * mk)


for m in (1, 10):
    show(f"offset limit at {m} eV", mpf("1e-5") / (2 * pi * response(m)))
for m in (1, mpf("1e4"), mpf("1e6")):
    dd = max(mpf("1e-8"), mpf("1e-4") / m)
    nsc = 2 * pi * (rho / m) * dd**2 * v
    show(f"Rabi-vs-Ramsey limit at {m} eV",
         mpf("1e-3") * sqrt(mpf("5e6") * nsc) / (2 * pi * sqrt(pi**2 / 8 - 1) * response(m)))

# Interference at v t = 4 d, s-wave: large-separation form of the overlap
for kd, delta in ((20, mpf("0.05")), (50, mpf("0.05")), (100, mpf("0.05")), (100, mpf(1))):
    s = mpf(4) / (2 * kd)
    phi_cdf = (1 + mp.erf(4 / sqrt(2))) / 2
    show(f"shadow/optical ratio kd={kd} delta={delta}", phi_cdf * (1 - s * cos(delta) / sin(delta)) / (1 + s**2))
