"""Independent reference values for the Rust test suite.

Run with: python3 scripts/oracles.py
Values printed here are pasted into crates/core/tests/common/mod.rs.
"""
from mpmath import mp, mpf, gamma, pi, sqrt, quad, inf

mp.dps = 30


def c1s(s):
    return 4**s * gamma(mpf(1) / 2 + s) / (sqrt(pi) * abs(gamma(-s)))


def getoor_quadrature(s, x):
    # Second-difference form of the principal value, u extended by zero.
    u = lambda y: (1 - y * y) ** s if -1 < y < 1 else mpf(0)
    f = lambda t: (2 * u(x) - u(x + t) - u(x - t)) * t ** (-1 - 2 * s)
    pts = sorted({mpf(0), abs(1 - x), abs(1 + x)})
    return c1s(s) * (quad(f, pts + [inf], maxdegree=12))


def getoor_closed(s):
    return 4**s * gamma(1 + s) * gamma(mpf(1) / 2 + s) / sqrt(pi)


if __name__ == "__main__":
    for s in ["0.1", "0.25", "0.3", "0.4", "0.5"]:
        s = mpf(s)
        print(f"C_1s({float(s)}) = {mp.nstr(c1s(s), 20)}")
    for s in ["0.1", "0.25", "0.4"]:
        s = mpf(s)
        q0 = getoor_quadrature(s, mpf(0))
        q5 = getoor_quadrature(s, mpf("0.5"))
        print(f"getoor s={float(s)}: quad(x=0)={mp.nstr(q0, 18)} quad(x=0.5)={mp.nstr(q5, 18)} closed={mp.nstr(getoor_closed(s), 18)}")
