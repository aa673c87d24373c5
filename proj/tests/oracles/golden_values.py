"""High-precision reference values frozen into the C++ test suites.

Run with `python3 tests/oracles/golden_values.py`. Everything here is computed
from first principles with mpmath at 50 digits, independently of the C++ code.
"""
import mpmath as mp

mp.mp.dps = 50


def phi(q, n):
    out = mp.mpf(1)
    for j in range(1, n + 1):
        out *= 1 - q**j
    return out


def phi_inf(q):
    return mp.qp(q)  # (q; q)_inf


def survival_by_integration(q, n, t):
    # P(sum_{i<=n} q^i W_i > t) via the hypoexponential density built from
    # partial fractions of the Laplace transform, evaluated at high precision.
    rates = [q ** (-i) for i in range(n + 1)]
    total = mp.mpf(0)
    for j, lj in enumerate(rates):
        prod = mp.mpf(1)
        for i, li in enumerate(rates):
            if i != j:
                prod *= li / (li - lj)
        total += prod * mp.e ** (-lj * t)
    return total


def envelope_residual(q, n, t):
    if n is None:
        ph = phi_inf(q)
        s = mp.mpf(0)
        j = 0
        while True:
            term = (-1) ** j * q ** (j * (j + 1) / 2) / phi(q, j) * mp.e ** (-(q ** (-j)) * t)
            s += term
            if j > 5 and abs(term) < mp.mpf(10) ** -45:
                break
            j += 1
        surv = s / ph
        return surv * ph * mp.e ** t - 1
    surv = survival_by_integration(q, n, t)
    return surv * phi(q, n) * mp.e ** t - 1


def lemma31_golden(q, n):
    best = mp.mpf(0)
    t = mp.mpf(2)
    while t <= 20 + mp.mpf("1e-9"):
        val = abs(envelope_residual(q, n, t)) * mp.e ** ((1 / q - 1) * t)
        best = max(best, val)
        t += mp.mpf("0.5")
    return best


def F(kappa, s):
    S = mp.log(1 / s)
    return kappa / 2 * (S + mp.log(S) + 1 / (2 * kappa) + mp.log(kappa) - 1) ** 2 + (mp.mpf(1) / 2 + kappa) * mp.log(S)


if __name__ == "__main__":
    h = mp.mpf(1) / 2
    print("phi_5(0.5)", mp.nstr(phi(h, 5), 17))
    print("phi_inf(0.5)", mp.nstr(phi_inf(h), 17))
    print("phi_inf(0.8)", mp.nstr(phi_inf(mp.mpf("0.8")), 17))
    print("P(K_1>1) q=.5", mp.nstr(survival_by_integration(h, 1, 1), 17))
    print("f_1(1) q=.5", mp.nstr(2 * (mp.e**-1 - mp.e**-2), 17))
    print("P(K_30>5) q=.5", mp.nstr(survival_by_integration(h, 30, 5), 17))
    kappa = 1 / mp.log(2)
    print("F(e^-5)", mp.nstr(F(kappa, mp.e**-5), 17))
    for q in ("0.5", "0.8"):
        for n in (5, 20, None):
            print("lemma31", q, n, mp.nstr(lemma31_golden(mp.mpf(q), n), 17))
