"""High-precision Mittag-Leffler values used as frozen expectations in
test_mittag_leffler.cpp. Plain series summed at 700 decimal digits, so the
catastrophic cancellation of the double-precision series does not arise."""
from mpmath import mp, mpf, gamma, nstr

mp.dps = 700


def ml(alpha, beta, z, tol=mpf(10) ** -60):
    alpha, beta, z = mpf(alpha), mpf(beta), mpf(z)
    total, k, small = mpf(0), 0, 0
    while True:
        term = z**k / gamma(alpha * k + beta)
        total += term
        if abs(term) < tol * max(1, abs(total)):
            small += 1
            if small == 3 and k > 10:
                return total
        else:
            small = 0
        k += 1


if __name__ == "__main__":
    cases = [
        (0.5, 1, -1), (0.5, 1, -2), (0.1, 1, -2), (0.1, 1, -1), (0.1, 1, -0.5),
        (0.25, 1, -2), (0.25, 1, -1), (0.75, 1, -2), (0.9, 1, -5), (0.3, 1, -4),
    ]
    for a, b, z in cases:
        print(f"{{{a}, {b}, {z}, {nstr(ml(a, b, z), 20)}}},")
