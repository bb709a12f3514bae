"""Extended-precision reference values frozen into the Rust test suites.

Every closed form is re-evaluated term by term with mpmath at 50 digits;
nothing here imports or mirrors the Rust code. Run with `python3 extended_precision.py`.
"""
from mpmath import mp, mpf, log, log1p, sqrt, pi, findroot, exp

mp.dps = 50


def lower(snr_density, nt, nr, lc, occ, kappa=2):
    s, nt, nr, lc, occ, kappa = map(mpf, (snr_density, nt, nr, lc, occ, kappa))
    first = s * nr * (1 - s * (kappa - 2 + nt + nr) / (2 * occ * nt))
    second = occ * nt * nr / lc * log(1 + s * lc / (occ * nt))
    return first - second


def upper(snr_density, nt, nr, lc, occ, pf):
    s, nt, nr, lc, occ, pf = map(mpf, (snr_density, nt, nr, lc, occ, pf))
    return s * nr * (1 - s / (2 * occ) - occ * nt / (s * lc) * log(1 + s * lc * pf / (occ * nt)))


def derivative(snr_density, nt, nr, lc, occ, kappa=2):
    s, nt, nr, lc, occ, kappa = map(mpf, (snr_density, nt, nr, lc, occ, kappa))
    a = s * (kappa - 2 + nt + nr) / (2 * occ ** 2 * nt)
    b = nt / (s * lc) * log(1 + s * lc / (occ * nt))
    c = 1 / (occ * (1 + s * lc / (nt * occ)))
    return s * nr * (a - b + c)


def approx_opt(snr_density, nt, nr, lc, kappa=2):
    s, nt, nr, lc, kappa = map(mpf, (snr_density, nt, nr, lc, kappa))
    return s / nt * sqrt(lc / log(lc) * (kappa - 2 + nt + nr))


def exact_opt(snr_density, nt, nr, lc):
    x0 = approx_opt(snr_density, nt, nr, lc)
    return findroot(lambda x: derivative(snr_density, nt, nr, lc, x), x0)


def gap(nt, nr, lc, kappa=2):
    return sqrt(log(mpf(lc)) / lc * (kappa - 2 + nt + nr) * log(pi))


def fig6(nt, nr):
    a = sqrt((mpf(nr) / nt + 1) * log(pi))
    b = sqrt(a * a - 1)
    low_exact = 1 / (sqrt(mpf(nt)) * (a + b))
    high_exact = 1 / (sqrt(mpf(nt)) * (a - b))
    low_approx = 1 / (2 * sqrt((nt + nr) * log(pi)))
    high_approx = 2 * sqrt((nt + nr) * log(pi)) / nt
    return low_exact, low_approx, high_exact, high_approx


def alpha_max(nt, nr, lc, snr):
    return log(mpf(nt + nr) ** 2 / nt ** 2 * lc) / (2 * log(1 / mpf(snr)))


def show(label, value):
    print(f"{label:48s} {mp.nstr(value, 20)}")


if __name__ == "__main__":
    show("R_LB(P/N0=100,1x1,Lc=1e3,dB=100)", lower(100, 1, 1, 1000, 100))
    show("R_UB(P/N0=100,1x1,Lc=1e3,dB=1e3,pf=1)", upper(100, 1, 1, 1000, 1000, 1))
    show("R_LB(P/N0=1e7,2x2,Lc=1e3,dB=1.203e8)", lower(1e7, 2, 2, 1000, 1.203e8))
    for lc in (1e3, 1e5):
        show(f"(dB)* approx 2x2 P/N0=1e7 Lc={lc:g}", approx_opt(1e7, 2, 2, lc))
        show(f"Delta 2x2 Lc={lc:g}", gap(2, 2, lc))
    for lc in (1e3, 1e4, 1e5, 1e6):
        ex = exact_opt(100, 1, 1, lc)
        ap = approx_opt(100, 1, 1, lc)
        show(f"(dB)* exact 1x1 P/N0=100 Lc={lc:g}", ex)
        show(f"  rel dev from approx", abs(ex - ap) / ap)
    ex = exact_opt(1e7, 2, 2, 1e3)
    show("(dB)* exact 2x2 P/N0=1e7 Lc=1e3", ex)
    show("  rel dev from approx", abs(ex - approx_opt(1e7, 2, 2, 1e3)) / approx_opt(1e7, 2, 2, 1e3))
    for lc in (1e3, 1e4, 1e5, 1e6):
        ex = exact_opt(100, 1, 1, lc)
        show(f"R_LB at exact opt 1x1 Lc={lc:g} / C_inf", lower(100, 1, 1, lc, ex) / 100)
        show(f"closed-form peak 1x1 Lc={lc:g} / C_inf", 1 - gap(1, 1, lc))
    for row in fig6(1, 1):
        show("fig6 nt=nr=1", row)
    show("alpha_max 1x1 Lc=1e3 snr=1e-2", alpha_max(1, 1, 1000, 1e-2))
    show("sublinear 1x1 snr=1e-2 alpha=0.5 /C_inf", 1 - mpf(1e-2) ** mpf(0.5) * 2)
