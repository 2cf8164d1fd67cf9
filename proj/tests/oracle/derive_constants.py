"""Independent high-precision oracle for the constants frozen in tests/unit.

Runs with mpmath only; no code is shared with the C++ library. Quadrature is
done directly in t (not rapidity) with tanh-sinh at 40 digits.

    python3 tests/oracle/derive_constants.py
"""
import mpmath as mp

mp.mp.dps = 40


def F(beta, t):
    return mp.atanh(t) ** 2 / beta + mp.log(1 - t * t)


def moment(beta, S, K):
    # peak-shifted density in t; the peak sits at 0 or +-m(beta)
    m = magnetization(beta)
    shift = -S * F(beta, m) / 2 if m > 0 else 0
    dens = lambda t: mp.exp(-S * F(beta, t) / 2 - shift) / (1 - t * t)
    width = 40 / mp.sqrt(S)
    pts = sorted({-1, -m - width, -m, -m + width, m - width, m, m + width, 1} if m > 0
                 else {-1, -width, -width / 4, 0, width / 4, width, 1})
    pts = [p for p in pts if -1 <= p <= 1]
    Z = mp.quad(dens, pts)
    return mp.quad(lambda t: t ** K * dens(t), pts) / Z


def magnetization(beta):
    if beta <= 1:
        return mp.mpf(0)
    return mp.findroot(lambda m: mp.tanh(beta * m) - m, 0.9)


def falling(N, r):
    out = 1
    for j in range(r):
        out *= N - j
    return out


def main():
    print("F_2(0.5)            =", mp.nstr(F(2, mp.mpf("0.5")), 20))
    print("logdens(0.5,100,.3) =",
          mp.nstr(-50 * F(mp.mpf("0.5"), mp.mpf("0.3")) - mp.log(mp.mpf("0.91")), 20))
    for b in ("1.1", "1.5", "2", "5"):
        print(f"m({b})".ljust(20), "=", mp.nstr(magnetization(mp.mpf(b)), 20))
    for beta, S, K in (("0.5", 1e4, 2), ("0.5", 1e4, 4), ("0.5", 1e6, 2), ("2", 1e4, 2),
                       ("2", 1e6, 2), ("1", 1e4, 2), ("1", 1e6, 2), ("1.5", 1e4, 2)):
        print(f"moment(b={beta},S={S:g},K={K})".ljust(20), "=",
              mp.nstr(moment(mp.mpf(beta), mp.mpf(S), K), 20))
    # semicircle cdf at 1 by direct quadrature of the density
    pdf = lambda x: mp.sqrt(4 - x * x) / (2 * mp.pi)
    print("semicircle_cdf(1)   =", mp.nstr(mp.quad(pdf, [-2, 0, 1]), 20))
    # iid k=4 trace moment: (2 N^3 - ... ) via class sum, cross-check by formula
    # E tr(X^4)/N^3 for iid spins: 2 - 3/N + 2/N^2 ... printed for the grid
    for N in (4, 8, 16, 32, 64):
        # classes with no odd edge for k=4 (counted by hand): 1-1-1-1 (rho 1),
        # 1-1-1-2,1-1-2-2... evaluated by brute force over the 15 RGS
        total = 0
        for rgs in rgs_all(4):
            if odd_edges(rgs) == 0:
                total += falling(N, max(rgs))
        print(f"iid k=4 N={N}".ljust(20), "=", mp.nstr(mp.mpf(total) / N ** 3, 20))


def rgs_all(k):
    out = []

    def rec(cur, mx):
        if len(cur) == k:
            out.append(tuple(cur))
            return
        for v in range(1, mx + 2):
            rec(cur + [v], max(mx, v))

    rec([1], 1)
    return out


def odd_edges(t):
    from collections import Counter
    c = Counter()
    for i in range(len(t)):
        a, b = t[i], t[(i + 1) % len(t)]
        c[(min(a, b), max(a, b))] += 1
    return sum(v % 2 for v in c.values())


if __name__ == "__main__":
    main()
