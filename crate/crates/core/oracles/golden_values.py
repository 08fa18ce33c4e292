#!/usr/bin/env python3
"""High-precision reference values for the closed-form rating formulas.

Run with `python3 golden_values.py`. Every number printed here is frozen into
the Rust test suites; the evaluation below shares no code with the crate.
"""
from fractions import Fraction
from itertools import permutations

from mpmath import mp, mpf, sqrt, exp, log, pi, npdf, ncdf

mp.dps = 50

Q = mpf("0.0057565")


def elo_pair(mu_i, mu_j, d=mpf(400)):
    return 1 / (1 + exp((mu_j - mu_i) / d))


def g(sigma):
    return 1 / sqrt(1 + 3 * Q**2 * sigma**2 / pi**2)


def glicko_pair(mu_i, mu_j, s_i, s_j, d=mpf(400)):
    return 1 / (1 + mpf(10) ** (-g(sqrt(s_i**2 + s_j**2)) * (mu_i - mu_j) / d))


def v(x):
    return npdf(x) / ncdf(x)


def trueskill_pair(w, l, beta):
    (mw, sw), (ml, sl) = w, l
    c = sqrt(2 * beta**2 + sw**2 + sl**2)
    t = mw - ml
    vv = v(t / c)
    ww = vv * (vv + t / c)
    return (
        (mw + sw**2 / c * vv, sqrt(sw**2 * (1 - sw**2 / c**2 * ww))),
        (ml - sl**2 / c * vv, sqrt(sl**2 * (1 - sl**2 / c**2 * ww))),
    )


def ndcg(ranks_in_predicted_order):
    n = len(ranks_in_predicted_order)
    gains = [n - r for r in ranks_in_predicted_order]
    dcg = sum(gn / log(p + 2, 2) for p, gn in enumerate(gains))
    idcg = sum(gn / log(p + 2, 2) for p, gn in enumerate(sorted(gains, reverse=True)))
    return dcg / idcg


def show(name, value):
    print(f"{name:48s} {mp.nstr(value, 17)}")


show("elo_win_probability(1700 vs 1500)", elo_pair(mpf(1700), mpf(1500)))
show("g(350)", g(mpf(350)))
show("g(100)", g(mpf(100)))
show("g(sqrt(10900))", g(sqrt(mpf(10900))))
show("glicko_pr([1400,1500],[30,100]) i=0", glicko_pair(mpf(1400), mpf(1500), mpf(30), mpf(100)))
show("glicko_d2(sigma_j=0, Pr=0.5)", 1 / (Q**2 * 1 * mpf("0.25")))

# Glicko team update, N=2, mu=[1500,1500], sigma=[350,350], team 0 wins.
pr = glicko_pair(mpf(1500), mpf(1500), mpf(350), mpf(350))
d2 = 1 / (Q**2 * g(mpf(350)) ** 2 * pr * (1 - pr))
denom = 1 / mpf(350) ** 2 + 1 / d2
show("glicko_update winner mu'", mpf(1500) + Q / denom * g(mpf(350)) * (1 - pr))
show("glicko_update winner sigma'", sqrt(1 / denom))
show("glicko_update loser mu'", mpf(1500) + Q / denom * g(mpf(350)) * (0 - pr))

show("v(0)", v(mpf(0)))
show("v(-5)", v(mpf(-5)))
show("v(-8)", v(mpf(-8)))
show("v(-30)", v(mpf(-30)))
show("v(3)", v(mpf(3)))

beta = mpf("4.16")
s0 = mpf(25) / 3
(wm, ws), (lm, ls) = trueskill_pair((mpf(25), s0), (mpf(25), s0), beta)
show("trueskill equal winner mu'", wm)
show("trueskill equal winner sigma'", ws)
show("trueskill equal loser mu'", lm)

(wm, ws), (lm, ls) = trueskill_pair((mpf(30), mpf(4)), (mpf(20), mpf(6)), beta)
show("trueskill (30,4) beats (20,6) winner mu'", wm)
show("trueskill (30,4) beats (20,6) winner sigma'", ws)
show("trueskill (30,4) beats (20,6) loser mu'", lm)
show("trueskill (30,4) beats (20,6) loser sigma'", ls)

# N=4 equal ratings, adjacent-pair decomposition against pre-match values.
deltas = [mpf(0)] * 4
for k in range(3):
    (wm, _), (lm, _) = trueskill_pair((mpf(25), s0), (mpf(25), s0), beta)
    deltas[k] += wm - 25
    deltas[k + 1] += lm - 25
for k, dlt in enumerate(deltas):
    show(f"trueskill N=4 equal, rank {k + 1} mu delta", dlt)

show("ndcg N=2 reversed", ndcg([2, 1]))
show("ndcg N=3 [A,B,C] ranks A=2,B=1,C=3", ndcg([2, 1, 3]))
show("ndcg N=4 [3,1,4,2]", ndcg([3, 1, 4, 2]))

# Exhaustive check that the normalised ranks sum to one for N <= 6.
for n in range(2, 7):
    for perm in permutations(range(1, n + 1)):
        assert sum(Fraction(n - r, n * (n - 1) // 2) for r in perm) == 1
print("normalized ranks sum to 1 for every permutation, N = 2..6")
