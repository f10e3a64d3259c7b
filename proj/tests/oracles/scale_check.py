"""Independent brute-force check of the default attack scenario scales.

Simulates the three-stage attack with numpy (exhaustive permutation search
for the group distance) and reports success rates under both ambiguity
policies, plus the gap/noise scale comparison.
"""
import itertools
import sys

import numpy as np


def dist(u, v):
    return min(max(abs(a - b) for a, b in zip(u, p)) for p in itertools.permutations(v))


def components(adj):
    n = len(adj)
    seen = [False] * n
    out = []
    for i in range(n):
        if seen[i]:
            continue
        stack, comp = [i], []
        seen[i] = True
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in range(n):
                if adj[x][y] and not seen[y]:
                    seen[y] = True
                    stack.append(y)
        out.append(sorted(comp))
    return out


def trial(rng, n, s, sigma, rho, m, l, alpha, policy, recon=True):
    mu = rng.uniform(0, 1, n)
    cov = np.zeros((n, n))
    for g in range(n // s):
        cov[g * s:(g + 1) * s, g * s:(g + 1) * s] = rho * sigma ** 2
    np.fill_diagonal(cov, sigma ** 2)
    W = rng.multivariate_normal(mu, cov, size=l).T
    X = rng.multivariate_normal(mu, cov, size=m).T
    perm = rng.permutation(n)  # perm[u] = Pi(u)
    Y = np.empty_like(X)
    Y[perm] = X
    delta = n ** (-1.0 / s - alpha / 4)
    if recon:
        if m < 2:
            return False
        C = np.cov(Y)
        tau = rho * sigma ** 2 / 2
        adj = (C >= tau) & ~np.eye(n, dtype=bool)
        groups = [g for g in components(adj) if len(g) == s]
    else:
        groups = [sorted(perm[g * s:(g + 1) * s]) for g in range(n // s)]
    wbar = W[:s].mean(axis=1)
    ybar = Y.mean(axis=1)
    ds = [dist(wbar, ybar[g]) for g in groups]
    within = [i for i, d in enumerate(ds) if d <= delta]
    if not within:
        return False
    if len(within) > 1 and policy == "reject":
        return False
    best = min(within, key=lambda i: ds[i])
    g = groups[best]
    order_w = np.argsort(wbar, kind="stable")
    order_y = np.argsort(ybar[g], kind="stable")
    k = list(order_w).index(0)
    target = g[order_y[k]]
    if abs(wbar[0] - ybar[target]) > delta:
        return False
    return target == perm[0]


def main():
    rng = np.random.default_rng(12345)
    n, s, sigma, rho, alpha = 16, 2, 0.1, 0.5, 1.0
    delta = n ** (-1.0 / s - alpha / 4)
    gaps = []
    for _ in range(2000):
        mu = np.sort(rng.uniform(0, 1, n))
        gaps.append(np.median(np.diff(mu)))
    print(f"delta_n={delta:.6f} 4*delta+10*sigma/sqrt(256)={4*delta+10*sigma/16:.4f}"
          f" median NN gap={np.median(gaps):.4f}")
    trials = int(sys.argv[1]) if len(sys.argv) > 1 else 200
    for m in (4, 13, 52, 128, 256, 512):
        for policy in ("reject", "nearest"):
            ok = sum(trial(rng, n, s, sigma, rho, m, m, alpha, policy) for _ in range(trials))
            print(f"m=l={m:4d} policy={policy:8s} user1 rate={ok/trials:.3f}")


if __name__ == "__main__":
    main()
