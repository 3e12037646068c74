"""Slow, loop-based reference implementations used only by the tests.

They share no code with the package: each follows the textbook definition
directly, so agreement with the vectorized code is meaningful.
"""

from __future__ import annotations

import math


def msim_oracle(features):
    """(1 - |cos|) * (euclid / max euclid) with pure-Python loops."""
    n = len(features)
    norms = [math.sqrt(sum(v * v for v in row)) for row in features]
    dist = [[math.sqrt(sum((a - b) ** 2 for a, b in zip(features[i], features[j])))
             for j in range(n)] for i in range(n)]
    top = max((max(r) for r in dist), default=0.0)
    out = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if norms[i] == 0 or norms[j] == 0:
                cos = 0.0
            else:
                cos = sum(a * b for a, b in zip(features[i], features[j])) / (norms[i] * norms[j])
                cos = max(-1.0, min(1.0, cos))
            d = dist[i][j] / top if top > 0 else 0.0
            out[i][j] = (1.0 - abs(cos)) * d
    return out


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def dbscan_oracle(d, eps, min_pts):
    """Density reachability by neighborhood counting plus union-find over cores.

    Cluster ids follow the smallest core index of each component; a border
    point joins the adjacent component with the smallest id.
    """
    n = len(d)
    nbrs = [[j for j in range(n) if d[i][j] <= eps] for i in range(n)]
    core = [len(nbrs[i]) >= min_pts for i in range(n)]
    uf = _UnionFind(n)
    for i in range(n):
        if core[i]:
            for j in nbrs[i]:
                if core[j]:
                    uf.union(i, j)
    roots = sorted({uf.find(i) for i in range(n) if core[i]})
    cid = {r: k for k, r in enumerate(roots)}
    labels = [-1] * n
    for i in range(n):
        if core[i]:
            labels[i] = cid[uf.find(i)]
    for i in range(n):
        if not core[i]:
            options = [labels[j] for j in nbrs[i] if core[j]]
            if options:
                labels[i] = min(options)
    return labels, core


def silhouette_oracle(dist, labels, noise="exclude"):
    """Direct per-point a/b/s loops. Returns (overall or None, per-point dict)."""
    idx = [i for i in range(len(labels)) if noise == "label" or labels[i] != -1]
    groups = {}
    for i in idx:
        groups.setdefault(labels[i], []).append(i)
    if len(groups) < 2:
        return None, {}
    per = {}
    for i in idx:
        own = groups[labels[i]]
        if len(own) == 1:
            per[i] = 0.0
            continue
        a = sum(dist[i][j] for j in own if j != i) / (len(own) - 1)
        b = min(sum(dist[i][j] for j in members) / len(members)
                for lab, members in groups.items() if lab != labels[i])
        m = max(a, b)
        per[i] = 0.0 if m == 0 else (b - a) / m
    return sum(per.values()) / len(per), per


def euclid_oracle(features):
    n = len(features)
    return [[math.sqrt(sum((a - b) ** 2 for a, b in zip(features[i], features[j])))
             for j in range(n)] for i in range(n)]


def graph_entropy_oracle(m, tau):
    n = len(m)
    total = 0.0
    for i in range(n):
        k = sum(1 for j in range(n) if j != i and m[i][j] <= tau)
        total += math.log(k) / math.log(n - 1) if k > 1 else 0.0
    return total / n


def histogram_entropy_oracle(samples, lo, hi, bins, normalize=True):
    counts = [0] * bins
    width = (hi - lo) / bins
    for v in samples:
        b = int((v - lo) // width)
        counts[min(max(b, 0), bins - 1)] += 1
    total = sum(counts)
    h = -sum(c / total * math.log(c / total) for c in counts if c)
    return h / math.log(bins) if normalize else h


def moving_average_oracle(values, span):
    half = span // 2
    out = []
    for i, v in enumerate(values):
        if v != v:
            out.append(float("nan"))
            continue
        window = [values[j] for j in range(max(0, i - half), min(len(values), i + half + 1))
                  if values[j] == values[j]]
        out.append(sum(window) / len(window))
    return out


def _subtract(target, current):
    d = (target - current + 180.0) % 360.0 - 180.0
    return 180.0 if d == -180.0 else d


def _clip(v, lim):
    return max(-lim, min(lim, v))


def flock_step_oracle(pos, heading, width, height, vision, min_sep, align, cohere, separate):
    """One synchronous boids heading update, bird by bird."""
    n = len(pos)
    out = []
    for i in range(n):
        mates = []
        for j in range(n):
            if j == i:
                continue
            dx = pos[j][0] - pos[i][0]
            dy = pos[j][1] - pos[i][1]
            dx -= width * round(dx / width)
            dy -= height * round(dy / height)
            d = math.hypot(dx, dy)
            if d <= vision:
                mates.append((d, j, dx, dy))
        h = heading[i]
        if not mates:
            out.append(h % 360.0)
            continue
        d0, j0, _, _ = min(mates)
        if d0 < min_sep:
            out.append((h + _clip(_subtract(h, heading[j0]), separate)) % 360.0)
            continue
        sx = sum(math.sin(math.radians(heading[j])) for _, j, _, _ in mates)
        sy = sum(math.cos(math.radians(heading[j])) for _, j, _, _ in mates)
        avg = h if sx == 0 and sy == 0 else math.degrees(math.atan2(sx, sy)) % 360.0
        h1 = h + _clip(_subtract(avg, h), align)
        cx = sum(dx / d if d > 0 else 0.0 for d, _, dx, _ in mates)
        cy = sum(dy / d if d > 0 else 1.0 for d, _, _, dy in mates)
        tow = h1 if cx == 0 and cy == 0 else math.degrees(math.atan2(cx, cy)) % 360.0
        out.append((h1 + _clip(_subtract(tow, h1), cohere)) % 360.0)
    return out
