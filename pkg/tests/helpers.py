"""Shared test helpers: random instances and a naive certification oracle."""

import itertools
import math

import numpy as np

from tricontract.metric import SelfMap, random_finite_metric
from tricontract.phi import MAX, SQRTSQ, SUM, PhiFamily, pnorm

ALL_PHIS = (SUM, MAX, pnorm(2), pnorm(3), SQRTSQ)


def random_instance(seed):
    """Random space with n in [3, 8] and a map whose image set is often small."""
    rng = np.random.default_rng([seed, 99])
    n = int(rng.integers(3, 9))
    space = random_finite_metric(n, seed)
    m = int(rng.choice([1, 2, 2, 3, n]))
    image = rng.choice(n, size=m, replace=False)
    targets = rng.choice(image, size=n)
    table = {x: space.labels[t] for x, t in zip(space.labels, targets)}
    # sometimes make image points fixed, which is where certified maps live
    if rng.random() < 0.5:
        for t in image:
            table[space.labels[t]] = space.labels[t]
    return space, SelfMap.from_table(table, space)


def naive_phi(phi, a, b, c):
    fam = phi.family
    if fam is PhiFamily.SUM:
        return a + b + c
    if fam is PhiFamily.MAX:
        return max(a, b, c)
    if fam is PhiFamily.PNORM:
        return (a**phi.p + b**phi.p + c**phi.p) ** (1.0 / phi.p)
    return (math.sqrt(a) + math.sqrt(b) + math.sqrt(c)) ** 2


def naive_alpha(space, selfmap, phi):
    """Max image/preimage ratio by a plain loop over ordered distinct triples."""
    labs = list(space.labels)
    d = {(p, q): float(space.dist[i, j]) for i, p in enumerate(labs) for j, q in enumerate(labs)}
    best = 0.0
    for x, y, z in itertools.permutations(labs, 3):
        tx, ty, tz = selfmap.table[x], selfmap.table[y], selfmap.table[z]
        num = naive_phi(phi, d[tx, ty], d[ty, tz], d[tz, tx])
        den = naive_phi(phi, d[x, y], d[y, z], d[z, x])
        best = max(best, num / den)
    return best
