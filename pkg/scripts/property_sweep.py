"""Sweep random finite instances and tally what the fixed point theorem predicts.

    python scripts/property_sweep.py --instances 2000 --min-n 3 --max-n 8
"""

import argparse
import collections
import time
from dataclasses import dataclass, fields

import numpy as np

from tricontract.analysis import certify, periodicity_report
from tricontract.metric import SelfMap, random_finite_metric
from tricontract.phi import MAX, SQRTSQ, SUM, pnorm
from tricontract.solver import VerdictKind, picard_iterate


@dataclass
class SweepConfig:
    instances: int = 1000
    min_n: int = 3
    max_n: int = 8
    seed: int = 0
    # probability that an image point is forced to be fixed
    fix_prob: float = 0.5


PHIS = (SUM, MAX, pnorm(2), SQRTSQ)


def draw(cfg: SweepConfig, i: int):
    rng = np.random.default_rng([cfg.seed, i])
    n = int(rng.integers(cfg.min_n, cfg.max_n + 1))
    space = random_finite_metric(n, int(rng.integers(2**31)))
    m = int(rng.integers(1, n + 1))
    image = rng.choice(n, size=m, replace=False)
    table = {x: space.labels[t] for x, t in zip(space.labels, rng.choice(image, size=n))}
    for t in image:
        if rng.random() < cfg.fix_prob:
            table[space.labels[t]] = space.labels[t]
    return space, SelfMap.from_table(table, space)


def sweep(cfg: SweepConfig):
    stats = collections.Counter()
    alphas = collections.defaultdict(list)
    for i in range(cfg.instances):
        space, T = draw(cfg, i)
        report = periodicity_report(space, T)
        for phi in PHIS:
            cert = certify(space, T, phi)
            alphas[str(phi)].append(cert.alpha_star)
            if not cert.contracting:
                continue
            stats[f"certified[{phi}]"] += 1
            if report.period2_points:
                stats["certified_with_period2"] += 1
                stats["theorem_violation"] += bool(report.fixed_points)
                continue
            traces = [picard_iterate(space, T, x, cert) for x in space.labels]
            reached = {t.verdict.point for t in traces if t.verdict.kind is VerdictKind.FIXED_POINT}
            stats[f"fixed_points={len(reached)}"] += 1
            stuck = any(t.verdict.kind is not VerdictKind.FIXED_POINT for t in traces)
            stats["theorem_violation"] += stuck or len(reached) not in (1, 2)
    return stats, alphas


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in fields(SweepConfig):
        parser.add_argument(f"--{f.name.replace('_', '-')}", type=type(f.default), default=f.default)
    cfg = SweepConfig(**vars(parser.parse_args()))
    t0 = time.perf_counter()
    stats, alphas = sweep(cfg)
    print(cfg)
    for key in sorted(stats):
        print(f"  {key:<28}{stats[key]}")
    for phi, vals in alphas.items():
        vals = np.asarray(vals)
        print(f"  alpha_star[{phi}]: median {np.median(vals):.3f}, share < 1: {(vals < 1 - 1e-9).mean():.3f}")
    print(f"  elapsed {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
