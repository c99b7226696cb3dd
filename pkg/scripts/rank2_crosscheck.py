"""Closed-form distortion against the Monte Carlo orthonormal-basis oracle
on a rank-two base, at the origin, over several seeds."""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

import numpy as np

from cartan_hartogs.domains import make_domain, sample_interior
from cartan_hartogs.hartogs import HartogsParams, HartogsPoint
from cartan_hartogs.tyz import admissible_grid, kempf_distortion, rawnsley_origin_mc


@dataclass
class CrossCheckConfig:
    kind: str = "typeI:2,2"
    mu: float = 1.0
    d0: int = 1
    m_values: list = field(default_factory=list)
    samples: int = 40_000
    seeds: list = field(default_factory=lambda: [0, 1, 2])


def run(cfg: CrossCheckConfig):
    params = HartogsParams(make_domain(cfg.kind), cfg.mu, cfg.d0)
    m_values = cfg.m_values or admissible_grid(params, 3)
    origin = HartogsPoint(np.zeros(params.base.dim), np.zeros(cfg.d0))
    for seed in cfg.seeds:
        quad = sample_interior(params.base, cfg.samples, seed)
        for m in m_values:
            closed = kempf_distortion(params, m, origin)
            oracle, err = rawnsley_origin_mc(params, m, quad)
            z = (closed - oracle) / err
            flag = "  <-- beyond 3 stderr" if abs(z) > 3 else ""
            yield seed, m, closed, oracle, err, z, flag


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kind", default="typeI:2,2")
    ap.add_argument("--mu", type=float, default=1.0)
    ap.add_argument("--d0", type=int, default=1)
    ap.add_argument("--samples", type=int, default=40_000)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    args = ap.parse_args()
    cfg = CrossCheckConfig(args.kind, args.mu, args.d0, [], args.samples, args.seeds)
    print(f"{'seed':>4} {'m':>3} {'closed':>12} {'oracle':>12} {'stderr':>10} {'z':>7}")
    for seed, m, closed, oracle, err, z, flag in run(cfg):
        print(f"{seed:>4} {m:>3} {closed:>12.6g} {oracle:>12.6g} {err:>10.3g} {z:>7.2f}{flag}")


if __name__ == "__main__":
    main()
