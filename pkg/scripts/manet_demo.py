#!/usr/bin/env python3
"""Generate a mobile sensor network and monitor connectivity properties on it."""

import argparse

from strelmon.algebra import boolean_domain
from strelmon.monitor import MonitorContext, monitor, satisfied_locations
from strelmon.scenarios import ManetConfig, connect, connect_restore, generate_manet
from strelmon.space import euclidean_norm_distance, hop_distance, weight_sum_distance


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nodes", type=int, default=20)
    parser.add_argument("--routers", type=int, default=6)
    parser.add_argument("--radius", type=float, default=4.0)
    parser.add_argument("--steps", type=int, default=10)
    parser.add_argument("--jitter", type=float, default=0.3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    cfg = ManetConfig(
        node_count=args.nodes,
        routers=args.routers,
        end_devices=args.nodes - args.routers - 1,
        radius=args.radius,
        steps=args.steps,
        jitter=args.jitter,
        seed=args.seed,
    )
    proximity, connectivity, trace = generate_manet(cfg)
    ctx = MonitorContext(
        model=connectivity,
        trace=trace,
        domain=boolean_domain(),
        distances={
            "hop": hop_distance(),
            "weight": weight_sum_distance(),
            "euclid": euclidean_norm_distance(),
        },
    )
    for name, formula in (
        ("connected", connect()),
        ("restores within 3", connect_restore(3.0)),
    ):
        verdicts = satisfied_locations(monitor(ctx, formula), ctx)
        print(f"{name:18s}: {len(verdicts):2d}/{cfg.node_count} locations satisfy at t=0: {verdicts}")


if __name__ == "__main__":
    main()
