"""Model-level statistics that separate the two modes without any detector.

ants             mean pairwise distance among ants carrying food
wolf_sheep       median over steps of the largest wolf-to-wolf distance
flocking         mean neighbour heading concentration (radius 3) after step 100
ants_adaptation  mean nearest-neighbour distance within each colony
"""

import argparse

import numpy as np
from scipy.spatial.distance import pdist

from comove.simulators import SCENARIOS, ScenarioConfig, simulate


def ants(run):
    pos, car = run.trajectory.positions, run.extras["carrying"]
    return np.mean([pdist(pos[s, car[s]]).mean() for s in range(len(pos)) if car[s].sum() >= 2])


def wolf_sheep(run):
    return float(np.median([pdist(p).max() for p in run.trajectory.positions]))


def flocking(run, radius=3.0, burn_in=100):
    t = run.trajectory
    size = np.array([t.world.width, t.world.height])
    step = np.diff(t.positions, axis=0)
    step -= size * np.round(step / size)
    unit = step / np.linalg.norm(step, axis=2, keepdims=True)
    out = []
    for s in range(burn_in, len(unit)):
        off = t.positions[s][None] - t.positions[s][:, None]
        off -= size * np.round(off / size)
        near = np.hypot(off[..., 0], off[..., 1]) <= radius
        out.append((np.linalg.norm(near.astype(float) @ unit[s], axis=1) / near.sum(1)).mean())
    return float(np.mean(out))


def ants_adaptation(run):
    pos = run.trajectory.positions
    half = (pos.shape[1] + 1) // 2
    vals = []
    for grp in (pos[:, :half], pos[:, half:]):
        d = np.linalg.norm(grp[:, :, None] - grp[:, None], axis=3)
        i = np.arange(d.shape[1])
        d[:, i, i] = np.inf
        vals.append(d.min(axis=2).mean())
    return float(np.mean(vals))


STATS = {"ants": ants, "wolf_sheep": wolf_sheep, "flocking": flocking, "ants_adaptation": ants_adaptation}


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seeds", type=int, default=5)
    args = ap.parse_args()
    for sc in SCENARIOS:
        for org in (True, False):
            vals = [STATS[sc](simulate(ScenarioConfig(sc, organized=org, seed=s))) for s in range(args.seeds)]
            mode = "organized" if org else "disorganized"
            print(f"{sc:16s} {mode:13s} " + " ".join(f"{v:7.3f}" for v in vals))


if __name__ == "__main__":
    main()
