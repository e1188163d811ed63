"""Numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat N] [--step]

Kernel timings run in-process (the numpy functions are called directly).
``--step`` additionally times one training step of the default model in two
subprocesses, with RESWORLD_NUMBA=1 and RESWORLD_NUMBA=0.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from resworld import _kernels as K

STEP_SCRIPT = """
import time, numpy as np
from resworld import autodiff as ad
from resworld.config import TrainConfig
from resworld.model import ResWorldModel
cfg = TrainConfig()
r = np.random.default_rng(0)
B = cfg.batch_size
batch = {"rasters": r.uniform(0, 1, (B, 3, 3, 48, 48)).astype(np.float32),
         "rel_poses": np.tile([[-4.0, 0.2, 0.05], [-2.0, 0.1, 0.02]], (B, 1, 1)),
         "ego": np.tile([5.0, 0, 0, 0, 1, 0], (B, 1)).astype(np.float32),
         "gt_traj": r.normal(size=(B, 6, 2)).astype(np.float32)}
model = ResWorldModel(cfg)
def step():
    model.zero_grad()
    total, _, _ = model.loss(batch)
    ad.backward(total)
step()
t = time.perf_counter()
for _ in range(3):
    step()
print((time.perf_counter() - t) / 3)
"""


def cases(rng):
    feat = rng.normal(size=(8, 32, 48, 48)).astype(np.float32)
    pts = rng.uniform(-2, 50, size=(8, 48 * 48, 2)).astype(np.float32)
    grad = rng.normal(size=(8, 48 * 48, 32)).astype(np.float32)
    raster_pts = rng.uniform(-30, 30, size=(48 * 48 * 16, 2))
    poly = np.cumsum(rng.normal(size=(200, 2)), axis=0)
    boxes_a = np.column_stack([rng.uniform(-5, 5, (20000, 2)), rng.uniform(-3, 3, 20000), rng.uniform(1, 5, (20000, 2))])
    boxes_b = np.column_stack([rng.uniform(-5, 5, (20000, 2)), rng.uniform(-3, 3, 20000), rng.uniform(1, 5, (20000, 2))])
    return [
        ("bilinear forward (8x32x48x48, 2304 pts)",
         lambda: K.bilinear_forward(feat, pts), lambda: K.bilinear_forward_np(feat, pts)),
        ("bilinear backward",
         lambda: K.bilinear_backward(feat, pts, grad), lambda: K.bilinear_backward_np(feat, pts, grad, True, True)),
        ("polyline distance (36864 pts, 200 vertices)",
         lambda: K.polyline_distance(raster_pts, poly), lambda: K.polyline_distance_np(raster_pts, poly)),
        ("rectangle SAT (20000 pairs)",
         lambda: K.rects_intersect(boxes_a, boxes_b), lambda: K.rects_intersect_np(boxes_a, boxes_b)),
    ]


def best_of(fn, repeat):
    fn()  # warm-up (and JIT compilation)
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def time_step(flag):
    env = dict(os.environ, RESWORLD_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", STEP_SCRIPT], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--step", action="store_true", help="also time a full training step under each setting")
    args = ap.parse_args()
    if not K.USE_NUMBA:
        sys.exit("numba path disabled (numba missing or RESWORLD_NUMBA=0); nothing to compare")
    print(f"{'kernel':46s} {'numba ms':>10s} {'numpy ms':>10s} {'speed-up':>9s}")
    for name, nb, npf in cases(np.random.default_rng(0)):
        t_nb, t_np = best_of(nb, args.repeat), best_of(npf, args.repeat)
        print(f"{name:46s} {t_nb * 1e3:10.2f} {t_np * 1e3:10.2f} {t_np / t_nb:8.1f}x")
    if args.step:
        t_nb, t_np = time_step("1"), time_step("0")
        print(f"{'training step, default model, batch 8':46s} {t_nb * 1e3:10.1f} {t_np * 1e3:10.1f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
