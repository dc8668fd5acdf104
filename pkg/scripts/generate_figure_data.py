#!/usr/bin/env python3
"""
Generate the region map, the loss-channel Bell curves and simulated
reconstruction points as CSV tables
"""

import os
import sys
from pathlib import Path
import argparse

import numpy as np
import pandas as pd
from tqdm import tqdm

# Add project root to path
sys.path.append(str(Path(__file__).parent.parent))

from config import Config
from src.bell import region_grid
from src.channel import sweep, sweep_frame, bell_threshold
from src.gaussian_core import pure_symmetric_state
from src.homodyne_sim import simulated_sweep
from src.report_formatter import ReportFormatter
from src.utils import setup_logging, ensure_dir, save_json

logger = setup_logging()

SQUEEZING_LEVELS = [0.6, 0.8, 1.0, 2.0, 5.0]


def write_csv(frame, path: str):
    ReportFormatter.emit(ReportFormatter.render_csv(frame), path)
    print(f"✅ {path}: {len(frame)} rows")


def main():
    parser = argparse.ArgumentParser(description="Generate cvbell figure data")
    parser.add_argument("--output-dir", type=str, default=Config.OUTPUT_PATH, help="Output directory")
    parser.add_argument("--resolution", type=int, default=Config.DEFAULT_RESOLUTION, help="Region grid resolution")
    parser.add_argument("--steps", type=int, default=101, help="Transmittivity grid points")
    parser.add_argument("--samples", type=int, default=Config.DEFAULT_SAMPLES, help="Samples per setting")
    parser.add_argument("--seed", type=int, default=Config.DEFAULT_SEED, help="Simulation seed")
    parser.add_argument("--skip-simulation", action="store_true", help="Only write the theory tables")

    args = parser.parse_args()

    print("🔬 cvbell Figure Data Generator")
    print("=" * 40)

    ensure_dir(args.output_dir)

    print("🗺️ Region map...")
    write_csv(region_grid(args.resolution), os.path.join(args.output_dir, "region_grid.csv"))

    print("📉 Bell value through the loss channel...")
    T_grid = np.linspace(0.01, 1.0, args.steps)
    frames = []
    thresholds = {}
    for n in tqdm(SQUEEZING_LEVELS, desc="Sweeps"):
        sf0 = pure_symmetric_state(n)
        frame = sweep_frame(sweep(sf0, T_grid))
        frame.insert(0, "n0", n)
        frames.append(frame)
        thresholds[str(n)] = bell_threshold(sf0)
    write_csv(pd.concat(frames, ignore_index=True),
              os.path.join(args.output_dir, "bell_vs_T.csv"))
    save_json({"bell_thresholds": thresholds}, os.path.join(args.output_dir, "bell_thresholds.json"))

    if not args.skip_simulation:
        print("🎲 Simulated homodyne reconstruction...")
        simulated = simulated_sweep(pure_symmetric_state(1.0), np.linspace(0.5, 1.0, 11), args.samples, args.seed)
        write_csv(simulated, os.path.join(args.output_dir, "bell_vs_T_simulated.csv"))

    print("\n" + "=" * 40)
    print("🎉 Figure data generated")
    print(f"📁 Saved to: {args.output_dir}")
    for n, threshold in thresholds.items():
        label = "never violates" if threshold is None else f"T > {threshold:.6f}"
        print(f"   n0 = {n}: {label}")


if __name__ == "__main__":
    main()
