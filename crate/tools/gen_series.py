#!/usr/bin/env python3
"""Regenerates the bundled series datasets in data/series/.

The three datasets follow the classic published recipes for the CBF
(cylinder-bell-funnel), synthetic-control-chart, and waveform generators,
drawn from one pinned RNG stream so the files are bit-for-bit reproducible.
Each dataset is written as a UCR-style TRAIN/TEST pair of tab-separated
files, label first, six decimal places. Experiments pool both files and
re-split, so the TRAIN/TEST boundary only mirrors the usual archive layout.

Run from the repository root:  python3 tools/gen_series.py
"""

import os

import numpy as np

MASTER_SEED = 20260817
OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "data", "series")


def gen_cbf(n, rng, length=128):
    """Cylinder-bell-funnel: (6+eta)*chi[a,b] shapes plus unit noise."""
    X, y = [], []
    for _ in range(n):
        cls = rng.randint(3)
        eta = rng.randn()
        eps = rng.randn(length)
        a = rng.randint(16, 33)
        b = a + rng.randint(32, 97)
        t = np.arange(1, length + 1)
        chi = ((t >= a) & (t <= b)).astype(float)
        if cls == 0:
            s = (6 + eta) * chi + eps
        elif cls == 1:
            s = (6 + eta) * chi * (t - a) / (b - a) + eps
        else:
            s = (6 + eta) * chi * (b - t) / (b - a) + eps
        X.append(s)
        y.append(cls)
    return np.array(X), np.array(y)


def gen_control(n, rng, length=60):
    """Six-class control-chart patterns around a level of 30."""
    X, y = [], []
    t = np.arange(1, length + 1)
    for _ in range(n):
        cls = rng.randint(6)
        base = 30 + rng.uniform(-3, 3, length) * 2
        if cls == 1:
            a = rng.uniform(10, 15)
            T = rng.uniform(10, 15)
            base = base + a * np.sin(2 * np.pi * t / T)
        elif cls == 2:
            base = base + rng.uniform(0.2, 0.5) * t
        elif cls == 3:
            base = base - rng.uniform(0.2, 0.5) * t
        elif cls == 4:
            t0 = rng.randint(length // 3, 2 * length // 3)
            base = base + (t >= t0) * rng.uniform(7.5, 20)
        elif cls == 5:
            t0 = rng.randint(length // 3, 2 * length // 3)
            base = base - (t >= t0) * rng.uniform(7.5, 20)
        X.append(base)
        y.append(cls)
    return np.array(X), np.array(y)


def gen_waveform(n, rng, length=21):
    """Waveform: random convex mixes of two of three triangle bases + noise."""
    t = np.arange(1, length + 1)
    h = [
        np.maximum(6 - np.abs(t - 11), 0),
        np.maximum(6 - np.abs(t - 7), 0),
        np.maximum(6 - np.abs(t - 15), 0),
    ]
    pairs = [(0, 1), (0, 2), (1, 2)]
    X, y = [], []
    for _ in range(n):
        cls = rng.randint(3)
        u = rng.uniform()
        a, b = pairs[cls]
        X.append(u * h[a] + (1 - u) * h[b] + rng.randn(length))
        y.append(cls)
    return np.array(X), np.array(y)


def write_tsv(path, X, y):
    with open(path, "w") as f:
        for row, label in zip(X, y):
            values = "\t".join(f"{v:.6f}" for v in row)
            f.write(f"{int(label)}\t{values}\n")


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    g = np.random.RandomState(MASTER_SEED)
    # Draw order matters: all three datasets share one stream.
    datasets = [
        ("cbf", gen_cbf(930, g), 30),
        ("synthetic_control", gen_control(600, g), 300),
        ("waveform", gen_waveform(600, g), 300),
    ]
    for name, (X, y), n_train in datasets:
        write_tsv(os.path.join(OUT_DIR, f"{name}_TRAIN.tsv"), X[:n_train], y[:n_train])
        write_tsv(os.path.join(OUT_DIR, f"{name}_TEST.tsv"), X[n_train:], y[n_train:])
        print(f"{name}: {n_train} train + {len(X) - n_train} test, length {X.shape[1]}")


if __name__ == "__main__":
    main()
