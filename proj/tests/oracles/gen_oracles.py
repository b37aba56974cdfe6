#!/usr/bin/env python3
"""Regenerates the reference fixtures used by the filter and statistics tests.

The values are produced by SciPy, which is independent of the C++ code under
test. Run from the repository root:

    python3 tests/oracles/gen_oracles.py

The output files are committed; tests never invoke Python.
"""
import json
import pathlib

import numpy as np
import scipy
from scipy import signal, stats

HERE = pathlib.Path(__file__).resolve().parent


def provenance():
    return {
        "generator": "tests/oracles/gen_oracles.py",
        "scipy": scipy.__version__,
        "numpy": np.__version__,
    }


def butterworth_fixtures():
    designs = []
    for order in (1, 2, 3, 4, 5, 6):
        for cutoff in (0.2, 0.5, 1.0, 2.0):
            b, a = signal.butter(order, cutoff, btype="low", fs=10.0)
            freqs = [0.0, 0.1, 0.2, 0.5, 1.0, 2.0, 4.0]
            _, h = signal.freqz(b, a, worN=freqs, fs=10.0)
            designs.append({
                "order": order,
                "cutoff_hz": cutoff,
                "sample_hz": 10.0,
                "b": list(map(float, b)),
                "a": list(map(float, a)),
                "freqs_hz": freqs,
                "magnitude": list(map(float, np.abs(h))),
            })

    # Zero-phase application: odd reflection of 3 x order samples, steady-state
    # initial conditions scaled by the first sample of each pass.
    rng = np.random.default_rng(20240611)
    t = np.arange(0, 20.0, 0.1)
    raw = 6.0 + 1.5 * np.sin(2 * np.pi * 0.1 * t) + rng.normal(0, 0.4, t.size)
    raw = np.clip(raw, 0, None)
    sos = signal.butter(4, 0.5, btype="low", fs=10.0, output="sos")
    smoothed = signal.sosfiltfilt(sos, raw, padtype="odd", padlen=12)

    short = np.array([3.0, 3.5, 4.1, 4.0, 4.4, 5.0, 5.2, 5.1, 5.6, 6.0, 6.3, 6.2, 6.8, 7.0, 7.1, 7.3])
    short_smoothed = signal.sosfiltfilt(sos, short, padtype="odd", padlen=12)

    return {
        "provenance": provenance(),
        "designs": designs,
        "filtfilt": [
            {"order": 4, "cutoff_hz": 0.5, "sample_hz": 10.0,
             "input": list(map(float, raw)), "output": list(map(float, smoothed))},
            {"order": 4, "cutoff_hz": 0.5, "sample_hz": 10.0,
             "input": list(map(float, short)), "output": list(map(float, short_smoothed))},
        ],
    }


def ad_pvalue_capped(a, b):
    res = stats.anderson_ksamp([a, b], midrank=True)
    return float(res.statistic), float(min(max(res.pvalue, 0.001), 0.25))


def stats_fixtures():
    rng = np.random.default_rng(7)
    cases = []

    def add(name, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        welch = stats.ttest_ind(a, b, equal_var=False)
        pooled = stats.ttest_ind(a, b, equal_var=True)
        d = stats.ks_2samp(a, b).statistic
        en = a.size * b.size / (a.size + b.size)
        ks_p = float(stats.kstwobign.sf(np.sqrt(en) * d))
        entry = {
            "name": name,
            "a": list(map(float, a)),
            "b": list(map(float, b)),
            "welch_t": float(welch.statistic),
            "welch_p": float(welch.pvalue),
            "pooled_t": float(pooled.statistic),
            "pooled_p": float(pooled.pvalue),
            "ks_d": float(d),
            "ks_p": ks_p,
        }
        if a.size >= 2 and b.size >= 2 and np.unique(np.hstack([a, b])).size >= 2:
            ad_stat, ad_p = ad_pvalue_capped(a, b)
            entry["ad_stat"] = ad_stat
            entry["ad_p"] = ad_p
        cases.append(entry)

    add("integers_shifted", [1, 2, 3, 4, 5], [3, 4, 5, 6, 7])
    add("normal_same", rng.normal(0, 1, 40), rng.normal(0, 1, 35))
    add("normal_shift", rng.normal(0, 1, 60), rng.normal(0.6, 1.4, 50))
    add("normal_scale", rng.normal(2, 0.5, 80), rng.normal(2, 2.0, 90))
    add("small_unequal", rng.normal(5, 1, 6), rng.normal(6, 3, 11))
    add("ties_rounded", np.round(rng.normal(3, 1, 45), 1), np.round(rng.normal(3.3, 1, 55), 1))
    add("exponential_vs_normal", rng.exponential(1.0, 120), rng.normal(1.0, 1.0, 100))
    add("moderate_ad", rng.normal(0, 1, 30), rng.normal(0.55, 1, 30))
    add("separated", rng.uniform(0, 1, 50), rng.uniform(10, 11, 50))
    add("identical", [0.3, 1.2, 2.2, 2.9, 4.4, 5.0], [0.3, 1.2, 2.2, 2.9, 4.4, 5.0])
    return {"provenance": provenance(), "cases": cases}


def main():
    (HERE / "butterworth.json").write_text(json.dumps(butterworth_fixtures(), indent=1) + "\n")
    (HERE / "two_sample.json").write_text(json.dumps(stats_fixtures(), indent=1) + "\n")


if __name__ == "__main__":
    main()
