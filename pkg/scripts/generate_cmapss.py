#!/usr/bin/env python3
"""Generate the synthetic CMAPSS-format dataset shipped in data/cmapss/.

Produces 100 run-to-failure engine histories in the 26-column plain-text
layout (engine id, cycle, 3 settings, 21 sensors). Engine 1 runs exactly
192 cycles; the rest get seeded pseudo-random lengths in [128, 362].
Sensor trajectories drift from a healthy baseline toward a degraded value
as each engine approaches end of life, with per-cycle noise.

Deterministic for a given seed; regenerating with the default seed
reproduces the committed file byte for byte. A real CMAPSS file can be
dropped in place of the output, the column layout is identical.
"""

from __future__ import annotations

import argparse
import random
from pathlib import Path

ENGINES = 100
ENGINE_1_CYCLES = 192
MIN_CYCLES, MAX_CYCLES = 128, 362
SEED = 20260811

# (healthy baseline, end-of-life drift, noise sigma, format)
SENSOR_MODEL = [
    (518.67, 0.0, 0.0, "%.2f"),      # fan inlet temperature
    (641.90, 1.70, 0.25, "%.2f"),    # lpc outlet temperature
    (1586.0, 18.0, 3.0, "%.2f"),     # hpc outlet temperature
    (1399.0, 26.0, 4.0, "%.2f"),     # lpt outlet temperature
    (14.62, 0.0, 0.0, "%.2f"),       # fan inlet pressure
    (21.61, 0.0, 0.0, "%.2f"),       # bypass-duct pressure
    (554.20, -3.6, 0.5, "%.2f"),     # hpc outlet pressure
    (2388.05, 0.26, 0.05, "%.2f"),   # physical fan speed
    (9055.0, 26.0, 7.0, "%.2f"),     # physical core speed
    (1.30, 0.0, 0.0, "%.2f"),        # engine pressure ratio
    (47.30, 0.95, 0.15, "%.2f"),     # hpc outlet static pressure
    (521.80, -3.2, 0.4, "%.2f"),     # ratio of fuel flow
    (2388.05, 0.32, 0.05, "%.2f"),   # corrected fan speed
    (8135.0, 16.0, 6.0, "%.2f"),     # corrected core speed
    (8.405, 0.115, 0.02, "%.4f"),    # bypass ratio
    (0.03, 0.0, 0.0, "%.2f"),        # burner fuel-air ratio
    (392.0, 5.2, 1.2, "%d"),         # bleed enthalpy
    (2388.0, 0.0, 0.0, "%d"),        # required fan speed
    (100.0, 0.0, 0.0, "%.2f"),       # required fan conversion speed
    (38.95, -0.58, 0.08, "%.2f"),    # HPT coolant bleed
    (23.37, -0.34, 0.05, "%.4f"),    # LPT coolant bleed
]


def engine_lengths(rng: random.Random) -> list[int]:
    lengths = [ENGINE_1_CYCLES]
    lengths += [rng.randint(MIN_CYCLES, MAX_CYCLES) for _ in range(ENGINES - 1)]
    return lengths


def emit_engine(rng: random.Random, engine_id: int, length: int) -> list[str]:
    lines = []
    for cycle in range(1, length + 1):
        wear = (cycle / length) ** 1.5
        set1 = rng.gauss(0.0, 0.0022)
        set2 = rng.gauss(0.0, 0.00028)
        fields = [str(engine_id), str(cycle), "%.4f" % set1, "%.4f" % set2, "100.0"]
        for base, drift, sigma, fmt in SENSOR_MODEL:
            value = base + drift * wear + (rng.gauss(0.0, sigma) if sigma else 0.0)
            fields.append(fmt % (round(value) if fmt == "%d" else value))
        lines.append(" ".join(fields))
    return lines


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("data/cmapss/train_FD001.txt"))
    parser.add_argument("--seed", type=int, default=SEED)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    lines: list[str] = []
    for engine_id, length in enumerate(engine_lengths(rng), start=1):
        lines.extend(emit_engine(rng, engine_id, length))

    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(lines)} records for {ENGINES} engines to {args.out}")


if __name__ == "__main__":
    main()
