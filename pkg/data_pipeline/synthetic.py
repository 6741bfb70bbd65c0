"""Seeded synthetic provider-edge traffic, sampled like the SNMP telemetry it stands in for."""
import numpy as np

from utils.errors import DataError
from .series import TimeSeries

# 2024-01-01T00:00:00Z, a Monday
DEFAULT_START = 1704067200

BASE_UTILIZATION = 0.30
DIURNAL_AMPLITUDE = 0.15
WEEKEND_DIP = 0.10
NOISE_STD = 0.01
BURST_PROBABILITY = 0.002
BURST_UTILIZATION = 0.10
BURST_DECAY = 0.7


def synth_generate(days, samples_per_day=288, seed=0, capacity_bps=40e9,
                   missing_rate=0.0, start=DEFAULT_START):
    """
    Base load + diurnal sinusoid + weekly modulation + Gaussian noise +
    decaying bursts, clipped to [0, capacity]. Deterministic per seed.
    """
    if not isinstance(days, (int, np.integer)) or days < 1:
        raise DataError(f"days must be a positive integer, got {days!r}")
    if samples_per_day < 1 or 86400 % samples_per_day:
        raise DataError(f"samples_per_day must divide a day evenly, got {samples_per_day}")
    if not 0.0 <= missing_rate < 1.0:
        raise DataError(f"missing_rate must lie in [0, 1), got {missing_rate}")

    rng = np.random.default_rng(seed)
    n = days * samples_per_day
    step = np.arange(n)
    day_phase = 2.0 * np.pi * step / samples_per_day
    week_phase = 2.0 * np.pi * step / (7 * samples_per_day)

    # trough around 04:00, peak around 16:00
    diurnal = DIURNAL_AMPLITUDE * np.sin(day_phase - 2.0 * np.pi * 10 / 24)
    weekly = -WEEKEND_DIP * np.clip(np.sin(week_phase - 2.0 * np.pi * 3 / 7), 0.0, None)
    noise = rng.normal(0.0, NOISE_STD, size=n)

    kicks = (rng.random(n) < BURST_PROBABILITY) * rng.uniform(0.5, 1.0, size=n) * BURST_UTILIZATION
    bursts = np.zeros(n)
    level = 0.0
    for i in range(n):
        level = level * BURST_DECAY + kicks[i]
        bursts[i] = level

    utilization = BASE_UTILIZATION + diurnal + weekly + noise + bursts
    values = np.clip(utilization * capacity_bps, 0.0, capacity_bps)

    if missing_rate > 0.0:
        values[rng.random(n) < missing_rate] = np.nan

    interval = 86400 // samples_per_day
    timestamps = start + interval * step.astype(np.int64)
    return TimeSeries(timestamps, values)
