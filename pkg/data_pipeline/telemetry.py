"""
SNMP interface telemetry: JSON records of octet counters (or precomputed
rates) and their conversion to bits per second.

Counter mode:  [{"ts": 1704067200, "octets": 123456789}, ...]
Rate mode:     [{"ts": 1704067200, "bps": 1.2e9}, ...]
Every other key (ifDescr, ifIndex, ...) is dropped.
"""
import json
import logging
from dataclasses import dataclass, field

import numpy as np

from utils.errors import DataError
from .series import TimeSeries, regularize_series

logger = logging.getLogger(__name__)

COUNTER_MODE = 'counter'
RATE_MODE = 'rate'
TRAFFIC_KEYS = {'octets': COUNTER_MODE, 'bps': RATE_MODE}


@dataclass
class RawTelemetry:
    """Sorted telemetry records; counters are kept as exact Python ints"""
    timestamps: list = field(default_factory=list)
    readings: list = field(default_factory=list)
    mode: str = COUNTER_MODE
    capacity_bps: float = 40e9

    def __len__(self):
        return len(self.timestamps)


def _record_mode(record, index):
    present = [key for key in TRAFFIC_KEYS if key in record]
    if len(present) != 1:
        raise DataError(f"record {index} must carry exactly one of {sorted(TRAFFIC_KEYS)}, "
                        f"found {present or 'neither'}",
                        suggestion="unknown traffic units are not accepted")
    return TRAFFIC_KEYS[present[0]], present[0]


def parse_telemetry_json(document, capacity_bps=40e9):
    """Parse a telemetry document (str, bytes or already-decoded list) into RawTelemetry"""
    if isinstance(document, (str, bytes, bytearray)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise DataError(f"malformed telemetry document: {e}") from e
    if not isinstance(document, list):
        raise DataError("telemetry document must be a JSON array of records")

    records = []
    mode = None
    dropped = set()
    for index, record in enumerate(document):
        if not isinstance(record, dict) or 'ts' not in record:
            raise DataError(f"record {index} is not an object with a 'ts' field")
        record_mode, key = _record_mode(record, index)
        dropped.update(set(record) - {'ts', key})
        if mode is None:
            mode = record_mode
        elif record_mode != mode:
            raise DataError(f"record {index} mixes {record_mode} mode into a {mode} document")
        ts = record['ts']
        if isinstance(ts, bool) or not isinstance(ts, int):
            raise DataError(f"record {index} has a non-integer timestamp {ts!r}")
        records.append((ts, _reading(record[key], record_mode, index)))

    if dropped:
        logger.debug('dropped non-traffic fields: %s', sorted(dropped))
    records.sort(key=lambda item: item[0])
    timestamps = [ts for ts, _ in records]
    duplicates = sorted({a for a, b in zip(timestamps, timestamps[1:]) if a == b})
    if duplicates:
        raise DataError(f"duplicate timestamps in telemetry: {duplicates[:5]}")

    return RawTelemetry(timestamps=timestamps,
                        readings=[reading for _, reading in records],
                        mode=mode or COUNTER_MODE,
                        capacity_bps=capacity_bps)


def _reading(value, mode, index):
    if mode == COUNTER_MODE:
        if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value < 2 ** 64:
            raise DataError(f"record {index} has an invalid octet counter {value!r}")
        return value
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DataError(f"record {index} has a non-numeric bps value {value!r}")
    return float(value)


def load_telemetry(path, capacity_bps=40e9):
    try:
        with open(path, 'rb') as handle:
            return parse_telemetry_json(handle.read(), capacity_bps=capacity_bps)
    except OSError as e:
        raise DataError(f"cannot read telemetry file {path}: {e}") from e


def counters_to_bps(raw, interval_seconds=300, divide_by_interval=True, counter_bits=64):
    """
    Convert octet counters to one rate per interval (output length = records - 1).

    delta = (c_end - c_start) mod 2**counter_bits, bits = 8 * delta, and the
    value is bits / interval_seconds (or raw bits per interval when
    divide_by_interval is False). Intervals whose spacing differs from the
    nominal one, and rates above the interface capacity (counter resets), are
    marked missing. Each value is stamped with the interval's end time.
    """
    if raw.mode != COUNTER_MODE:
        raise DataError("counters_to_bps needs counter-mode telemetry")
    if len(raw) < 2:
        raise DataError(f"need at least 2 counter records, got {len(raw)}")
    if counter_bits not in (32, 64):
        raise DataError(f"counter_bits must be 32 or 64, got {counter_bits}")

    modulus = 2 ** counter_bits
    values = np.empty(len(raw) - 1)
    resets = 0
    for i in range(1, len(raw)):
        gap = raw.timestamps[i] - raw.timestamps[i - 1]
        if gap != interval_seconds:
            values[i - 1] = np.nan
            continue
        delta_octets = (raw.readings[i] - raw.readings[i - 1]) % modulus
        bits = delta_octets * 8
        value = bits / interval_seconds if divide_by_interval else float(bits)
        if divide_by_interval and raw.capacity_bps and value > raw.capacity_bps:
            resets += 1
            value = np.nan
        values[i - 1] = value

    if resets:
        logger.warning("%d intervals exceeded %.3g bps capacity and were marked missing",
                       resets, raw.capacity_bps)
    return TimeSeries(np.asarray(raw.timestamps[1:], dtype=np.int64), values)


def rates_to_series(raw, interval_seconds=300):
    """Rate-mode telemetry as a series; null readings and gaps become missing slots"""
    if raw.mode != RATE_MODE:
        raise DataError("rates_to_series needs rate-mode telemetry")
    values = [np.nan if reading is None else reading for reading in raw.readings]
    return regularize_series(TimeSeries(raw.timestamps, values), interval_seconds)


def telemetry_to_series(raw, interval_seconds=300, divide_by_interval=True, counter_bits=64):
    """Dispatch on the telemetry mode"""
    if raw.mode == COUNTER_MODE:
        return counters_to_bps(raw, interval_seconds, divide_by_interval, counter_bits)
    return rates_to_series(raw, interval_seconds)
