#!/usr/bin/env python3
"""Regenerates the bundled growth-reference asset and every test fixture.

Everything is seeded; rerunning produces byte-identical files. The XPORT
files are verified by reading them back with pandas' independent reader, and
the expected-values JSON is computed here with plain float64 arithmetic so
the C++ tests can compare against an implementation-independent recomputation.
"""

import json
import math
import struct
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
ASSETS = ROOT / "assets"
SEED = 20240801


# ---------------------------------------------------------------- XPORT v5

def ieee_to_ibm(x: float) -> bytes:
    if x == 0.0:
        return b"\x00" * 8
    sign = 0x80 if x < 0 else 0
    x = abs(x)
    mantissa, exp2 = math.frexp(x)  # x = mantissa * 2^exp2, mantissa in [0.5, 1)
    # shift to a base-16 exponent: x = frac * 16^exp16 with frac in [1/16, 1)
    exp16, rem = divmod(exp2, 4)
    if rem:
        exp16 += 1
        rem -= 4  # frac = mantissa * 2^rem
    frac = math.ldexp(mantissa, rem)
    m56 = int(math.ldexp(frac, 56))  # exact: frac has at most 53 significant bits
    assert 0 < m56 < (1 << 56)
    b0 = sign | (exp16 + 64)
    assert 0 <= b0 <= 0xFF, f"exponent out of IBM range for {x}"
    return bytes([b0]) + m56.to_bytes(7, "big")


def _pad80(data: bytes, fill: bytes = b" ") -> bytes:
    if len(data) % 80:
        data += fill * (80 - len(data) % 80)
    return data


def _header(kind: str, tail: str) -> bytes:
    rec = f"HEADER RECORD*******{kind:<8}HEADER RECORD!!!!!!!{tail}"
    assert len(rec) == 80, (kind, len(rec))
    return rec.encode("ascii")


def write_xpt(path: Path, dsname: str, columns):
    """columns: list of (name, kind, length, values); kind in {'num', 'char'}.

    Numeric missing values are passed as None (sentinel '.')."""
    stamp = "01JAN70:00:00:00"
    zeros30 = "0" * 30 + "  "
    out = bytearray()
    out += _header("LIBRARY ", zeros30)
    out += _pad80(f"{'SAS':<8}{'SAS':<8}{'SASLIB':<8}{'6.06':<8}{'Linux':<8}".encode()
                  + b" " * 24 + stamp.encode())
    out += _pad80(stamp.encode())
    out += _header("MEMBER  ", "0" * 17 + "1600000000140  ")
    out += _header("DSCRPTR ", zeros30)
    out += _pad80(f"{'SAS':<8}{dsname:<8}{'SASDATA':<8}{'6.06':<8}{'Linux':<8}".encode()
                  + b" " * 24 + stamp.encode())
    out += _pad80(stamp.encode() + b" " * 16 + b" " * 40 + b" " * 8)
    out += _header("NAMESTR ", f"{'0' * 6}{len(columns):04d}{'0' * 20}  ")

    namestr = bytearray()
    pos = 0
    for i, (name, kind, length, _values) in enumerate(columns):
        ntype = 1 if kind == "num" else 2
        namestr += struct.pack(
            ">hhhh8s40s8shhh2s8shhi52s",
            ntype, 0, length, i + 1,
            name.upper().encode().ljust(8),
            name.encode().ljust(40),
            b" " * 8, 0, 0, 0, b"  ", b" " * 8, 0, 0, pos, b" " * 52,
        )
        pos += length
    out += _pad80(bytes(namestr))

    out += _header("OBS     ", zeros30)
    nrows = len(columns[0][3])
    body = bytearray()
    for r in range(nrows):
        for name, kind, length, values in columns:
            v = values[r]
            if kind == "num":
                assert length == 8
                if v is None:
                    body += b"\x2e" + b"\x00" * 7
                else:
                    body += ieee_to_ibm(float(v))
            else:
                body += str(v).encode("ascii").ljust(length)[:length]
    out += _pad80(bytes(body))
    path.write_bytes(bytes(out))


# ------------------------------------------------------------ growth asset

def lms_tables():
    """Smooth LMS curves in the CDC table format (sex 1/2, half-month rows)."""
    ages = [24.0] + [24.5 + i for i in range(217)]  # 24.0, 24.5 .. 240.5
    rows = []
    for sex in (1, 2):
        for a in ages:
            t = a - 24.0
            if sex == 1:
                M = 16.5 - 0.034908 * t + 2.7521e-4 * t * t
                L = -1.6 - 0.008 * t + 2.8e-5 * t * t
                S = 0.075 + 3.5e-4 * t - 8.0e-7 * t * t
            else:
                M = 16.3 - 0.032963 * t + 2.5977e-4 * t * t
                L = -1.5 - 0.0085 * t + 3.0e-5 * t * t
                S = 0.078 + 3.4e-4 * t - 7.5e-7 * t * t
            rows.append((sex, a, round(L, 6), round(M, 6), round(S, 6)))
    return rows


def write_lms_csv(rows):
    lines = ["sex,agemos,L,M,S"]
    for sex, a, L, M, S in rows:
        lines.append(f"{sex},{a},{L},{M},{S}")
    ASSETS.mkdir(exist_ok=True)
    (ASSETS / "lms_bmi_for_age.csv").write_text("\n".join(lines) + "\n")


class Lms:
    def __init__(self, rows):
        self.by_sex = {1: [], 2: []}
        for sex, a, L, M, S in rows:
            self.by_sex[sex].append((a, L, M, S))

    def params(self, sex, agemos):
        rows = self.by_sex[sex]
        for a, L, M, S in rows:
            if a == agemos:
                return L, M, S
        for (a0, L0, M0, S0), (a1, L1, M1, S1) in zip(rows, rows[1:]):
            if a0 < agemos < a1:
                w = (agemos - a0) / (a1 - a0)
                return L0 + w * (L1 - L0), M0 + w * (M1 - M0), S0 + w * (S1 - S0)
        raise ValueError(f"age {agemos} outside table")


def lms_value_at(z, L, M, S):
    if abs(L) > 1e-12:
        return M * (1.0 + L * S * z) ** (1.0 / L)
    return M * math.exp(S * z)


def lms_zscore(x, L, M, S):
    if abs(L) > 1e-12:
        return ((x / M) ** L - 1.0) / (L * S)
    return math.log(x / M) / S


def percentile(z):
    return 100.0 * 0.5 * math.erfc(-z / math.sqrt(2.0))


# ----------------------------------------------------------- micro fixture

RACE_LEVELS = {1: "Mexican American", 2: "Other Hispanic", 3: "Non-Hispanic White",
               4: "Non-Hispanic Black", 6: "Non-Hispanic Asian", 7: "Other/Multi-Racial"}


def make_micro(rng, lms):
    n_children, n_adults = 770, 50
    n = n_children + n_adults
    seqn = [130001.0 + i for i in range(n)]
    age = np.concatenate([
        rng.integers(2, 20, n_children),        # 2..19
        rng.integers(20, 80, n_adults),
    ]).astype(float)
    order = rng.permutation(n)
    seqn = [seqn[i] for i in range(n)]  # keep ids sequential
    age = age[order]

    sex = rng.integers(1, 3, n).astype(float)
    race = rng.choice([1, 2, 3, 4, 6, 7], size=n,
                      p=[0.13, 0.08, 0.33, 0.24, 0.12, 0.10]).astype(float)
    pir = np.round(np.clip(rng.lognormal(0.45, 0.62, n), 0.0, 5.0), 2)
    hh = rng.integers(1, 8, n).astype(float)
    edu = rng.choice([1, 2, 3], size=n, p=[0.25, 0.45, 0.30]).astype(float)
    born = rng.choice([1, 2], size=n, p=[0.82, 0.18]).astype(float)

    pir_vals = [None if rng.random() < 0.07 else float(v) for v in pir]
    edu_vals = [9.0 if rng.random() < 0.04 else float(v) for v in edu]
    born_vals = [float(rng.choice([77.0, 99.0])) if rng.random() < 0.02 else float(v)
                 for v in born]

    # risk score on the z scale: socioeconomic base plus age/income interaction
    weight_vals, height_vals, z_design = [], [], []
    for i in range(n):
        a = age[i]
        mu = 0.0
        mu += 0.60 if a >= 11 else 0.0
        p = pir_vals[i] if pir_vals[i] is not None else 2.0
        mu += 0.90 if p < 1.3 else 0.0
        mu -= 0.50 if (p < 1.3 and a >= 11) else 0.0
        mu += 0.35 if race[i] in (4.0, 6.0) else 0.0
        mu += 0.20 if born_vals[i] == 2.0 else 0.0
        mu += 0.05 * (hh[i] - 3.0)
        e = edu_vals[i] if edu_vals[i] in (1.0, 2.0, 3.0) else 2.0
        mu -= 0.15 * (e - 2.0)
        z = mu + rng.normal(0.0, 1.0)
        z_design.append(z)

        aa = min(a, 19.0)  # adults get a child-like body anyway; they are filtered out
        months = math.floor(aa * 12.0) + 0.5
        L, M, S = lms.params(int(sex[i]), months)
        bmi = lms_value_at(max(min(z, 3.6), -3.6), L, M, S)
        h = 80.0 + 5.8 * (aa - 2.0) - 0.06 * (aa - 2.0) ** 2 + rng.normal(0.0, 4.0)
        h = float(np.clip(h, 80.0, 200.0))
        w = bmi * (h / 100.0) ** 2
        height_vals.append(round(h, 1))
        weight_vals.append(round(w, 1))

    # body-measure defects: some SEQNs absent from the body file, some missing weight
    in_bmx = rng.random(n) >= 0.03
    wt_missing = rng.random(n) < 0.02

    demo_cols = [
        ("SEQN", "num", 8, seqn),
        ("RIDAGEYR", "num", 8, list(age)),
        ("RIAGENDR", "num", 8, list(sex)),
        ("RIDRETH3", "num", 8, list(race)),
        ("INDFMPIR", "num", 8, pir_vals),
        ("DMDHHSIZ", "num", 8, list(hh)),
        ("DMDHREDZ", "num", 8, edu_vals),
        ("DMDBORN4", "num", 8, born_vals),
    ]
    bmx_rows = [i for i in range(n) if in_bmx[i]]
    bmx_cols = [
        ("SEQN", "num", 8, [seqn[i] for i in bmx_rows]),
        ("BMXWT", "num", 8, [None if wt_missing[i] else weight_vals[i] for i in bmx_rows]),
        ("BMXHT", "num", 8, [height_vals[i] for i in bmx_rows]),
    ]
    write_xpt(FIXTURES / "nhanes_demo.xpt", "DEMO", demo_cols)
    write_xpt(FIXTURES / "nhanes_bmx.xpt", "BMX", bmx_cols)

    # replicate the cohort cleaning chain to freeze the manifest counts
    counts = {"age_out_of_range": 0, "missing_height_weight": 0, "invalid_height_weight": 0,
              "missing_predictor": 0, "unmapped_category": 0, "invalid_value": 0}
    kept = []
    merged_rows = 0
    for i in range(n):
        if not in_bmx[i]:
            continue  # lost in the id join, before cohort cleaning
        merged_rows += 1
        a = age[i]
        if a < 2.0 or a > 19.0:
            counts["age_out_of_range"] += 1
            continue
        if wt_missing[i]:
            counts["missing_height_weight"] += 1
            continue
        if born_vals[i] in (77.0, 99.0):
            counts["missing_predictor"] += 1
            continue
        if pir_vals[i] is None:
            counts["missing_predictor"] += 1
            continue
        if edu_vals[i] == 9.0:
            counts["missing_predictor"] += 1
            continue
        kept.append(i)

    labels = []
    for i in kept:
        months = math.floor(age[i] * 12.0) + 0.5
        L, M, S = lms.params(int(sex[i]), months)
        bmi = weight_vals[i] / (height_vals[i] / 100.0) ** 2
        labels.append(1 if percentile(lms_zscore(bmi, L, M, S)) >= 95.0 else 0)

    return {
        "demo_rows": n,
        "bmx_rows": len(bmx_rows),
        "merged_rows": merged_rows,
        "kept": len(kept),
        "dropped_by_reason": {k: v for k, v in counts.items() if v > 0},
        "label_positive": int(sum(labels)),
    }


# ----------------------------------------------------------- macro fixture

STATES = [
    "Alabama", "Arizona", "Arkansas", "California", "Colorado", "Connecticut", "Delaware",
    "Florida", "Georgia", "Idaho", "Illinois", "Indiana", "Iowa", "Kansas", "Kentucky",
    "Louisiana", "Maine", "Maryland", "Massachusetts", "Michigan", "Minnesota", "Mississippi",
    "Missouri", "Montana", "Nebraska", "Nevada", "New Hampshire", "New Jersey", "New Mexico",
    "New York", "North Carolina", "North Dakota", "Ohio", "Oklahoma", "Oregon", "Pennsylvania",
    "Rhode Island", "South Carolina", "South Dakota", "Tennessee", "Texas", "Utah", "Vermont",
    "Virginia", "Washington", "West Virginia", "Wisconsin", "Wyoming",
]

# (name, unit, direction, source, raw_min, raw_max); direction + means higher = worse
INDICATORS = [
    ("PovertyRate", "percent", "+", "usda", 9.535, 24.832),
    ("MedianFamilyIncome", "usd", "-", "usda", 48327.68, 99144.50),
    ("LILATracts_1And10", "proportion", "+", "usda", 0.071, 0.450),
    ("HUNVFlag", "proportion", "+", "usda", 0.018, 0.162),
    ("Good Days", "days/year", "-", "epa", 128.0, 322.0),
    ("Moderate Days", "days/year", "+", "epa", 21.0, 174.0),
    ("Unhealthy Days", "days/year", "+", "epa", 0.3, 37.5),
    ("Max AQI", "aqi", "+", "epa", 78.0, 225.0),
    ("Median AQI", "aqi", "+", "epa", 27.5, 46.8),
    ("Days Ozone", "days/year", "+", "epa", 3.619, 149.267),
]

# Table-anchored rows: aligned Z fixed by the published raw values
PINNED = {
    "Mississippi": {"PovertyRate": 24.832, "LILATracts_1And10": 0.347,
                    "Median AQI": 42.600, "Days Ozone": 59.200,
                    "MedianFamilyIncome": 48327.68},
    "Alabama": {"PovertyRate": 21.211, "LILATracts_1And10": 0.249,
                "Median AQI": 41.429, "Days Ozone": 23.786},
    "Arkansas": {"PovertyRate": 20.085, "LILATracts_1And10": 0.292,
                 "Median AQI": 41.727, "Days Ozone": 71.727},
    "Louisiana": {"PovertyRate": 22.578, "LILATracts_1And10": 0.268,
                  "Median AQI": 39.955, "Days Ozone": 100.864},
}
TARGET_SCORE = {"Mississippi": 0.550, "Arkansas": 0.503, "Louisiana": 0.486, "Alabama": 0.448}

# one aligned-1.0 anchor per indicator, never on a pinned or lowest state
MAX_ANCHORS = {"PovertyRate": "Mississippi", "MedianFamilyIncome": "Mississippi",
               "LILATracts_1And10": "New Mexico", "HUNVFlag": "New York",
               "Good Days": "Ohio", "Moderate Days": "Texas", "Unhealthy Days": "Pennsylvania",
               "Max AQI": "Arizona", "Median AQI": "California", "Days Ozone": "California"}
MIN_ANCHORS = {"PovertyRate": "New Hampshire", "MedianFamilyIncome": "New Jersey",
               "LILATracts_1And10": "Vermont", "HUNVFlag": "Utah",
               "Good Days": "Montana", "Moderate Days": "Maine", "Unhealthy Days": "Vermont",
               "Max AQI": "Maine", "Median AQI": "Wyoming", "Days Ozone": "Vermont"}


def aligned_to_raw(name, z):
    spec = next(i for i in INDICATORS if i[0] == name)
    lo, hi = spec[4], spec[5]
    frac = z if spec[2] == "+" else 1.0 - z
    return lo + frac * (hi - lo)


def raw_to_aligned(name, x):
    spec = next(i for i in INDICATORS if i[0] == name)
    lo, hi = spec[4], spec[5]
    z = (x - lo) / (hi - lo)
    return z if spec[2] == "+" else 1.0 - z


def design_macro(rng):
    """Choose per-state aligned Z profiles hitting the target scores."""
    k = len(INDICATORS)
    # per-state target EnvScore
    targets = dict(TARGET_SCORE)
    others = [s for s in STATES if s not in targets]
    # deep-south-ish states run high, northeast/mountain states run low
    high = ["Oklahoma", "West Virginia", "Kentucky", "Tennessee", "South Carolina", "Georgia",
            "Texas", "New Mexico", "Arizona", "Nevada", "Missouri", "Indiana"]
    low = ["New Hampshire", "Vermont", "Massachusetts", "Connecticut", "Minnesota", "Colorado",
           "Utah", "Washington", "Maine", "Wisconsin", "Oregon", "Rhode Island", "Iowa",
           "North Dakota", "South Dakota", "Nebraska", "Montana", "Wyoming", "Idaho",
           "New Jersey", "Maryland", "Delaware"]
    for s in others:
        if s in high:
            targets[s] = float(rng.uniform(0.385, 0.432))
        elif s in low:
            targets[s] = float(rng.uniform(0.162, 0.255))
        else:
            targets[s] = float(rng.uniform(0.27, 0.38))
    targets["New Hampshire"] = 0.157  # table minimum

    # nudge the interior states so the grand mean lands on 0.351
    def grand_mean():
        return sum(targets.values()) / len(targets)

    adjustable = [s for s in others if s not in ("New Hampshire",)]
    for _ in range(60):
        err = 0.351 - grand_mean()
        if abs(err) < 1e-9:
            break
        step = err * len(targets) / len(adjustable)
        for s in adjustable:
            targets[s] = float(np.clip(targets[s] + step, 0.16, 0.437))

    # per-state aligned profile
    profiles = {}
    for s in STATES:
        fixed = {}
        for name, anchor in MAX_ANCHORS.items():
            if anchor == s:
                fixed[name] = 1.0
        for name, anchor in MIN_ANCHORS.items():
            if anchor == s:
                fixed[name] = 0.0
        if s in PINNED:
            for name, raw in PINNED[s].items():
                fixed[name] = raw_to_aligned(name, raw)

        free = [i[0] for i in INDICATORS if i[0] not in fixed]
        need = targets[s] * k - sum(fixed.values())
        base = need / len(free) if free else 0.0
        noise = rng.uniform(-0.12, 0.12, len(free))
        noise -= noise.mean()
        z = np.clip(base + noise, 0.03, 0.95)
        # restore the exact sum after clipping
        for _ in range(40):
            gap = need - z.sum()
            if abs(gap) < 1e-12:
                break
            room = np.where(gap > 0, 0.95 - z, z - 0.03)
            total_room = room.sum()
            if total_room <= 0:
                break
            z = np.clip(z + gap * room / total_room, 0.03, 0.95)
        profile = dict(zip(free, z.tolist()))
        profile.update(fixed)
        profiles[s] = profile
    return targets, profiles


def make_macro(rng):
    targets, profiles = design_macro(rng)

    # county rows: 4 per state, deltas cancel pairwise so the mean stays put
    county_names = ["Adams", "Franklin", "Jackson", "Union"]
    usda_lines = ["State,County,PovertyRate,MedianFamilyIncome,LILATracts_1And10,HUNVFlag,Population"]
    epa_lines = ["State,County,Year,Good Days,Moderate Days,Unhealthy Days,Max AQI,Median AQI,Days Ozone"]
    state_values = {}  # realized state-level value per (state, indicator)

    for s in STATES:
        rows = {name: [] for name, *_ in INDICATORS}
        for name, _unit, _dir, _src, lo, hi in INDICATORS:
            x = aligned_to_raw(name, profiles[s][name])
            scale = 0.04 * (hi - lo)
            d1 = float(rng.uniform(0.3, 1.0)) * scale
            d2 = float(rng.uniform(0.3, 1.0)) * scale
            vals = [x + d1, x - d1, x + d2, x - d2]
            rows[name] = [round(v, 6) for v in vals]
        pops = [int(v) for v in rng.integers(8000, 900000, 4)]
        for ci, county in enumerate(county_names):
            u = rows
            usda_lines.append(
                f"{s},{county},{u['PovertyRate'][ci]},{u['MedianFamilyIncome'][ci]},"
                f"{u['LILATracts_1And10'][ci]},{u['HUNVFlag'][ci]},{pops[ci]}")
            epa_lines.append(
                f"{s},{county},2022,{u['Good Days'][ci]},{u['Moderate Days'][ci]},"
                f"{u['Unhealthy Days'][ci]},{u['Max AQI'][ci]},{u['Median AQI'][ci]},"
                f"{u['Days Ozone'][ci]}")
        # realized unweighted mean in input row order (float64, left to right)
        for name, *_ in INDICATORS:
            acc = 0.0
            for v in rows[name]:
                acc += 1.0 * v
            state_values[(s, name)] = acc / 4.0

    (FIXTURES / "usda_counties.csv").write_text("\n".join(usda_lines) + "\n")
    (FIXTURES / "epa_counties.csv").write_text("\n".join(epa_lines) + "\n")

    # replicate normalization + composite exactly as the pipeline computes it
    norm = {}
    for name, _unit, direction, _src, _lo, _hi in INDICATORS:
        vals = [state_values[(s, name)] for s in sorted(STATES)]
        lo, hi = min(vals), max(vals)
        for s in sorted(STATES):
            z = (state_values[(s, name)] - lo) / (hi - lo)
            if direction == "-":
                z = 1.0 - z
            norm[(s, name)] = z
    scores = {}
    for s in sorted(STATES):
        acc = 0.0
        for name, *_ in INDICATORS:
            acc += norm[(s, name)]
        scores[s] = acc / len(INDICATORS)

    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    vals = [scores[s] for s in sorted(STATES)]
    mean = sum(vals) / len(vals)
    std = math.sqrt(sum((v - mean) ** 2 for v in vals) / len(vals))
    summary = {
        "targets_hit": {s: scores[s] for s in TARGET_SCORE},
        "top4": [s for s, _v in ranked[:4]],
        "envscore_by_state": scores,
        "envscore_stats": {"min": min(vals), "max": max(vals), "mean": mean, "std": std},
        "state_values_sample": {
            "Mississippi/PovertyRate": state_values[("Mississippi", "PovertyRate")],
            "Mississippi/Days Ozone": state_values[("Mississippi", "Days Ozone")],
            "California/Median AQI": state_values[("California", "Median AQI")],
            "New Hampshire/PovertyRate": state_values[("New Hampshire", "PovertyRate")],
        },
    }
    for s in TARGET_SCORE:
        assert abs(scores[s] - TARGET_SCORE[s]) < 0.02, (s, scores[s])
    assert set(summary["top4"]) == set(TARGET_SCORE), summary["top4"]
    assert abs(mean - 0.351) < 0.02, mean
    assert std > 0.076, std
    assert abs(min(vals) - 0.157) < 0.02, min(vals)
    return summary


# --------------------------------------------------------- schema / config

def write_schema():
    schema = {
        "version": 1,
        "missing_policy": "drop",
        "variables": [
            {"source": "SEQN", "role": "id", "target": "id"},
            {"source": "RIDAGEYR", "role": "predictor", "target": "age_years",
             "kind": "numeric"},
            {"source": "RIAGENDR", "role": "predictor", "target": "sex", "kind": "category",
             "levels": {"1": "male", "2": "female"}},
            {"source": "RIDRETH3", "role": "predictor", "target": "race_eth",
             "kind": "category",
             "levels": {str(k): v for k, v in RACE_LEVELS.items()}},
            {"source": "INDFMPIR", "role": "predictor", "target": "income_poverty_ratio",
             "kind": "numeric"},
            {"source": "DMDHHSIZ", "role": "predictor", "target": "household_size",
             "kind": "numeric"},
            {"source": "DMDHREDZ", "role": "predictor", "target": "education",
             "kind": "ordered", "missing_codes": [7, 9]},
            {"source": "DMDBORN4", "role": "predictor", "target": "nativity",
             "kind": "category", "levels": {"1": "us_born", "2": "foreign_born"},
             "missing_codes": [77, 99]},
            {"source": "BMXWT", "role": "weight_kg", "target": "weight_kg"},
            {"source": "BMXHT", "role": "height_cm", "target": "height_cm"},
        ],
        "indicators": [
            {"name": name, "unit": unit,
             "direction": "vulnerability_increasing" if d == "+"
             else "vulnerability_decreasing"}
            for name, unit, d, _src, _lo, _hi in INDICATORS
        ],
    }
    (FIXTURES / "schema.json").write_text(json.dumps(schema, indent=2) + "\n")


def write_config():
    config = {
        "inputs": {
            "nhanes": ["fixtures/nhanes_demo.xpt", "fixtures/nhanes_bmx.xpt"],
            "usda_csv": "fixtures/usda_counties.csv",
            "epa_csv": "fixtures/epa_counties.csv",
            "lms_csv": "assets/lms_bmi_for_age.csv",
            "schema": "fixtures/schema.json",
            "boundaries_geojson": "fixtures/states.geojson",
        },
        "id_column": "SEQN",
        "state_key": {"usda": "State", "epa": "State", "geojson_property": "name"},
        "aggregation": {"method": "mean"},
        "label_mode": "bmi_for_age_p95",
        "split": {"seed": 17, "stratified": True},
        "models": {
            "logistic": {"max_iter": 100, "tol": 1e-8, "l2": 1e-6},
            "forest": {"trees": 300, "max_depth": 6, "min_leaf": 5,
                       "features_per_split": 0, "bootstrap": True, "seed": 7},
            "gbdt": {"rounds": 200, "learning_rate": 0.1, "max_depth": 4, "min_leaf": 1,
                     "lambda": 1.0, "gamma": 0.0},
        },
        "eval": {"multi_seed": 0},
        "explain": {"model": "gbdt_level", "background_cap": 256, "sample": 48, "seed": 5},
        "envscore": {"indicators": [name for name, *_ in INDICATORS]},
        "cluster": {"k": 3, "seed": 11, "restarts": 10, "tol": 1e-8, "max_iter": 300,
                    "features": []},
        "align": {"model": "gbdt_level", "top_n": 4, "risk_scope": "cohort",
                  "indicators": ["PovertyRate", "LILATracts_1And10", "Median AQI",
                                 "Days Ozone"]},
        "output_dir": "out",
    }
    (FIXTURES / "config.json").write_text(json.dumps(config, indent=2) + "\n")


def write_geojson():
    def box(lon, lat):
        return [[[lon, lat], [lon + 2.0, lat], [lon + 2.0, lat + 2.0], [lon, lat + 2.0],
                 [lon, lat]]]

    named = ["Mississippi", "Alabama", "Arkansas", "Louisiana", "California", "New Hampshire",
             "Puerto Rico"]  # the last has no indicator data and stays unannotated
    features = []
    for i, name in enumerate(named):
        features.append({
            "type": "Feature",
            "properties": {"name": name, "fips": f"{i:02d}"},
            "geometry": {"type": "Polygon", "coordinates": box(-120.0 + 6.0 * i, 30.0)},
        })
    doc = {"type": "FeatureCollection", "features": features}
    (FIXTURES / "states.geojson").write_text(json.dumps(doc, indent=2) + "\n")


# ------------------------------------------------------------- small xport

def make_small_xpt():
    cols = [
        ("VALUE", "num", 8, [1.5, None, 42.125]),
        ("NAME", "char", 8, ["alpha", "beta", "gamma"]),
    ]
    write_xpt(FIXTURES / "xpt_small.xpt", "SMALL", cols)
    return {
        "columns": ["VALUE", "NAME"],
        "values": [1.5, None, 42.125],
        "names": ["alpha", "beta", "gamma"],
    }


def verify_with_pandas(summary):
    import pandas as pd

    small = pd.read_sas(FIXTURES / "xpt_small.xpt", format="xport")
    assert list(small.columns) == ["VALUE", "NAME"], small.columns
    assert len(small) == 3, len(small)
    assert small["VALUE"][0] == 1.5 and small["VALUE"][2] == 42.125
    assert math.isnan(small["VALUE"][1])
    names = [v.decode() if isinstance(v, bytes) else v for v in small["NAME"]]
    assert names == ["alpha", "beta", "gamma"], names

    demo = pd.read_sas(FIXTURES / "nhanes_demo.xpt", format="xport")
    bmx = pd.read_sas(FIXTURES / "nhanes_bmx.xpt", format="xport")
    assert len(demo) == summary["micro"]["demo_rows"], len(demo)
    assert len(bmx) == summary["micro"]["bmx_rows"], len(bmx)
    assert list(demo.columns) == ["SEQN", "RIDAGEYR", "RIAGENDR", "RIDRETH3", "INDFMPIR",
                                  "DMDHHSIZ", "DMDHREDZ", "DMDBORN4"]
    assert demo["RIDAGEYR"].min() == 2.0
    assert int(demo["INDFMPIR"].isna().sum()) > 0
    print("pandas verification passed:",
          f"demo={len(demo)} rows, bmx={len(bmx)} rows, small=3 rows")


def main():
    rng = np.random.default_rng(SEED)
    FIXTURES.mkdir(exist_ok=True)

    lms_rows = lms_tables()
    write_lms_csv(lms_rows)
    lms = Lms(lms_rows)

    summary = {"micro": make_micro(rng, lms), "macro": make_macro(rng),
               "xpt_small": make_small_xpt()}
    write_schema()
    write_config()
    write_geojson()

    (FIXTURES / "expected.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    verify_with_pandas(summary)
    print(json.dumps(summary["macro"]["targets_hit"], indent=2))
    print("top4:", summary["macro"]["top4"])
    print("stats:", summary["macro"]["envscore_stats"])
    print("cohort:", summary["micro"])


if __name__ == "__main__":
    main()
