#!/usr/bin/env python3
"""Writes data/sample_catalog.txt: ~80 Linux instance types with placeholder prices.

Prices are plausible round numbers derived from an on-demand price per type and
fixed per-marketspace factors; they are illustrative only and do not reproduce
any published price list. Output is deterministic.
"""

import argparse
import random
from pathlib import Path

# name, vcpu, clock MHz per vCPU, memory GiB, on-demand USD/h
TYPES = [
    ("t3.nano", 2, 2500, 0.5, 0.006),
    ("t3.micro", 2, 2500, 1, 0.012),
    ("t3.small", 2, 2500, 2, 0.024),
    ("t3.medium", 2, 2500, 4, 0.048),
    ("t3.large", 2, 2500, 8, 0.096),
    ("t3.xlarge", 4, 2500, 16, 0.192),
    ("t3.2xlarge", 8, 2500, 32, 0.384),
    ("t2.nano", 1, 3300, 0.5, 0.0067),
    ("t2.micro", 1, 3300, 1, 0.0134),
    ("t2.small", 1, 3300, 2, 0.0268),
    ("t2.medium", 2, 3300, 4, 0.0536),
    ("t2.large", 2, 3000, 8, 0.1072),
    ("t2.xlarge", 4, 3000, 16, 0.2144),
    ("m5.large", 2, 3100, 8, 0.115),
    ("m5.xlarge", 4, 3100, 16, 0.23),
    ("m5.2xlarge", 8, 3100, 32, 0.46),
    ("m5.8xlarge", 32, 3100, 128, 1.84),
    ("m5.12xlarge", 48, 3100, 192, 2.76),
    ("m5.16xlarge", 64, 3100, 256, 3.68),
    ("m5.24xlarge", 96, 3100, 384, 5.52),
    ("m5d.large", 2, 3100, 8, 0.136),
    ("m5d.xlarge", 4, 3100, 16, 0.272),
    ("m5d.2xlarge", 8, 3100, 32, 0.544),
    ("m5d.12xlarge", 48, 3100, 192, 3.264),
    ("m5d.24xlarge", 96, 3100, 384, 6.528),
    ("m4.large", 2, 2400, 8, 0.12),
    ("m4.xlarge", 4, 2400, 16, 0.24),
    ("m4.2xlarge", 8, 2400, 32, 0.48),
    ("m4.10xlarge", 40, 2400, 160, 2.4),
    ("m4.16xlarge", 64, 2300, 256, 3.84),
    ("c5.large", 2, 3000, 4, 0.097),
    ("c5.xlarge", 4, 3000, 8, 0.194),
    ("c5.2xlarge", 8, 3000, 16, 0.388),
    ("c5.4xlarge", 16, 3000, 32, 0.776),
    ("c5.9xlarge", 36, 3000, 72, 1.746),
    ("c5.18xlarge", 72, 3000, 144, 3.492),
    ("c5d.large", 2, 3000, 4, 0.111),
    ("c5d.xlarge", 4, 3000, 8, 0.222),
    ("c5d.2xlarge", 8, 3000, 16, 0.444),
    ("c5d.4xlarge", 16, 3000, 32, 0.888),
    ("c5d.9xlarge", 36, 3000, 72, 1.998),
    ("c5d.18xlarge", 72, 3000, 144, 3.996),
    ("c4.large", 2, 2900, 3.75, 0.114),
    ("c4.xlarge", 4, 2900, 7.5, 0.227),
    ("c4.2xlarge", 8, 2900, 15, 0.454),
    ("c4.4xlarge", 16, 2900, 30, 0.909),
    ("c4.8xlarge", 36, 2900, 60, 1.817),
    ("r5.4xlarge", 16, 3100, 128, 1.216),
    ("r5.12xlarge", 48, 3100, 384, 3.648),
    ("r5.24xlarge", 96, 3100, 768, 7.296),
    ("i3.large", 2, 2300, 15.25, 0.186),
    ("i3.xlarge", 4, 2300, 30.5, 0.372),
    ("i3.2xlarge", 8, 2300, 61, 0.744),
    ("i3.4xlarge", 16, 2300, 122, 1.488),
    ("i3.8xlarge", 32, 2300, 244, 2.976),
    ("i3.16xlarge", 64, 2300, 488, 5.952),
    ("r4.large", 2, 2300, 15.25, 0.16),
    ("r4.xlarge", 4, 2300, 30.5, 0.32),
    ("r4.2xlarge", 8, 2300, 61, 0.64),
    ("r4.4xlarge", 16, 2300, 122, 1.28),
    ("r4.8xlarge", 32, 2300, 244, 2.561),
    ("r4.16xlarge", 64, 2300, 488, 5.122),
    ("d2.xlarge", 4, 2400, 30.5, 0.794),
    ("d2.2xlarge", 8, 2400, 61, 1.588),
    ("d2.4xlarge", 16, 2400, 122, 3.176),
    ("d2.8xlarge", 36, 2400, 244, 6.352),
    ("x1e.xlarge", 4, 2300, 122, 1.0),
    ("x1e.2xlarge", 8, 2300, 244, 2.0),
    ("x1e.4xlarge", 16, 2300, 488, 4.0),
    ("g3.8xlarge", 32, 2300, 244, 2.85),
    ("z1d.large", 2, 4000, 16, 0.226),
    ("z1d.xlarge", 4, 4000, 32, 0.452),
    ("z1d.3xlarge", 12, 4000, 96, 1.356),
    ("z1d.6xlarge", 24, 4000, 192, 2.712),
    ("z1d.12xlarge", 48, 4000, 384, 5.424),
    ("g3s.xlarge", 4, 2300, 30.5, 0.938),
    ("p2.xlarge", 4, 2300, 61, 1.326),
    ("p3.2xlarge", 8, 2300, 61, 4.234),
    ("f1.2xlarge", 8, 2300, 122, 2.31),
    ("g3.4xlarge", 16, 2300, 122, 1.425),
]

BUCKETS = ["LT5", "B5_10", "B10_15", "B15_20", "GT20"]
FIXED_BUCKETS = {"t3.micro": "LT5", "t3.nano": "LT5"}

# Reservation fee = on-demand rate x term hours x factor, per payment variant.
YR1M_FACTORS = [("no-prepaid", 0.66), ("partly-prepaid", 0.63), ("prepaid", 0.61)]
YR3M_FACTORS = [("no-prepaid", 0.47), ("partly-prepaid", 0.44), ("prepaid", 0.43)]
H1SM_FACTOR = 0.50
H6SM_FACTOR = 0.65


def money(value, digits):
    text = f"{value:.{digits}f}"
    return text.rstrip("0").rstrip(".") if "." in text else text


def build(seed):
    rng = random.Random(seed)
    lines = [
        "# Sample catalog: Linux instance types, Frankfurt-like sizing.",
        "# PLACEHOLDER PRICES for illustration only. They are not a snapshot of any",
        "# provider's price list. Regenerate with tools/make_sample_catalog.py.",
        "",
        "[cost_model]",
        "hours_per_month = 720",
        "rate.LT5 = 0.05",
        "rate.B5_10 = 0.10",
        "rate.B10_15 = 0.15",
        "rate.B15_20 = 0.20",
        "rate.GT20 = 0.25",
        "penalty_usd = 0",
        "",
        "[instance_types]",
        "name,vcpu,clock_mhz_per_vcpu,memory_gib,interruption_bucket,ecu",
    ]
    for name, vcpu, clock, memory, _ in TYPES:
        bucket = FIXED_BUCKETS.get(name) or BUCKETS[rng.randrange(len(BUCKETS))]
        ecu = "variable" if name.startswith("t") else str(round(vcpu * clock / 900))
        lines.append(f"{name},{vcpu},{clock},{money(memory, 2)},{bucket},{ecu}")
    lines += ["", "[prices]", "instance_type,marketspace,variant,unit,amount_usd"]
    for name, _, _, _, odm in TYPES:
        spot = odm * rng.uniform(0.22, 0.38)
        lines.append(f"{name},SM,default,per_hour,{money(max(spot, 0.0001), 4)}")
        lines.append(f"{name},1HSM,default,per_hour,{money(odm * H1SM_FACTOR, 4)}")
        lines.append(f"{name},6HSM,default,per_hour,{money(odm * H6SM_FACTOR, 4)}")
        lines.append(f"{name},ODM,default,per_hour,{money(odm, 4)}")
        for symbol, hours, factors in (("1YRM", 8760, YR1M_FACTORS), ("3YRM", 26280, YR3M_FACTORS)):
            for variant, factor in factors:
                lines.append(f"{name},{symbol},{variant},per_term,{money(odm * hours * factor, 2)}")
    return "\n".join(lines) + "\n"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=2019)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "sample_catalog.txt")
    args = parser.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(build(args.seed))
    print(f"wrote {len(TYPES)} instance types to {args.out}")


if __name__ == "__main__":
    main()
