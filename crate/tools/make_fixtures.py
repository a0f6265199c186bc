#!/usr/bin/env python3
"""Generates the bundled synthetic fixture dataset for ecoindex.

Deterministic (fixed seed). Writes startups.csv, rounds.csv, config.json and
manifest.json into crates/ecoindex/fixtures/. The manifest records the exact
record/error counts the files were built with, so tests can assert ingestion
conservation against it.

Fixture shape:
  - 120 startup records: 114 valid across 6 ecosystems, 6 malformed
    (2 missing fields, 2 bad dates, 2 duplicate ids), none geography-excluded.
  - Exactly 31 valid startups founded in 2010-2012.
  - Berlin is built late-stage-heavy and fast (large early rounds, Series D/E
    concentration); London is seed-heavy and slow. The other four sit between.
  - Round records include 10 malformed rows (2 orphans, 2 before-founding,
    2 bad amounts, 2 bad dates, 2 missing fields) and some unknown amounts.
"""

import csv
import json
import random
from datetime import date, timedelta
from pathlib import Path

SEED = 20260809
OUT_DIR = Path(__file__).resolve().parent.parent / "crates" / "ecoindex" / "fixtures"

ECOSYSTEMS = {
    "Berlin": {
        "locations": [("Berlin", "Berlin", "Germany")],
        "ppp_divisor_usd": 72000,
        "count": 15,
    },
    "London": {
        "locations": [("London", "Greater London", "United Kingdom")],
        "ppp_divisor_usd": 88000,
        "count": 25,
    },
    "Paris": {
        "locations": [
            ("Paris", "Ile-de-France", "France"),
            ("Boulogne-Billancourt", "Ile-de-France", "France"),
        ],
        "ppp_divisor_usd": 66000,
        "count": 20,
    },
    "New York": {
        "locations": [
            ("New York", "New York", "United States"),
            ("Brooklyn", "New York", "United States"),
        ],
        "ppp_divisor_usd": 125000,
        "count": 20,
    },
    "Tel Aviv": {
        "locations": [
            ("Tel Aviv", "Tel Aviv District", "Israel"),
            ("Herzliya", "Tel Aviv District", "Israel"),
        ],
        "ppp_divisor_usd": 95000,
        "count": 14,
    },
    "Bay Area": {
        "locations": [
            ("San Francisco", "California", "United States"),
            ("Palo Alto", "California", "United States"),
            ("Mountain View", "California", "United States"),
            ("San Jose", "California", "United States"),
        ],
        "ppp_divisor_usd": 150000,
        "count": 20,
    },
}

PREFIX = {
    "Berlin": "br",
    "London": "ld",
    "Paris": "pr",
    "New York": "ny",
    "Tel Aviv": "ta",
    "Bay Area": "ba",
}

# (probability, day-gap range, amount range USD, stage label choices)
PROFILES = {
    "Berlin": [
        (1.00, (60, 320), (2_000_000, 8_000_000), ["Seed", "seed", "Series A"]),
        (0.85, (250, 600), (8_000_000, 25_000_000), ["Series A", "Series B"]),
        (0.60, (300, 700), (20_000_000, 45_000_000), ["Series B", "Series C"]),
        (0.55, (250, 550), (45_000_000, 90_000_000), ["Series D", "Series E"]),
    ],
    "London": [
        (1.00, (80, 400), (150_000, 600_000), ["seed", "angel", "Pre-Seed"]),
        (0.70, (200, 500), (250_000, 900_000), ["seed", "Seed"]),
        (0.40, (250, 600), (800_000, 2_500_000), ["Series A", "series a"]),
        (0.15, (300, 600), (2_000_000, 5_000_000), ["Series B"]),
    ],
    "Paris": [
        (1.00, (90, 420), (120_000, 500_000), ["seed", "Pre-Seed", "angel"]),
        (0.65, (220, 550), (200_000, 800_000), ["seed", "Seed"]),
        (0.35, (260, 620), (700_000, 2_000_000), ["Series A"]),
        (0.12, (300, 650), (1_500_000, 4_000_000), ["Series B"]),
    ],
    "New York": [
        (1.00, (70, 360), (800_000, 3_000_000), ["seed", "Series A"]),
        (0.75, (230, 560), (2_500_000, 9_000_000), ["Series A", "Series B"]),
        (0.45, (280, 640), (7_000_000, 20_000_000), ["Series B", "Series C"]),
        (0.20, (280, 580), (18_000_000, 45_000_000), ["Series C", "Series D"]),
    ],
    "Tel Aviv": [
        (1.00, (60, 340), (1_000_000, 4_000_000), ["seed", "Series A"]),
        (0.80, (220, 540), (3_000_000, 11_000_000), ["Series A", "Series B"]),
        (0.50, (260, 620), (8_000_000, 24_000_000), ["Series B", "Series C"]),
        (0.22, (280, 580), (20_000_000, 50_000_000), ["Series C", "Series D"]),
    ],
    "Bay Area": [
        (1.00, (50, 300), (1_500_000, 6_000_000), ["seed", "Series A", "angel"]),
        (0.85, (220, 540), (6_000_000, 20_000_000), ["Series A", "Series B"]),
        (0.60, (260, 620), (15_000_000, 40_000_000), ["Series B", "Series C"]),
        (0.45, (250, 550), (40_000_000, 85_000_000), ["Series D", "Series E"]),
    ],
}

# Odd labels exercising the catch-all stage mapping.
ODD_STAGES = ["grant", "debt financing", "venture - series unknown"]

# 31 of the 114 valid startups are founded in 2010-2012.
YEAR_COMPOSITION = (
    [2010] * 11 + [2011] * 10 + [2012] * 10 +
    [2013] * 10 + [2014] * 14 + [2015] * 13 + [2016] * 13 +
    [2017] * 12 + [2018] * 11 + [2019] * 10
)

WORDS_A = [
    "Blue", "Quant", "Hyper", "Green", "Nova", "Deep", "Bright", "Swift",
    "Prime", "Echo", "Solar", "Vertex", "Atlas", "Lumen", "Polar", "Zen",
]
WORDS_B = [
    "Metrics", "Labs", "Works", "Systems", "Logic", "Grid", "Forge", "Flow",
    "Sense", "Stack", "Robotics", "Analytics", "Mobility", "Health", "Pay",
    "Data",
]

MAX_ANNOUNCED = date(2025, 12, 31)


def default_stage(label):
    key = label.strip().lower()
    seeds = {"seed", "angel", "pre-seed", "pre seed", "preseed"}
    if key in seeds:
        return "Seed"
    series = {
        "series a": "SeriesA",
        "series b": "SeriesB",
        "series c": "SeriesC",
        "series d": "SeriesD",
        "series e": "SeriesE",
    }
    return series.get(key, "Other")


def main():
    rng = random.Random(SEED)
    OUT_DIR.mkdir(parents=True, exist_ok=True)

    years = YEAR_COMPOSITION[:]
    rng.shuffle(years)
    assert len(years) == 114

    startups = []  # (id, name, founded, city, region, country, ecosystem)
    year_cursor = 0
    for eco, spec in ECOSYSTEMS.items():
        for i in range(spec["count"]):
            sid = f"{PREFIX[eco]}-{i + 1:03d}"
            name = f"{rng.choice(WORDS_A)}{rng.choice(WORDS_B)} {sid[-3:]}"
            year = years[year_cursor]
            year_cursor += 1
            founded = date(year, rng.randint(1, 12), rng.randint(1, 28))
            city, region, country = rng.choice(spec["locations"])
            startups.append((sid, name, founded, city, region, country, eco))

    startup_rows = [
        [s[0], s[1], s[2].isoformat(), s[3], s[4], s[5]] for s in startups
    ]
    rng.shuffle(startup_rows)

    # Malformed startup records. Duplicates copy ids of rows that are already
    # near the top after the shuffle, so the original always parses first.
    dup_a = startup_rows[0][0]
    dup_b = startup_rows[1][0]
    bad_startups = [
        (20, ["", "NoId Labs", "2013-04-10", "Berlin", "Berlin", "Germany"]),
        (45, ["err-undated", "Undated", "", "London", "Greater London", "United Kingdom"]),
        (60, ["err-garbled", "Garbled", "13/45/20", "Paris", "Ile-de-France", "France"]),
        (75, ["err-impossible", "Impossible", "2011-02-30", "New York", "New York", "United States"]),
        (95, [dup_a, "Copycat One", "2014-06-01", "Berlin", "Berlin", "Germany"]),
        (110, [dup_b, "Copycat Two", "2015-09-15", "London", "Greater London", "United Kingdom"]),
    ]
    for pos, row in bad_startups:
        startup_rows.insert(pos, row)
    assert len(startup_rows) == 120

    with open(OUT_DIR / "startups.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["id", "name", "founded", "city", "region", "country"])
        writer.writerows(startup_rows)

    # Rounds.
    round_rows = []
    rounds_per_eco = {eco: 0 for eco in ECOSYSTEMS}
    unknown_amount = 0
    london_d_added = False
    for sid, _name, founded, _c, _r, _co, eco in startups:
        t = 0
        for prob, (gap_lo, gap_hi), (amt_lo, amt_hi), stages in PROFILES[eco]:
            if rng.random() >= prob:
                continue
            t += rng.randint(gap_lo, gap_hi)
            announced = founded + timedelta(days=t)
            if announced > MAX_ANNOUNCED:
                break
            amount = rng.randint(amt_lo // 1000, amt_hi // 1000) * 1000
            stage = rng.choice(stages)
            if rng.random() < 0.04:
                stage = rng.choice(ODD_STAGES)
            if rng.random() < 0.07:
                amount_field = ""
                unknown_amount += 1
            else:
                amount_field = str(amount)
            round_rows.append([sid, announced.isoformat(), amount_field, stage])
            rounds_per_eco[eco] += 1
        # One small London Series D so its late-stage share is tiny but nonzero.
        if eco == "London" and not london_d_added and t > 600:
            announced = founded + timedelta(days=t + 400)
            if announced <= MAX_ANNOUNCED:
                round_rows.append([sid, announced.isoformat(), "1500000", "Series D"])
                rounds_per_eco[eco] += 1
                london_d_added = True

    rng.shuffle(round_rows)

    by_id = {s[0]: s for s in startups}
    before_a = by_id["br-001"][2] - timedelta(days=90)
    before_b = by_id["ld-001"][2] - timedelta(days=5)
    bad_rounds = [
        (12, ["ghost-1", "2015-03-02", "1000000", "Series A"]),
        (30, ["ghost-2", "2016-07-11", "", "seed"]),
        (55, ["br-001", before_a.isoformat(), "2000000", "seed"]),
        (80, ["ld-001", before_b.isoformat(), "300000", "seed"]),
        (105, ["ny-001", "2015-04-01", "12x45", "Series A"]),
        (130, ["ta-001", "2016-02-02", "-500000", "seed"]),
        (155, ["pr-001", "2014-13-40", "250000", "seed"]),
        (180, ["ba-001", "not-a-date", "4000000", "Series A"]),
        (205, ["", "2015-06-06", "1000000", "seed"]),
        (230, ["br-002", "", "9000000", "Series B"]),
    ]
    for pos, row in bad_rounds:
        round_rows.insert(min(pos, len(round_rows)), row)

    with open(OUT_DIR / "rounds.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["startup_id", "announced", "amount_usd", "stage"])
        writer.writerows(round_rows)

    config = {
        "ecosystems": [
            {
                "name": "Berlin",
                "match": {"cities": ["Berlin"]},
                "ppp_divisor_usd": 72000,
            },
            {
                "name": "London",
                "match": {"cities": ["London"]},
                "ppp_divisor_usd": 88000,
            },
            {
                "name": "Paris",
                "match": {
                    "cities": ["Paris", "Boulogne-Billancourt"],
                    "regions": ["Ile-de-France"],
                },
                "ppp_divisor_usd": 66000,
            },
            {
                "name": "New York",
                "match": {"cities": ["New York", "Brooklyn"]},
                "ppp_divisor_usd": 125000,
            },
            {
                "name": "Tel Aviv",
                "match": {"countries": ["Israel"]},
                "ppp_divisor_usd": 95000,
            },
            {
                "name": "Bay Area",
                "match": {
                    "cities": [
                        "San Francisco",
                        "Palo Alto",
                        "Mountain View",
                        "San Jose",
                    ]
                },
                "ppp_divisor_usd": 150000,
            },
        ]
    }
    with open(OUT_DIR / "config.json", "w", encoding="utf-8") as f:
        json.dump(config, f, indent=2)
        f.write("\n")

    accepted_rounds = len(round_rows) - len(bad_rounds)
    manifest = {
        "seed": SEED,
        "startups_file": "startups.csv",
        "rounds_file": "rounds.csv",
        "startups": {
            "records": len(startup_rows),
            "accepted": 114,
            "excluded_by_geography": 0,
            "errors_total": 6,
            "errors_by_reason": {"MissingField": 2, "BadDate": 2, "DuplicateId": 2},
        },
        "rounds": {
            "records": len(round_rows),
            "accepted": accepted_rounds,
            "excluded_by_geography": 0,
            "errors_total": len(bad_rounds),
            "errors_by_reason": {
                "OrphanRound": 2,
                "RoundBeforeFounding": 2,
                "BadAmount": 2,
                "BadDate": 2,
                "MissingField": 2,
            },
            "unknown_amount": unknown_amount,
        },
        "ecosystems": {
            eco: {"startups": spec["count"], "rounds": rounds_per_eco[eco]}
            for eco, spec in ECOSYSTEMS.items()
        },
        "founded_2010_2012": sorted(
            s[0] for s in startups if 2010 <= s[2].year <= 2012
        ),
    }
    with open(OUT_DIR / "manifest.json", "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")

    print(f"startups: {len(startup_rows)} rows -> {OUT_DIR/'startups.csv'}")
    print(f"rounds:   {len(round_rows)} rows ({accepted_rounds} valid, "
          f"{unknown_amount} unknown amounts)")
    print(f"founded 2010-2012: {len(manifest['founded_2010_2012'])}")
    print(f"rounds per ecosystem: {rounds_per_eco}")


if __name__ == "__main__":
    main()
