#!/usr/bin/env python3
"""Regenerates the small deterministic inputs used by tests and examples.

  tests/fixtures/ndbc/<station>h2015.txt   synthetic stdmet files, five buoys
  tests/fixtures/appendix_b_level1.json    50 level-1 centers, 10 per station
  data/seastates/appendix_b.json           the published 20-state set
"""

import json
import math
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
STATIONS = ["52200", "51206", "46221", "41053", "44011"]

# Published final centers: (Tp [s], Hs [m], locations).
APPENDIX_B = [
    (13.23112333956173, 1.7707093836756636, 2),
    (10.234793700202095, 1.4757467428690545, 2),
    (22.584459732902232, 1.1146362808579522, 2),
    (13.81664042372318, 0.8000118789813867, 2),
    (10.638863524791551, 4.635898379970542, 1),
    (16.56912770411745, 2.574394045126751, 1),
    (9.191129829212345, 2.5349366630610004, 4),
    (9.976561213254367, 1.001865613432608, 5),
    (5.855232218554694, 1.0779023831039394, 4),
    (13.593014631352435, 1.1922186822432743, 4),
    (12.833294612926467, 2.063874210861717, 3),
    (9.84231198249586, 1.681761551332142, 1),
    (10.284139549631792, 3.315881129382017, 2),
    (13.011144410022865, 2.732203169230346, 3),
    (12.274136752136759, 6.713700854700875, 1),
    (7.900205063645171, 1.91849027165957, 5),
    (17.167737568529763, 0.9823690678767296, 1),
    (7.344880379199283, 1.3107230273390404, 5),
    (8.939529998687709, 3.193034002888281, 1),
    (15.374832971800414, 3.8642559652928448, 1),
]

HEADER = (
    "#YY  MM DD hh mm WDIR WSPD GST  WVHT   DPD   APD MWD   PRES  ATMP  WTMP  DEWP  VIS  TIDE\n"
    "#yr  mo dy hr mn degT m/s  m/s     m   sec   sec degT   hPa  degC  degC  degC  nmi    ft\n"
)


def ndbc_file(station: str, rng: random.Random) -> str:
    # Each buoy mixes a few wave regimes; one row in 40 carries a sentinel.
    regimes = [(rng.uniform(6, 15), rng.uniform(0.8, 3.5)) for _ in range(4)]
    rows = []
    for hour in range(24 * 25):
        day, hh = divmod(hour, 24)
        tp_mean, hs_mean = regimes[(hour // 37) % len(regimes)]
        hs = max(0.1, rng.gauss(hs_mean, 0.15 * hs_mean))
        tp = max(2.0, rng.gauss(tp_mean, 0.6))
        if hour % 40 == 17:
            hs = 99.0
        elif hour % 40 == 33:
            tp = 99.0
        rows.append(
            f"2015 01 {day + 1:02d} {hh:02d} 50 999 99.0 99.0 {hs:5.2f} {tp:5.2f}  7.31 999 "
            f"9999.0 999.0  26.6 999.0 99.0 99.00\n"
        )
    return HEADER + "".join(rows)


def appendix_b_level1(rng: random.Random) -> dict:
    # Each published center is repeated once per location it represents,
    # which gives exactly 50 points; consecutive copies go to distinct buoys.
    per_station = {s: [] for s in STATIONS}
    k = 0
    for tp, hs, count in APPENDIX_B:
        for _ in range(count):
            per_station[STATIONS[k % len(STATIONS)]].append(
                {"Tp": tp + rng.uniform(-0.02, 0.02), "Hs": hs + rng.uniform(-0.01, 0.01)}
            )
            k += 1
    return {"schema": "wdds-level1-fixture/1", "stations": per_station}


def main() -> None:
    rng = random.Random(20150101)
    ndbc = ROOT / "tests" / "fixtures" / "ndbc"
    ndbc.mkdir(parents=True, exist_ok=True)
    for s in STATIONS:
        (ndbc / f"{s}h2015.txt").write_text(ndbc_file(s, rng))

    level1 = appendix_b_level1(random.Random(7))
    assert sum(len(v) for v in level1["stations"].values()) == 50
    assert all(len(v) == 10 for v in level1["stations"].values())
    (ROOT / "tests" / "fixtures" / "appendix_b_level1.json").write_text(
        json.dumps(level1, indent=2) + "\n"
    )

    states = [{"Tp": tp, "Hs": hs, "locations": n} for tp, hs, n in APPENDIX_B]
    doc = {
        "schema": "wdds-seastates/1",
        "description": "Twenty representative sea states from two-level k-means of "
        "hourly observations at NDBC buoys 52200, 51206, 46221, 41053 and 44011, 2015-2024",
        "k1": 10,
        "k2": 20,
        "stations": STATIONS,
        "sea_states": states,
    }
    out = ROOT / "data" / "seastates" / "appendix_b.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
