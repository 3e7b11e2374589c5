#!/usr/bin/env python3
"""Generates data/synthetic_survey.csv: a synthetic course-feedback survey.

302 respondents with a latent satisfaction factor driving both the
satisfaction-defining columns and most predictors, so models fit on the
encoded data find real structure. Deterministic (fixed seed).
"""

import csv
import pathlib

import numpy as np

LIKERT = ["Strongly disagree", "Disagree", "Neutral", "Agree", "Strongly agree"]

# (column, loading on the latent factor, flip) -- flip mimics negatively
# phrased questions.
TARGET_COMPONENTS = [
    ("m_suitable", 1.1, False),
    ("m_comfortable", 1.0, False),
    ("m_feedback", 0.8, True),
    ("m_valuable", 0.9, False),
    ("m_sameMethod", 1.0, False),
    ("m_taskPerformance", 0.9, False),
    ("emo_miss", 0.9, True),
]

PREDICTORS = [
    ("m_timeManage", 1.2, False),
    ("m_concentrate", 1.1, False),
    ("m_helpful", 0.9, False),
    ("m_boring", 1.0, True),
    ("m_ta", 0.6, False),
    ("m_share", 0.5, False),
    ("m_interest", 0.8, False),
    ("m_easy", 0.4, False),
    ("emo_isolated", 0.7, True),
    ("emo_relationship", 0.4, True),
    ("emo_anx", 0.5, True),
    ("cop_creative", -0.3, False),
    ("cop_talk", 0.2, False),
    ("env_cafe", 0.1, False),
    ("env_library", 0.3, False),
    ("env_group", 0.2, False),
    ("env_disturb", 0.5, True),
]

MODES = ["Live Online", "Pre-recorded", "Offline", "Flipped"]


def likert_from_score(score, rng):
    z = score + rng.normal(0, 0.7)
    cuts = [-1.6, -0.6, 0.4, 1.4]
    idx = int(np.digitize(z, cuts))
    return LIKERT[idx]


def main():
    rng = np.random.default_rng(42)
    n = 302
    latent = rng.normal(1.0, 1.0, size=n)  # shifted: more satisfied than not

    header = [c for c, _, _ in TARGET_COMPONENTS]
    header += [c for c, _, _ in PREDICTORS]
    header += ["mode", "isPractical", "enterDate"]

    rows = []
    for i in range(n):
        row = []
        for _, loading, flip in TARGET_COMPONENTS:
            s = latent[i] * loading * (-1 if flip else 1)
            row.append(likert_from_score(s, rng))
        for _, loading, flip in PREDICTORS:
            s = latent[i] * loading * (-1 if flip else 1)
            row.append(likert_from_score(s, rng))
        offline_boost = 0.9 if latent[i] > 0.3 else 0.0
        mode_p = np.array([1.0, 0.8, 0.5 + offline_boost, 0.4])
        row.append(MODES[rng.choice(4, p=mode_p / mode_p.sum())])
        row.append("Yes" if rng.random() < 0.55 else "No")
        row.append("Before 2020" if rng.random() < 0.45 else "2020 or later")
        rows.append(row)

    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "synthetic_survey.csv"
    out.parent.mkdir(exist_ok=True)
    with open(out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {out} ({n} rows, {len(header)} columns)")


if __name__ == "__main__":
    main()
