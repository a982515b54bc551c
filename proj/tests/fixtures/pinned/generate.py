# Copyright 2026 The riskagent Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Pinned F1/F2 values, computed independently of the C++ evaluator.

F1: one point per flag; bands low [0,2), moderate [2,3), high [3,6).
F2: logistic(-3 + 0.05 * age + 1.2 * smoker); bands lower [0,0.5),
elevated [0.5,0.8), very high [0.8,1].

Run: python3 generate.py > pinned.json
"""

import itertools
import json

from mpmath import mp, mpf, exp

mp.dps = 40

FLAGS = ["age_over_65", "hypertension", "diabetes", "prior_stroke", "heart_failure"]


def f1_label(score):
    return "low" if score < 2 else "moderate" if score < 3 else "high"


def f2_label(risk):
    return "lower" if risk < mpf("0.5") else "elevated" if risk < mpf("0.8") else "very high"


def logistic(x):
    return 1 / (1 + exp(-x))


def f2(age, smoker):
    return logistic(mpf(-3) + mpf("0.05") * mpf(age) + (mpf("1.2") if smoker else 0))


def main():
    f1_points = []
    for values in itertools.product([False, True], repeat=5):
        score = sum(values)
        f1_points.append({"params": dict(zip(FLAGS, values)), "score": score, "label": f1_label(score)})

    # Ranged cases: the first n flags unknown, the rest true.
    f1_ranges = []
    for n in range(6):
        known = 5 - n
        lo, hi = known, 5
        labels = sorted({f1_label(s) for s in range(lo, hi + 1)}, key=["low", "moderate", "high"].index)
        f1_ranges.append({"unknown": FLAGS[:n], "lo": lo, "hi": hi, "labels": labels})

    f2_points = []
    for age in [0, 18, 40, 60, 75, 90, 120]:
        for smoker in [False, True]:
            r = f2(age, smoker)
            f2_points.append({"age": age, "smoker": smoker, "risk": mp.nstr(r, 25), "label": f2_label(r)})

    # age in [40, 80], smoker unknown: the model is monotone in both.
    f2_ranges = [{"age": [40, 80], "smoker": None, "lo": mp.nstr(f2(40, False), 25), "hi": mp.nstr(f2(80, True), 25)},
                 {"age": [50, 70], "smoker": True, "lo": mp.nstr(f2(50, True), 25), "hi": mp.nstr(f2(70, True), 25)},
                 {"age": [0, 120], "smoker": True, "lo": mp.nstr(f2(0, True), 25), "hi": mp.nstr(f2(120, True), 25)}]

    json.dump({"f1_points": f1_points, "f1_ranges": f1_ranges, "f2_points": f2_points, "f2_ranges": f2_ranges},
              __import__("sys").stdout, indent=1)
    print()


if __name__ == "__main__":
    main()
