# Copyright 2026 The enerprof Authors
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


"""Regenerates demo/frontier_points.csv and score_vectors.json.

Scores are computed here independently of the C++ implementation so the
vector file can serve as a cross-language contract.
"""

import json
import math
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))

# Nested-log trend A(E) = c1 * ln(ln E + c2) + c3.
C1, C2, C3 = 8.18, 9.23, 73.65


def frontier_points(rng):
    rows = []
    n_front = 14
    for i in range(n_front):
        e = 10 ** (-4 + 4 * i / (n_front - 1))
        a = C1 * math.log(math.log(e) + C2) + C3
        rows.append(("front_%02d" % i, e, a))
    for i in range(40):
        e = 10 ** rng.uniform(-3.8, 0.0)
        top = C1 * math.log(math.log(e) + C2) + C3
        rows.append(("model_%02d" % i, e, top - rng.uniform(0.5, 25.0)))
    return rows


def ratio(acc, energy, min_acc):
    if acc < min_acc:
        return None
    return acc / energy


def manhattan(acc, energy, weight, norm, balanced):
    e_term = energy / norm * (100.0 if balanced else 1.0)
    return 100.0 - (weight * e_term + (1.0 - weight) * (100.0 - acc))


def score_vectors(rng):
    cases = []
    edge = [
        (80.0, 0.5, 0.0, 1.0, 0.0),
        (80.0, 0.5, 1.0, 1.0, 0.0),
        (100.0, 0.0, 0.5, 2.0, 0.0),
        (0.0, 2.0, 0.5, 2.0, 0.0),
        (75.0, 0.25, 0.3, 0.25, 80.0),
        (80.0, 0.25, 0.3, 0.25, 80.0),
    ]
    for acc, e, w, n, m in edge:
        cases.append((acc, e, w, n, m))
    for _ in range(200):
        acc = round(rng.uniform(30.0, 95.0), 3)
        e = 10 ** rng.uniform(-4, 1)
        w = rng.choice([0.0, 1.0, round(rng.random(), 4)])
        n = 10 ** rng.uniform(-3, 1)
        m = rng.choice([0.0, 50.0, 75.0, 80.0])
        cases.append((acc, e, w, n, m))
    out = []
    for acc, e, w, n, m in cases:
        item = {"accuracy": acc, "energy": e, "weight": w, "norm": n, "min_accuracy": m}
        if e > 0:
            item["ratio"] = ratio(acc, e, m)
        item["manhattan"] = manhattan(acc, e, w, n, False)
        item["manhattan_balanced"] = manhattan(acc, e, w, n, True)
        out.append(item)
    return out


def main():
    rng = random.Random(20240601)
    with open(os.path.join(HERE, "demo", "frontier_points.csv"), "w") as f:
        f.write("id,energy,accuracy\n")
        for pid, e, a in frontier_points(rng):
            f.write("%s,%.10g,%.6f\n" % (pid, e, a))
    doc = {
        "description": "score inputs and expected outputs; ratio is null when filtered",
        "tolerance": 1e-9,
        "vectors": score_vectors(rng),
    }
    with open(os.path.join(HERE, "score_vectors.json"), "w") as f:
        json.dump(doc, f, indent=1, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
