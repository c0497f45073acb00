"""Trains the XGBoost interop fixture and records the toolkit's own margins.

Run once: python3 scripts/xgboost_fixture.py
Writes data/breast-cancer/{space.json,model.dump.json,meta.json,points.csv,margins.csv}.
"""

import csv
import json
import math
from pathlib import Path

import numpy as np
import xgboost as xgb
from sklearn.datasets import load_breast_cancer

OUT = Path(__file__).resolve().parent.parent / "data" / "breast-cancer"


def f32(x):
    # The shortest repr of the f64 holding the exact f32 value.
    return repr(float(np.float32(x)))


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    data = load_breast_cancer()
    x = data.data.astype(np.float32)
    y = data.target
    names = [n.replace(" ", "_") for n in data.feature_names]

    dtrain = xgb.DMatrix(x, label=y, feature_names=names)
    params = {"objective": "binary:logistic", "max_depth": 3, "eta": 0.3, "seed": 7}
    booster = xgb.train(params, dtrain, num_boost_round=25)

    space = {
        "features": [
            {"name": n, "kind": "ordinal", "lo": float(x[:, j].min()), "hi": float(x[:, j].max())}
            for j, n in enumerate(names)
        ]
    }
    (OUT / "space.json").write_text(json.dumps(space, indent=2) + "\n")

    dump = "[\n" + ",\n".join(booster.get_dump(dump_format="json")) + "\n]\n"
    (OUT / "model.dump.json").write_text(dump)

    config = json.loads(booster.save_config())
    base = float(config["learner"]["learner_model_param"]["base_score"].strip("[]"))
    meta = {
        "classes": [str(c) for c in data.target_names],
        "base_margin": math.log(base / (1.0 - base)),
        "trees": 25,
        "max_depth": 3,
    }
    (OUT / "meta.json").write_text(json.dumps(meta, indent=2) + "\n")

    rng = np.random.default_rng(11)
    rows = rng.choice(len(x), size=100, replace=False)
    points = x[rows]
    margins = booster.predict(xgb.DMatrix(points, feature_names=names), output_margin=True)

    with open(OUT / "points.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for p in points:
            w.writerow([f32(v) for v in p])
    with open(OUT / "margins.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["margin"])
        for m in margins:
            w.writerow([f32(m)])


if __name__ == "__main__":
    main()
