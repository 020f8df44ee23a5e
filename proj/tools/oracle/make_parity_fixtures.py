#!/usr/bin/env python3
"""Reference feature values for the parity fixtures.

Runs the pflacco implementation of the deterministic ELA feature groups on
each exported sample (columns x1..xd,y) and writes features_expected_p<k>.csv
(feature,value; empty value for missing) next to it.

Options are set to the conventions this library uses wherever the reference
exposes them: bias-uncorrected (type 1) moments and an information-content
tour that starts at row 0.

    pip install pflacco   # or put an unpacked wheel on PYTHONPATH
    python3 tools/oracle/make_parity_fixtures.py tests/fixtures/parity
"""

import argparse
import glob
import math
import os
import re

import numpy as np
import pandas as pd
from pflacco import classical_ela_features as ela


def reference_features(sample):
    x = sample.drop(columns=["y"])
    x.columns = range(x.shape[1])
    y = sample["y"].reset_index(drop=True)
    out = {}
    out.update(ela.calculate_ela_meta(x.copy(), y.copy()))
    out.update(ela.calculate_ela_distribution(x.copy(), y.copy(),
                                              ela_distr_skewness_type=1,
                                              ela_distr_kurtosis_type=1))
    out.update(ela.calculate_nbc(x.copy(), y.copy(), dist_tie_breaker="first"))
    out.update(ela.calculate_dispersion(x.copy(), y.copy()))
    out.update(ela.calculate_information_content(x.copy(), y.copy(), ic_nn_start=0))
    out.update(ela.calculate_pca(x.copy(), y.copy()))
    return {k: v for k, v in out.items() if not k.endswith("costs_runtime")}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("fixture_dir")
    args = parser.parse_args()
    for path in sorted(glob.glob(os.path.join(args.fixture_dir, "sample_p*.csv"))):
        problem = re.search(r"sample_p(\d+)\.csv$", path).group(1)
        feats = reference_features(pd.read_csv(path))
        target = os.path.join(args.fixture_dir, f"features_expected_p{problem}.csv")
        with open(target, "w") as fh:
            fh.write("feature,value\n")
            for name, value in feats.items():
                if value is None or (isinstance(value, float) and math.isnan(value)):
                    fh.write(f"{name},\n")
                else:
                    fh.write(f"{name},{float(value)!r}\n")
        print(f"wrote {target} ({len(feats)} features)")


if __name__ == "__main__":
    main()
