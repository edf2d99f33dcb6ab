#!/usr/bin/env python3
"""Convert KEEL .dat copies of the UCI benchmark sets into headed CSV files.

Usage: convert_keel.py KEEL_DATA_DIR OUT_DIR

KEEL_DATA_DIR is the data/ directory of the keel-ds package (it holds
balanced/raw and imbalanced/raw).
"""

import csv
import sys
from pathlib import Path

DERMATOLOGY = [
    "erythema", "scaling", "definite_borders", "itching", "koebner_phenomenon",
    "polygonal_papules", "follicular_papules", "oral_mucosal_involvement",
    "knee_elbow_involvement", "scalp_involvement", "family_history",
    "melanin_incontinence", "eosinophils_infiltrate", "pnl_infiltrate",
    "fibrosis_papillary_dermis", "exocytosis", "acanthosis", "hyperkeratosis",
    "parakeratosis", "clubbing_rete_ridges", "elongation_rete_ridges",
    "thinning_suprapapillary_epidermis", "spongiform_pustule", "munro_microabcess",
    "focal_hypergranulosis", "disappearance_granular_layer",
    "vacuolisation_basal_layer", "spongiosis", "saw_tooth_retes",
    "follicular_horn_plug", "perifollicular_parakeratosis",
    "inflammatory_mononuclear_infiltrate", "band_like_infiltrate", "age", "class",
]

# output name, source file, header, columns kept (None = all), cell mapping
SETS = [
    ("haberman", "imbalanced/raw/haberman.dat",
     ["age", "operation_year", "positive_nodes", "survival"], None, None),
    ("mammographic", "balanced/raw/mammographic.dat",
     ["bi_rads", "age", "shape", "margin", "density", "severity"], None, None),
    ("dermatology", "imbalanced/raw/dermatology-6.dat", DERMATOLOGY, None, None),
    ("glass", "imbalanced/raw/glass0.dat",
     ["ri", "na", "mg", "al", "si", "k", "ca", "ba", "fe", "class"], None, None),
    ("yeast", "imbalanced/raw/yeast1.dat",
     ["mcg", "gvh", "alm", "mit", "erl", "pox", "vac", "nuc", "class"], None, None),
    ("liver", "balanced/raw/bupa.dat",
     ["mcv", "alkphos", "sgpt", "sgot", "gammagt", "drinks", "selector"], None, None),
    ("page_blocks", "imbalanced/raw/page-blocks0.dat",
     ["height", "length", "area", "eccen", "p_black", "p_and", "mean_tr",
      "blackpix", "blackand", "wb_trans", "class"], None, None),
    ("contraceptive", "balanced/raw/contraceptive.dat",
     ["wife_age", "wife_education", "husband_education", "children",
      "wife_religion", "wife_working", "husband_occupation", "living_standard",
      "media_exposure", "method"], None, None),
    ("credit", "balanced/raw/crx.dat",
     ["a2", "a3", "a8", "a11", "a14", "a15", "class"], [1, 2, 7, 10, 13, 14, 15], None),
]


def rows(path):
    with open(path, newline="") as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith("@"):
                yield [c.strip() for c in line.split(",")]


def convert(src_dir, out_dir):
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, rel, header, keep, mapping in SETS:
        out = out_dir / f"{name}.csv"
        count = 0
        with open(out, "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(header)
            for row in rows(src_dir / rel):
                if keep is not None:
                    row = [row[i] for i in keep]
                if mapping is not None:
                    row = [mapping.get(c, c) for c in row[:-1]] + row[-1:]
                if len(row) != len(header):
                    raise SystemExit(f"{rel}: expected {len(header)} cells, got {len(row)}")
                w.writerow(row)
                count += 1
        print(f"{out}: {count} rows")


if __name__ == "__main__":
    if len(sys.argv) != 3:
        raise SystemExit(__doc__)
    convert(Path(sys.argv[1]), Path(sys.argv[2]))
