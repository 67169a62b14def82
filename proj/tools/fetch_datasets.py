#!/usr/bin/env python3
"""Fetch the Adult Census and COMPAS datasets into data/ as plain CSV.

The UCI/ProPublica originals are taken from the `responsibly` wheel, which
bundles verbatim copies, so only a pip index is needed. Output files:

  data/adult.csv   48,842 rows (adult.data + adult.test), race binarized
  data/compas.csv  7,214 rows, race binarized

Missing cells ("?") are written as empty cells; the loader drops such rows.
"""

import argparse
import csv
import io
import pathlib
import subprocess
import sys
import tempfile
import zipfile

ADULT_COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education-num",
    "marital-status", "occupation", "relationship", "race", "sex",
    "capital-gain", "capital-loss", "hours-per-week", "native-country",
    "income",
]

COMPAS_COLUMNS = [
    "age", "juv_fel_count", "juv_misd_count", "juv_other_count",
    "priors_count", "c_charge_degree", "race", "sex", "two_year_recid",
]


def fetch_wheel(workdir: pathlib.Path) -> pathlib.Path:
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "--quiet",
         "--dest", str(workdir), "responsibly==0.1.2"],
        check=True)
    wheels = sorted(workdir.glob("responsibly-*.whl"))
    if not wheels:
        raise SystemExit("responsibly wheel not found after download")
    return wheels[0]


def adult_rows(raw: str):
    for line in raw.splitlines():
        line = line.strip()
        if not line or line.startswith("|"):
            continue
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != len(ADULT_COLUMNS):
            continue
        cells[-1] = cells[-1].rstrip(".")
        cells[8] = "White" if cells[8] == "White" else "Non-white"
        yield ["" if c == "?" else c for c in cells]


def write_adult(wheel: zipfile.ZipFile, out: pathlib.Path) -> int:
    count = 0
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ADULT_COLUMNS)
        for member in ("adult.data", "adult.test"):
            raw = wheel.read(f"responsibly/dataset/adult/{member}").decode()
            for row in adult_rows(raw):
                writer.writerow(row)
                count += 1
    return count


def write_compas(wheel: zipfile.ZipFile, out: pathlib.Path) -> int:
    raw = wheel.read(
        "responsibly/dataset/compas/compas-scores-two-years.csv").decode()
    reader = csv.DictReader(io.StringIO(raw))
    count = 0
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COMPAS_COLUMNS)
        for rec in reader:
            row = [rec[c] for c in COMPAS_COLUMNS]
            row[6] = "Caucasian" if row[6] == "Caucasian" else "Not Caucasian"
            writer.writerow(row)
            count += 1
    return count


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=str(
        pathlib.Path(__file__).resolve().parent.parent / "data"))
    parser.add_argument("--wheel", help="use an already downloaded wheel")
    args = parser.parse_args()

    out_dir = pathlib.Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        wheel_path = pathlib.Path(args.wheel) if args.wheel else fetch_wheel(
            pathlib.Path(tmp))
        with zipfile.ZipFile(wheel_path) as wheel:
            n_adult = write_adult(wheel, out_dir / "adult.csv")
            n_compas = write_compas(wheel, out_dir / "compas.csv")
    print(f"adult.csv: {n_adult} rows")
    print(f"compas.csv: {n_compas} rows")
    return 0


if __name__ == "__main__":
    sys.exit(main())
