#!/usr/bin/env python3
"""Download the PeMS-4W freeway speed dataset and convert it to the lstc
binary format.

The dataset (https://doi.org/10.5281/zenodo.3939792) holds speeds from 11160
sensors over 4 weeks at a 5-minute resolution (288 intervals/day, 28 days)
as a headerless CSV matrix. Zero cells, if any, are written as NaN.

Usage:
  scripts/fetch_pems4w.py [--csv pems-4w.csv] [--out data/pems4w.bin]
"""

import argparse
import os
import struct
import sys
import urllib.request
import zipfile

import numpy as np

ZENODO_URL = "https://zenodo.org/api/records/3939792/files-archive"
MAGIC = b"LSTCDAT\x00"
INTERVALS = 288
DAYS = 28


def write_lstc_binary(path, matrix, intervals, days):
    sensors, total = matrix.shape
    assert total == intervals * days, (total, intervals, days)
    payload = np.ascontiguousarray(matrix, dtype="<f8")
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "wb") as out:
        out.write(MAGIC)
        out.write(struct.pack("<4I", 1, sensors, intervals, days))
        out.write(payload.tobytes())
    os.replace(tmp, path)


def fetch_csv(workdir):
    archive = os.path.join(workdir, "pems4w.zip")
    if not os.path.exists(archive):
        print(f"downloading {ZENODO_URL} (large) ...")
        urllib.request.urlretrieve(ZENODO_URL, archive)
    with zipfile.ZipFile(archive) as z:
        for name in z.namelist():
            if "4w" in name.lower() and name.endswith(".zip"):
                z.extract(name, workdir)
                with zipfile.ZipFile(os.path.join(workdir, name)) as inner:
                    for member in inner.namelist():
                        if member.endswith(".csv"):
                            inner.extract(member, workdir)
                            return os.path.join(workdir, member)
        for name in z.namelist():
            if "4w" in name.lower() and name.endswith(".csv"):
                z.extract(name, workdir)
                return os.path.join(workdir, name)
    sys.exit("pems-4w csv not found in the downloaded archive")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--csv", help="existing pems-4w.csv (skips the download)")
    parser.add_argument("--out", default="data/pems4w.bin")
    parser.add_argument("--workdir", default="data")
    args = parser.parse_args()

    os.makedirs(args.workdir, exist_ok=True)
    csv_path = args.csv or fetch_csv(args.workdir)
    print(f"parsing {csv_path} ...")
    matrix = np.loadtxt(csv_path, delimiter=",", dtype=np.float64)
    if matrix.shape != (11160, INTERVALS * DAYS):
        sys.exit(f"{csv_path}: unexpected shape {matrix.shape}")
    matrix[matrix == 0.0] = np.nan
    observed = np.count_nonzero(~np.isnan(matrix))
    write_lstc_binary(args.out, matrix, INTERVALS, DAYS)
    print(f"wrote {args.out}: {matrix.shape[0]} sensors x {matrix.shape[1]} time points, "
          f"{observed} observed ({100.0 * observed / matrix.size:.2f}%)")


if __name__ == "__main__":
    main()
