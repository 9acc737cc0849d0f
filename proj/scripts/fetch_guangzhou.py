#!/usr/bin/env python3
"""Download the Guangzhou urban traffic speed dataset and convert it to the
lstc binary format.

The dataset (https://doi.org/10.5281/zenodo.1205229) holds speeds from 214
road segments over 61 days at a 10-minute resolution (144 intervals/day) as
a MATLAB tensor. Zero-valued cells denote missing observations and are
written as NaN.

Usage:
  scripts/fetch_guangzhou.py [--mat tensor.mat] [--out data/guangzhou.bin]

With --mat the download is skipped and the given file is converted directly.
"""

import argparse
import io
import os
import struct
import sys
import urllib.request
import zipfile

import numpy as np

ZENODO_URL = "https://zenodo.org/api/records/1205229/files-archive"
MAGIC = b"LSTCDAT\x00"
INTERVALS = 144
DAYS = 61


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


def load_tensor(mat_path):
    from scipy.io import loadmat

    contents = loadmat(mat_path)
    arrays = [v for v in contents.values() if isinstance(v, np.ndarray) and v.ndim == 3]
    if not arrays:
        sys.exit(f"{mat_path}: no 3-way array found")
    tensor = arrays[0].astype(np.float64)
    if tensor.shape == (214, DAYS, INTERVALS):
        pass  # (segment, day, interval)
    elif tensor.shape == (214, INTERVALS, DAYS):
        tensor = tensor.transpose(0, 2, 1)
    else:
        sys.exit(f"{mat_path}: unexpected tensor shape {tensor.shape}")
    # Flatten (day, interval) day-major so column t = day*intervals + interval.
    return tensor.reshape(tensor.shape[0], -1)


def fetch_mat(workdir):
    archive = os.path.join(workdir, "guangzhou.zip")
    if not os.path.exists(archive):
        print(f"downloading {ZENODO_URL} ...")
        urllib.request.urlretrieve(ZENODO_URL, archive)
    with zipfile.ZipFile(archive) as z:
        for name in z.namelist():
            if name.endswith("tensor.mat"):
                z.extract(name, workdir)
                return os.path.join(workdir, name)
        # Some mirrors nest another zip inside the archive.
        for name in z.namelist():
            if name.endswith(".zip"):
                inner = zipfile.ZipFile(io.BytesIO(z.read(name)))
                for member in inner.namelist():
                    if member.endswith("tensor.mat"):
                        inner.extract(member, workdir)
                        return os.path.join(workdir, member)
    sys.exit("tensor.mat not found in the downloaded archive")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--mat", help="existing tensor.mat (skips the download)")
    parser.add_argument("--out", default="data/guangzhou.bin")
    parser.add_argument("--workdir", default="data")
    args = parser.parse_args()

    os.makedirs(args.workdir, exist_ok=True)
    mat_path = args.mat or fetch_mat(args.workdir)
    matrix = load_tensor(mat_path)
    matrix[matrix == 0.0] = np.nan  # zero speed encodes a missing observation
    observed = np.count_nonzero(~np.isnan(matrix))
    write_lstc_binary(args.out, matrix, INTERVALS, DAYS)
    print(f"wrote {args.out}: {matrix.shape[0]} sensors x {matrix.shape[1]} time points, "
          f"{observed} observed ({100.0 * observed / matrix.size:.2f}%)")


if __name__ == "__main__":
    main()
