#!/usr/bin/env python3
"""Write a 5000-image MNIST subset as IDX files.

The source is the class-sorted mnist_5k.csv.gz shipped inside the mlxtend
wheel (500 images per digit, label in the last column). Rows are shuffled
with a fixed seed so that prefixes of the file mix all ten classes.

    pip download mlxtend==0.24.0 --no-deps -d /tmp/mlx
    python3 tools/prepare_mnist_subset.py /tmp/mlx/mlxtend-0.24.0-py3-none-any.whl data/mnist5k
"""

import argparse
import gzip
import io
import pathlib
import struct
import zipfile

import numpy as np

MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("wheel", type=pathlib.Path)
    parser.add_argument("out_dir", type=pathlib.Path)
    parser.add_argument("--seed", type=int, default=12345)
    args = parser.parse_args()

    with zipfile.ZipFile(args.wheel) as wheel:
        raw = gzip.decompress(wheel.read(MEMBER))
    table = np.loadtxt(io.BytesIO(raw), delimiter=",", dtype=np.int64)
    if table.shape[1] != 785:
        raise SystemExit(f"unexpected column count {table.shape[1]}")
    pixels = table[:, :784].astype(np.uint8)
    labels = table[:, 784].astype(np.uint8)

    order = np.random.default_rng(args.seed).permutation(len(labels))
    pixels, labels = pixels[order], labels[order]

    args.out_dir.mkdir(parents=True, exist_ok=True)
    n = len(labels)
    with open(args.out_dir / "mnist5k-images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x803, n, 28, 28))
        f.write(pixels.tobytes())
    with open(args.out_dir / "mnist5k-labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x801, n))
        f.write(labels.tobytes())
    print(f"wrote {n} images to {args.out_dir}")


if __name__ == "__main__":
    main()
