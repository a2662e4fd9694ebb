#!/usr/bin/env python3
"""Materialize MovieLens 100k `u.data` from a PyPI mirror.

GroupLens downloads are not always reachable from build machines, but the
pytorch-widedeep wheel ships the 100k ratings table (same rows, same order as
the original `u.data`). This script downloads that wheel without installing
it, extracts the ratings parquet and writes `u.data` in the original
TAB-separated format.
"""

import argparse
import io
import pathlib
import subprocess
import sys
import tempfile
import zipfile

WHEEL = "pytorch-widedeep==1.7.0"
MEMBER = "pytorch_widedeep/datasets/data/MovieLens100k_data.parquet.brotli"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parents[1]
                                             / "data" / "ml-100k" / "u.data"))
    args = parser.parse_args()

    import pandas as pd

    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run([sys.executable, "-m", "pip", "download", "--no-deps", "-q",
                        "-d", tmp, WHEEL], check=True)
        wheel = next(pathlib.Path(tmp).glob("*.whl"))
        with zipfile.ZipFile(wheel) as zf:
            frame = pd.read_parquet(io.BytesIO(zf.read(MEMBER)))

    frame = frame[["user_id", "movie_id", "rating", "timestamp"]].astype("int64")
    with open(out, "w", newline="\n") as fh:
        for row in frame.itertuples(index=False):
            fh.write(f"{row[0]}\t{row[1]}\t{row[2]}\t{row[3]}\n")
    print(f"wrote {len(frame)} ratings to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
