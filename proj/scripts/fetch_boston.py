#!/usr/bin/env python3
"""Fetch the Boston housing CSV (506 rows, 14 columns) into data/.

The file ships inside the scikit-learn 1.1.x wheel; we pull the wheel with
pip, extract the CSV, and strip the leading metadata line. Skips the
download when data/boston_housing.csv already exists.
"""
import pathlib
import subprocess
import sys
import tempfile
import zipfile

DEST = pathlib.Path(__file__).resolve().parent.parent / "data" / "boston_housing.csv"
MEMBER = "sklearn/datasets/data/boston_house_prices.csv"


def main() -> int:
    if DEST.exists():
        print(f"{DEST} already present, nothing to do")
        return 0
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "scikit-learn==1.1.3",
             "--no-deps", "-q", "-d", tmp],
            check=True,
        )
        wheel = next(pathlib.Path(tmp).glob("scikit_learn-1.1.3-*.whl"))
        with zipfile.ZipFile(wheel) as zf:
            text = zf.read(MEMBER).decode()
    lines = text.splitlines()
    # first line is sklearn bookkeeping ("506,13,,,..."), not data
    DEST.parent.mkdir(parents=True, exist_ok=True)
    DEST.write_text("\n".join(lines[1:]) + "\n")
    print(f"wrote {DEST} ({len(lines) - 1} lines)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
