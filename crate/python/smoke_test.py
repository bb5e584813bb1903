"""Smoke test for the qdisk extension module.

Build it first, e.g. `maturin develop -m crates/py/Cargo.toml`, or
`cargo build --release -p qdisk-py --features extension-module` and copy
target/release/libqdisk.so to python/qdisk.so.
"""

import json
import sys

import qdisk


def main():
    assert qdisk.catalan(6) == 132
    assert len(qdisk.triangulations(8)) == 132
    assert qdisk.compute_ia(5, json.dumps({"curves": []})) == "1"

    lam = {"curves": [{"chord": [0, 1], "w": -1}, {"chord": [0, 3], "w": 1},
                      {"chord": [1, 2], "w": 1}, {"chord": [2, 3], "w": -1}]}
    assert qdisk.compute_ia(5, json.dumps(lam), chart="0-2,0-3") == "X[0-2]^-1"
    assert qdisk.compute_ia(5, json.dumps(lam), chart="0-2,0-3", q_one=True) == "X[0-2]^-1"
    print("I_A^q in chart 1-3,1-4:", qdisk.compute_ia(5, json.dumps(lam), chart="1-3,1-4"))

    d = json.loads(qdisk.compute_id(5, json.dumps({"front": [], "back": []})))
    assert d["n_l"] == 0 and d["pi_check"] is True

    try:
        qdisk.compute_ia(5, json.dumps({"curves": [{"chord": [0, 2], "w": 1}]}))
    except ValueError as e:
        print("rejected:", e)
    else:
        raise AssertionError("invalid lamination accepted")

    ok, report = qdisk.run_verify(["compat", "dilog"], n=5)
    print(report, end="")
    assert ok
    ok, _ = qdisk.run_verify(["nl"], n=5)
    assert not ok
    print("smoke test ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
