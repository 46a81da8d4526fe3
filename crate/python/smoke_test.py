"""Builds the extension with cargo and exercises it from Python.

    python3 python/smoke_test.py

Set BOXBALL_SKIP_BUILD=1 to reuse an existing `target/release/libboxball_py.so`.
"""

import json
import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    if not os.environ.get("BOXBALL_SKIP_BUILD"):
        subprocess.run(
            ["cargo", "build", "--release", "-p", "boxball-py", "--features", "extension-module"],
            cwd=ROOT,
            check=True,
        )
    lib = ROOT / "target" / "release" / "libboxball_py.so"
    dest = Path(tempfile.mkdtemp()) / "boxball_py.so"
    shutil.copy(lib, dest)
    sys.path.insert(0, str(dest.parent))
    import boxball_py

    return boxball_py


def main():
    bb = load_module()

    p = bb.BoxBallState("0010011011")
    assert p.text == "10011011@2", p.text
    assert p.offset == 2 and p.ball_count() == 5
    assert p.evolve().render(0, 14) == "00010001001110"
    assert bb.evolve_reflect(p) == p.evolve()
    assert bb.transfer(p)[0] == p.evolve()
    assert bb.stack_permutation(p) == [1, 3, 5, 4, 2]
    assert bb.depth_histogram(p) == [3, 1, 1]
    assert bb.walk(p) == "U R R U U R U U R R R"

    assert bb.p_symbol([1, 3, 5, 4, 2]) == [[1, 2, 4], [3], [5]]
    assert bb.shape([3, 1, 2, 1, 4, 3]) == [3, 2, 1]
    inc, dec = bb.greene([3, 1, 2, 1, 4, 3])
    assert inc[:4] == [3, 5, 6, 6], inc
    assert bb.greene(p)[0] == [3, 4, 5, 5, 5]

    e = bb.energies(p, 6)
    assert [e[l] for l in range(1, 7)] == [3, 4, 5, 5, 5, 5]
    q = p
    for _ in range(30):
        q = q.evolve()
    assert bb.energies(q, 6) == e
    assert q.is_asymptotic()
    assert sorted(q.solitons()) == [1, 1, 3]

    try:
        bb.BoxBallState("10x1")
    except ValueError:
        pass
    else:
        raise AssertionError("bad state text accepted")

    ok, report = bb.verify(seed=42, count=60, steps=10)
    assert ok, report
    ok, report = bb.verify(seed=42, count=60, steps=10, corrupt_r_step=True)
    assert not ok
    failed = [v for v in json.loads(report)["verdicts"] if not v["passed"]]
    assert failed and failed[0]["counterexample"] is not None

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
