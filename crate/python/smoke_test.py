"""Build the extension with cargo and exercise it from Python.

    python3 python/smoke_test.py
"""

import cmath
import math
import os
import shutil
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def build():
    subprocess.run(["cargo", "build", "--release", "-p", "qperc-py"], cwd=ROOT, check=True)
    lib = os.path.join(ROOT, "target", "release", "libqperc_py.so")
    dest = tempfile.mkdtemp()
    shutil.copy(lib, os.path.join(dest, "qperc.so"))
    sys.path.insert(0, dest)


def close(a, b, tol=1e-9):
    return all(abs(x - y) <= tol for x, y in zip(a, b))


def main():
    build()
    import qperc

    h = qperc.gate("h")
    pairs = qperc.complete_training_set("h")
    model = qperc.train(pairs)
    assert model.rank == 2 and model.is_full_rank()
    for row, want in zip(model.unitary, h):
        assert close(row, want, 1e-12)

    # Over-complete Hadamard set with a third pair |x> = (1, 2)/sqrt5.
    s5 = math.sqrt(5)
    x3 = [1 / s5, 2 / s5]
    y3 = [3 / math.sqrt(10), -1 / math.sqrt(10)]
    over = pairs + [(x3, y3)]
    assert qperc.classify(over) == "OverComplete"
    m = qperc.train(over)
    assert close(m.sigma, [2.0, 1.0])
    assert close(m.predict(x3), y3)

    t = qperc.train(qperc.complete_training_set("t"))
    assert close(t.predict([0, 1]), [0, cmath.exp(1j * math.pi / 4)])

    ok, worst, violation = qperc.consistency_check([([1, 0], [1, 0]), ([1, 0], [0, 1])])
    assert not ok and worst == (0, 1) and abs(violation - 1.0) < 1e-12
    try:
        qperc.train([([1, 0], [1, 0]), ([1, 0], [0, 1])])
    except ValueError as e:
        assert "pairs 0 and 1" in str(e)
    else:
        raise AssertionError("inconsistent set accepted")

    u, sigma, v_dag, rank = qperc.svd([[1, 2j], [0, 1]])
    assert rank == 2 and sigma[0] >= sigma[1] > 0
    p, _ = qperc.polar_unitary([[2, 0], [0, 3]])
    assert close(p[0], [1, 0]) and close(p[1], [0, 1])

    back = qperc.Model.from_json(m.to_json())
    assert back.sigma == m.sigma

    assert abs(qperc.fidelity([1, 0], [1j, 0]) - 1.0) < 1e-12
    assert qperc.fidelity([1, 0], [1j, 0], phase_invariant=False) < 1.0
    assert all(qperc.run_fixture(i)["pass"] for i in range(1, 15))
    print("python smoke test passed")


if __name__ == "__main__":
    main()
