"""Smoke test for the Python extension.

Build first:  cargo build --release -p malmsten-py --features extension-module
Then run:     python3 python/smoke_test.py [path/to/libmalmsten_py.so]
"""

import importlib.util
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def find_library(argv):
    if len(argv) > 1:
        return Path(argv[1])
    for profile in ("release", "debug"):
        for name in ("libmalmsten_py.so", "libmalmsten_py.dylib", "malmsten_py.dll"):
            p = ROOT / "target" / profile / name
            if p.exists():
                return p
    sys.exit("extension not built; run: cargo build --release -p malmsten-py --features extension-module")


def load(lib):
    # the module init symbol is PyInit_malmsten, so the file must be named malmsten.*
    tmp = Path(tempfile.mkdtemp())
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    target = tmp / ("malmsten" + suffix)
    shutil.copy(lib, target)
    spec = importlib.util.spec_from_file_location("malmsten", target)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def main():
    m = load(find_library(sys.argv))

    ids = m.identities()
    assert "sin4x-zeta3" in ids, ids

    r = m.verify("sin4x-zeta3", 30)
    assert r["pass"], r

    assert m.coeffs("sin4nx", 2, 30) == [["-7"], ["-14/3", "124"]]
    assert m.poly("lambda", 2, 30) == ["2/93", "0", "-1/31"]
    assert m.pslq(["pi", "beta(1)"], 30) == ["1", "-4"]
    assert m.pslq(["pi", "gamma", "ln2"], 40, 1000) is None

    rows = m.fourier(3, 20)
    assert [k for k, _, _ in rows] == [1, 2, 3]

    try:
        m.integrate("F5:1:1", 20)
    except ArithmeticError:
        pass
    else:
        raise AssertionError("divergent kernel accepted")
    try:
        m.verify("no-such-id")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown id accepted")

    # independent check against mpmath
    try:
        import mpmath as mp
    except ImportError:
        mp = None
    if mp is not None:
        mp.mp.dps = 40
        ref = mp.quad(lambda x: mp.sinh(x) / (x * mp.cosh(x) ** 2), [0, 1, mp.inf])
        got = mp.mpf(m.integrate("F5:0:2", 35)["value"])
        assert abs(got - ref) < mp.mpf(10) ** -33, (got, ref)
        z = mp.mpf(m.constant("zeta(3)", 35)["value"])
        assert abs(z - mp.zeta(3)) < mp.mpf(10) ** -33

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
