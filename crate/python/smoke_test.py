"""Smoke test for the `fsl` Python extension.

Build the extension first:

    cargo build -p fsl-python --features extension-module --release

then run `python3 python/smoke_test.py`. The script loads the library from
target/release (or target/debug) unless FSL_EXTENSION points at it.
"""

import importlib.machinery
import importlib.util
import os
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_extension():
    candidates = [os.environ.get("FSL_EXTENSION")] if os.environ.get("FSL_EXTENSION") else []
    for profile in ("release", "debug"):
        for name in ("libfsl.so", "libfsl.dylib", "fsl.dll"):
            candidates.append(str(ROOT / "target" / profile / name))
    for path in candidates:
        if path and Path(path).exists():
            loader = importlib.machinery.ExtensionFileLoader("fsl", path)
            spec = importlib.util.spec_from_file_location("fsl", path, loader=loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            sys.modules["fsl"] = module
            return module
    sys.exit("fsl extension not found; build it with cargo first")


def main():
    fsl = load_extension()

    diamond = fsl.Lattice(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
    )
    assert len(diamond) == 5
    assert diamond.join("a", "b") == "1" and diamond.meet("b", "c") == "0"

    h = fsl.Fss(diamond, {"0": "0", "a": "a", "b": "c", "c": "b", "1": "1"})
    assert h.f("b") == "c"
    two = fsl.Lattice.two()
    frame = fsl.Frame(["f2", "f3", "f4"], [("f2", "f3"), ("f3", "f2"), ("f4", "f4")])

    # Maps from the diamond into the two-chain, and the frame they form.
    assert len(fsl.join_homs(diamond, two)) == 5
    hf, tables = fsl.hom_frame(h, two)
    assert len(hf) == 5 and len(hf.rel) == 12
    assert all(t["0"] == "0" for t in tables)

    # The power and tensor constructions.
    power = fsl.power(two, frame)
    assert len(power) == 8 and power.f("(1,0,0)") == "(0,1,0)"
    assert len(fsl.tensor(frame, h)) == 15

    # Structure files round trip.
    assert fsl.parse(h.to_json()) == h
    assert fsl.parse(frame.to_json()) == frame

    # Nuclei: identifying a with 0 leaves the fixpoints a and 1.
    closure, size = fsl.nucleus(h, [("a", "0")])
    assert closure["0"] == "a" and closure["b"] == "1" and size == 2

    # Adjunctions and law suites.
    for which in ("I", "II", "III"):
        report = fsl.check(which, frame, h, two)
        assert report.passed, report.render()
    passed, summary = fsl.check_laws(7, 5)
    assert passed, summary

    matches, rendering = fsl.example(2)
    assert matches, rendering

    try:
        fsl.Fss(
            fsl.Lattice(["0", "p", "q", "1"], [("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")]),
            {"0": "0", "p": "1", "q": "0", "1": "p"},
        )
    except fsl.FslError as e:
        assert "join" in str(e)
    else:
        raise AssertionError("an operator breaking joins was accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
