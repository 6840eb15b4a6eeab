"""Smoke test for the Python extension.

Build and place the module next to this script first:

    cargo build --release -p ermakov-susy-py
    cp target/release/libermakov_susy.so python/ermakov_susy.so
"""

import cmath
import os
import sys
import tempfile

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import ermakov_susy as es


def close(x, y, tol):
    return abs(x - y) <= tol


def main():
    assert set(es.PRESETS) == {"fig1", "fig1-shifted", "fig3", "fig3-alt"}
    assert close(es.solve_constraint(1.0, 1.0, 1.0, 1.0), 0.0, 1e-12)
    assert close(es.kummer_m(1.0, 1.0, 0.5), cmath.exp(0.5).real, 1e-12)
    assert all(close(e, w, 1e-12) for e, w in zip(es.morse_levels(1.0, 4.0), [1.75, 3.75], strict=True))

    levels = es.eigenvalues([[2, 1j], [1j, 2]])
    assert all(close(e, w, 1e-10) for e, w in zip(levels, [2 - 1j, 2 + 1j])), levels

    x, v1 = es.free_particle_partner(1.0, 1.0, 1.0, 1.0, n=801)
    n = len(x)
    assert n == 801 and len(v1) == n
    assert max(abs(v1[i].imag + v1[n - 1 - i].imag) for i in range(n)) <= 1e-8

    try:
        es.solve_constraint(0.5, 0.5, 1.0, 1.0)
    except ValueError as e:
        assert "infeasible" in str(e), e
    else:
        raise AssertionError("infeasible constraint accepted")

    report = es.run_preset("fig3")
    assert report.passed and report.exit_code == 0, report.summary()
    bound = [e.real for e in report.bound]
    assert all(close(e, w, 2e-3) for e, w in zip(bound, [1.0, 1.75, 3.75])), bound
    assert report.h0_levels == es.morse_levels(1.0, 4.0)
    assert not report.symmetry[0]

    toml = es.preset_config("fig1")
    again = es.run_config(toml)
    assert again.passed and again.symmetry[0]
    with tempfile.TemporaryDirectory() as d:
        names = sorted(os.path.basename(p) for p in again.write(d))
        assert "potential.csv" in names and "summary.txt" in names, names

    print(report)
    print("smoke test passed")


if __name__ == "__main__":
    main()
