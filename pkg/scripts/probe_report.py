#!/usr/bin/env python3
"""Run the growth-ratio probe and growth-envelope check on every built-in
family and print a verdict table.  The super-exponential counterexample is
the one that must be rejected."""

import numpy as np

from deformed_renyi import (
    BUILTIN_FAMILIES,
    growth_envelope_check,
    parse_family_spec,
    ratio_limsup_probe,
)


def main():
    print(f"{'family':18s} {'verdict':12s} {'tail sup':>12s} {'K':>10s} {'c':>8s} {'envelope':>9s}")
    for spec in BUILTIN_FAMILIES:
        family = parse_family_spec(spec)
        report = ratio_limsup_probe(family, lambda0=1.0, u_max=200.0, threshold=1e12)
        if report.verdict == "bounded":
            check = growth_envelope_check(
                family, report.bound_K, 1.0, report.bound_c,
                np.linspace(max(report.bound_c, -20.0), 200.0, 301),
                np.linspace(0.0, 20.0, 41),
            )
            envelope = "holds" if check.holds else "FAILS"
            k_str = f"{report.bound_K:.5f}"
            c_str = f"{report.bound_c:.1f}" if np.isfinite(report.bound_c) else "-inf"
        else:
            envelope, k_str, c_str = "-", "-", "-"
        sup = f"{report.sup_estimate:.4g}"
        print(f"{spec:18s} {report.verdict:12s} {sup:>12s} {k_str:>10s} {c_str:>8s} {envelope:>9s}")


if __name__ == "__main__":
    main()
