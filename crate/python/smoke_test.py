#!/usr/bin/env python3
"""Smoke test for the frobkit_py extension module.

Builds nothing itself: run `cargo build -p frobkit-py` (or --release)
first. The script copies the produced cdylib next to itself under the
importable name and checks a handful of exact values end to end.
"""

import pathlib
import shutil
import sys
from fractions import Fraction

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        ROOT / "target" / profile / "libfrobkit_py.so"
        for profile in ("release", "debug")
    ]
    built = next((c for c in candidates if c.exists()), None)
    if built is None:
        sys.exit("build the extension first: cargo build -p frobkit-py")
    dest = pathlib.Path(__file__).resolve().parent / "frobkit_py.so"
    if not dest.exists() or built.stat().st_mtime > dest.stat().st_mtime:
        shutil.copy2(built, dest)
    sys.path.insert(0, str(dest.parent))
    import frobkit_py

    return frobkit_py


def main():
    fk = load_module()

    # Monomial staircase arithmetic.
    ideal = fk.MonomialIdeal.parse("x^2, x*y, y^2")
    assert ideal.dim == 2
    assert ideal.colength() == 3
    assert ideal.hk_exact() == Fraction(3)
    assert ideal.bracket_power(2).colength() == 12
    assert ideal.hk_function(2, 3) == [(1, 2, 12), (2, 4, 48), (3, 8, 192)]
    assert ideal.socle_monomials() == [[0, 1], [1, 0]] or ideal.socle_monomials() == [
        [1, 0],
        [0, 1],
    ]

    params = fk.MonomialIdeal.parse("x^2, y^2")
    assert params.r_estimate() == Fraction(1)
    enlarged = fk.MonomialIdeal([[2, 0], [0, 2], [1, 1]], 2)
    assert params.relative_hk(enlarged) == Fraction(1)

    # Veronese decompositions and certified bounds.
    v = fk.VeroneseModule(3, 1, 2)
    assert v.decompose(1) == [2, 1, 1]
    assert v.bq_oracle(1, trials=20, field_size=101, seed=7) == 2
    assert v.bq_oracle(1, trials=20, field_size=101, seed=7) == v.bq_oracle(
        1, trials=20, field_size=101, seed=7
    )
    lo, hi = v.certified_interval(8)
    assert lo <= Fraction(1, 2) <= hi
    assert hi - lo < Fraction(1, 1000)

    ring = fk.VeroneseModule(3, 0, 5)
    q = 5**6
    a0 = ring.splitting_number(6)
    assert abs(Fraction(a0, q * q) - Fraction(1, 3)) <= Fraction(2, q)
    low, up = ring.dual_bounds(6)
    assert low == a0 == up

    # Socle injection with the independent hypothesis check.
    problem = fk.SocleProblem.from_toml(
        pathlib.Path(
            ROOT / "crates" / "cli" / "tests" / "fixtures" / "dual_numbers.toml"
        ).read_text()
    )
    holds, exhaustive = problem.check_hypothesis(seed=1)
    assert holds and exhaustive
    element, field_size = problem.socle_injection(trials=8, seed=1)
    assert field_size == 2 and element[0] == 1

    solved = violated = 0
    for seed in range(30):
        rnd = fk.SocleProblem.random(3, seed)
        if rnd.check_hypothesis(seed)[0]:
            rnd.socle_injection(trials=8, seed=seed)
            solved += 1
        else:
            try:
                rnd.socle_injection(trials=8, seed=seed)
            except ValueError as e:
                assert "hypothesis" in str(e)
                violated += 1
            else:
                raise AssertionError(f"seed {seed}: expected a rejection")
    assert solved > 0 and violated > 0

    # Growth fitting and the classifier.
    points = [(e, 4**e) for e in range(1, 9)]
    order, slope, ratio_value = fk.series_growth_order(2, points)
    assert order == 2 and ratio_value == Fraction(1)
    assert abs(slope - 2) < 0.1

    verdict = fk.classify_veronese(2, 3, 10)
    assert verdict["gorenstein"] == "certified-yes"
    assert verdict["strongly_f_regular"] == "certified-yes"
    verdict = fk.classify_veronese(3, 2, 10)
    assert verdict["gorenstein"] == "certified-no"
    assert verdict["regular"] == "certified-no"
    value, lower, upper = verdict["s_r"]
    assert lower <= Fraction(1, 3) <= upper and lower <= value <= upper

    print("smoke test passed")


if __name__ == "__main__":
    main()
