"""Covering numbers and entropy slopes on the system zoo: identity, circle
doubling, the toral automorphism, and a nonlinear polynomial map.  Brackets
are checked against orbit-loop oracles and known growth rates."""

import math
import random

import numpy as np
import pytest

from smoothparam.entropy import (EntropyReport, covering_number, dn_distance,
                                 doubling_system, entropy_sweep,
                                 identity_system, polynomial_system,
                                 system_zoo, toral_system)
from smoothparam.errors import GridTooCoarse, PreconditionFailed


def _dn_oracle(sys, n, x, y):
    """Independent scalar orbit loop (no vectorized helpers)."""
    x = list(np.atleast_1d(np.asarray(x, float)))
    y = list(np.atleast_1d(np.asarray(y, float)))
    best = 0.0
    for i in range(n + 1):
        if sys.metric == "toroidal":
            gaps = [min(abs(a - b) % 1.0, 1.0 - abs(a - b) % 1.0)
                    for a, b in zip(x, y)]
        else:
            gaps = [abs(a - b) for a, b in zip(x, y)]
        d = gaps[0] if len(gaps) == 1 else math.hypot(*gaps)
        best = max(best, d)
        if i < n:
            x = list(sys.step(np.array([x]))[0])
            y = list(sys.step(np.array([y]))[0])
    return best


def test_dn_distance_matches_oracle():
    rng = random.Random(61)
    for sys in (identity_system(), doubling_system(), toral_system(),
                polynomial_system()):
        for _ in range(20):
            if sys.dim == 1:
                x = [rng.uniform(*map(float, sys.box[0]))]
                y = [rng.uniform(*map(float, sys.box[0]))]
            else:
                x = [rng.uniform(*map(float, b)) for b in sys.box]
                y = [rng.uniform(*map(float, b)) for b in sys.box]
            n = rng.randint(0, 6)
            assert abs(dn_distance(sys, n, x, y)
                       - _dn_oracle(sys, n, x, y)) < 1e-12


def test_grid_too_coarse_and_iteration_cap():
    sys = identity_system()
    with pytest.raises(GridTooCoarse):
        covering_number(sys, 1, 0.1, resolution=0.1)
    with pytest.raises(PreconditionFailed):
        covering_number(sys, sys.iteration_cap + 1, 0.1, resolution=0.01)


def test_identity_covering_is_n_independent():
    sys = identity_system()
    eps = 0.1
    outs = [covering_number(sys, n, eps, resolution=eps / 8) for n in (1, 4, 8)]
    uppers = {o["M_upper"] for o in outs}
    assert len(uppers) == 1
    for o in outs:
        # covering [0, 1] at scale 0.1 takes about 1/(2 eps) = 5 intervals
        assert 4 <= o["M_lower"] <= o["M_upper"] <= 11


def test_doubling_bracket_and_growth():
    sys = doubling_system()
    eps = 1 / 40
    prev = None
    for n in range(2, 9):
        out = covering_number(sys, n, eps, resolution=eps / (4 * 2 ** 10))
        assert out["M_lower"] <= out["M_upper"] <= 4 * out["M_lower"]
        if prev is not None:
            ratio = out["M_upper"] / prev
            assert 1.8 <= ratio <= 2.2      # growth rate of the doubling map
        prev = out["M_upper"]


def test_toral_growth_matches_eigenvalue():
    sys = toral_system()
    lam = (3 + math.sqrt(5)) / 2
    eps = 1 / 16
    uppers, lowers = [], []
    for n in range(2, 9):
        out = covering_number(sys, n, eps, resolution=eps / 8)
        assert out["M_lower"] <= out["M_upper"]
        uppers.append(out["M_upper"])
        lowers.append(out["M_lower"])
    gu = (uppers[-1] / uppers[0]) ** (1 / (len(uppers) - 1))
    gl = (lowers[-1] / lowers[0]) ** (1 / (len(lowers) - 1))
    assert abs(gu - lam) <= 0.15 * lam
    assert abs(gl - lam) <= 0.15 * lam


def test_polynomial_system_bracket_valid():
    sys = polynomial_system()
    for n in (1, 3):
        out = covering_number(sys, n, 0.2, resolution=0.04)
        assert 1 <= out["M_lower"] <= out["M_upper"]


def test_sweep_identity_entropy_near_zero():
    rep = entropy_sweep(identity_system(), list(range(1, 9)), [0.1, 0.05])
    assert rep.check_invariants() == []
    for slope in rep.h_estimates.values():
        assert abs(slope) <= 0.01


def test_sweep_doubling_slope_near_one():
    rep = entropy_sweep(doubling_system(), list(range(1, 13)), [0.02, 0.01])
    assert rep.check_invariants() == []
    for slope in rep.h_estimates.values():
        assert 0.8 <= slope <= 1.2


def test_sweep_monotonicity_and_csv():
    rep = entropy_sweep(doubling_system(), [1, 2, 3, 4], [0.1, 0.05])
    assert rep.check_invariants() == []
    # M_upper is monotone increasing in n and in 1/eps
    for eps in (0.1, 0.05):
        ms = [rep.cell(n, eps)["M_upper"] for n in (1, 2, 3, 4)]
        assert ms == sorted(ms)
    for n in (1, 2, 3, 4):
        assert rep.cell(n, 0.05)["M_upper"] >= rep.cell(n, 0.1)["M_upper"]
    csv = rep.to_csv()
    lines = csv.strip().split("\n")
    assert lines[0] == "n,eps,M_lower,M_upper,h"
    assert len(lines) == 1 + 4 * 2
