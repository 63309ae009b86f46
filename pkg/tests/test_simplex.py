from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from qsskit.simplex import solve_standard


def test_small_optimum():
    # min y1 + 2 y2  s.t.  y1 + y2 = 1, y >= 0
    res = solve_standard([{0: 1}, {0: 1}], [1], [1, 2])
    assert res.status == "optimal" and res.value == 1


def test_infeasible():
    # y1 = -1 with y1 >= 0
    res = solve_standard([{0: 1}], [-1], [0])
    assert res.status == "infeasible"


def test_unbounded():
    # min -y1 s.t. y1 - y2 = 0
    res = solve_standard([{0: 1}, {0: -1}], [0], [-1, 0])
    assert res.status == "unbounded"


def test_random_against_scipy():
    rng = np.random.default_rng(0)
    for _ in range(40):
        m, n = int(rng.integers(1, 5)), int(rng.integers(1, 8))
        a = rng.integers(-3, 4, size=(m, n))
        b = rng.integers(-3, 4, size=m)
        c = rng.integers(-2, 5, size=n)
        cols = [{i: int(a[i, j]) for i in range(m) if a[i, j]} for j in range(n)]
        ours = solve_standard(cols, [int(x) for x in b], [int(x) for x in c])
        ref = linprog(c, A_eq=a, b_eq=b, bounds=[(0, None)] * n, method="highs")
        want = {0: "optimal", 2: "infeasible", 3: "unbounded"}[ref.status]
        assert ours.status == want
        if want == "optimal":
            assert abs(float(ours.value) - ref.fun) < 1e-7
            assert isinstance(ours.value, Fraction)
            # the solution is an exact feasible point
            y = ours.y
            for i in range(m):
                assert sum(int(a[i, j]) * y[j] for j in range(n)) == int(b[i])
            assert all(v >= 0 for v in y)
