import math

import mpmath
import numpy as np
import pytest

from fasisac.bessel import j0

# independently computed with 40-digit arithmetic
J0_PI = -0.3042421776440938642020349
J0_GLOBAL_MIN = -0.4027593957025529720960022


def test_anchor_values():
    assert j0(0.0) == 1.0
    assert j0(math.pi) == pytest.approx(J0_PI, abs=1e-12)
    assert j0(-math.pi) == j0(math.pi)


def test_against_arbitrary_precision_oracle():
    mpmath.mp.dps = 30
    xs = np.concatenate(
        [
            np.linspace(0.0, 14.0, 561),  # dense through the series split
            np.linspace(14.0, 60.0, 231),
            np.geomspace(60.0, 2000.0, 40),
        ]
    )
    worst = 0.0
    for x in xs:
        err = abs(j0(float(x)) - float(mpmath.besselj(0, mpmath.mpf(float(x)))))
        worst = max(worst, err)
    assert worst <= 1e-12, f"worst J0 error {worst:.2e}"


def test_range_bound():
    xs = np.linspace(0.0, 400.0, 40001)
    vals = np.array([j0(float(x)) for x in xs])
    assert vals.max() <= 1.0
    assert vals.min() >= J0_GLOBAL_MIN - 1e-9


def test_rejects_nan():
    with pytest.raises(ValueError):
        j0(math.nan)
