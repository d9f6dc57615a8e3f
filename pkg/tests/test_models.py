import math

import numpy as np
import pytest

from maslov import (
    Free,
    ForcedOscillator,
    MagneticPlane,
    NumericConfig,
    Oscillator,
    Potential1D,
    UnsupportedModelError,
    caustic_index,
    period,
)


def test_period_values():
    assert period(Oscillator(1, 1)) == pytest.approx(2 * math.pi, rel=1e-15)
    assert period(Oscillator(1, 2)) == pytest.approx(math.pi, rel=1e-15)
    assert period(MagneticPlane(1, 0.5)) == pytest.approx(4 * math.pi, rel=1e-15)
    assert period(ForcedOscillator(1, 2, 0.3)) == pytest.approx(math.pi, rel=1e-15)


def test_period_unsupported():
    with pytest.raises(UnsupportedModelError):
        period(Free())
    with pytest.raises(UnsupportedModelError):
        period(Potential1D(1.0, V=lambda x: 0.0 * x))


def test_caustic_index_examples():
    assert caustic_index(Oscillator(1, 1), 2.5 * math.pi, 1e-9) == (False, 2)
    assert caustic_index(Oscillator(1, 1), math.pi, 1e-9) == (True, 1)
    assert caustic_index(Free(), 7.0) == (False, 0)
    assert caustic_index(Potential1D(1.0, V=lambda x: x**2), 3.0) == (False, 0)


def test_caustic_index_magnetic_counts_cyclotron_turns():
    # one full turn per omega*T = pi
    assert caustic_index(MagneticPlane(1, 1), math.pi) == (True, 1)
    assert caustic_index(MagneticPlane(1, 1), 2.5 * math.pi) == (False, 2)


def test_caustic_index_monotone_and_floor():
    model = Oscillator(1, 1)
    ts = np.linspace(0.05, 6 * math.pi, 4001)
    ns = [caustic_index(model, t).N for t in ts]
    assert all(b >= a for a, b in zip(ns, ns[1:]))
    for t in ts:
        kind = caustic_index(model, t)
        if not kind.caustic and abs(math.sin(t)) > 1e-9:
            assert kind.N == math.floor(t / math.pi)


def test_caustic_index_rejects_nonpositive_time():
    with pytest.raises(ValueError):
        caustic_index(Oscillator(), 0.0)


def test_numeric_config_validation():
    NumericConfig()  # defaults valid
    with pytest.raises(ValueError):
        NumericConfig(caustic_tol=0.0)
    with pytest.raises(ValueError):
        NumericConfig(caustic_tol=1e-2)
    with pytest.raises(ValueError):
        NumericConfig(grid_points=32)
    with pytest.raises(ValueError):
        NumericConfig(mode_count=0)
    with pytest.raises(ValueError):
        NumericConfig(damping_eta=-0.1)
