"""JSON encoding helpers: complex numbers as [re, im], rationals as [num, den]."""

from fractions import Fraction

import numpy as np


def encode(value):
    """Recursively convert numpy/complex/Fraction values to JSON-ready objects."""
    if isinstance(value, Fraction):
        return [value.numerator, value.denominator]
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.ndarray):
        return [encode(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    return value


def decode_complex(obj):
    return complex(obj[0], obj[1])


def decode_complex_array(obj):
    """Inverse of :func:`encode` for (nested) complex arrays."""
    arr = np.asarray(obj, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def decode_fraction(obj):
    return Fraction(int(obj[0]), int(obj[1]))
