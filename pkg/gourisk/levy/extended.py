"""Extended-real helpers.

Values of the θ thresholds, d_η and the drift inequality live in
[−∞, +∞]. They are plain floats; what this module adds is arithmetic that
refuses ∞ − ∞ instead of producing NaN, and a JSON encoding for infinities.
"""
import math

from .exceptions import ExtendedRealError

INF = math.inf


def ext_sum(*terms):
    has_pos = any(term == INF for term in terms)
    has_neg = any(term == -INF for term in terms)
    if has_pos and has_neg:
        raise ExtendedRealError('∞ − ∞ is undefined')
    if has_pos:
        return INF
    if has_neg:
        return -INF
    return math.fsum(terms)


def to_json(value):
    if value is None:
        return None
    if value == INF:
        return '+inf'
    if value == -INF:
        return '-inf'
    # -0.0 reads badly in reports
    return float(value) + 0.0
