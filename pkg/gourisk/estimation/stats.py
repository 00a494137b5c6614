"""Interval helpers shared by the estimators."""
import math

import numpy as np
from django.conf import settings
from scipy import stats
from statsmodels.stats.proportion import proportion_confint


def _alpha(confidence=None):
    return 1.0 - (confidence or settings.GOU['CONFIDENCE'])


def wilson(events, n, confidence=None):
    """Wilson interval, clamped so that it always holds events / n."""
    low, high = proportion_confint(
        events, n, alpha=_alpha(confidence), method='wilson'
    )
    p = events / n
    return min(max(float(low), 0.0), p), max(min(float(high), 1.0), p)


def dkw_epsilon(n, confidence=None):
    """Half-width of the Dvoretzky–Kiefer–Wolfowitz band for n samples."""
    return math.sqrt(math.log(2.0 / _alpha(confidence)) / (2.0 * n))


def mean_interval(values, confidence=None):
    """(mean, low, high) from the normal approximation."""
    values = np.asarray(values, dtype=float)
    mean = float(np.mean(values))
    if values.size < 2:
        return mean, mean, mean
    quantile = stats.norm.ppf(1.0 - _alpha(confidence) / 2.0)
    half = quantile * float(np.std(values, ddof=1)) / math.sqrt(values.size)
    return mean, mean - half, mean + half


def ks_two_sample(first, second):
    return float(stats.ks_2samp(first, second).statistic)
