"""Shared test utilities."""

import numpy as np
from scipy.stats import chisquare


def merge_sparse_bins(observed, expected, min_expected=5.0):
    """Group adjacent bins until each group's expected count is at least
    ``min_expected`` (chi-square validity); trailing remainder merges into
    the last group."""
    obs_groups, exp_groups = [], []
    acc_obs = acc_exp = 0.0
    for o, e in zip(observed, expected):
        acc_obs += o
        acc_exp += e
        if acc_exp >= min_expected:
            obs_groups.append(acc_obs)
            exp_groups.append(acc_exp)
            acc_obs = acc_exp = 0.0
    if acc_exp > 0 or acc_obs > 0:
        if exp_groups:
            obs_groups[-1] += acc_obs
            exp_groups[-1] += acc_exp
        else:
            obs_groups.append(acc_obs)
            exp_groups.append(acc_exp)
    return np.array(obs_groups), np.array(exp_groups)


def chi_square_pvalue(samples, pmf):
    """Chi-square goodness-of-fit p-value of integer samples against a pmf."""
    observed = np.bincount(samples, minlength=len(pmf)).astype(float)
    expected = pmf * len(samples)
    obs_g, exp_g = merge_sparse_bins(observed, expected)
    # chisquare requires matching totals; the pmf sums to 1 so they do
    _, pvalue = chisquare(obs_g, exp_g)
    return pvalue
