"""Scalar observables of a density-matrix series.

Projector expectations, trace, purity, their trace-normalized variants, the
von Neumann entropy of the surviving (non-reacted) sub-ensemble, and the
cumulative information carried away by reaction products.  All entropies and
information measures are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import ConfigError, NumericError
from .master import RhoSeries, Theory
from .spaces import SpinSpace, expectation

# Normalized quantities are undefined (NaN in rows, NA in CSV) once the
# surviving population drops below this.
TRACE_FLOOR = 1e-6


@dataclass(frozen=True)
class DiagnosticRow:
    """One output row; NaN marks quantities undefined at that time."""

    t: float
    qs: float
    qt: float
    trace: float
    purity: float
    qs_norm: float
    qt_norm: float
    purity_norm: float
    svn: float
    p_s: float
    s_i: float
    info_gain: float


def basic_observables(rho: np.ndarray, space: SpinSpace) -> tuple[float, float, float, float]:
    """(<Qs>, <Qt>, Tr rho, Tr rho^2)."""
    qs = expectation(space.q_singlet, rho)
    qt = expectation(space.q_triplet, rho)
    trace = float(np.trace(rho).real)
    purity = float(np.trace(rho @ rho).real)
    return qs, qt, trace, purity


def normalized_observables(rho: np.ndarray, space: SpinSpace) -> tuple[float, float, float]:
    """(qs/trace, qt/trace, purity/trace^2); NaN triple below the trace floor."""
    qs, qt, trace, purity = basic_observables(rho, space)
    if trace < TRACE_FLOOR:
        return (math.nan, math.nan, math.nan)
    return (qs / trace, qt / trace, purity / trace**2)


def von_neumann_entropy(rho: np.ndarray) -> float:
    """-sum l ln l over the eigenvalues, with 0 ln 0 = 0.

    Expects a normalized (unit-trace) matrix; eigenvalues in [-1e-9, 0) are
    treated as exact zeros, anything more negative aborts.
    """
    evals = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)
    if evals.min() < -1e-9:
        raise NumericError(0.0, f"entropy of non-positive matrix: eigenvalue {evals.min():.3e}")
    evals = np.clip(evals, 0.0, None)
    nz = evals[evals > 0.0]
    return max(0.0, float(-np.sum(nz * np.log(nz))))


def binary_information(p_s: float) -> float:
    """Binary entropy -p ln p - (1-p) ln(1-p) in nats; endpoints give 0."""
    if p_s < -1e-12 or p_s > 1.0 + 1e-12:
        raise ConfigError(f"probability {p_s} outside [0, 1]")
    p = min(max(p_s, 0.0), 1.0)
    if p == 0.0 or p == 1.0:
        return 0.0
    # canonicalize to the smaller probability so s(p) == s(1-p) exactly
    m = min(p, 1.0 - p)
    return float(-m * math.log(m) - (1.0 - m) * math.log(1.0 - m))


def information_gain(series: RhoSeries, space: SpinSpace, k_s: float) -> np.ndarray:
    """Cumulative reaction-information integral on the series grid.

    Integrand is k_s <Qs> s(p_s): the unnormalized singlet reaction flux times
    the binary information of the pre-reaction singlet probability
    p_s = <Qs>/Tr{rho}.  Trapezoidal quadrature; non-decreasing by
    construction.  Only defined for the trace-decaying (Jones-Hore) theory.
    """
    if series.theory is not Theory.JONES_HORE:
        raise ConfigError("information gain is defined by the Jones-Hore reaction bookkeeping")
    qs = np.einsum("tij,ji->t", series.states, space.q_singlet).real
    trace = np.einsum("tii->t", series.states).real
    integrand = np.zeros_like(qs)
    ok = trace >= TRACE_FLOOR
    p = np.clip(qs[ok] / trace[ok], 0.0, 1.0)
    s_i = np.zeros_like(p)
    inner = (p > 0.0) & (p < 1.0)
    pi = p[inner]
    s_i[inner] = -pi * np.log(pi) - (1.0 - pi) * np.log(1.0 - pi)
    integrand[ok] = k_s * qs[ok] * s_i
    return cumulative_trapezoid(integrand, series.times, initial=0.0)


def diagnostics_table(series: RhoSeries, space: SpinSpace, k_s: float) -> list[DiagnosticRow]:
    """Evaluate every diagnostic on the series grid."""
    if series.theory is Theory.JONES_HORE:
        gains = information_gain(series, space, k_s)
    else:
        gains = np.full(len(series.times), math.nan)
    rows = []
    for i, (t, rho) in enumerate(zip(series.times, series.states)):
        if np.isnan(rho).any():
            rows.append(DiagnosticRow(t, *([math.nan] * 11)))
            continue
        qs, qt, trace, purity = basic_observables(rho, space)
        if trace >= TRACE_FLOOR:
            qs_n, qt_n, pur_n = qs / trace, qt / trace, purity / trace**2
            svn = von_neumann_entropy(rho / trace)
            p_s = min(max(qs_n, 0.0), 1.0)
            s_i = binary_information(p_s)
        else:
            qs_n = qt_n = pur_n = svn = p_s = s_i = math.nan
        rows.append(DiagnosticRow(t, qs, qt, trace, purity, qs_n, qt_n, pur_n,
                                  svn, p_s, s_i, float(gains[i])))
    return rows
