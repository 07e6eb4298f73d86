"""Exact values of the explicit bounds of the S^3 recognition argument.

All arithmetic is on Python integers, so nothing overflows or rounds.
"""
from __future__ import annotations

A_MAIN = 6 * 10**6        # constant a of the move bound
B_MAIN = 5 * 10**4        # constant b of the move bound
C_SUBDIV = 5 * 10**6      # constant c of the subdivision bound
D_SUBDIV = 5 * 10**4      # constant d of the subdivision bound
S_TETS = 15 * 10**4


class UnknownName(KeyError):
    pass


class NonPositiveT(ValueError):
    pass


def _main(t):
    return A_MAIN * t * t * 2 ** (B_MAIN * t * t)


def _hass(t):
    # coordinates of fundamental solutions
    return 4 * t * 2 ** (7 * t)


def _kneser(t):
    # disjoint non-parallel normal 2-spheres
    return 6 * t


def _pieces(t):
    return 2 ** (300 * t * t)


def _subdivision(t):
    return C_SUBDIV * t * t * 2 ** (D_SUBDIV * t * t)


def _s_tets(t):
    return S_TETS * 2 ** (300 * t * t)


BOUNDS = {
    "main": _main,
    "hass": _hass,
    "kneser": _kneser,
    "pieces": _pieces,
    "subdivision": _subdivision,
    "s_tets": _s_tets,
}

FORMULAS = {
    "main": "6e6 * t^2 * 2^(5e4 * t^2)",
    "hass": "4t * 2^(7t)",
    "kneser": "6t",
    "pieces": "2^(300 t^2)",
    "subdivision": "5e6 * t^2 * 2^(5e4 * t^2)",
    "s_tets": "15e4 * 2^(300 t^2)",
}


def bound(name, t):
    if name not in BOUNDS:
        raise UnknownName(f"unknown bound {name!r}")
    if isinstance(t, bool) or not isinstance(t, int):
        raise NonPositiveT(f"t must be a positive integer, got {t!r}")
    if t < 1:
        raise NonPositiveT(f"t must be positive, got {t}")
    return BOUNDS[name](t)


def digits(n):
    """Decimal digit count of a non-negative integer.

    Works from the bit length so huge values never go through ``str``.
    """
    if n < 10:
        return 1
    d = int((n.bit_length() - 1) * 0.30102999566398120) + 1
    p = 10 ** (d - 1)
    while p > n:
        d -= 1
        p //= 10
    while p * 10 <= n:
        d += 1
        p *= 10
    return d


def abbreviate(n, max_digits=40):
    """Decimal text of ``n``, or its leading and trailing digits joined by
    ``...`` when it has more than ``max_digits`` digits."""
    nd = digits(n)
    if nd <= max_digits:
        return str(n)
    half = max_digits // 2 - 2
    head = n // 10 ** (nd - half)
    tail = n % 10**half
    return f"{head}...{tail:0{half}d}"


def compare_bounds(t, max_digits=40):
    """Plain-text table of every bound at ``t`` with its digit count; long
    values are shown by their leading and trailing digits."""
    rows = []
    for name in BOUNDS:
        v = bound(name, t)
        rows.append((name, FORMULAS[name], digits(v), abbreviate(v, max_digits)))
    w0 = max(len(r[0]) for r in rows)
    w1 = max(len(r[1]) for r in rows)
    lines = [f"bounds at t={t}"]
    for name, formula, nd, s in rows:
        lines.append(f"{name:<{w0}}  {formula:<{w1}}  digits={nd:<8d} {s}")
    return "\n".join(lines)
