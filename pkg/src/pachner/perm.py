"""Permutations of small label sets, stored as plain tuples.

``p[i]`` is the image of label ``i``.  Composition follows function
composition: ``compose(p, q)[i] == p[q[i]]``.
"""
from itertools import permutations

PERMS4 = tuple(permutations(range(4)))
PERMS3 = tuple(permutations(range(3)))

IDENTITY4 = (0, 1, 2, 3)
IDENTITY3 = (0, 1, 2)


def all_perms(n):
    return PERMS4 if n == 4 else PERMS3 if n == 3 else tuple(permutations(range(n)))


def _compose(p, q):
    return tuple(p[i] for i in q)


def _inverse(p):
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


# lookup tables for the small cases, which dominate signature computation
_COMPOSE = {(p, q): _compose(p, q) for ps in (PERMS3, PERMS4) for p in ps for q in ps}
_INVERSE = {p: _inverse(p) for ps in (PERMS3, PERMS4) for p in ps}


def compose(p, q):
    r = _COMPOSE.get((p, q))
    return r if r is not None else _compose(p, q)


def inverse(p):
    r = _INVERSE.get(p)
    return r if r is not None else _inverse(p)


def sign(p):
    """+1 for even permutations, -1 for odd ones."""
    s = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def is_perm(p, n):
    return len(p) == n and sorted(p) == list(range(n))


def perm_str(p):
    return "".join(str(i) for i in p)
