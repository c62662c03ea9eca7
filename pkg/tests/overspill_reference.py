"""Direct, unvectorised evaluation of the overspill index, used as an oracle."""

import math

from hyperlab.sequences import default_tol


def brute_force_index(family, k, tol=default_tol):
    """Largest m <= k passing the window test for every i <= m and the diagonal test at m."""
    look = int(math.log(k)) if k > 1 else 0
    js = range(k, k + look + 1)
    first_fail = k + 1
    for i in range(1, k + 1):
        seq = family(i)
        if max(abs(float(seq(j))) for j in js) > 1.0 / i:
            first_fail = i
            break
    for m in range(min(k, first_fail - 1), 0, -1):
        if abs(float(family(m)(k))) < float(tol(float(k))):
            return m
    return 1
