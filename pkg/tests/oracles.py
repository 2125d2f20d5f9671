"""Independent cross-checks used by the tests.

The syzygy oracle reduces "find all annihilating vectors with entry
degree <= d" to an exact rational nullspace computation over the
monomial coefficients.  It shares no code with the Groebner machinery.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from lcgp.rings import Polynomial, RingContext


def monomials_up_to(nvars: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for total in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), total):
            m = [0] * nvars
            for i in combo:
                m[i] += 1
            out.append(tuple(m))
    return out


def nullspace_fraction(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the nullspace of a rational matrix, by exact RREF."""
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = Fraction(1) / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    basis = []
    for fc in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            v[pc] = -mat[ri][fc]
        basis.append(v)
    return basis


def brute_force_syzygies(
    entries: list[list[Polynomial]], ctx: RingContext, degree: int = 4
) -> list[list[Polynomial]]:
    """All syzygies of the columns of ``entries`` with entry degree <= degree.

    Each unknown syzygy entry is an undetermined rational combination of
    monomials; collecting product monomials turns A c = 0 into a linear
    system whose exact nullspace spans the truncated syzygy space.
    """
    s, ell = len(entries), len(entries[0])
    monos = monomials_up_to(ctx.ngens, degree)
    nm = len(monos)
    equations: dict[tuple, dict[int, Fraction]] = {}
    for j in range(ell):
        for mi, m in enumerate(monos):
            col = j * nm + mi
            for i in range(s):
                for em, ec in entries[i][j].terms.items():
                    key = (i, tuple(a + b for a, b in zip(m, em)))
                    bucket = equations.setdefault(key, {})
                    bucket[col] = bucket.get(col, Fraction(0)) + ec
    rows = []
    for bucket in equations.values():
        row = [Fraction(0)] * (ell * nm)
        for col, c in bucket.items():
            row[col] = c
        rows.append(row)
    out = []
    for v in nullspace_fraction(rows, ell * nm):
        polys = []
        for j in range(ell):
            terms = {
                monos[mi]: v[j * nm + mi] for mi in range(nm) if v[j * nm + mi] != 0
            }
            polys.append(Polynomial(ctx, terms))
        out.append(polys)
    return out
