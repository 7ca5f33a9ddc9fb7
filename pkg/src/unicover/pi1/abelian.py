"""Integer linear algebra for abelianizations."""

from __future__ import annotations

from .words import Word, exponent_vector


def smith_diagonal(rows: list[list[int]]) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return []
    m, n = len(a), len(a[0])
    diag = []
    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return diag
            i, j = best
            a[t], a[i] = a[i], a[t]
            for r in a:
                r[t], r[j] = r[j], r[t]
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                clean = clean and a[i][t] == 0
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(a[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        diag.append(abs(a[t][t]))
    return diag


def abelian_invariants(n_gens: int, rows: list[list[int]]) -> tuple[int, list[int]]:
    """(free rank, torsion coefficients > 1) of Z^n / rowspace."""
    d = smith_diagonal(rows)
    return n_gens - len(d), [x for x in d if x > 1]


def hermite_rows(rows: list[list[int]]) -> list[list[int]]:
    """Row echelon basis of the integer row lattice."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return []
    n = len(a[0])
    out = []
    col = 0
    while a and col < n:
        nz = [r for r in a if r[col]]
        if not nz:
            col += 1
            continue
        rest = [r for r in a if not r[col]]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            nxt = [p]
            for r in nz[1:]:
                q = r[col] // p[col]
                r = [x - q * y for x, y in zip(r, p)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            nz = nxt
        p = nz[0]
        if p[col] < 0:
            p = [-x for x in p]
        out.append(p)
        a = rest
        col += 1
    return out


def lattice_contains(hnf: list[list[int]], v: list[int]) -> bool:
    v = list(v)
    for row in hnf:
        col = next(j for j, x in enumerate(row) if x)
        if v[col] % row[col]:
            return False
        q = v[col] // row[col]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return not any(v)


class Abelianization:
    """Abelian image test over a fixed generator list and relator set."""

    def __init__(self, gens: list[int], relators: list[Word]):
        self.gens = list(gens)
        self.rows = [exponent_vector(r, self.gens) for r in relators]
        self.hnf = hermite_rows(self.rows)

    def is_zero(self, w: Word) -> bool:
        return lattice_contains(self.hnf, exponent_vector(w, self.gens))

    def invariants(self) -> tuple[int, list[int]]:
        return abelian_invariants(len(self.gens), self.rows)
