"""Independent oracles for the test suite.

These deliberately avoid the package's echelon/quotient machinery: ranks use
fraction-free integer elimination (Bareiss style), and bilinear-form facts
are checked straight from definitions.
"""

def bareiss_rank(rows):
    """Rank of an integer matrix by fraction-free elimination."""
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        piv = next((r for r in range(rank, n_rows) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(n_rows):
            if r == rank:
                continue
            for c in range(n_cols):
                if c == col:
                    continue
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) // prev
            m[r][col] = 0
        prev = m[rank][col]
        rank += 1
        if rank == n_rows:
            break
    return rank


def oracle_betti(cx, p):
    """Betti number from coboundary ranks, built straight off the face lists."""

    def cob_rows(q):
        n_from = cx.count(q)
        n_to = cx.count(q + 1)
        rows = [[0] * n_from for _ in range(n_to)]
        if q + 1 in cx.faces:
            for s, frow in enumerate(cx.faces[q + 1]):
                for i, f in enumerate(frow):
                    rows[s][f] += (-1) ** i
        return rows

    rank_d = bareiss_rank(cob_rows(p))
    rank_prev = bareiss_rank(cob_rows(p - 1)) if p >= 1 else 0
    return cx.count(p) - rank_d - rank_prev


def in_orthogonal(form, subspace, v):
    """Definition check: v is orthogonal to every basis vector of subspace."""
    for j in range(subspace.dim):
        a = subspace.basis.col(j)
        if any(x != 0 for x in form.evaluate(a, v)):
            return False
    return True


def subspaces_equal_by_membership(form, a, b, probes):
    """Compare two subspaces through a list of probe vectors (weak check)."""
    return all(a.contains_vector(p) == b.contains_vector(p) for p in probes)
