"""Independent reference computations shared by the tests."""


def cofactor_det(M):
    if len(M) == 1:
        return M[0][0]
    return sum(
        (-1) ** j * M[0][j] * cofactor_det([row[:j] + row[j + 1:] for row in M[1:]])
        for j in range(len(M))
    )


def poly_mul(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def torus_knot_alexander(p, q):
    """(t^pq - 1)(t - 1) / ((t^p - 1)(t^q - 1)), centred, by exact long division."""
    num = poly_mul({p * q: 1, 0: -1}, {1: 1, 0: -1})
    den = poly_mul({p: 1, 0: -1}, {q: 1, 0: -1})
    quo = {}
    rem = dict(num)
    top = max(den)
    while rem and max(rem) >= top:
        d = max(rem)
        c = rem[d] // den[top]
        assert c * den[top] == rem[d]
        quo[d - top] = c
        for k, v in den.items():
            rem[k + d - top] = rem.get(k + d - top, 0) - c * v
        rem = {k: v for k, v in rem.items() if v}
    assert not rem
    shift = (max(quo) + min(quo)) // 2
    return {k - shift: v for k, v in quo.items()}
