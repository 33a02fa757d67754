# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: edge-colored canonical labeling and the exact
chain-order integration DP.  Mirrors forestvol._kernel_py function for
function; both backends must produce identical outputs for identical
inputs (tests enforce this).

Small bookkeeping integers (masks, bit positions, exponents) are C-typed;
polynomial coefficients and packed exponent keys stay Python ints because
they routinely exceed 64 bits.
"""

from math import gcd, lcm

BACKEND = "c"

DEF SHIFT = 6
DEF EMASK = 63


def canon_key(int n, bytes flat):
    if n == 0:
        return b"\x00"
    if n == 1:
        return b"\x01"
    cdef int i, v
    rows = [flat[i * n : (i + 1) * n] for i in range(n)]
    nbrs = [[v for v in range(n) if rows[i][v]] for i in range(n)]

    def refine(list colors):
        cdef int w, e
        while True:
            sigs = []
            for w in range(n):
                row = rows[w]
                entries = sorted((row[u] << 16) | colors[u] for u in nbrs[w])
                sig = colors[w].to_bytes(3, "big") + b"".join(
                    e.to_bytes(3, "big") for e in entries
                )
                sigs.append(sig)
            index = {s: j for j, s in enumerate(sorted(set(sigs)))}
            new = [index[s] for s in sigs]
            # sig leads with the old color, so ids are stable at a fixed point
            if new == colors:
                return colors
            colors = new

    best = [None]

    def leaf_key(list colors):
        cdef int a, b
        order = sorted(range(n), key=colors.__getitem__)
        tri = bytearray()
        for a in range(n):
            ri = rows[order[a]]
            for b in range(a + 1, n):
                tri.append(ri[order[b]])
        return bytes(tri)

    def search(list colors):
        cdef int c, w, target
        colors = refine(colors)
        counts = [0] * (n + 1)
        for c in colors:
            counts[c] += 1
        target = -1
        for c in range(n):
            if counts[c] > 1:
                target = c
                break
        if target < 0:
            key = leaf_key(colors)
            if best[0] is None or key < best[0]:
                best[0] = key
            return
        for w in range(n):
            if colors[w] == target:
                child = colors.copy()
                child[w] = n  # fresh id: existing ids are < n
                search(child)

    search([0] * n)
    assert best[0] is not None
    return bytes([n]) + best[0]


def poset_integral_packed(
    int k,
    tuple preds,
    dict terms,
    den,
    a_num,
    a_den,
    b_num,
    b_den,
):
    """Exact F_S(a, b); returns an unreduced (numerator, denominator) pair."""
    if k > 60:
        raise OverflowError("poset too large for packed masks")
    cdef int mpos = SHIFT * k
    cdef int size, u
    cdef unsigned long long umask, rest, low, c, r, limit
    cdef unsigned long long[60] cpreds
    for u in range(k):
        cpreds[u] = preds[u]
    layer = {0: (dict(terms), den)}
    limit = 1ULL << k
    for size in range(1, k + 1):
        nxt = {}
        # Gosper's hack, ascending
        umask = (1ULL << size) - 1
        while umask < limit:
            acc = {}
            acc_den = 1
            rest = umask
            while rest:
                low = rest & (0 - rest)
                rest ^= low
                u = _bit_index(low)
                if cpreds[u] & umask:
                    continue  # not minimal in umask
                prev_poly, prev_den = layer[umask ^ low]
                poly, pden = _integrate_step(
                    prev_poly, prev_den, u, mpos, b_num, b_den
                )
                acc, acc_den = _poly_add(acc, acc_den, poly, pden)
            nxt[umask] = (acc, acc_den)
            c = umask & (0 - umask)
            r = umask + c
            umask = (((r ^ umask) >> 2) // c) | r
        layer = nxt
    poly, pden = layer[(1ULL << k) - 1]
    return _eval_m(poly, pden, mpos, a_num, a_den)


cdef inline int _bit_index(unsigned long long low):
    cdef int i = 0
    while not (low & 1ULL):
        low >>= 1
        i += 1
    return i


cdef _integrate_step(dict poly, den, int u, int mpos, b_num, b_den):
    """Int_m^b poly[m := x_u] dx_u, with m re-entering at slot mpos/6."""
    cdef int upos = SHIFT * u
    cdef int e, em, max_e
    # substitute m -> x_u, take the antiderivative in x_u
    # (shifts go through Python objects: packed keys exceed 64 bits)
    shifted = {}
    div_lcm = 1
    for key, num in poly.items():
        em = (key >> mpos) & EMASK
        if em:
            key = key - ((<object> em) << mpos) + ((<object> em) << upos)
        e = ((key >> upos) & EMASK) + 1
        if e >= EMASK:
            raise OverflowError("exponent field overflow")
        key = key + ((<object> 1) << upos)
        old = shifted.get(key)
        if old is None:
            shifted[key] = (num, e)
            div_lcm = lcm(div_lcm, e)
        else:
            # same key can arise twice after the m shift; e matches the key
            shifted[key] = (old[0] + num, e)
    out = {}
    if b_num == 0:
        # upper evaluation vanishes termwise (every term has x_u)
        out_den = den * div_lcm
        for key, pair in shifted.items():
            num = pair[0]
            e = pair[1]
            scaled = num * (div_lcm // e)
            mk = key - ((<object> e) << upos) + ((<object> e) << mpos)
            prev = out.get(mk, 0)
            val = prev - scaled
            if val:
                out[mk] = val
            elif prev:
                del out[mk]
        return out, out_den
    max_e = 0
    for pair in shifted.values():
        e = pair[1]
        if e > max_e:
            max_e = e
    out_den = den * div_lcm * (b_den ** max_e)
    bpow_num = [b_num ** e for e in range(max_e + 1)]
    bpow_den = [b_den ** (max_e - e) for e in range(max_e + 1)]
    bden_maxe = b_den ** max_e
    for key, pair in shifted.items():
        num = pair[0]
        e = pair[1]
        scaled = num * (div_lcm // e)
        base = key - ((<object> e) << upos)
        # + at x_u = b
        val = out.get(base, 0) + scaled * bpow_num[e] * bpow_den[e]
        if val:
            out[base] = val
        elif base in out:
            del out[base]
        # - at x_u = m
        mk = base + ((<object> e) << mpos)
        val = out.get(mk, 0) - scaled * bden_maxe
        if val:
            out[mk] = val
        elif mk in out:
            del out[mk]
    return out, out_den


cdef _poly_add(dict p1, d1, dict p2, d2):
    if not p1:
        return p2, d2
    if not p2:
        return p1, d1
    d = lcm(d1, d2)
    s1 = d // d1
    s2 = d // d2
    out = {k: v * s1 for k, v in p1.items()} if s1 != 1 else dict(p1)
    for k, v in p2.items():
        val = out.get(k, 0) + v * s2
        if val:
            out[k] = val
        elif k in out:
            del out[k]
    return out, d


cdef _eval_m(dict poly, den, int mpos, a_num, a_den):
    if not poly:
        return 0, 1
    cdef int max_e = 0
    cdef int e
    for key in poly:
        e = key >> mpos
        if e > max_e:
            max_e = e
    total = 0
    for key, num in poly.items():
        e = key >> mpos
        if key != ((<object> e) << mpos):
            raise ValueError("unintegrated variable at final evaluation")
        total += num * (a_num ** e) * (a_den ** (max_e - e))
    d = den * (a_den ** max_e)
    g = gcd(total, d)
    if g:
        total //= g
        d //= g
    return total, d
