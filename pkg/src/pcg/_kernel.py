"""Compiled collection kernel.

Everything here works on plain int64 arrays so numba can compile it. A group
is described by three arrays:

``mods``  relative orders m_i, shape (n,)
``V``     table of normal-form vectors, shape (rows, n):
          V[i] for i < n is the power tail, the normal form of g_i^(m_i);
          V[off[k, j] + e*m_j + s] for j > k is the normal form of
          (g_j^(g_k^e))^s with 0 <= e < m_k and 0 <= s < m_j.
``off``   row offsets into V, shape (n, n), -1 below the diagonal.

With conjugates by every power of g_k tabulated, a letter g_k^e is collected
in one step: if r = P g_k^x S with P before and S after position k, then
r g_k^e = P g_k^(x+e) S^(g_k^e) and S^(g_k^e) is a product of table rows.

Element codes are mixed-radix integers with the first generator most
significant, so numeric order of codes is lexicographic order of exponent
vectors.
"""

import numpy as np
from numba import njit

STACK_SIZE = 1 << 14


def make_workspace():
    return (np.zeros(STACK_SIZE, np.int64), np.zeros(STACK_SIZE, np.int64))


def table_layout(moduli):
    n = len(moduli)
    off = np.full((n, n), -1, dtype=np.int64)
    pos = n
    for k in range(n):
        for j in range(k + 1, n):
            off[k, j] = pos
            pos += moduli[k] * moduli[j]
    return off, pos


@njit(cache=True, nogil=True)
def collect(r, vec, mods, V, off, st_vec, st_pos):
    """In place: r <- r * vec for normal-form vectors r and vec."""
    n = mods.shape[0]
    top = 0
    st_vec[0] = -1
    st_pos[0] = 0
    while top >= 0:
        row = st_vec[top]
        pos = st_pos[top]
        e = 0
        while pos < n:
            if row < 0:
                e = vec[pos]
            else:
                e = V[row, pos]
            if e != 0:
                break
            pos += 1
        if pos == n:
            top -= 1
            continue
        st_pos[top] = pos + 1
        k = pos
        last = n - 1
        while last > k and r[last] == 0:
            last -= 1
        if last == k:
            t = r[k] + e
            if t >= mods[k]:
                r[k] = t - mods[k]
                for j in range(k + 1, n):
                    r[j] = V[k, j]
            else:
                r[k] = t
            continue
        # r = P g_k^x S: push the conjugated suffix, last factor first
        for j in range(last, k, -1):
            s = r[j]
            if s != 0:
                top += 1
                if top >= st_vec.shape[0]:
                    raise RuntimeError("collection stack overflow")
                st_vec[top] = off[k, j] + e * mods[j] + s
                st_pos[top] = 0
                r[j] = 0
        t = r[k] + e
        if t >= mods[k]:
            r[k] = t - mods[k]
            for j in range(k + 1, n):
                r[j] = V[k, j]
        else:
            r[k] = t


@njit(cache=True, nogil=True)
def fill_tables(k, mods, V, off, st_vec, st_pos):
    """Fill the conjugate rows for generator k.

    Needs V[k, :] (power tail), the rows V[off[k, j] + m_j + 1] (g_j^(g_k))
    and every table for generators after k.
    """
    n = mods.shape[0]
    mk = mods[k]
    for e in range(mk):
        for j in range(k + 1, n):
            base = off[k, j] + e * mods[j]
            if e == 0:
                for s in range(mods[j]):
                    for l in range(n):
                        V[base + s, l] = 0
                    V[base + s, j] = s
                continue
            if e >= 2:
                # (g_j^(g_k^(e-1)))^(g_k) = product of (g_l^(g_k))^(x_l)
                prev = off[k, j] + (e - 1) * mods[j] + 1
                r = np.zeros(n, np.int64)
                for l in range(k + 1, n):
                    x = V[prev, l]
                    if x != 0:
                        collect(r, V[off[k, l] + mods[l] + x], mods, V, off, st_vec, st_pos)
                for l in range(n):
                    V[base + 1, l] = r[l]
            for l in range(n):
                V[base, l] = 0
            for s in range(2, mods[j]):
                r = V[base + s - 1].copy()
                collect(r, V[base + 1], mods, V, off, st_vec, st_pos)
                for l in range(n):
                    V[base + s, l] = r[l]


@njit(cache=True, nogil=True)
def collect_raw(r, vec, rep, rows, mods, st_row, st_pos, st_rep):
    """In place: r <- r * vec^rep, one generator letter at a time.

    Works straight from the defining relations: ``rows`` holds the power
    tails (rows[i]), unit vectors (rows[n + i]) and g_j^(g_i) = g_j [g_j, g_i]
    (rows[2n + j*n + i]). Slower than :func:`collect` but it does not rely on
    derived tables, so it is the path used to test consistency.
    """
    n = mods.shape[0]
    if rep <= 0:
        return
    top = 0
    st_row[0] = -1
    st_pos[0] = 0
    st_rep[0] = rep
    while top >= 0:
        row = st_row[top]
        pos = st_pos[top]
        v = 0
        while pos < n:
            if row < 0:
                v = vec[pos]
            else:
                v = rows[row, pos]
            if v != 0:
                break
            pos += 1
        if pos == n:
            st_rep[top] -= 1
            if st_rep[top] == 0:
                top -= 1
            else:
                st_pos[top] = 0
            continue
        st_pos[top] = pos + 1
        k = pos
        e = v
        last = n - 1
        while last > k and r[last] == 0:
            last -= 1
        if last == k:
            s = r[k] + e
            if s >= mods[k]:
                r[k] = s - mods[k]
                top = _push(st_row, st_pos, st_rep, top, k, 1)
            else:
                r[k] = s
            continue
        if e > 1:
            top = _push(st_row, st_pos, st_rep, top, n + k, e - 1)
        base = 2 * n + k
        for j in range(last, k, -1):
            if r[j] != 0:
                top = _push(st_row, st_pos, st_rep, top, base + j * n, r[j])
                r[j] = 0
        s = r[k] + 1
        if s == mods[k]:
            r[k] = 0
            top = _push(st_row, st_pos, st_rep, top, k, 1)
        else:
            r[k] = s


@njit(cache=True, nogil=True)
def _push(st_row, st_pos, st_rep, top, row, rep):
    top += 1
    if top >= st_row.shape[0]:
        raise RuntimeError("collection stack overflow")
    st_row[top] = row
    st_pos[top] = 0
    st_rep[top] = rep
    return top


@njit(cache=True, nogil=True)
def multiply_vec(a, b, mods, V, off, st_vec, st_pos):
    r = a.copy()
    collect(r, b, mods, V, off, st_vec, st_pos)
    return r


@njit(cache=True, nogil=True)
def inverse_vec(a, mods, V, off, st_vec, st_pos):
    n = mods.shape[0]
    r = a.copy()
    y = np.zeros(n, np.int64)
    unit = np.zeros(n, np.int64)
    for i in range(n):
        e = (mods[i] - r[i]) % mods[i]
        if e:
            unit[i] = e
            collect(r, unit, mods, V, off, st_vec, st_pos)
            unit[i] = 0
            y[i] = e
    return y


@njit(cache=True, nogil=True)
def power_vec(a, m, mods, V, off, st_vec, st_pos):
    n = mods.shape[0]
    if m < 0:
        base = inverse_vec(a, mods, V, off, st_vec, st_pos)
        m = -m
    else:
        base = a.copy()
    result = np.zeros(n, np.int64)
    while m > 0:
        if m & 1:
            collect(result, base, mods, V, off, st_vec, st_pos)
        m >>= 1
        if m:
            sq = base.copy()
            collect(sq, base, mods, V, off, st_vec, st_pos)
            base = sq
    return result


@njit(cache=True, nogil=True)
def commutator_vec(a, b, mods, V, off, st_vec, st_pos):
    # [a,b] = a^-1 b^-1 a b = (b a)^-1 (a b)
    ab = multiply_vec(a, b, mods, V, off, st_vec, st_pos)
    ba = multiply_vec(b, a, mods, V, off, st_vec, st_pos)
    r = inverse_vec(ba, mods, V, off, st_vec, st_pos)
    collect(r, ab, mods, V, off, st_vec, st_pos)
    return r


@njit(cache=True, nogil=True)
def is_identity(a):
    for x in a:
        if x != 0:
            return False
    return True


@njit(cache=True, nogil=True)
def order_vec(a, p, mods, V, off, st_vec, st_pos):
    order = 1
    x = a.copy()
    while not is_identity(x):
        x = power_vec(x, p, mods, V, off, st_vec, st_pos)
        order *= p
    return order


# ---------------------------------------------------------------- codes


@njit(cache=True, nogil=True)
def decode(code, mods, out):
    n = mods.shape[0]
    for i in range(n - 1, -1, -1):
        out[i] = code % mods[i]
        code //= mods[i]


@njit(cache=True, nogil=True)
def encode(vec, mods):
    code = 0
    for i in range(mods.shape[0]):
        code = code * mods[i] + vec[i]
    return code


@njit(cache=True, nogil=True)
def bulk_power(codes, m, mods, V, off):
    st_vec, st_pos = np.zeros(STACK_SIZE, np.int64), np.zeros(STACK_SIZE, np.int64)
    out = np.empty(codes.shape[0], np.int64)
    v = np.zeros(mods.shape[0], np.int64)
    for t in range(codes.shape[0]):
        decode(codes[t], mods, v)
        out[t] = encode(power_vec(v, m, mods, V, off, st_vec, st_pos), mods)
    return out


@njit(cache=True, nogil=True)
def bulk_multiply(a_codes, b_codes, mods, V, off):
    st_vec, st_pos = np.zeros(STACK_SIZE, np.int64), np.zeros(STACK_SIZE, np.int64)
    out = np.empty(a_codes.shape[0], np.int64)
    u = np.zeros(mods.shape[0], np.int64)
    v = np.zeros(mods.shape[0], np.int64)
    for t in range(a_codes.shape[0]):
        decode(a_codes[t], mods, u)
        decode(b_codes[t], mods, v)
        collect(u, v, mods, V, off, st_vec, st_pos)
        out[t] = encode(u, mods)
    return out


@njit(cache=True, nogil=True)
def bulk_inverse(codes, mods, V, off):
    st_vec, st_pos = np.zeros(STACK_SIZE, np.int64), np.zeros(STACK_SIZE, np.int64)
    out = np.empty(codes.shape[0], np.int64)
    v = np.zeros(mods.shape[0], np.int64)
    for t in range(codes.shape[0]):
        decode(codes[t], mods, v)
        out[t] = encode(inverse_vec(v, mods, V, off, st_vec, st_pos), mods)
    return out


@njit(cache=True, nogil=True)
def bulk_commutator(a_codes, b_codes, mods, V, off):
    st_vec, st_pos = np.zeros(STACK_SIZE, np.int64), np.zeros(STACK_SIZE, np.int64)
    out = np.empty(a_codes.shape[0], np.int64)
    u = np.zeros(mods.shape[0], np.int64)
    v = np.zeros(mods.shape[0], np.int64)
    for t in range(a_codes.shape[0]):
        decode(a_codes[t], mods, u)
        decode(b_codes[t], mods, v)
        out[t] = encode(commutator_vec(u, v, mods, V, off, st_vec, st_pos), mods)
    return out


@njit(cache=True, nogil=True)
def bulk_order(codes, p, mods, V, off):
    st_vec, st_pos = np.zeros(STACK_SIZE, np.int64), np.zeros(STACK_SIZE, np.int64)
    out = np.empty(codes.shape[0], np.int64)
    v = np.zeros(mods.shape[0], np.int64)
    for t in range(codes.shape[0]):
        decode(codes[t], mods, v)
        out[t] = order_vec(v, p, mods, V, off, st_vec, st_pos)
    return out


@njit(cache=True, nogil=True)
def bulk_conjugate(codes, by_code, mods, V, off):
    """codes[t]^by = by^-1 codes[t] by."""
    st_vec, st_pos = np.zeros(STACK_SIZE, np.int64), np.zeros(STACK_SIZE, np.int64)
    n = mods.shape[0]
    out = np.empty(codes.shape[0], np.int64)
    y = np.zeros(n, np.int64)
    v = np.zeros(n, np.int64)
    decode(by_code, mods, y)
    yinv = inverse_vec(y, mods, V, off, st_vec, st_pos)
    for t in range(codes.shape[0]):
        decode(codes[t], mods, v)
        r = yinv.copy()
        collect(r, v, mods, V, off, st_vec, st_pos)
        collect(r, y, mods, V, off, st_vec, st_pos)
        out[t] = encode(r, mods)
    return out


@njit(cache=True, nogil=True)
def left_multiply_all(x_code, codes, mods, V, off):
    """x * codes[t] for every t."""
    st_vec, st_pos = np.zeros(STACK_SIZE, np.int64), np.zeros(STACK_SIZE, np.int64)
    n = mods.shape[0]
    out = np.empty(codes.shape[0], np.int64)
    x = np.zeros(n, np.int64)
    v = np.zeros(n, np.int64)
    decode(x_code, mods, x)
    for t in range(codes.shape[0]):
        decode(codes[t], mods, v)
        r = x.copy()
        collect(r, v, mods, V, off, st_vec, st_pos)
        out[t] = encode(r, mods)
    return out


@njit(cache=True, nogil=True)
def right_multiply_all(codes, y_code, mods, V, off):
    """codes[t] * y for every t."""
    st_vec, st_pos = np.zeros(STACK_SIZE, np.int64), np.zeros(STACK_SIZE, np.int64)
    n = mods.shape[0]
    out = np.empty(codes.shape[0], np.int64)
    y = np.zeros(n, np.int64)
    v = np.zeros(n, np.int64)
    decode(y_code, mods, y)
    for t in range(codes.shape[0]):
        decode(codes[t], mods, v)
        collect(v, y, mods, V, off, st_vec, st_pos)
        out[t] = encode(v, mods)
    return out


# ------------------------------------------------------- subgroup sifting


@njit(cache=True, nogil=True)
def coset_reps(codes, where, hpow, p, mods, V, off):
    """Canonical representative of the left coset x W for each code x.

    W is given by an induced sequence over the refined series: ``where[i, t]``
    is the index of the sequence element whose leading term is the digit
    p^t of coordinate i (or -1), and ``hpow[h, c]`` is that element raised to
    the power -c. A representative is the identity exactly when x lies in W.
    """
    st_vec, st_pos = np.zeros(STACK_SIZE, np.int64), np.zeros(STACK_SIZE, np.int64)
    n = mods.shape[0]
    out = np.empty(codes.shape[0], np.int64)
    x = np.zeros(n, np.int64)
    for t in range(codes.shape[0]):
        decode(codes[t], mods, x)
        for i in range(n):
            pt = 1
            k = 0
            while pt < mods[i]:
                h = where[i, k]
                if h >= 0:
                    c = (x[i] // pt) % p
                    if c != 0:
                        collect(x, hpow[h, c], mods, V, off, st_vec, st_pos)
                pt *= p
                k += 1
        out[t] = encode(x, mods)
    return out


# ------------------------------------------------------------ pair scans


@njit(cache=True, nogil=True)
def scan_semi_pairs(a_codes, b_codes, pa_inv, pb, q, limit, mods, V, off):
    """Pairs (a, b) where exactly one of (ab)^q = 1 and a^q b^q = 1 holds.

    ``pa_inv[s]`` is the code of (a_s^q)^-1 and ``pb[t]`` the code of b_t^q,
    so a^q b^q = 1 iff pb[t] == pa_inv[s]. Scans in the given order and stops
    after ``limit`` hits. Returns (hits, direction) where direction is 1 when
    (ab)^q = 1 but a^q b^q != 1 and 2 for the converse.
    """
    st_vec, st_pos = np.zeros(STACK_SIZE, np.int64), np.zeros(STACK_SIZE, np.int64)
    n = mods.shape[0]
    hits = np.empty((limit, 2), np.int64)
    kind = np.empty(limit, np.int64)
    found = 0
    u = np.zeros(n, np.int64)
    v = np.zeros(n, np.int64)
    for s in range(a_codes.shape[0]):
        decode(a_codes[s], mods, u)
        for t in range(b_codes.shape[0]):
            decode(b_codes[t], mods, v)
            ab = multiply_vec(u, v, mods, V, off, st_vec, st_pos)
            left = is_identity(power_vec(ab, q, mods, V, off, st_vec, st_pos))
            right = pb[t] == pa_inv[s]
            if left != right:
                hits[found, 0] = a_codes[s]
                hits[found, 1] = b_codes[t]
                kind[found] = 1 if left else 2
                found += 1
                if found == limit:
                    return hits[:found], kind[:found]
    return hits[:found], kind[:found]


@njit(cache=True, nogil=True)
def scan_semi_table(a_codes, b_codes, powers, inv_powers, limit, mods, V, off):
    """Definitional semi check with a full power table ``powers[code]``.

    Same output as :func:`scan_semi_pairs`; one multiplication per pair.
    """
    st_vec, st_pos = np.zeros(STACK_SIZE, np.int64), np.zeros(STACK_SIZE, np.int64)
    n = mods.shape[0]
    hits = np.empty((limit, 2), np.int64)
    kind = np.empty(limit, np.int64)
    found = 0
    u = np.zeros(n, np.int64)
    v = np.zeros(n, np.int64)
    for s in range(a_codes.shape[0]):
        a = a_codes[s]
        for t in range(b_codes.shape[0]):
            b = b_codes[t]
            decode(a, mods, u)
            decode(b, mods, v)
            collect(u, v, mods, V, off, st_vec, st_pos)
            left = powers[encode(u, mods)] == 0
            right = powers[b] == inv_powers[a]
            if left != right:
                hits[found, 0] = a
                hits[found, 1] = b
                kind[found] = 1 if left else 2
                found += 1
                if found == limit:
                    return hits[:found], kind[:found]
    return hits[:found], kind[:found]


@njit(cache=True, nogil=True)
def scan_p_abelian(a_codes, b_codes, powers, p, limit, mods, V, off):
    """Pairs with (ab)^p != a^p b^p, given ``powers[code]`` = x^p."""
    st_vec, st_pos = np.zeros(STACK_SIZE, np.int64), np.zeros(STACK_SIZE, np.int64)
    n = mods.shape[0]
    hits = np.empty((limit, 2), np.int64)
    found = 0
    u = np.zeros(n, np.int64)
    v = np.zeros(n, np.int64)
    for s in range(a_codes.shape[0]):
        a = a_codes[s]
        for t in range(b_codes.shape[0]):
            b = b_codes[t]
            decode(a, mods, u)
            decode(b, mods, v)
            collect(u, v, mods, V, off, st_vec, st_pos)
            lhs = powers[encode(u, mods)]
            decode(powers[a], mods, u)
            decode(powers[b], mods, v)
            collect(u, v, mods, V, off, st_vec, st_pos)
            if encode(u, mods) != lhs:
                hits[found, 0] = a
                hits[found, 1] = b
                found += 1
                if found == limit:
                    return hits[:found]
    return hits[:found]
