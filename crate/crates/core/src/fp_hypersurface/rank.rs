//! Rank of a set of sparse vectors over `F_p`.
//!
//! All backends do incremental echelon reduction on the lowest nonzero
//! column: a row is reduced against stored pivots until its lowest column
//! has no pivot (it becomes one) or it vanishes. Feeding rows in order of
//! their lowest column makes the common, already-triangular case free.

/// Sparse row: `(column, value)` pairs, strictly increasing columns, values
/// in `1..p`.
pub type SparseRow = Vec<(u32, u32)>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RankBackend {
    /// Bit-packed rows for `p = 2`, byte rows for small odd `p`, sparse rows
    /// when a block is too wide for a dense representation.
    #[default]
    Auto,
    /// Dense rows: one bit per entry for `p = 2`, one byte otherwise.
    Dense,
    Sparse,
}

const DENSE_BITS_MAX_COLS: usize = 1 << 15;
const DENSE_BYTES_MAX_COLS: usize = 1 << 12;

/// Rank of `rows` (columns `< ncols`) over `F_p`.
pub fn rank(rows: &mut [SparseRow], ncols: usize, p: u64, backend: RankBackend) -> usize {
    rows.sort_by_key(|r| r.first().map_or(u32::MAX, |e| e.0));
    let use_dense = match backend {
        RankBackend::Dense => true,
        RankBackend::Sparse => false,
        RankBackend::Auto => {
            if p == 2 {
                ncols <= DENSE_BITS_MAX_COLS
            } else {
                ncols <= DENSE_BYTES_MAX_COLS && p <= 251
            }
        }
    };
    match (use_dense, p) {
        (true, 2) => rank_bits(rows, ncols),
        (true, _) if p <= 251 => rank_bytes(rows, ncols, p as u32),
        _ => rank_sparse(rows, ncols, p),
    }
}

const NO_PIVOT: u32 = u32::MAX;

fn rank_bits(rows: &[SparseRow], ncols: usize) -> usize {
    let words = ncols.div_ceil(64);
    let mut pivot_of = vec![NO_PIVOT; ncols];
    let mut store: Vec<u64> = Vec::new();
    let mut buf = vec![0u64; words];
    let mut rank = 0usize;
    for row in rows {
        if row.is_empty() {
            continue;
        }
        buf.iter_mut().for_each(|w| *w = 0);
        for &(c, v) in row {
            if v & 1 == 1 {
                buf[c as usize / 64] ^= 1 << (c % 64);
            }
        }
        let mut w = row[0].0 as usize / 64;
        loop {
            while w < words && buf[w] == 0 {
                w += 1;
            }
            if w == words {
                break;
            }
            let c = w * 64 + buf[w].trailing_zeros() as usize;
            let piv = pivot_of[c];
            if piv == NO_PIVOT {
                pivot_of[c] = rank as u32;
                store.extend_from_slice(&buf);
                rank += 1;
                break;
            }
            let base = piv as usize * words;
            for (dst, src) in buf[w..].iter_mut().zip(&store[base + w..base + words]) {
                *dst ^= *src;
            }
        }
    }
    rank
}

fn rank_bytes(rows: &[SparseRow], ncols: usize, p: u32) -> usize {
    let mut pivot_of = vec![NO_PIVOT; ncols];
    let mut store: Vec<u8> = Vec::new();
    let mut buf = vec![0u8; ncols];
    let mut rank = 0usize;
    let inv = inverses(p);
    for row in rows {
        if row.is_empty() {
            continue;
        }
        buf.iter_mut().for_each(|x| *x = 0);
        for &(c, v) in row {
            buf[c as usize] = (v % p) as u8;
        }
        let mut c = row[0].0 as usize;
        loop {
            while c < ncols && buf[c] == 0 {
                c += 1;
            }
            if c == ncols {
                break;
            }
            let piv = pivot_of[c];
            if piv == NO_PIVOT {
                let scale = inv[buf[c] as usize];
                for x in buf[c..].iter_mut() {
                    *x = ((*x as u32 * scale) % p) as u8;
                }
                pivot_of[c] = rank as u32;
                store.extend_from_slice(&buf);
                rank += 1;
                break;
            }
            let factor = p - buf[c] as u32;
            let base = piv as usize * ncols;
            for (dst, &src) in buf[c..].iter_mut().zip(&store[base + c..base + ncols]) {
                *dst = ((*dst as u32 + factor * src as u32) % p) as u8;
            }
        }
    }
    rank
}

fn rank_sparse(rows: &[SparseRow], ncols: usize, p: u64) -> usize {
    let mut pivot_of = vec![NO_PIVOT; ncols];
    let mut store: Vec<SparseRow> = Vec::new();
    for row in rows {
        let mut cur: SparseRow = row.iter().copied().filter(|&(_, v)| !(v as u64).is_multiple_of(p)).collect();
        while let Some(&(c, v)) = cur.first() {
            let piv = pivot_of[c as usize];
            if piv == NO_PIVOT {
                let scale = modinv(v as u64, p);
                for e in cur.iter_mut() {
                    e.1 = (e.1 as u64 * scale % p) as u32;
                }
                pivot_of[c as usize] = store.len() as u32;
                store.push(cur);
                break;
            }
            let factor = p - v as u64;
            cur = axpy(&cur, &store[piv as usize], factor, p);
        }
    }
    store.len()
}

/// `a + factor * b` over `F_p`, dropping zeros.
fn axpy(a: &SparseRow, b: &SparseRow, factor: u64, p: u64) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(u32::MAX, |e| e.0);
        let cb = b.get(j).map_or(u32::MAX, |e| e.0);
        if ca < cb {
            out.push(a[i]);
            i += 1;
        } else if cb < ca {
            out.push((cb, (factor * b[j].1 as u64 % p) as u32));
            j += 1;
        } else {
            let v = (a[i].1 as u64 + factor * b[j].1 as u64) % p;
            if v != 0 {
                out.push((ca, v as u32));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn modinv(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2)
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn inverses(p: u32) -> Vec<u32> {
    let mut inv = vec![0u32; p as usize];
    for (a, slot) in inv.iter_mut().enumerate().skip(1) {
        *slot = modinv(a as u64, p as u64) as u32;
    }
    inv
}
