//! Sublattices of `Z^s` given by generators, with canonical coset
//! representatives.

/// Integer row echelon basis: pivots strictly increasing and positive.
#[derive(Clone, Debug)]
pub(crate) struct Lattice {
    rows: Vec<(usize, Vec<i64>)>,
}

impl Lattice {
    /// Lattice spanned by `m_i - m_0` for the given points.
    pub(crate) fn from_differences<'a>(points: impl IntoIterator<Item = &'a [u32]>) -> Lattice {
        let mut it = points.into_iter();
        let Some(first) = it.next() else {
            return Lattice { rows: Vec::new() };
        };
        let gens: Vec<Vec<i64>> = it
            .map(|m| m.iter().zip(first).map(|(&a, &b)| a as i64 - b as i64).collect())
            .collect();
        Lattice::from_generators(first.len(), gens)
    }

    pub(crate) fn from_generators(dim: usize, mut gens: Vec<Vec<i64>>) -> Lattice {
        let mut rows = Vec::new();
        for col in 0..dim {
            gens.retain(|g| g.iter().any(|&x| x != 0));
            loop {
                let mut live: Vec<usize> = (0..gens.len()).filter(|&i| gens[i][col] != 0).collect();
                if live.is_empty() {
                    break;
                }
                live.sort_by_key(|&i| gens[i][col].abs());
                let piv = live[0];
                if live.len() == 1 {
                    let mut row = gens.swap_remove(piv);
                    if row[col] < 0 {
                        row.iter_mut().for_each(|x| *x = -*x);
                    }
                    rows.push((col, row));
                    break;
                }
                let pivot_row = gens[piv].clone();
                for &i in &live[1..] {
                    let k = gens[i][col].div_euclid(pivot_row[col]);
                    for (x, y) in gens[i].iter_mut().zip(&pivot_row) {
                        *x -= k * y;
                    }
                }
            }
        }
        Lattice { rows }
    }

    #[cfg(test)]
    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Canonical representative of `m + L`: every pivot coordinate lands in
    /// `[0, pivot)`.
    pub(crate) fn reduce(&self, m: &[u32]) -> Vec<i64> {
        let mut v: Vec<i64> = m.iter().map(|&e| e as i64).collect();
        for (c, row) in &self.rows {
            let k = v[*c].div_euclid(row[*c]);
            if k != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= k * y;
                }
            }
        }
        v
    }
}
