//! Exact linear algebra over GF(p^n), sized for certificate solving: a
//! handful of unknowns against a few thousand equations.

use crate::gf::{Field, FieldElement};

/// Affine solution set of A x = b: every solution is `particular` plus a
/// combination of the `nullspace` basis vectors.
#[derive(Debug, Clone)]
pub struct LinearSolution {
    pub particular: Vec<FieldElement>,
    pub nullspace: Vec<Vec<FieldElement>>,
}

impl LinearSolution {
    pub fn is_unique(&self) -> bool {
        self.nullspace.is_empty()
    }

    /// Searches the affine solution set for a vector whose `coord`-th entry
    /// is nonzero; at most one basis adjustment is needed.
    pub fn with_nonzero_coord(&self, field: &Field, coord: usize) -> Option<Vec<FieldElement>> {
        if !self.particular[coord].is_zero() {
            return Some(self.particular.clone());
        }
        for basis in &self.nullspace {
            if !basis[coord].is_zero() {
                let sol = self
                    .particular
                    .iter()
                    .zip(basis)
                    .map(|(&a, &b)| field.add(a, b))
                    .collect();
                return Some(sol);
            }
        }
        None
    }
}

/// Reduced row echelon solve; returns None when the system is inconsistent.
/// Free variables are zero in the particular solution.
pub fn solve(
    field: &Field,
    rows: &[Vec<FieldElement>],
    rhs: &[FieldElement],
) -> Option<LinearSolution> {
    assert_eq!(rows.len(), rhs.len(), "matrix and right-hand side disagree");
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<u32>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            assert_eq!(r.len(), ncols, "ragged matrix");
            let mut row: Vec<u32> = r
                .iter()
                .map(|&c| {
                    field.try_check(c).expect("entry from a different field");
                    c.code()
                })
                .collect();
            field.try_check(b).expect("rhs from a different field");
            row.push(b.code());
            row
        })
        .collect();

    let nrows = m.len();
    let mut pivot_col_of_row = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pr) = (rank..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = field.inv(field.elem(m[rank][col])).unwrap().code();
        for v in m[rank].iter_mut() {
            *v = field.mul_code(*v, inv);
        }
        for r in 0..nrows {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col];
                for k in col..=ncols {
                    let sub = field.neg_code(field.mul_code(factor, m[rank][k]));
                    m[r][k] = field.add_code(m[r][k], sub);
                }
            }
        }
        pivot_col_of_row.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }

    for row in m.iter().skip(rank) {
        if row[ncols] != 0 {
            return None;
        }
    }

    let mut particular = vec![field.zero(); ncols];
    for (r, &col) in pivot_col_of_row.iter().enumerate() {
        particular[col] = field.elem(m[r][ncols]);
    }

    let mut is_pivot = vec![false; ncols];
    for &c in &pivot_col_of_row {
        is_pivot[c] = true;
    }
    let mut nullspace = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (r, &col) in pivot_col_of_row.iter().enumerate() {
            v[col] = field.neg(field.elem(m[r][free]));
        }
        nullspace.push(v);
    }

    Some(LinearSolution {
        particular,
        nullspace,
    })
}
