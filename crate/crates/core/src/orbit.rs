//! Diagonal-rescaling orbits of coefficient vectors.
//!
//! Substituting x -> λx in a curve multiplies the coefficient of x^e by
//! λ^e, and renormalising after y -> μy multiplies every coefficient by a
//! fixed power of μ. On discrete logarithms both substitutions act by
//! translation, so the coefficient vectors of equivalent curves form cosets
//! of the subgroup of (Z/(q-1))^3 generated by the exponent vectors. A
//! Hermite basis of the corresponding integer lattice turns each coset into
//! a unique representative inside a box, which is what the classification
//! harnesses enumerate.

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The result is upper triangular with positive diagonal and with every
/// entry above a pivot reduced into `[0, pivot)`. The input must span a
/// finite-index sublattice of Z^3; callers guarantee this by always
/// including the scaled identity rows.
pub fn hermite_normal_form(rows: &[[i64; 3]]) -> [[i64; 3]; 3] {
    let mut work: Vec<[i64; 3]> = rows.to_vec();
    let mut basis = [[0i64; 3]; 3];
    let mut top = 0usize;
    for col in 0..3 {
        loop {
            let pivot = work[top..]
                .iter()
                .enumerate()
                .filter(|(_, r)| r[col] != 0)
                .min_by_key(|(_, r)| r[col].abs())
                .map(|(i, _)| top + i)
                .expect("lattice has full rank");
            work.swap(top, pivot);
            let mut done = true;
            for i in top + 1..work.len() {
                if work[i][col] != 0 {
                    let k = work[i][col].div_euclid(work[top][col]);
                    for j in 0..3 {
                        work[i][j] -= k * work[top][j];
                    }
                    done &= work[i][col] == 0;
                }
            }
            if done {
                break;
            }
        }
        if work[top][col] < 0 {
            for j in 0..3 {
                work[top][j] = -work[top][j];
            }
        }
        basis[col] = work[top];
        top += 1;
    }
    for i in (0..3).rev() {
        for j in i + 1..3 {
            let k = basis[i][j].div_euclid(basis[j][j]);
            for l in 0..3 {
                basis[i][l] -= k * basis[j][l];
            }
        }
    }
    basis
}

/// Orbit decomposition of (Z/modulus)^3 under translations by `generators`.
#[derive(Clone, Debug)]
pub struct DiagonalOrbits {
    modulus: u64,
    generators: Vec<[u64; 3]>,
    basis: [[i64; 3]; 3],
}

impl DiagonalOrbits {
    /// Orbits of the translation action generated by `generators` on
    /// (Z/modulus)^3. Generators are reduced mod `modulus`.
    pub fn new(modulus: u64, generators: &[[u64; 3]]) -> DiagonalOrbits {
        assert!(modulus > 0, "modulus must be positive");
        let m = modulus as i64;
        let mut rows: Vec<[i64; 3]> = vec![[m, 0, 0], [0, m, 0], [0, 0, m]];
        let reduced: Vec<[u64; 3]> = generators
            .iter()
            .map(|g| [g[0] % modulus, g[1] % modulus, g[2] % modulus])
            .collect();
        for g in &reduced {
            rows.push([g[0] as i64, g[1] as i64, g[2] as i64]);
        }
        let basis = hermite_normal_form(&rows);
        DiagonalOrbits {
            modulus,
            generators: reduced,
            basis,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Hermite basis of the orbit lattice (includes the modulus relations).
    pub fn basis(&self) -> [[i64; 3]; 3] {
        self.basis
    }

    /// Number of orbits; equals the determinant of the Hermite basis.
    pub fn num_orbits(&self) -> u64 {
        (self.basis[0][0] * self.basis[1][1] * self.basis[2][2]) as u64
    }

    /// Common size of every orbit. Orbits are cosets of one subgroup, so
    /// they all have the same cardinality.
    pub fn orbit_size(&self) -> u64 {
        let cube = (self.modulus as u128).pow(3);
        (cube / self.num_orbits() as u128) as u64
    }

    /// Unique representative of the orbit of `v`: reduce top-down against
    /// the triangular basis so each coordinate lands in `[0, pivot)`.
    pub fn canonicalize(&self, v: [u64; 3]) -> [u64; 3] {
        let mut r = [0i64; 3];
        for i in 0..3 {
            r[i] = (v[i] % self.modulus) as i64;
        }
        for i in 0..3 {
            let k = r[i].div_euclid(self.basis[i][i]);
            for j in i..3 {
                r[j] -= k * self.basis[i][j];
            }
        }
        [r[0] as u64, r[1] as u64, r[2] as u64]
    }

    pub fn same_orbit(&self, u: [u64; 3], v: [u64; 3]) -> bool {
        self.canonicalize(u) == self.canonicalize(v)
    }

    /// Iterator over the canonical representatives (the Hermite box).
    pub fn representatives(&self) -> Representatives {
        Representatives {
            limits: [
                self.basis[0][0] as u64,
                self.basis[1][1] as u64,
                self.basis[2][2] as u64,
            ],
            next: Some([0, 0, 0]),
        }
    }

    /// Full orbit of `v`, sorted and deduplicated. Cost is quadratic in the
    /// modulus; intended for expanding the handful of classification hits,
    /// not for bulk enumeration.
    pub fn orbit_of(&self, v: [u64; 3]) -> Vec<[u64; 3]> {
        let m = self.modulus;
        let start = [v[0] % m, v[1] % m, v[2] % m];
        let mut seen = std::collections::BTreeSet::new();
        let mut frontier = vec![start];
        seen.insert(start);
        while let Some(u) = frontier.pop() {
            for g in &self.generators {
                let w = [(u[0] + g[0]) % m, (u[1] + g[1]) % m, (u[2] + g[2]) % m];
                if seen.insert(w) {
                    frontier.push(w);
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// Odometer over the Hermite box of canonical representatives.
pub struct Representatives {
    limits: [u64; 3],
    next: Option<[u64; 3]>,
}

impl Iterator for Representatives {
    type Item = [u64; 3];

    fn next(&mut self) -> Option<[u64; 3]> {
        let cur = self.next?;
        let mut succ = cur;
        let mut i = 3;
        loop {
            if i == 0 {
                self.next = None;
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.limits[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_basis_of_known_lattice() {
        let basis = hermite_normal_form(&[[8, 0, 0], [0, 8, 0], [0, 0, 8], [2, 4, 6]]);
        assert_eq!(basis, [[2, 4, 6], [0, 8, 0], [0, 0, 8]]);

        let identity = hermite_normal_form(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(identity, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]);

        // Negative and redundant rows reduce to the same basis.
        let messy =
            hermite_normal_form(&[[8, 0, 0], [0, 8, 0], [0, 0, 8], [-2, -4, -6], [2, 12, 6]]);
        assert_eq!(messy, [[2, 4, 6], [0, 8, 0], [0, 0, 8]]);
    }

    #[test]
    fn orbit_counts_match_group_order() {
        // One generator of additive order 4 in (Z/8)^3.
        let orbits = DiagonalOrbits::new(8, &[[2, 4, 6]]);
        assert_eq!(orbits.num_orbits(), 128);
        assert_eq!(orbits.orbit_size(), 4);
        assert_eq!(orbits.representatives().count(), 128);
        assert_eq!(orbits.orbit_of([0, 0, 0]).len(), 4);
        assert_eq!(
            orbits.orbit_of([0, 0, 0]),
            vec![[0, 0, 0], [2, 4, 6], [4, 0, 4], [6, 4, 2]]
        );
    }

    #[test]
    fn representatives_are_canonical_and_partition() {
        let orbits = DiagonalOrbits::new(6, &[[1, 2, 3], [4, 4, 4]]);
        let reps: Vec<[u64; 3]> = orbits.representatives().collect();
        assert_eq!(reps.len() as u64, orbits.num_orbits());
        for rep in &reps {
            assert_eq!(orbits.canonicalize(*rep), *rep);
        }
        assert_eq!(orbits.num_orbits() * orbits.orbit_size(), 6 * 6 * 6);

        // Exhaustive check: every vector canonicalizes into the box, the
        // canonical form is orbit-invariant, and orbit sizes are uniform.
        for a in 0..6 {
            for b in 0..6 {
                for c in 0..6 {
                    let v = [a, b, c];
                    let canon = orbits.canonicalize(v);
                    assert!(reps.contains(&canon));
                    let orbit = orbits.orbit_of(v);
                    assert_eq!(orbit.len() as u64, orbits.orbit_size());
                    assert!(orbit.contains(&canon));
                    for w in orbit {
                        assert_eq!(orbits.canonicalize(w), canon);
                        assert!(orbits.same_orbit(v, w));
                    }
                }
            }
        }
    }

    #[test]
    fn translation_invariance_of_canonical_forms() {
        let orbits = DiagonalOrbits::new(15, &[[10, 5, 0], [15, 15, 15]]);
        // The second generator is trivial mod 15, so orbits follow the
        // first generator alone, which has additive order 3.
        assert_eq!(orbits.orbit_size(), 3);
        for v in [[0, 0, 0], [7, 3, 11], [14, 14, 1]] {
            let shifted = [(v[0] + 10) % 15, (v[1] + 5) % 15, v[2]];
            assert_eq!(orbits.canonicalize(v), orbits.canonicalize(shifted));
        }
    }
}
