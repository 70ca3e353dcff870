//! Homogeneous bases of constant monomials.

use serde::Serialize;

use crate::ring::GradedMonomial;

/// Which generators may appear in an enumerated basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisFlags {
    /// Largest allowed power of log 2.
    pub max_log2: u32,
    pub include_beta: bool,
    /// Allow log 2 in the same monomial as a zeta or beta value.
    pub log2_mixed: bool,
    /// Restrict to the single monomial `π^degree`.
    pub pi_only: bool,
}

impl Default for BasisFlags {
    fn default() -> Self {
        BasisFlags { max_log2: 1, include_beta: false, log2_mixed: false, pi_only: false }
    }
}

impl BasisFlags {
    pub fn pi_only() -> Self {
        BasisFlags { pi_only: true, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    pub degree: u32,
    pub flags: BasisFlags,
    pub monomials: Vec<GradedMonomial>,
}

impl MonomialBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

/// Multisets of parts `start, start + 2, …` summing to `total`, as
/// nondecreasing lists.
fn stepped_partitions(total: u32, min_part: u32) -> Vec<Vec<u32>> {
    if total == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut part = min_part;
    while part <= total {
        for mut rest in stepped_partitions(total - part, part) {
            rest.insert(0, part);
            out.push(rest);
        }
        part += 2;
    }
    out
}

/// All variable-free monomials of exact `degree` allowed by `flags`, in
/// canonical order.
pub fn enumerate_basis(degree: u32, flags: &BasisFlags) -> MonomialBasis {
    let mut monomials = Vec::new();
    if flags.pi_only {
        monomials.push(GradedMonomial::pi_pow(degree));
    } else {
        for l in 0..=flags.max_log2.min(degree) {
            for z in 0..=degree - l {
                let b_max = if flags.include_beta { degree - l - z } else { 0 };
                for b in 0..=b_max {
                    if l > 0 && z + b > 0 && !flags.log2_mixed {
                        continue;
                    }
                    let pi = degree - l - z - b;
                    for zs in stepped_partitions(z, 3) {
                        for bs in stepped_partitions(b, 2) {
                            let mut m = GradedMonomial::pi_pow(pi);
                            for _ in 0..l {
                                m = m.mul(&GradedMonomial::log2());
                            }
                            for &j in &zs {
                                m = m.mul(&GradedMonomial::zeta(j));
                            }
                            for &k in &bs {
                                m = m.mul(&GradedMonomial::beta(k));
                            }
                            monomials.push(m);
                        }
                    }
                }
            }
        }
    }
    monomials.sort();
    monomials.dedup();
    MonomialBasis { degree, flags: flags.clone(), monomials }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rendered(b: &MonomialBasis) -> Vec<String> {
        b.monomials.iter().map(|m| m.render_plain()).collect()
    }

    #[test]
    fn small_degrees() {
        assert_eq!(rendered(&enumerate_basis(0, &BasisFlags::default())), vec!["1"]);
        let mut three = rendered(&enumerate_basis(3, &BasisFlags::default()));
        three.sort();
        assert_eq!(three, vec!["pi^2*log(2)", "pi^3", "zeta(3)"]);
        assert_eq!(rendered(&enumerate_basis(4, &BasisFlags::pi_only())), vec!["pi^4"]);
    }

    // Brute force over all exponent vectors of the generators up to the degree.
    fn brute_force(degree: u32, flags: &BasisFlags) -> usize {
        let zetas: Vec<u32> = (3..=degree).step_by(2).collect();
        let betas: Vec<u32> = if flags.include_beta { (2..=degree).step_by(2).collect() } else { vec![] };
        let gens: Vec<u32> = zetas.iter().chain(&betas).cloned().collect();
        let mut count = 0;
        let mut exps = vec![0u32; gens.len()];
        loop {
            let zb: u32 = gens.iter().zip(&exps).map(|(g, e)| g * e).sum();
            if zb <= degree {
                for l in 0..=flags.max_log2 {
                    if zb + l <= degree && !(l > 0 && zb > 0 && !flags.log2_mixed) {
                        count += 1;
                    }
                }
            }
            let mut i = 0;
            loop {
                if i == exps.len() {
                    return count;
                }
                exps[i] += 1;
                if exps[i] * gens[i] <= degree {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn cardinality_matches_brute_force() {
        let variants = [
            BasisFlags::default(),
            BasisFlags { include_beta: true, ..BasisFlags::default() },
            BasisFlags { include_beta: true, log2_mixed: true, max_log2: 3, pi_only: false },
        ];
        for flags in &variants {
            for d in 0..=12 {
                let b = enumerate_basis(d, flags);
                assert_eq!(b.len(), brute_force(d, flags), "degree {d}, {flags:?}");
                assert!(b.monomials.iter().all(|m| m.degree() == d));
            }
        }
    }
}
