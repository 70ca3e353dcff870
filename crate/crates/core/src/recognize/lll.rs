//! LLL lattice reduction over exact integers.

use rug::{Integer, Rational};

fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    a.iter().zip(b).map(|(x, y)| Integer::from(x * y)).sum()
}

fn dot_q(a: &[Rational], b: &[Integer]) -> Rational {
    a.iter().zip(b).map(|(x, y)| Rational::from(x * y)).sum()
}

fn dot_qq(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| Rational::from(x * y)).sum()
}

struct GramSchmidt {
    mu: Vec<Vec<Rational>>,
    norms: Vec<Rational>,
}

fn gram_schmidt(b: &[Vec<Integer>]) -> GramSchmidt {
    let n = b.len();
    let mut stars: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![Rational::new(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let mut s: Vec<Rational> = b[i].iter().map(Rational::from).collect();
        for j in 0..i {
            let m = if norms[j] == 0 { Rational::new() } else { dot_q(&stars[j], &b[i]) / &norms[j] };
            for (sk, tk) in s.iter_mut().zip(&stars[j]) {
                *sk -= Rational::from(&m * tk);
            }
            mu[i][j] = m;
        }
        norms.push(dot_qq(&s, &s));
        stars.push(s);
    }
    GramSchmidt { mu, norms }
}

// Gram-Schmidt data after exchanging rows k - 1 and k.
fn swap_update(gs: &mut GramSchmidt, k: usize) {
    let n = gs.norms.len();
    let mu = gs.mu[k][k - 1].clone();
    let b = &gs.norms[k] + Rational::from(mu.square_ref()) * &gs.norms[k - 1];
    if b == 0 {
        return;
    }
    let new_mu = Rational::from(&mu * &gs.norms[k - 1]) / &b;
    let new_norm_k = Rational::from(&gs.norms[k - 1] * &gs.norms[k]) / &b;
    gs.norms[k - 1] = b;
    gs.norms[k] = new_norm_k;
    gs.mu[k][k - 1] = new_mu;
    for j in 0..k - 1 {
        let t = std::mem::take(&mut gs.mu[k - 1][j]);
        gs.mu[k - 1][j] = std::mem::replace(&mut gs.mu[k][j], t);
    }
    for i in k + 1..n {
        let t = gs.mu[i][k].clone();
        let upper = &gs.mu[i][k - 1] - Rational::from(&mu * &t);
        let lower = t + Rational::from(&gs.mu[k][k - 1] * &upper);
        gs.mu[i][k] = upper;
        gs.mu[i][k - 1] = lower;
    }
}

/// Reduces the rows of `basis` in place with parameter `δ = 99/100`.
pub fn lll_reduce(basis: &mut [Vec<Integer>]) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let delta = Rational::from((99, 100));
    let mut gs = gram_schmidt(basis);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let q = gs.mu[k][j].clone().round().into_numer_denom().0;
            if q != 0 {
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= Integer::from(&q * y);
                }
                for l in 0..j {
                    let t = Rational::from(&q * &gs.mu[j][l]);
                    gs.mu[k][l] -= t;
                }
                gs.mu[k][j] -= &q;
            }
        }
        let mu2 = Rational::from(gs.mu[k][k - 1].square_ref());
        let bound = (delta.clone() - mu2) * &gs.norms[k - 1];
        if gs.norms[k] >= bound {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            swap_update(&mut gs, k);
            k = (k - 1).max(1);
        }
    }
}

pub fn norm2(v: &[Integer]) -> Integer {
    dot(v, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_short_vector() {
        // rows (e_i, 10^6 v_i) with v = (3, 7, -2): relation 2·3 + 0·7 + 3·(-2) = 0.
        let scale = Integer::from(1_000_000);
        let vals = [3, 7, -2];
        let mut b: Vec<Vec<Integer>> = (0..3)
            .map(|i| {
                let mut row = vec![Integer::new(); 4];
                row[i] = Integer::from(1);
                row[3] = Integer::from(&scale * vals[i]);
                row
            })
            .collect();
        lll_reduce(&mut b);
        assert_eq!(b[0][3], 0);
        assert!(norm2(&b[0]) <= 13);
    }

    #[test]
    fn reduced_basis_is_size_reduced() {
        let mut b = vec![
            vec![Integer::from(1), Integer::from(1), Integer::from(1)],
            vec![Integer::from(-1), Integer::from(0), Integer::from(2)],
            vec![Integer::from(3), Integer::from(5), Integer::from(6)],
        ];
        lll_reduce(&mut b);
        let gs = gram_schmidt(&b);
        let half = Rational::from((1, 2));
        for i in 0..3 {
            for j in 0..i {
                assert!(Rational::from(gs.mu[i][j].abs_ref()) <= half);
            }
        }
        // the lattice has determinant 3
        // (0, 1, 0) lies in the lattice
        assert_eq!(norm2(&b[0]), 1);
    }
}
