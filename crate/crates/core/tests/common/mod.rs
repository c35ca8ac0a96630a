//! Oracles shared by the integration tests. They recompute quantities from
//! first principles without going through the library's diagram code.
#![allow(dead_code)]

use abshift::{Diagram, Params, Word};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

/// `(1/2, 5/2)`, the running example.
pub fn params() -> Params {
    Params::rational(1, 2, 5, 2).unwrap()
}

pub fn diagram(n: usize) -> Diagram {
    Diagram::build(&params(), n).unwrap()
}

/// Admissibility by backward cylinder intersection in x-space:
/// `C_w = I_{w_1} ∩ T_{w_1}^{-1}(C_{w_2…})`, nonempty iff `w` occurs.
pub fn cylinder_admissible(alpha: &BigRational, beta: &BigRational, k: usize, w: &[u8]) -> bool {
    let zero = BigRational::zero();
    let one = BigRational::one();
    let branch = |a: u8| {
        let a1 = BigRational::from_integer(BigInt::from(a as i64 - 1));
        let lo = ((&a1 - alpha) / beta).max(zero.clone());
        let hi = if a as usize == k { one.clone() } else { ((&a1 + &one - alpha) / beta).min(one.clone()) };
        (lo, hi)
    };
    let mut cur: Option<(BigRational, BigRational)> = None;
    for &a in w.iter().rev() {
        if a == 0 || a as usize > k {
            return false;
        }
        let (mut lo, mut hi) = branch(a);
        if let Some((clo, chi)) = &cur {
            let a1 = BigRational::from_integer(BigInt::from(a as i64 - 1));
            let plo = (clo + &a1 - alpha) / beta;
            let phi = (chi + &a1 - alpha) / beta;
            lo = lo.max(plo);
            hi = hi.min(phi);
        }
        if lo >= hi {
            return false;
        }
        cur = Some((lo, hi));
    }
    true
}

/// All admissible words of length `n` by depth-first extension under the
/// cylinder oracle.
pub fn oracle_language(alpha: &BigRational, beta: &BigRational, k: usize, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u8>> = vec![Vec::new()];
    while let Some(w) = stack.pop() {
        if w.len() == n {
            out.push(Word(w));
            continue;
        }
        for a in 1..=k as u8 {
            let mut u = w.clone();
            u.push(a);
            if cylinder_admissible(alpha, beta, k, &u) {
                stack.push(u);
            }
        }
    }
    out.sort();
    out
}

/// Two-state entropy rate with switching probability `p`.
pub fn binary_entropy(p: f64) -> f64 {
    -(1.0 - p) * (1.0 - p).ln() - p * p.ln()
}
