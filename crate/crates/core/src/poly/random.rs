use rand::Rng;

use super::{int, Monomial, Polynomial, VarId};

/// A nonzero polynomial over `num_vars` flat variables with at most
/// `max_terms` terms of degree at most `max_degree` and small integer
/// coefficients.
pub fn random_sparse<R: Rng>(rng: &mut R, num_vars: u32, max_degree: u32, max_terms: usize) -> Polynomial {
    loop {
        let mut p = Polynomial::zero();
        for _ in 0..rng.gen_range(1..=max_terms) {
            let degree = rng.gen_range(0..=max_degree);
            let mono = Monomial::product((0..degree).map(|_| VarId::new(0, rng.gen_range(0..num_vars))));
            let mut c = rng.gen_range(-3i64..=2);
            if c >= 0 {
                c += 1;
            }
            p.add_term(mono, int(c));
        }
        if !p.is_zero() {
            return p;
        }
    }
}
