//! Seeded random data for property checks.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::{Cover, Family};
use crate::deligne::Certificate;
use crate::number::{rat, GaussRat};
use crate::scalar::{GenId, Mono, Scalar};
use crate::superalg::{ExtMono, SuperAlgebra, SuperForm};

/// Constraints on generated exterior monomials.
#[derive(Clone, Copy, Debug, Default)]
pub struct Shape {
    pub degree: Option<u32>,
    pub parity: Option<u32>,
    /// Require soul weight ≥ 1.
    pub soul: bool,
    /// Forbid θ and dθ.
    pub body: bool,
    pub max_terms: usize,
    pub max_poly_degree: u32,
}

impl Shape {
    pub fn any() -> Shape {
        Shape { max_terms: 4, max_poly_degree: 2, ..Shape::default() }
    }

    pub fn homogeneous(degree: u32, parity: u32) -> Shape {
        Shape { degree: Some(degree), parity: Some(parity), ..Shape::any() }
    }

    pub fn soul(self) -> Shape {
        Shape { soul: true, ..self }
    }

    pub fn body(self) -> Shape {
        Shape { body: true, ..self }
    }
}

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coeff(&mut self) -> GaussRat {
        let re = rat(self.rng.gen_range(-4..=4), self.rng.gen_range(1..=3));
        let im = if self.rng.gen_bool(0.25) { rat(self.rng.gen_range(-2..=2), self.rng.gen_range(1..=2)) } else { rat(0, 1) };
        let c = GaussRat::new(re, im);
        if c.is_zero() {
            GaussRat::one()
        } else {
            c
        }
    }

    /// Uniform in `0..n`.
    pub fn below(&mut self, n: u32) -> u32 {
        self.rng.gen_range(0..n.max(1))
    }

    pub fn integer(&mut self, lo: i64, hi: i64) -> BigInt {
        BigInt::from(self.rng.gen_range(lo..=hi))
    }

    /// A normalized scalar in the given generators, occasionally with a
    /// power of τ.
    pub fn scalar(&mut self, alg: &SuperAlgebra, gens: &[GenId], max_deg: u32, max_terms: usize) -> Scalar {
        let mut s = Scalar::zero();
        let n = self.rng.gen_range(1..=max_terms.max(1));
        for _ in 0..n {
            let mut pairs: Vec<(GenId, u16)> = Vec::new();
            let deg = if gens.is_empty() { 0 } else { self.rng.gen_range(0..=max_deg) };
            for _ in 0..deg {
                let g = *gens.choose(&mut self.rng).unwrap();
                match pairs.iter_mut().find(|(h, _)| *h == g) {
                    Some(p) => p.1 += 1,
                    None => pairs.push((g, 1)),
                }
            }
            pairs.sort_unstable();
            let tau = if self.rng.gen_bool(0.15) { self.rng.gen_range(-1..=1) } else { 0 };
            s.add_term(Mono::from_pairs(tau, &pairs), &self.coeff());
        }
        alg.ring.normal_form(&s)
    }

    pub fn ext_mono(&mut self, alg: &SuperAlgebra, shape: &Shape) -> Option<ExtMono> {
        let nb = alg.ring.n_basis();
        let no = alg.n_odd();
        for _ in 0..200 {
            let mut m = ExtMono::one();
            if !shape.body {
                for j in 0..no {
                    if self.rng.gen_bool(0.4) {
                        m.theta |= 1 << j;
                    }
                    if self.rng.gen_bool(0.3) {
                        m.dtheta[j] = self.rng.gen_range(1..=2);
                    }
                }
            }
            for k in 0..nb {
                if self.rng.gen_bool(0.4) {
                    m.e |= 1 << k;
                }
            }
            let ok = shape.degree.is_none_or(|d| m.degree() == d)
                && shape.parity.is_none_or(|p| m.parity() == p)
                && (!shape.soul || m.weight() > 0)
                && m.degree() <= 4;
            if ok {
                return Some(m);
            }
        }
        None
    }

    pub fn form(&mut self, alg: &SuperAlgebra, gens: &[GenId], shape: &Shape) -> SuperForm {
        let mut f = SuperForm::zero();
        let n = self.rng.gen_range(1..=shape.max_terms.max(1));
        for _ in 0..n {
            if let Some(m) = self.ext_mono(alg, shape) {
                let s = self.scalar(alg, gens, shape.max_poly_degree, 2);
                f.add_term(m, &s);
            }
        }
        f
    }

    /// A random family at `level`, each component in the generators of
    /// its tuple's first chart together with the global generators.
    pub fn family(&mut self, cover: &Cover, level: usize, shape: &Shape) -> Family {
        let global = global_gens(cover);
        let comps = cover
            .nerve
            .level(level)
            .iter()
            .map(|t| {
                let mut gens = global.clone();
                gens.extend(cover.charts[t[0] as usize].coords.iter().flatten());
                self.form(&cover.alg, &gens, shape)
            })
            .collect();
        Family { level, comps }
    }

    /// Coboundary data `(f̂, z, m)`: function values on pairs, 1-forms on
    /// charts and integers on triples.
    pub fn certificate(&mut self, cover: &Cover) -> Certificate {
        let f = self.family(cover, 2, &Shape { max_terms: 2, ..Shape::homogeneous(0, 0) });
        let z = self.family(cover, 1, &Shape { max_terms: 2, ..Shape::homogeneous(1, 0) });
        let m = (0..cover.nerve.level(3).len()).map(|_| self.integer(-2, 2)).collect();
        Certificate { f, z, m }
    }
}

/// Ring generators that are not chart coordinates.
pub fn global_gens(cover: &Cover) -> Vec<GenId> {
    (0..cover.alg.ring.n_gens() as GenId).filter(|&g| !cover.is_local(g)).collect()
}
