//! Explicit primitives of closed forms on a star-shaped chart.
//!
//! The soul part is handled by the odd Euler homotopy.  Body coefficients
//! are rewritten as polynomials in `y = x − center` times Fourier modes
//! `u^ν` of the periodic pairs (`u = c + i s`, `∂u = τ u`); the zero mode is
//! integrated radially and every other mode along its first nonzero slot.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::One;

use crate::cover::{Cover, Family, Periodic};
use crate::error::{Error, Result};
use crate::number::{GaussRat, Rational};
use crate::scalar::{GenId, Mono, Scalar};
use crate::superalg::{ExtMono, SuperAlgebra, SuperForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Coord(usize),
    Cos(usize),
    Sin(usize),
    Param,
    Other,
}

/// A star-shaped chart: coordinates and center per slot, plus periodic pairs.
pub struct Star<'a> {
    alg: &'a SuperAlgebra,
    name: String,
    coords: Vec<Option<GenId>>,
    center: Vec<Rational>,
    pairs: Vec<Option<(GenId, GenId)>>,
    roles: Vec<Role>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    nu: Vec<i32>,
    j: Vec<u32>,
    e: u16,
    rest: Mono,
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

fn gr(r: Rational) -> GaussRat {
    GaussRat::from_rat(r)
}

fn big(n: BigInt) -> GaussRat {
    GaussRat::from_rat(Rational::from_integer(n))
}

impl<'a> Star<'a> {
    pub fn new(
        alg: &'a SuperAlgebra,
        name: &str,
        coords: Vec<Option<GenId>>,
        center: Vec<Rational>,
        periodic: &[Periodic],
    ) -> Result<Star<'a>> {
        let ring = &alg.ring;
        let nb = ring.n_basis();
        let mut pairs = vec![None; nb];
        let mut roles = vec![Role::Other; ring.n_gens()];
        for (g, role) in roles.iter_mut().enumerate() {
            if ring.deriv(g as GenId).iter().all(|s| s.is_zero()) {
                *role = Role::Param;
            }
        }
        for p in periodic {
            if pairs[p.slot].is_some() {
                return Err(Error::Manifest(format!("two periodic pairs along `{}`", ring.basis()[p.slot])));
            }
            pairs[p.slot] = Some((p.c, p.s));
            roles[p.c as usize] = Role::Cos(p.slot);
            roles[p.s as usize] = Role::Sin(p.slot);
        }
        for (k, g) in coords.iter().enumerate() {
            if let Some(g) = g {
                roles[*g as usize] = Role::Coord(k);
            }
        }
        Ok(Star { alg, name: name.to_string(), coords, center, pairs, roles })
    }

    /// The star of chart `i` of a cover.
    pub fn chart(cover: &'a Cover, i: u16) -> Result<Star<'a>> {
        let ch = &cover.charts[i as usize];
        Star::new(&cover.alg, &ch.name, ch.coords.clone(), ch.center.clone(), &cover.periodic)
    }

    fn non_poly(&self, detail: String) -> Error {
        Error::NonPolynomialBody { chart: self.name.clone(), detail }
    }

    /// Expands one ring monomial into (rest, [(j, ν, coefficient)]).
    fn expand(&self, m: &Mono, c: &GaussRat) -> Result<(Mono, Vec<(Vec<u32>, Vec<i32>, GaussRat)>)> {
        let nb = self.coords.len();
        let mut rest = Mono::tau(m.tau);
        let mut acc = vec![(vec![0u32; nb], vec![0i32; nb], c.clone())];
        for &(g, n) in m.gens.iter() {
            let n = n as u32;
            let factor: Vec<(usize, bool, i64, GaussRat)> = match self.roles[g as usize] {
                Role::Param => {
                    rest = rest.mul(&Mono::from_pairs(0, &[(g, n as u16)]));
                    continue;
                }
                Role::Other => {
                    return Err(self.non_poly(format!("generator `{}` is neither a coordinate, a periodic pair nor constant", self.alg.ring.gen_name(g))));
                }
                Role::Coord(k) => {
                    let c0 = gr(self.center[k].clone());
                    (0..=n).map(|i| (k, true, i as i64, big(binom(n, i)) * c0.pow(n - i))).collect()
                }
                Role::Cos(k) => {
                    let h = GaussRat::frac(1, 2).pow(n);
                    (0..=n).map(|i| (k, false, n as i64 - 2 * i as i64, big(binom(n, i)) * h.clone())).collect()
                }
                Role::Sin(k) => {
                    let h = (GaussRat::int(2) * GaussRat::i()).inv().unwrap().pow(n);
                    (0..=n)
                        .map(|i| {
                            let sg = if i % 2 == 1 { GaussRat::int(-1) } else { GaussRat::one() };
                            (k, false, n as i64 - 2 * i as i64, big(binom(n, i)) * h.clone() * sg)
                        })
                        .collect()
                }
            };
            let mut next = Vec::with_capacity(acc.len() * factor.len());
            for (j, nu, cc) in &acc {
                for (k, is_y, p, fc) in &factor {
                    let (mut j2, mut nu2) = (j.clone(), nu.clone());
                    if *is_y {
                        j2[*k] += *p as u32;
                    } else {
                        nu2[*k] += *p as i32;
                    }
                    next.push((j2, nu2, cc * fc));
                }
            }
            acc = next;
        }
        Ok((rest, acc))
    }

    fn to_fourier(&self, f: &SuperForm) -> Result<BTreeMap<Key, GaussRat>> {
        let mut out: BTreeMap<Key, GaussRat> = BTreeMap::new();
        for (m, s) in f.terms() {
            debug_assert!(m.is_body());
            for (mono, c) in s.terms() {
                let (rest, parts) = self.expand(mono, c)?;
                for (j, nu, cc) in parts {
                    let key = Key { nu, j, e: m.e, rest: rest.clone() };
                    let e = out.entry(key).or_insert_with(GaussRat::zero);
                    *e += &cc;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    fn from_fourier(&self, terms: &BTreeMap<Key, GaussRat>) -> SuperForm {
        let ring = &self.alg.ring;
        let mut ycache: HashMap<(usize, u32), Scalar> = HashMap::new();
        let mut ucache: HashMap<(usize, i32), Scalar> = HashMap::new();
        let mut out = SuperForm::zero();
        for (k, c) in terms {
            let mut s = Scalar::term(k.rest.clone(), c.clone());
            for (slot, &n) in k.j.iter().enumerate() {
                if n == 0 {
                    continue;
                }
                let p = ycache.entry((slot, n)).or_insert_with(|| {
                    let g = self.coords[slot].expect("coordinate present");
                    let y = Scalar::term(Mono::gen(g), GaussRat::one()).sub(&Scalar::constant(gr(self.center[slot].clone())));
                    ring.pow(&y, n)
                });
                s = ring.mul(&s, p);
            }
            for (slot, &v) in k.nu.iter().enumerate() {
                if v == 0 {
                    continue;
                }
                let p = ucache.entry((slot, v)).or_insert_with(|| {
                    let (cg, sg) = self.pairs[slot].expect("periodic pair present");
                    let sign = if v > 0 { GaussRat::i() } else { -GaussRat::i() };
                    let w = Scalar::term(Mono::gen(cg), GaussRat::one()).add(&Scalar::term(Mono::gen(sg), sign));
                    ring.pow(&w, v.unsigned_abs())
                });
                s = ring.mul(&s, p);
            }
            out.add_term(ExtMono { e: k.e, ..ExtMono::one() }, &s);
        }
        out
    }

    /// Primitive of a closed pure-body form.
    fn body_primitive(&self, f: &SuperForm) -> Result<SuperForm> {
        let terms = self.to_fourier(f)?;
        let mut out: BTreeMap<Key, GaussRat> = BTreeMap::new();
        let mut push = |k: Key, v: GaussRat| {
            let e = out.entry(k).or_insert_with(GaussRat::zero);
            *e += &v;
        };
        for (key, c) in &terms {
            match key.nu.iter().position(|&v| v != 0) {
                None => {
                    let deg: u32 = key.j.iter().sum::<u32>() + key.e.count_ones();
                    if deg == 0 {
                        return Err(Error::NotClosed("a nonzero constant function has no primitive".into()));
                    }
                    let inv = GaussRat::frac(1, deg as i64);
                    let mut p = 0;
                    for slot in 0..16 {
                        if key.e & (1 << slot) == 0 {
                            continue;
                        }
                        if self.coords.get(slot).copied().flatten().is_none() {
                            return Err(self.non_poly(format!("no coordinate along `{}`", self.alg.ring.basis()[slot])));
                        }
                        let mut j = key.j.clone();
                        j[slot] += 1;
                        let mut v = c * &inv;
                        if p % 2 == 1 {
                            v = -v;
                        }
                        push(Key { nu: key.nu.clone(), j, e: key.e & !(1 << slot), rest: key.rest.clone() }, v);
                        p += 1;
                    }
                }
                Some(k) => {
                    if key.e & (1 << k) == 0 {
                        continue;
                    }
                    let below = (key.e & ((1u16 << k) - 1)).count_ones();
                    let n = key.j[k];
                    let nuk = GaussRat::int(key.nu[k] as i64);
                    let mut fall = BigInt::one();
                    for i in 0..=n {
                        if i > 0 {
                            fall *= BigInt::from(n - i + 1);
                        }
                        let mut v = c * &big(fall.clone()) * nuk.pow(i + 1).inv().unwrap();
                        if (i + below) % 2 == 1 {
                            v = -v;
                        }
                        let mut j = key.j.clone();
                        j[k] = n - i;
                        let rest = key.rest.mul(&Mono::tau(-(i as i32) - 1));
                        push(Key { nu: key.nu.clone(), j, e: key.e & !(1 << k), rest }, v);
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(self.from_fourier(&out))
    }

    /// `P(ω)` with `dP(ω) = ω` for a closed form of positive degree.
    pub fn primitive(&self, f: &SuperForm) -> Result<SuperForm> {
        if f.is_zero() {
            return Ok(SuperForm::zero());
        }
        if !self.alg.d(f).is_zero() {
            return Err(Error::NotClosed(format!("on chart `{}`", self.name)));
        }
        let (body, soul) = self.alg.body_soul_split(f);
        let mut out = self.alg.soul_homotopy(&soul)?;
        if !body.is_zero() {
            out.add_assign(&self.body_primitive(&body)?);
        }
        Ok(out)
    }
}

/// Primitive of a closed form on chart `chart` of a cover.
pub fn primitive_on(cover: &Cover, chart: u16, f: &SuperForm) -> Result<SuperForm> {
    Star::chart(cover, chart)?.primitive(f)
}

/// Componentwise primitive of a family of closed forms, each on the first
/// chart of its tuple.
pub fn primitive_family(cover: &Cover, w: &Family) -> Result<Family> {
    let tuples = cover.nerve.level(w.level);
    w.try_map(|i, c| if c.is_zero() { Ok(SuperForm::zero()) } else { primitive_on(cover, tuples[i][0], c) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_form;
    use crate::number::rat;
    use crate::scalar::Ring;
    use proptest::prelude::*;

    /// One slot with coordinate `a` (center 1/3) and a periodic pair, plus a
    /// second slot with coordinate `b`, a parameter `p` and two odd generators.
    fn alg() -> SuperAlgebra {
        let mut r = Ring::new(
            vec!["e1".into(), "e2".into()],
            vec!["c".into(), "s".into(), "a".into(), "b".into(), "p".into()],
            &["c".into(), "s".into()],
        )
        .unwrap();
        let (c, s, a, b) = (0, 1, 2, 3);
        let z = Scalar::zero();
        r.set_derivation(c, vec![Scalar::term(Mono::from_pairs(1, &[(s, 1)]), GaussRat::i()), z.clone()]).unwrap();
        r.set_derivation(s, vec![Scalar::term(Mono::from_pairs(1, &[(c, 1)]), -GaussRat::i()), z.clone()]).unwrap();
        r.set_derivation(a, vec![Scalar::one(), z.clone()]).unwrap();
        r.set_derivation(b, vec![z.clone(), Scalar::one()]).unwrap();
        let rhs = Scalar::one().sub(&Scalar::term(Mono::from_pairs(0, &[(s, 2)]), GaussRat::one()));
        r.add_relation(Mono::from_pairs(0, &[(c, 2)]), rhs, "c^2").unwrap();
        r.validate().unwrap();
        SuperAlgebra::new(r, vec!["t".into(), "u".into()]).unwrap()
    }

    fn star(alg: &SuperAlgebra) -> Star<'_> {
        Star::new(
            alg,
            "U",
            vec![Some(2), Some(3)],
            vec![rat(1, 3), rat(-2, 1)],
            &[Periodic { c: 0, s: 1, slot: 0 }],
        )
        .unwrap()
    }

    fn check(src: &str) {
        let alg = alg();
        let st = star(&alg);
        let eta = parse_form(&alg, src).unwrap();
        let w = alg.d(&eta);
        let p = st.primitive(&w).unwrap();
        assert_eq!(alg.d(&p), w, "primitive of d({})", src);
    }

    #[test]
    fn primitives_of_exact_forms() {
        check("a^2*b");
        check("c*s^3*a*e2");
        check("tau^-1*p*s*e1 + a*b*e2");
        check("t*u*c + a*dt*e1");
        check("t*dt*dt*b*c");
        check("(1/2 + 3i)*c*s*a^2*b^3");
    }

    #[test]
    fn closed_but_not_exact_globally() {
        let alg = alg();
        let st = star(&alg);
        let e1 = parse_form(&alg, "e1").unwrap();
        assert_eq!(alg.d(&st.primitive(&e1).unwrap()), e1);
        let nochart = Star::new(&alg, "V", vec![None, Some(3)], vec![rat(0, 1), rat(0, 1)], &[Periodic { c: 0, s: 1, slot: 0 }]).unwrap();
        assert!(matches!(nochart.primitive(&e1), Err(Error::NonPolynomialBody { .. })));
        let w = parse_form(&alg, "c*e1").unwrap();
        assert_eq!(alg.d(&nochart.primitive(&w).unwrap()), w);
    }

    #[test]
    fn rejects_open_and_constant() {
        let alg = alg();
        let st = star(&alg);
        assert!(matches!(st.primitive(&parse_form(&alg, "a*e2").unwrap()), Err(Error::NotClosed(_))));
        assert!(matches!(st.primitive(&parse_form(&alg, "2").unwrap()), Err(Error::NotClosed(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn d_of_primitive_is_identity(
            coeffs in proptest::collection::vec((-3i64..4, 0u16..3, 0u16..2, 0u16..3, 0u16..3, 0usize..6), 1..5)
        ) {
            let alg = alg();
            let st = star(&alg);
            let ext = ["1", "e1", "e2", "t", "dt", "t*u*e1"];
            let mut eta = SuperForm::zero();
            for (k, ca, cs, cb, cc, x) in coeffs {
                let src = format!("{}*a^{}*s^{}*b^{}*c^{}*{}", k, ca, cs, cb, cc, ext[x]);
                eta.add_assign(&parse_form(&alg, &src).unwrap());
            }
            let w = alg.d(&eta);
            let p = st.primitive(&w).unwrap();
            prop_assert_eq!(alg.d(&p), w);
        }
    }
}
