//! Solving `δη = ω` for Čech cocycles of forms.
//!
//! The partition-of-unity homotopy is tried first.  When the nerve lacks a
//! tuple it needs, or a component cannot be rewritten into the required
//! chart, the equation is solved exactly over polynomials in the chart
//! coordinates: restrictions between charts are translations, so the
//! problem is one rational linear system shared by every remaining factor.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cover::{face, Cover, Family, Tuple};
use crate::error::{Error, Result};
use crate::number::{GaussRat, Rational};
use crate::ratlin::RatSystem;
use crate::scalar::{GenId, Mono, Scalar};
use crate::superalg::{ExtMono, SuperForm};

/// Checks `δω = 0`, naming the first failing tuple.
pub fn check_cocycle(cover: &Cover, w: &Family) -> Result<()> {
    let dw = cover.delta(w)?;
    if let Some(i) = dw.first_nonzero() {
        let t = &cover.nerve.level(w.level + 1)[i];
        return Err(Error::NotACocycle(cover.tuple_label(t)));
    }
    Ok(())
}

/// `η` with `δη = ω`, for a cocycle `ω` at level 2 or higher.
pub fn solve(cover: &Cover, w: &Family) -> Result<Family> {
    if w.level < 2 {
        return Err(Error::InvalidDegree(format!("cannot solve δη = ω at level {}", w.level)));
    }
    check_cocycle(cover, w)?;
    if w.is_zero() {
        return Ok(Family::zero(cover, w.level - 1));
    }
    if let Some(eta) = pou(cover, w)? {
        return Ok(eta);
    }
    graded(cover, w)
}

/// The global form `Σ φ_β ω_β` of a δ-closed level-1 family.
pub fn solve_global(cover: &Cover, w: &Family) -> Result<SuperForm> {
    if w.level != 1 {
        return Err(Error::InvalidDegree(format!("expected a level-1 family, got level {}", w.level)));
    }
    check_cocycle(cover, w)?;
    let ring = &cover.alg.ring;
    let phi = cover.partition.as_ref().ok_or_else(|| Error::Manifest("cover has no partition of unity".into()))?;
    let mut acc = SuperForm::zero();
    for (p, c) in phi.iter().zip(&w.comps) {
        acc.add_assign(&c.map_coeffs(|s| ring.mul(s, p)));
    }
    let rho = acc.map_coeffs(|s| ring.normal_form(s));
    if cover.global_family(&rho).ok().as_ref() != Some(w) {
        return Err(Error::NotDescended("Σ φ_β ω_β does not restrict to ω".into()));
    }
    Ok(rho)
}

fn pou(cover: &Cover, w: &Family) -> Result<Option<Family>> {
    let Some(phi) = &cover.partition else { return Ok(None) };
    let ring = &cover.alg.ring;
    let lvl = w.level - 1;
    let n = cover.n_charts() as u16;
    let mut comps = Vec::with_capacity(cover.nerve.level(lvl).len());
    for u in cover.nerve.level(lvl) {
        let mut acc = SuperForm::zero();
        for a in 0..n {
            if u.contains(&a) || phi[a as usize].is_zero() {
                continue;
            }
            let p = u.iter().position(|&x| x > a).unwrap_or(u.len());
            let mut t: Tuple = u.clone();
            t.insert(p, a);
            let Some(ti) = cover.nerve.index_of(&t) else { return Ok(None) };
            let c = &w.comps[ti];
            if c.is_zero() {
                continue;
            }
            let Ok(r) = cover.restrict(c, t[0], u[0]) else { return Ok(None) };
            let term = r.map_coeffs(|s| ring.mul(s, &phi[a as usize]));
            if p % 2 == 0 {
                acc.add_assign(&term);
            } else {
                acc.sub_assign(&term);
            }
        }
        comps.push(acc);
    }
    let eta = Family { level: lvl, comps };
    Ok((cover.delta(&eta)? == *w).then_some(eta))
}

type Exps = Vec<u32>;
type RestKey = (ExtMono, Mono);

/// Component split as rest factor ↦ polynomial in the chart coordinates.
type Split = BTreeMap<RestKey, BTreeMap<Exps, GaussRat>>;

fn split(cover: &Cover, chart: u16, f: &SuperForm) -> Result<Split> {
    let ring = &cover.alg.ring;
    let nb = ring.n_basis();
    let coords = &cover.charts[chart as usize].coords;
    let mut out: Split = BTreeMap::new();
    for (m, s) in f.terms() {
        for (mono, c) in s.terms() {
            let mut exps = vec![0u32; nb];
            let mut rest = Mono::tau(mono.tau);
            for &(g, e) in mono.gens.iter() {
                if cover.is_local(g) {
                    match ring.coord_slot(g) {
                        Some(k) if coords[k] == Some(g) => exps[k] += e as u32,
                        _ => {
                            return Err(Error::SubstitutionFailure(format!(
                                "component on a tuple starting at `{}` uses `{}`",
                                cover.charts[chart as usize].name,
                                ring.gen_name(g)
                            )))
                        }
                    }
                } else {
                    rest = rest.mul(&Mono::from_pairs(0, &[(g, e)]));
                }
            }
            let e = out.entry((*m, rest)).or_default().entry(exps).or_insert_with(GaussRat::zero);
            *e += c;
        }
    }
    for p in out.values_mut() {
        p.retain(|_, v| !v.is_zero());
    }
    out.retain(|_, p| !p.is_empty());
    Ok(out)
}

fn monomials(slots: &[usize], nb: usize, bound: u32) -> Vec<Exps> {
    let mut out = vec![vec![0u32; nb]];
    for &k in slots {
        let mut next = Vec::new();
        for m in &out {
            let used: u32 = m.iter().sum();
            for e in 0..=(bound - used) {
                let mut m2 = m.clone();
                m2[k] = e;
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// `x^μ ↦ (x + off)^μ` as a list of monomials with coefficients.
fn translate(mu: &Exps, off: &[Rational]) -> Vec<(Exps, Rational)> {
    let mut acc = vec![(vec![0u32; mu.len()], Rational::one())];
    for (k, &e) in mu.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let mut next = Vec::new();
        for (m, c) in &acc {
            for i in 0..=e {
                if i < e && off[k].is_zero() {
                    continue;
                }
                let mut m2 = m.clone();
                m2[k] = i;
                let mut f = Rational::from_integer(binom(e, i));
                for _ in 0..(e - i) {
                    f *= &off[k];
                }
                next.push((m2, c * f));
            }
        }
        acc = next;
    }
    acc
}

fn graded(cover: &Cover, w: &Family) -> Result<Family> {
    let ring = &cover.alg.ring;
    let nb = ring.n_basis();
    let lvl = w.level;
    let src = cover.nerve.level(lvl - 1);
    let dst = cover.nerve.level(lvl);
    let slots: Vec<Vec<usize>> = cover
        .charts
        .iter()
        .map(|c| (0..nb).filter(|&k| c.coords[k].is_some()).collect())
        .collect();
    let max_slots = slots.iter().map(|s| s.len()).max().unwrap_or(0) as u32;

    let splits: Vec<Split> = dst
        .iter()
        .zip(&w.comps)
        .map(|(t, c)| split(cover, t[0], c))
        .collect::<Result<_>>()?;
    let mut keys: BTreeSet<RestKey> = BTreeSet::new();
    let mut top = 0u32;
    for s in &splits {
        for (k, p) in s {
            keys.insert(k.clone());
            for e in p.keys() {
                top = top.max(e.iter().sum());
            }
        }
    }
    let keys: Vec<RestKey> = keys.into_iter().collect();
    let key_idx: HashMap<&RestKey, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let nrhs = 2 * keys.len();

    let mut last = String::new();
    for bound in (top + 1)..=(top + max_slots + 1) {
        let mut cols: Vec<(usize, Exps)> = Vec::new();
        let mut col_of: Vec<HashMap<Exps, usize>> = Vec::with_capacity(src.len());
        for (ui, u) in src.iter().enumerate() {
            let mut m = HashMap::new();
            for mu in monomials(&slots[u[0] as usize], nb, bound) {
                m.insert(mu.clone(), cols.len());
                cols.push((ui, mu));
            }
            col_of.push(m);
        }
        let mut sys = RatSystem::new(cols.len(), nrhs);
        let mut tcache: HashMap<(u16, u16, Exps), Vec<(Exps, Rational)>> = HashMap::new();
        for (ti, t) in dst.iter().enumerate() {
            let mut rows: BTreeMap<Exps, BTreeMap<usize, Rational>> = BTreeMap::new();
            for i in 0..t.len() {
                let f = face(t, i);
                let fi = cover
                    .nerve
                    .index_of(&f)
                    .ok_or_else(|| Error::MissingComponent(cover.tuple_label(&f)))?;
                let sign = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
                for (mu, &col) in &col_of[fi] {
                    if f[0] == t[0] {
                        let e = rows.entry(mu.clone()).or_default().entry(col).or_insert_with(Rational::zero);
                        *e += &sign;
                        continue;
                    }
                    let key = (t[0], f[0], mu.clone());
                    if !tcache.contains_key(&key) {
                        let off = cover.pair_offsets(t[0], f[0]).ok_or_else(|| {
                            Error::SubstitutionFailure(format!(
                                "coordinate change on {} is not a translation",
                                cover.tuple_label(&[t[0], f[0]])
                            ))
                        })?;
                        for &k in &slots[f[0] as usize] {
                            if mu[k] > 0 && !slots[t[0] as usize].contains(&k) {
                                return Err(Error::SubstitutionFailure(format!(
                                    "chart `{}` has no coordinate along `{}`",
                                    cover.charts[t[0] as usize].name,
                                    ring.basis()[k]
                                )));
                            }
                        }
                        tcache.insert(key.clone(), translate(mu, off));
                    }
                    for (nu, c) in &tcache[&key] {
                        let e = rows.entry(nu.clone()).or_default().entry(col).or_insert_with(Rational::zero);
                        *e += &sign * c;
                    }
                }
            }
            let mut rhs_of: BTreeMap<Exps, Vec<Rational>> = BTreeMap::new();
            for (k, p) in &splits[ti] {
                let ki = key_idx[k];
                for (nu, c) in p {
                    let v = rhs_of.entry(nu.clone()).or_insert_with(|| vec![Rational::zero(); nrhs]);
                    v[2 * ki] = c.re.clone();
                    v[2 * ki + 1] = c.im.clone();
                }
            }
            for (nu, row) in rows.iter_mut() {
                let rhs = rhs_of.remove(nu).unwrap_or_else(|| vec![Rational::zero(); nrhs]);
                sys.push(std::mem::take(row), rhs);
            }
            for (_, rhs) in rhs_of {
                sys.push(BTreeMap::new(), rhs);
            }
        }
        let Some(x) = sys.solve() else {
            last = format!("no polynomial solution of degree ≤ {}", bound);
            continue;
        };
        let mut comps = vec![SuperForm::zero(); src.len()];
        for (ki, (m, rest)) in keys.iter().enumerate() {
            let (re, im) = (&x[2 * ki], &x[2 * ki + 1]);
            for (ci, (ui, mu)) in cols.iter().enumerate() {
                if re[ci].is_zero() && im[ci].is_zero() {
                    continue;
                }
                let chart = &cover.charts[src[*ui][0] as usize];
                let pairs: Vec<(GenId, u16)> = mu
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(k, &e)| (chart.coords[k].unwrap(), e as u16))
                    .collect();
                let mono = rest.mul(&Mono::from_pairs(0, &pairs));
                let c = GaussRat::new(re[ci].clone(), im[ci].clone());
                comps[*ui].add_term(*m, &Scalar::term(mono, c));
            }
        }
        let comps = comps.into_iter().map(|c| c.map_coeffs(|s| ring.normal_form(s))).collect();
        let eta = Family { level: lvl - 1, comps };
        if cover.delta(&eta)? == *w {
            return Ok(eta);
        }
        last = "solution failed verification".into();
    }
    Err(Error::CechObstruction(last))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::expr::parse_form;
    use crate::testing::{Gen, Shape};

    #[test]
    fn zero_and_level_checks() {
        let m = examples::build("circle").unwrap();
        let z = Family::zero(&m.cover, 2);
        assert_eq!(solve(&m.cover, &z).unwrap(), Family::zero(&m.cover, 1));
        assert!(matches!(solve(&m.cover, &Family::zero(&m.cover, 1)), Err(Error::InvalidDegree(_))));
    }

    #[test]
    fn circle_winding_needs_the_coordinate() {
        let m = examples::build("circle").unwrap();
        let c = &m.cover;
        let mut w = Family::zero(c, 2);
        let i = c.nerve.index_of(&[0, 2]).unwrap();
        w.comps[i] = SuperForm::one();
        let eta = solve(c, &w).unwrap();
        assert_eq!(c.delta(&eta).unwrap(), w);
        assert!(eta.comps.iter().any(|f| !c.is_chart_free(f)));
    }

    #[test]
    fn hand_built_function_family() {
        let m = examples::build("circle").unwrap();
        let c = &m.cover;
        let alg = &c.alg;
        let f = |s: &str| parse_form(alg, s).unwrap();
        let eta = Family { level: 1, comps: vec![f("c1*a1_0"), f("s1^2 + a1_1"), f("1/2*a1_2^2*c1")] };
        let w = c.delta(&eta).unwrap();
        let rho = solve(c, &w).unwrap();
        assert_eq!(c.delta(&rho).unwrap(), w);
    }

    #[test]
    fn torus_round_trips() {
        let m = examples::build("torus2").unwrap();
        let c = &m.cover;
        let mut g = Gen::new(7);
        for level in 2..=4 {
            for _ in 0..3 {
                let eta = g.family(c, level - 1, &Shape::any());
                let w = c.delta(&eta).unwrap();
                let rho = solve(c, &w).unwrap();
                assert_eq!(c.delta(&rho).unwrap(), w);
            }
        }
    }

    #[test]
    fn non_cocycle_rejected() {
        let m = examples::build("torus2").unwrap();
        let c = &m.cover;
        let mut w = Family::zero(c, 2);
        w.comps[0] = SuperForm::one();
        assert!(matches!(solve(c, &w), Err(Error::NotACocycle(_))));
    }

    #[test]
    fn global_level() {
        let m = examples::build("pi_circle").unwrap();
        let c = &m.cover;
        let b = parse_form(&c.alg, "c1*t1*dt1 + s1*e1").unwrap();
        assert_eq!(solve_global(c, &c.global_family(&b).unwrap()).unwrap(), b);
    }
}
