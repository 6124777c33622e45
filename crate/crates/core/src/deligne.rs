//! Deligne 2-cocycles `(ĥ, A, B)` in exponential coordinates.
//!
//! Conventions, with `D = δ + (−1)^q d` on Čech degree `q`:
//!
//! ```text
//! δĥ = k        (integer constants on 4-tuples)
//! δA = −τ dĥ
//! dA = δB
//! dB = H        (global)
//! ```
//!
//! so that `D(τĥ, A, B) = (τk, 0, 0, H)`.  A certificate `(f̂, z, m)`
//! witnesses `(τ(ĥ − m), A, B) = D(τf̂, z)`:
//! `δf̂ + m = ĥ`, `δz − τ df̂ = A`, `dz = B`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cech_solve;
use crate::cover::{family_from_ints, family_from_rats, Cover, Cycle, Family};
use crate::error::{Error, Result};
use crate::expr::format_form;
use crate::number::Rational;
use crate::poincare::primitive_family;
use crate::report::{Check, Report};
use crate::superalg::{ChartMap, ExtMono, SuperForm};

#[derive(Clone, Debug, PartialEq)]
pub struct Gerbe {
    /// Functions on 3-tuples.
    pub h: Family,
    /// 1-forms on 2-tuples.
    pub a: Family,
    /// 2-forms on charts.
    pub b: Family,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub f: Family,
    pub z: Family,
    pub m: Vec<BigInt>,
}

/// Integer constants on the tuples of one nerve level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerClass {
    pub level: usize,
    pub values: Vec<BigInt>,
}

impl IntegerClass {
    pub fn zero(cover: &Cover, level: usize) -> IntegerClass {
        IntegerClass { level, values: vec![BigInt::zero(); cover.nerve.level(level).len()] }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, o: &IntegerClass) -> IntegerClass {
        IntegerClass { level: self.level, values: self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect() }
    }

    pub fn neg(&self) -> IntegerClass {
        IntegerClass { level: self.level, values: self.values.iter().map(|a| -a).collect() }
    }

    pub fn sub(&self, o: &IntegerClass) -> IntegerClass {
        self.add(&o.neg())
    }

    /// Integer `n` on the level below with `δn = self`, if the class vanishes.
    pub fn preimage(&self, cover: &Cover) -> Result<Option<Vec<BigInt>>> {
        if self.level < 2 {
            return Ok(self.is_zero().then(Vec::new));
        }
        Ok(cover.diagonal(self.level - 1)?.int_preimage(&self.values))
    }

    pub fn is_coboundary(&self, cover: &Cover) -> Result<bool> {
        Ok(self.preimage(cover)?.is_some())
    }

    /// Whether two representatives differ by an integer coboundary.
    pub fn same_class(&self, o: &IntegerClass, cover: &Cover) -> Result<bool> {
        self.sub(o).is_coboundary(cover)
    }

    pub fn pair(&self, z: &Cycle) -> BigInt {
        let mut s = BigInt::zero();
        for (&i, v) in &z.coeffs {
            s += &self.values[i] * v;
        }
        s
    }

    pub fn family(&self) -> Family {
        family_from_ints(self.level, &self.values)
    }
}

fn family_tau(w: &Family, k: i32) -> Family {
    w.map(|c| c.shift_tau(k))
}

/// The value of a constant rational component, or `None`.
fn rational_constant(f: &SuperForm) -> Option<Rational> {
    if f.is_zero() {
        return Some(Rational::zero());
    }
    if f.terms().len() != 1 {
        return None;
    }
    let s = f.terms().get(&ExtMono::one())?;
    let c = s.as_constant()?;
    c.is_real().then_some(c.re)
}

/// Rational constants of a family, or the first offending component.
fn rational_constants(cover: &Cover, w: &Family) -> std::result::Result<Vec<Rational>, String> {
    let tuples = cover.nerve.level(w.level);
    w.comps
        .iter()
        .enumerate()
        .map(|(i, c)| {
            rational_constant(c).ok_or_else(|| {
                format!("{} on {} is not a rational constant", format_form(&cover.alg, c), cover.tuple_label(&tuples[i]))
            })
        })
        .collect()
}

fn check_shape(cover: &Cover, g: &Gerbe) -> Result<()> {
    for (name, w, lvl) in [("h", &g.h, 3), ("A", &g.a, 2), ("B", &g.b, 1)] {
        if w.level != lvl || w.comps.len() != cover.nerve.level(lvl).len() {
            return Err(Error::CoverMismatch(format!(
                "{} has {} components at level {}, the nerve has {} tuples at level {}",
                name,
                w.comps.len(),
                w.level,
                cover.nerve.level(lvl).len(),
                lvl
            )));
        }
    }
    Ok(())
}

fn degree_failure(cover: &Cover, name: &str, w: &Family, degree: u32) -> Option<String> {
    let tuples = cover.nerve.level(w.level);
    for (i, c) in w.comps.iter().enumerate() {
        if let Some(m) = c.terms().keys().find(|m| m.degree() != degree || m.parity() != 0) {
            let what = if m.parity() != 0 { "odd" } else { "of the wrong degree" };
            return Some(format!(
                "{} on {} has a monomial {} (expected even {}-forms)",
                name,
                cover.tuple_label(&tuples[i]),
                what,
                degree
            ));
        }
    }
    None
}

fn first_diff(cover: &Cover, lhs: &Family, rhs: &Family) -> Option<String> {
    let tuples = cover.nerve.level(lhs.level);
    lhs.comps.iter().zip(&rhs.comps).enumerate().find(|(_, (a, b))| a != b).map(|(i, (a, b))| {
        format!(
            "at {}: {} vs {}",
            cover.tuple_label(&tuples[i]),
            format_form(&cover.alg, a),
            format_form(&cover.alg, b)
        )
    })
}

impl Gerbe {
    pub fn zero(cover: &Cover) -> Gerbe {
        Gerbe { h: Family::zero(cover, 3), a: Family::zero(cover, 2), b: Family::zero(cover, 1) }
    }

    pub fn tensor(&self, o: &Gerbe) -> Result<Gerbe> {
        Ok(Gerbe { h: self.h.add(&o.h)?, a: self.a.add(&o.a)?, b: self.b.add(&o.b)? })
    }

    pub fn dual(&self) -> Gerbe {
        Gerbe { h: self.h.neg(), a: self.a.neg(), b: self.b.neg() }
    }

    pub fn map(&self, f: impl Fn(&SuperForm) -> SuperForm + Sync + Send + Copy) -> Gerbe {
        Gerbe { h: self.h.map(f), a: self.a.map(f), b: self.b.map(f) }
    }

    pub fn try_map(&self, f: impl Fn(&SuperForm) -> Result<SuperForm> + Sync + Send + Copy) -> Result<Gerbe> {
        Ok(Gerbe {
            h: self.h.try_map(|_, c| f(c))?,
            a: self.a.try_map(|_, c| f(c))?,
            b: self.b.try_map(|_, c| f(c))?,
        })
    }
}

/// Verifies the cocycle, connection and descent conditions and parity.
pub fn check(cover: &Cover, g: &Gerbe) -> Report {
    let mut rep = Report::new("check");
    if let Err(e) = check_shape(cover, g) {
        rep.push(Check::fail("shape", e.to_string()));
        return rep;
    }
    rep.push(Check::pass("shape"));
    let parity = degree_failure(cover, "h", &g.h, 0)
        .or_else(|| degree_failure(cover, "A", &g.a, 1))
        .or_else(|| degree_failure(cover, "B", &g.b, 2));
    rep.push(Check::from_option("even components of degrees 0, 1, 2", parity));

    let cocycle = match cover.delta(&g.h) {
        Err(e) => Some(e.to_string()),
        Ok(k) => rational_constants(cover, &k).err().or_else(|| {
            let tuples = cover.nerve.level(4);
            rational_constants(cover, &k).ok().and_then(|v| {
                v.iter()
                    .position(|x| !x.is_integer())
                    .map(|i| format!("δh = {} on {} is not an integer", x_text(&v[i]), cover.tuple_label(&tuples[i])))
            })
        }),
    };
    rep.push(Check::from_option("cocycle: δh is an integer constant", cocycle));

    let connection = match cover.delta(&g.a) {
        Err(e) => Some(e.to_string()),
        Ok(da) => {
            let rhs = cover.d_family(&family_tau(&g.h, 1)).neg();
            first_diff(cover, &da, &rhs)
        }
    };
    rep.push(Check::from_option("connection: δA = -tau*dh", connection));

    let descent = match cover.delta(&g.b) {
        Err(e) => Some(e.to_string()),
        Ok(db) => first_diff(cover, &cover.d_family(&g.a), &db),
    };
    rep.push(Check::from_option("descent: dA = δB", descent));
    rep
}

fn x_text(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `k = δĥ` as integers on 4-tuples.
pub fn dd_class(cover: &Cover, g: &Gerbe) -> Result<IntegerClass> {
    check_shape(cover, g)?;
    let k = cover.delta(&g.h)?;
    let vals = rational_constants(cover, &k).map_err(|w| Error::NotIntegral { witness: w })?;
    let mut out = Vec::with_capacity(vals.len());
    for v in vals {
        if !v.is_integer() {
            return Err(Error::NotIntegral { witness: x_text(&v) });
        }
        out.push(v.to_integer());
    }
    Ok(IntegerClass { level: 4, values: out })
}

/// The global 3-form `H` with `dB_α = H` on every chart.
pub fn curvature(cover: &Cover, g: &Gerbe) -> Result<SuperForm> {
    check_shape(cover, g)?;
    let db = cover.d_family(&g.b);
    cover.descend(&db)
}

pub fn tensor(cover: &Cover, g: &Gerbe, h: &Gerbe) -> Result<Gerbe> {
    check_shape(cover, g)?;
    check_shape(cover, h)?;
    g.tensor(h)
}

pub fn dual(g: &Gerbe) -> Gerbe {
    g.dual()
}

/// Componentwise pullback along a map of the cover's algebra to itself.
pub fn pullback_gerbe(cover: &Cover, g: &Gerbe, phi: &ChartMap) -> Result<Gerbe> {
    check_shape(cover, g)?;
    if *phi.target != *cover.alg || *phi.source != *cover.alg {
        return Err(Error::CoverMismatch("chart map does not act on the cover's algebra".into()));
    }
    g.try_map(|c| phi.pullback(c))
}

/// `I_b`: zero `ĥ`, `A`, and `B_α = b`.
pub fn make_trivial(cover: &Cover, b: &SuperForm) -> Result<Gerbe> {
    if b.terms().keys().any(|m| m.parity() != 0) {
        return Err(Error::OddParity(format!("b = {}", format_form(&cover.alg, b))));
    }
    if b.terms().keys().any(|m| m.degree() != 2) {
        return Err(Error::InvalidDegree(format!("b = {} is not a 2-form", format_form(&cover.alg, b))));
    }
    Ok(Gerbe { h: Family::zero(cover, 3), a: Family::zero(cover, 2), b: cover.global_family(b)? })
}

/// The gerbe `(δf̂ + m, δz − τ df̂, dz)` trivialized by `(f̂, z, m)`.
pub fn coboundary_gerbe(cover: &Cover, c: &Certificate) -> Result<Gerbe> {
    let h = cover.delta(&c.f)?.add(&family_from_ints(3, &c.m))?;
    let a = cover.delta(&c.z)?.sub(&family_tau(&cover.d_family(&c.f), 1))?;
    let b = cover.d_family(&c.z);
    Ok(Gerbe { h, a, b })
}

pub fn verify_certificate(cover: &Cover, g: &Gerbe, c: &Certificate) -> Report {
    let mut rep = Report::new("verify");
    let shape_ok = c.f.level == 2
        && c.z.level == 1
        && c.f.comps.len() == cover.nerve.level(2).len()
        && c.z.comps.len() == cover.nerve.level(1).len()
        && c.m.len() == cover.nerve.level(3).len();
    if let Err(e) = check_shape(cover, g) {
        rep.push(Check::fail("shape", e.to_string()));
        return rep;
    }
    if !shape_ok {
        rep.push(Check::fail("shape", "certificate does not match the nerve"));
        return rep;
    }
    rep.push(Check::pass("shape"));
    let parity = degree_failure(cover, "f", &c.f, 0).or_else(|| degree_failure(cover, "z", &c.z, 1));
    rep.push(Check::from_option("even components of degrees 0, 1", parity));

    let lhs = cover.delta(&c.f).and_then(|d| d.add(&family_from_ints(3, &c.m)));
    rep.push(Check::from_option(
        "δf + m = h",
        match lhs {
            Err(e) => Some(e.to_string()),
            Ok(l) => first_diff(cover, &l, &g.h),
        },
    ));
    let lhs = cover.delta(&c.z).and_then(|d| d.sub(&family_tau(&cover.d_family(&c.f), 1)));
    rep.push(Check::from_option(
        "δz - tau*df = A",
        match lhs {
            Err(e) => Some(e.to_string()),
            Ok(l) => first_diff(cover, &l, &g.a),
        },
    ));
    rep.push(Check::from_option("dz = B", first_diff(cover, &cover.d_family(&c.z), &g.b)));
    let dd = dd_class(cover, g);
    let dm = cover.delta(&family_from_ints(3, &c.m));
    let integ = match (dd, dm) {
        (Ok(k), Ok(dm)) => first_diff(cover, &dm, &k.family()),
        (Err(e), _) | (_, Err(e)) => Some(e.to_string()),
    };
    rep.push(Check::from_option("integrality: δm = δh", integ));
    rep
}

/// Evaluates `D(τĥ, A, B)` and compares it with `(τk, 0, 0, H)`.
pub fn check_rep_identity(cover: &Cover, g: &Gerbe) -> Report {
    let mut rep = Report::new("rep_identity");
    if let Err(e) = check_shape(cover, g) {
        rep.push(Check::fail("shape", e.to_string()));
        return rep;
    }
    let th = family_tau(&g.h, 1);
    let run = || -> Result<(Vec<Check>, Vec<(String, String)>)> {
        let mut out = Vec::new();
        let mut values = Vec::new();
        let k = dd_class(cover, g);
        let c30 = cover.delta(&th)?;
        out.push(Check::from_option(
            "(3,0): δ(tau*h) = tau*k",
            match &k {
                Ok(k) => first_diff(cover, &c30, &family_tau(&k.family(), 1)),
                Err(e) => Some(e.to_string()),
            },
        ));
        let c21 = cover.delta(&g.a)?.add(&cover.d_family(&th))?;
        out.push(Check::from_option("(2,1): δA + d(tau*h) = 0", first_diff(cover, &c21, &Family::zero(cover, 3))));
        let c12 = cover.delta(&g.b)?.sub(&cover.d_family(&g.a))?;
        out.push(Check::from_option("(1,2): δB - dA = 0", first_diff(cover, &c12, &Family::zero(cover, 2))));
        let c03 = cover.d_family(&g.b);
        let h = curvature(cover, g);
        out.push(Check::from_option(
            "(0,3): dB = H",
            match &h {
                Ok(h) => first_diff(cover, &c03, &Family { level: 1, comps: vec![h.clone(); cover.n_charts()] }),
                Err(e) => Some(e.to_string()),
            },
        ));
        if let (Ok(k), Ok(h)) = (k, h) {
            values.push(("curvature".to_string(), format_form(&cover.alg, &h)));
            for (name, z) in &cover.cycles {
                if z.level == 4 {
                    values.push((format!("pairing.{}", name), k.pair(z).to_string()));
                }
            }
        }
        Ok((out, values))
    };
    match run() {
        Ok((cs, vs)) => {
            for c in cs {
                rep.push(c);
            }
            for (k, v) in vs {
                rep.value(&k, v);
            }
        }
        Err(e) => rep.push(Check::fail("total differential", e.to_string())),
    }
    rep
}

/// Result of the de Rham → Čech zig-zag of a closed 3-form.
pub struct ZigZag {
    pub gerbe: Gerbe,
    pub class: IntegerClass,
}

/// `B = P(H)`, `A = P(δB)`, `ĥ = −P(δA)/τ`, then `δĥ` is split as integer
/// plus coboundary and `ĥ` is corrected by the coboundary part.
pub fn zigzag3(cover: &Cover, h: &SuperForm) -> Result<ZigZag> {
    if !cover.alg.d(h).is_zero() {
        return Err(Error::NotClosed(format_form(&cover.alg, h)));
    }
    if h.terms().keys().any(|m| m.degree() != 3 || m.parity() != 0) {
        return Err(Error::InvalidDegree("expected an even 3-form".into()));
    }
    let b = primitive_family(cover, &cover.global_family(h)?)?;
    let a = primitive_family(cover, &cover.delta(&b)?)?;
    let hh = family_tau(&primitive_family(cover, &cover.delta(&a)?)?, -1).neg();
    let k = cover.delta(&hh)?;
    let vals = rational_constants(cover, &k).map_err(|w| Error::NotIntegral { witness: w })?;
    let diag = cover.diagonal(3)?;
    let (z, r) = diag.integral_split(&vals).map_err(|w| Error::NotIntegral { witness: x_text(&w.abs()) })?;
    let hh = hh.sub(&family_from_rats(3, &r))?;
    Ok(ZigZag { gerbe: Gerbe { h: hh, a, b }, class: IntegerClass { level: 4, values: z } })
}

pub fn construct_from_integral_form(cover: &Cover, h: &SuperForm) -> Result<Gerbe> {
    let zz = zigzag3(cover, h)?;
    debug_assert_eq!(curvature(cover, &zz.gerbe).ok().as_ref(), Some(h));
    Ok(zz.gerbe)
}

/// Line-bundle zig-zag of a closed global 2-form `b`: `(f̂, z, c)` with
/// `dz = b`, `δz = τ df̂` and `δf̂ = c` integral.
fn zigzag2(cover: &Cover, b: &SuperForm) -> Result<(Family, Family, Vec<BigInt>)> {
    let z = primitive_family(cover, &cover.global_family(b)?)?;
    let f = family_tau(&primitive_family(cover, &cover.delta(&z)?)?, -1);
    let c = cover.delta(&f)?;
    let vals = rational_constants(cover, &c).map_err(|w| Error::NotIntegral { witness: w })?;
    let diag = cover.diagonal(2)?;
    let (n, r) = diag.integral_split(&vals).map_err(|w| Error::NotIntegral { witness: x_text(&w.abs()) })?;
    let f = f.sub(&family_from_rats(2, &r))?;
    Ok((f, z, n))
}

/// Integer class of a closed global 2- or 3-form in `τ` units.
pub fn integral_check(cover: &Cover, w: &SuperForm) -> Result<IntegerClass> {
    if !cover.alg.d(w).is_zero() {
        return Err(Error::NotClosed(format_form(&cover.alg, w)));
    }
    match w.degree() {
        None if w.is_zero() => Ok(IntegerClass::zero(cover, 4)),
        Some(3) => Ok(zigzag3(cover, w)?.class),
        Some(2) => {
            if w.terms().keys().any(|m| m.parity() != 0) {
                return Err(Error::OddParity(format_form(&cover.alg, w)));
            }
            let (_, _, n) = zigzag2(cover, w)?;
            Ok(IntegerClass { level: 3, values: n })
        }
        _ => Err(Error::InvalidDegree("integral_check expects a homogeneous 2- or 3-form".into())),
    }
}

/// Certificate `(f̂, z, m)` for a gerbe with vanishing class and curvature.
pub fn trivialize(cover: &Cover, g: &Gerbe) -> Result<Certificate> {
    check_shape(cover, g)?;
    let k = dd_class(cover, g)?;
    let n = k
        .preimage(cover)?
        .ok_or_else(|| Error::ObstructionNonzero("the Dixmier-Douady class is not an integer coboundary".into()))?;
    let h = curvature(cover, g)?;
    if !h.is_zero() {
        return Err(Error::ObstructionNonzero(format!("curvature {}", format_form(&cover.alg, &h))));
    }
    let f = cech_solve::solve(cover, &g.h.sub(&family_from_ints(3, &n))?)?;
    let z1 = cech_solve::solve(cover, &g.a.add(&family_tau(&cover.d_family(&f), 1))?)?;
    let rest = g.b.sub(&cover.d_family(&z1))?;
    let b = cover.descend(&rest)?;
    let (bb, bs) = cover.alg.body_soul_split(&b);
    let w = cover.alg.soul_homotopy(&bs)?;
    let (f2, z2, c) = if bb.is_zero() {
        (Family::zero(cover, 2), Family::zero(cover, 1), vec![BigInt::zero(); cover.nerve.level(3).len()])
    } else {
        zigzag2(cover, &bb)?
    };
    let cert = Certificate {
        f: f.add(&f2)?,
        z: z1.add(&cover.global_family(&w)?)?.add(&z2)?,
        m: n.iter().zip(&c).map(|(a, b)| a - b).collect(),
    };
    let rep = verify_certificate(cover, g, &cert);
    if let Some(fail) = rep.first_failure() {
        return Err(Error::CechObstruction(format!(
            "certificate failed {}: {}",
            fail.name,
            fail.detail.clone().unwrap_or_default()
        )));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::expr::parse_form;
    use crate::testing::Gen;

    fn form(cover: &Cover, s: &str) -> SuperForm {
        parse_form(&cover.alg, s).unwrap()
    }

    #[test]
    fn trivial_gerbes_pass_and_have_zero_class() {
        let m = examples::build("rn").unwrap();
        let c = &m.cover;
        let b = form(c, "x*dt1*dt2 + t1*t2*e1*e2");
        let g = make_trivial(c, &b).unwrap();
        assert!(check(c, &g).passed());
        assert!(dd_class(c, &g).unwrap().is_zero());
        assert_eq!(curvature(c, &g).unwrap(), c.alg.d(&b));
        assert!(check_rep_identity(c, &g).passed());
        assert!(matches!(make_trivial(c, &form(c, "t1*e1")), Err(Error::OddParity(_))));
        assert!(curvature(c, &make_trivial(c, &form(c, "e1*e2")).unwrap()).unwrap().is_zero());
        let soul = make_trivial(c, &form(c, "x*dt1*dt1")).unwrap();
        assert_eq!(curvature(c, &soul).unwrap(), form(c, "e1*dt1*dt1"));
    }

    #[test]
    fn perturbed_curving_fails_descent_on_a_pair() {
        let m = examples::build("torus2").unwrap();
        let c = &m.cover;
        let mut g = m.gerbe("Iarea").unwrap().clone();
        g.b.comps[4] = g.b.comps[4].add(&form(c, "a1_1*e1*e2 + a2_1*e1"));
        let rep = check(c, &g);
        let fail = rep.first_failure().unwrap();
        assert_eq!(fail.name, "even components of degrees 0, 1, 2");
        g.b.comps[4] = m.gerbe("Iarea").unwrap().b.comps[4].add(&form(c, "a1_1^2*s2*e1*e2"));
        let rep = check(c, &g);
        let fail = rep.first_failure().unwrap();
        assert_eq!(fail.name, "descent: dA = δB");
        assert!(fail.detail.as_ref().unwrap().contains("A11"));
    }

    #[test]
    fn coboundaries_trivialize() {
        let m = examples::build("torus2").unwrap();
        let c = &m.cover;
        let mut rng = Gen::new(3);
        for _ in 0..3 {
            let cert = rng.certificate(c);
            let g = coboundary_gerbe(c, &cert).unwrap();
            assert!(check(c, &g).passed());
            assert!(check_rep_identity(c, &g).passed());
            assert!(verify_certificate(c, &g, &cert).passed());
            let found = trivialize(c, &g).unwrap();
            assert!(verify_certificate(c, &g, &found).passed());
        }
    }

    #[test]
    fn corrupted_certificates_fail() {
        let m = examples::build("torus2").unwrap();
        let c = &m.cover;
        let g = m.gerbe("Iarea").unwrap();
        let cert = trivialize(c, g).unwrap();
        let mut bad = cert.clone();
        bad.z.comps[0] = bad.z.comps[0].add(&form(c, "a1_0*e2"));
        assert_eq!(verify_certificate(c, g, &bad).first_failure().unwrap().name, "δz - tau*df = A");
        let mut bad = cert.clone();
        bad.m[0] += 1;
        let rep = verify_certificate(c, g, &bad);
        assert!(rep.checks.iter().any(|x| x.name == "integrality: δm = δh" && !x.passed));
    }

    #[test]
    fn integral_check_examples() {
        let m = examples::build("torus2").unwrap();
        let c = &m.cover;
        let fund = &c.cycles["fundamental"];
        assert_eq!(integral_check(c, &form(c, "tau*e1*e2")).unwrap().pair(fund), BigInt::from(1));
        match integral_check(c, &form(c, "1/2*tau*e1*e2")) {
            Err(Error::NotIntegral { witness }) => assert_eq!(witness, "1/2"),
            other => panic!("{:?}", other.map(|k| k.values)),
        }
        assert!(integral_check(c, &form(c, "c1*e1*e2")).unwrap().is_coboundary(c).unwrap());
        assert!(matches!(integral_check(c, &form(c, "a1_0*e2*e1")), Err(Error::NotDescended(_))));
        let p = examples::build("pi_circle").unwrap();
        assert!(matches!(integral_check(&p.cover, &form(&p.cover, "t1*dt1*e1")), Err(Error::NotClosed(_))));
    }

    #[test]
    fn trivialize_rejects_obstructions() {
        let m = examples::build("torus2").unwrap();
        let c = &m.cover;
        let g = make_trivial(c, &form(c, "1/3*tau*e1*e2")).unwrap();
        assert!(matches!(trivialize(c, &g), Err(Error::NotIntegral { .. })));
        let r = examples::build("rn").unwrap();
        let g = make_trivial(&r.cover, &form(&r.cover, "x*dt1*dt1")).unwrap();
        assert!(matches!(trivialize(&r.cover, &g), Err(Error::ObstructionNonzero(_))));
    }

    #[test]
    fn closed_soul_curving_trivializes() {
        let m = examples::build("pi_circle").unwrap();
        let c = &m.cover;
        let g = m.gerbe("Iclosed").unwrap();
        assert!(curvature(c, g).unwrap().is_zero());
        let cert = trivialize(c, g).unwrap();
        assert_eq!(c.alg.d(&cert.z.comps[0]), form(c, "dt1*dt1"));
    }

    #[test]
    fn body_pullback_kills_soul() {
        let m = examples::build("pi_circle").unwrap();
        let c = &m.cover;
        let i = ChartMap::body_inclusion(c.alg.clone()).unwrap();
        let g = m.gerbe("Isoul").unwrap();
        let p = pullback_gerbe(c, g, &i).unwrap();
        assert_eq!(p, Gerbe::zero(c));
    }
}
