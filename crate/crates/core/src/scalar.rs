//! The commutative coefficient ring: polynomials over Gaussian rationals in a
//! formal unit `τ` (standing for 2πi) and a finite set of even generators,
//! reduced modulo a confluent set of monomial rewrite rules.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::number::GaussRat;

pub type GenId = u16;

/// Power product `τ^tau · Π g^e`; `gens` is sorted by generator id with
/// nonzero exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono {
    pub tau: i32,
    pub gens: SmallVec<[(GenId, u16); 4]>,
}

impl Mono {
    pub fn one() -> Mono {
        Mono::default()
    }

    pub fn tau(k: i32) -> Mono {
        Mono { tau: k, gens: SmallVec::new() }
    }

    pub fn gen(g: GenId) -> Mono {
        let mut gens = SmallVec::new();
        gens.push((g, 1));
        Mono { tau: 0, gens }
    }

    pub fn from_pairs(tau: i32, pairs: &[(GenId, u16)]) -> Mono {
        let mut m = Mono::tau(tau);
        for &(g, e) in pairs {
            for _ in 0..e {
                m = m.mul(&Mono::gen(g));
            }
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.tau == 0 && self.gens.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.gens.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn exponent(&self, g: GenId) -> u16 {
        self.gens
            .iter()
            .find(|&&(h, _)| h == g)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut gens: SmallVec<[(GenId, u16); 4]> = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.gens.len() || j < o.gens.len() {
            if j == o.gens.len() || (i < self.gens.len() && self.gens[i].0 < o.gens[j].0) {
                gens.push(self.gens[i]);
                i += 1;
            } else if i == self.gens.len() || o.gens[j].0 < self.gens[i].0 {
                gens.push(o.gens[j]);
                j += 1;
            } else {
                gens.push((self.gens[i].0, self.gens[i].1 + o.gens[j].1));
                i += 1;
                j += 1;
            }
        }
        Mono { tau: self.tau + o.tau, gens }
    }

    /// Generator part of `self` is divisible by the generator part of `d`.
    pub fn divisible_by(&self, d: &Mono) -> bool {
        d.gens.iter().all(|&(g, e)| self.exponent(g) >= e)
    }

    /// Quotient of generator parts; τ exponent of `self` kept minus `d.tau`.
    pub fn div(&self, d: &Mono) -> Mono {
        let gens = self
            .gens
            .iter()
            .filter_map(|&(g, e)| {
                let r = e - d.exponent(g);
                (r > 0).then_some((g, r))
            })
            .collect();
        Mono { tau: self.tau - d.tau, gens }
    }

    pub fn without(&self, g: GenId) -> Mono {
        Mono { tau: self.tau, gens: self.gens.iter().copied().filter(|&(h, _)| h != g).collect() }
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        let mut m = self.clone();
        for &(g, e) in &o.gens {
            let have = m.exponent(g);
            if e > have {
                m = m.mul(&Mono::from_pairs(0, &[(g, e - have)]));
            }
        }
        m
    }

    pub fn coprime(&self, o: &Mono) -> bool {
        self.gens.iter().all(|&(g, _)| o.exponent(g) == 0)
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "τ^{}", self.tau)?;
        for (g, e) in &self.gens {
            write!(f, "·g{}^{}", g, e)?;
        }
        Ok(())
    }
}

/// A ring element as a sparse monomial-to-coefficient map.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<Mono, GaussRat>,
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::default()
    }

    pub fn one() -> Scalar {
        Scalar::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Scalar {
        Scalar::term(Mono::one(), c)
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::constant(GaussRat::int(n))
    }

    pub fn tau_pow(k: i32) -> Scalar {
        Scalar::term(Mono::tau(k), GaussRat::one())
    }

    pub fn term(m: Mono, c: GaussRat) -> Scalar {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Scalar { terms }
    }

    /// Builds from raw terms without reduction; callers guarantee normal form.
    pub fn from_terms<I: IntoIterator<Item = (Mono, GaussRat)>>(it: I) -> Scalar {
        let mut s = Scalar::zero();
        for (m, c) in it {
            s.add_term(m, &c);
        }
        s
    }

    pub fn terms(&self) -> &BTreeMap<Mono, GaussRat> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Mono, GaussRat> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, o: &Scalar) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn sub_assign(&mut self, o: &Scalar) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), &-c);
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        let mut r = self.clone();
        r.sub_assign(o);
        r
    }

    pub fn neg(&self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &GaussRat) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// Multiplies by `τ^k`; never needs reduction.
    pub fn shift_tau(&self, k: i32) -> Scalar {
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Mono { tau: m.tau + k, gens: m.gens.clone() }, c.clone()))
                .collect(),
        }
    }

    /// The value if this is a constant (no τ, no generators).
    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn uses_gen(&self, g: GenId) -> bool {
        self.terms.keys().any(|m| m.exponent(g) > 0)
    }

    pub fn gens_used(&self) -> Vec<GenId> {
        let mut v: Vec<GenId> = self.terms.keys().flat_map(|m| m.gens.iter().map(|&(g, _)| g)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{}*{:?}", c, m)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `d g = Σ_k deriv[k] e_k` over the even basis 1-forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub deriv: Vec<Scalar>,
}

/// Rewrite rule `lhs → rhs` with `rhs` strictly below `lhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub lhs: Mono,
    pub rhs: Scalar,
}

/// Generators, derivation table and reduction relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    basis: Vec<String>,
    gens: Vec<Generator>,
    rels: Vec<Relation>,
    /// Position of each generator in the lex precedence (0 = most significant).
    rank: Vec<u32>,
    /// `coord_slot[g] = Some(k)` when `d g = e_k` exactly.
    coord_slot: Vec<Option<usize>>,
}

impl Ring {
    /// A ring with the given basis 1-form names and generators, no relations
    /// and zero derivations.  `order` lists generators from most to least
    /// significant; unlisted generators follow in declaration order.
    pub fn new(basis: Vec<String>, gens: Vec<String>, order: &[String]) -> Result<Ring> {
        if basis.len() > 16 {
            return Err(Error::Manifest("at most 16 even basis 1-forms are supported".into()));
        }
        if gens.len() > GenId::MAX as usize {
            return Err(Error::Manifest("too many generators".into()));
        }
        let n = basis.len();
        let gens: Vec<Generator> =
            gens.into_iter().map(|name| Generator { name, deriv: vec![Scalar::zero(); n] }).collect();
        let mut rank = vec![u32::MAX; gens.len()];
        let mut next = 0u32;
        for name in order {
            let g = gens
                .iter()
                .position(|x| &x.name == name)
                .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
            if rank[g] == u32::MAX {
                rank[g] = next;
                next += 1;
            }
        }
        for r in rank.iter_mut() {
            if *r == u32::MAX {
                *r = next;
                next += 1;
            }
        }
        let coord_slot = vec![None; gens.len()];
        Ok(Ring { basis, gens, rels: Vec::new(), rank, coord_slot })
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn n_basis(&self) -> usize {
        self.basis.len()
    }

    pub fn n_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn relations(&self) -> &[Relation] {
        &self.rels
    }

    pub fn gen_name(&self, g: GenId) -> &str {
        &self.gens[g as usize].name
    }

    pub fn gen_id(&self, name: &str) -> Result<GenId> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .map(|i| i as GenId)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn basis_id(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    /// Precedence list from most to least significant.
    pub fn order(&self) -> Vec<String> {
        let mut v: Vec<(u32, &str)> = self.gens.iter().zip(&self.rank).map(|(g, &r)| (r, g.name.as_str())).collect();
        v.sort();
        v.into_iter().map(|(_, n)| n.to_string()).collect()
    }

    /// Basis slot `k` with `d g = e_k`, if `g` is a coordinate.
    pub fn coord_slot(&self, g: GenId) -> Option<usize> {
        self.coord_slot[g as usize]
    }

    pub fn deriv(&self, g: GenId) -> &[Scalar] {
        &self.gens[g as usize].deriv
    }

    pub fn set_derivation(&mut self, g: GenId, deriv: Vec<Scalar>) -> Result<()> {
        if deriv.len() != self.basis.len() {
            return Err(Error::Manifest(format!("derivation of `{}` has wrong length", self.gen_name(g))));
        }
        let mut slot = None;
        let nonzero: Vec<usize> = (0..deriv.len()).filter(|&k| !deriv[k].is_zero()).collect();
        if nonzero.len() == 1 && deriv[nonzero[0]] == Scalar::one() {
            slot = Some(nonzero[0]);
        }
        self.coord_slot[g as usize] = slot;
        self.gens[g as usize].deriv = deriv;
        Ok(())
    }

    /// Graded-lex comparison of generator parts (τ ignored).
    pub fn cmp_mono(&self, a: &Mono, b: &Mono) -> Ordering {
        let da = a.degree();
        let db = b.degree();
        if da != db {
            return da.cmp(&db);
        }
        let key = |m: &Mono| {
            let mut v: Vec<(u32, u16)> = m.gens.iter().map(|&(g, e)| (self.rank[g as usize], e)).collect();
            v.sort();
            v
        };
        let (ka, kb) = (key(a), key(b));
        let mut i = 0;
        let mut j = 0;
        loop {
            match (ka.get(i), kb.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(ra, ea)), Some(&(rb, eb))) => {
                    if ra != rb {
                        return if ra < rb { Ordering::Greater } else { Ordering::Less };
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }

    /// Adds `lhs → rhs`; rejected unless every monomial of `rhs` is below `lhs`.
    pub fn add_relation(&mut self, lhs: Mono, rhs: Scalar, label: &str) -> Result<()> {
        if lhs.gens.is_empty() || lhs.tau != 0 {
            return Err(Error::NonTerminatingReduction(label.to_string()));
        }
        for m in rhs.terms().keys() {
            if self.cmp_mono(m, &lhs) != Ordering::Less {
                return Err(Error::NonTerminatingReduction(label.to_string()));
            }
        }
        self.rels.push(Relation { lhs, rhs });
        Ok(())
    }

    /// Checks confluence of the rewrite system and compatibility of the
    /// derivation table with every relation.
    pub fn validate(&self) -> Result<()> {
        for i in 0..self.rels.len() {
            for j in (i + 1)..self.rels.len() {
                let (a, b) = (&self.rels[i], &self.rels[j]);
                if a.lhs.coprime(&b.lhs) {
                    continue;
                }
                let l = a.lhs.lcm(&b.lhs);
                let via_a = self.mul_mono(&a.rhs, &l.div(&a.lhs), &GaussRat::one());
                let via_b = self.mul_mono(&b.rhs, &l.div(&b.lhs), &GaussRat::one());
                if via_a != via_b {
                    return Err(Error::NonConfluent(self.mono_label(&l)));
                }
            }
        }
        for r in &self.rels {
            let diff = Scalar::term(r.lhs.clone(), GaussRat::one()).sub(&r.rhs);
            let d = self.d(&diff);
            if d.iter().any(|c| !c.is_zero()) {
                return Err(Error::IncompatibleDerivation(self.mono_label(&r.lhs)));
            }
        }
        Ok(())
    }

    pub fn mono_label(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        if m.tau != 0 {
            parts.push(format!("tau^{}", m.tau));
        }
        for &(g, e) in &m.gens {
            if e == 1 {
                parts.push(self.gen_name(g).to_string());
            } else {
                parts.push(format!("{}^{}", self.gen_name(g), e));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    fn find_rel(&self, m: &Mono) -> Option<&Relation> {
        self.rels.iter().find(|r| m.divisible_by(&r.lhs))
    }

    fn reduce_into(&self, out: &mut Scalar, m: Mono, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        if self.rels.is_empty() {
            out.add_term(m, &c);
            return;
        }
        let mut stack = vec![(m, c)];
        while let Some((m, c)) = stack.pop() {
            match self.find_rel(&m) {
                None => out.add_term(m, &c),
                Some(r) => {
                    let q = m.div(&r.lhs);
                    for (rm, rc) in r.rhs.terms() {
                        stack.push((q.mul(rm), &c * rc));
                    }
                }
            }
        }
    }

    /// Canonical representative modulo the relations.
    pub fn normal_form(&self, s: &Scalar) -> Scalar {
        if self.rels.is_empty() {
            return s.clone();
        }
        let mut out = Scalar::zero();
        for (m, c) in s.terms() {
            self.reduce_into(&mut out, m.clone(), c.clone());
        }
        out
    }

    /// `c · m · s`, reduced.
    pub fn mul_mono(&self, s: &Scalar, m: &Mono, c: &GaussRat) -> Scalar {
        let mut out = Scalar::zero();
        for (sm, sc) in s.terms() {
            self.reduce_into(&mut out, sm.mul(m), sc * c);
        }
        out
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        if a.is_zero() || b.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = a.as_constant() {
            return b.scale(&c);
        }
        if let Some(c) = b.as_constant() {
            return a.scale(&c);
        }
        let mut out = Scalar::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                self.reduce_into(&mut out, ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, a: &Scalar, e: u32) -> Scalar {
        let mut r = Scalar::one();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    /// `ds` as coefficients of the basis 1-forms.
    pub fn d(&self, s: &Scalar) -> Vec<Scalar> {
        let n = self.basis.len();
        let mut out = vec![Scalar::zero(); n];
        for (m, c) in s.terms() {
            for &(g, e) in &m.gens {
                let rest = if e == 1 {
                    m.without(g)
                } else {
                    let mut r = m.without(g);
                    r = r.mul(&Mono::from_pairs(0, &[(g, e - 1)]));
                    r
                };
                let coef = c * &GaussRat::int(e as i64);
                for (k, dk) in self.gens[g as usize].deriv.iter().enumerate() {
                    if dk.is_zero() {
                        continue;
                    }
                    let t = self.mul_mono(dk, &rest, &coef);
                    out[k].add_assign(&t);
                }
            }
        }
        out
    }

    /// Coefficient of `g`'s basis 1-form in `ds`.
    pub fn derive(&self, s: &Scalar, g: GenId) -> Result<Scalar> {
        if g as usize >= self.gens.len() {
            return Err(Error::UnknownGenerator(format!("#{}", g)));
        }
        let k = self.coord_slot[g as usize].ok_or_else(|| Error::NotACoordinate(self.gen_name(g).to_string()))?;
        Ok(self.d(s).swap_remove(k))
    }

    /// Inverse of a unit (nonzero constant times a τ power).
    pub fn try_invert(&self, s: &Scalar) -> Result<Scalar> {
        if s.len() == 1 {
            let (m, c) = s.terms().iter().next().unwrap();
            if m.gens.is_empty() {
                if let Some(ci) = c.inv() {
                    return Ok(Scalar::term(Mono::tau(-m.tau), ci));
                }
            }
        }
        Err(Error::NotAUnit(format!("{:?}", s)))
    }

    /// Replaces generators by ring elements and reduces.
    pub fn substitute(&self, s: &Scalar, map: &HashMap<GenId, Scalar>) -> Scalar {
        if map.is_empty() || !s.terms().keys().any(|m| m.gens.iter().any(|(g, _)| map.contains_key(g))) {
            return s.clone();
        }
        let mut cache: HashMap<(GenId, u16), Scalar> = HashMap::new();
        let mut out = Scalar::zero();
        for (m, c) in s.terms() {
            let mut kept = Mono::tau(m.tau);
            let mut acc = Scalar::one();
            for &(g, e) in &m.gens {
                match map.get(&g) {
                    None => kept = kept.mul(&Mono::from_pairs(0, &[(g, e)])),
                    Some(img) => {
                        let p = cache.entry((g, e)).or_insert_with(|| self.pow(img, e as u32)).clone();
                        acc = self.mul(&acc, &p);
                    }
                }
            }
            out.add_assign(&self.mul_mono(&acc, &kept, c));
        }
        out
    }

    pub fn check_gens(&self, s: &Scalar) -> Result<()> {
        for m in s.terms().keys() {
            for &(g, _) in &m.gens {
                if g as usize >= self.gens.len() {
                    return Err(Error::GeneratorMismatch(format!("generator #{} out of range", g)));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{rat, rat_int};

    fn trig_ring() -> Ring {
        let mut r = Ring::new(vec!["e".into()], vec!["c".into(), "s".into(), "a".into()], &[]).unwrap();
        let c = r.gen_id("c").unwrap();
        let s = r.gen_id("s").unwrap();
        let a = r.gen_id("a").unwrap();
        // period-2π convention: dc = -s da, ds = c da
        r.set_derivation(c, vec![Scalar::term(Mono::gen(s), GaussRat::int(-1))]).unwrap();
        r.set_derivation(s, vec![Scalar::term(Mono::gen(c), GaussRat::one())]).unwrap();
        r.set_derivation(a, vec![Scalar::one()]).unwrap();
        let rhs = Scalar::one().sub(&Scalar::term(Mono::from_pairs(0, &[(s, 2)]), GaussRat::one()));
        r.add_relation(Mono::from_pairs(0, &[(c, 2)]), rhs, "c^2").unwrap();
        r.validate().unwrap();
        r
    }

    fn g(r: &Ring, n: &str) -> Scalar {
        Scalar::term(Mono::gen(r.gen_id(n).unwrap()), GaussRat::one())
    }

    #[test]
    fn circle_relation_reduces() {
        let r = trig_ring();
        let c = g(&r, "c");
        let s = g(&r, "s");
        let c2 = r.mul(&c, &c);
        let expect = Scalar::one().sub(&r.mul(&s, &s));
        assert_eq!(c2, expect);
        let cs = c.add(&s);
        let sq = r.mul(&cs, &cs);
        let expect = Scalar::one().add(&r.mul(&c, &s).scale(&GaussRat::int(2)));
        assert_eq!(sq, expect);
    }

    #[test]
    fn tau_cancels() {
        let r = trig_ring();
        let x = g(&r, "a");
        let t = Scalar::tau_pow(1);
        let ti = r.try_invert(&t).unwrap();
        assert_eq!(ti, Scalar::tau_pow(-1));
        assert_eq!(r.mul(&r.mul(&t, &ti), &x), x);
    }

    #[test]
    fn derive_examples() {
        let r = trig_ring();
        let a = r.gen_id("a").unwrap();
        let x = g(&r, "a");
        assert_eq!(r.derive(&r.mul(&x, &x), a).unwrap(), x.scale(&GaussRat::int(2)));
        assert_eq!(r.derive(&g(&r, "c"), a).unwrap(), g(&r, "s").neg());
        let c = r.gen_id("c").unwrap();
        assert!(matches!(r.derive(&x, c), Err(Error::NotACoordinate(_))));
    }

    #[test]
    fn inverses() {
        let r = trig_ring();
        let z = Scalar::constant(GaussRat::new(rat_int(3), rat_int(4)));
        assert_eq!(r.try_invert(&z).unwrap(), Scalar::constant(GaussRat::new(rat(3, 25), rat(-4, 25))));
        assert!(matches!(r.try_invert(&g(&r, "a")), Err(Error::NotAUnit(_))));
        assert!(matches!(r.try_invert(&Scalar::zero()), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn increasing_relation_rejected() {
        let mut r = Ring::new(vec![], vec!["c".into(), "s".into()], &[]).unwrap();
        let c = r.gen_id("c").unwrap();
        let s = r.gen_id("s").unwrap();
        let rhs = Scalar::term(Mono::from_pairs(0, &[(c, 2)]), GaussRat::one());
        let res = r.add_relation(Mono::from_pairs(0, &[(s, 2)]), rhs, "s^2");
        assert!(matches!(res, Err(Error::NonTerminatingReduction(_))));
    }

    #[test]
    fn incompatible_derivation_detected() {
        let mut r = Ring::new(vec!["e".into()], vec!["c".into(), "s".into()], &[]).unwrap();
        let c = r.gen_id("c").unwrap();
        let s = r.gen_id("s").unwrap();
        r.set_derivation(c, vec![Scalar::term(Mono::gen(s), GaussRat::one())]).unwrap();
        r.set_derivation(s, vec![Scalar::term(Mono::gen(c), GaussRat::one())]).unwrap();
        let rhs = Scalar::one().sub(&Scalar::term(Mono::from_pairs(0, &[(s, 2)]), GaussRat::one()));
        r.add_relation(Mono::from_pairs(0, &[(c, 2)]), rhs, "c^2").unwrap();
        assert!(matches!(r.validate(), Err(Error::IncompatibleDerivation(_))));
    }

    #[test]
    fn substitution_shift() {
        let r = trig_ring();
        let a = r.gen_id("a").unwrap();
        let x = g(&r, "a");
        let mut map = HashMap::new();
        map.insert(a, x.add(&Scalar::int(1)));
        let sq = r.mul(&x, &x);
        let got = r.substitute(&sq, &map);
        let expect = sq.add(&x.scale(&GaussRat::int(2))).add(&Scalar::int(1));
        assert_eq!(got, expect);
    }
}
