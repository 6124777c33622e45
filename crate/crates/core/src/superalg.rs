//! Super functions and super differential forms on a chart.
//!
//! A form is a sum of canonically ordered monomials
//! `θ_I · e_J · dθ^M` with [`Scalar`] coefficients, where `e_k` are the even
//! basis 1-forms of the ring.  Commutation table used to reach the canonical
//! order: θθ′ and ee′ anticommute, dθ dθ′ commute, θ and e commute, θ and dθ
//! anticommute, e and dθ anticommute.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::number::GaussRat;
use crate::scalar::{GenId, Ring, Scalar};

pub const MAX_ODD: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExtMono {
    pub theta: u8,
    pub e: u16,
    pub dtheta: [u8; MAX_ODD],
}

impl ExtMono {
    pub fn one() -> ExtMono {
        ExtMono::default()
    }

    pub fn theta(j: usize) -> ExtMono {
        ExtMono { theta: 1 << j, ..Default::default() }
    }

    pub fn e(k: usize) -> ExtMono {
        ExtMono { e: 1 << k, ..Default::default() }
    }

    pub fn dtheta(j: usize) -> ExtMono {
        let mut m = ExtMono::default();
        m.dtheta[j] = 1;
        m
    }

    pub fn n_theta(&self) -> u32 {
        self.theta.count_ones()
    }

    pub fn n_e(&self) -> u32 {
        self.e.count_ones()
    }

    pub fn n_dtheta(&self) -> u32 {
        self.dtheta.iter().map(|&x| x as u32).sum()
    }

    /// Form degree.
    pub fn degree(&self) -> u32 {
        self.n_e() + self.n_dtheta()
    }

    /// ℤ₂ parity.
    pub fn parity(&self) -> u32 {
        (self.n_theta() + self.n_dtheta()) & 1
    }

    /// Soul weight `#θ + #dθ`.
    pub fn weight(&self) -> u32 {
        self.n_theta() + self.n_dtheta()
    }

    pub fn is_body(&self) -> bool {
        self.theta == 0 && self.n_dtheta() == 0
    }
}

impl fmt::Debug for ExtMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "θ{:b}·e{:b}·dθ{:?}", self.theta, self.e, self.dtheta)
    }
}

/// Sign of sorting the concatenation `a ++ b` of two increasing index sets.
fn merge_sign(a: u32, b: u32) -> bool {
    let mut inversions = 0u32;
    let mut bb = b;
    while bb != 0 {
        let y = bb.trailing_zeros();
        let above = if y >= 31 { 0 } else { a >> (y + 1) };
        inversions += above.count_ones();
        bb &= bb - 1;
    }
    inversions & 1 == 1
}

/// Product of two canonical monomials: `None` if it vanishes, else
/// `(negative, monomial)`.
pub fn mono_mul(a: &ExtMono, b: &ExtMono) -> Option<(bool, ExtMono)> {
    if a.theta & b.theta != 0 || a.e & b.e != 0 {
        return None;
    }
    let m = a.n_dtheta();
    let mut neg = ((b.n_theta() * m + b.n_e() * m) & 1) == 1;
    neg ^= merge_sign(a.theta as u32, b.theta as u32);
    neg ^= merge_sign(a.e as u32, b.e as u32);
    let mut dtheta = a.dtheta;
    for (x, y) in dtheta.iter_mut().zip(b.dtheta.iter()) {
        *x = x.checked_add(*y)?;
    }
    Some((neg, ExtMono { theta: a.theta | b.theta, e: a.e | b.e, dtheta }))
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SuperForm {
    terms: BTreeMap<ExtMono, Scalar>,
}

impl SuperForm {
    pub fn zero() -> SuperForm {
        SuperForm::default()
    }

    pub fn one() -> SuperForm {
        SuperForm::scalar(Scalar::one())
    }

    pub fn scalar(s: Scalar) -> SuperForm {
        SuperForm::term(ExtMono::one(), s)
    }

    pub fn constant(c: GaussRat) -> SuperForm {
        SuperForm::scalar(Scalar::constant(c))
    }

    pub fn term(m: ExtMono, s: Scalar) -> SuperForm {
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(m, s);
        }
        SuperForm { terms }
    }

    pub fn terms(&self) -> &BTreeMap<ExtMono, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: ExtMono, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_default();
        e.add_assign(s);
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_assign(&mut self, o: &SuperForm) {
        for (m, s) in &o.terms {
            self.add_term(*m, s);
        }
    }

    pub fn sub_assign(&mut self, o: &SuperForm) {
        for (m, s) in &o.terms {
            self.add_term(*m, &s.neg());
        }
    }

    pub fn add(&self, o: &SuperForm) -> SuperForm {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn sub(&self, o: &SuperForm) -> SuperForm {
        let mut r = self.clone();
        r.sub_assign(o);
        r
    }

    pub fn neg(&self) -> SuperForm {
        SuperForm { terms: self.terms.iter().map(|(m, s)| (*m, s.neg())).collect() }
    }

    pub fn scale(&self, c: &GaussRat) -> SuperForm {
        if c.is_zero() {
            return SuperForm::zero();
        }
        SuperForm { terms: self.terms.iter().map(|(m, s)| (*m, s.scale(c))).collect() }
    }

    pub fn shift_tau(&self, k: i32) -> SuperForm {
        SuperForm { terms: self.terms.iter().map(|(m, s)| (*m, s.shift_tau(k))).collect() }
    }

    /// Applies a coefficientwise map, dropping zeros.
    pub fn map_coeffs<F: FnMut(&Scalar) -> Scalar>(&self, mut f: F) -> SuperForm {
        let mut r = SuperForm::zero();
        for (m, s) in &self.terms {
            r.add_term(*m, &f(s));
        }
        r
    }

    pub fn try_map_coeffs<F: FnMut(&Scalar) -> Result<Scalar>>(&self, mut f: F) -> Result<SuperForm> {
        let mut r = SuperForm::zero();
        for (m, s) in &self.terms {
            r.add_term(*m, &f(s)?);
        }
        Ok(r)
    }

    pub fn filter<F: Fn(&ExtMono) -> bool>(&self, f: F) -> SuperForm {
        SuperForm { terms: self.terms.iter().filter(|(m, _)| f(m)).map(|(m, s)| (*m, s.clone())).collect() }
    }

    /// Degree if all monomials share one.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn parity(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.parity());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self, degree: u32, parity: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree && m.parity() == parity)
    }

    pub fn uses_gen(&self, g: GenId) -> bool {
        self.terms.values().any(|s| s.uses_gen(g))
    }

    pub fn gens_used(&self) -> Vec<GenId> {
        let mut v: Vec<GenId> = self.terms.values().flat_map(|s| s.gens_used()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn is_pure_soul(&self) -> bool {
        self.terms.keys().all(|m| !m.is_body())
    }

    pub fn is_pure_body(&self) -> bool {
        self.terms.keys().all(|m| m.is_body())
    }

    /// Scalar coefficient of the degree-0, θ-free monomial.
    pub fn body_scalar(&self) -> Scalar {
        self.terms.get(&ExtMono::one()).cloned().unwrap_or_default()
    }
}

impl fmt::Debug for SuperForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, s)| format!("({:?})*{:?}", s, m)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A Λ(θ₁…θ_n)-valued function: a degree-0 super form.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct SuperFunction(SuperForm);

impl SuperFunction {
    pub fn new(f: SuperForm) -> Result<SuperFunction> {
        if f.terms().keys().any(|m| m.degree() != 0) {
            return Err(Error::InvalidDegree("super function must have form degree 0".into()));
        }
        Ok(SuperFunction(f))
    }

    pub fn form(&self) -> &SuperForm {
        &self.0
    }

    pub fn into_form(self) -> SuperForm {
        self.0
    }

    pub fn parity(&self) -> Option<u32> {
        self.0.parity()
    }

    pub fn body(&self) -> Scalar {
        self.0.body_scalar()
    }
}

/// Ring plus odd generators: the coordinate algebra of a chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperAlgebra {
    pub ring: Ring,
    odd: Vec<String>,
}

impl SuperAlgebra {
    pub fn new(ring: Ring, odd: Vec<String>) -> Result<SuperAlgebra> {
        if odd.len() > MAX_ODD {
            return Err(Error::Manifest(format!("at most {} odd generators are supported", MAX_ODD)));
        }
        Ok(SuperAlgebra { ring, odd })
    }

    pub fn shared(self) -> Arc<SuperAlgebra> {
        Arc::new(self)
    }

    pub fn n_odd(&self) -> usize {
        self.odd.len()
    }

    pub fn odd_names(&self) -> &[String] {
        &self.odd
    }

    pub fn odd_id(&self, name: &str) -> Option<usize> {
        self.odd.iter().position(|n| n == name)
    }

    pub fn gen(&self, g: GenId) -> SuperForm {
        SuperForm::scalar(Scalar::term(crate::scalar::Mono::gen(g), GaussRat::one()))
    }

    pub fn theta(&self, j: usize) -> SuperForm {
        SuperForm::term(ExtMono::theta(j), Scalar::one())
    }

    pub fn dtheta(&self, j: usize) -> SuperForm {
        SuperForm::term(ExtMono::dtheta(j), Scalar::one())
    }

    pub fn e(&self, k: usize) -> SuperForm {
        SuperForm::term(ExtMono::e(k), Scalar::one())
    }

    /// Verifies every index in `f` refers to this algebra.
    pub fn check(&self, f: &SuperForm) -> Result<()> {
        let n = self.odd.len();
        let nb = self.ring.n_basis();
        for (m, s) in f.terms() {
            if (m.theta as u32) >> n != 0 || m.dtheta[n..].iter().any(|&x| x != 0) {
                return Err(Error::GeneratorMismatch("odd generator out of range".into()));
            }
            if (m.e as u32) >> nb != 0 {
                return Err(Error::GeneratorMismatch("basis 1-form out of range".into()));
            }
            self.ring.check_gens(s)?;
        }
        Ok(())
    }

    pub fn mul_scalar(&self, f: &SuperForm, s: &Scalar) -> SuperForm {
        if let Some(c) = s.as_constant() {
            return f.scale(&c);
        }
        f.map_coeffs(|x| self.ring.mul(x, s))
    }

    /// Wedge product with Koszul signs.
    pub fn mul(&self, a: &SuperForm, b: &SuperForm) -> SuperForm {
        let mut out = SuperForm::zero();
        for (ma, sa) in a.terms() {
            for (mb, sb) in b.terms() {
                if let Some((neg, m)) = mono_mul(ma, mb) {
                    let mut s = self.ring.mul(sa, sb);
                    if neg {
                        s = s.neg();
                    }
                    out.add_term(m, &s);
                }
            }
        }
        out
    }

    /// Checked wedge product.
    pub fn wedge(&self, a: &SuperForm, b: &SuperForm) -> Result<SuperForm> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn pow(&self, a: &SuperForm, e: u32) -> SuperForm {
        let mut r = SuperForm::one();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    /// Exterior derivative: `d x = Σ ∂x e_k` via the derivation table,
    /// `d θ_j = dθ_j`, `d e_k = d dθ_j = 0`.
    pub fn d(&self, a: &SuperForm) -> SuperForm {
        let mut out = SuperForm::zero();
        for (m, s) in a.terms() {
            let ds = self.ring.d(s);
            for (k, c) in ds.iter().enumerate() {
                if c.is_zero() || m.e & (1 << k) != 0 {
                    continue;
                }
                let below = (m.e & ((1u16 << k) - 1)).count_ones();
                let mut nm = *m;
                nm.e |= 1 << k;
                out.add_term(nm, &if below & 1 == 1 { c.neg() } else { c.clone() });
            }
            let r = m.n_theta();
            let nj = m.n_e();
            let mut p = 0u32;
            for j in 0..MAX_ODD {
                if m.theta & (1 << j) == 0 {
                    continue;
                }
                let mut nm = *m;
                nm.theta &= !(1 << j);
                nm.dtheta[j] += 1;
                let neg = ((r - 1 - p) + nj) & 1 == 1;
                out.add_term(nm, &if neg { s.neg() } else { s.clone() });
                p += 1;
            }
        }
        out
    }

    /// Contraction with the odd Euler field `Σ θ_j ∂/∂θ_j`:
    /// `θ_I e_J dθ^M ↦ (−1)^{|J|} Σ_j m_j θ_I θ_j e_J dθ^{M−e_j}`.
    pub fn iota_euler(&self, a: &SuperForm) -> SuperForm {
        let mut out = SuperForm::zero();
        for (m, s) in a.terms() {
            for j in 0..MAX_ODD {
                let mj = m.dtheta[j];
                if mj == 0 || m.theta & (1 << j) != 0 {
                    continue;
                }
                let mut neg = m.n_e() & 1 == 1;
                neg ^= merge_sign(m.theta as u32, 1 << j);
                let mut nm = *m;
                nm.theta |= 1 << j;
                nm.dtheta[j] -= 1;
                let mut c = s.scale(&GaussRat::int(mj as i64));
                if neg {
                    c = c.neg();
                }
                out.add_term(nm, &c);
            }
        }
        out
    }

    /// Contraction with the coordinate field dual to `e_k`.
    pub fn iota_coord(&self, a: &SuperForm, k: usize) -> SuperForm {
        let mut out = SuperForm::zero();
        for (m, s) in a.terms() {
            if m.e & (1 << k) == 0 {
                continue;
            }
            let below = (m.e & ((1u16 << k) - 1)).count_ones();
            let mut nm = *m;
            nm.e &= !(1 << k);
            out.add_term(nm, &if below & 1 == 1 { s.neg() } else { s.clone() });
        }
        out
    }

    /// Homotopy `K` with `dK + Kd = id` on pure-soul forms.
    pub fn soul_homotopy(&self, a: &SuperForm) -> Result<SuperForm> {
        if let Some((m, _)) = a.terms().iter().find(|(m, _)| m.is_body()) {
            return Err(Error::NotPureSoul(format!("monomial {:?} has soul weight 0", m)));
        }
        let mut out = SuperForm::zero();
        for (m, s) in a.terms() {
            let w = GaussRat::frac(1, m.weight() as i64);
            let part = self.iota_euler(&SuperForm::term(*m, s.scale(&w)));
            out.add_assign(&part);
        }
        Ok(out)
    }

    /// `(body, soul)` by soul weight zero versus positive.
    pub fn body_soul_split(&self, a: &SuperForm) -> (SuperForm, SuperForm) {
        (a.filter(|m| m.is_body()), a.filter(|m| !m.is_body()))
    }

    pub fn sf_mul(&self, a: &SuperFunction, b: &SuperFunction) -> Result<SuperFunction> {
        self.check(a.form())?;
        self.check(b.form())?;
        Ok(SuperFunction(self.mul(a.form(), b.form())))
    }

    pub fn sf_exp(&self, n: &SuperFunction) -> Result<SuperFunction> {
        self.check(n.form())?;
        if !n.body().is_zero() {
            return Err(Error::NonNilpotentArgument("exp argument has nonzero body".into()));
        }
        let mut out = SuperForm::one();
        let mut p = SuperForm::one();
        let mut k = 1i64;
        loop {
            p = self.mul(&p, n.form()).scale(&GaussRat::frac(1, k));
            if p.is_zero() {
                break;
            }
            out.add_assign(&p);
            k += 1;
        }
        Ok(SuperFunction(out))
    }

    pub fn sf_log(&self, u: &SuperFunction) -> Result<SuperFunction> {
        self.check(u.form())?;
        if u.body() != Scalar::one() {
            return Err(Error::NonNilpotentArgument("log argument is not 1 + nilpotent".into()));
        }
        let n = u.form().sub(&SuperForm::one());
        let mut out = SuperForm::zero();
        let mut p = SuperForm::one();
        let mut k = 1i64;
        loop {
            p = self.mul(&p, &n);
            if p.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out.add_assign(&p.scale(&GaussRat::frac(sign, k)));
            k += 1;
        }
        Ok(SuperFunction(out))
    }
}

/// Coordinate-level smooth map `φ: source → target`, given by the images of
/// the target's even and odd generators as super functions on the source.
#[derive(Clone, Debug)]
pub struct ChartMap {
    pub source: Arc<SuperAlgebra>,
    pub target: Arc<SuperAlgebra>,
    even: Vec<SuperForm>,
    odd: Vec<SuperForm>,
    basis: Vec<SuperForm>,
    dodd: Vec<SuperForm>,
}

impl ChartMap {
    pub fn new(
        source: Arc<SuperAlgebra>,
        target: Arc<SuperAlgebra>,
        even: Vec<SuperForm>,
        odd: Vec<SuperForm>,
    ) -> Result<ChartMap> {
        let tr = &target.ring;
        if even.len() != tr.n_gens() || odd.len() != target.n_odd() {
            return Err(Error::GeneratorMismatch("chart map must give an image for every generator".into()));
        }
        for (g, img) in even.iter().enumerate() {
            source.check(img)?;
            if !img.is_homogeneous(0, 0) {
                return Err(Error::ParityMismatch(format!(
                    "image of even generator `{}` must be an even function",
                    tr.gen_name(g as GenId)
                )));
            }
        }
        for (j, img) in odd.iter().enumerate() {
            source.check(img)?;
            if !img.is_homogeneous(0, 1) {
                return Err(Error::ParityMismatch(format!(
                    "image of odd generator `{}` must be an odd function",
                    target.odd_names()[j]
                )));
            }
        }
        let mut basis = Vec::with_capacity(tr.n_basis());
        for k in 0..tr.n_basis() {
            let g = (0..tr.n_gens() as GenId)
                .find(|&g| tr.coord_slot(g) == Some(k))
                .ok_or_else(|| Error::GeneratorMismatch(format!("basis 1-form `{}` has no coordinate", tr.basis()[k])))?;
            basis.push(source.d(&even[g as usize]));
        }
        let dodd = odd.iter().map(|f| source.d(f)).collect();
        let map = ChartMap { source, target, even, odd, basis, dodd };
        map.validate()?;
        Ok(map)
    }

    /// Identity on even generators, `θ ↦ 0`: the body inclusion.
    pub fn body_inclusion(alg: Arc<SuperAlgebra>) -> Result<ChartMap> {
        let even = (0..alg.ring.n_gens() as GenId).map(|g| alg.gen(g)).collect();
        let odd = vec![SuperForm::zero(); alg.n_odd()];
        ChartMap::new(alg.clone(), alg, even, odd)
    }

    pub fn identity(alg: Arc<SuperAlgebra>) -> Result<ChartMap> {
        let even = (0..alg.ring.n_gens() as GenId).map(|g| alg.gen(g)).collect();
        let odd = (0..alg.n_odd()).map(|j| alg.theta(j)).collect();
        ChartMap::new(alg.clone(), alg, even, odd)
    }

    fn validate(&self) -> Result<()> {
        let tr = &self.target.ring;
        for r in tr.relations() {
            let lhs = Scalar::term(r.lhs.clone(), GaussRat::one());
            let diff = self.pull_scalar(&lhs.sub(&r.rhs));
            if !diff.is_zero() {
                return Err(Error::RelationViolation(format!("relation `{}`", tr.mono_label(&r.lhs))));
            }
        }
        for g in 0..tr.n_gens() as GenId {
            let lhs = self.source.d(&self.even[g as usize]);
            let mut rhs = SuperForm::zero();
            for (k, c) in tr.deriv(g).iter().enumerate() {
                if !c.is_zero() {
                    rhs.add_assign(&self.source.mul(&self.pull_scalar(c), &self.basis[k]));
                }
            }
            if lhs != rhs {
                return Err(Error::RelationViolation(format!("derivation of `{}`", tr.gen_name(g))));
            }
        }
        Ok(())
    }

    pub fn pull_scalar(&self, s: &Scalar) -> SuperForm {
        let src = &self.source;
        let mut out = SuperForm::zero();
        for (m, c) in s.terms() {
            let mut acc = SuperForm::scalar(Scalar::term(crate::scalar::Mono::tau(m.tau), c.clone()));
            for &(g, e) in &m.gens {
                acc = src.mul(&acc, &src.pow(&self.even[g as usize], e as u32));
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign(&acc);
        }
        out
    }

    pub fn pullback(&self, a: &SuperForm) -> Result<SuperForm> {
        self.target.check(a)?;
        let src = &self.source;
        let mut out = SuperForm::zero();
        for (m, s) in a.terms() {
            let mut acc = self.pull_scalar(s);
            for j in 0..MAX_ODD {
                if m.theta & (1 << j) != 0 {
                    acc = src.mul(&acc, &self.odd[j]);
                }
            }
            for k in 0..16 {
                if m.e & (1 << k) != 0 {
                    acc = src.mul(&acc, &self.basis[k]);
                }
            }
            for j in 0..MAX_ODD {
                for _ in 0..m.dtheta[j] {
                    acc = src.mul(&acc, &self.dodd[j]);
                }
            }
            out.add_assign(&acc);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg() -> SuperAlgebra {
        let mut r = Ring::new(vec!["dx".into()], vec!["x".into()], &[]).unwrap();
        r.set_derivation(0, vec![Scalar::one()]).unwrap();
        SuperAlgebra::new(r, vec!["t1".into(), "t2".into()]).unwrap()
    }

    #[test]
    fn odd_square_and_anticommute() {
        let a = alg();
        let t1 = a.theta(0);
        let t2 = a.theta(1);
        assert!(a.mul(&t1, &t1).is_zero());
        assert_eq!(a.mul(&t1, &t2), a.mul(&t2, &t1).neg());
    }

    #[test]
    fn dtheta_squares_survive() {
        let a = alg();
        let d1 = a.dtheta(0);
        let sq = a.mul(&d1, &d1);
        let mut m = ExtMono::default();
        m.dtheta[0] = 2;
        assert_eq!(sq, SuperForm::term(m, Scalar::one()));
        let dx = a.e(0);
        assert!(a.mul(&dx, &dx).is_zero());
    }

    #[test]
    fn d_of_theta_product() {
        let a = alg();
        let t1 = a.theta(0);
        let t2 = a.theta(1);
        let lhs = a.d(&a.mul(&t1, &t2));
        let rhs = a.mul(&a.dtheta(0), &t2).add(&a.mul(&t1, &a.dtheta(1)));
        assert_eq!(lhs, rhs);
        let x = a.gen(0);
        assert!(a.d(&a.mul(&x, &a.e(0))).is_zero());
    }

    #[test]
    fn soul_homotopy_on_dtheta() {
        let a = alg();
        assert_eq!(a.soul_homotopy(&a.dtheta(0)).unwrap(), a.theta(0));
        assert!(matches!(a.soul_homotopy(&a.e(0)), Err(Error::NotPureSoul(_))));
    }

    #[test]
    fn exp_log_nilpotent() {
        let a = alg();
        let n = SuperFunction::new(a.mul(&a.theta(0), &a.theta(1))).unwrap();
        let e = a.sf_exp(&n).unwrap();
        assert_eq!(e.form(), &SuperForm::one().add(n.form()));
        assert_eq!(a.sf_log(&e).unwrap(), n);
        let one = SuperFunction::new(SuperForm::one()).unwrap();
        assert!(a.sf_log(&one).unwrap().form().is_zero());
        let x = SuperFunction::new(a.gen(0)).unwrap();
        assert!(matches!(a.sf_exp(&x), Err(Error::NonNilpotentArgument(_))));
    }

    #[test]
    fn nilpotent_square() {
        let a = alg();
        let u = SuperForm::one().add(&a.mul(&a.theta(0), &a.theta(1)));
        let sq = a.mul(&u, &u);
        let expect = SuperForm::one().add(&a.mul(&a.theta(0), &a.theta(1)).scale(&GaussRat::int(2)));
        assert_eq!(sq, expect);
    }

    #[test]
    fn split_examples() {
        let a = alg();
        let x = a.gen(0);
        let body = a.mul(&x, &a.e(0));
        let soul = a.mul(&a.theta(0), &a.dtheta(0));
        let (b, s) = a.body_soul_split(&body.add(&soul));
        assert_eq!(b, body);
        assert_eq!(s, soul);
    }

    #[test]
    fn linear_odd_pullback() {
        let a = Arc::new(alg());
        // target with a single odd generator t' mapped to t1 + t2
        let mut r = Ring::new(vec!["dx".into()], vec!["x".into()], &[]).unwrap();
        r.set_derivation(0, vec![Scalar::one()]).unwrap();
        let tgt = Arc::new(SuperAlgebra::new(r, vec!["tp".into()]).unwrap());
        let phi = ChartMap::new(a.clone(), tgt.clone(), vec![a.gen(0)], vec![a.theta(0).add(&a.theta(1))]).unwrap();
        let got = phi.pullback(&tgt.dtheta(0)).unwrap();
        assert_eq!(got, a.dtheta(0).add(&a.dtheta(1)));
        let id = ChartMap::identity(a.clone()).unwrap();
        let f = a.mul(&a.gen(0), &a.mul(&a.theta(1), &a.dtheta(0)));
        assert_eq!(id.pullback(&f).unwrap(), f);
    }

    #[test]
    fn parity_checked() {
        let a = Arc::new(alg());
        let res = ChartMap::new(a.clone(), a.clone(), vec![a.theta(0)], vec![a.theta(0), a.theta(1)]);
        assert!(matches!(res, Err(Error::ParityMismatch(_))));
    }
}
