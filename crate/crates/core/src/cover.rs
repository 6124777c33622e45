//! Combinatorial good covers over a globally presented ring, Čech families
//! and the Čech differential.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::intlin::Diagonal;
use crate::number::{GaussRat, Rational};
use crate::report::{Check, Report};
use crate::scalar::{GenId, Mono, Scalar};
use crate::superalg::{SuperAlgebra, SuperForm};

pub type Tuple = SmallVec<[u16; 6]>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub name: String,
    /// Coordinate generator per basis slot.
    pub coords: Vec<Option<GenId>>,
    /// Star center per basis slot.
    pub center: Vec<Rational>,
}

/// A periodic pair `c = cos 2πa`, `s = sin 2πa` along basis slot `slot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Periodic {
    pub c: GenId,
    pub s: GenId,
    pub slot: usize,
}

/// Integer chain on the nerve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub level: usize,
    pub coeffs: BTreeMap<usize, BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nerve {
    levels: Vec<Vec<Tuple>>,
    index: Vec<HashMap<Tuple, usize>>,
}

impl Nerve {
    /// Nerve generated by the given simplices, truncated at `max_level`.
    pub fn from_facets(facets: &[Vec<u16>], max_level: usize) -> Nerve {
        let mut sets: Vec<BTreeSet<Tuple>> = vec![BTreeSet::new(); max_level];
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            let n = f.len();
            let top = n.min(max_level);
            for k in 1..=top {
                let mut idx: Vec<usize> = (0..k).collect();
                loop {
                    sets[k - 1].insert(idx.iter().map(|&i| f[i]).collect());
                    let mut i = k;
                    let mut advanced = false;
                    while i > 0 {
                        i -= 1;
                        if idx[i] < n - k + i {
                            idx[i] += 1;
                            for j in (i + 1)..k {
                                idx[j] = idx[j - 1] + 1;
                            }
                            advanced = true;
                            break;
                        }
                    }
                    if !advanced {
                        break;
                    }
                }
            }
        }
        Nerve::from_sets(sets)
    }

    /// Nerve from an explicit tuple list (order-normalized, not closed).
    pub fn from_tuples(tuples: &[Vec<u16>]) -> Nerve {
        let max = tuples.iter().map(|t| t.len()).max().unwrap_or(0);
        let mut sets: Vec<BTreeSet<Tuple>> = vec![BTreeSet::new(); max];
        for t in tuples {
            let mut t = t.clone();
            t.sort_unstable();
            t.dedup();
            if !t.is_empty() {
                sets[t.len() - 1].insert(t.into_iter().collect());
            }
        }
        Nerve::from_sets(sets)
    }

    fn from_sets(mut sets: Vec<BTreeSet<Tuple>>) -> Nerve {
        while sets.last().map(|s| s.is_empty()).unwrap_or(false) {
            sets.pop();
        }
        let levels: Vec<Vec<Tuple>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = levels.iter().map(|l| l.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect()).collect();
        Nerve { levels, index }
    }

    /// Tuples with `level` charts (1-based); empty beyond the top.
    pub fn level(&self, level: usize) -> &[Tuple] {
        if level == 0 || level > self.levels.len() {
            &[]
        } else {
            &self.levels[level - 1]
        }
    }

    pub fn index_of(&self, t: &[u16]) -> Option<usize> {
        if t.is_empty() || t.len() > self.levels.len() {
            return None;
        }
        self.index[t.len() - 1].get(t).copied()
    }

    pub fn max_level(&self) -> usize {
        self.levels.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }
}

/// Removes entry `i` of a tuple.
pub fn face(t: &[u16], i: usize) -> Tuple {
    t.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect()
}

/// A form-valued family on the tuples of one nerve level, each component in
/// the generators of the tuple's first chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub level: usize,
    pub comps: Vec<SuperForm>,
}

impl Family {
    pub fn zero(cover: &Cover, level: usize) -> Family {
        Family { level, comps: vec![SuperForm::zero(); cover.nerve.level(level).len()] }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    fn zip(&self, o: &Family, f: impl Fn(&SuperForm, &SuperForm) -> SuperForm) -> Result<Family> {
        if self.level != o.level || self.comps.len() != o.comps.len() {
            return Err(Error::CoverMismatch(format!(
                "families at levels {} and {} do not match",
                self.level, o.level
            )));
        }
        Ok(Family { level: self.level, comps: self.comps.iter().zip(&o.comps).map(|(a, b)| f(a, b)).collect() })
    }

    pub fn add(&self, o: &Family) -> Result<Family> {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Family) -> Result<Family> {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Family {
        self.map(|c| c.neg())
    }

    pub fn map(&self, f: impl Fn(&SuperForm) -> SuperForm + Sync + Send) -> Family {
        Family { level: self.level, comps: self.comps.par_iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(usize, &SuperForm) -> Result<SuperForm> + Sync + Send) -> Result<Family> {
        let comps = self.comps.par_iter().enumerate().map(|(i, c)| f(i, c)).collect::<Result<Vec<_>>>()?;
        Ok(Family { level: self.level, comps })
    }

    /// First component that is nonzero, if any.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.comps.iter().position(|c| !c.is_zero())
    }
}

/// Constant integer values on the tuples of one level.
pub fn family_from_ints(level: usize, v: &[BigInt]) -> Family {
    Family {
        level,
        comps: v
            .iter()
            .map(|x| SuperForm::constant(GaussRat::from_rat(Rational::from_integer(x.clone()))))
            .collect(),
    }
}

pub fn family_from_rats(level: usize, v: &[Rational]) -> Family {
    Family { level, comps: v.iter().map(|x| SuperForm::constant(GaussRat::from_rat(x.clone()))).collect() }
}

#[derive(Debug)]
pub struct Cover {
    pub alg: Arc<SuperAlgebra>,
    pub charts: Vec<Chart>,
    pub nerve: Nerve,
    /// `(α, β)` with `α < β`: images of β's unshared coordinates in α's generators.
    pub subs: BTreeMap<(u16, u16), BTreeMap<GenId, Scalar>>,
    pub partition: Option<Vec<Scalar>>,
    pub periodic: Vec<Periodic>,
    pub cycles: BTreeMap<String, Cycle>,
    /// Whether each ring generator is chart-local.
    local: Vec<bool>,
    sub_maps: BTreeMap<(u16, u16), HashMap<GenId, Scalar>>,
    /// Per pair, translation offsets per slot when the substitution is affine.
    offsets: BTreeMap<(u16, u16), Option<Vec<Rational>>>,
    diag_cache: Vec<OnceLock<Result<Arc<Diagonal>>>>,
}

impl PartialEq for Cover {
    fn eq(&self, o: &Cover) -> bool {
        self.alg == o.alg
            && self.charts == o.charts
            && self.nerve == o.nerve
            && self.subs == o.subs
            && self.partition == o.partition
            && self.periodic == o.periodic
            && self.cycles == o.cycles
    }
}

impl Cover {
    pub fn new(
        alg: Arc<SuperAlgebra>,
        charts: Vec<Chart>,
        nerve: Nerve,
        subs: BTreeMap<(u16, u16), BTreeMap<GenId, Scalar>>,
        partition: Option<Vec<Scalar>>,
        periodic: Vec<Periodic>,
        cycles: BTreeMap<String, Cycle>,
    ) -> Result<Cover> {
        let ring = &alg.ring;
        let nb = ring.n_basis();
        if charts.is_empty() {
            return Err(Error::Manifest("cover has no charts".into()));
        }
        for ch in &charts {
            if ch.coords.len() != nb || ch.center.len() != nb {
                return Err(Error::Manifest(format!("chart `{}` has wrong coordinate arity", ch.name)));
            }
            for (k, g) in ch.coords.iter().enumerate() {
                if let Some(g) = g {
                    if ring.coord_slot(*g) != Some(k) {
                        return Err(Error::Manifest(format!(
                            "coordinate `{}` of chart `{}` is not dual to `{}`",
                            ring.gen_name(*g),
                            ch.name,
                            ring.basis()[k]
                        )));
                    }
                }
            }
        }
        let mut local = vec![false; ring.n_gens()];
        if charts.len() > 1 {
            for ch in &charts {
                for g in ch.coords.iter().flatten() {
                    local[*g as usize] = true;
                }
            }
        }
        for p in &periodic {
            if local[p.c as usize] || local[p.s as usize] {
                return Err(Error::Manifest("periodic pair generators must be global".into()));
            }
        }
        let sub_maps: BTreeMap<(u16, u16), HashMap<GenId, Scalar>> =
            subs.iter().map(|(k, m)| (*k, m.iter().map(|(g, s)| (*g, s.clone())).collect())).collect();
        let mut offsets = BTreeMap::new();
        for t in nerve.level(2) {
            let (a, b) = (t[0], t[1]);
            let (ca, cb) = (&charts[a as usize], &charts[b as usize]);
            let mut off = Some(Vec::with_capacity(nb));
            for k in 0..nb {
                let v = match (ca.coords[k], cb.coords[k]) {
                    (_, None) => Some(Rational::zero()),
                    (Some(ga), Some(gb)) if ga == gb => Some(Rational::zero()),
                    (Some(ga), Some(gb)) => sub_maps.get(&(a, b)).and_then(|m| m.get(&gb)).and_then(|img| {
                        let rest = img.sub(&Scalar::term(Mono::gen(ga), GaussRat::one()));
                        rest.as_constant().filter(|c| c.is_real()).map(|c| c.re)
                    }),
                    (None, Some(_)) => None,
                };
                match (v, off.as_mut()) {
                    (Some(x), Some(o)) => o.push(x),
                    _ => off = None,
                }
            }
            offsets.insert((a, b), off);
        }
        let levels = nerve.max_level().max(1);
        let diag_cache = (0..levels).map(|_| OnceLock::new()).collect();
        Ok(Cover { alg, charts, nerve, subs, partition, periodic, cycles, local, sub_maps, offsets, diag_cache })
    }

    pub fn n_charts(&self) -> usize {
        self.charts.len()
    }

    pub fn is_local(&self, g: GenId) -> bool {
        self.local[g as usize]
    }

    pub fn tuple_label(&self, t: &[u16]) -> String {
        t.iter().map(|&i| self.charts[i as usize].name.as_str()).collect::<Vec<_>>().join(",")
    }

    pub fn chart_id(&self, name: &str) -> Option<u16> {
        self.charts.iter().position(|c| c.name == name).map(|i| i as u16)
    }

    /// Translation offsets for the pair, when its substitution is affine.
    pub fn pair_offsets(&self, a: u16, b: u16) -> Option<&Vec<Rational>> {
        self.offsets.get(&(a, b)).and_then(|o| o.as_ref())
    }

    /// Chart-local generators used by `f` that do not belong to `chart`.
    pub fn foreign_gens(&self, f: &SuperForm, chart: u16) -> Vec<GenId> {
        let ch = &self.charts[chart as usize];
        f.gens_used()
            .into_iter()
            .filter(|&g| self.local[g as usize] && !ch.coords.contains(&Some(g)))
            .collect()
    }

    pub fn is_chart_free(&self, f: &SuperForm) -> bool {
        f.gens_used().iter().all(|&g| !self.local[g as usize])
    }

    /// Rewrites a form written in chart `from`'s generators into chart `to`'s.
    pub fn restrict(&self, f: &SuperForm, from: u16, to: u16) -> Result<SuperForm> {
        if from == to {
            return Ok(f.clone());
        }
        let foreign = self.foreign_gens(f, to);
        if foreign.is_empty() {
            return Ok(f.clone());
        }
        if to > from {
            return Err(Error::SubstitutionFailure(format!(
                "no rule rewrites chart `{}` into chart `{}`",
                self.charts[from as usize].name, self.charts[to as usize].name
            )));
        }
        let map = self.sub_maps.get(&(to, from)).ok_or_else(|| {
            Error::SubstitutionFailure(format!(
                "no substitution declared for `{},{}`",
                self.charts[to as usize].name, self.charts[from as usize].name
            ))
        })?;
        for g in &foreign {
            if !map.contains_key(g) {
                return Err(Error::SubstitutionFailure(format!(
                    "`{}` has no image on `{},{}`",
                    self.alg.ring.gen_name(*g),
                    self.charts[to as usize].name,
                    self.charts[from as usize].name
                )));
            }
        }
        let ring = &self.alg.ring;
        Ok(f.map_coeffs(|s| ring.substitute(s, map)))
    }

    /// `(δω)_t = Σ_i (−1)^i ω_{t∖t_i}` restricted to `t`.
    pub fn delta(&self, w: &Family) -> Result<Family> {
        let lvl = w.level;
        if w.comps.len() != self.nerve.level(lvl).len() {
            return Err(Error::MissingComponent(format!(
                "family has {} components but level {} has {} tuples",
                w.comps.len(),
                lvl,
                self.nerve.level(lvl).len()
            )));
        }
        let tuples = self.nerve.level(lvl + 1);
        let comps = tuples
            .par_iter()
            .map(|t| {
                let mut acc = SuperForm::zero();
                for i in 0..t.len() {
                    let f = face(t, i);
                    let idx = self
                        .nerve
                        .index_of(&f)
                        .ok_or_else(|| Error::MissingComponent(format!("face {} of {}", self.tuple_label(&f), self.tuple_label(t))))?;
                    let c = &w.comps[idx];
                    if c.is_zero() {
                        continue;
                    }
                    let r = self.restrict(c, f[0], t[0])?;
                    if i % 2 == 0 {
                        acc.add_assign(&r);
                    } else {
                        acc.sub_assign(&r);
                    }
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Family { level: lvl + 1, comps })
    }

    pub fn d_family(&self, w: &Family) -> Family {
        let alg = &self.alg;
        w.map(|c| alg.d(c))
    }

    /// The constant family `f` on every chart.
    pub fn global_family(&self, f: &SuperForm) -> Result<Family> {
        if !self.is_chart_free(f) {
            return Err(Error::NotDescended("global form uses chart-local generators".into()));
        }
        Ok(Family { level: 1, comps: vec![f.clone(); self.n_charts()] })
    }

    /// The common value of a level-1 family whose components agree and are
    /// chart-free.
    pub fn descend(&self, w: &Family) -> Result<SuperForm> {
        if w.level != 1 {
            return Err(Error::NotDescended(format!("family is at level {}", w.level)));
        }
        let first = w.comps.first().cloned().unwrap_or_default();
        for (i, c) in w.comps.iter().enumerate() {
            if !self.is_chart_free(c) {
                return Err(Error::NotDescended(format!("component on `{}` uses chart coordinates", self.charts[i].name)));
            }
            if *c != first {
                return Err(Error::NotDescended(format!(
                    "components on `{}` and `{}` differ",
                    self.charts[0].name, self.charts[i].name
                )));
            }
        }
        Ok(first)
    }

    /// Integer coboundary matrix from `level` to `level + 1` as triplets.
    pub fn delta_matrix(&self, level: usize) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for (r, t) in self.nerve.level(level + 1).iter().enumerate() {
            for i in 0..t.len() {
                let f = face(t, i);
                if let Some(c) = self.nerve.index_of(&f) {
                    out.push((r, c, if i % 2 == 0 { 1 } else { -1 }));
                }
            }
        }
        out
    }

    /// Cached unimodular diagonalization of `δ: C(level) → C(level+1)`.
    pub fn diagonal(&self, level: usize) -> Result<Arc<Diagonal>> {
        if level == 0 || level > self.diag_cache.len() {
            let rows = self.nerve.level(level + 1).len();
            let cols = self.nerve.level(level).len();
            return Ok(Arc::new(Diagonal::new(rows, cols, &self.delta_matrix(level))?));
        }
        self.diag_cache[level - 1]
            .get_or_init(|| {
                let rows = self.nerve.level(level + 1).len();
                let cols = self.nerve.level(level).len();
                Diagonal::new(rows, cols, &self.delta_matrix(level)).map(Arc::new)
            })
            .clone()
    }

    /// `∂Z` of an integer chain.
    pub fn boundary(&self, z: &Cycle) -> BTreeMap<usize, BigInt> {
        let mut out: BTreeMap<usize, BigInt> = BTreeMap::new();
        let tuples = self.nerve.level(z.level);
        for (&ti, v) in &z.coeffs {
            let t = &tuples[ti];
            if t.len() < 2 {
                continue;
            }
            for i in 0..t.len() {
                if let Some(fi) = self.nerve.index_of(&face(t, i)) {
                    let e = out.entry(fi).or_default();
                    if i % 2 == 0 {
                        *e += v;
                    } else {
                        *e -= v;
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Pairing of constant rational values on a level with a chain.
    pub fn pair(&self, values: &[Rational], z: &Cycle) -> Rational {
        let mut s = Rational::zero();
        for (&i, v) in &z.coeffs {
            s += &values[i] * Rational::from_integer(v.clone());
        }
        s
    }

    /// Checks every cover invariant and reports the first failure per check.
    pub fn validate(&self) -> Report {
        let mut rep = Report::new("validate_cover");
        let ring = &self.alg.ring;
        rep.value("charts", self.n_charts().to_string());
        rep.value("nerve", format!("{:?}", self.nerve.sizes()));

        let mut closure = None;
        'outer: for l in 2..=self.nerve.max_level() {
            for t in self.nerve.level(l) {
                for i in 0..t.len() {
                    let f = face(t, i);
                    if self.nerve.index_of(&f).is_none() {
                        closure = Some(format!("face {} of {} missing", self.tuple_label(&f), self.tuple_label(t)));
                        break 'outer;
                    }
                }
            }
        }
        rep.push(Check::from_option("nerve downward closed", closure));

        let mut subs_fail = None;
        for t in self.nerve.level(2) {
            let (a, b) = (t[0], t[1]);
            let (ca, cb) = (&self.charts[a as usize], &self.charts[b as usize]);
            let need: BTreeSet<GenId> =
                cb.coords.iter().flatten().copied().filter(|g| !ca.coords.contains(&Some(*g))).collect();
            let have: BTreeSet<GenId> = self.subs.get(&(a, b)).map(|m| m.keys().copied().collect()).unwrap_or_default();
            if need != have {
                subs_fail = Some(format!("pair {}: rules must cover exactly the coordinates of `{}` not shared with `{}`", self.tuple_label(t), cb.name, ca.name));
                break;
            }
            if let Some(m) = self.subs.get(&(a, b)) {
                for (g, img) in m {
                    let bad = img.gens_used().into_iter().find(|&h| self.local[h as usize] && !ca.coords.contains(&Some(h)));
                    if let Some(h) = bad {
                        subs_fail = Some(format!("pair {}: image of `{}` uses `{}`", self.tuple_label(t), ring.gen_name(*g), ring.gen_name(h)));
                        break;
                    }
                    let map = &self.sub_maps[&(a, b)];
                    let dimg = ring.d(img);
                    let dg: Vec<Scalar> = ring.deriv(*g).iter().map(|s| ring.substitute(s, map)).collect();
                    if dimg != dg {
                        subs_fail = Some(format!("pair {}: rule for `{}` does not commute with d", self.tuple_label(t), ring.gen_name(*g)));
                        break;
                    }
                }
            }
            if subs_fail.is_some() {
                break;
            }
        }
        for key in self.subs.keys() {
            if subs_fail.is_some() {
                break;
            }
            if self.nerve.index_of(&[key.0, key.1]).is_none() {
                subs_fail = Some(format!("rule declared for non-adjacent pair {}", self.tuple_label(&[key.0, key.1])));
            }
        }
        rep.push(Check::from_option("substitution rules complete", subs_fail));

        let mut triple_fail = None;
        for t in self.nerve.level(3) {
            let (a, b, c) = (t[0], t[1], t[2]);
            let cc = &self.charts[c as usize];
            for g in cc.coords.iter().flatten() {
                let x = self.alg.gen(*g);
                let direct = self.restrict(&x, c, a);
                let via = self.restrict(&x, c, b).and_then(|y| self.restrict(&y, b, a));
                match (direct, via) {
                    (Ok(p), Ok(q)) if p == q => {}
                    _ => {
                        triple_fail = Some(format!(
                            "triple {}: rewriting `{}` directly and through `{}` disagree",
                            self.tuple_label(t),
                            ring.gen_name(*g),
                            self.charts[b as usize].name
                        ));
                    }
                }
                if triple_fail.is_some() {
                    break;
                }
            }
            if triple_fail.is_some() {
                break;
            }
        }
        rep.push(Check::from_option("substitution rules consistent on triples", triple_fail));

        let pou = match &self.partition {
            None => Some("no partition of unity declared".to_string()),
            Some(p) if p.len() != self.n_charts() => Some("partition has wrong length".to_string()),
            Some(p) => {
                let mut sum = Scalar::zero();
                for s in p {
                    sum.add_assign(s);
                }
                let sum = ring.normal_form(&sum);
                if sum != Scalar::one() {
                    Some(format!("sum of partition minus 1 is {}", crate::expr::format_scalar(&self.alg, &sum.sub(&Scalar::one()))))
                } else if p.iter().any(|s| s.gens_used().iter().any(|&g| self.local[g as usize])) {
                    Some("partition uses chart-local generators".to_string())
                } else {
                    None
                }
            }
        };
        rep.push(Check::from_option("partition of unity sums to 1", pou));

        let mut rel_fail = None;
        for r in ring.relations() {
            let mut gs: Vec<GenId> = r.lhs.gens.iter().map(|&(g, _)| g).collect();
            gs.extend(r.rhs.gens_used());
            if let Some(&g) = gs.iter().find(|&&g| self.local[g as usize]) {
                rel_fail = Some(format!("relation `{}` involves chart coordinate `{}`", ring.mono_label(&r.lhs), ring.gen_name(g)));
                break;
            }
        }
        rep.push(Check::from_option("relations free of chart coordinates", rel_fail));

        let mut per_fail = None;
        for p in &self.periodic {
            let c = Scalar::term(Mono::gen(p.c), GaussRat::one());
            let s = Scalar::term(Mono::gen(p.s), GaussRat::one());
            let one = ring.mul(&c, &c).add(&ring.mul(&s, &s));
            let mut dc = vec![Scalar::zero(); ring.n_basis()];
            dc[p.slot] = Scalar::term(Mono::from_pairs(1, &[(p.s, 1)]), GaussRat::i());
            let mut ds = vec![Scalar::zero(); ring.n_basis()];
            ds[p.slot] = Scalar::term(Mono::from_pairs(1, &[(p.c, 1)]), -GaussRat::i());
            if one != Scalar::one() || ring.deriv(p.c) != dc.as_slice() || ring.deriv(p.s) != ds.as_slice() {
                per_fail = Some(format!(
                    "`{}`, `{}` must satisfy c^2 + s^2 = 1, dc = i*tau*s*{}, ds = -i*tau*c*{}",
                    ring.gen_name(p.c),
                    ring.gen_name(p.s),
                    ring.basis()[p.slot],
                    ring.basis()[p.slot]
                ));
                break;
            }
        }
        rep.push(Check::from_option("periodic pairs", per_fail));

        let mut cyc_fail = None;
        for (name, z) in &self.cycles {
            let b = self.boundary(z);
            if let Some((&i, _)) = b.iter().next() {
                let t = &self.nerve.level(z.level - 1)[i];
                cyc_fail = Some(format!("cycle `{}` has boundary at {}", name, self.tuple_label(t)));
                break;
            }
        }
        rep.push(Check::from_option("declared cycles are closed", cyc_fail));
        rep
    }
}
