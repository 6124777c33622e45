//! Manifest, certificate and decomposition documents.
//!
//! ```text
//! format: 1
//! name: "circle"
//! ring {
//!   basis: [e]
//!   odd: [t]
//!   generators { c: "i*tau*s*e", s: "-i*tau*c*e", a_0: "e" }
//!   relations { "c^2": "1 - s^2" }
//!   order: [c, s]
//! }
//! cover {
//!   charts { A0 { coords: [a_0], center: [0] } }
//!   nerve: [[A0, A1], [A1, A2], [A0, A2]]
//!   substitutions { "A0,A1" { a_1: "a_0" } }
//!   partition { A0: "(1 + c)/3" }
//!   periodic: [[c, s, e]]
//!   cycles { loop { level: 2, chain { "A0,A1": 1 } } }
//! }
//! objects {
//!   forms { b: "tau*e" }
//!   gerbes { G { h { "A0,A1,A2": "0" } A { } B { A0: "0" } } }
//! }
//! ```
//!
//! Family entries that are absent are zero.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::body_soul::Decomposition;
use crate::cover::{Chart, Cover, Cycle, Family, Nerve, Periodic};
use crate::deligne::{self, Certificate, Gerbe};
use crate::error::{Error, Result};
use crate::expr::{format_form, format_scalar, parse_form, parse_scalar};
use crate::keytree::{self, bare_or_quoted, Emitter, Node, Pos};
use crate::number::Rational;
use crate::scalar::{GenId, Ring, Scalar};
use crate::superalg::{ExtMono, SuperAlgebra, SuperForm};

pub const DEFAULT_MAX_LEVEL: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct Manifest {
    pub name: String,
    pub facets: Vec<Vec<u16>>,
    pub max_level: usize,
    pub cover: Arc<Cover>,
    pub forms: BTreeMap<String, SuperForm>,
    pub gerbes: BTreeMap<String, Gerbe>,
}

const KNOWN_TOP: &[&str] = &["format", "name", "ring", "cover", "objects"];

fn check_keys(node: &Node, allowed: &[&str]) -> Result<()> {
    for e in node.entries()? {
        if !allowed.contains(&e.key.as_str()) {
            return Err(e.pos.err(format!("unknown key `{}`", e.key)));
        }
    }
    Ok(())
}

fn check_format(doc: &Node) -> Result<()> {
    let f = doc.require("format")?;
    if f.text()? != "1" {
        return Err(f.pos().err("unsupported format version (expected 1)"));
    }
    Ok(())
}

fn names(node: &Node) -> Result<Vec<(String, Pos)>> {
    node.items()?.iter().map(|n| Ok((n.text()?.to_string(), n.pos()))).collect()
}

fn rational(node: &Node) -> Result<Rational> {
    let t = node.text()?;
    Rational::from_str(t).map_err(|_| node.pos().err(format!("`{}` is not an exact rational", t)))
}

fn integer(node: &Node) -> Result<BigInt> {
    let t = node.text()?;
    BigInt::from_str(t).map_err(|_| node.pos().err(format!("`{}` is not an integer", t)))
}

fn form_at(alg: &SuperAlgebra, node: &Node) -> Result<SuperForm> {
    let p = node.content_pos();
    parse_form(alg, node.text()?).map_err(|e| e.locate(p.line, p.col))
}

fn scalar_at(alg: &SuperAlgebra, node: &Node) -> Result<Scalar> {
    let p = node.content_pos();
    parse_scalar(alg, node.text()?).map_err(|e| e.locate(p.line, p.col))
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_')
}

fn parse_ring(node: &Node) -> Result<SuperAlgebra> {
    check_keys(node, &["basis", "odd", "generators", "relations", "order"])?;
    let basis = names(node.require("basis")?)?;
    let odd = match node.get("odd")? {
        Some(n) => names(n)?,
        None => Vec::new(),
    };
    let gen_node = node.require("generators")?;
    let gens: Vec<(String, Pos)> = gen_node.entries()?.iter().map(|e| (e.key.clone(), e.pos)).collect();
    let mut seen: HashMap<String, Pos> = HashMap::new();
    for (n, p) in basis.iter().chain(&odd).chain(&gens) {
        if !is_ident(n) || n == "i" || n == "tau" {
            return Err(p.err(format!("`{}` is not a valid symbol name", n)));
        }
        if seen.insert(n.clone(), *p).is_some() {
            return Err(p.err(format!("symbol `{}` declared twice", n)));
        }
    }
    for (n, p) in &gens {
        if let Some(rest) = n.strip_prefix('d') {
            if odd.iter().any(|(o, _)| o == rest) {
                return Err(p.err(format!("generator `{}` clashes with the differential of `{}`", n, rest)));
            }
        }
    }
    let order: Vec<String> = match node.get("order")? {
        Some(n) => {
            let v = names(n)?;
            for (o, p) in &v {
                if !gens.iter().any(|(g, _)| g == o) {
                    return Err(p.err(format!("unknown generator `{}` in order", o)));
                }
            }
            v.into_iter().map(|x| x.0).collect()
        }
        None => Vec::new(),
    };
    let odd_names: Vec<String> = odd.into_iter().map(|x| x.0).collect();
    let mut ring = Ring::new(
        basis.into_iter().map(|x| x.0).collect(),
        gens.iter().map(|x| x.0.clone()).collect(),
        &order,
    )?;
    let nb = ring.n_basis();
    let tmp = SuperAlgebra::new(ring.clone(), odd_names.clone())?;
    for (gi, e) in gen_node.entries()?.iter().enumerate() {
        let f = form_at(&tmp, &e.value)?;
        let mut deriv = vec![Scalar::zero(); nb];
        for (m, s) in f.terms() {
            let ok = m.theta == 0 && m.n_dtheta() == 0 && m.n_e() == 1;
            if !ok {
                let p = e.value.content_pos();
                return Err(p.err(format!("derivative of `{}` must be a combination of basis 1-forms", e.key)));
            }
            deriv[m.e.trailing_zeros() as usize] = s.clone();
        }
        ring.set_derivation(gi as GenId, deriv)?;
    }
    if let Some(rel) = node.get("relations")? {
        let tmp = SuperAlgebra::new(ring.clone(), odd_names.clone())?;
        for e in rel.entries()? {
            let lhs = parse_scalar(&tmp, &e.key).map_err(|x| x.locate(e.pos.line, e.pos.col + 1))?;
            let lhs_mono = match lhs.terms().iter().next() {
                Some((m, c)) if lhs.len() == 1 && c.is_one() && m.tau == 0 && !m.is_one() => m.clone(),
                _ => return Err(e.pos.err("relation left side must be a single monic monomial")),
            };
            let rhs = scalar_at(&tmp, &e.value)?;
            ring.add_relation(lhs_mono, rhs, &e.key)?;
        }
    }
    ring.validate()?;
    SuperAlgebra::new(ring, odd_names)
}

fn tuple_key(cover_names: &HashMap<String, u16>, key: &str, pos: Pos) -> Result<Vec<u16>> {
    let mut out = Vec::new();
    for part in key.split(',') {
        let p = part.trim();
        let id = cover_names.get(p).ok_or_else(|| pos.err(format!("unknown chart `{}`", p)))?;
        out.push(*id);
    }
    if out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(pos.err(format!("tuple `{}` must list distinct charts in declaration order", key)));
    }
    Ok(out)
}

struct CoverParts {
    cover: Cover,
    facets: Vec<Vec<u16>>,
    max_level: usize,
}

fn parse_cover(node: &Node, alg: Arc<SuperAlgebra>) -> Result<CoverParts> {
    check_keys(node, &["charts", "nerve", "max_level", "substitutions", "partition", "periodic", "cycles"])?;
    let ring = &alg.ring;
    let nb = ring.n_basis();
    let mut charts = Vec::new();
    let mut ids: HashMap<String, u16> = HashMap::new();
    for e in node.require("charts")?.entries()? {
        check_keys(&e.value, &["coords", "center"])?;
        if !is_ident(&e.key) {
            return Err(e.pos.err(format!("`{}` is not a valid chart name", e.key)));
        }
        let cn = e.value.require("coords")?;
        let coords_n = cn.items()?;
        if coords_n.len() != nb {
            return Err(cn.pos().err(format!("expected {} coordinates, one per basis 1-form", nb)));
        }
        let mut coords = Vec::with_capacity(nb);
        for c in coords_n {
            let t = c.text()?;
            coords.push(if t == "-" {
                None
            } else {
                Some(ring.gen_id(t).map_err(|_| c.pos().err(format!("unknown generator `{}`", t)))?)
            });
        }
        let center = match e.value.get("center")? {
            Some(cn) => {
                let v = cn.items()?;
                if v.len() != nb {
                    return Err(cn.pos().err(format!("expected {} center values", nb)));
                }
                v.iter().map(rational).collect::<Result<Vec<_>>>()?
            }
            None => vec![Rational::from_integer(0.into()); nb],
        };
        ids.insert(e.key.clone(), charts.len() as u16);
        charts.push(Chart { name: e.key.clone(), coords, center });
    }
    let max_level = match node.get("max_level")? {
        Some(n) => {
            let v = integer(n)?;
            usize::try_from(v).ok().filter(|&x| (1..=8).contains(&x)).ok_or_else(|| n.pos().err("max_level must be between 1 and 8"))?
        }
        None => DEFAULT_MAX_LEVEL,
    };
    let mut facets = Vec::new();
    if let Some(n) = node.get("nerve")? {
        for f in n.items()? {
            let mut v = Vec::new();
            for c in f.items()? {
                let t = c.text()?;
                v.push(*ids.get(t).ok_or_else(|| c.pos().err(format!("unknown chart `{}`", t)))?);
            }
            let mut s = v.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != v.len() {
                return Err(f.pos().err("nerve simplex repeats a chart"));
            }
            facets.push(v);
        }
    }
    for i in 0..charts.len() as u16 {
        if !facets.iter().any(|f| f.contains(&i)) {
            facets.push(vec![i]);
        }
    }
    let nerve = Nerve::from_facets(&facets, max_level);
    let tmp_alg = alg.clone();
    let mut subs: BTreeMap<(u16, u16), BTreeMap<GenId, Scalar>> = BTreeMap::new();
    if let Some(n) = node.get("substitutions")? {
        for e in n.entries()? {
            let t = tuple_key(&ids, &e.key, e.pos)?;
            if t.len() != 2 {
                return Err(e.pos.err("substitutions are declared on pairs"));
            }
            let mut m = BTreeMap::new();
            for r in e.value.entries()? {
                let g = ring.gen_id(&r.key).map_err(|_| r.pos.err(format!("unknown generator `{}`", r.key)))?;
                m.insert(g, scalar_at(&tmp_alg, &r.value)?);
            }
            subs.insert((t[0], t[1]), m);
        }
    }
    let partition = match node.get("partition")? {
        Some(n) => {
            let mut p = vec![Scalar::zero(); charts.len()];
            for e in n.entries()? {
                let i = *ids.get(&e.key).ok_or_else(|| e.pos.err(format!("unknown chart `{}`", e.key)))?;
                p[i as usize] = scalar_at(&alg, &e.value)?;
            }
            Some(p)
        }
        None => None,
    };
    let mut periodic = Vec::new();
    if let Some(n) = node.get("periodic")? {
        for p in n.items()? {
            let v = p.items()?;
            if v.len() != 3 {
                return Err(p.pos().err("periodic entries are [cos, sin, basis]"));
            }
            let g = |k: usize| -> Result<GenId> {
                ring.gen_id(v[k].text()?).map_err(|_| v[k].pos().err(format!("unknown generator `{}`", v[k].text().unwrap_or(""))))
            };
            let slot = ring
                .basis_id(v[2].text()?)
                .ok_or_else(|| v[2].pos().err(format!("unknown basis 1-form `{}`", v[2].text().unwrap_or(""))))?;
            periodic.push(Periodic { c: g(0)?, s: g(1)?, slot });
        }
    }
    let mut cycles = BTreeMap::new();
    if let Some(n) = node.get("cycles")? {
        for e in n.entries()? {
            check_keys(&e.value, &["level", "chain"])?;
            let ln = e.value.require("level")?;
            let level = usize::try_from(integer(ln)?).map_err(|_| ln.pos().err("invalid level"))?;
            let mut coeffs = BTreeMap::new();
            for c in e.value.require("chain")?.entries()? {
                let t = tuple_key(&ids, &c.key, c.pos)?;
                if t.len() != level {
                    return Err(c.pos.err(format!("tuple has {} charts, cycle level is {}", t.len(), level)));
                }
                let idx = nerve.index_of(&t).ok_or_else(|| c.pos.err(format!("`{}` is not in the nerve", c.key)))?;
                let v = integer(&c.value)?;
                if coeffs.insert(idx, v).is_some() {
                    return Err(c.pos.err("tuple listed twice"));
                }
            }
            cycles.insert(e.key.clone(), Cycle { level, coeffs });
        }
    }
    let cover = Cover::new(alg, charts, nerve, subs, partition, periodic, cycles)?;
    Ok(CoverParts { cover, facets, max_level })
}

/// Parses a family block keyed by tuple labels; absent entries are zero.
/// Components must be even forms of degree `degree`.
pub fn parse_family(cover: &Cover, node: &Node, field: &str, level: usize, degree: u32) -> Result<Family> {
    let ids: HashMap<String, u16> = cover.charts.iter().enumerate().map(|(i, c)| (c.name.clone(), i as u16)).collect();
    let mut fam = Family::zero(cover, level);
    let mut seen = vec![false; fam.comps.len()];
    for e in node.entries()? {
        let t = tuple_key(&ids, &e.key, e.pos)?;
        if t.len() != level {
            return Err(e.pos.err(format!("expected a tuple of {} charts", level)));
        }
        let i = cover.nerve.index_of(&t).ok_or_else(|| e.pos.err(format!("`{}` is not in the nerve", e.key)))?;
        if seen[i] {
            return Err(e.pos.err("tuple listed twice"));
        }
        seen[i] = true;
        let f = form_at(&cover.alg, &e.value)?;
        if let Some(m) = f.terms().keys().find(|m| m.degree() != degree || m.parity() != 0) {
            let what = if m.parity() != 0 { "odd" } else { "of the wrong degree" };
            return Err(e.value.content_pos().err(format!(
                "`{}` on {}: monomial {} (expected an even {}-form)",
                field,
                e.key,
                what,
                degree
            )));
        }
        fam.comps[i] = f;
    }
    Ok(fam)
}

fn parse_ints(cover: &Cover, node: &Node, level: usize) -> Result<Vec<BigInt>> {
    let ids: HashMap<String, u16> = cover.charts.iter().enumerate().map(|(i, c)| (c.name.clone(), i as u16)).collect();
    let mut v = vec![BigInt::from(0); cover.nerve.level(level).len()];
    for e in node.entries()? {
        let t = tuple_key(&ids, &e.key, e.pos)?;
        let i = if t.len() == level { cover.nerve.index_of(&t) } else { None };
        let i = i.ok_or_else(|| e.pos.err(format!("`{}` is not a {}-tuple of the nerve", e.key, level)))?;
        v[i] = integer(&e.value)?;
    }
    Ok(v)
}

pub fn parse_gerbe(cover: &Cover, node: &Node) -> Result<Gerbe> {
    check_keys(node, &["h", "A", "B"])?;
    let fam = |k: &str, l: usize| -> Result<Family> {
        match node.get(k)? {
            Some(n) => parse_family(cover, n, k, l, 3 - l as u32),
            None => Ok(Family::zero(cover, l)),
        }
    };
    Ok(Gerbe { h: fam("h", 3)?, a: fam("A", 2)?, b: fam("B", 1)? })
}

pub fn parse_certificate(cover: &Cover, node: &Node) -> Result<Certificate> {
    check_keys(node, &["f", "z", "m", "format", "kind", "gerbe"])?;
    let f = match node.get("f")? {
        Some(n) => parse_family(cover, n, "f", 2, 0)?,
        None => Family::zero(cover, 2),
    };
    let z = match node.get("z")? {
        Some(n) => parse_family(cover, n, "z", 1, 1)?,
        None => Family::zero(cover, 1),
    };
    let m = match node.get("m")? {
        Some(n) => parse_ints(cover, n, 3)?,
        None => vec![BigInt::from(0); cover.nerve.level(3).len()],
    };
    Ok(Certificate { f, z, m })
}

/// A document produced by `trivialize` or `decompose`.
#[derive(Clone, Debug, PartialEq)]
pub enum Evidence {
    Certificate(Certificate),
    Decomposition(Decomposition),
}

pub fn parse_evidence(cover: &Cover, text: &str) -> Result<(Option<String>, Evidence)> {
    let doc = keytree::parse(text)?;
    check_format(&doc)?;
    let kind = doc.require("kind")?;
    let gerbe = doc.get("gerbe")?.map(|n| n.text().map(str::to_string)).transpose()?;
    match kind.text()? {
        "certificate" => Ok((gerbe, Evidence::Certificate(parse_certificate(cover, &doc)?))),
        "decomposition" => {
            check_keys(&doc, &["format", "kind", "gerbe", "body", "beta", "certificate"])?;
            let body = parse_gerbe(cover, doc.require("body")?)?;
            let beta = form_at(&cover.alg, doc.require("beta")?)?;
            let certificate = parse_certificate(cover, doc.require("certificate")?)?;
            Ok((gerbe, Evidence::Decomposition(Decomposition { body, beta, certificate })))
        }
        other => Err(kind.pos().err(format!("unknown document kind `{}`", other))),
    }
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Manifest> {
        let doc = keytree::parse(text)?;
        check_keys(&doc, KNOWN_TOP)?;
        check_format(&doc)?;
        let name = match doc.get("name")? {
            Some(n) => n.text()?.to_string(),
            None => String::new(),
        };
        let alg = Arc::new(parse_ring(doc.require("ring")?)?);
        let cover_node = doc.require("cover")?;
        let parts = parse_cover(cover_node, alg)?;
        let rep = parts.cover.validate();
        if let Some(f) = rep.first_failure() {
            return Err(cover_node.pos().err(format!(
                "cover validation failed: {}: {}",
                f.name,
                f.detail.clone().unwrap_or_default()
            )));
        }
        let cover = Arc::new(parts.cover);
        let mut forms = BTreeMap::new();
        let mut gerbes = BTreeMap::new();
        if let Some(obj) = doc.get("objects")? {
            check_keys(obj, &["forms", "gerbes"])?;
            if let Some(fs) = obj.get("forms")? {
                for e in fs.entries()? {
                    forms.insert(e.key.clone(), form_at(&cover.alg, &e.value)?);
                }
            }
            if let Some(gs) = obj.get("gerbes")? {
                for e in gs.entries()? {
                    gerbes.insert(e.key.clone(), parse_gerbe(&cover, &e.value)?);
                }
            }
        }
        Ok(Manifest { name, facets: parts.facets, max_level: parts.max_level, cover, forms, gerbes })
    }

    /// Parses and additionally requires every gerbe to pass `check`.
    pub fn parse_checked(text: &str) -> Result<Manifest> {
        let m = Manifest::parse(text)?;
        let doc = keytree::parse(text)?;
        for (name, g) in &m.gerbes {
            let rep = deligne::check(&m.cover, g);
            if let Some(f) = rep.first_failure() {
                let pos = doc
                    .get("objects")?
                    .and_then(|o| o.get("gerbes").ok().flatten())
                    .and_then(|gs| gs.entries().ok())
                    .and_then(|es| es.iter().find(|e| &e.key == name).map(|e| e.pos))
                    .unwrap_or_default();
                return Err(pos.err(format!(
                    "gerbe `{}` fails {}: {}",
                    name,
                    f.name,
                    f.detail.clone().unwrap_or_default()
                )));
            }
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Manifest> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Manifest(format!("cannot read {}: {}", path.display(), e)))?;
        Manifest::parse(&text)
    }

    pub fn gerbe(&self, name: &str) -> Result<&Gerbe> {
        self.gerbes.get(name).ok_or_else(|| Error::Manifest(format!("no gerbe named `{}`", name)))
    }

    pub fn form(&self, name: &str) -> Result<&SuperForm> {
        self.forms.get(name).ok_or_else(|| Error::Manifest(format!("no form named `{}`", name)))
    }

    /// A named form, or else an expression parsed over the manifest's algebra.
    pub fn form_or_expr(&self, s: &str) -> Result<SuperForm> {
        if let Some(f) = self.forms.get(s) {
            return Ok(f.clone());
        }
        parse_form(&self.cover.alg, s).map_err(|e| e.locate(1, 1))
    }

    pub fn emit(&self) -> String {
        let cover = &self.cover;
        let alg = &cover.alg;
        let ring = &alg.ring;
        let mut em = Emitter::new();
        em.entry("format", "1");
        if !self.name.is_empty() {
            em.entry_str("name", &self.name);
        }
        em.open("ring");
        em.entry_array("basis", &ring.basis().iter().map(|s| bare_or_quoted(s)).collect::<Vec<_>>());
        if alg.n_odd() > 0 {
            em.entry_array("odd", &alg.odd_names().iter().map(|s| bare_or_quoted(s)).collect::<Vec<_>>());
        }
        em.open("generators");
        for (gi, g) in ring.generators().iter().enumerate() {
            let mut f = SuperForm::zero();
            for (k, s) in ring.deriv(gi as GenId).iter().enumerate() {
                f.add_term(ExtMono::e(k), s);
            }
            em.entry_str(&g.name, &format_form(alg, &f));
        }
        em.close();
        if !ring.relations().is_empty() {
            em.open("relations");
            for r in ring.relations() {
                let lhs = format_scalar(alg, &Scalar::term(r.lhs.clone(), crate::number::GaussRat::one()));
                em.entry_str(&lhs, &format_scalar(alg, &r.rhs));
            }
            em.close();
        }
        em.entry_array("order", &ring.order().iter().map(|s| bare_or_quoted(s)).collect::<Vec<_>>());
        em.close();

        em.open("cover");
        em.open("charts");
        for ch in &cover.charts {
            em.open(&ch.name);
            let coords: Vec<String> =
                ch.coords.iter().map(|g| g.map(|g| ring.gen_name(g).to_string()).unwrap_or_else(|| "-".into())).collect();
            em.entry_array("coords", &coords);
            em.entry_array("center", &ch.center.iter().map(rat_text).collect::<Vec<_>>());
            em.close();
        }
        em.close();
        let facets: Vec<String> = self
            .facets
            .iter()
            .map(|f| format!("[{}]", f.iter().map(|&i| cover.charts[i as usize].name.clone()).collect::<Vec<_>>().join(", ")))
            .collect();
        em.entry_array("nerve", &facets);
        em.entry("max_level", &self.max_level.to_string());
        if !cover.subs.is_empty() {
            em.open("substitutions");
            for ((a, b), m) in &cover.subs {
                em.open_str(&cover.tuple_label(&[*a, *b]));
                for (g, s) in m {
                    em.entry_str(ring.gen_name(*g), &format_scalar(alg, s));
                }
                em.close();
            }
            em.close();
        }
        if let Some(p) = &cover.partition {
            em.open("partition");
            for (i, s) in p.iter().enumerate() {
                if !s.is_zero() {
                    em.entry_str(&cover.charts[i].name, &format_scalar(alg, s));
                }
            }
            em.close();
        }
        if !cover.periodic.is_empty() {
            let ps: Vec<String> = cover
                .periodic
                .iter()
                .map(|p| format!("[{}, {}, {}]", ring.gen_name(p.c), ring.gen_name(p.s), ring.basis()[p.slot]))
                .collect();
            em.entry_array("periodic", &ps);
        }
        if !cover.cycles.is_empty() {
            em.open("cycles");
            for (name, z) in &cover.cycles {
                em.open(name);
                em.entry("level", &z.level.to_string());
                em.open("chain");
                let tuples = cover.nerve.level(z.level);
                for (&i, v) in &z.coeffs {
                    em.entry(&cover.tuple_label(&tuples[i]), &v.to_string());
                }
                em.close();
                em.close();
            }
            em.close();
        }
        em.close();

        if !self.forms.is_empty() || !self.gerbes.is_empty() {
            em.open("objects");
            if !self.forms.is_empty() {
                em.open("forms");
                for (n, f) in &self.forms {
                    em.entry_str(n, &format_form(alg, f));
                }
                em.close();
            }
            if !self.gerbes.is_empty() {
                em.open("gerbes");
                for (n, g) in &self.gerbes {
                    em.open(n);
                    emit_gerbe_body(&mut em, cover, g);
                    em.close();
                }
                em.close();
            }
            em.close();
        }
        em.finish()
    }
}

fn rat_text(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn emit_family(em: &mut Emitter, cover: &Cover, key: &str, w: &Family) {
    em.open(key);
    let tuples = cover.nerve.level(w.level);
    for (i, c) in w.comps.iter().enumerate() {
        if !c.is_zero() {
            em.entry_str(&cover.tuple_label(&tuples[i]), &format_form(&cover.alg, c));
        }
    }
    em.close();
}

fn emit_ints(em: &mut Emitter, cover: &Cover, key: &str, level: usize, v: &[BigInt]) {
    em.open(key);
    let tuples = cover.nerve.level(level);
    for (i, x) in v.iter().enumerate() {
        if x.sign() != num_bigint::Sign::NoSign {
            em.entry(&cover.tuple_label(&tuples[i]), &x.to_string());
        }
    }
    em.close();
}

fn emit_gerbe_body(em: &mut Emitter, cover: &Cover, g: &Gerbe) {
    emit_family(em, cover, "h", &g.h);
    emit_family(em, cover, "A", &g.a);
    emit_family(em, cover, "B", &g.b);
}

fn emit_certificate_body(em: &mut Emitter, cover: &Cover, c: &Certificate) {
    emit_family(em, cover, "f", &c.f);
    emit_family(em, cover, "z", &c.z);
    emit_ints(em, cover, "m", 3, &c.m);
}

pub fn emit_certificate(cover: &Cover, gerbe: &str, c: &Certificate) -> String {
    let mut em = Emitter::new();
    em.entry("format", "1");
    em.entry("kind", "certificate");
    em.entry_str("gerbe", gerbe);
    emit_certificate_body(&mut em, cover, c);
    em.finish()
}

pub fn emit_decomposition(cover: &Cover, gerbe: &str, d: &Decomposition) -> String {
    let mut em = Emitter::new();
    em.entry("format", "1");
    em.entry("kind", "decomposition");
    em.entry_str("gerbe", gerbe);
    em.open("body");
    emit_gerbe_body(&mut em, cover, &d.body);
    em.close();
    em.entry_str("beta", &format_form(&cover.alg, &d.beta));
    em.open("certificate");
    emit_certificate_body(&mut em, cover, &d.certificate);
    em.close();
    em.finish()
}

/// A gerbe as a standalone `objects { gerbes { name { … } } }` snippet.
pub fn emit_gerbe(cover: &Cover, name: &str, g: &Gerbe) -> String {
    let mut em = Emitter::new();
    em.open(name);
    emit_gerbe_body(&mut em, cover, g);
    em.close();
    em.finish()
}
