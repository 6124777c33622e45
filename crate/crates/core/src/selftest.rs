//! Property suite over the built-in corpus.

use std::sync::Arc;

use rayon::prelude::*;

use crate::body_soul;
use crate::cech_solve;
use crate::cover::Cover;
use crate::deligne::{self, Gerbe};
use crate::error::Result;
use crate::examples;
use crate::expr::{format_form, parse_form};
use crate::manifest::Manifest;
use crate::poincare::primitive_on;
use crate::report::{Check, Report};
use crate::scalar::{GenId, Scalar};
use crate::superalg::{ChartMap, SuperForm, SuperFunction};
use crate::testing::{global_gens, Gen, Shape};

#[derive(Clone, Debug)]
pub struct Config {
    pub seed: u64,
    /// Random cases per property.
    pub cases: usize,
}

impl Default for Config {
    fn default() -> Config {
        Config { seed: 1, cases: 40 }
    }
}

pub struct Corpus {
    pub manifests: Vec<(String, Manifest)>,
}

impl Corpus {
    pub fn build() -> Result<Corpus> {
        let manifests = examples::NAMES
            .par_iter()
            .map(|(n, _)| Ok((n.to_string(), examples::build(n)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Corpus { manifests })
    }

    pub fn get(&self, name: &str) -> &Manifest {
        &self.manifests.iter().find(|(n, _)| n == name).expect("built-in").1
    }
}

/// Runs `f`; `Ok(None)` passes, `Ok(Some(why))` and errors fail.
fn law(name: &str, f: impl FnOnce() -> Result<Option<String>>) -> Check {
    match f() {
        Ok(fail) => Check::from_option(name, fail),
        Err(e) => Check::fail(name, e.to_string()),
    }
}

fn first<T>(items: impl IntoIterator<Item = Result<Option<T>>>) -> Result<Option<T>> {
    for x in items {
        if let Some(v) = x? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

type Section = fn(&Config, &Corpus) -> Report;

pub fn run(cfg: &Config) -> Report {
    let mut rep = Report::new("selftest");
    let corpus = match Corpus::build() {
        Ok(c) => c,
        Err(e) => {
            rep.push(Check::fail("build corpus", e.to_string()));
            return rep;
        }
    };
    let sections: [(&str, Section); 6] = [
        ("scalar_ring", scalar_ring),
        ("super_algebra", super_algebra),
        ("cech_complex", cech_complex),
        ("deligne_gerbe", deligne_gerbe),
        ("body_soul", body_soul_section),
        ("cli_manifest", cli_manifest),
    ];
    let parts: Vec<(&str, Report)> = sections.par_iter().map(|(n, f)| (*n, f(cfg, &corpus))).collect();
    for (n, r) in parts {
        rep.extend(n, r);
    }
    rep
}

fn scalar_ring(cfg: &Config, corpus: &Corpus) -> Report {
    let mut rep = Report::new("scalar_ring");
    let m = corpus.get("torus2");
    let alg = &m.cover.alg;
    let ring = &alg.ring;
    let gens: Vec<GenId> = (0..ring.n_gens() as GenId).take(6).collect();
    let mut g = Gen::new(cfg.seed);
    let triples: Vec<[Scalar; 3]> =
        (0..cfg.cases).map(|_| [0, 1, 2].map(|_| g.scalar(alg, &gens, 3, 3))).collect();
    rep.push(law("associativity and distributivity", || {
        Ok(triples.iter().find_map(|[a, b, c]| {
            let l = ring.mul(&ring.mul(a, b), c);
            let r = ring.mul(a, &ring.mul(b, c));
            let dl = ring.mul(a, &b.add(c));
            let dr = ring.mul(a, b).add(&ring.mul(a, c));
            (l != r || dl != dr || ring.mul(a, b) != ring.mul(b, a)).then(|| "ring axiom fails".to_string())
        }))
    }));
    rep.push(law("normal form is idempotent", || {
        Ok(triples.iter().find_map(|[a, b, _]| {
            let raw = a.add(b);
            let n = ring.normal_form(&raw);
            (ring.normal_form(&n) != n).then(|| "normal_form(normal_form(s)) differs".to_string())
        }))
    }));
    rep.push(law("relations are compatible with derivations", || ring.validate().map(|_| None)));
    rep.push(law("units are constants times tau powers", || {
        let t = Scalar::tau_pow(1);
        let inv = ring.try_invert(&t)?;
        let c1 = Scalar::term(crate::scalar::Mono::gen(0), crate::number::GaussRat::one());
        Ok(match (ring.mul(&t, &inv) == Scalar::one(), ring.try_invert(&c1).is_err()) {
            (true, true) => None,
            _ => Some("inversion".into()),
        })
    }));
    rep
}

/// An odd-linear change of coordinates on `R^{2|3}`.
fn rn_map(alg: &Arc<crate::superalg::SuperAlgebra>) -> Result<ChartMap> {
    let f = |s: &str| parse_form(alg, s).map_err(|e| e.locate(1, 1));
    ChartMap::new(
        alg.clone(),
        alg.clone(),
        vec![f("x + t1*t2")?, f("y + 2*x")?],
        vec![f("t1 + x*t2")?, f("t2")?, f("t3 + t1*t2*t3 - y*t1")?],
    )
}

fn super_algebra(cfg: &Config, corpus: &Corpus) -> Report {
    let mut rep = Report::new("super_algebra");
    let c = &corpus.get("rn").cover;
    let alg = &c.alg;
    let gens = global_gens(c);
    let mut g = Gen::new(cfg.seed + 1);
    let forms: Vec<SuperForm> = (0..cfg.cases).map(|_| g.form(alg, &gens, &Shape::any())).collect();
    let pairs: Vec<(SuperForm, SuperForm)> = (0..cfg.cases)
        .map(|_| {
            let (p, q) = (g.below(3), g.below(2));
            let (r, s) = (g.below(3), g.below(2));
            (g.form(alg, &gens, &Shape::homogeneous(p, q)), g.form(alg, &gens, &Shape::homogeneous(r, s)))
        })
        .collect();
    rep.push(law("d∘d = 0", || Ok(forms.iter().find(|f| !alg.d(&alg.d(f)).is_zero()).map(|f| format_form(alg, f)))));
    rep.push(law("wedge sign law", || {
        Ok(pairs.iter().find_map(|(a, b)| {
            let (Some(p), Some(q)) = (a.degree(), a.parity()) else { return None };
            let (Some(r), Some(s)) = (b.degree(), b.parity()) else { return None };
            let sign = (p * r + q * s) % 2;
            let ba = alg.mul(b, a);
            let rhs = if sign == 0 { ba } else { ba.neg() };
            (alg.mul(a, b) != rhs).then(|| format!("{} and {}", format_form(alg, a), format_form(alg, b)))
        }))
    }));
    rep.push(law("Leibniz rule", || {
        Ok(pairs.iter().find_map(|(a, b)| {
            let p = a.degree()?;
            let lhs = alg.d(&alg.mul(a, b));
            let t = alg.mul(a, &alg.d(b));
            let rhs = alg.mul(&alg.d(a), b).add(&if p % 2 == 0 { t } else { t.neg() });
            (lhs != rhs).then(|| format_form(alg, a))
        }))
    }));
    rep.push(law("pullback commutes with d", || {
        let phi = rn_map(alg)?;
        first(forms.iter().map(|f| {
            Ok((phi.pullback(&alg.d(f))? != alg.d(&phi.pullback(f)?)).then(|| format_form(alg, f)))
        }))
    }));
    rep.push(law("body/soul split is a projection", || {
        Ok(forms.iter().find_map(|f| {
            let (b, s) = alg.body_soul_split(f);
            let (bb, bs) = alg.body_soul_split(&b);
            (b.add(&s) != *f || bb != b || !bs.is_zero() || !s.is_pure_soul()).then(|| format_form(alg, f))
        }))
    }));
    rep.push(law("dK + Kd = id on pure-soul forms", || {
        let mut g = Gen::new(cfg.seed + 2);
        first((0..cfg.cases).map(|_| {
            let w = g.form(alg, &gens, &Shape::any().soul());
            let lhs = alg.d(&alg.soul_homotopy(&w)?).add(&alg.soul_homotopy(&alg.d(&w))?);
            Ok((lhs != w).then(|| format_form(alg, &w)))
        }))
    }));
    rep.push(law("exp and log are inverse on nilpotents", || {
        let mut g = Gen::new(cfg.seed + 3);
        first((0..cfg.cases).map(|_| {
            let n = SuperFunction::new(g.form(alg, &gens, &Shape { degree: Some(0), ..Shape::any().soul() }))?;
            let e = alg.sf_exp(&n)?;
            Ok((alg.sf_log(&e)? != n || e.body() != Scalar::one()).then(|| format_form(alg, n.form())))
        }))
    }));
    rep.push(law("i*p* = id on body forms", || {
        let i = ChartMap::body_inclusion(alg.clone())?;
        let mut g = Gen::new(cfg.seed + 4);
        first((0..cfg.cases).map(|_| {
            let b = g.form(alg, &gens, &Shape::any().body());
            let (bb, bs) = alg.body_soul_split(&b);
            Ok((i.pullback(&b)? != b || bb != b || !bs.is_zero()).then(|| format_form(alg, &b)))
        }))
    }));
    rep
}

fn random_chart_form(g: &mut Gen, c: &Cover, chart: u16, shape: &Shape) -> SuperForm {
    let mut gens = global_gens(c);
    gens.extend(c.charts[chart as usize].coords.iter().flatten());
    g.form(&c.alg, &gens, shape)
}

fn cech_complex(cfg: &Config, corpus: &Corpus) -> Report {
    let mut rep = Report::new("cech_complex");
    for (name, m) in &corpus.manifests {
        let v = m.cover.validate();
        rep.push(Check::from_option(
            &format!("{} cover validates", name),
            v.first_failure().map(|f| format!("{}: {}", f.name, f.detail.clone().unwrap_or_default())),
        ));
    }
    let n = (cfg.cases / 8).max(2);
    for name in ["circle", "pi_circle", "torus2"] {
        let c = &corpus.get(name).cover;
        let mut g = Gen::new(cfg.seed + 10);
        rep.push(law(&format!("{}: δ∘δ = 0", name), || {
            first((0..n).flat_map(|_| [1, 2]).map(|lvl| {
                let w = g.family(c, lvl, &Shape::any());
                Ok(c.delta(&c.delta(&w)?)?.first_nonzero().map(|i| format!("level {} component {}", lvl, i)))
            }))
        }));
        let mut g = Gen::new(cfg.seed + 11);
        rep.push(law(&format!("{}: δ of a global family vanishes", name), || {
            first((0..n).map(|_| {
                let f = g.form(&c.alg, &global_gens(c), &Shape::any());
                Ok(c.delta(&c.global_family(&f)?)?.first_nonzero().map(|_| format_form(&c.alg, &f)))
            }))
        }));
        let mut g = Gen::new(cfg.seed + 12);
        rep.push(law(&format!("{}: δ-solve round trip", name), || {
            first((0..n).flat_map(|_| [2, 3]).map(|lvl| {
                let eta = g.family(c, lvl - 1, &Shape::any());
                let w = c.delta(&eta)?;
                if w.comps.is_empty() {
                    return Ok(None);
                }
                let rho = cech_solve::solve(c, &w)?;
                Ok((c.delta(&rho)? != w).then(|| format!("level {}", lvl)))
            }))
        }));
        let mut g = Gen::new(cfg.seed + 13);
        rep.push(law(&format!("{}: Poincaré primitives", name), || {
            first((0..n).map(|_| {
                let chart = (g.below(c.n_charts() as u32)) as u16;
                let beta = random_chart_form(&mut g, c, chart, &Shape::any());
                let w = c.alg.d(&beta);
                if w.is_zero() {
                    return Ok(None);
                }
                let p = primitive_on(c, chart, &w)?;
                Ok((c.alg.d(&p) != w).then(|| format_form(&c.alg, &beta)))
            }))
        }));
    }
    rep
}

fn class_eq(cover: &Cover, a: &Gerbe, b: &Gerbe, c: &Gerbe) -> Result<Option<String>> {
    let (ka, kb, kc) = (deligne::dd_class(cover, a)?, deligne::dd_class(cover, b)?, deligne::dd_class(cover, c)?);
    Ok((ka.add(&kb) != kc).then(|| "dd_class not additive".to_string()))
}

fn deligne_gerbe(cfg: &Config, corpus: &Corpus) -> Report {
    let mut rep = Report::new("deligne_gerbe");
    for (name, m) in &corpus.manifests {
        let c = &m.cover;
        for (gname, g) in &m.gerbes {
            let label = format!("{}/{}", name, gname);
            let ck = deligne::check(c, g);
            rep.push(Check::from_option(
                &format!("{}: check", label),
                ck.first_failure().map(|f| format!("{}: {}", f.name, f.detail.clone().unwrap_or_default())),
            ));
            let ri = deligne::check_rep_identity(c, g);
            rep.push(Check::from_option(
                &format!("{}: rep identity", label),
                ri.first_failure().map(|f| format!("{}: {}", f.name, f.detail.clone().unwrap_or_default())),
            ));
            rep.push(law(&format!("{}: curvature closed, class δ-closed", label), || {
                let h = deligne::curvature(c, g)?;
                let k = deligne::dd_class(c, g)?;
                let dk = c.delta(&k.family())?;
                Ok((!c.alg.d(&h).is_zero() || !dk.is_zero()).then(|| "dH or δk nonzero".into()))
            }));
        }
        rep.push(law(&format!("{}: homomorphism laws", name), || {
            let i = ChartMap::body_inclusion(c.alg.clone())?;
            let gs: Vec<&Gerbe> = m.gerbes.values().collect();
            for a in &gs {
                let ad = a.dual();
                if deligne::dd_class(c, &ad)? != deligne::dd_class(c, a)?.neg() {
                    return Ok(Some("dd_class(dual) ≠ −dd_class".into()));
                }
                if deligne::curvature(c, &ad)? != deligne::curvature(c, a)?.neg() {
                    return Ok(Some("curvature(dual) ≠ −curvature".into()));
                }
                let pa = deligne::pullback_gerbe(c, a, &i)?;
                if deligne::dd_class(c, &pa)? != deligne::dd_class(c, a)? {
                    return Ok(Some("dd_class does not commute with i*".into()));
                }
                if deligne::curvature(c, &pa)? != i.pullback(&deligne::curvature(c, a)?)? {
                    return Ok(Some("curvature does not commute with i*".into()));
                }
                for b in &gs {
                    let ab = deligne::tensor(c, a, b)?;
                    if let Some(f) = class_eq(c, a, b, &ab)? {
                        return Ok(Some(f));
                    }
                    if deligne::curvature(c, &ab)? != deligne::curvature(c, a)?.add(&deligne::curvature(c, b)?) {
                        return Ok(Some("curvature not additive".into()));
                    }
                }
            }
            Ok(None)
        }));
    }
    let n = (cfg.cases / 8).max(2);
    for name in ["rn", "pi_circle", "torus2", "torus3_level1"] {
        let m = corpus.get(name);
        let c = &m.cover;
        let mut g = Gen::new(cfg.seed + 20);
        rep.push(law(&format!("{}: coboundary shifts keep the rep identity", name), || {
            first((0..n).flat_map(|_| m.gerbes.values()).map(|gb| {
                let shift = deligne::coboundary_gerbe(c, &g.certificate(c))?;
                let r = deligne::check_rep_identity(c, &gb.tensor(&shift)?);
                Ok(r.first_failure().map(|f| f.name.clone()))
            }))
        }));
    }
    for name in ["rn", "pi_circle", "torus2"] {
        let c = &corpus.get(name).cover;
        let mut g = Gen::new(cfg.seed + 21);
        rep.push(law(&format!("{}: trivialize of coboundaries", name), || {
            first((0..n).map(|_| {
                let cert = g.certificate(c);
                let gb = deligne::coboundary_gerbe(c, &cert)?;
                let found = deligne::trivialize(c, &gb)?;
                Ok(deligne::verify_certificate(c, &gb, &found).first_failure().map(|f| f.name.clone()))
            }))
        }));
    }
    let t2 = corpus.get("torus2");
    rep.push(law("torus2: I_b ≃ I_b' iff b − b' is integral", || {
        let forms: Vec<&SuperForm> = t2.forms.values().collect();
        for a in &forms {
            for b in &forms {
                let diff = a.sub(b);
                let triv = deligne::trivialize(&t2.cover, &deligne::make_trivial(&t2.cover, &diff)?).is_ok();
                let integral = deligne::integral_check(&t2.cover, &diff).is_ok();
                if triv != integral {
                    return Ok(Some(format!("disagree on {}", format_form(&t2.cover.alg, &diff))));
                }
            }
        }
        Ok(None)
    }));
    for (name, base) in [("torus2", "Iarea"), ("torus3_level1", "G")] {
        let m = corpus.get(name);
        rep.push(law(&format!("{}: flat classes act simply", name), || torsor(&m.cover, m.gerbe(base)?)));
    }
    rep
}

/// With `G = G' ⊗ I_{τ e1∧e2/2}`, exactly one candidate flat class `I_{qτ e1∧e2}`
/// trivializes `G ⊗ G'* ⊗ F_q*`.
fn torsor(c: &Cover, base: &Gerbe) -> Result<Option<String>> {
    let f = |s: &str| parse_form(&c.alg, s).map_err(|e| e.locate(1, 1));
    let g = base.tensor(&deligne::make_trivial(c, &f("1/2*tau*e1*e2")?)?)?;
    let mut hits = Vec::new();
    for q in ["0", "1/3", "1/2", "2/3"] {
        let fq = deligne::make_trivial(c, &f(&format!("{}*tau*e1*e2", q))?)?;
        let diff = g.tensor(&base.dual())?.tensor(&fq.dual())?;
        if deligne::trivialize(c, &diff).is_ok() {
            hits.push(q);
        }
    }
    Ok((hits != ["1/2"]).then(|| format!("trivializing candidates: {:?}", hits)))
}

fn body_soul_section(cfg: &Config, corpus: &Corpus) -> Report {
    let mut rep = Report::new("body_soul");
    for (name, m) in &corpus.manifests {
        let c = &m.cover;
        rep.push(law(&format!("{}: i*p* = id on body gerbes", name), || {
            first(m.gerbes.values().map(|g| {
                let gb = body_soul::gerbe_body(g);
                let p = body_soul::gerbe_p_pullback(&gb)?;
                Ok((body_soul::gerbe_body(&p) != gb
                    || deligne::curvature(c, &p)? != deligne::curvature(c, &gb)?)
                    .then(|| "round trip differs".to_string()))
            }))
        }));
        rep.push(law(&format!("{}: decompositions verify", name), || {
            first(m.gerbes.iter().map(|(gname, g)| {
                let d = body_soul::decompose(c, g)?;
                let r = body_soul::verify_decomposition(c, g, &d);
                Ok(r.first_failure().map(|f| format!("{}: {}", gname, f.name)))
            }))
        }));
        rep.push(law(&format!("{}: gerbe_body is a tensor homomorphism", name), || {
            let gs: Vec<&Gerbe> = m.gerbes.values().collect();
            for a in &gs {
                for b in &gs {
                    let lhs = body_soul::gerbe_body(&a.tensor(b)?);
                    if lhs != body_soul::gerbe_body(a).tensor(&body_soul::gerbe_body(b))? {
                        return Ok(Some("differs".into()));
                    }
                }
            }
            Ok(None)
        }));
        let flat: Vec<(String, Gerbe)> = m
            .gerbes
            .iter()
            .filter(|(_, g)| deligne::curvature(c, g).map(|h| h.is_zero()).unwrap_or(false))
            .map(|(n, g)| (n.clone(), g.clone()))
            .collect();
        let fr = body_soul::flat_iso_check(c, &flat);
        rep.push(Check::from_option(
            &format!("{}: flat gerbes are pulled back from the body", name),
            fr.first_failure().map(|f| format!("{}: {}", f.name, f.detail.clone().unwrap_or_default())),
        ));
    }
    let m = corpus.get("pi_torus3");
    let c = &m.cover;
    let n = (cfg.cases / 10).max(2);
    rep.push(law("pi_torus3: decompose recovers body and beta", || {
        let body = m.gerbe("body")?;
        let mut g = Gen::new(cfg.seed + 30);
        first((0..n).map(|_| {
            let b0 = g.form(&c.alg, &global_gens(c), &Shape::homogeneous(2, 0).soul());
            let gb = body.tensor(&deligne::make_trivial(c, &b0)?)?;
            let d = body_soul::decompose(c, &gb)?;
            let diff = d.beta.sub(&b0);
            let exact = c.alg.d(&c.alg.soul_homotopy(&diff)?) == diff;
            let canon = body_soul::canonical_beta(c, &d.beta)? == body_soul::canonical_beta(c, &b0)?;
            Ok((d.body != *body || !exact || !canon).then(|| format_form(&c.alg, &b0)))
        }))
    }));
    rep.push(law("pi_torus3: decomposition is equivariant under flat body gerbes", || {
        let g = m.gerbe("mixed")?;
        let f = parse_form(&c.alg, "1/2*tau*e1*e2").map_err(|e| e.locate(1, 1))?;
        let g0 = deligne::make_trivial(c, &f)?;
        let d = body_soul::decompose(c, g)?;
        let d0 = body_soul::decompose(c, &g.tensor(&g0)?)?;
        let same_beta = body_soul::canonical_beta(c, &d.beta)? == body_soul::canonical_beta(c, &d0.beta)?;
        Ok((!same_beta || d0.body != d.body.tensor(&g0)?).then(|| "shifted decomposition differs".into()))
    }));
    rep
}

fn cli_manifest(_cfg: &Config, corpus: &Corpus) -> Report {
    let mut rep = Report::new("cli_manifest");
    rep.push(Check::from_option(
        "at least eight built-ins",
        (corpus.manifests.len() < 8).then(|| format!("{} built-ins", corpus.manifests.len())),
    ));
    for (name, m) in &corpus.manifests {
        rep.push(law(&format!("{}: emit/parse round trip", name), || {
            let text = m.emit();
            let again = Manifest::parse(&text)?;
            Ok((again != *m || again.emit() != text).then(|| "round trip differs".into()))
        }));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_the_corpus() {
        let rep = run(&Config { seed: 7, cases: 8 });
        for c in &rep.checks {
            if !c.passed {
                eprintln!("FAIL {}: {}", c.name, c.detail.clone().unwrap_or_default());
            }
        }
        assert!(rep.passed(), "{} checks", rep.checks.len());
    }
}
