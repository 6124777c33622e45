//! The decomposition `G ≃ p*G_b ⊗ I_β` of a gerbe into its body gerbe and a
//! pure-soul trivial gerbe.

use crate::cover::Cover;
use crate::deligne::{self, Certificate, Gerbe};
use crate::error::{Error, Result};
use crate::expr::format_form;
use crate::report::{Check, Report};
use crate::superalg::SuperForm;

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub body: Gerbe,
    pub beta: SuperForm,
    /// Trivializes `G ⊗ (p*G_b ⊗ I_β)*`.
    pub certificate: Certificate,
}

fn body_part(f: &SuperForm) -> SuperForm {
    f.filter(|m| m.is_body())
}

/// `i*G`: every component reduced to its body part.
pub fn gerbe_body(g: &Gerbe) -> Gerbe {
    g.map(body_part)
}

fn has_soul(g: &Gerbe) -> bool {
    [&g.h, &g.a, &g.b].iter().any(|w| w.comps.iter().any(|c| !c.is_pure_body()))
}

/// `p*G_b`: body data regarded on the supermanifold.
pub fn gerbe_p_pullback(gb: &Gerbe) -> Result<Gerbe> {
    if has_soul(gb) {
        return Err(Error::SoulContamination("body gerbe has components with θ or dθ".into()));
    }
    Ok(gb.clone())
}

/// Canonical representative `K(dβ)` of `β` modulo exact pure-soul forms.
pub fn canonical_beta(cover: &Cover, beta: &SuperForm) -> Result<SuperForm> {
    cover.alg.soul_homotopy(&cover.alg.d(beta))
}

/// `β = K(H_s)`, so that `dβ = H_s` and `β` is pure soul.
pub fn beta_from_curvature(cover: &Cover, g: &Gerbe) -> Result<SuperForm> {
    let h = deligne::curvature(cover, g)?;
    let (_, hs) = cover.alg.body_soul_split(&h);
    cover.alg.soul_homotopy(&hs)
}

fn difference(cover: &Cover, g: &Gerbe, body: &Gerbe, beta: &SuperForm) -> Result<Gerbe> {
    let model = gerbe_p_pullback(body)?.tensor(&deligne::make_trivial(cover, beta)?)?;
    g.tensor(&model.dual())
}

pub fn decompose(cover: &Cover, g: &Gerbe) -> Result<Decomposition> {
    let body = gerbe_body(g);
    let beta = beta_from_curvature(cover, g)?;
    let diff = difference(cover, g, &body, &beta)?;
    let certificate = deligne::trivialize(cover, &diff).map_err(|e| match e {
        Error::ObstructionNonzero(d) | Error::NotIntegral { witness: d } => {
            Error::UnsupportedBodyData(format!("G ⊗ (p*G_b ⊗ I_β)* does not trivialize: {}", d))
        }
        other => other,
    })?;
    let out = Decomposition { body, beta, certificate };
    let rep = verify_decomposition(cover, g, &out);
    if let Some(f) = rep.first_failure() {
        return Err(Error::CechObstruction(format!("decomposition failed {}: {}", f.name, f.detail.clone().unwrap_or_default())));
    }
    Ok(out)
}

pub fn verify_decomposition(cover: &Cover, g: &Gerbe, d: &Decomposition) -> Report {
    let mut rep = Report::new("verify_decomposition");
    rep.push(Check::from_option(
        "body gerbe has no soul content",
        has_soul(&d.body).then(|| "a component contains θ or dθ".to_string()),
    ));
    rep.push(Check::from_option(
        "beta is a pure-soul even 2-form",
        (!d.beta.is_pure_soul() || d.beta.terms().keys().any(|m| m.degree() != 2 || m.parity() != 0))
            .then(|| format_form(&cover.alg, &d.beta)),
    ));
    rep.push(Check::from_option(
        "beta is global",
        (!cover.is_chart_free(&d.beta)).then(|| "beta uses chart coordinates".to_string()),
    ));
    match (deligne::curvature(cover, g), deligne::curvature(cover, &d.body)) {
        (Ok(h), Ok(hb)) => {
            let rhs = hb.add(&cover.alg.d(&d.beta));
            rep.push(Check::from_option(
                "H = H_b + dβ",
                (h != rhs).then(|| format!("{} vs {}", format_form(&cover.alg, &h), format_form(&cover.alg, &rhs))),
            ));
        }
        (Err(e), _) | (_, Err(e)) => rep.push(Check::fail("H = H_b + dβ", e.to_string())),
    }
    match difference(cover, g, &d.body, &d.beta) {
        Ok(diff) => rep.extend("certificate", deligne::verify_certificate(cover, &diff, &d.certificate)),
        Err(e) => rep.push(Check::fail("certificate", e.to_string())),
    }
    if let Ok(b) = canonical_beta(cover, &d.beta) {
        rep.value("beta", format_form(&cover.alg, &d.beta));
        rep.value("beta_canonical", format_form(&cover.alg, &b));
    }
    rep
}

/// For each flat gerbe, `G ⊗ (p*i*G)*` trivializes and `i*p*i*G = i*G`.
pub fn flat_iso_check(cover: &Cover, corpus: &[(String, Gerbe)]) -> Report {
    let mut rep = Report::new("flat_iso");
    for (name, g) in corpus {
        let res = (|| -> Result<Option<String>> {
            let h = deligne::curvature(cover, g)?;
            if !h.is_zero() {
                return Ok(Some(format!("not flat: curvature {}", format_form(&cover.alg, &h))));
            }
            let gb = gerbe_body(g);
            let pgb = gerbe_p_pullback(&gb)?;
            if gerbe_body(&pgb) != gb {
                return Ok(Some("i*p*G_b differs from G_b".into()));
            }
            deligne::trivialize(cover, &g.tensor(&pgb.dual())?)?;
            Ok(None)
        })();
        rep.push(match res {
            Ok(fail) => Check::from_option(name, fail),
            Err(e) => Check::fail(name, e.to_string()),
        });
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::expr::parse_form;

    #[test]
    fn body_of_soul_trivial_is_zero() {
        let m = examples::build("pi_circle").unwrap();
        let c = &m.cover;
        assert_eq!(gerbe_body(m.gerbe("Isoul").unwrap()), Gerbe::zero(c));
        let i0 = m.gerbe("I0").unwrap();
        assert_eq!(&gerbe_body(i0), i0);
    }

    #[test]
    fn p_pullback_rejects_soul() {
        let m = examples::build("pi_circle").unwrap();
        assert!(matches!(gerbe_p_pullback(m.gerbe("Isoul").unwrap()), Err(Error::SoulContamination(_))));
    }

    #[test]
    fn beta_recovers_soul_curvature() {
        let m = examples::build("rn").unwrap();
        let c = &m.cover;
        let b0 = parse_form(&c.alg, "x*t1*t2*e1*e2 + y*dt1*dt3").unwrap();
        let g = deligne::make_trivial(c, &parse_form(&c.alg, "x*y*e1*e2").unwrap()).unwrap();
        let g = g.tensor(&deligne::make_trivial(c, &b0).unwrap()).unwrap();
        let beta = beta_from_curvature(c, &g).unwrap();
        let (_, hs) = c.alg.body_soul_split(&deligne::curvature(c, &g).unwrap());
        assert_eq!(c.alg.d(&beta), hs);
        assert!(beta.is_pure_soul());
    }

    #[test]
    fn decompose_body_only_and_flat() {
        let m = examples::build("torus2").unwrap();
        let d = decompose(&m.cover, m.gerbe("Iarea").unwrap()).unwrap();
        assert!(d.beta.is_zero());
        let p = examples::build("pi_circle").unwrap();
        let rep = flat_iso_check(
            &p.cover,
            &[("I0".into(), p.gerbe("I0").unwrap().clone()), ("Iclosed".into(), p.gerbe("Iclosed").unwrap().clone())],
        );
        assert!(rep.passed(), "{}", rep.to_text());
        let rep = flat_iso_check(&p.cover, &[("Isoul".into(), p.gerbe("Isoul").unwrap().clone())]);
        assert!(rep.first_failure().unwrap().detail.as_ref().unwrap().contains("not flat"));
    }
}
