use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use supergerbe::body_soul;
use supergerbe::cech_solve;
use supergerbe::cover::{face, Cover, Family};
use supergerbe::deligne::{self, Gerbe};
use supergerbe::examples;
use supergerbe::expr::{format_form, parse_form};
use supergerbe::testing::{global_gens, Gen, Shape};
use supergerbe::{ChartMap, Error, ExtMono, Scalar, SuperForm};

type Outcome = Result<String, String>;

fn form(c: &Cover, s: &str) -> SuperForm {
    parse_form(&c.alg, s).unwrap()
}

fn err(e: Error) -> String {
    e.to_string()
}

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

/// ℝ^{2|3} with an odd-linear automorphism.
fn super_calculus() -> Outcome {
    let m = examples::build("rn").map_err(err)?;
    let c = &m.cover;
    let alg = &c.alg;
    let gens = global_gens(c);
    let phi = ChartMap::new(
        alg.clone(),
        alg.clone(),
        vec![form(c, "x + t1*t2"), form(c, "y + 2*x + x*x")],
        vec![form(c, "t1 + x*t2"), form(c, "t2 - t3"), form(c, "t3 + t1*t2*t3 - y*t1")],
    )
    .map_err(err)?;
    let mut g = Gen::new(2024);
    for i in 0..500 {
        let (p, q) = (g.below(4), g.below(2));
        let (r, s) = (g.below(4), g.below(2));
        let a = g.form(alg, &gens, &Shape::homogeneous(p, q));
        let b = g.form(alg, &gens, &Shape::homogeneous(r, s));
        ensure(alg.d(&alg.d(&a)).is_zero(), || format!("case {}: d² ≠ 0 on {}", i, format_form(alg, &a)))?;
        if let (Some(p), Some(q), Some(r), Some(s)) = (a.degree(), a.parity(), b.degree(), b.parity()) {
            let ba = alg.mul(&b, &a);
            let rhs = if (p * r + q * s) % 2 == 0 { ba } else { ba.neg() };
            ensure(alg.mul(&a, &b) == rhs, || format!("case {}: sign law", i))?;
        }
        let lhs = phi.pullback(&alg.d(&a)).map_err(err)?;
        let rhs = alg.d(&phi.pullback(&a).map_err(err)?);
        ensure(lhs == rhs, || format!("case {}: φ*d ≠ dφ* on {}", i, format_form(alg, &a)))?;
    }
    Ok("500 forms".into())
}

/// On the circle, levels are tuple lengths: level 1 is a single chart,
/// level 2 a pair, and the three-chart cover has no triples.
fn cech_solve_on_circle() -> Outcome {
    let m = examples::build("circle").map_err(err)?;
    let c = &m.cover;
    let mut g = Gen::new(7);
    let mut solved = [0usize; 3];
    for i in 0..40 {
        let f = g.form(&c.alg, &global_gens(c), &Shape::any());
        let w = c.global_family(&f).map_err(err)?;
        let rho = cech_solve::solve_global(c, &w).map_err(err)?;
        ensure(c.global_family(&rho).map_err(err)? == w, || format!("case {}: level 1", i))?;
        solved[0] += 1;

        let eta = g.family(c, 1, &Shape::any());
        let w = c.delta(&eta).map_err(err)?;
        ensure(c.delta(&w).map_err(err)?.is_zero(), || "δ∘δ ≠ 0".into())?;
        let rho = cech_solve::solve(c, &w).map_err(err)?;
        ensure(c.delta(&rho).map_err(err)? == w, || format!("case {}: level 2", i))?;
        solved[1] += 1;

        let w = Family::zero(c, 3);
        ensure(w.comps.is_empty(), || "circle has triples".into())?;
        let rho = cech_solve::solve(c, &w).map_err(err)?;
        ensure(c.delta(&rho).map_err(err)? == w, || "level 3".into())?;
        solved[2] += 1;
    }
    // Level 2 closed families that are not built from δ of chart data alone.
    let mut winding = Family::zero(c, 1);
    for (k, ch) in c.charts.iter().enumerate() {
        winding.comps[k] = c.alg.gen(ch.coords[0].unwrap());
    }
    let w = c.delta(&winding).map_err(err)?;
    let rho = cech_solve::solve(c, &w).map_err(err)?;
    ensure(c.delta(&rho).map_err(err)? == w, || "winding family".into())?;

    let t = examples::build("torus2").map_err(err)?;
    let tc = &t.cover;
    let mut g = Gen::new(8);
    for lvl in 2..=4 {
        for i in 0..4 {
            let eta = g.family(tc, lvl - 1, &Shape::any());
            let w = tc.delta(&eta).map_err(err)?;
            let rho = cech_solve::solve(tc, &w).map_err(err)?;
            ensure(tc.delta(&rho).map_err(err)? == w, || format!("torus2 level {} case {}", lvl, i))?;
        }
    }
    Ok(format!("circle levels 1/2/3: {}/{}/{} (no triples); torus2 levels 2-4", solved[0], solved[1], solved[2]))
}

fn soul_acyclicity() -> Outcome {
    let m = examples::build("rn").map_err(err)?;
    let c = &m.cover;
    let alg = &c.alg;
    let coeffs = [Scalar::one(), form(c, "x").body_scalar(), form(c, "x*y*y - 3").body_scalar()];
    let mut count = 0;
    let mut dts: Vec<[u8; 3]> = Vec::new();
    for a in 0..=3u8 {
        for b in 0..=3u8 {
            for d in 0..=3u8 {
                if a + b + d <= 3 {
                    dts.push([a, b, d]);
                }
            }
        }
    }
    for theta in 0..8u8 {
        for dt in &dts {
            for e in 0..4u16 {
                let mut mono = ExtMono { theta, e, ..ExtMono::default() };
                mono.dtheta[..3].copy_from_slice(dt);
                if mono.weight() == 0 {
                    continue;
                }
                for s in &coeffs {
                    let w = SuperForm::term(mono, s.clone());
                    let lhs = alg.d(&alg.soul_homotopy(&w).map_err(err)?).add(&alg.soul_homotopy(&alg.d(&w)).map_err(err)?);
                    ensure(lhs == w, || format!("dK + Kd ≠ id on {}", format_form(alg, &w)))?;
                    count += 1;
                }
            }
        }
    }
    let mut g = Gen::new(33);
    for i in 0..500 {
        let w = g.form(alg, &global_gens(c), &Shape::any().soul());
        ensure(w.is_pure_soul(), || "generator produced a body term".into())?;
        let lhs = alg.d(&alg.soul_homotopy(&w).map_err(err)?).add(&alg.soul_homotopy(&alg.d(&w)).map_err(err)?);
        ensure(lhs == w, || format!("case {}: {}", i, format_form(alg, &w)))?;
    }
    Ok(format!("{} monomial forms, 500 random", count))
}

fn rep_ok(c: &Cover, g: &Gerbe, what: &str) -> Result<(), String> {
    let r = deligne::check_rep_identity(c, g);
    match r.first_failure() {
        None => Ok(()),
        Some(f) => Err(format!("{}: {} {}", what, f.name, f.detail.clone().unwrap_or_default())),
    }
}

fn rep_identity() -> Outcome {
    let mut n = 0;
    let mut g = Gen::new(44);
    for name in ["rn", "torus2", "pi_torus3"] {
        let m = examples::build(name).map_err(err)?;
        let c = &m.cover;
        for i in 0..5 {
            let b = g.form(&c.alg, &global_gens(c), &Shape::homogeneous(2, 0));
            rep_ok(c, &deligne::make_trivial(c, &b).map_err(err)?, &format!("{} I_b case {}", name, i))?;
            n += 1;
        }
    }
    for name in ["torus3_level1", "torus3_level2"] {
        let m = examples::build(name).map_err(err)?;
        let c = &m.cover;
        let gb = m.gerbe("G").map_err(err)?;
        rep_ok(c, gb, name)?;
        let k = deligne::dd_class(c, gb).map_err(err)?;
        ensure(!k.is_zero(), || format!("{} has zero class", name))?;
        n += 1;
        for i in 0..25 {
            let shift = deligne::coboundary_gerbe(c, &g.certificate(c)).map_err(err)?;
            rep_ok(c, &gb.tensor(&shift).map_err(err)?, &format!("{} shift {}", name, i))?;
            n += 1;
        }
    }
    Ok(format!("{} gerbes including 50 coboundary shifts", n))
}

/// `∂` over the facet nerve written out directly from tuple faces.
fn oracle_boundary(c: &Cover, chain: &BTreeMap<Vec<u16>, BigInt>) -> BTreeMap<Vec<u16>, BigInt> {
    let mut out: BTreeMap<Vec<u16>, BigInt> = BTreeMap::new();
    for (t, v) in chain {
        for i in 0..t.len() {
            let mut f = t.clone();
            f.remove(i);
            let e = out.entry(f).or_default();
            if i % 2 == 0 {
                *e += v;
            } else {
                *e -= v;
            }
        }
    }
    out.retain(|f, v| !v.is_zero() && c.nerve.index_of(f).is_some());
    out
}

fn integral_round_trip() -> Outcome {
    let m = examples::build("torus3").map_err(err)?;
    let c = &m.cover;
    let fund = &c.cycles["fundamental"];
    let tuples = c.nerve.level(fund.level);
    let chain: BTreeMap<Vec<u16>, BigInt> = fund.coeffs.iter().map(|(&i, v)| (tuples[i].to_vec(), v.clone())).collect();
    ensure(oracle_boundary(c, &chain).is_empty(), || "fundamental chain is not a cycle".into())?;
    let mut out = Vec::new();
    for k in 1..=2i64 {
        let h = form(c, &format!("{}*tau*e1*e2*e3", k));
        let start = Instant::now();
        let g = deligne::construct_from_integral_form(c, &h).map_err(err)?;
        let elapsed = start.elapsed();
        ensure(deligne::curvature(c, &g).map_err(err)? == h, || format!("k = {}: curvature differs", k))?;
        let cls = deligne::dd_class(c, &g).map_err(err)?;
        let level4 = c.nerve.level(4);
        // δk = 0 over every 5-tuple, by direct face sums.
        for t in c.nerve.level(5) {
            let mut s = BigInt::zero();
            for i in 0..5 {
                let fi = c.nerve.index_of(&face(t, i)).ok_or("missing face")?;
                if i % 2 == 0 {
                    s += &cls.values[fi];
                } else {
                    s -= &cls.values[fi];
                }
            }
            ensure(s.is_zero(), || format!("k = {}: δk ≠ 0 on {}", k, c.tuple_label(t)))?;
        }
        let mut pairing = BigInt::zero();
        for (t, v) in &chain {
            let i = level4.iter().position(|u| u[..] == t[..]).ok_or("chain tuple missing from nerve")?;
            pairing += v * &cls.values[i];
        }
        ensure(pairing == BigInt::from(k), || format!("k = {}: pairing {}", k, pairing))?;
        ensure(elapsed < Duration::from_secs(120), || format!("k = {}: {:?}", k, elapsed))?;
        out.push(format!("k={} pairing {} in {:.2?}", k, pairing, elapsed));
    }
    Ok(out.join(", "))
}

fn trivialize_iff_integral() -> Outcome {
    let t2 = examples::build("torus2").map_err(err)?;
    let c = &t2.cover;
    let fund = &c.cycles["fundamental"];
    let agree = |c: &Cover, b: &SuperForm| -> Result<(bool, Result<deligne::IntegerClass, Error>), String> {
        let triv = deligne::trivialize(c, &deligne::make_trivial(c, b).map_err(err)?);
        let ic = deligne::integral_check(c, b);
        if let Ok(cert) = &triv {
            let g = deligne::make_trivial(c, b).map_err(err)?;
            ensure(deligne::verify_certificate(c, &g, cert).passed(), || "certificate fails".into())?;
        }
        ensure(triv.is_ok() == ic.is_ok(), || format!("disagree on {}", format_form(&c.alg, b)))?;
        Ok((triv.is_ok(), ic))
    };

    let exact = c.alg.d(&form(c, "s1*c2*e2 + c1*e1"));
    let (ok, ic) = agree(c, &exact)?;
    ensure(ok && ic.unwrap().is_coboundary(c).map_err(err)?, || "exact form".into())?;

    let (ok, ic) = agree(c, &form(c, "tau*e1*e2"))?;
    ensure(ok && ic.unwrap().pair(fund) == BigInt::from(1), || "tau*e1*e2 class".into())?;

    let (ok, ic) = agree(c, &form(c, "1/2*tau*e1*e2"))?;
    match ic {
        Err(Error::NotIntegral { witness }) if !ok => ensure(witness == "1/2", || format!("witness {}", witness))?,
        _ => return Err("half form was accepted".into()),
    }

    let p = examples::build("pi_torus3").map_err(err)?;
    let pc = &p.cover;
    let soul = form(pc, "dt1*dt2 + 3*dt3*dt3").add(&pc.alg.d(&form(pc, "t1*t2*e3 + s1*t3*dt2")));
    ensure(soul.is_pure_soul() && pc.alg.d(&soul).is_zero(), || "soul input not closed".into())?;
    let (ok, _) = agree(pc, &soul)?;
    ensure(ok, || "closed soul form".into())?;
    Ok("exact ok, τe1e2 class 1, ½τe1e2 witness 1/2, closed soul ok".into())
}

fn body_soul_decomposition() -> Outcome {
    let m = examples::build("pi_torus3").map_err(err)?;
    let c = &m.cover;
    let alg = &c.alg;
    let gb = m.gerbe("body").map_err(err)?;
    let lvl1 = examples::build("torus3_level1").map_err(err)?;
    ensure(
        deligne::curvature(c, gb).map_err(err)? == form(c, "tau*e1*e2*e3")
            && deligne::dd_class(c, gb).map_err(err)?.values == deligne::dd_class(&lvl1.cover, lvl1.gerbe("G").map_err(err)?).map_err(err)?.values,
        || "body gerbe is not the level-1 gerbe".into(),
    )?;
    let pb = body_soul::gerbe_p_pullback(gb).map_err(err)?;
    let mut g = Gen::new(77);
    for i in 0..20 {
        let b0 = g.form(alg, &global_gens(c), &Shape { max_terms: 3, ..Shape::homogeneous(2, 0).soul() });
        ensure(b0.is_pure_soul() && !b0.is_zero(), || "generator".into())?;
        let gg = pb.tensor(&deligne::make_trivial(c, &b0).map_err(err)?).map_err(err)?;
        let d = body_soul::decompose(c, &gg).map_err(err)?;
        ensure(d.body.h == gb.h && d.body.a == gb.a && d.body.b == gb.b, || format!("case {}: body differs", i))?;
        let diff = d.beta.sub(&b0);
        ensure(diff.is_pure_soul(), || format!("case {}: β − β₀ has body terms", i))?;
        ensure(alg.d(&alg.soul_homotopy(&diff).map_err(err)?) == diff, || format!("case {}: β − β₀ not exact", i))?;
        ensure(
            body_soul::canonical_beta(c, &d.beta).map_err(err)? == body_soul::canonical_beta(c, &b0).map_err(err)?,
            || format!("case {}: canonical β differs", i),
        )?;
        let target = gg.tensor(&pb.tensor(&deligne::make_trivial(c, &d.beta).map_err(err)?).map_err(err)?.dual()).map_err(err)?;
        let r = deligne::verify_certificate(c, &target, &d.certificate);
        ensure(r.passed(), || format!("case {}: certificate rejected", i))?;
        ensure(body_soul::verify_decomposition(c, &gg, &d).passed(), || format!("case {}: decomposition", i))?;
    }
    Ok("20 soul twists".into())
}

fn homomorphism_laws() -> Outcome {
    let mut n = 0;
    for (name, _) in examples::NAMES {
        let m = examples::build(name).map_err(err)?;
        let c = &m.cover;
        let i = ChartMap::body_inclusion(c.alg.clone()).map_err(err)?;
        let gs: Vec<(&String, &Gerbe)> = m.gerbes.iter().collect();
        for (an, a) in &gs {
            let ka = deligne::dd_class(c, a).map_err(err)?;
            let ha = deligne::curvature(c, a).map_err(err)?;
            let ad = deligne::dual(a);
            ensure(deligne::dd_class(c, &ad).map_err(err)? == ka.neg(), || format!("{}/{}: dual class", name, an))?;
            ensure(deligne::curvature(c, &ad).map_err(err)? == ha.neg(), || format!("{}/{}: dual curvature", name, an))?;
            let pa = deligne::pullback_gerbe(c, a, &i).map_err(err)?;
            ensure(deligne::dd_class(c, &pa).map_err(err)? == ka, || format!("{}/{}: i* class", name, an))?;
            ensure(
                deligne::curvature(c, &pa).map_err(err)? == i.pullback(&ha).map_err(err)?,
                || format!("{}/{}: i* curvature", name, an),
            )?;
            for (bn, b) in &gs {
                let ab = deligne::tensor(c, a, b).map_err(err)?;
                let kb = deligne::dd_class(c, b).map_err(err)?;
                let hb = deligne::curvature(c, b).map_err(err)?;
                ensure(deligne::dd_class(c, &ab).map_err(err)? == ka.add(&kb), || format!("{}: {}⊗{} class", name, an, bn))?;
                ensure(deligne::curvature(c, &ab).map_err(err)? == ha.add(&hb), || format!("{}: {}⊗{} curvature", name, an, bn))?;
                n += 1;
            }
        }
    }
    Ok(format!("{} ordered pairs", n))
}

fn main() {
    let properties: [(&str, fn() -> Outcome, Option<Duration>); 8] = [
        ("super-calculus identities on R^{2|3}", super_calculus, Some(Duration::from_secs(10))),
        ("Čech solve on the circle", cech_solve_on_circle, None),
        ("soul acyclicity", soul_acyclicity, None),
        ("rep identity", rep_identity, None),
        ("integral form round trip on T^3", integral_round_trip, Some(Duration::from_secs(120))),
        ("trivialize iff integral", trivialize_iff_integral, None),
        ("body/soul decomposition", body_soul_decomposition, None),
        ("homomorphism laws", homomorphism_laws, None),
    ];
    let mut failed = Vec::new();
    for (i, (name, f, limit)) in properties.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = f();
        let t = start.elapsed();
        if let (Ok(_), Some(l)) = (&outcome, limit) {
            if t > *l {
                outcome = Err(format!("took {:.2?}, limit {:?}", t, l));
            }
        }
        match &outcome {
            Ok(d) => println!("[{}/8] PASS {} ({:.2?}): {}", i + 1, name, t, d),
            Err(d) => {
                println!("[{}/8] FAIL {} ({:.2?}): {}", i + 1, name, t, d);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed: {:?}", failed);
        std::process::exit(1);
    }
}
