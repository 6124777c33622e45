//! Built-in example manifests.
//!
//! Tori `Tⁿ` use `3ⁿ` charts indexed by `(j_1, …, j_n) ∈ {0,1,2}ⁿ`.  Along
//! each direction the circle is covered by three arcs centered at `j/3`,
//! with coordinate `a{k}_{j}` on arc `j`; going once around adds `1` to the
//! coordinate, which the pair `(0, 2)` records as `a{k}_2 ↦ a{k}_0 + 1`.
//! Angles enter through the global pairs `c{k} = cos 2πx`, `s{k} = sin 2πx`.

use std::fmt::Write as _;

use crate::deligne::{self, Gerbe};
use crate::error::{Error, Result};
use crate::expr::parse_form;
use crate::manifest::Manifest;

pub const NAMES: &[(&str, &str)] = &[
    ("rn", "R^{2|3}: one chart with trivial gerbes"),
    ("circle", "S^1: three arcs, no triple overlaps"),
    ("pi_circle", "odd tangent bundle of S^1 with a soul trivial gerbe"),
    ("torus2", "T^2: nine charts, trivial gerbes I_b"),
    ("torus3", "T^3: 27 charts and volume forms"),
    ("torus3_level1", "T^3 gerbe with curvature tau*e1*e2*e3"),
    ("torus3_level2", "T^3 gerbe with curvature 2*tau*e1*e2*e3"),
    ("pi_torus3", "odd tangent bundle of T^3: body gerbe and a soul twist"),
];

/// Circle edges with their coefficient in the fundamental 1-cycle.
const EDGES: [(usize, usize, i64); 3] = [(0, 1, 1), (1, 2, 1), (0, 2, -1)];

fn pou_factor(j: usize, k: usize) -> String {
    match j {
        0 => format!("(1/3 + 1/3*c{k})"),
        1 => format!("(1/3 + 1/3*s{k})"),
        _ => format!("(1/3 - 1/3*c{k} - 1/3*s{k})"),
    }
}

/// Offset `o` in `a_j ↦ a_i + o` for arcs `i ≠ j`.
fn arc_offset(i: usize, j: usize) -> i64 {
    match (i, j) {
        (0, 2) => 1,
        (2, 0) => -1,
        _ => 0,
    }
}

struct Torus {
    n: usize,
    charts: Vec<Vec<usize>>,
}

impl Torus {
    fn new(n: usize) -> Torus {
        let mut charts = vec![vec![]];
        for _ in 0..n {
            charts = charts.into_iter().flat_map(|c| (0..3).map(move |j| [c.clone(), vec![j]].concat())).collect();
        }
        Torus { n, charts }
    }

    fn name(&self, c: &[usize]) -> String {
        let mut s = String::from("A");
        for j in c {
            write!(s, "{}", j).unwrap();
        }
        s
    }

    fn facets(&self) -> Vec<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<Vec<usize>>> = vec![vec![vec![]]];
        for _ in 0..self.n {
            let mut next = Vec::new();
            for f in &out {
                for &(a, b, _) in &EDGES {
                    let mut g = Vec::new();
                    for v in f {
                        for j in [a, b] {
                            g.push([v.clone(), vec![j]].concat());
                        }
                    }
                    next.push(g);
                }
            }
            out = next;
        }
        for f in &mut out {
            f.sort();
        }
        out
    }

    /// Shuffle-product chain of the circle cycle along `dirs`, at arc 0 in
    /// the remaining directions.
    fn cycle(&self, dirs: &[usize]) -> Vec<(Vec<Vec<usize>>, i64)> {
        let m = dirs.len();
        let mut out: Vec<(Vec<Vec<usize>>, i64)> = Vec::new();
        let mut perms: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..m {
            perms = perms
                .into_iter()
                .flat_map(|p| (0..m).filter(|x| !p.contains(x)).map(|x| [p.clone(), vec![x]].concat()).collect::<Vec<_>>())
                .collect();
        }
        let mut choices: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..m {
            choices = choices.into_iter().flat_map(|c| (0..3).map(move |e| [c.clone(), vec![e]].concat())).collect();
        }
        for ch in &choices {
            let coeff: i64 = ch.iter().map(|&e| EDGES[e].2).product();
            for p in &perms {
                let mut inv = 0;
                for i in 0..m {
                    for j in (i + 1)..m {
                        if p[i] > p[j] {
                            inv += 1;
                        }
                    }
                }
                let sign = if inv % 2 == 0 { 1 } else { -1 };
                let mut v = vec![0usize; self.n];
                for (i, &d) in dirs.iter().enumerate() {
                    v[d] = EDGES[ch[i]].0;
                }
                let mut simplex = vec![v.clone()];
                for &step in p {
                    v[dirs[step]] = EDGES[ch[step]].1;
                    simplex.push(v.clone());
                }
                out.push((simplex, -coeff * sign));
            }
        }
        out
    }

    fn text(&self, name: &str, odd: bool, max_level: usize) -> String {
        let n = self.n;
        let mut s = String::new();
        writeln!(s, "format: 1\nname: \"{name}\"\nring {{").unwrap();
        let basis: Vec<String> = (1..=n).map(|k| format!("e{k}")).collect();
        writeln!(s, "  basis: [{}]", basis.join(", ")).unwrap();
        if odd {
            let t: Vec<String> = (1..=n).map(|k| format!("t{k}")).collect();
            writeln!(s, "  odd: [{}]", t.join(", ")).unwrap();
        }
        writeln!(s, "  generators {{").unwrap();
        for k in 1..=n {
            writeln!(s, "    c{k}: \"i*tau*s{k}*e{k}\"\n    s{k}: \"-i*tau*c{k}*e{k}\"").unwrap();
        }
        for k in 1..=n {
            for j in 0..3 {
                writeln!(s, "    a{k}_{j}: \"e{k}\"").unwrap();
            }
        }
        writeln!(s, "  }}\n  relations {{").unwrap();
        for k in 1..=n {
            writeln!(s, "    \"c{k}^2\": \"1 - s{k}^2\"").unwrap();
        }
        let order: Vec<String> = (1..=n).flat_map(|k| [format!("c{k}"), format!("s{k}")]).collect();
        writeln!(s, "  }}\n  order: [{}]\n}}", order.join(", ")).unwrap();

        writeln!(s, "cover {{\n  charts {{").unwrap();
        for c in &self.charts {
            let coords: Vec<String> = c.iter().enumerate().map(|(k, j)| format!("a{}_{}", k + 1, j)).collect();
            let center: Vec<String> = c.iter().map(|&j| if j == 0 { "0".into() } else { format!("{j}/3") }).collect();
            writeln!(s, "    {} {{ coords: [{}], center: [{}] }}", self.name(c), coords.join(", "), center.join(", ")).unwrap();
        }
        writeln!(s, "  }}").unwrap();
        let facets: Vec<String> = self
            .facets()
            .iter()
            .map(|f| format!("[{}]", f.iter().map(|c| self.name(c)).collect::<Vec<_>>().join(", ")))
            .collect();
        writeln!(s, "  nerve: [\n    {}\n  ]", facets.join(",\n    ")).unwrap();
        writeln!(s, "  max_level: {max_level}\n  substitutions {{").unwrap();
        for (x, a) in self.charts.iter().enumerate() {
            for b in &self.charts[x + 1..] {
                let mut rules = Vec::new();
                for k in 0..n {
                    if a[k] != b[k] {
                        let off = arc_offset(a[k], b[k]);
                        let img = match off {
                            0 => format!("a{}_{}", k + 1, a[k]),
                            o if o > 0 => format!("a{}_{} + {}", k + 1, a[k], o),
                            o => format!("a{}_{} - {}", k + 1, a[k], -o),
                        };
                        rules.push(format!("a{}_{}: \"{}\"", k + 1, b[k], img));
                    }
                }
                writeln!(s, "    \"{},{}\" {{ {} }}", self.name(a), self.name(b), rules.join(", ")).unwrap();
            }
        }
        writeln!(s, "  }}\n  partition {{").unwrap();
        for c in &self.charts {
            let f: Vec<String> = c.iter().enumerate().map(|(k, &j)| pou_factor(j, k + 1)).collect();
            writeln!(s, "    {}: \"{}\"", self.name(c), f.join("*")).unwrap();
        }
        let periodic: Vec<String> = (1..=n).map(|k| format!("[c{k}, s{k}, e{k}]")).collect();
        writeln!(s, "  }}\n  periodic: [{}]\n  cycles {{", periodic.join(", ")).unwrap();
        let mut cycles: Vec<(String, Vec<usize>)> = vec![("fundamental".into(), (0..n).collect())];
        if n > 1 {
            for k in 0..n {
                if n == 2 {
                    cycles.push((format!("loop{}", k + 1), vec![k]));
                } else {
                    let rest: Vec<usize> = (0..n).filter(|&x| x != k).collect();
                    let label: String = rest.iter().map(|d| (d + 1).to_string()).collect();
                    cycles.push((format!("plane{label}"), rest));
                }
            }
        }
        for (cname, dirs) in cycles {
            writeln!(s, "    {cname} {{\n      level: {}\n      chain {{", dirs.len() + 1).unwrap();
            let mut acc: std::collections::BTreeMap<String, i64> = Default::default();
            for (simplex, v) in self.cycle(&dirs) {
                let label = simplex.iter().map(|c| self.name(c)).collect::<Vec<_>>().join(",");
                *acc.entry(label).or_default() += v;
            }
            for (label, v) in acc {
                if v != 0 {
                    writeln!(s, "        \"{label}\": {v}").unwrap();
                }
            }
            writeln!(s, "      }}\n    }}").unwrap();
        }
        writeln!(s, "  }}\n}}").unwrap();
        s
    }
}

/// Text of the `n`-torus manifest (with one odd generator per direction
/// when `odd`), followed by `objects`.
pub fn torus_text(name: &str, n: usize, odd: bool, objects: &str) -> String {
    let max_level = if n >= 3 { 5 } else { 4 };
    let mut s = Torus::new(n).text(name, odd, max_level);
    s.push_str(objects);
    s
}

fn trivial_gerbe_text(m: &Manifest, name: &str, b: &str) -> String {
    let mut s = format!("    {name} {{ B {{ ");
    for ch in &m.cover.charts {
        write!(s, "{}: \"{}\" ", ch.name, b).unwrap();
    }
    s.push_str("} }\n");
    s
}

fn with_trivial_gerbes(base: &str, forms: &[(&str, &str)], gerbes: &[(&str, &str)]) -> Result<Manifest> {
    let bare = Manifest::parse(base)?;
    let mut s = base.to_string();
    s.push_str("objects {\n  forms {\n");
    for (n, f) in forms {
        writeln!(s, "    {n}: \"{f}\"").unwrap();
    }
    s.push_str("  }\n  gerbes {\n");
    for (n, b) in gerbes {
        s.push_str(&trivial_gerbe_text(&bare, n, b));
    }
    s.push_str("  }\n}\n");
    Manifest::parse(&s)
}

fn add_constructed(m: &mut Manifest, name: &str, h: &str) -> Result<Gerbe> {
    let h = parse_form(&m.cover.alg, h).map_err(|e| e.locate(1, 1))?;
    let g = deligne::construct_from_integral_form(&m.cover, &h)?;
    m.gerbes.insert(name.to_string(), g.clone());
    Ok(g)
}

const RN: &str = r#"format: 1
name: "rn"
ring {
  basis: [e1, e2]
  odd: [t1, t2, t3]
  generators { x: "e1", y: "e2" }
  order: []
}
cover {
  charts { U { coords: [x, y], center: [0, 0] } }
  partition { U: "1" }
}
"#;

pub fn build(name: &str) -> Result<Manifest> {
    match name {
        "rn" => with_trivial_gerbes(
            RN,
            &[("b", "x*dt1*dt2 + t1*t2*e1*e2"), ("soul", "t1*t2*dt3*e1 + y*t3*dt1*e2"), ("exact", "x*y*e1*e2")],
            &[("I0", "0"), ("Ib", "x*dt1*dt2 + t1*t2*e1*e2"), ("Isoul", "t1*t2*dt3*dt3 + dt1*dt2")],
        ),
        "circle" => with_trivial_gerbes(&torus_text("circle", 1, false, ""), &[("length", "tau*e1")], &[("I0", "0")]),
        "pi_circle" => with_trivial_gerbes(
            &torus_text("pi_circle", 1, true, ""),
            &[("length", "tau*e1"), ("soul", "t1*dt1*e1")],
            &[("I0", "0"), ("Isoul", "t1*dt1*e1"), ("Iclosed", "dt1*dt1")],
        ),
        "torus2" => with_trivial_gerbes(
            &torus_text("torus2", 2, false, ""),
            &[("area", "tau*e1*e2"), ("half", "1/2*tau*e1*e2"), ("exact", "c1*e1*e2")],
            &[("I0", "0"), ("Iarea", "tau*e1*e2"), ("Ihalf", "1/2*tau*e1*e2"), ("Iexact", "c1*s2*e1*e2")],
        ),
        "torus3" => with_trivial_gerbes(
            &torus_text("torus3", 3, false, ""),
            &[("vol", "tau*e1*e2*e3"), ("vol2", "2*tau*e1*e2*e3"), ("area12", "tau*e1*e2")],
            &[("I0", "0")],
        ),
        "torus3_level1" | "torus3_level2" => {
            let k = if name == "torus3_level1" { 1 } else { 2 };
            let mut m = with_trivial_gerbes(
                &torus_text(name, 3, false, ""),
                &[("H", &format!("{k}*tau*e1*e2*e3"))],
                &[],
            )?;
            add_constructed(&mut m, "G", &format!("{k}*tau*e1*e2*e3"))?;
            Ok(m)
        }
        "pi_torus3" => {
            let beta = "t1*t2*e3*e1 + c1*dt2*dt3";
            let mut m = with_trivial_gerbes(
                &torus_text(name, 3, true, ""),
                &[("vol", "tau*e1*e2*e3"), ("beta", beta)],
                &[("Ibeta", beta)],
            )?;
            let body = add_constructed(&mut m, "body", "tau*e1*e2*e3")?;
            let mixed = body.tensor(&m.gerbes["Ibeta"])?;
            m.gerbes.insert("mixed".into(), mixed);
            Ok(m)
        }
        other => Err(Error::Manifest(format!("no built-in example named `{}`", other))),
    }
}

pub fn emit(name: &str) -> Result<String> {
    Ok(build(name)?.emit())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples_validate_and_round_trip() {
        for name in ["rn", "circle", "pi_circle", "torus2"] {
            let m = build(name).unwrap();
            assert!(m.cover.validate().passed(), "{}: {}", name, m.cover.validate().to_text());
            let again = Manifest::parse(&m.emit()).unwrap();
            assert_eq!(again, m, "{}", name);
            for (g, gerbe) in &m.gerbes {
                let rep = deligne::check(&m.cover, gerbe);
                assert!(rep.passed(), "{}/{}: {}", name, g, rep.to_text());
            }
        }
    }

    #[test]
    fn torus_shapes() {
        let t = Torus::new(3);
        assert_eq!(t.charts.len(), 27);
        assert_eq!(t.facets().len(), 27);
        assert_eq!(t.cycle(&[0, 1, 2]).len(), 27 * 6);
        let m = build("torus2").unwrap();
        assert_eq!(m.cover.nerve.sizes(), vec![9, 36, 36, 9]);
        assert!(m.cover.nerve.level(2).len() == 9 * 8 / 2);
    }
}
