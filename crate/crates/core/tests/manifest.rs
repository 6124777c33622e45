use supergerbe::deligne;
use supergerbe::examples;
use supergerbe::manifest::{emit_certificate, emit_decomposition, parse_evidence, Evidence, Manifest};
use supergerbe::{body_soul, Error};

fn circle_text() -> String {
    examples::emit("circle").unwrap()
}

fn parse_err(text: &str) -> (usize, usize, String) {
    match Manifest::parse(text) {
        Err(Error::Parse { line, col, msg }) => (line, col, msg),
        other => panic!("expected a located error, got {:?}", other.map(|m| m.name)),
    }
}

#[test]
fn circle_loads() {
    let m = Manifest::parse(&circle_text()).unwrap();
    assert_eq!(m.cover.n_charts(), 3);
    assert_eq!(m.cover.nerve.sizes(), vec![3, 3]);
}

#[test]
fn torus3_loads_and_validates() {
    let m = Manifest::parse(&examples::emit("torus3").unwrap()).unwrap();
    assert_eq!(m.cover.n_charts(), 27);
    assert_eq!(m.cover.nerve.level(2).len(), 351);
    assert!(m.cover.validate().passed());
}

#[test]
fn odd_curving_is_rejected_by_field() {
    let text = circle_text().replace("gerbes {", "gerbes {\n    bad { B { A1: \"t*e1\" } }");
    let text = text.replace("basis: [e1]", "basis: [e1]\n  odd: [t]");
    let (line, col, msg) = parse_err(&text);
    assert!(msg.contains("`B` on A1") && msg.contains("odd"), "{}", msg);
    let bad_line = text.lines().nth(line - 1).unwrap();
    assert!(bad_line.contains("bad"), "{} at {}:{}", bad_line, line, col);
    assert_eq!(&bad_line[col - 1..col + 3], "t*e1");
}

#[test]
fn floats_are_rejected_with_position() {
    let text = circle_text().replace("center: [1/3]", "center: [0.5]");
    let (line, col, msg) = parse_err(&text);
    assert!(msg.contains("floating-point"), "{}", msg);
    assert_eq!(&text.lines().nth(line - 1).unwrap()[col - 1..col + 2], "0.5");
}

#[test]
fn expression_errors_point_into_the_string() {
    let text = circle_text().replace("length: \"tau*e1\"", "length: \"tau*e1 + q\"");
    let (line, col, msg) = parse_err(&text);
    assert!(msg.contains('q'), "{}", msg);
    assert_eq!(&text.lines().nth(line - 1).unwrap()[col - 1..col], "q");
}

#[test]
fn unknown_keys_and_versions() {
    let (line, _, msg) = parse_err(&circle_text().replace("format: 1", "format: 1\nflavour: 2"));
    assert_eq!(line, 2);
    assert!(msg.contains("flavour"));
    let (line, _, msg) = parse_err(&circle_text().replace("format: 1", "format: 2"));
    assert_eq!(line, 1);
    assert!(msg.contains("format"));
}

#[test]
fn broken_partition_fails_validation() {
    let text = circle_text().replacen("1/3*c1", "1/3*c1 + 1", 1);
    let (_, _, msg) = parse_err(&text);
    assert!(msg.contains("partition of unity"), "{}", msg);
}

#[test]
fn checked_parse_rejects_broken_gerbes() {
    let m = examples::build("torus2").unwrap();
    let mut g = m.gerbe("Iarea").unwrap().clone();
    g.a.comps[0] = supergerbe::expr::parse_form(&m.cover.alg, "e1").unwrap();
    let mut m2 = m.clone();
    m2.gerbes.insert("broken".into(), g);
    let text = m2.emit();
    assert!(Manifest::parse(&text).is_ok());
    match Manifest::parse_checked(&text) {
        Err(Error::Parse { msg, .. }) => assert!(msg.contains("broken"), "{}", msg),
        other => panic!("{:?}", other.map(|m| m.name)),
    }
}

#[test]
fn documents_round_trip() {
    let m = examples::build("pi_torus3").unwrap();
    let c = &m.cover;
    let g = m.gerbe("mixed").unwrap();
    let d = body_soul::decompose(c, g).unwrap();
    let text = emit_decomposition(c, "mixed", &d);
    assert!(text.starts_with("format: 1\n"));
    let (name, ev) = parse_evidence(c, &text).unwrap();
    assert_eq!(name.as_deref(), Some("mixed"));
    assert_eq!(ev, Evidence::Decomposition(d.clone()));
    assert_eq!(emit_decomposition(c, "mixed", &d), text);

    let t2 = examples::build("torus2").unwrap();
    let cert = deligne::trivialize(&t2.cover, t2.gerbe("Iarea").unwrap()).unwrap();
    let text = emit_certificate(&t2.cover, "Iarea", &cert);
    let (_, ev) = parse_evidence(&t2.cover, &text).unwrap();
    assert_eq!(ev, Evidence::Certificate(cert));
}

#[test]
fn emitted_text_has_no_floats() {
    for (name, _) in examples::NAMES {
        let text = examples::emit(name).unwrap();
        let b = text.as_bytes();
        for i in 1..b.len() {
            let digit_before = b[i - 1].is_ascii_digit() && (i < 2 || !b[i - 2].is_ascii_alphabetic() && b[i - 2] != b'_');
            if digit_before && (b[i] == b'.' || b[i] == b'e' || b[i] == b'E') {
                panic!("{} emits a float near `{}`", name, &text[i.saturating_sub(8)..(i + 8).min(text.len())]);
            }
        }
        assert_eq!(Manifest::parse(&text).unwrap().emit(), text, "{}", name);
    }
}
