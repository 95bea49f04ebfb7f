use qmink::coact::{
    check_coaction_identity, check_coassociativity, check_commuting_square,
    classical_limit_compare, leg_extend, Morphism, Side,
};
use qmink::dsl::{builtin, parse_poly, Document};
use qmink::ncalg::tensor;
use qmink::{Mor, Poly};

fn coaction() -> Document {
    builtin("coaction").unwrap()
}

fn gen(m: &Mor, name: &str) -> Poly {
    Poly::letter(m.domain().find(name, 0).unwrap())
}

fn image(m: &Mor, name: &str) -> String {
    m.codomain().render(&m.apply(&gen(m, name)).unwrap())
}

#[test]
fn apply_on_generators_and_unit() {
    let doc = coaction();
    let delta = doc.morphism("delta").unwrap();
    assert_eq!(image(delta, "a"), "a | a + b | c");
    assert_eq!(delta.codomain().render(&delta.apply(&Poly::one()).unwrap()), "1");
    assert_eq!(image(delta, "a'"), "a' | a' + b' | c'");
}

#[test]
fn comultiplication_preserves_every_relation() {
    let doc = coaction();
    let delta = doc.morphism("delta").unwrap();
    let report = delta.check_relations_preserved().unwrap();
    assert_eq!(report.items.len(), delta.domain().rules().len());
    assert!(report.items.iter().any(|r| r.label == "a d -> 1 + b c"));
    assert!(report.items.iter().any(|r| r.label == "b' a -> q^4 a b'"));
    assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
}

#[test]
fn determinant_expands_to_unit() {
    let doc = coaction();
    let delta = doc.morphism("delta").unwrap();
    let l = delta.domain();
    let ad = delta.apply(&parse_poly("a d", l).unwrap()).unwrap();
    let bc = delta.apply(&parse_poly("b c", l).unwrap()).unwrap();
    assert_eq!(delta.codomain().render(&(ad - bc)), "1");
}

#[test]
fn coaction_preserves_every_relation() {
    let doc = coaction();
    let dh = doc.morphism("delta_h").unwrap();
    let report = dh.check_relations_preserved().unwrap();
    assert!(report.items.iter().any(|r| r.label == "w x -> q^-4 x w"));
    assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
}

#[test]
fn coassociativity_on_all_generators() {
    let doc = coaction();
    let delta = doc.morphism("delta").unwrap();
    let report = check_coassociativity(delta).unwrap();
    assert_eq!(report.items.len(), 4);
    assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
}

#[test]
fn two_step_expansion_of_a() {
    let doc = coaction();
    let delta = doc.morphism("delta").unwrap();
    let l = delta.domain();
    let left = delta.then(&leg_extend(delta, Side::Left, l).unwrap()).unwrap();
    let a = l.find("a", 0).unwrap();
    let lll = left.codomain();
    let expected = parse_poly("a | a | a + b | c | a + a | b | c + b | d | c", lll).unwrap();
    assert_eq!(left.image(a), &lll.normalize(&expected).unwrap());
}

#[test]
fn coaction_identity_on_x_y_w() {
    let doc = coaction();
    let report =
        check_coaction_identity(doc.morphism("delta_h").unwrap(), doc.morphism("delta").unwrap())
            .unwrap();
    let labels: Vec<_> = report.items.iter().map(|r| r.label.as_str()).collect();
    assert_eq!(labels, ["x", "y", "w"]);
    assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
}

#[test]
fn star_equivariance() {
    let doc = coaction();
    for name in ["delta", "delta_h"] {
        let m = doc.morphism(name).unwrap();
        let report = m.check_star_equivariance().unwrap();
        assert!(report.passed(), "{name}: {:?}", report.failures().collect::<Vec<_>>());
    }
    let dh = doc.morphism("delta_h").unwrap();
    let x = dh.apply(&gen(dh, "x")).unwrap();
    assert_eq!(dh.codomain().star_normalized(&x).unwrap(), x);
}

#[test]
fn classical_limits_match_the_undeformed_morphisms() {
    let doc = coaction();
    let classical = builtin("classical").unwrap();
    for name in ["delta", "delta_h"] {
        let report = classical_limit_compare(
            doc.morphism(name).unwrap(),
            classical.morphism(name).unwrap(),
        )
        .unwrap();
        assert!(report.passed(), "{name}: {:?}", report.failures().collect::<Vec<_>>());
    }
}

#[test]
fn classical_limit_detects_a_wrong_reference() {
    let doc = coaction();
    let classical = builtin("classical").unwrap();
    let wrong = Morphism::identity(classical.algebra("lorentz").unwrap());
    let report = classical_limit_compare(doc.morphism("delta").unwrap(), &wrong);
    // Different codomain: the tensor generators do not exist in the reference.
    assert!(report.is_err() || !report.unwrap().passed());
}

#[test]
fn classical_morphisms_are_valid() {
    let classical = builtin("classical").unwrap();
    for name in ["delta", "delta_h"] {
        let m = classical.morphism(name).unwrap();
        assert!(m.check_relations_preserved().unwrap().passed(), "{name}");
    }
}

#[test]
fn identity_morphism_checks() {
    let doc = coaction();
    let l = doc.algebra("lorentz").unwrap();
    let id = Morphism::identity(l);
    assert!(id.check_relations_preserved().unwrap().passed());
    assert!(id.check_star_equivariance().unwrap().passed());
    assert!(check_commuting_square(&id, &id, &[]).unwrap().passed());
    assert!(classical_limit_compare(&id, &id).is_ok());
    let ll = tensor(l, l);
    for side in [Side::Left, Side::Right] {
        let ext = leg_extend(&id, side, l).unwrap();
        assert!(check_commuting_square(&ext, &Morphism::identity(&ll), &[]).unwrap().passed());
    }
}

#[test]
fn leg_extension_acts_on_one_leg() {
    let doc = coaction();
    let delta = doc.morphism("delta").unwrap();
    let l = delta.domain();
    let left = leg_extend(delta, Side::Left, l).unwrap();
    let a_left = parse_poly("a | 1", left.domain()).unwrap();
    assert_eq!(left.codomain().render(&left.apply(&a_left).unwrap()), "a | a | 1 + b | c | 1");
    let right = leg_extend(delta, Side::Right, l).unwrap();
    let a_right = parse_poly("1 | a", right.domain()).unwrap();
    assert_eq!(right.codomain().render(&right.apply(&a_right).unwrap()), "1 | a | a + 1 | b | c");
}

#[test]
fn broken_morphism_reports_residual() {
    // Sending a to a | a alone breaks the determinant relation.
    let src = format!(
        "{}\nmorphism bad : lorentz -> lorentz * lorentz {{\n  a -> a | a;\n  b -> a | b + b | d;\n  c -> c | a + d | c;\n  d -> c | b + d | d;\n}}\n",
        qmink::dsl::LORENTZ_SRC
    );
    let doc = qmink::dsl::parse(&src).unwrap();
    let report = doc.morphism("bad").unwrap().check_relations_preserved().unwrap();
    assert!(!report.passed());
    let det = report.items.iter().find(|r| r.label == "a d -> 1 + b c").unwrap();
    assert!(!det.is_zero);
    assert_ne!(det.residual, "0");
}

#[test]
fn multiplicativity_on_random_products() {
    use rand::{Rng, SeedableRng};
    let doc = coaction();
    let dh = doc.morphism("delta_h").unwrap();
    let m = dh.domain();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let mut rand_poly = || {
            let mut p = Poly::zero();
            for _ in 0..2 {
                let len = rng.gen_range(0..3);
                let w = (0..len).map(|_| rng.gen_range(0..m.num_generators())).collect();
                p.add_term(qmink::ncalg::Word(w), qmink::Scalar::q_pow(rng.gen_range(-2..=2)));
            }
            p
        };
        let (p, r) = (rand_poly(), rand_poly());
        let lhs = dh.apply(&(&p * &r)).unwrap();
        let rhs = dh.codomain().normalize(&(&dh.apply(&p).unwrap() * &dh.apply(&r).unwrap())).unwrap();
        assert_eq!(lhs, rhs);
    }
}
