use skein_core::annulus::{ell_from_pair, AnnulusError, AnnulusModel, CheckKind};
use skein_core::QCoeff;

#[test]
fn ell_does_not_depend_on_the_seed() {
    let m = AnnulusModel::new().unwrap();
    for i in -4..=4 {
        let (x, y) = (m.x(i).unwrap(), m.x(i + 1).unwrap());
        assert_eq!(
            &ell_from_pair(x, y, &m.a(), &m.b()).unwrap(),
            m.loop_ell(),
            "i={i}"
        );
    }
}

#[test]
fn exchange_relation_at_minus_one() {
    let m = AnnulusModel::new().unwrap();
    let (xm, x0, x1) = (m.x(-1).unwrap(), m.x(0).unwrap(), m.x(1).unwrap());
    let rhs = &(&m.a() * &m.b()) + &(x0 * x0).scale(&QCoeff::q_pow(-2));
    assert_eq!(xm * x1, rhs);
}

#[test]
fn mutation_path_agrees_with_recurrence() {
    let m = AnnulusModel::with_bound(6).unwrap();
    for i in -6..=6 {
        assert_eq!(&m.x_by_mutation(i).unwrap(), m.x(i).unwrap(), "i={i}");
    }
    assert!(matches!(m.x(7), Err(AnnulusError::OutOfRange { .. })));
}

#[test]
fn report_contents() {
    let m = AnnulusModel::new().unwrap();
    let r = m.verify_identities(5).unwrap();
    assert!(r.passed());
    let variants: Vec<_> = r
        .entries
        .iter()
        .filter(|e| e.kind == CheckKind::Variant)
        .collect();
    assert_eq!(variants.len(), 22);
    assert!(variants.iter().all(|e| !e.holds));
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["entries"].as_array().unwrap().len(), r.entries.len());
}
