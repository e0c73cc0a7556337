//! Regenerates fixtures/membership.json at the workspace root.
//!
//! The file holds a curated set of membership fixtures: compliant elements
//! (generator words, dressed products, graded-twist images) plus twenty
//! violators covering every rejection kind under both checker configs.
//! Every fixture is validated against its config before the file is
//! written, so the committed data can never drift from the checker.
//!
//! Run with: cargo run -p daha-core --example make_fixtures

use std::fs;
use std::path::Path;

use daha_core::cherednik::{
    check_membership, make_tau, tau_product, translation_element, zeta, ViolationKind,
};
use daha_core::groupalg::AlgebraElement;
use daha_core::heckereg::make_tau_hecke;
use daha_core::laurent::{ExpVec, LaurentPoly};
use daha_core::mellin::rho_shift;
use daha_core::ratfun::{Mode, RatFun};
use daha_core::rootdata::{Label, RootDatum};
use daha_core::scalar::Scalar;
use daha_core::serial::{fixture_config, fixtures_to_json, Fixture};
use daha_core::weyl::AffineWeylElement;
use daha_core::Result;

fn simple_character(datum: &RootDatum, node: usize) -> ExpVec {
    let alpha = &datum.simple_affine_roots()[node];
    datum
        .root_character(alpha)
        .expect("simple roots have characters")
}

fn fixture(
    name: &str,
    label: Label,
    config_name: &str,
    expected: Option<ViolationKind>,
    element: AlgebraElement,
) -> Fixture {
    Fixture {
        name: name.to_string(),
        label,
        config_name: config_name.to_string(),
        expected,
        element,
    }
}

fn build() -> Result<Vec<Fixture>> {
    use ViolationKind::{HighOrderPole, MissingVanishing, ResidueMismatch, StrayPole};

    let a1 = RootDatum::new(Label::A1);
    let a2 = RootDatum::new(Label::A2);
    let chi1_a1 = simple_character(&a1, 1);
    let chi1_a2 = simple_character(&a2, 1);
    let chi2_a2 = simple_character(&a2, 2);
    let s1_a1 = AffineWeylElement::generator(&a1, 1)?;
    let s0_a2 = AffineWeylElement::generator(&a2, 0)?;
    let s2_a2 = AffineWeylElement::generator(&a2, 2)?;

    let mut dressing = RatFun::monomial(ExpVec::zero(a1.width()), Scalar::from_int(2));
    dressing = dressing.add(&RatFun::monomial(chi1_a1.clone(), Scalar::from_int(-1)));

    let mut out = Vec::new();

    // compliant elements under both configs
    out.push(fixture(
        "a1-generator-tau0",
        Label::A1,
        "cherednik",
        None,
        make_tau(&a1, 0)?,
    ));
    out.push(fixture(
        "a1-tau-word-10",
        Label::A1,
        "cherednik",
        None,
        tau_product(&a1, &[1, 0])?,
    ));
    out.push(fixture(
        "a2-tau-word-012",
        Label::A2,
        "cherednik",
        None,
        tau_product(&a2, &[0, 1, 2])?,
    ));
    out.push(fixture(
        "a1-dressed-tau1",
        Label::A1,
        "cherednik",
        None,
        make_tau(&a1, 1)?.scale_left(&dressing),
    ));
    out.push(fixture(
        "a2-zeta-times-tau1",
        Label::A2,
        "cherednik",
        None,
        zeta(&a2, 1).mul(&a2, &make_tau(&a2, 1)?)?,
    ));
    out.push(fixture(
        "a1-hecke-image-tau01",
        Label::A1,
        "hecke",
        None,
        rho_shift(&a1, &tau_product(&a1, &[0, 1])?),
    ));
    out.push(fixture(
        "a1-hecke-image-sum",
        Label::A1,
        "hecke",
        None,
        rho_shift(&a1, &make_tau(&a1, 0)?.add(&make_tau(&a1, 1)?)?),
    ));
    out.push(fixture(
        "a2-hecke-image-tau1",
        Label::A2,
        "hecke",
        None,
        rho_shift(&a2, &make_tau(&a2, 1)?),
    ));

    // poles off the allowed locus or off the root directions entirely
    out.push(fixture(
        "a1-offvalue-pole",
        Label::A1,
        "cherednik",
        Some(StrayPole),
        AlgebraElement::scalar_fn(
            &a1,
            RatFun::atom_inverse(a1.width(), Scalar::q(), chi1_a1.clone())?,
            Mode::Straight,
        ),
    ));
    out.push(fixture(
        "a2-nonroot-direction",
        Label::A2,
        "cherednik",
        Some(StrayPole),
        AlgebraElement::scalar_fn(
            &a2,
            RatFun::atom_inverse(a2.width(), Scalar::one(), ExpVec(vec![0, 2, 1]))?,
            Mode::Straight,
        ),
    ));
    out.push(fixture(
        "a1-hecke-offvalue-pole",
        Label::A1,
        "hecke",
        Some(StrayPole),
        AlgebraElement::scalar_fn(
            &a1,
            RatFun::atom_inverse(a1.width(), Scalar::one(), chi1_a1.clone())?,
            Mode::Star,
        ),
    ));
    out.push(fixture(
        "a2-halfvalue-pole",
        Label::A2,
        "cherednik",
        Some(StrayPole),
        AlgebraElement::scalar_fn(
            &a2,
            RatFun::atom_inverse(a2.width(), Scalar::v_pow(1), chi2_a2.clone())?,
            Mode::Straight,
        ),
    ));
    out.push(fixture(
        "a1-imprimitive-direction",
        Label::A1,
        "cherednik",
        Some(StrayPole),
        AlgebraElement::scalar_fn(
            &a1,
            RatFun::atom_inverse(a1.width(), Scalar::one(), chi1_a1.scale(2))?,
            Mode::Straight,
        ),
    ));

    // allowed locus but pole order two
    out.push(fixture(
        "a1-double-pole",
        Label::A1,
        "cherednik",
        Some(HighOrderPole),
        AlgebraElement::scalar_fn(
            &a1,
            RatFun::from_parts(
                LaurentPoly::one(a1.width()),
                [(Scalar::one(), chi1_a1.clone(), 2)],
            )?,
            Mode::Straight,
        ),
    ));
    out.push(fixture(
        "a2-double-pole",
        Label::A2,
        "cherednik",
        Some(HighOrderPole),
        AlgebraElement::scalar_fn(
            &a2,
            RatFun::from_parts(
                LaurentPoly::one(a2.width()),
                [(Scalar::one(), chi2_a2.clone(), 2)],
            )?,
            Mode::Straight,
        ),
    ));
    out.push(fixture(
        "a1-hecke-double-pole",
        Label::A1,
        "hecke",
        Some(HighOrderPole),
        AlgebraElement::scalar_fn(
            &a1,
            RatFun::from_parts(
                LaurentPoly::one(a1.width()),
                [(Scalar::q(), chi1_a1.clone(), 2)],
            )?,
            Mode::Star,
        ),
    ));
    out.push(fixture(
        "a2-hecke-double-pole",
        Label::A2,
        "hecke",
        Some(HighOrderPole),
        AlgebraElement::scalar_fn(
            &a2,
            RatFun::from_parts(
                LaurentPoly::one(a2.width()),
                [(Scalar::q(), chi2_a2.clone(), 2)],
            )?,
            Mode::Star,
        ),
    ));

    // first-order pole at the right locus with no cancelling partner
    out.push(fixture(
        "a1-unpaired-pole",
        Label::A1,
        "cherednik",
        Some(ResidueMismatch),
        AlgebraElement::from_terms(
            &a1,
            Mode::Straight,
            [(
                s1_a1.clone(),
                RatFun::atom_inverse(a1.width(), Scalar::one(), chi1_a1.clone())?,
            )],
        ),
    ));
    out.push(fixture(
        "a1-unpaired-scalar-pole",
        Label::A1,
        "cherednik",
        Some(ResidueMismatch),
        AlgebraElement::scalar_fn(
            &a1,
            RatFun::atom_inverse(a1.width(), Scalar::one(), chi1_a1.clone())?,
            Mode::Straight,
        ),
    ));
    out.push(fixture(
        "a1-samesign-pair",
        Label::A1,
        "cherednik",
        Some(ResidueMismatch),
        AlgebraElement::from_terms(
            &a1,
            Mode::Straight,
            [
                (
                    AffineWeylElement::identity(&a1),
                    RatFun::atom_inverse(a1.width(), Scalar::one(), chi1_a1.clone())?,
                ),
                (
                    s1_a1.clone(),
                    RatFun::atom_inverse(a1.width(), Scalar::one(), chi1_a1.clone())?,
                ),
            ],
        ),
    ));
    out.push(fixture(
        "a2-unpaired-pole",
        Label::A2,
        "cherednik",
        Some(ResidueMismatch),
        AlgebraElement::scalar_fn(
            &a2,
            RatFun::atom_inverse(a2.width(), Scalar::one(), chi1_a2.clone())?,
            Mode::Straight,
        ),
    ));
    out.push(fixture(
        "a1-hecke-lone-normalized-reflection",
        Label::A1,
        "hecke",
        Some(ResidueMismatch),
        make_tau_hecke(&a1, &s1_a1, &[0, 0])?,
    ));
    out.push(fixture(
        "a2-hecke-lone-normalized-reflection",
        Label::A2,
        "hecke",
        Some(ResidueMismatch),
        make_tau_hecke(&a2, &s2_a2, &[0, 0, 0])?,
    ));

    // no pole at all where vanishing is required
    out.push(fixture(
        "a1-bare-reflection",
        Label::A1,
        "cherednik",
        Some(MissingVanishing),
        AlgebraElement::basis(&a1, s1_a1.clone(), Mode::Straight),
    ));
    out.push(fixture(
        "a1-bare-translation",
        Label::A1,
        "cherednik",
        Some(MissingVanishing),
        translation_element(&a1, &[1]),
    ));
    out.push(fixture(
        "a2-bare-affine-reflection",
        Label::A2,
        "cherednik",
        Some(MissingVanishing),
        AlgebraElement::basis(&a2, s0_a2, Mode::Straight),
    ));
    out.push(fixture(
        "a1-hecke-bare-reflection",
        Label::A1,
        "hecke",
        Some(MissingVanishing),
        AlgebraElement::basis(&a1, s1_a1, Mode::Star),
    ));
    out.push(fixture(
        "a2-hecke-bare-reflection",
        Label::A2,
        "hecke",
        Some(MissingVanishing),
        AlgebraElement::basis(&a2, s2_a2, Mode::Star),
    ));

    Ok(out)
}

fn validate(fixtures: &[Fixture]) -> Result<()> {
    let mut violators = 0usize;
    for f in fixtures {
        let datum = RootDatum::new(f.label);
        let cfg = fixture_config(&f.config_name)?;
        let report = check_membership(&datum, &f.element, &cfg)?;
        match f.expected {
            None => assert!(report.compliant(), "{}: expected compliant\n{report}", f.name),
            Some(kind) => {
                violators += 1;
                assert!(!report.compliant(), "{}: expected a violation", f.name);
                assert!(
                    report.has_kind(kind),
                    "{}: expected kind {kind}\n{report}",
                    f.name
                );
            }
        }
    }
    assert_eq!(violators, 20, "the violator count is pinned at twenty");
    Ok(())
}

fn main() -> Result<()> {
    let fixtures = build()?;
    validate(&fixtures)?;
    let json = fixtures_to_json(&fixtures);
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/membership.json");
    fs::write(&path, json).expect("fixtures directory is writable");
    println!(
        "wrote {} fixtures ({} violators) to {}",
        fixtures.len(),
        20,
        path.display()
    );
    Ok(())
}
