//! JSON readers and writers for the public types.
//!
//! Conventions, chosen for byte-stable and hand-editable files:
//!
//! * rationals are strings "p" or "p/q";
//! * scalars in Q(v) are {"num": [...], "den": [...]} with rational
//!   coefficient arrays ascending in the degree of v;
//! * lattice exponents are integer arrays [level, coords...];
//! * Laurent polynomials are term lists [{"exp": ..., "coeff": ...}] in the
//!   exponent order; rational functions add the binomial denominator atoms;
//! * group elements are reduced generator words [i0, i1, ...];
//! * algebra elements carry their root-datum label and substitution mode;
//! * fixture files are version-tagged, one element per named fixture with
//!   the membership configuration to run and the expected outcome.
//!
//! All readers reconstruct canonical in-memory values (words are
//! re-multiplied, fractions re-reduced), so write-then-read is the identity
//! on the mathematical objects rather than on raw strings.

use std::str::FromStr;

use crate::cherednik::{cherednik_config, MembershipConfig, MembershipReport, ViolationKind};
use crate::error::{Error, Result};
use crate::groupalg::AlgebraElement;
use crate::heckereg::hecke_config;
use crate::laurent::{ExpVec, LaurentPoly};
use crate::mellin::{Cone, ConeSeries, FiniteTorsor, TorsorFunction};
use crate::ratfun::{Mode, RatFun};
use crate::rootdata::{Label, RootDatum};
use crate::scalar::{Scalar, VPoly};
use crate::weyl::AffineWeylElement;
use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse(format!("invalid JSON: {e}"))
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialization of plain data cannot fail")
}

// ---------------------------------------------------------------------------
// scalars

fn rational_to_string(r: &BigRational) -> String {
    r.to_string()
}

fn rational_from_string(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s.trim()).map_err(|_| bad())?,
        )),
        Some((p, q)) => {
            let num = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if den == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ScalarDto {
    num: Vec<String>,
    den: Vec<String>,
}

fn scalar_to_dto(s: &Scalar) -> ScalarDto {
    ScalarDto {
        num: s.numerator().coeffs().iter().map(rational_to_string).collect(),
        den: s.denominator().coeffs().iter().map(rational_to_string).collect(),
    }
}

fn scalar_from_dto(dto: &ScalarDto) -> Result<Scalar> {
    let num: Result<Vec<BigRational>> =
        dto.num.iter().map(|s| rational_from_string(s)).collect();
    let den: Result<Vec<BigRational>> =
        dto.den.iter().map(|s| rational_from_string(s)).collect();
    Scalar::new(VPoly::from_coeffs(num?), VPoly::from_coeffs(den?))
}

// ---------------------------------------------------------------------------
// Laurent polynomials and rational functions

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TermDto {
    exp: Vec<i64>,
    coeff: ScalarDto,
}

fn laurent_to_dto(p: &LaurentPoly) -> Vec<TermDto> {
    p.terms()
        .map(|(e, c)| TermDto {
            exp: e.0.clone(),
            coeff: scalar_to_dto(c),
        })
        .collect()
}

fn laurent_from_dto(width: usize, terms: &[TermDto]) -> Result<LaurentPoly> {
    let mut p = LaurentPoly::zero(width);
    for t in terms {
        if t.exp.len() != width {
            return Err(Error::Parse(format!(
                "exponent of width {} in a width-{width} polynomial",
                t.exp.len()
            )));
        }
        p.add_term(ExpVec(t.exp.clone()), scalar_from_dto(&t.coeff)?);
    }
    Ok(p)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct AtomDto {
    coeff: ScalarDto,
    exp: Vec<i64>,
    mult: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RatFunDto {
    width: usize,
    num: Vec<TermDto>,
    den: Vec<AtomDto>,
}

fn ratfun_to_dto(f: &RatFun) -> RatFunDto {
    RatFunDto {
        width: f.num().width(),
        num: laurent_to_dto(f.num()),
        den: f
            .den_atoms()
            .iter()
            .map(|a| AtomDto {
                coeff: scalar_to_dto(&a.coeff),
                exp: a.exp.0.clone(),
                mult: a.mult,
            })
            .collect(),
    }
}

fn ratfun_from_dto(dto: &RatFunDto) -> Result<RatFun> {
    let num = laurent_from_dto(dto.width, &dto.num)?;
    let mut atoms = Vec::new();
    for a in &dto.den {
        if a.exp.len() != dto.width {
            return Err(Error::Parse(format!(
                "denominator exponent of width {} in a width-{} function",
                a.exp.len(),
                dto.width
            )));
        }
        atoms.push((scalar_from_dto(&a.coeff)?, ExpVec(a.exp.clone()), a.mult));
    }
    RatFun::from_parts(num, atoms)
}

pub fn ratfun_to_json(f: &RatFun) -> String {
    to_pretty(&ratfun_to_dto(f))
}

pub fn ratfun_from_json(text: &str) -> Result<RatFun> {
    let dto: RatFunDto = serde_json::from_str(text).map_err(json_err)?;
    ratfun_from_dto(&dto)
}

/// A plain term list (expansion output and similar): [{"exp", "coeff"}].
pub fn terms_to_json(terms: &[(ExpVec, Scalar)]) -> String {
    let dto: Vec<TermDto> = terms
        .iter()
        .map(|(e, c)| TermDto {
            exp: e.0.clone(),
            coeff: scalar_to_dto(c),
        })
        .collect();
    to_pretty(&dto)
}

/// A tuple of Laurent polynomials (Mellin transform output).
pub fn laurent_tuple_to_json(polys: &[LaurentPoly]) -> String {
    let dto: Vec<Vec<TermDto>> = polys.iter().map(laurent_to_dto).collect();
    to_pretty(&dto)
}

// ---------------------------------------------------------------------------
// algebra elements

fn mode_to_string(mode: Mode) -> &'static str {
    match mode {
        Mode::Straight => "straight",
        Mode::Star => "star",
    }
}

fn mode_from_string(s: &str) -> Result<Mode> {
    match s {
        "straight" => Ok(Mode::Straight),
        "star" => Ok(Mode::Star),
        other => Err(Error::Parse(format!("unknown mode '{other}'"))),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ElementTermDto {
    word: Vec<usize>,
    coeff: RatFunDto,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ElementDto {
    #[serde(rename = "type")]
    label: String,
    mode: String,
    terms: Vec<ElementTermDto>,
}

fn element_to_dto(datum: &RootDatum, x: &AlgebraElement) -> ElementDto {
    ElementDto {
        label: datum.label().to_string(),
        mode: mode_to_string(x.mode()).to_string(),
        terms: x
            .terms()
            .map(|(w, f)| ElementTermDto {
                word: w.reduced_word(datum),
                coeff: ratfun_to_dto(f),
            })
            .collect(),
    }
}

fn element_from_dto(dto: &ElementDto) -> Result<(RootDatum, AlgebraElement)> {
    let datum = RootDatum::from_label(&dto.label)?;
    let mode = mode_from_string(&dto.mode)?;
    let mut entries = Vec::new();
    for term in &dto.terms {
        let w = AffineWeylElement::from_word(&datum, &term.word)?;
        if term.coeff.width != datum.width() {
            return Err(Error::Parse(format!(
                "coefficient width {} does not match root datum width {}",
                term.coeff.width,
                datum.width()
            )));
        }
        entries.push((w, ratfun_from_dto(&term.coeff)?));
    }
    let x = AlgebraElement::from_terms(&datum, mode, entries);
    Ok((datum, x))
}

pub fn element_to_json(datum: &RootDatum, x: &AlgebraElement) -> String {
    to_pretty(&element_to_dto(datum, x))
}

pub fn element_from_json(text: &str) -> Result<(RootDatum, AlgebraElement)> {
    let dto: ElementDto = serde_json::from_str(text).map_err(json_err)?;
    element_from_dto(&dto)
}

// ---------------------------------------------------------------------------
// membership reports

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RootDto {
    level: i64,
    finite: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ViolationDto {
    kind: String,
    word: Vec<usize>,
    root: Option<RootDto>,
    detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ReportDto {
    compliant: bool,
    violations: Vec<ViolationDto>,
}

pub fn report_to_json(datum: &RootDatum, report: &MembershipReport) -> String {
    let dto = ReportDto {
        compliant: report.compliant(),
        violations: report
            .violations
            .iter()
            .map(|v| ViolationDto {
                kind: v.kind.to_string(),
                word: v.element.reduced_word(datum),
                root: v.root.as_ref().map(|r| RootDto {
                    level: r.level,
                    finite: r.finite.clone(),
                }),
                detail: v.detail.clone(),
            })
            .collect(),
    };
    to_pretty(&dto)
}

fn kind_from_string(s: &str) -> Result<ViolationKind> {
    match s {
        "stray-pole" => Ok(ViolationKind::StrayPole),
        "high-order-pole" => Ok(ViolationKind::HighOrderPole),
        "residue-mismatch" => Ok(ViolationKind::ResidueMismatch),
        "missing-vanishing" => Ok(ViolationKind::MissingVanishing),
        other => Err(Error::Parse(format!("unknown violation kind '{other}'"))),
    }
}

// ---------------------------------------------------------------------------
// torsor functions

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TorsorValueDto {
    index: usize,
    offset: Vec<i64>,
    coeff: ScalarDto,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TorsorFunctionDto {
    width: usize,
    base_points: Vec<Vec<i64>>,
    values: Vec<TorsorValueDto>,
}

pub fn torsor_to_json(torsor: &FiniteTorsor, phi: &TorsorFunction) -> String {
    let dto = TorsorFunctionDto {
        width: torsor.width(),
        base_points: (0..torsor.size())
            .map(|x| torsor.base_point(x).0.clone())
            .collect(),
        values: phi
            .terms()
            .map(|((x, a), c)| TorsorValueDto {
                index: *x,
                offset: a.0.clone(),
                coeff: scalar_to_dto(c),
            })
            .collect(),
    };
    to_pretty(&dto)
}

pub fn torsor_from_json(text: &str) -> Result<(FiniteTorsor, TorsorFunction)> {
    let dto: TorsorFunctionDto = serde_json::from_str(text).map_err(json_err)?;
    let base_points = dto.base_points.iter().map(|b| ExpVec(b.clone())).collect();
    let torsor = FiniteTorsor::new(dto.width, base_points)?;
    let mut phi = TorsorFunction::zero(&torsor);
    for v in &dto.values {
        phi.add_term(v.index, ExpVec(v.offset.clone()), scalar_from_dto(&v.coeff)?)?;
    }
    Ok((torsor, phi))
}

// ---------------------------------------------------------------------------
// cone series

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ConeAtomDto {
    coeff: ScalarDto,
    exp: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ConeSeriesDto {
    cone: Vec<Vec<i64>>,
    shift: Vec<i64>,
    num: Vec<TermDto>,
    den: Vec<ConeAtomDto>,
    order: usize,
}

pub fn cone_series_to_json(series: &ConeSeries) -> String {
    let dto = ConeSeriesDto {
        cone: series.cone().generators().iter().map(|g| g.0.clone()).collect(),
        shift: series.shift().0.clone(),
        num: laurent_to_dto(series.numerator()),
        den: series
            .denominators()
            .iter()
            .map(|(c, e)| ConeAtomDto {
                coeff: scalar_to_dto(c),
                exp: e.0.clone(),
            })
            .collect(),
        order: series.order(),
    };
    to_pretty(&dto)
}

pub fn cone_series_from_json(text: &str) -> Result<ConeSeries> {
    let dto: ConeSeriesDto = serde_json::from_str(text).map_err(json_err)?;
    if dto.cone.is_empty() {
        return Err(Error::Parse("cone series with no generators".into()));
    }
    let width = dto.cone[0].len();
    let cone = Cone::new(width, dto.cone.iter().map(|g| ExpVec(g.clone())).collect())?;
    let mut denominators = Vec::new();
    for a in &dto.den {
        denominators.push((scalar_from_dto(&a.coeff)?, ExpVec(a.exp.clone())));
    }
    ConeSeries::new(
        cone,
        ExpVec(dto.shift.clone()),
        laurent_from_dto(width, &dto.num)?,
        denominators,
        dto.order,
    )
}

// ---------------------------------------------------------------------------
// fixtures

/// One membership fixture: an element, the configuration to check it under,
/// and the expected outcome (None = compliant, Some(kind) = rejected with
/// that violation present).
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub label: Label,
    pub config_name: String,
    pub expected: Option<ViolationKind>,
    pub element: AlgebraElement,
}

/// Resolve a fixture's configuration name to the checker configuration.
pub fn fixture_config(name: &str) -> Result<MembershipConfig> {
    match name {
        "cherednik" => Ok(cherednik_config()),
        "hecke" => Ok(hecke_config()),
        other => Err(Error::Parse(format!(
            "unknown membership configuration '{other}'"
        ))),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FixtureDto {
    name: String,
    config: String,
    expected: String,
    element: ElementDto,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FixtureFileDto {
    version: u32,
    fixtures: Vec<FixtureDto>,
}

pub const FIXTURE_SCHEMA_VERSION: u32 = 1;

pub fn fixtures_to_json(fixtures: &[Fixture]) -> String {
    let dto = FixtureFileDto {
        version: FIXTURE_SCHEMA_VERSION,
        fixtures: fixtures
            .iter()
            .map(|f| {
                let datum = RootDatum::new(f.label);
                FixtureDto {
                    name: f.name.clone(),
                    config: f.config_name.clone(),
                    expected: match f.expected {
                        None => "compliant".to_string(),
                        Some(kind) => kind.to_string(),
                    },
                    element: element_to_dto(&datum, &f.element),
                }
            })
            .collect(),
    };
    to_pretty(&dto)
}

pub fn fixtures_from_json(text: &str) -> Result<Vec<Fixture>> {
    let dto: FixtureFileDto = serde_json::from_str(text).map_err(json_err)?;
    if dto.version != FIXTURE_SCHEMA_VERSION {
        return Err(Error::Parse(format!(
            "unsupported fixture schema version {} (expected {})",
            dto.version, FIXTURE_SCHEMA_VERSION
        )));
    }
    let mut out = Vec::new();
    for f in &dto.fixtures {
        fixture_config(&f.config)?;
        let expected = match f.expected.as_str() {
            "compliant" => None,
            other => Some(kind_from_string(other)?),
        };
        let (datum, element) = element_from_dto(&f.element)?;
        out.push(Fixture {
            name: f.name.clone(),
            label: datum.label(),
            config_name: f.config.clone(),
            expected,
            element,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cherednik::make_tau;
    use crate::heckereg::make_tau_hecke;
    use crate::mellin::{cone_expand, cone_sum};

    #[test]
    fn rational_strings_roundtrip() {
        for s in ["0", "7", "-3", "5/9", "-11/4"] {
            let r = rational_from_string(s).unwrap();
            assert_eq!(rational_to_string(&r), s);
        }
        assert!(rational_from_string("1/0").is_err());
        assert!(rational_from_string("x").is_err());
    }

    #[test]
    fn ratfun_roundtrip() {
        let d = RootDatum::new(Label::A2);
        let chi = d
            .root_character(&d.simple_affine_roots()[1])
            .unwrap();
        let f = RatFun::monomial(chi.clone(), Scalar::v_pow(-2))
            .add(&RatFun::atom_inverse(d.width(), Scalar::q(), chi).unwrap());
        let text = ratfun_to_json(&f);
        assert_eq!(ratfun_from_json(&text).unwrap(), f);
        assert!(ratfun_from_json("{").is_err());
    }

    #[test]
    fn element_roundtrip_both_modes() {
        let d = RootDatum::new(Label::A1);
        let straight = make_tau(&d, 0)
            .unwrap()
            .mul(&d, &make_tau(&d, 1).unwrap())
            .unwrap();
        let star = make_tau_hecke(
            &d,
            &AffineWeylElement::generator(&d, 1).unwrap(),
            &[1, 0],
        )
        .unwrap();
        for x in [straight, star] {
            let text = element_to_json(&d, &x);
            let (datum2, back) = element_from_json(&text).unwrap();
            assert_eq!(datum2.label(), Label::A1);
            assert_eq!(back, x);
        }
    }

    #[test]
    fn torsor_roundtrip() {
        let torsor =
            FiniteTorsor::new(2, vec![ExpVec(vec![0, 0]), ExpVec(vec![1, -1])]).unwrap();
        let mut phi = TorsorFunction::zero(&torsor);
        phi.add_term(0, ExpVec(vec![2, 0]), Scalar::v_pow(1)).unwrap();
        phi.add_term(1, ExpVec(vec![0, -3]), Scalar::from_int(-2)).unwrap();
        let text = torsor_to_json(&torsor, &phi);
        let (torsor2, phi2) = torsor_from_json(&text).unwrap();
        assert_eq!(torsor2, torsor);
        assert_eq!(phi2, phi);
    }

    #[test]
    fn cone_series_roundtrip() {
        let d = RootDatum::new(Label::A1);
        let cone = Cone::positive(&d);
        let mu = cone.generators()[1].clone();
        let f = RatFun::atom_inverse(d.width(), Scalar::one(), mu).unwrap();
        let series = cone_expand(&f, &cone, 5).unwrap();
        let text = cone_series_to_json(&series);
        let back = cone_series_from_json(&text).unwrap();
        assert_eq!(back, series);
        assert_eq!(cone_sum(&back).unwrap(), f);
    }

    #[test]
    fn fixture_roundtrip_and_versioning() {
        let d = RootDatum::new(Label::A1);
        let s = AffineWeylElement::generator(&d, 1).unwrap();
        let fixtures = vec![
            Fixture {
                name: "bare-reflection".into(),
                label: Label::A1,
                config_name: "cherednik".into(),
                expected: Some(ViolationKind::MissingVanishing),
                element: AlgebraElement::basis(&d, s, Mode::Straight),
            },
            Fixture {
                name: "identity".into(),
                label: Label::A1,
                config_name: "hecke".into(),
                expected: None,
                element: AlgebraElement::identity(&d, Mode::Star),
            },
        ];
        let text = fixtures_to_json(&fixtures);
        let back = fixtures_from_json(&text).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].name, "bare-reflection");
        assert_eq!(back[0].expected, Some(ViolationKind::MissingVanishing));
        assert_eq!(back[0].element, fixtures[0].element);
        assert_eq!(back[1].expected, None);
        assert!(fixture_config("cherednik").is_ok());
        assert!(fixture_config("hecke").is_ok());
        assert!(fixture_config("other").is_err());

        let bumped = text.replace("\"version\": 1", "\"version\": 99");
        assert!(fixtures_from_json(&bumped).is_err());
    }

    #[test]
    fn report_json_mentions_kind_and_word() {
        let d = RootDatum::new(Label::A1);
        let s = AffineWeylElement::generator(&d, 0).unwrap();
        let x = AlgebraElement::basis(&d, s, Mode::Straight);
        let report =
            crate::cherednik::check_membership(&d, &x, &cherednik_config()).unwrap();
        let text = report_to_json(&d, &report);
        assert!(text.contains("\"compliant\": false"));
        assert!(text.contains("missing-vanishing"));
        assert!(text.contains("\"word\""));
    }
}
