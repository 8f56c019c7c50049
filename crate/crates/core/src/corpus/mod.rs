//! The identity corpus: a registry of identities, their builders, and the
//! coefficientwise verification engine.

mod classical;
mod degeneration;
mod qultra;
mod shifted;
pub mod sums;
mod wp_rows;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::rational::fmt_rational;
use crate::series::{TSeries, EXACT};

pub use degeneration::{degeneration_suite, degeneration_suite_at, index_shift_check, DegenerationCheck};
pub use qultra::{connection_check, qultra_poly, LaurentPolyX};
pub use shifted::{corrupted_kmrr, kmrr_inversion_sequences};
pub use sums::{MultiSum, SumOptions, SumResult};

/// Default truncation order in t-units when an instance names none.
pub const FALLBACK_ORDER: i64 = 40;

/// The order used when an instance has none: `BAILEYKIT_DEFAULT_ORDER`
/// if set to an integer, else [`FALLBACK_ORDER`].
pub fn default_order() -> i64 {
    std::env::var("BAILEYKIT_DEFAULT_ORDER")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(FALLBACK_ORDER)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Mono(Monomial),
    Inf,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Mono(m) => write!(f, "{m}"),
            Value::Inf => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    NonNegInt,
    PosInt,
    Monomial,
}

impl ParamKind {
    pub fn name(self) -> &'static str {
        match self {
            ParamKind::NonNegInt => "nonneg-int",
            ParamKind::PosInt => "pos-int",
            ParamKind::Monomial => "monomial",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ParamDef {
    pub name: &'static str,
    pub kind: ParamKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    SeriesEquality,
    PolynomialEquality,
    BivariateEquality,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::SeriesEquality => "series-equality",
            Kind::PolynomialEquality => "polynomial-equality",
            Kind::BivariateEquality => "bivariate-equality",
        }
    }
}

/// Parameter bindings of one instance, in the order they were given.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings(pub Vec<(String, Value)>);

impl Bindings {
    pub fn get(&self, name: &str) -> Option<&Value> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    fn missing(name: &str) -> Error {
        Error::ConstraintViolation(format!("missing parameter {name}"))
    }

    pub fn int(&self, name: &str) -> Result<i64> {
        match self.get(name) {
            Some(Value::Int(n)) => Ok(*n),
            Some(Value::Mono(m)) if m.texp == 0 && m.coeff.is_integer() => {
                Ok(m.coeff.to_integer().try_into().map_err(|_| {
                    Error::ConstraintViolation(format!("{name} is out of range"))
                })?)
            }
            Some(v) => Err(Error::ConstraintViolation(format!("{name} must be an integer, got {v}"))),
            None => Err(Self::missing(name)),
        }
    }

    pub fn mono(&self, name: &str) -> Result<Monomial> {
        match self.get(name) {
            Some(Value::Int(n)) => Ok(Monomial::constant(crate::rational::rat(*n))),
            Some(Value::Mono(m)) => Ok(m.clone()),
            Some(Value::Inf) => Err(Error::ConstraintViolation(format!("{name} must be finite"))),
            None => Err(Self::missing(name)),
        }
    }

    /// Like [`Bindings::int`], but `None` when the parameter is absent.
    fn opt_int(&self, name: &str) -> Result<Option<i64>> {
        self.get(name).map(|_| self.int(name)).transpose()
    }

    fn opt_mono(&self, name: &str) -> Result<Option<Monomial>> {
        self.get(name).map(|_| self.mono(name)).transpose()
    }
}

/// One side of an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Series(TSeries),
    Bivariate(LaurentPolyX),
}

impl Side {
    pub fn as_series(&self) -> Option<&TSeries> {
        match self {
            Side::Series(s) => Some(s),
            Side::Bivariate(_) => None,
        }
    }
}

/// Both sides of an instance, with bookkeeping.
#[derive(Clone, Debug)]
pub struct Built {
    pub lhs: Side,
    pub rhs: Side,
    pub terms: usize,
    /// Bindings computed by the builder, e.g. `lambda`.
    pub derived: Vec<(String, Monomial)>,
}

type CheckFn = fn(&Bindings) -> Result<()>;
type BuildFn = fn(&Bindings, i64, &SumOptions) -> Result<Built>;

pub struct IdentityDef {
    pub id: &'static str,
    /// Short human-readable description shown by `list`.
    pub label: &'static str,
    pub params: &'static [ParamDef],
    /// The constraints in words.
    pub constraints: &'static str,
    pub kind: Kind,
    check: CheckFn,
    build: BuildFn,
}

impl fmt::Debug for IdentityDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityDef").field("id", &self.id).finish_non_exhaustive()
    }
}

impl IdentityDef {
    pub fn param(&self, name: &str) -> Option<&ParamDef> {
        self.params.iter().find(|p| p.name == name)
    }

    /// Checks kinds and every constraint whose parameters are all bound.
    pub fn check(&self, b: &Bindings) -> Result<()> {
        let mut seen = BTreeSet::new();
        for (name, v) in &b.0 {
            let Some(p) = self.param(name) else {
                return Err(Error::UnknownParameter { id: self.id.to_string(), param: name.clone() });
            };
            if !seen.insert(name.as_str()) {
                return Err(Error::ConstraintViolation(format!("{name} is bound twice")));
            }
            match (p.kind, v) {
                (ParamKind::NonNegInt, _) => {
                    if b.int(name)? < 0 {
                        return Err(Error::ConstraintViolation(format!("{name} must be >= 0")));
                    }
                }
                (ParamKind::PosInt, _) => {
                    if b.int(name)? < 1 {
                        return Err(Error::ConstraintViolation(format!("{name} must be >= 1")));
                    }
                }
                (ParamKind::Monomial, Value::Inf) => {
                    return Err(Error::ConstraintViolation(format!("{name} must be finite")));
                }
                (ParamKind::Monomial, _) => {}
            }
        }
        (self.check)(b)
    }

    fn require_all(&self, b: &Bindings) -> Result<()> {
        for p in self.params {
            if b.get(p.name).is_none() {
                return Err(Bindings::missing(p.name));
            }
        }
        Ok(())
    }

    pub fn build(&self, b: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
        self.check(b)?;
        self.require_all(b)?;
        (self.build)(b, order, opts)
    }
}

macro_rules! params {
    ($($name:literal : $kind:ident),* $(,)?) => {
        &[$(ParamDef { name: $name, kind: ParamKind::$kind }),*]
    };
}

static REGISTRY: &[IdentityDef] = &[
    IdentityDef {
        id: "RR1",
        label: "first Rogers-Ramanujan identity",
        params: params!(),
        constraints: "",
        kind: Kind::SeriesEquality,
        check: classical::no_check,
        build: classical::rr1,
    },
    IdentityDef {
        id: "RR2",
        label: "second Rogers-Ramanujan identity",
        params: params!(),
        constraints: "",
        kind: Kind::SeriesEquality,
        check: classical::no_check,
        build: classical::rr2,
    },
    IdentityDef {
        id: "QBI",
        label: "finite q-binomial theorem",
        params: params!("n": NonNegInt, "z": Monomial),
        constraints: "n <= 10",
        kind: Kind::SeriesEquality,
        check: classical::check_qbi,
        build: classical::qbi,
    },
    IdentityDef {
        id: "QPS",
        label: "q-Pfaff-Saalschutz summation",
        params: params!("n": NonNegInt, "a": Monomial, "b": Monomial, "c": Monomial),
        constraints: "n <= 8; a, b, c nonzero; denominators nonvanishing",
        kind: Kind::SeriesEquality,
        check: classical::check_qps,
        build: classical::qps,
    },
    IdentityDef {
        id: "JTP",
        label: "Jacobi triple product (q, z, q/z)_inf",
        params: params!("z": Monomial),
        constraints: "z nonzero",
        kind: Kind::SeriesEquality,
        check: classical::check_jtp,
        build: classical::jtp,
    },
    IdentityDef {
        id: "KMRR",
        label: "m-version of the Andrews-Gordon identities, modulus 2k+1",
        params: params!("k": PosInt, "m": NonNegInt),
        constraints: "k >= 1, m >= 0",
        kind: Kind::SeriesEquality,
        check: classical::no_check,
        build: shifted::kmrr,
    },
    IdentityDef {
        id: "KMGG",
        label: "m-version of the Gollnitz-Gordon type identities, modulus 4k in t",
        params: params!("k": PosInt, "m": NonNegInt),
        constraints: "k >= 1, m >= 0",
        kind: Kind::SeriesEquality,
        check: classical::no_check,
        build: shifted::kmgg,
    },
    IdentityDef {
        id: "K1MRR",
        label: "polynomial identity, zero when m = 2 mod 3",
        params: params!("m": NonNegInt),
        constraints: "m >= 0",
        kind: Kind::PolynomialEquality,
        check: classical::no_check,
        build: shifted::k1mrr,
    },
    IdentityDef {
        id: "K1MGG_EVEN",
        label: "polynomial identity in base q^2, (-1)^floor(m/2) q^(m(3m-1)/2)",
        params: params!("m": NonNegInt),
        constraints: "m >= 0",
        kind: Kind::PolynomialEquality,
        check: classical::no_check,
        build: shifted::k1mgg_even,
    },
    IdentityDef {
        id: "K1MGG_ODD",
        label: "polynomial identity, zero when m is odd",
        params: params!("m": NonNegInt),
        constraints: "m >= 0",
        kind: Kind::PolynomialEquality,
        check: classical::no_check,
        build: shifted::k1mgg_odd,
    },
    IdentityDef {
        id: "MRR",
        label: "m-version of Rogers-Ramanujan, (q^5, q^(2m+2), q^(3-2m); q^5)_inf / (q)_inf",
        params: params!("m": NonNegInt),
        constraints: "m >= 0",
        kind: Kind::SeriesEquality,
        check: classical::no_check,
        build: shifted::mrr,
    },
    IdentityDef {
        id: "MGG",
        label: "m-version of Gollnitz-Gordon, (q^8, q^(3m+3), q^(5-3m); q^8)_inf",
        params: params!("m": NonNegInt),
        constraints: "m >= 0",
        kind: Kind::SeriesEquality,
        check: classical::no_check,
        build: shifted::mgg,
    },
    IdentityDef {
        id: "GIS",
        label: "sum q^(n^2+nm)/(q)_n as a finite sum of products",
        params: params!("m": NonNegInt),
        constraints: "m >= 0",
        kind: Kind::SeriesEquality,
        check: classical::no_check,
        build: shifted::gis,
    },
    IdentityDef {
        id: "KMRR_INV",
        label: "inverted m-version of the Andrews-Gordon identities",
        params: params!("k": PosInt, "m": NonNegInt),
        constraints: "k >= 1, m >= 0",
        kind: Kind::SeriesEquality,
        check: classical::no_check,
        build: shifted::kmrr_inv,
    },
    IdentityDef {
        id: "K2MRR",
        label: "Andrews-Gordon product (q^(2k+1), q^(k+m+1), q^(k-m); q^(2k+1))_inf",
        params: params!("k": PosInt, "m": NonNegInt),
        constraints: "k >= 1, m >= 0",
        kind: Kind::SeriesEquality,
        check: classical::no_check,
        build: shifted::k2mrr,
    },
    IdentityDef {
        id: "LHS_FULL_AG",
        label: "two multisum forms of the full Andrews-Gordon left side",
        params: params!("k": PosInt, "m": PosInt),
        constraints: "1 <= m <= k-1",
        kind: Kind::SeriesEquality,
        check: shifted::check_full_ag,
        build: shifted::lhs_full_ag,
    },
    IdentityDef {
        id: "KMRR_CHANGE",
        label: "change-of-base m-version, modulus 2k",
        params: params!("k": PosInt, "m": NonNegInt),
        constraints: "k >= 1, m >= 0",
        kind: Kind::SeriesEquality,
        check: classical::no_check,
        build: shifted::kmrr_change,
    },
    IdentityDef {
        id: "KMGG_INV",
        label: "inverted change-of-base m-version, modulus 2k",
        params: params!("k": PosInt, "m": NonNegInt),
        constraints: "k >= 1, m >= 0",
        kind: Kind::SeriesEquality,
        check: classical::no_check,
        build: shifted::kmgg_inv,
    },
    IdentityDef {
        id: "T8PSI8",
        label: "8psi8 transformation, lambda = alpha mu1 mu2 / (a q)",
        params: params!(
            "m": NonNegInt,
            "a": Monomial,
            "alpha": Monomial,
            "rho1": Monomial,
            "rho2": Monomial,
            "mu1": Monomial,
            "mu2": Monomial
        ),
        constraints: "val(alpha/a) >= 1 or alpha = 0; val(aq/(mu1 mu2)) >= 1 (t-units); a not an integral power of q",
        kind: Kind::SeriesEquality,
        check: wp_rows::check_t8psi8,
        build: wp_rows::t8psi8,
    },
    IdentityDef {
        id: "R1PSI1",
        label: "Ramanujan's 1psi1 summation",
        params: params!("b": Monomial, "c": Monomial, "z": Monomial),
        constraints: "val(z) >= 1; val(c/b) >= val(z) + 1 (t-units)",
        kind: Kind::SeriesEquality,
        check: wp_rows::check_r1psi1,
        build: wp_rows::r1psi1,
    },
    IdentityDef {
        id: "B6PSI6",
        label: "Bailey's 6psi6 summation",
        params: params!("a": Monomial, "b": Monomial, "c": Monomial, "d": Monomial, "e": Monomial),
        constraints: "val(a^2 q/(bcde)) >= 1 (t-units)",
        kind: Kind::SeriesEquality,
        check: wp_rows::check_b6psi6,
        build: wp_rows::b6psi6,
    },
    IdentityDef {
        id: "EXT63",
        label: "bilateral extension with a 4phi3 in q/beta^2",
        params: params!("m": NonNegInt, "beta": Monomial, "gamma": Monomial, "rho": Monomial),
        constraints: "val(q/beta^2) >= 1 (t-units); beta, gamma, rho nonzero",
        kind: Kind::SeriesEquality,
        check: wp_rows::check_ext63,
        build: wp_rows::ext63,
    },
    IdentityDef {
        id: "QULTRA_CONN",
        label: "connection coefficients of continuous q-ultraspherical polynomials",
        params: params!("n": NonNegInt, "beta": Monomial, "c": Monomial),
        constraints: "n <= 12; beta not 1",
        kind: Kind::BivariateEquality,
        check: qultra::check_conn,
        build: qultra::conn,
    },
];

pub fn registry() -> &'static [IdentityDef] {
    REGISTRY
}

pub fn lookup(id: &str) -> Result<&'static IdentityDef> {
    REGISTRY.iter().find(|d| d.id == id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityInstance {
    pub id: String,
    pub bindings: Bindings,
    /// Truncation order in t-units; `None` means [`default_order`].
    pub order: Option<i64>,
}

impl IdentityInstance {
    pub fn new(id: &str, bindings: &[(&str, Value)], order: i64) -> Self {
        IdentityInstance {
            id: id.to_string(),
            bindings: Bindings(bindings.iter().map(|(n, v)| (n.to_string(), v.clone())).collect()),
            order: Some(order),
        }
    }

    pub fn order(&self) -> i64 {
        self.order.unwrap_or_else(default_order)
    }

    pub fn def(&self) -> Result<&'static IdentityDef> {
        lookup(&self.id)
    }

    /// Canonical one-line form, readable by the instance parser.
    pub fn to_line(&self) -> String {
        let mut s = self.id.clone();
        for (n, v) in &self.bindings.0 {
            s.push_str(&format!(" {n}={v}"));
        }
        if let Some(o) = self.order {
            s.push_str(&format!(" order={o}"));
        }
        s
    }
}

pub fn build_sides(inst: &IdentityInstance, opts: &SumOptions) -> Result<Built> {
    inst.def()?.build(&inst.bindings, inst.order(), opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub order: i64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch_texp: Option<i64>,
    /// x-exponent of the mismatch for bivariate identities.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch_xexp: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs_coeff: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_coeff: Option<String>,
    pub terms_summed: usize,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl VerificationReport {
    pub(crate) fn blank(inst: &IdentityInstance) -> Self {
        let params = inst
            .bindings
            .0
            .iter()
            .map(|(n, v)| {
                let j = match v {
                    Value::Int(i) => serde_json::Value::from(*i),
                    other => serde_json::Value::from(other.to_string()),
                };
                (n.clone(), j)
            })
            .collect();
        VerificationReport {
            id: inst.id.clone(),
            params,
            order: inst.order(),
            status: Status::Error,
            first_mismatch_texp: None,
            first_mismatch_xexp: None,
            lhs_coeff: None,
            rhs_coeff: None,
            terms_summed: 0,
            elapsed_ms: 0,
            error: None,
        }
    }

    /// One line without timing, stable across runs.
    pub fn summary_line(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={}", json_plain(v))).collect();
        let mut s = format!("{} {} order={} {}", self.status, self.id, self.order, params.join(" "));
        s = s.trim_end().to_string();
        match self.status {
            Status::Pass => s.push_str(&format!(" terms={}", self.terms_summed)),
            Status::Fail => {
                if let Some(x) = self.first_mismatch_xexp {
                    s.push_str(&format!(" x^{x}"));
                }
                s.push_str(&format!(
                    " mismatch at t^{}: lhs {} rhs {}",
                    self.first_mismatch_texp.unwrap_or_default(),
                    self.lhs_coeff.as_deref().unwrap_or("?"),
                    self.rhs_coeff.as_deref().unwrap_or("?")
                ));
            }
            Status::Error => s.push_str(&format!(": {}", self.error.as_deref().unwrap_or("error"))),
        }
        s
    }
}

fn json_plain(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// First difference between two sides as `(x-exponent, t-exponent, lhs, rhs)`.
pub fn compare_sides(lhs: &Side, rhs: &Side) -> Option<(Option<i64>, i64, String, String)> {
    match (lhs, rhs) {
        (Side::Series(a), Side::Series(b)) => a
            .first_mismatch(b)
            .map(|e| (None, e, fmt_rational(&a.coeff(e)), fmt_rational(&b.coeff(e)))),
        (Side::Bivariate(a), Side::Bivariate(b)) => {
            let keys: BTreeSet<i64> = a.keys().chain(b.keys()).copied().collect();
            for x in keys {
                let za = TSeries::zero(EXACT);
                let sa = a.get(&x).unwrap_or(&za);
                let sb = b.get(&x).unwrap_or(&za);
                if let Some(e) = sa.first_mismatch(sb) {
                    return Some((Some(x), e, fmt_rational(&sa.coeff(e)), fmt_rational(&sb.coeff(e))));
                }
            }
            None
        }
        _ => Some((None, 0, "?".into(), "?".into())),
    }
}

/// Truncates both sides to the instance order so reruns compare equal.
fn clip(side: &Side, order: i64) -> Side {
    match side {
        Side::Series(s) => Side::Series(s.truncate(order.min(s.order()))),
        Side::Bivariate(p) => Side::Bivariate(p.iter().map(|(k, s)| (*k, s.truncate(order.min(s.order())))).collect()),
    }
}

fn same_sides(a: &Built, b: &Built, order: i64) -> bool {
    compare_sides(&clip(&a.lhs, order), &clip(&b.lhs, order)).is_none()
        && compare_sides(&clip(&a.rhs, order), &clip(&b.rhs, order)).is_none()
}

/// Builds both sides and compares them. A passing instance is rebuilt with
/// doubled summation windows; any change in a coefficient turns the report
/// into an error.
pub fn verify(inst: &IdentityInstance) -> VerificationReport {
    let start = Instant::now();
    let mut rep = VerificationReport::blank(inst);
    let order = inst.order();
    let outcome = (|| -> Result<()> {
        let built = build_sides(inst, &SumOptions::default())?;
        rep.terms_summed = built.terms;
        match compare_sides(&built.lhs, &built.rhs) {
            Some((x, e, l, r)) => {
                rep.status = Status::Fail;
                rep.first_mismatch_xexp = x;
                rep.first_mismatch_texp = Some(e);
                rep.lhs_coeff = Some(l);
                rep.rhs_coeff = Some(r);
            }
            None => {
                let wide = build_sides(inst, &SumOptions { doubled: true, reversed: false })?;
                if same_sides(&built, &wide, order) {
                    rep.status = Status::Pass;
                } else {
                    rep.status = Status::Error;
                    rep.error = Some("doubling the summation windows changed a coefficient".into());
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        rep.status = Status::Error;
        rep.error = Some(e.to_string());
    }
    rep.elapsed_ms = start.elapsed().as_millis() as u64;
    rep
}

/// Verifies a batch; reports come back in input order.
pub fn verify_all(insts: &[IdentityInstance]) -> Vec<VerificationReport> {
    crate::par::map(insts, verify)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResummationReport {
    pub identical: bool,
    pub detail: Option<String>,
}

/// Rebuilds both sides with doubled windows and with the summation order
/// reversed, and checks every coefficient up to the order against the
/// plain build.
pub fn resummation_check(inst: &IdentityInstance) -> ResummationReport {
    let order = inst.order();
    let run = || -> Result<Option<String>> {
        let base = build_sides(inst, &SumOptions::default())?;
        for opts in [
            SumOptions { doubled: true, reversed: false },
            SumOptions { doubled: false, reversed: true },
            SumOptions { doubled: true, reversed: true },
        ] {
            let other = build_sides(inst, &opts)?;
            if !same_sides(&base, &other, order) {
                return Ok(Some(format!("coefficients differ under {opts:?}")));
            }
        }
        Ok(None)
    };
    match run() {
        Ok(None) => ResummationReport { identical: true, detail: None },
        Ok(Some(d)) => ResummationReport { identical: false, detail: Some(d) },
        Err(e) => ResummationReport { identical: false, detail: Some(e.to_string()) },
    }
}

pub(crate) fn series(s: TSeries) -> Side {
    Side::Series(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_are_unique() {
        let ids: BTreeSet<_> = registry().iter().map(|d| d.id).collect();
        assert_eq!(ids.len(), registry().len());
        assert_eq!(registry().len(), 23);
    }

    #[test]
    fn check_rejects_bad_bindings() {
        let d = lookup("KMRR").unwrap();
        let b = Bindings(vec![("k".into(), Value::Int(0)), ("m".into(), Value::Int(1))]);
        assert!(matches!(d.check(&b), Err(Error::ConstraintViolation(_))));
        let b = Bindings(vec![("j".into(), Value::Int(1))]);
        assert!(matches!(d.check(&b), Err(Error::UnknownParameter { .. })));
        assert!(matches!(lookup("NOPE"), Err(Error::UnknownIdentity(_))));
        let b = Bindings(vec![("k".into(), Value::Int(1))]);
        assert!(d.check(&b).is_ok());
        assert!(matches!(d.build(&b, 10, &SumOptions::default()), Err(Error::ConstraintViolation(_))));
    }

    #[test]
    fn line_form() {
        let i = IdentityInstance::new("KMRR", &[("k", Value::Int(2)), ("m", Value::Int(3))], 120);
        assert_eq!(i.to_line(), "KMRR k=2 m=3 order=120");
    }
}
