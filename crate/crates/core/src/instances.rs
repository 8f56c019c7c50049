//! Instance files: one identity instance per line, e.g.
//!
//! ```text
//! KMRR k=2 m=3 order=120   # comment
//! T8PSI8 m=1 a=7q^(5/2) alpha=3q^3 rho1=2q rho2=3q mu1=2q^2 mu2=5q
//! ```
//!
//! Values are integers, `inf`, or monomials `[sign][rational][q[^exp]]`
//! where `exp` is an integer or a half-integer written `(n/2)`. The
//! binding `order` sets the truncation order in t-units.

use std::fmt;

use num_bigint::BigInt;

use crate::corpus::{lookup, Bindings, IdentityInstance, Value};
use crate::error::Error;
use crate::monomial::Monomial;
use crate::rational::{rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// The library error behind the message, for unknown identities,
    /// unknown parameters and constraint violations.
    pub cause: Option<Error>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct InstanceFile {
    /// `(line number, instance)` in file order.
    pub entries: Vec<(usize, IdentityInstance)>,
}

impl InstanceFile {
    pub fn instances(&self) -> Vec<IdentityInstance> {
        self.entries.iter().map(|(_, i)| i.clone()).collect()
    }

    pub fn to_text(&self) -> String {
        self.entries.iter().map(|(_, i)| i.to_line() + "\n").collect()
    }
}

/// Parses a whole file; the first bad line rejects it.
pub fn parse_instances(text: &str) -> Result<InstanceFile, ParseError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if let Some(inst) = parse_line(raw, i + 1)? {
            entries.push((i + 1, inst));
        }
    }
    Ok(InstanceFile { entries })
}

/// Parses one line; blank and comment-only lines give `None`.
pub fn parse_line(raw: &str, line: usize) -> Result<Option<IdentityInstance>, ParseError> {
    let body = raw.split('#').next().unwrap_or("");
    let toks = tokens(body);
    let Some(&(id_col, id)) = toks.first() else {
        return Ok(None);
    };
    let err = |column: usize, message: String, cause: Option<Error>| ParseError { line, column, message, cause };
    if !id.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_') {
        return Err(err(id_col, format!("expected an identity id, found `{id}`"), None));
    }
    let def = lookup(id).map_err(|e| err(id_col, e.to_string(), Some(e)))?;
    let mut bindings = Vec::new();
    let mut order = None;
    for &(col, tok) in &toks[1..] {
        let Some(eq) = tok.find('=') else {
            return Err(err(col, format!("expected NAME=VALUE, found `{tok}`"), None));
        };
        let (name, value) = (&tok[..eq], &tok[eq + 1..]);
        let valid = name.starts_with(|c: char| c.is_ascii_lowercase())
            && name.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
        if !valid {
            return Err(err(col, format!("bad parameter name `{name}`"), None));
        }
        let vcol = col + name.chars().count() + 1;
        let v = parse_value(value).map_err(|(off, m)| err(vcol + off, m, None))?;
        if name == "order" {
            match v {
                Value::Int(n) if order.is_none() => order = Some(n),
                Value::Int(_) => return Err(err(col, "order is bound twice".into(), None)),
                _ => return Err(err(vcol, "order must be an integer".into(), None)),
            }
            continue;
        }
        if def.param(name).is_none() {
            let e = Error::UnknownParameter { id: id.to_string(), param: name.to_string() };
            return Err(err(col, e.to_string(), Some(e)));
        }
        bindings.push((name.to_string(), v));
    }
    let bindings = Bindings(bindings);
    def.check(&bindings).map_err(|e| err(id_col, e.to_string(), Some(e)))?;
    Ok(Some(IdentityInstance { id: id.to_string(), bindings, order }))
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, c)) in s.char_indices().enumerate() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, byte)),
            (true, Some((sc, sb))) => {
                out.push((sc, &s[sb..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((sc, sb)) = start {
        out.push((sc, &s[sb..]));
    }
    out
}

type ValueError = (usize, String);

/// Parses a VALUE; errors carry a 0-based character offset into `s`.
pub fn parse_value(s: &str) -> Result<Value, ValueError> {
    if s == "inf" {
        return Ok(Value::Inf);
    }
    if s.is_empty() {
        return Err((0, "missing value".into()));
    }
    let b = s.as_bytes();
    let mut i = 0;
    let neg = match b[0] {
        b'-' => {
            i = 1;
            true
        }
        b'+' => {
            i = 1;
            false
        }
        _ => false,
    };
    let digits = |i: &mut usize| -> Option<BigInt> {
        let st = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        (st < *i).then(|| s[st..*i].parse().unwrap())
    };
    let num = digits(&mut i);
    let mut coeff: Option<Rational> = None;
    let mut is_int = false;
    if let Some(n) = num {
        if i < b.len() && b[i] == b'/' {
            i += 1;
            let at = i;
            match digits(&mut i) {
                Some(d) if d != BigInt::from(0) => coeff = Some(Rational::new(n, d)),
                _ => return Err((at, "expected a positive denominator".into())),
            }
        } else {
            is_int = true;
            coeff = Some(Rational::from_integer(n));
        }
    }
    let mut texp = None;
    if i < b.len() && b[i] == b'q' {
        i += 1;
        is_int = false;
        texp = Some(2);
        if i < b.len() && b[i] == b'^' {
            i += 1;
            texp = Some(exponent(s, &mut i)?);
        }
    }
    if i < b.len() {
        return Err((i, format!("unexpected `{}`", &s[i..])));
    }
    if coeff.is_none() && texp.is_none() {
        return Err((i.min(s.len().saturating_sub(1)), format!("`{s}` is not a value")));
    }
    let mut c = coeff.unwrap_or_else(|| rat(1));
    if neg {
        c = -c;
    }
    if is_int {
        return match i64::try_from(c.to_integer()) {
            Ok(n) => Ok(Value::Int(n)),
            Err(_) => Err((0, "integer out of range".into())),
        };
    }
    Ok(Value::Mono(Monomial::new(c, texp.unwrap_or(0))))
}

/// EXPONENT := INT | "(" INT "/2" ")", returned in t-units.
fn exponent(s: &str, i: &mut usize) -> Result<i64, ValueError> {
    let b = s.as_bytes();
    let int = |i: &mut usize| -> Result<i64, ValueError> {
        let st = *i;
        if *i < b.len() && (b[*i] == b'-' || b[*i] == b'+') {
            *i += 1;
        }
        let ds = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        if ds == *i {
            return Err((st, "expected an integer exponent".into()));
        }
        s[st..*i].parse::<i64>().map_err(|_| (st, "exponent out of range".into()))
    };
    if *i < b.len() && b[*i] == b'(' {
        *i += 1;
        let n = int(i)?;
        if !s[*i..].starts_with("/2)") {
            return Err((*i, "expected `/2)`".into()));
        }
        *i += 3;
        Ok(n)
    } else {
        int(i)?.checked_mul(2).ok_or((*i, "exponent out of range".into()))
    }
}

/// A small run over every row of the corpus, used when no instance file
/// is given.
pub const SAMPLE_SUITE: &str = "\
RR1 order=80
RR2 order=80
QBI n=5 z=3q order=40
QPS n=4 a=2q b=3q^2 c=5/7q order=40
JTP z=-2/3q^3 order=40
KMRR k=2 m=3 order=80
KMGG k=2 m=2 order=60
K1MRR m=7 order=40
K1MGG_EVEN m=6 order=40
K1MGG_ODD m=5 order=40
MRR m=4 order=60
MGG m=3 order=60
GIS m=4 order=60
KMRR_INV k=2 m=3 order=60
K2MRR k=3 m=2 order=60
LHS_FULL_AG k=3 m=1 order=60
KMRR_CHANGE k=2 m=3 order=60
KMGG_INV k=2 m=3 order=60
T8PSI8 m=1 a=7q^(5/2) alpha=3q^3 rho1=2q rho2=3q mu1=2q^2 mu2=5q order=40
R1PSI1 b=2 c=2q^2 z=q order=60
B6PSI6 a=2q^2 b=3q c=5q d=7q e=1/2q order=40
EXT63 m=2 beta=2 gamma=3 rho=5q order=40
QULTRA_CONN n=4 beta=2q c=3q order=40
";

/// [`SAMPLE_SUITE`], parsed.
pub fn sample_suite() -> InstanceFile {
    parse_instances(SAMPLE_SUITE).expect("the sample suite parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mono(c: Rational, t: i64) -> Value {
        Value::Mono(Monomial::new(c, t))
    }

    #[test]
    fn values() {
        use crate::rational::ratio;
        assert_eq!(parse_value("3"), Ok(Value::Int(3)));
        assert_eq!(parse_value("-3"), Ok(Value::Int(-3)));
        assert_eq!(parse_value("0"), Ok(Value::Int(0)));
        assert_eq!(parse_value("inf"), Ok(Value::Inf));
        assert_eq!(parse_value("q"), Ok(mono(rat(1), 2)));
        assert_eq!(parse_value("-q"), Ok(mono(rat(-1), 2)));
        assert_eq!(parse_value("5/2q^3"), Ok(mono(ratio(5, 2), 6)));
        assert_eq!(parse_value("2q^(1/2)"), Ok(mono(rat(2), 1)));
        assert_eq!(parse_value("q^(-3/2)"), Ok(mono(rat(1), -3)));
        assert_eq!(parse_value("3q^-2"), Ok(mono(rat(3), -4)));
        assert_eq!(parse_value("1/3"), Ok(mono(ratio(1, 3), 0)));
        assert_eq!(parse_value("2x").unwrap_err().0, 1);
        assert_eq!(parse_value("2/0q").unwrap_err().0, 2);
        assert_eq!(parse_value("q^(1/3)").unwrap_err().0, 4);
        assert!(parse_value("").is_err());
        assert!(parse_value("-").is_err());
    }

    #[test]
    fn spec_lines() {
        let f = parse_instances("KMRR k=2 m=3 order=120\n").unwrap();
        assert_eq!(f.entries.len(), 1);
        assert_eq!(f.entries[0].1.to_line(), "KMRR k=2 m=3 order=120");

        let line = "T8PSI8 m=1 rho1=2q rho2=3q mu1=2q^2 mu2=5q alpha=3q^3 order=80";
        let inst = parse_line(line, 1).unwrap().unwrap();
        let got: Vec<Value> = ["rho1", "rho2", "mu1", "mu2", "alpha"].iter().map(|p| inst.bindings.get(p).unwrap().clone()).collect();
        assert_eq!(got, vec![mono(rat(2), 2), mono(rat(3), 2), mono(rat(2), 4), mono(rat(5), 2), mono(rat(3), 6)]);

        let e = parse_instances("KMRR k=0 m=1 order=40").unwrap_err();
        assert!(matches!(e.cause, Some(Error::ConstraintViolation(_))));
    }

    #[test]
    fn sample_suite_passes() {
        let f = sample_suite();
        assert_eq!(f.entries.len(), crate::corpus::registry().len());
        for r in crate::corpus::verify_all(&f.instances()) {
            assert_eq!(r.status, crate::corpus::Status::Pass, "{}", r.summary_line());
        }
    }

    #[test]
    fn diagnostics() {
        let text = "# header\n\nRR1 order=40\nKMRR k=2 m=3 junk\n";
        let e = parse_instances(text).unwrap_err();
        assert_eq!((e.line, e.column), (4, 14));

        let e = parse_instances("NOPE k=1").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        assert!(matches!(e.cause, Some(Error::UnknownIdentity(_))));

        let e = parse_instances("RR1  zz=1").unwrap_err();
        assert_eq!(e.column, 6);
        assert!(matches!(e.cause, Some(Error::UnknownParameter { .. })));

        let e = parse_instances("KMRR k=2 m=3q^x").unwrap_err();
        assert_eq!((e.line, e.column), (1, 15));

        let f = parse_instances("  RR2 order=10 # trailing\n   # only a comment\n").unwrap();
        assert_eq!(f.entries[0].0, 1);
        assert_eq!(f.entries.len(), 1);
    }

    fn arb_mono() -> impl Strategy<Value = Value> {
        (-40i64..40, 1i64..12, -9i64..9).prop_map(|(n, d, t)| {
            let c = Rational::new(n.into(), d.into());
            Value::Mono(Monomial::new(c, t))
        })
    }

    fn arb_value() -> impl Strategy<Value = Value> {
        prop_oneof![(-50i64..50).prop_map(Value::Int), arb_mono()]
    }

    fn arb_instance() -> impl Strategy<Value = IdentityInstance> {
        let names = ["a", "alpha", "rho1", "rho2", "mu1", "mu2"];
        (
            0i64..6,
            proptest::collection::vec(arb_value(), 6),
            proptest::option::of(1i64..200),
        )
            .prop_map(move |(m, vals, order)| {
                let mut b = vec![("m".to_string(), Value::Int(m))];
                b.extend(names.iter().map(|s| s.to_string()).zip(vals));
                IdentityInstance { id: "T8PSI8".into(), bindings: Bindings(b), order }
            })
    }

    proptest! {
        #[test]
        fn value_round_trip(v in arb_value()) {
            let again = parse_value(&v.to_string()).unwrap();
            prop_assert_eq!(again.to_string(), v.to_string());
        }

        #[test]
        fn line_round_trip(inst in arb_instance()) {
            let line = inst.to_line();
            let toks = tokens(&line);
            let mut b = Vec::new();
            for (_, t) in &toks[1..] {
                let (n, v) = t.split_once('=').unwrap();
                b.push((n.to_string(), parse_value(v).unwrap()));
            }
            let order = b.iter().position(|(n, _)| n == "order").map(|i| b.remove(i));
            let again = IdentityInstance {
                id: toks[0].1.into(),
                bindings: Bindings(b),
                order: order.map(|(_, v)| match v { Value::Int(n) => n, _ => unreachable!() }),
            };
            prop_assert_eq!(again.to_line(), line);
        }

        #[test]
        fn file_round_trip(ms in proptest::collection::vec((1i64..5, 0i64..9, 10i64..90), 1..6)) {
            let text: String = ms.iter().map(|(k, m, o)| format!("KMRR  k={k} m={m}\torder={o} # x\n")).collect();
            let f = parse_instances(&text).unwrap();
            let g = parse_instances(&f.to_text()).unwrap();
            prop_assert_eq!(f.to_text(), g.to_text());
            prop_assert_eq!(f.instances(), g.instances());
        }
    }
}
