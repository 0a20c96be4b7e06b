//! Run reports and their two output formats.

use hmf_core::arith::ball::{upper_sci, Complex, Real};
use hmf_core::arith::Q;
use num_bigint::{BigInt, Sign};
use num_traits::Signed;
use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Text(String),
    Int(BigInt),
    Bool(bool),
    /// Decimal midpoint with an upper bound on the error.
    Ball { mid: String, radius: String },
    Complex { re: String, im: String, radius: String },
    List(Vec<Item>),
    Record(Vec<(String, Item)>),
}

impl Item {
    pub fn text(s: impl Into<String>) -> Item {
        Item::Text(s.into())
    }

    pub fn int(n: impl Into<BigInt>) -> Item {
        Item::Int(n.into())
    }

    pub fn real(x: &Real, digits: usize) -> Item {
        Item::Ball { mid: x.to_decimal(digits), radius: x.rad_string() }
    }

    pub fn complex(z: &Complex, digits: usize) -> Item {
        Item::Complex { re: z.re.to_decimal(digits), im: z.im.to_decimal(digits), radius: q_upper_sci(&z.rad_q()) }
    }

    pub fn rational_bound(q: &Q) -> Item {
        Item::Text(q_upper_sci(q))
    }

    pub fn list<T>(xs: impl IntoIterator<Item = T>, f: impl Fn(T) -> Item) -> Item {
        Item::List(xs.into_iter().map(f).collect())
    }

    fn to_json(&self) -> Value {
        match self {
            Item::Text(s) => Value::String(s.clone()),
            Item::Int(n) => match i64::try_from(n) {
                Ok(v) => Value::from(v),
                Err(_) => Value::String(n.to_string()),
            },
            Item::Bool(b) => Value::Bool(*b),
            Item::Ball { mid, radius } => {
                let mut m = Map::new();
                m.insert("mid".into(), Value::String(mid.clone()));
                m.insert("radius".into(), Value::String(radius.clone()));
                Value::Object(m)
            }
            Item::Complex { re, im, radius } => {
                let mut m = Map::new();
                m.insert("re".into(), Value::String(re.clone()));
                m.insert("im".into(), Value::String(im.clone()));
                m.insert("radius".into(), Value::String(radius.clone()));
                Value::Object(m)
            }
            Item::List(xs) => Value::Array(xs.iter().map(Item::to_json).collect()),
            Item::Record(kv) => Value::Object(kv.iter().map(|(k, v)| (k.clone(), v.to_json())).collect()),
        }
    }

    fn to_text(&self) -> String {
        match self {
            Item::Text(s) => s.clone(),
            Item::Int(n) => n.to_string(),
            Item::Bool(b) => b.to_string(),
            Item::Ball { mid, radius } => format!("{mid} +/- {radius}"),
            Item::Complex { re, im, radius } => format!("{re} + {im}*i +/- {radius}"),
            Item::List(xs) => format!("[{}]", xs.iter().map(Item::to_text).collect::<Vec<_>>().join(", ")),
            Item::Record(kv) => {
                format!("{{{}}}", kv.iter().map(|(k, v)| format!("{k}: {}", v.to_text())).collect::<Vec<_>>().join(", "))
            }
        }
    }
}

/// `q` rounded up to two significant digits.
pub fn q_upper_sci(q: &Q) -> String {
    let q = q.abs();
    if q.numer().sign() == Sign::NoSign {
        return "0".into();
    }
    // 2^-p resolution well below the value itself
    let lead = q.numer().bits() as i64 - q.denom().bits() as i64;
    let p = (64 - lead).max(64) as u32;
    let scaled = (q * Q::from_integer(BigInt::from(1) << p)).ceil().to_integer();
    upper_sci(scaled.magnitude(), p)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub command: String,
    pub results: Vec<(String, Item)>,
    pub warnings: Vec<String>,
    pub error: Option<String>,
    pub status: i32,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report { command: command.into(), ..Default::default() }
    }

    pub fn push(&mut self, key: &str, item: Item) {
        self.results.push((key.to_string(), item));
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        self.warnings.push(w.into());
    }

    /// One JSON object on one line.
    pub fn structured(&self) -> String {
        let mut m = Map::new();
        m.insert("command".into(), Value::String(self.command.clone()));
        m.insert("status".into(), Value::from(self.status));
        let results: Map<String, Value> = self.results.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
        m.insert("results".into(), Value::Object(results));
        m.insert("warnings".into(), Value::Array(self.warnings.iter().cloned().map(Value::String).collect()));
        if let Some(e) = &self.error {
            m.insert("error".into(), Value::String(e.clone()));
        }
        let mut s = Value::Object(m).to_string();
        s.push('\n');
        s
    }

    pub fn text(&self) -> String {
        let mut s = format!("{}\n", self.command);
        for (k, v) in &self.results {
            s.push_str(&format!("  {k}: {}\n", v.to_text()));
        }
        for w in &self.warnings {
            s.push_str(&format!("warning: {w}\n"));
        }
        s
    }
}
