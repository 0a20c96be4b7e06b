//! The HMF1 text format for eigenform data.
//!
//! ```text
//! HMF1
//! FIELD
//! poly -1 -1 1
//! CHAR
//! modulus 1,0|0,1
//! extension 1
//! FORM
//! weights 2 2
//! level 1,0|0,1
//! coefficient-poly 0 1
//! embedding 0
//! bound 1
//! COEFFS
//! norm 1 ideal 1,0|0,1 value 1
//! ```
//!
//! Ideals are HNF columns in integral-basis coordinates, columns split by `|` and
//! entries by `,`. Polynomials list coefficients from the constant term up.

use hmf_core::arith::poly::QPoly;
use hmf_core::arith::{Unity, Q};
use hmf_core::dictionary::{CoefficientField, HilbertNewformData};
use hmf_core::field::{FieldElement, Ideal, TotallyRealField};
use hmf_core::hecke::{HeckeCharacter, ResidueCharacter};
use hmf_core::numfield::{NfElem, NumberField};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Failure to turn text into validated data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DocumentError {
    Parse(ParseError),
    /// The text is well formed but the data break an invariant; the string names the check.
    Invariant(String),
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocumentError::Parse(e) => write!(f, "parse error at {e}"),
            DocumentError::Invariant(s) => write!(f, "invariant violated: {s}"),
        }
    }
}

impl std::error::Error for DocumentError {}

impl From<ParseError> for DocumentError {
    fn from(e: ParseError) -> Self {
        DocumentError::Parse(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldBlock {
    pub poly: Vec<BigInt>,
    /// Integral basis in power-basis coordinates (degree three and up).
    pub basis: Option<Vec<Vec<Q>>>,
    /// `(h, h+)`.
    pub class: Option<(u64, u64)>,
    pub unit_norm_minus_one: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharBlock {
    pub modulus: Vec<Vec<BigInt>>,
    /// Residue generators in integral-basis coordinates with values `e(r)`.
    pub generators: Vec<(Vec<Q>, Q)>,
    pub extension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormBlock {
    pub weights: Vec<i64>,
    pub level: Vec<Vec<BigInt>>,
    pub coefficient_poly: Vec<Q>,
    pub embedding: usize,
    pub unity: Option<(i64, Vec<Q>)>,
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffLine {
    pub norm: u64,
    pub ideal: Vec<Vec<BigInt>>,
    pub value: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub field: FieldBlock,
    pub character: CharBlock,
    pub form: FormBlock,
    pub coeffs: Vec<CoeffLine>,
}

/// Library objects built from a document.
#[derive(Clone, Debug)]
pub struct Ingested {
    pub field: TotallyRealField,
    pub character: HeckeCharacter,
    pub form: HilbertNewformData,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Block {
    Field,
    Char,
    Form,
    Coeffs,
}

impl Block {
    fn from_header(s: &str) -> Option<Block> {
        match s {
            "FIELD" => Some(Block::Field),
            "CHAR" => Some(Block::Char),
            "FORM" => Some(Block::Form),
            "COEFFS" => Some(Block::Coeffs),
            _ => None,
        }
    }
}

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column, message: message.into() }
    }

    fn int<T: std::str::FromStr>(&self, what: &str) -> Result<T, ParseError> {
        self.text.parse().map_err(|_| self.err(format!("expected {what}, found `{}`", self.text)))
    }

    fn rational(&self) -> Result<Q, ParseError> {
        if self.text.matches('/').count() > 1 {
            return Err(self.err(format!("expected a rational number, found `{}`", self.text)));
        }
        let (n, d) = self.text.split_once('/').unwrap_or((self.text, "1"));
        let n: BigInt = n.parse().map_err(|_| self.err(format!("expected a rational number, found `{}`", self.text)))?;
        let d: BigInt = d.parse().map_err(|_| self.err(format!("expected a rational number, found `{}`", self.text)))?;
        if d.is_zero() {
            return Err(self.err("zero denominator"));
        }
        Ok(Q::new(n, d))
    }

    fn ideal(&self, n: usize) -> Result<Vec<Vec<BigInt>>, ParseError> {
        let cols: Vec<&str> = self.text.split('|').collect();
        if cols.len() != n {
            return Err(self.err(format!("ideal needs {n} columns, found {}", cols.len())));
        }
        let mut out = Vec::with_capacity(n);
        for c in cols {
            let entries: Vec<&str> = c.split(',').collect();
            if entries.len() != n {
                return Err(self.err(format!("ideal column needs {n} entries, found {}", entries.len())));
            }
            let mut col = Vec::with_capacity(n);
            for e in entries {
                col.push(e.parse::<BigInt>().map_err(|_| self.err(format!("bad ideal entry `{e}`")))?);
            }
            out.push(col);
        }
        Ok(out)
    }
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn keyword(&self) -> Token<'a> {
        self.tokens[0]
    }

    fn end(&self) -> ParseError {
        let last = self.tokens.last().unwrap();
        ParseError { line: self.number, column: last.column + last.text.chars().count(), message: "unexpected end of line".into() }
    }

    fn arg(&self, i: usize) -> Result<Token<'a>, ParseError> {
        self.tokens.get(i).copied().ok_or_else(|| self.end())
    }

    fn exact(&self, count: usize) -> Result<(), ParseError> {
        if self.tokens.len() > count + 1 {
            return Err(self.tokens[count + 1].err("trailing input"));
        }
        if self.tokens.len() < count + 1 {
            return Err(self.end());
        }
        Ok(())
    }

    fn rationals(&self, from: usize, count: usize) -> Result<Vec<Q>, ParseError> {
        (from..from + count).map(|i| self.arg(i)?.rational()).collect()
    }
}

fn lex(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.split('\n').enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (col, (byte, ch)) in body.char_indices().enumerate() {
            if ch.is_whitespace() {
                if let Some((b0, c0)) = start.take() {
                    tokens.push(Token { text: &body[b0..byte], line: i + 1, column: c0 + 1 });
                }
            } else if start.is_none() {
                start = Some((byte, col));
            }
        }
        if let Some((b0, c0)) = start {
            tokens.push(Token { text: &body[b0..], line: i + 1, column: c0 + 1 });
        }
        if !tokens.is_empty() {
            out.push(Line { number: i + 1, tokens });
        }
    }
    out
}

fn duplicate(seen: &mut BTreeSet<&'static str>, key: &'static str, t: Token) -> Result<(), ParseError> {
    if !seen.insert(key) {
        return Err(t.err(format!("duplicate `{key}`")));
    }
    Ok(())
}

fn missing(header: usize, block: &str, key: &str) -> ParseError {
    ParseError { line: header, column: 1, message: format!("{block} block lacks `{key}`") }
}

impl Document {
    /// Reads the text; checks syntax and shapes but builds no library objects.
    pub fn parse(text: &str) -> Result<Document, ParseError> {
        let lines = lex(text);
        let mut it = lines.iter();
        match it.next() {
            Some(l) if l.keyword().text == "HMF1" => l.exact(0)?,
            Some(l) => return Err(l.keyword().err("expected the `HMF1` header")),
            None => return Err(ParseError { line: 1, column: 1, message: "empty document".into() }),
        }
        let mut groups: Vec<(Block, usize, Vec<&Line>)> = Vec::new();
        for l in it {
            if let Some(b) = Block::from_header(l.keyword().text) {
                l.exact(0)?;
                let expected = groups.last().map(|g| g.0);
                let ok = match expected {
                    None => b == Block::Field,
                    Some(prev) => b as usize == prev as usize + 1,
                };
                if !ok {
                    return Err(l.keyword().err("blocks must appear once each, in the order FIELD, CHAR, FORM, COEFFS"));
                }
                groups.push((b, l.number, Vec::new()));
            } else if let Some(g) = groups.last_mut() {
                g.2.push(l);
            } else {
                return Err(l.keyword().err("expected the FIELD block"));
            }
        }
        if groups.len() != 4 {
            let line = lines.last().map(|l| l.number).unwrap_or(1);
            let names = ["FIELD", "CHAR", "FORM", "COEFFS"];
            return Err(ParseError { line, column: 1, message: format!("missing {} block", names[groups.len()]) });
        }
        let field = parse_field(groups[0].1, &groups[0].2)?;
        let n = field.poly.len() - 1;
        let character = parse_char(groups[1].1, &groups[1].2, n)?;
        let form = parse_form(groups[2].1, &groups[2].2, n)?;
        let d = form.coefficient_poly.len() - 1;
        let coeffs = groups[3].2.iter().map(|l| parse_coeff(l, n, d)).collect::<Result<_, _>>()?;
        Ok(Document { field, character, form, coeffs })
    }

    /// Canonical text: keys in a fixed order, blocks without blank lines, LF line endings.
    pub fn to_text(&self) -> String {
        let mut s = String::from("HMF1\nFIELD\n");
        let _ = writeln!(s, "poly {}", join(&self.field.poly));
        for b in self.field.basis.iter().flatten() {
            let _ = writeln!(s, "basis {}", join(b));
        }
        if let Some((h, hp)) = self.field.class {
            let _ = writeln!(s, "class {h} {hp}");
        }
        if let Some(v) = self.field.unit_norm_minus_one {
            let _ = writeln!(s, "unit-norm-minus-one {}", if v { "yes" } else { "no" });
        }
        s.push_str("CHAR\n");
        let _ = writeln!(s, "modulus {}", ideal_text(&self.character.modulus));
        for (g, v) in &self.character.generators {
            let _ = writeln!(s, "gen {} value {v}", join(g));
        }
        let _ = writeln!(s, "extension {}", self.character.extension);
        s.push_str("FORM\n");
        let f = &self.form;
        let _ = writeln!(s, "weights {}", join(&f.weights));
        let _ = writeln!(s, "level {}", ideal_text(&f.level));
        let _ = writeln!(s, "coefficient-poly {}", join(&f.coefficient_poly));
        let _ = writeln!(s, "embedding {}", f.embedding);
        if let Some((m, z)) = &f.unity {
            let _ = writeln!(s, "unity {m} {}", join(z));
        }
        let _ = writeln!(s, "bound {}", f.bound);
        s.push_str("COEFFS\n");
        for c in &self.coeffs {
            let _ = writeln!(s, "norm {} ideal {} value {}", c.norm, ideal_text(&c.ideal), join(&c.value));
        }
        s
    }

    /// Builds and validates the field, character and eigendata.
    pub fn ingest(&self) -> Result<Ingested, DocumentError> {
        let inv = |e: hmf_core::Error| DocumentError::Invariant(e.to_string());
        let mut field = TotallyRealField::build(&self.field.poly, self.field.basis.clone()).map_err(inv)?;
        if let Some((h, hp)) = self.field.class {
            field = field.with_class_data(h, hp);
        }
        if let Some(v) = self.field.unit_norm_minus_one {
            field = field.with_unit_norm_minus_one(v);
        }
        let k = &field;
        let modulus = k.ideal_from_hnf(self.character.modulus.clone(), BigInt::one()).map_err(inv)?;
        let mut gens = Vec::with_capacity(self.character.generators.len());
        for (g, v) in &self.character.generators {
            let num = v.numer().to_i64();
            let den = v.denom().to_i64();
            let (Some(num), Some(den)) = (num, den) else {
                return Err(DocumentError::Invariant(format!("root of unity e({v}) out of range")));
            };
            gens.push((FieldElement::new(g.clone()), Unity::new(num, den)));
        }
        let omega = ResidueCharacter::new(k, &modulus, gens).map_err(inv)?;
        let character = HeckeCharacter::adelize(k, &omega, self.character.extension).map_err(inv)?;
        let level = k.ideal_from_hnf(self.form.level.clone(), BigInt::one()).map_err(inv)?;
        if level != modulus {
            return Err(DocumentError::Invariant("level differs from the character modulus".into()));
        }
        let cf_field = NumberField::new(QPoly::new(self.form.coefficient_poly.clone())).map_err(inv)?;
        let unity = match &self.form.unity {
            None => None,
            Some((m, z)) => Some((*m, NfElem::from_coords(&cf_field, z.clone()).map_err(inv)?)),
        };
        let cf = CoefficientField::new(cf_field.clone(), self.form.embedding, unity).map_err(inv)?;
        let mut table = BTreeMap::new();
        for c in &self.coeffs {
            let m = k.ideal_from_hnf(c.ideal.clone(), BigInt::one()).map_err(inv)?;
            let nm = k.ideal_norm(&m).map_err(inv)?;
            if nm != Q::from_integer(BigInt::from(c.norm)) {
                return Err(DocumentError::Invariant(format!("ideal {m} has norm {nm}, not {}", c.norm)));
            }
            let v = NfElem::from_coords(&cf_field, c.value.clone()).map_err(inv)?;
            if table.insert(m.clone(), v).is_some() {
                return Err(DocumentError::Invariant(format!("ideal {m} listed twice")));
            }
        }
        let form = HilbertNewformData::new(k, self.form.weights.clone(), character.clone(), cf, table, self.form.bound)
            .map_err(inv)?;
        let report = form.validate(k).map_err(inv)?;
        if let Some(first) = report.failures.first() {
            return Err(DocumentError::Invariant(format!(
                "eigendata: {first} ({} of {} checks failed)",
                report.failures.len(),
                report.checked
            )));
        }
        Ok(Ingested { field, character, form })
    }

    /// The canonical document describing library objects.
    pub fn from_parts(k: &TotallyRealField, f: &HilbertNewformData) -> Document {
        let n = k.degree();
        let poly = k.poly().coeffs().iter().map(|c| c.to_integer()).collect();
        let basis = k.integral_basis();
        let standard = basis.iter().enumerate().all(|(i, b)| b.iter().enumerate().all(|(j, x)| *x == Q::from_integer(BigInt::from((i == j) as i64))));
        let field = FieldBlock {
            poly,
            basis: (n >= 3 && !standard).then(|| basis.to_vec()),
            class: k.user_class(),
            unit_norm_minus_one: k.user_unit_norm_minus_one(),
        };
        let chi = &f.nebentypus;
        let character = CharBlock {
            modulus: chi.modulus().hnf().to_vec(),
            generators: chi.residue().generators().iter().map(|(g, v)| (g.coords().to_vec(), v.as_fraction())).collect(),
            extension: chi.extension_index(),
        };
        let cf = &f.coefficients;
        let form = FormBlock {
            weights: f.weights.clone(),
            level: f.level.hnf().to_vec(),
            coefficient_poly: cf.field.poly().coeffs().to_vec(),
            embedding: cf.embedding,
            unity: cf.unity.as_ref().map(|(m, z)| (*m, z.coords().to_vec())),
            bound: f.bound,
        };
        let d = cf.field.degree();
        let mut coeffs: Vec<CoeffLine> = f
            .eigenvalues
            .iter()
            .map(|(m, v)| {
                let mut value = v.coords().to_vec();
                value.resize(d, Q::zero());
                CoeffLine { norm: norm_u64(k, m), ideal: m.hnf().to_vec(), value }
            })
            .collect();
        coeffs.sort_by(|a, b| (a.norm, &a.ideal).cmp(&(b.norm, &b.ideal)));
        Document { field, character, form, coeffs }
    }
}

fn norm_u64(k: &TotallyRealField, m: &Ideal) -> u64 {
    k.ideal_norm(m).ok().and_then(|q| q.to_integer().to_u64()).unwrap_or(0)
}

/// Parses and ingests a document.
pub fn parse_hmf1(text: &str) -> Result<Ingested, DocumentError> {
    Document::parse(text)?.ingest()
}

/// Canonical text for library objects.
pub fn serialize_hmf1(k: &TotallyRealField, f: &HilbertNewformData) -> String {
    Document::from_parts(k, f).to_text()
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn ideal_text(cols: &[Vec<BigInt>]) -> String {
    cols.iter().map(|c| join(c).replace(' ', ",")).collect::<Vec<_>>().join("|")
}

fn parse_field(header: usize, lines: &[&Line]) -> Result<FieldBlock, ParseError> {
    let mut seen = BTreeSet::new();
    let mut poly = None;
    let mut basis: Vec<Vec<Q>> = Vec::new();
    let mut class = None;
    let mut unit = None;
    for l in lines {
        let kw = l.keyword();
        match kw.text {
            "poly" => {
                duplicate(&mut seen, "poly", kw)?;
                if l.tokens.len() < 3 {
                    return Err(l.end());
                }
                let c: Vec<BigInt> = l.tokens[1..].iter().map(|t| t.int("an integer")).collect::<Result<_, _>>()?;
                if !c.last().unwrap().is_one() {
                    return Err(l.tokens.last().unwrap().err("polynomial must be monic"));
                }
                poly = Some(c);
            }
            "basis" => {
                let n = poly.as_ref().map(|p: &Vec<BigInt>| p.len() - 1).ok_or_else(|| kw.err("`basis` before `poly`"))?;
                l.exact(n)?;
                basis.push(l.rationals(1, n)?);
            }
            "class" => {
                duplicate(&mut seen, "class", kw)?;
                l.exact(2)?;
                class = Some((l.arg(1)?.int("a class number")?, l.arg(2)?.int("a class number")?));
            }
            "unit-norm-minus-one" => {
                duplicate(&mut seen, "unit-norm-minus-one", kw)?;
                l.exact(1)?;
                let t = l.arg(1)?;
                unit = Some(match t.text {
                    "yes" => true,
                    "no" => false,
                    _ => return Err(t.err("expected `yes` or `no`")),
                });
            }
            other => return Err(kw.err(format!("unknown FIELD key `{other}`"))),
        }
    }
    let poly = poly.ok_or_else(|| missing(header, "FIELD", "poly"))?;
    let n = poly.len() - 1;
    if !basis.is_empty() && basis.len() != n {
        let l = lines.iter().rev().find(|l| l.keyword().text == "basis").unwrap();
        return Err(l.keyword().err(format!("integral basis needs {n} elements, found {}", basis.len())));
    }
    Ok(FieldBlock { poly, basis: (!basis.is_empty()).then_some(basis), class, unit_norm_minus_one: unit })
}

fn parse_char(header: usize, lines: &[&Line], n: usize) -> Result<CharBlock, ParseError> {
    let mut seen = BTreeSet::new();
    let mut modulus = None;
    let mut generators = Vec::new();
    let mut extension = None;
    for l in lines {
        let kw = l.keyword();
        match kw.text {
            "modulus" => {
                duplicate(&mut seen, "modulus", kw)?;
                l.exact(1)?;
                modulus = Some(l.arg(1)?.ideal(n)?);
            }
            "gen" => {
                l.exact(n + 2)?;
                let g = l.rationals(1, n)?;
                let kv = l.arg(n + 1)?;
                if kv.text != "value" {
                    return Err(kv.err("expected `value`"));
                }
                generators.push((g, l.arg(n + 2)?.rational()?));
            }
            "extension" => {
                duplicate(&mut seen, "extension", kw)?;
                l.exact(1)?;
                extension = Some(l.arg(1)?.int("an extension index")?);
            }
            other => return Err(kw.err(format!("unknown CHAR key `{other}`"))),
        }
    }
    Ok(CharBlock {
        modulus: modulus.ok_or_else(|| missing(header, "CHAR", "modulus"))?,
        generators,
        extension: extension.unwrap_or(1),
    })
}

fn parse_form(header: usize, lines: &[&Line], n: usize) -> Result<FormBlock, ParseError> {
    let mut seen = BTreeSet::new();
    let (mut weights, mut level, mut cpoly, mut embedding, mut unity, mut bound) = (None, None, None, None, None, None);
    for l in lines {
        let kw = l.keyword();
        match kw.text {
            "weights" => {
                duplicate(&mut seen, "weights", kw)?;
                l.exact(n)?;
                weights = Some((1..=n).map(|i| l.arg(i)?.int("a weight")).collect::<Result<Vec<i64>, _>>()?);
            }
            "level" => {
                duplicate(&mut seen, "level", kw)?;
                l.exact(1)?;
                level = Some(l.arg(1)?.ideal(n)?);
            }
            "coefficient-poly" => {
                duplicate(&mut seen, "coefficient-poly", kw)?;
                if l.tokens.len() < 3 {
                    return Err(l.end());
                }
                let c = l.rationals(1, l.tokens.len() - 1)?;
                if !c.last().unwrap().is_one() {
                    return Err(l.tokens.last().unwrap().err("polynomial must be monic"));
                }
                cpoly = Some(c);
            }
            "embedding" => {
                duplicate(&mut seen, "embedding", kw)?;
                l.exact(1)?;
                embedding = Some(l.arg(1)?.int("an embedding index")?);
            }
            "unity" => {
                duplicate(&mut seen, "unity", kw)?;
                let d: usize = cpoly.as_ref().map(|c: &Vec<Q>| c.len() - 1).ok_or_else(|| kw.err("`unity` before `coefficient-poly`"))?;
                l.exact(d + 1)?;
                unity = Some((l.arg(1)?.int("an order")?, l.rationals(2, d)?));
            }
            "bound" => {
                duplicate(&mut seen, "bound", kw)?;
                l.exact(1)?;
                bound = Some(l.arg(1)?.int("a norm bound")?);
            }
            other => return Err(kw.err(format!("unknown FORM key `{other}`"))),
        }
    }
    Ok(FormBlock {
        weights: weights.ok_or_else(|| missing(header, "FORM", "weights"))?,
        level: level.ok_or_else(|| missing(header, "FORM", "level"))?,
        coefficient_poly: cpoly.unwrap_or_else(|| vec![Q::zero(), Q::one()]),
        embedding: embedding.unwrap_or(0),
        unity,
        bound: bound.ok_or_else(|| missing(header, "FORM", "bound"))?,
    })
}

fn parse_coeff(l: &Line, n: usize, d: usize) -> Result<CoeffLine, ParseError> {
    let expect = |i: usize, word: &str| -> Result<(), ParseError> {
        let t = l.arg(i)?;
        if t.text != word {
            return Err(t.err(format!("expected `{word}`")));
        }
        Ok(())
    };
    expect(0, "norm")?;
    let norm = l.arg(1)?.int("a norm")?;
    expect(2, "ideal")?;
    let ideal = l.arg(3)?.ideal(n)?;
    expect(4, "value")?;
    let found = l.tokens.len().saturating_sub(5);
    if found != d {
        let at = if found > d { l.tokens[5 + d] } else { l.arg(4)? };
        return Err(at.err(format!("value needs {d} coordinates, found {found}")));
    }
    Ok(CoeffLine { norm, ideal, value: l.rationals(5, d)? })
}
