//! The spec mini-language:
//!
//! ```text
//! spec := ident [ '(' arg {',' arg} ')' ]
//! arg  := key '=' (number | string | spec)
//! ```
//!
//! Identifiers and keys are lowercase ASCII (`[a-z][a-z0-9_]*`), numbers are
//! decimal with an optional sign and exponent, strings are double-quoted with
//! `\"` and `\\` escapes.

use std::fmt;
use std::path::PathBuf;

use orlicz_core::YoungFunctionSpec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("at byte {offset}: {message} (expected {})", expected.join(" | "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub message: String,
}

#[derive(Debug, Clone)]
pub enum Value {
    Number(f64),
    Str(String),
    Spec(SpecExpr),
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Number(a), Value::Number(b)) => a.to_bits() == b.to_bits(),
            (Value::Str(a), Value::Str(b)) => a == b,
            (Value::Spec(a), Value::Spec(b)) => a == b,
            _ => false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Arg {
    pub key: String,
    pub value: Value,
    /// Byte offsets of the key and the value in the source.
    pub key_at: usize,
    pub value_at: usize,
}

impl PartialEq for Arg {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.value == other.value
    }
}

/// Parsed spec. Equality ignores source offsets.
#[derive(Debug, Clone)]
pub struct SpecExpr {
    pub ident: String,
    pub args: Vec<Arg>,
    pub at: usize,
}

impl PartialEq for SpecExpr {
    fn eq(&self, other: &Self) -> bool {
        self.ident == other.ident && self.args == other.args
    }
}

impl fmt::Display for SpecExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.ident)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}=", a.key)?;
            match &a.value {
                Value::Number(x) => write!(f, "{x:?}")?,
                Value::Str(s) => {
                    f.write_str("\"")?;
                    for c in s.chars() {
                        if c == '"' || c == '\\' {
                            f.write_str("\\")?;
                        }
                        write!(f, "{c}")?;
                    }
                    f.write_str("\"")?;
                }
                Value::Spec(e) => write!(f, "{e}")?,
            }
        }
        f.write_str(")")
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn err(offset: usize, expected: &[&'static str], message: impl Into<String>) -> ParseError {
    ParseError { offset, expected: expected.to_vec(), message: message.into() }
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn found(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(_) => {
                let rest = std::str::from_utf8(&self.src[self.pos..]).unwrap_or("?");
                format!("found `{}`", rest.chars().next().unwrap_or('?'))
            }
        }
    }

    fn ident(&mut self, what: &'static str) -> Result<(String, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_lowercase() => {}
            _ => return Err(err(start, &[what], self.found())),
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_lowercase() || c.is_ascii_digit() || c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((String::from_utf8(self.src[start..self.pos].to_vec()).unwrap(), start))
    }

    fn expect(&mut self, c: u8, what: &'static str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(err(self.pos, &[what], self.found()))
        }
    }

    fn spec(&mut self) -> Result<SpecExpr, ParseError> {
        let (ident, at) = self.ident("identifier")?;
        let mut args = Vec::new();
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            self.skip_ws();
            if self.peek() == Some(b')') {
                self.pos += 1;
            } else {
                loop {
                    args.push(self.arg()?);
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(err(self.pos, &["`,`", "`)`"], self.found())),
                    }
                }
            }
        }
        Ok(SpecExpr { ident, args, at })
    }

    fn arg(&mut self) -> Result<Arg, ParseError> {
        let (key, key_at) = self.ident("key")?;
        self.expect(b'=', "`=`")?;
        self.skip_ws();
        let value_at = self.pos;
        let value = match self.peek() {
            Some(b'"') => Value::Str(self.string()?),
            Some(c) if c.is_ascii_digit() || c == b'-' || c == b'+' || c == b'.' => Value::Number(self.number()?),
            Some(c) if c.is_ascii_lowercase() => Value::Spec(self.spec()?),
            _ => return Err(err(value_at, &["number", "string", "spec"], self.found())),
        };
        Ok(Arg { key, value, key_at, value_at })
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.peek().is_some_and(|c| c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.pos - s
        };
        if matches!(self.peek(), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        let mut n = digits(self);
        if self.peek() == Some(b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return Err(err(start, &["number"], "malformed number"));
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some(b'-' | b'+')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                return Err(err(self.pos, &["exponent digits"], self.found()));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: f64 = text.parse().map_err(|_| err(start, &["number"], format!("malformed number `{text}`")))?;
        if !v.is_finite() {
            return Err(err(start, &["finite number"], format!("`{text}` overflows")));
        }
        Ok(v)
    }

    fn string(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        self.pos += 1;
        let mut out = Vec::new();
        loop {
            match self.peek() {
                None => return Err(err(self.pos, &["`\"`"], format!("unterminated string starting at {start}"))),
                Some(b'"') => {
                    self.pos += 1;
                    break;
                }
                Some(b'\\') => {
                    self.pos += 1;
                    match self.peek() {
                        Some(c @ (b'"' | b'\\')) => {
                            out.push(c);
                            self.pos += 1;
                        }
                        _ => return Err(err(self.pos, &["`\"`", "`\\`"], "bad escape")),
                    }
                }
                Some(c) => {
                    out.push(c);
                    self.pos += 1;
                }
            }
        }
        String::from_utf8(out).map_err(|_| err(start, &["UTF-8 string"], "invalid UTF-8"))
    }
}

pub fn parse_spec(text: &str) -> Result<SpecExpr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.spec()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(err(p.pos, &["end of input"], p.found()));
    }
    Ok(e)
}

pub const FAMILIES: [&str; 7] = ["power", "zygmund", "exp_power", "exp_sqrt_log", "linf", "table", "glue"];

struct Args<'a> {
    e: &'a SpecExpr,
    used: Vec<bool>,
}

impl<'a> Args<'a> {
    fn new(e: &'a SpecExpr) -> Result<Self, ParseError> {
        for (i, a) in e.args.iter().enumerate() {
            if e.args[..i].iter().any(|b| b.key == a.key) {
                return Err(err(a.key_at, &["distinct keys"], format!("duplicate parameter `{}`", a.key)));
            }
        }
        Ok(Args { e, used: vec![false; e.args.len()] })
    }

    fn get(&mut self, key: &str) -> Option<&'a Arg> {
        let i = self.e.args.iter().position(|a| a.key == key)?;
        self.used[i] = true;
        Some(&self.e.args[i])
    }

    fn number(&mut self, key: &'static str, default: Option<f64>) -> Result<f64, ParseError> {
        match self.get(key) {
            Some(Arg { value: Value::Number(x), .. }) => Ok(*x),
            Some(a) => Err(err(a.value_at, &["number"], format!("`{key}` must be a number"))),
            None => default.ok_or_else(|| err(self.e.at, &[key], format!("{} needs `{key}`", self.e.ident))),
        }
    }

    fn string(&mut self, key: &'static str) -> Result<String, ParseError> {
        match self.get(key) {
            Some(Arg { value: Value::Str(s), .. }) => Ok(s.clone()),
            Some(a) => Err(err(a.value_at, &["string"], format!("`{key}` must be a string"))),
            None => Err(err(self.e.at, &[key], format!("{} needs `{key}`", self.e.ident))),
        }
    }

    fn spec(&mut self, key: &'static str) -> Result<YoungFunctionSpec, ParseError> {
        match self.get(key) {
            Some(Arg { value: Value::Spec(s), .. }) => to_young_spec(s),
            Some(a) => Err(err(a.value_at, &["spec"], format!("`{key}` must be a spec"))),
            None => Err(err(self.e.at, &[key], format!("{} needs `{key}`", self.e.ident))),
        }
    }

    fn finish(self) -> Result<(), ParseError> {
        match self.used.iter().position(|u| !u) {
            Some(i) => {
                let a = &self.e.args[i];
                Err(err(a.key_at, &["known parameter"], format!("unknown parameter `{}` for {}", a.key, self.e.ident)))
            }
            None => Ok(()),
        }
    }
}

/// Map a parsed tree onto a catalog spec. Range checks on the parameters are
/// left to `make_young`.
pub fn to_young_spec(e: &SpecExpr) -> Result<YoungFunctionSpec, ParseError> {
    let mut a = Args::new(e)?;
    let spec = match e.ident.as_str() {
        "power" => YoungFunctionSpec::Power { p: a.number("p", None)? },
        "zygmund" => YoungFunctionSpec::Zygmund { q: a.number("q", None)?, a: a.number("a", Some(0.0))? },
        "exp_power" => {
            let beta = a.number("beta", None)?;
            let d = a.number("depth", Some(1.0))?;
            if d.fract() != 0.0 || !(1.0..=4.0).contains(&d) {
                let at = e.args.iter().find(|x| x.key == "depth").map_or(e.at, |x| x.value_at);
                return Err(err(at, &["integer in 1..=4"], format!("bad depth {d}")));
            }
            YoungFunctionSpec::ExpPower { beta, depth: d as u32 }
        }
        "exp_sqrt_log" => YoungFunctionSpec::ExpSqrtLog { q: a.number("q", None)? },
        "linf" => YoungFunctionSpec::Linf,
        "table" => YoungFunctionSpec::Table { path: PathBuf::from(a.string("path")?) },
        "glue" => YoungFunctionSpec::Glue {
            zero: Box::new(a.spec("zero")?),
            inf: Box::new(a.spec("inf")?),
            t_s: a.number("t_s", Some(1.0))?,
        },
        other => {
            return Err(err(e.at, &FAMILIES, format!("unknown family `{other}`")));
        }
    };
    a.finish()?;
    Ok(spec)
}

pub fn parse_young_spec(text: &str) -> Result<YoungFunctionSpec, ParseError> {
    to_young_spec(&parse_spec(text)?)
}
