//! Declared parameters, shared by the command-line parser and the tuner export.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum ParamKind {
    Integer,
    Real,
    Categorical(Vec<String>),
    Boolean,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Integer(i64),
    Real(f64),
    Categorical(String),
    Boolean(bool),
    Text(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Integer(v) => write!(f, "{v}"),
            ParamValue::Real(v) => write!(f, "{v}"),
            ParamValue::Categorical(v) => f.write_str(v),
            ParamValue::Boolean(v) => write!(f, "{v}"),
            ParamValue::Text(v) => f.write_str(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parameter {
    pub name: String,
    pub flag: Option<char>,
    pub kind: ParamKind,
    pub default: ParamValue,
    pub help: String,
    pub section: String,
    pub required: bool,
}

impl Parameter {
    pub fn new(name: impl Into<String>, kind: ParamKind, default: ParamValue) -> Self {
        Self {
            name: name.into(),
            flag: None,
            kind,
            default,
            help: String::new(),
            section: "General".to_string(),
            required: false,
        }
    }

    pub fn integer(name: impl Into<String>, default: i64) -> Self {
        Self::new(name, ParamKind::Integer, ParamValue::Integer(default))
    }

    pub fn real(name: impl Into<String>, default: f64) -> Self {
        Self::new(name, ParamKind::Real, ParamValue::Real(default))
    }

    pub fn text(name: impl Into<String>, default: &str) -> Self {
        Self::new(name, ParamKind::Text, ParamValue::Text(default.to_string()))
    }

    pub fn boolean(name: impl Into<String>) -> Self {
        Self::new(name, ParamKind::Boolean, ParamValue::Boolean(false))
    }

    pub fn categorical(name: impl Into<String>, values: &[&str], default: &str) -> Self {
        Self::new(
            name,
            ParamKind::Categorical(values.iter().map(|s| s.to_string()).collect()),
            ParamValue::Categorical(default.to_string()),
        )
    }

    pub fn flag(mut self, c: char) -> Self {
        self.flag = Some(c);
        self
    }

    pub fn help(mut self, h: impl Into<String>) -> Self {
        self.help = h.into();
        self
    }

    pub fn section(mut self, s: impl Into<String>) -> Self {
        self.section = s.into();
        self
    }

    pub fn required(mut self, r: bool) -> Self {
        self.required = r;
        self
    }

    /// Parse a raw command-line string into a value of this parameter's kind.
    pub fn parse_value(&self, raw: &str) -> Option<ParamValue> {
        match &self.kind {
            ParamKind::Integer => raw.parse().ok().map(ParamValue::Integer),
            ParamKind::Real => raw.parse().ok().map(ParamValue::Real),
            ParamKind::Boolean => match raw {
                "" | "1" | "true" | "yes" => Some(ParamValue::Boolean(true)),
                "0" | "false" | "no" => Some(ParamValue::Boolean(false)),
                _ => None,
            },
            ParamKind::Text => Some(ParamValue::Text(raw.to_string())),
            ParamKind::Categorical(values) => values
                .iter()
                .any(|v| v == raw)
                .then(|| ParamValue::Categorical(raw.to_string())),
        }
    }
}
