use std::collections::BTreeMap;

use evoforge::param::{ParamKind, ParamValue, Parameter};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown flag `{0}`")]
    UnknownFlag(String),
    #[error("missing required parameter `{0}`")]
    MissingRequired(String),
    #[error("`{flag}` expects {expected}, got `{value}`")]
    TypeMismatch {
        flag: String,
        value: String,
        expected: String,
    },
    #[error("`{0}` needs a value")]
    MissingValue(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Runtime(#[from] evoforge::Error),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Runtime(_) | CliError::Output(_) => crate::EXIT_RUNTIME,
            _ => crate::EXIT_USAGE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Default,
    Explicit,
}

/// Parsed values for every declared parameter.
#[derive(Debug, Clone)]
pub struct ParsedArgs {
    values: BTreeMap<String, (ParamValue, Provenance)>,
    sections: BTreeMap<String, String>,
    pub help: bool,
}

impl ParsedArgs {
    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        self.values.get(name).map(|(v, _)| v)
    }

    pub fn provenance(&self, name: &str) -> Option<Provenance> {
        self.values.get(name).map(|(_, p)| *p)
    }

    pub fn section(&self, name: &str) -> Option<&str> {
        self.sections.get(name).map(String::as_str)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    pub fn integer(&self, name: &str) -> Result<i64, CliError> {
        match self.get(name) {
            Some(ParamValue::Integer(v)) => Ok(*v),
            _ => Err(CliError::Usage(format!(
                "`{name}` is not an integer parameter"
            ))),
        }
    }

    /// Integer parameter that must be non-negative.
    pub fn count(&self, name: &str) -> Result<u64, CliError> {
        let v = self.integer(name)?;
        u64::try_from(v).map_err(|_| CliError::TypeMismatch {
            flag: name.to_string(),
            value: v.to_string(),
            expected: "a non-negative integer".into(),
        })
    }

    pub fn real(&self, name: &str) -> Result<f64, CliError> {
        match self.get(name) {
            Some(ParamValue::Real(v)) => Ok(*v),
            _ => Err(CliError::Usage(format!("`{name}` is not a real parameter"))),
        }
    }

    pub fn text(&self, name: &str) -> Result<&str, CliError> {
        match self.get(name) {
            Some(ParamValue::Text(v)) | Some(ParamValue::Categorical(v)) => Ok(v),
            _ => Err(CliError::Usage(format!("`{name}` is not a text parameter"))),
        }
    }

    pub fn flag(&self, name: &str) -> Result<bool, CliError> {
        match self.get(name) {
            Some(ParamValue::Boolean(v)) => Ok(*v),
            _ => Err(CliError::Usage(format!(
                "`{name}` is not a boolean parameter"
            ))),
        }
    }
}

fn expected(kind: &ParamKind) -> String {
    match kind {
        ParamKind::Integer => "an integer".into(),
        ParamKind::Real => "a real number".into(),
        ParamKind::Boolean => "a boolean".into(),
        ParamKind::Text => "text".into(),
        ParamKind::Categorical(v) => format!("one of {}", v.join("|")),
    }
}

/// Parse `argv` (without the program or subcommand name) against the
/// declared parameters. Accepts `--name=value`, `--name value`, `-c value`
/// and bare `--name` for booleans. `--help`/`-h` skips the required check.
pub fn parse(argv: &[String], params: &[Parameter]) -> Result<ParsedArgs, CliError> {
    let mut values = BTreeMap::new();
    let mut sections = BTreeMap::new();
    for p in params {
        values.insert(p.name.clone(), (p.default.clone(), Provenance::Default));
        sections.insert(p.name.clone(), p.section.clone());
    }
    let mut help = false;
    let mut i = 0;
    while i < argv.len() {
        let arg = &argv[i];
        i += 1;
        if arg == "--help" || arg == "-h" {
            help = true;
            continue;
        }
        let (param, inline) = if let Some(long) = arg.strip_prefix("--") {
            let (name, inline) = match long.split_once('=') {
                Some((n, v)) => (n, Some(v.to_string())),
                None => (long, None),
            };
            let p = params
                .iter()
                .find(|p| p.name == name)
                .ok_or_else(|| CliError::UnknownFlag(format!("--{name}")))?;
            (p, inline)
        } else if let Some(short) = arg.strip_prefix('-').filter(|s| s.chars().count() == 1) {
            let c = short.chars().next().expect("one char");
            let p = params
                .iter()
                .find(|p| p.flag == Some(c))
                .ok_or_else(|| CliError::UnknownFlag(arg.clone()))?;
            (p, None)
        } else {
            return Err(CliError::UnknownFlag(arg.clone()));
        };
        let raw = match inline {
            Some(v) => v,
            None if param.kind == ParamKind::Boolean => "true".to_string(),
            None => {
                let v = argv
                    .get(i)
                    .ok_or_else(|| CliError::MissingValue(param.name.clone()))?;
                i += 1;
                v.clone()
            }
        };
        let value = param
            .parse_value(&raw)
            .ok_or_else(|| CliError::TypeMismatch {
                flag: param.name.clone(),
                value: raw.clone(),
                expected: expected(&param.kind),
            })?;
        values.insert(param.name.clone(), (value, Provenance::Explicit));
    }
    if !help {
        if let Some(p) = params
            .iter()
            .find(|p| p.required && values[&p.name].1 == Provenance::Default)
        {
            return Err(CliError::MissingRequired(p.name.clone()));
        }
    }
    Ok(ParsedArgs {
        values,
        sections,
        help,
    })
}

/// Parameters grouped by section, in declaration order of first appearance.
pub fn help_text(usage: &str, description: &str, params: &[Parameter]) -> String {
    let mut out = format!("{usage}\n{description}\n");
    let mut order: Vec<&str> = Vec::new();
    for p in params {
        if !order.contains(&p.section.as_str()) {
            order.push(&p.section);
        }
    }
    for section in order {
        out.push_str(&format!("\n{section}:\n"));
        for p in params.iter().filter(|p| p.section == section) {
            let short = p.flag.map(|c| format!("-{c}, ")).unwrap_or_default();
            let req = if p.required { " (required)" } else { "" };
            out.push_str(&format!(
                "  {short}--{}=<{}>  {} [default: {}]{req}\n",
                p.name,
                kind_hint(&p.kind),
                p.help,
                p.default
            ));
        }
    }
    out
}

fn kind_hint(kind: &ParamKind) -> &'static str {
    match kind {
        ParamKind::Integer => "int",
        ParamKind::Real => "real",
        ParamKind::Boolean => "bool",
        ParamKind::Text => "text",
        ParamKind::Categorical(_) => "choice",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(a: &[&str]) -> Vec<String> {
        a.iter().map(|s| s.to_string()).collect()
    }

    fn decl() -> Vec<Parameter> {
        vec![
            Parameter::integer("crossover", 0)
                .flag('c')
                .help("The crossover operator")
                .section("Operator Choice"),
            Parameter::real("rate", 0.5),
            Parameter::boolean("list"),
            Parameter::text("problem", "onemax:n=10").required(true),
        ]
    }

    #[test]
    fn explicit_long_flag() {
        let a = parse(&argv(&["--crossover=2", "--problem=x"]), &decl()).unwrap();
        assert_eq!(a.integer("crossover").unwrap(), 2);
        assert_eq!(a.provenance("crossover"), Some(Provenance::Explicit));
        assert_eq!(a.provenance("rate"), Some(Provenance::Default));
    }

    #[test]
    fn short_and_separate_values() {
        let a = parse(
            &argv(&["-c", "3", "--rate", "0.25", "--list", "--problem=p"]),
            &decl(),
        )
        .unwrap();
        assert_eq!(a.integer("crossover").unwrap(), 3);
        assert_eq!(a.real("rate").unwrap(), 0.25);
        assert!(a.flag("list").unwrap());
        assert_eq!(a.section("crossover"), Some("Operator Choice"));
    }

    #[test]
    fn defaults_when_absent() {
        let mut d = decl();
        d.pop();
        let a = parse(&[], &d).unwrap();
        assert_eq!(a.integer("crossover").unwrap(), 0);
        assert!(!a.flag("list").unwrap());
    }

    #[test]
    fn errors_name_the_flag() {
        match parse(&argv(&["--crossover=abc", "--problem=p"]), &decl()) {
            Err(CliError::TypeMismatch { flag, .. }) => assert_eq!(flag, "crossover"),
            other => panic!("{other:?}"),
        }
        assert!(
            matches!(parse(&argv(&["--nope=1"]), &decl()), Err(CliError::UnknownFlag(f)) if f == "--nope")
        );
        assert!(matches!(parse(&[], &decl()), Err(CliError::MissingRequired(f)) if f == "problem"));
        assert!(matches!(
            parse(&argv(&["--rate"]), &decl()),
            Err(CliError::MissingValue(_))
        ));
        assert!(parse(&argv(&["--help"]), &decl()).unwrap().help);
    }

    #[test]
    fn help_groups_sections() {
        let h = help_text("usage: x", "desc", &decl());
        let op = h.find("Operator Choice:").unwrap();
        let gen = h.find("General:").unwrap();
        assert!(op < gen);
        assert!(h.contains("-c, --crossover=<int>  The crossover operator [default: 0]"));
        assert!(h.contains("(required)"));
    }
}
