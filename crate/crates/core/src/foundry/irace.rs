use std::io::Write;

use crate::error::{Error, Result};
use crate::param::Parameter;

use super::slot::OperatorSlot;

pub const IRACE_HEADER: &str = "# name\t switch\t type\t range";

/// Value domain of one tuned parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum IraceDomain {
    /// Ordered slot with this many alternatives: `i (0,n-1)`.
    Ordinal(usize),
    /// Unordered slot with this many alternatives: `c (0,1,...,n-1)`.
    Categorical(usize),
    Integer(i64, i64),
    Real(f64, f64),
}

impl IraceDomain {
    pub fn of_slot(slot: &dyn OperatorSlot) -> Self {
        if slot.ordinal() {
            IraceDomain::Ordinal(slot.size())
        } else {
            IraceDomain::Categorical(slot.size())
        }
    }

    fn code_and_range(&self) -> (char, String) {
        match self {
            IraceDomain::Ordinal(n) => ('i', format!("(0,{})", n.saturating_sub(1))),
            IraceDomain::Categorical(n) => {
                let items: Vec<String> = (0..*n).map(|i| i.to_string()).collect();
                ('c', format!("({})", items.join(",")))
            }
            IraceDomain::Integer(lo, hi) => ('i', format!("({lo},{hi})")),
            IraceDomain::Real(lo, hi) => ('r', format!("({lo},{hi})")),
        }
    }
}

/// A declared parameter and, once bound, the domain a tuner may explore.
#[derive(Debug, Clone)]
pub struct IraceBinding<'a> {
    pub parameter: &'a Parameter,
    pub domain: Option<IraceDomain>,
}

impl<'a> IraceBinding<'a> {
    pub fn slot(parameter: &'a Parameter, slot: &dyn OperatorSlot) -> Self {
        Self {
            parameter,
            domain: Some(IraceDomain::of_slot(slot)),
        }
    }
}

/// Write an irace parameter file: the header, then one
/// `name "--switch=" type range` line per binding.
pub fn print_irace(bindings: &[IraceBinding<'_>], out: &mut dyn Write) -> Result<()> {
    let io = |source| Error::Io {
        path: "<irace output>".into(),
        source,
    };
    writeln!(out, "{IRACE_HEADER}").map_err(io)?;
    for b in bindings {
        let domain = b
            .domain
            .as_ref()
            .ok_or_else(|| Error::UnboundParameter(b.parameter.name.clone()))?;
        let (code, range) = domain.code_and_range();
        let name: String = b.parameter.name.chars().filter(|c| *c != '-').collect();
        writeln!(out, "{name} \"--{}=\" {code} {range}", b.parameter.name).map_err(io)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundry::Slot;

    fn render(bindings: &[IraceBinding<'_>]) -> String {
        let mut buf = Vec::new();
        print_irace(bindings, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn sample_rows() {
        let mut rates: Slot<f64> = Slot::new("mutation-rate", 0, true);
        for i in 0..5 {
            rates.add_value(i.to_string(), i as f64 * 0.2).unwrap();
        }
        let mut xovers: Slot<usize> = Slot::new("crossover", 1, false);
        for i in 0..8 {
            xovers.add_value(i.to_string(), i).unwrap();
        }
        let pm = Parameter::integer("mutation-rate", 0);
        let pc = Parameter::integer("crossover", 0);
        let text = render(&[
            IraceBinding::slot(&pm, &rates),
            IraceBinding::slot(&pc, &xovers),
        ]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# name\t switch\t type\t range");
        assert_eq!(lines[1], "mutationrate \"--mutation-rate=\" i (0,4)");
        assert_eq!(lines[2], "crossover \"--crossover=\" c (0,1,2,3,4,5,6,7)");
    }

    #[test]
    fn header_only_and_unbound() {
        assert_eq!(render(&[]), "# name\t switch\t type\t range\n");
        let p = Parameter::real("scale", 1.0);
        let mut buf = Vec::new();
        let unbound = [IraceBinding {
            parameter: &p,
            domain: None,
        }];
        assert!(
            matches!(print_irace(&unbound, &mut buf), Err(Error::UnboundParameter(n)) if n == "scale")
        );
        let bound = [IraceBinding {
            parameter: &p,
            domain: Some(IraceDomain::Real(0.5, 2.0)),
        }];
        assert_eq!(
            render(&bound).lines().nth(1).unwrap(),
            "scale \"--scale=\" r (0.5,2)"
        );
    }
}
