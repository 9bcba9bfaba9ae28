//! Method selectors of the form `Class.name(type, ...)`.

use std::fmt;
use std::str::FromStr;

use refd_core::template::{ClassTemplate, MethodTemplate};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid selector `{input}`: {reason}")]
pub struct SelectorError {
    pub input: String,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Selector {
    pub class: String,
    pub name: String,
    pub param_types: Vec<String>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_' || c == '$')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '$')
}

impl FromStr for Selector {
    type Err = SelectorError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let fail = |reason| SelectorError {
            input: input.to_owned(),
            reason,
        };
        let s = input.trim();
        let open = s.find('(').ok_or_else(|| fail("missing `(`"))?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(|| fail("missing closing `)`"))?;
        let (class, name) = s[..open].trim_end().split_once('.').ok_or_else(|| fail("expected `Class.method`"))?;
        if !is_identifier(class) {
            return Err(fail("class name is not an identifier"));
        }
        if !is_identifier(name) {
            return Err(fail("method name is not an identifier"));
        }
        let param_types = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|t| {
                    let t = t.trim();
                    is_identifier(t).then(|| t.to_owned()).ok_or_else(|| fail("parameter type is not an identifier"))
                })
                .collect::<Result<_, _>>()?
        };
        Ok(Selector {
            class: class.to_owned(),
            name: name.to_owned(),
            param_types,
        })
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}({})", self.class, self.name, self.param_types.join(","))
    }
}

impl Selector {
    pub fn template(&self) -> MethodTemplate {
        MethodTemplate::new(ClassTemplate::named(&self.class), &self.name, &self.param_types)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        let s: Selector = " Employee.salaryBonus( int ) ".parse().unwrap();
        assert_eq!(s.class, "Employee");
        assert_eq!(s.param_types, ["int"]);
        assert_eq!(s.to_string(), "Employee.salaryBonus(int)");
        let s: Selector = "Source.method(Target, long)".parse().unwrap();
        assert_eq!(s.to_string(), "Source.method(Target,long)");
        assert!("Invoice.toString()".parse::<Selector>().unwrap().param_types.is_empty());
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "m()", "A.m", "A.m(int", "A.(int)", "1A.m()", "A.m(int,)", "A.m(int x)", "A.b.m()"] {
            assert!(bad.parse::<Selector>().is_err(), "{bad}");
        }
    }
}
