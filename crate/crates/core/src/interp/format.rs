//! Line-based interpretation files.
//!
//! ```text
//! individual a
//! concept A: a b
//! role R: a b ; b c
//! assign x0 = a
//! ```

use std::fmt;

use thiserror::Error;

use super::Interpretation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown individual {name:?}")]
    UnknownIndividual { line: usize, name: String },
    #[error("interpretation has an empty domain")]
    EmptyDomain,
}

fn syntax(line: usize, message: impl Into<String>) -> InterpError {
    InterpError::Syntax {
        line,
        message: message.into(),
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_interpretation(text: &str) -> Result<Interpretation, InterpError> {
    let mut i = Interpretation::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .unwrap_or((content, ""));
        let rest = rest.trim();
        let lookup = |i: &Interpretation, name: &str| {
            i.element(name)
                .ok_or_else(|| InterpError::UnknownIndividual {
                    line,
                    name: name.to_string(),
                })
        };
        match keyword {
            "individual" => {
                if !is_ident(rest) {
                    return Err(syntax(line, format!("bad individual name {rest:?}")));
                }
                i.add_element(rest);
            }
            "concept" => {
                let (name, members) = rest
                    .split_once(':')
                    .ok_or_else(|| syntax(line, "expected 'concept <Name>: <id> ...'"))?;
                let name = name.trim();
                if !is_ident(name) {
                    return Err(syntax(line, format!("bad concept name {name:?}")));
                }
                i.declare_concept(name);
                for m in members.split_whitespace() {
                    let e = lookup(&i, m)?;
                    i.add_concept_member(name, e);
                }
            }
            "role" => {
                let (name, pairs) = rest
                    .split_once(':')
                    .ok_or_else(|| syntax(line, "expected 'role <Name>: <id> <id> ; ...'"))?;
                let name = name.trim();
                if !is_ident(name) {
                    return Err(syntax(line, format!("bad role name {name:?}")));
                }
                i.declare_role(name);
                for pair in pairs.split(';') {
                    let ids: Vec<&str> = pair.split_whitespace().collect();
                    match ids.as_slice() {
                        [] => {}
                        [a, b] => {
                            let (a, b) = (lookup(&i, a)?, lookup(&i, b)?);
                            i.add_role_pair(name, a, b);
                        }
                        _ => return Err(syntax(line, format!("bad pair {:?}", pair.trim()))),
                    }
                }
            }
            "assign" => {
                let (name, target) = rest
                    .split_once('=')
                    .ok_or_else(|| syntax(line, "expected 'assign <name> = <id>'"))?;
                let e = lookup(&i, target.trim())?;
                i.assign(name.trim(), e);
            }
            other => return Err(syntax(line, format!("unknown keyword {other:?}"))),
        }
    }
    if i.domain_size() == 0 {
        return Err(InterpError::EmptyDomain);
    }
    Ok(i)
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in self.elements() {
            writeln!(f, "individual {}", self.element_name(e))?;
        }
        for (name, ext) in self.concept_names() {
            write!(f, "concept {name}:")?;
            for &e in ext {
                write!(f, " {}", self.element_name(e))?;
            }
            writeln!(f)?;
        }
        for (name, rel) in self.role_names() {
            write!(f, "role {name}:")?;
            for (k, &(a, b)) in rel.iter().enumerate() {
                if k > 0 {
                    write!(f, " ;")?;
                }
                write!(f, " {} {}", self.element_name(a), self.element_name(b))?;
            }
            writeln!(f)?;
        }
        for (name, &e) in self.assignment() {
            writeln!(f, "assign {name} = {}", self.element_name(e))?;
        }
        Ok(())
    }
}
