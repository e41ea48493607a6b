//! Group spec strings: `<FAMILY><RANK>[:sc|:adj|:pi1=[v1;v2;...]]`.

use std::sync::Arc;

use thiserror::Error;
use transgress_core::lattices::{GroupSpec, LatticeError};
use transgress_core::rootdata::{Convention, Family, LieType, RootSystem, WeightVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("invalid group: {0}")]
    Group(#[from] LatticeError),
}

fn parse_err(offset: usize, message: impl Into<String>) -> SpecError {
    SpecError::Parse {
        offset,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Form {
    SimplyConnected,
    Adjoint,
    Pi1(Vec<Vec<i64>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedSpec {
    pub lie_type: LieType,
    pub form: Form,
}

pub fn parse(text: &str) -> Result<ParsedSpec, SpecError> {
    let bytes = text.as_bytes();
    let family_char = match bytes.first() {
        Some(&b) => b as char,
        None => return Err(parse_err(0, "empty group spec")),
    };
    let family: Family = family_char
        .to_string()
        .parse()
        .map_err(|_| parse_err(0, format!("unknown family '{family_char}', expected one of A-G")))?;
    let digits = bytes[1..].iter().take_while(|b| b.is_ascii_digit()).count();
    if digits == 0 {
        return Err(parse_err(1, "expected a rank after the family letter"));
    }
    let rank: usize = text[1..1 + digits]
        .parse()
        .map_err(|_| parse_err(1, "rank out of range"))?;
    let lie_type = LieType::new(family, rank).map_err(|e| parse_err(1, e.to_string()))?;

    let pos = 1 + digits;
    let rest = &text[pos..];
    let form = if rest.is_empty() || rest == ":sc" {
        Form::SimplyConnected
    } else if rest == ":adj" {
        Form::Adjoint
    } else if let Some(list) = rest.strip_prefix(":pi1=") {
        Form::Pi1(parse_vectors(list, pos + ":pi1=".len())?)
    } else if rest.starts_with(':') {
        return Err(parse_err(pos + 1, "expected 'sc', 'adj' or 'pi1=[...]'"));
    } else {
        return Err(parse_err(pos, format!("unexpected '{}'", rest.chars().next().unwrap())));
    };
    Ok(ParsedSpec { lie_type, form })
}

// `[1,0;0,1]`, offsets relative to the whole spec
fn parse_vectors(list: &str, base: usize) -> Result<Vec<Vec<i64>>, SpecError> {
    let inner = list
        .strip_prefix('[')
        .ok_or_else(|| parse_err(base, "expected '['"))?;
    let inner = inner
        .strip_suffix(']')
        .ok_or_else(|| parse_err(base + list.len(), "expected ']'"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut vectors = Vec::new();
    let mut offset = base + 1;
    for part in inner.split(';') {
        let mut v = Vec::new();
        let mut entry_offset = offset;
        for entry in part.split(',') {
            let trimmed = entry.trim();
            let lead = entry.len() - entry.trim_start().len();
            let x: i64 = trimmed
                .parse()
                .map_err(|_| parse_err(entry_offset + lead, format!("expected an integer, found '{trimmed}'")))?;
            v.push(x);
            entry_offset += entry.len() + 1;
        }
        vectors.push(v);
        offset += part.len() + 1;
    }
    Ok(vectors)
}

impl ParsedSpec {
    pub fn build(&self, convention: Convention) -> Result<GroupSpec, SpecError> {
        let rs = Arc::new(RootSystem::with_convention(self.lie_type, convention));
        Ok(match &self.form {
            Form::SimplyConnected => GroupSpec::simply_connected(rs),
            Form::Adjoint => GroupSpec::adjoint(rs),
            Form::Pi1(vs) => GroupSpec::new(rs, vs.iter().cloned().map(WeightVector).collect())?,
        })
    }
}

pub fn parse_group(text: &str, convention: Convention) -> Result<GroupSpec, SpecError> {
    parse(text)?.build(convention)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offset_of(text: &str) -> usize {
        match parse(text).unwrap_err() {
            SpecError::Parse { offset, .. } => offset,
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn forms() {
        let p = parse("A2").unwrap();
        assert_eq!(p.lie_type.to_string(), "A2");
        assert_eq!(p.form, Form::SimplyConnected);
        assert_eq!(parse("A2:sc").unwrap().form, Form::SimplyConnected);
        assert_eq!(parse("E6:adj").unwrap().form, Form::Adjoint);
        assert_eq!(
            parse("D4:pi1=[1,0,0,0; 0,0,1,0]").unwrap().form,
            Form::Pi1(vec![vec![1, 0, 0, 0], vec![0, 0, 1, 0]])
        );
        assert_eq!(parse("A3:pi1=[]").unwrap().form, Form::Pi1(vec![]));
    }

    #[test]
    fn offsets() {
        assert_eq!(offset_of(""), 0);
        assert_eq!(offset_of("X9"), 0);
        assert_eq!(offset_of("A"), 1);
        assert_eq!(offset_of("B1"), 1);
        assert_eq!(offset_of("A2:foo"), 3);
        assert_eq!(offset_of("A2x"), 2);
        assert_eq!(offset_of("A3:pi1=(2)"), 7);
        assert_eq!(offset_of("A3:pi1=[2,x,0]"), 10);
        assert_eq!(offset_of("A3:pi1=[2,0,0;1,1,y]"), 18);
        assert_eq!(offset_of("A3:pi1=[2,0,0"), 13);
    }

    #[test]
    fn invalid_generator_is_named() {
        let err = parse_group("A3:pi1=[2,0,0;1,1]", Convention::Bourbaki).unwrap_err();
        assert!(matches!(err, SpecError::Group(LatticeError::InvalidGenerator { index: 1, .. })), "{err}");
    }

    #[test]
    fn pi1_matches_named_forms() {
        let g = parse_group("A3:pi1=[0,1,0]", Convention::Bourbaki).unwrap();
        assert_eq!(g.pi1_order(), 2);
        let adj = parse_group("A1:pi1=[1]", Convention::Bourbaki).unwrap();
        assert!(adj.is_adjoint());
    }
}
