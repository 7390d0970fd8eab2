use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graded::{parse, ChartScheme};
use crate::phase::{BaseForm, ClosedThreeForm, TwoFormOnM};

/// Largest supported dimension of M.
pub const MAX_DIM: u8 = 6;
/// Largest supported polynomial degree of form coefficients.
pub const MAX_COEFFICIENT_DEGREE: u32 = 4;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    d: u8,
    terms: Vec<TermDocument>,
    #[serde(default)]
    unchecked: bool,
    #[serde(default)]
    degree: Option<u8>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDocument {
    indices: Vec<u8>,
    coeff: String,
}

/// A background form read from a document.
#[derive(Clone, Debug)]
pub enum Background {
    Kappa(ClosedThreeForm),
    Beta(TwoFormOnM),
}

impl Background {
    pub fn dim(&self) -> u8 {
        match self {
            Background::Kappa(k) => k.dim(),
            Background::Beta(b) => b.dim(),
        }
    }
}

/// Parses a document into a form of the given degree (or the degree implied
/// by the first term), with the closedness flag.
fn parse_document(text: &str, degree: Option<u8>, unsafe_caps: bool) -> Result<(BaseForm, bool)> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.d == 0 {
        return Err(Error::Invalid("dimension must be at least 1".into()));
    }
    if doc.d > MAX_DIM && !unsafe_caps {
        return Err(Error::Cap { what: "dimension".into(), value: doc.d as usize, cap: MAX_DIM as usize });
    }
    let degree = degree
        .or(doc.degree)
        .or_else(|| doc.terms.first().map(|t| t.indices.len() as u8))
        .unwrap_or(3);
    let scheme = ChartScheme::base(doc.d);
    let mut terms = Vec::new();
    for (n, t) in doc.terms.iter().enumerate() {
        let coeff = parse(&scheme, &t.coeff).map_err(|e| match e {
            Error::Parse { line, column, message } => {
                Error::Parse { line, column, message: format!("term {n}: {message}") }
            }
            e => e,
        })?;
        terms.push((t.indices.clone(), coeff));
    }
    let form = BaseForm::from_terms(doc.d, degree, &terms)?;
    let cd = form.coefficient_degree();
    if cd > MAX_COEFFICIENT_DEGREE && !unsafe_caps {
        return Err(Error::Cap {
            what: "coefficient degree".into(),
            value: cd as usize,
            cap: MAX_COEFFICIENT_DEGREE as usize,
        });
    }
    Ok((form, doc.unchecked))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Loads a 3-form (closedness checked unless the document sets `unchecked`)
/// or a 2-form, according to the degree of its terms.
pub fn load_background(path: &Path, unsafe_caps: bool) -> Result<Background> {
    let (form, unchecked) = parse_document(&read(path)?, None, unsafe_caps)?;
    match form.degree() {
        2 => Ok(Background::Beta(TwoFormOnM::new(form)?)),
        3 => Ok(Background::Kappa(if unchecked { ClosedThreeForm::unchecked(form)? } else { ClosedThreeForm::new(form)? })),
        k => Err(Error::Invalid(format!("background forms have degree 2 or 3, got {k}"))),
    }
}

pub fn kappa_from_str(text: &str, unsafe_caps: bool) -> Result<ClosedThreeForm> {
    let (form, unchecked) = parse_document(text, Some(3), unsafe_caps)?;
    if unchecked {
        ClosedThreeForm::unchecked(form)
    } else {
        ClosedThreeForm::new(form)
    }
}

pub fn beta_from_str(text: &str, unsafe_caps: bool) -> Result<TwoFormOnM> {
    let (form, _) = parse_document(text, Some(2), unsafe_caps)?;
    TwoFormOnM::new(form)
}

pub fn load_kappa(path: &Path, unsafe_caps: bool) -> Result<ClosedThreeForm> {
    kappa_from_str(&read(path)?, unsafe_caps)
}

pub fn load_beta(path: &Path, unsafe_caps: bool) -> Result<TwoFormOnM> {
    beta_from_str(&read(path)?, unsafe_caps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volume_form() {
        let k = kappa_from_str(r#"{"d":3,"terms":[{"indices":[1,2,3],"coeff":"1"}]}"#, false).unwrap();
        assert_eq!(k, ClosedThreeForm::constant_volume(3, 1).unwrap());
    }

    #[test]
    fn closedness_depends_on_the_slots() {
        let k = kappa_from_str(r#"{"d":4,"terms":[{"indices":[1,2,3],"coeff":"x1"}]}"#, false).unwrap();
        assert!(k.is_closed());
        let err = kappa_from_str(r#"{"d":4,"terms":[{"indices":[2,3,4],"coeff":"x1"}]}"#, false).unwrap_err();
        assert!(matches!(err, Error::NotClosed { .. }), "{err}");
    }

    #[test]
    fn antisymmetrized() {
        let a = kappa_from_str(r#"{"d":3,"terms":[{"indices":[2,1,3],"coeff":"1"}]}"#, false).unwrap();
        assert_eq!(a, ClosedThreeForm::constant_volume(3, -1).unwrap());
    }

    #[test]
    fn errors() {
        let arity = kappa_from_str(r#"{"d":3,"terms":[{"indices":[1,2],"coeff":"1"}]}"#, false).unwrap_err();
        assert!(arity.to_string().contains("3-form term needs 3 indices"), "{arity}");
        let open = kappa_from_str(r#"{"d":4,"terms":[{"indices":[1,2,3],"coeff":"x4"}]}"#, false).unwrap_err();
        assert!(matches!(open, Error::NotClosed { .. }));
        let range = kappa_from_str(r#"{"d":3,"terms":[{"indices":[1,2,4],"coeff":"1"}]}"#, false).unwrap_err();
        assert!(range.to_string().contains("out of range"));
        match kappa_from_str("{\"d\":3,\n \"terms\": [}", false).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("{e}"),
        }
        let big = kappa_from_str(r#"{"d":3,"terms":[{"indices":[1,2,3],"coeff":"x1^5"}]}"#, false).unwrap_err();
        assert!(matches!(big, Error::Cap { .. }));
        assert!(kappa_from_str(r#"{"d":3,"terms":[{"indices":[1,2,3],"coeff":"x1^5"}]}"#, true).is_ok());
    }
}
