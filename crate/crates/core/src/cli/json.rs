//! JSON documents read and written by the command line.

use serde::{Deserialize, Serialize};

use crate::bimodule::{InvertibleLinMat, LinMat};
use crate::endo::{ElementaryStep, Endomorphism, TameWord};
use crate::error::{Error, Result};
use crate::freealg::{Alphabet, Field, NcPoly, Scalar};
use crate::membership::{product_text, MembershipWitness};
use crate::smith::{g_alphabet, h_alphabet, AnickData, Piece, SmithData};

use super::parse::{parse_biop, parse_map, parse_poly};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub var: String,
    pub unit: String,
    pub addend: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TameWordJson {
    pub field: String,
    pub alphabet: Vec<String>,
    pub steps: Vec<StepJson>,
    pub target: String,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndomorphismJson {
    pub field: String,
    pub alphabet: Vec<String>,
    pub map: String,
}

pub fn parse_field(text: &str) -> Result<Field> {
    text.parse()
}

pub fn parse_scalar(text: &str, field: Field) -> Result<Scalar> {
    let alphabet = Alphabet::new(["c"]).expect("valid");
    let p = parse_poly(text, &alphabet, field)?;
    if !p.is_constant() {
        return Err(Error::InvalidInput(format!("`{text}` is not a scalar")));
    }
    Ok(p.coeff(&crate::freealg::Word::empty()))
}

pub fn tame_word_to_json(word: &TameWord, target: &Endomorphism, verified: bool) -> TameWordJson {
    let a = word.alphabet();
    TameWordJson {
        field: word.field().to_string(),
        alphabet: a.names().to_vec(),
        steps: word
            .steps()
            .iter()
            .map(|s| StepJson {
                var: a.name(s.var()).to_string(),
                unit: s.unit().to_string(),
                addend: s.addend().to_string(),
            })
            .collect(),
        target: target.to_string(),
        verified,
    }
}

/// Rebuilds the word and its target; `verified` is recomputed, not
/// trusted.
pub fn tame_word_from_json(doc: &TameWordJson) -> Result<(TameWord, Endomorphism, bool)> {
    let field = parse_field(&doc.field)?;
    let alphabet = Alphabet::new(doc.alphabet.clone())?;
    let mut steps = Vec::with_capacity(doc.steps.len());
    for s in &doc.steps {
        let var = alphabet
            .index_of(&s.var)
            .ok_or_else(|| Error::UnknownGenerator(s.var.clone()))?;
        let unit = parse_scalar(&s.unit, field)?;
        let addend = parse_poly(&s.addend, &alphabet, field)?;
        steps.push(ElementaryStep::new(var, unit, addend)?);
    }
    let word = TameWord::new(&alphabet, field, steps)?;
    let target = parse_map(&doc.target, &alphabet, field)?;
    let verified = word.check_against(&target).is_ok();
    Ok((word, target, verified))
}

pub fn endo_to_json(e: &Endomorphism) -> EndomorphismJson {
    EndomorphismJson {
        field: e.field().to_string(),
        alphabet: e.alphabet().names().to_vec(),
        map: e.to_string(),
    }
}

pub fn endo_from_json(doc: &EndomorphismJson) -> Result<Endomorphism> {
    let field = parse_field(&doc.field)?;
    let alphabet = Alphabet::new(doc.alphabet.clone())?;
    parse_map(&doc.map, &alphabet, field)
}

/// Input of `factor`. The field defaults to the session field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FactorInput {
    Smith {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        field: Option<String>,
        a: String,
        b: String,
        /// Over `z, t`.
        h: String,
    },
    Anick {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        field: Option<String>,
        /// Over `t, s`.
        g: String,
    },
    Product {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        field: Option<String>,
        pieces: Vec<PieceJson>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PieceJson {
    Linear {
        matrix: [[String; 2]; 2],
        inverse: [[String; 2]; 2],
    },
    Smith {
        a: String,
        b: String,
        h: String,
    },
}

/// A factor input resolved to typed values.
#[derive(Debug, Clone, PartialEq)]
pub enum FactorRequest {
    Smith(SmithData),
    Anick(AnickData),
    Product(Vec<Piece>),
}

impl FactorInput {
    pub fn field(&self) -> Option<&str> {
        match self {
            FactorInput::Smith { field, .. }
            | FactorInput::Anick { field, .. }
            | FactorInput::Product { field, .. } => field.as_deref(),
        }
    }

    pub fn resolve(&self, default: Field) -> Result<FactorRequest> {
        let field = match self.field() {
            Some(f) => parse_field(f)?,
            None => default,
        };
        Ok(match self {
            FactorInput::Smith { a, b, h, .. } => FactorRequest::Smith(smith_data(a, b, h, field)?),
            FactorInput::Anick { g, .. } => {
                FactorRequest::Anick(AnickData::new(parse_poly(g, &g_alphabet(), field)?)?)
            }
            FactorInput::Product { pieces, .. } => FactorRequest::Product(
                pieces
                    .iter()
                    .map(|p| p.resolve(field))
                    .collect::<Result<Vec<_>>>()?,
            ),
        })
    }
}

fn smith_data(a: &str, b: &str, h: &str, field: Field) -> Result<SmithData> {
    SmithData::new(
        parse_biop(a, field)?,
        parse_biop(b, field)?,
        parse_poly(h, &h_alphabet(), field)?,
    )
}

fn matrix(entries: &[[String; 2]; 2], field: Field) -> Result<LinMat> {
    let e = |r: usize, c: usize| parse_biop(&entries[r][c], field);
    LinMat::new([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]])
}

impl PieceJson {
    pub fn resolve(&self, field: Field) -> Result<Piece> {
        Ok(match self {
            PieceJson::Linear { matrix: m, inverse } => {
                Piece::Linear(InvertibleLinMat::new(matrix(m, field)?, matrix(inverse, field)?)?)
            }
            PieceJson::Smith { a, b, h } => Piece::Smith(smith_data(a, b, h, field)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipTermJson {
    pub coeff: String,
    pub product: Vec<usize>,
    /// The product written with `f`, e.g. `z*f*f`.
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipJson {
    pub field: String,
    pub f: String,
    pub r: String,
    pub bound: usize,
    pub member: bool,
    pub preconditions_pass: bool,
    pub terms: Vec<MembershipTermJson>,
}

pub fn witness_terms(w: &MembershipWitness) -> Vec<MembershipTermJson> {
    w.terms
        .iter()
        .map(|(c, p)| MembershipTermJson {
            coeff: c.to_string(),
            product: p.clone(),
            text: product_text(p),
        })
        .collect()
}

pub fn witness_from_terms(terms: &[MembershipTermJson], field: Field) -> Result<MembershipWitness> {
    Ok(MembershipWitness {
        terms: terms
            .iter()
            .map(|t| Ok((parse_scalar(&t.coeff, field)?, t.product.clone())))
            .collect::<Result<_>>()?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyJson {
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteJson {
    pub suite: String,
    pub samples: usize,
    pub failures: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

/// Convenience for tests and tools: `h` text to a polynomial over `z, t`.
pub fn parse_h(text: &str, field: Field) -> Result<NcPoly> {
    parse_poly(text, &h_alphabet(), field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smith::smith_factorization;

    #[test]
    fn word_round_trip() {
        let d = smith_data("1", "1", "t", Field::Rationals).unwrap();
        let w = smith_factorization(&d).unwrap();
        let target = w.eval();
        let doc = tame_word_to_json(&w, &target, true);
        let text = serde_json::to_string(&doc).unwrap();
        let back: TameWordJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        let (w2, t2, ok) = tame_word_from_json(&back).unwrap();
        assert_eq!((w2, t2, ok), (w, target, true));
    }

    #[test]
    fn factor_inputs() {
        let doc = r#"{"kind":"smith","a":"1","b":"zl","h":"t^2"}"#;
        let input: FactorInput = serde_json::from_str(doc).unwrap();
        assert!(matches!(input.resolve(Field::Rationals).unwrap(), FactorRequest::Smith(_)));
        let doc = r#"{"kind":"product","field":"fp:7","pieces":[
            {"kind":"linear","matrix":[["1","zl"],["0","1"]],"inverse":[["1","-zl"],["0","1"]]},
            {"kind":"smith","a":"0","b":"1","h":"t"}]}"#;
        let input: FactorInput = serde_json::from_str(doc).unwrap();
        let FactorRequest::Product(p) = input.resolve(Field::Rationals).unwrap() else {
            panic!()
        };
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].field(), Field::Prime(7));
        assert!(serde_json::from_str::<FactorInput>(r#"{"kind":"anick","g":"t","x":1}"#).is_err());
    }

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar("-3/6", Field::Rationals).unwrap().to_string(), "-1/2");
        assert!(parse_scalar("c", Field::Rationals).is_err());
    }
}
