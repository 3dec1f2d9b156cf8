//! The `certify`, `factor` and `membership` commands.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::endo::{certify, Endomorphism, TameWord};
use crate::error::{Error, Result};
use crate::freealg::{Alphabet, Field, NcPoly};
use crate::membership::{check_preconditions, subalgebra_membership, Membership, MembershipQuery};
use crate::smith::{
    anick_aut, anick_to_smith, factor_presented_product, make_smith_aut, presented_product, smith_factorization,
    Piece, SmithData, FRESH,
};

use super::json::{tame_word_to_json, witness_terms, CertifyJson, FactorInput, FactorRequest, MembershipJson};
use super::parse::{map_generators, parse_map, parse_poly};
use super::{Outcome, SessionConfig, EXIT_NOT_INVERSE, EXIT_VERIFICATION_FAILED};

fn render<T: Serialize>(cfg: &SessionConfig, value: &T) -> String {
    let mut s = if cfg.json {
        serde_json::to_string(value)
    } else {
        serde_json::to_string_pretty(value)
    }
    .expect("serializable");
    s.push('\n');
    s
}

fn check_degree(cfg: &SessionConfig, what: &str, degree: Option<usize>) -> Result<()> {
    match degree {
        Some(d) if d > cfg.degree_cap => Err(Error::InvalidInput(format!(
            "{what} has degree {d}, above the cap {}",
            cfg.degree_cap
        ))),
        _ => Ok(()),
    }
}

fn map_alphabet(cfg: &SessionConfig, map: &str, inverse: &str) -> Result<Alphabet> {
    if let Some(a) = &cfg.alphabet {
        return Ok(a.clone());
    }
    let names = map_generators(map)?;
    let other = map_generators(inverse)?;
    let set: BTreeSet<&String> = names.iter().collect();
    if set != other.iter().collect() {
        return Err(Error::AlphabetMismatch(names.join(","), other.join(",")));
    }
    Alphabet::new(names)
}

/// Checks that `map_text` and `inverse_text` are mutually inverse.
/// Without `--alphabet` the generators are read off the map.
pub fn cmd_certify(cfg: &SessionConfig, map_text: &str, inverse_text: &str) -> Outcome {
    let parsed = (|| {
        let alphabet = map_alphabet(cfg, map_text, inverse_text)?;
        let forward = parse_map(map_text, &alphabet, cfg.field)?;
        let inverse = parse_map(inverse_text, &alphabet, cfg.field)?;
        for e in [&forward, &inverse] {
            for p in e.images() {
                check_degree(cfg, "an image", p.degree().finite())?;
            }
        }
        Ok((forward, inverse))
    })();
    let (forward, inverse) = match parsed {
        Ok(v) => v,
        Err(e) => return Outcome::error(&e),
    };
    match certify(forward, inverse) {
        Ok(_) => {
            let doc = CertifyJson {
                verified: true,
                generator: None,
                residual: None,
            };
            Outcome::ok(if cfg.json {
                render(cfg, &doc)
            } else {
                "verified: the maps are mutually inverse\n".into()
            })
        }
        Err(Error::NotInverse { generator, residual }) => {
            let stdout = if cfg.json {
                render(
                    cfg,
                    &CertifyJson {
                        verified: false,
                        generator: Some(generator),
                        residual: Some(residual.to_string()),
                    },
                )
            } else {
                format!("not inverse: composite moves {generator} by {residual}\n")
            };
            Outcome {
                code: EXIT_NOT_INVERSE,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome::error(&e),
    }
}

fn smith_degrees(cfg: &SessionConfig, d: &SmithData) -> Result<()> {
    check_degree(cfg, "a", d.a.degree().map(|x| x as usize))?;
    check_degree(cfg, "b", d.b.degree().map(|x| x as usize))?;
    check_degree(cfg, "h", d.h.degree().finite())
}

/// The verified word and its stabilized target for a factor request.
pub fn factor_request(cfg: &SessionConfig, req: &FactorRequest) -> Result<(TameWord, Endomorphism)> {
    match req {
        FactorRequest::Smith(d) => {
            smith_degrees(cfg, d)?;
            let target = make_smith_aut(d)?.forward().stabilize(FRESH)?;
            Ok((smith_factorization(d)?, target))
        }
        FactorRequest::Anick(a) => {
            check_degree(cfg, "g", a.g.degree().finite())?;
            let d = anick_to_smith(a)?;
            let target = anick_aut(a)?.forward().stabilize(FRESH)?;
            Ok((smith_factorization(&d)?, target))
        }
        FactorRequest::Product(pieces) => {
            for p in pieces {
                match p {
                    Piece::Smith(d) => smith_degrees(cfg, d)?,
                    Piece::Linear(m) => {
                        for row in m.matrix().entries() {
                            for e in row {
                                check_degree(cfg, "a matrix entry", e.degree().map(|x| x as usize))?;
                            }
                        }
                    }
                }
            }
            let target = presented_product(pieces)?.stabilize(FRESH)?;
            Ok((factor_presented_product(pieces)?, target))
        }
    }
}

/// Factors a JSON-described input and prints the verified word.
pub fn cmd_factor(cfg: &SessionConfig, input: &str) -> Outcome {
    let result = (|| {
        let doc: FactorInput =
            serde_json::from_str(input).map_err(|e| Error::InvalidInput(format!("factor input: {e}")))?;
        factor_request(cfg, &doc.resolve(cfg.field)?)
    })();
    match result {
        Ok((word, target)) => {
            let verified = word.check_against(&target).is_ok();
            let doc = tame_word_to_json(&word, &target, verified);
            Outcome {
                code: if verified { 0 } else { EXIT_VERIFICATION_FAILED },
                stdout: render(cfg, &doc),
                stderr: String::new(),
            }
        }
        Err(e) => Outcome::error(&e),
    }
}

fn membership(cfg: &SessionConfig, f_text: &str, r_text: &str, bound: usize) -> Result<(MembershipJson, Field)> {
    let alphabet = cfg.alphabet.clone().unwrap_or_else(Alphabet::xyz);
    let f = parse_poly(f_text, &alphabet, cfg.field)?;
    let r = parse_poly(r_text, &alphabet, cfg.field)?;
    check_degree(cfg, "the bound", Some(bound))?;
    let pre = check_preconditions(&f)?;
    let q = MembershipQuery::new(f.clone(), r.clone(), bound)?;
    let (member, terms) = match subalgebra_membership(&q)? {
        Membership::Member(w) => (true, witness_terms(&w)),
        Membership::NotMember => (false, Vec::new()),
    };
    Ok((
        MembershipJson {
            field: cfg.field.to_string(),
            f: f.to_string(),
            r: r.to_string(),
            bound,
            member,
            preconditions_pass: pre.passes(),
            terms,
        },
        cfg.field,
    ))
}

fn witness_text(doc: &MembershipJson) -> String {
    if doc.terms.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = doc.terms.iter().map(|t| format!("({})*{}", t.coeff, t.text)).collect();
    parts.join(" + ")
}

/// Decides membership of `R` in the subalgebra generated by `z` and `f`
/// up to `bound`. A negative answer exits 0.
pub fn cmd_membership(cfg: &SessionConfig, f_text: &str, r_text: &str, bound: usize) -> Outcome {
    match membership(cfg, f_text, r_text, bound) {
        Ok((doc, _)) => Outcome::ok(if cfg.json {
            render(cfg, &doc)
        } else if doc.member {
            format!("member: R = {}  with f = {}\n", witness_text(&doc), doc.f)
        } else {
            format!("not a member at degree bound {bound}\n")
        }),
        Err(e) => Outcome::error(&e),
    }
}

/// Re-evaluates a membership document: true when its terms rebuild `r`.
pub fn check_membership_json(doc: &MembershipJson, alphabet: &Alphabet) -> Result<bool> {
    let field: Field = doc.field.parse()?;
    let f = parse_poly(&doc.f, alphabet, field)?;
    let r = parse_poly(&doc.r, alphabet, field)?;
    let w = super::json::witness_from_terms(&doc.terms, field)?;
    let value: NcPoly = w.eval(&f)?;
    Ok(doc.member && value == r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SessionConfig {
        SessionConfig::default()
    }

    #[test]
    fn certify_codes() {
        let c = cmd_certify(&cfg(), "x -> x + y^2; y -> y; z -> z", "x -> x - y^2; y -> y; z -> z");
        assert_eq!(c.code, 0);
        let c = cmd_certify(&cfg(), "x -> x + y^2; y -> y; z -> z", "x -> x + y^2; y -> y; z -> z");
        assert_eq!(c.code, EXIT_NOT_INVERSE);
        assert!(c.stdout.contains("2*y^2"), "{}", c.stdout);
        let c = cmd_certify(&cfg(), "x -> x; y -> y; z -> z", "x -> x; y -> y; t -> t");
        assert_eq!(c.code, 2);
    }

    #[test]
    fn factor_outputs() {
        let c = cmd_factor(&cfg(), r#"{"kind":"smith","a":"1","b":"1","h":"t"}"#);
        assert_eq!(c.code, 0, "{}", c.stderr);
        let doc: super::super::json::TameWordJson = serde_json::from_str(&c.stdout).unwrap();
        assert_eq!(doc.steps.len(), 6);
        assert!(doc.verified);
        assert_eq!(doc.target, "x -> 2*x + y; y -> -x; z -> z; t -> t");
        let c = cmd_factor(&cfg(), r#"{"kind":"anick","g":"t"}"#);
        assert_eq!(c.code, 0);
        let c = cmd_factor(
            &cfg(),
            r#"{"kind":"product","pieces":[{"kind":"linear",
               "matrix":[["1 + zl*zr","zl^2"],["-zr^2","1 - zl*zr"]],
               "inverse":[["1 - zl*zr","-zl^2"],["zr^2","1 + zl*zr"]]}]}"#,
        );
        assert_eq!(c.code, 4, "{}", c.stderr);
        assert_eq!(cmd_factor(&cfg(), "{").code, 2);
    }

    #[test]
    fn membership_outputs() {
        let json = SessionConfig {
            json: true,
            ..cfg()
        };
        let c = cmd_membership(&json, "x*z - z*y", "(x*z - z*y)^2 + z*(x*z - z*y) - (x*z - z*y)*z", 4);
        assert_eq!(c.code, 0);
        let doc: MembershipJson = serde_json::from_str(&c.stdout).unwrap();
        assert!(doc.member && doc.preconditions_pass);
        assert_eq!(doc.terms.len(), 3);
        assert!(check_membership_json(&doc, &Alphabet::xyz()).unwrap());
        let c = cmd_membership(&cfg(), "x*z - z*y", "x", 6);
        assert_eq!((c.code, c.stdout.as_str()), (0, "not a member at degree bound 6\n"));
        assert_eq!(cmd_membership(&cfg(), "x*z - z*y", "x^3", 2).code, 2);
        assert_eq!(cmd_membership(&cfg(), "x", "0", 24).code, 6);
    }
}
