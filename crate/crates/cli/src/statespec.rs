//! The tiny textual state language.
//!
//! Grammar (no nesting except inside `mix`):
//!
//! ```text
//! spec    := name | name "-bar" | family ":" args | "basis:" digits
//!          | "mix:" weighted ("+" weighted)* | path-to.json
//! family  := "lambda" | "lambda-bar" | "sym" | "antisym" | "rho"
//! args    := key "=" integer ("," key "=" integer)*
//! weighted:= float "*" spec          (mix may not nest)
//! ```
//!
//! `alpha`, `beta`, `gamma` (and their `-bar` partners) are shorthand for the
//! three-particle eigenstates. `basis:123` infers `n` from the digit count and
//! `d` from the largest digit (at least `n`). Mix weights are normalized by
//! their sum.

use homsim_core::{Ensemble, PureState};

use crate::formats::StateDoc;

/// A parsed spec: one pure state or one mixture.
#[derive(Debug, Clone)]
pub enum ParsedState {
    Pure(PureState),
    Mixed(Ensemble),
}

impl ParsedState {
    pub fn doc(&self) -> StateDoc {
        match self {
            ParsedState::Pure(psi) => StateDoc::Pure(psi.into()),
            ParsedState::Mixed(rho) => StateDoc::Ensemble(rho.into()),
        }
    }
}

/// Parse failure with the byte offset where it happened.
#[derive(Debug)]
pub struct SpecError {
    pub position: usize,
    pub message: String,
}

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for SpecError {}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, SpecError> {
    Err(SpecError {
        position,
        message: message.into(),
    })
}

pub fn parse(input: &str) -> Result<ParsedState, SpecError> {
    let input = input.trim();
    if input.is_empty() {
        return err(0, "empty state spec");
    }
    if let Some(rest) = input.strip_prefix("mix:") {
        return parse_mix(rest, 4);
    }
    if input.ends_with(".json") {
        return parse_file(input);
    }
    parse_atom(input, 0)
}

fn parse_atom(spec: &str, offset: usize) -> Result<ParsedState, SpecError> {
    let (name, args) = match spec.split_once(':') {
        Some((name, args)) => (name, Some(args)),
        None => (spec, None),
    };
    let args_offset = offset + name.len() + 1;
    let lift = |r: Result<PureState, homsim_core::Error>| match r {
        Ok(psi) => Ok(ParsedState::Pure(psi)),
        Err(e) => err(offset, e.to_string()),
    };
    match name {
        "alpha" | "beta" | "gamma" | "alpha-bar" | "beta-bar" | "gamma-bar" => {
            if args.is_some() {
                return err(args_offset, format!("'{name}' takes no arguments"));
            }
            let k = match name.trim_end_matches("-bar") {
                "alpha" => 0,
                "beta" => 1,
                _ => 2,
            };
            lift(if name.ends_with("-bar") {
                PureState::barred_eigenstate(3, k)
            } else {
                PureState::cyclic_eigenstate(3, k)
            })
        }
        "lambda" | "lambda-bar" => {
            let (n, k) = parse_nk(args, args_offset)?;
            lift(if name == "lambda" {
                PureState::cyclic_eigenstate(n, k)
            } else {
                PureState::barred_eigenstate(n, k)
            })
        }
        "sym" | "antisym" => {
            let n = parse_n(args, args_offset)?;
            lift(if name == "sym" {
                PureState::symmetric(n)
            } else {
                PureState::antisymmetric(n)
            })
        }
        "basis" => {
            let digits = args.unwrap_or("");
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit() && b != b'0') {
                return err(args_offset, "basis wants nonzero digits, e.g. basis:123");
            }
            let modes: Vec<u8> = digits.bytes().map(|b| b - b'0').collect();
            let n = modes.len();
            let d = modes.iter().copied().max().unwrap() as usize;
            lift(PureState::basis(n, n.max(d), modes))
        }
        "rho" => {
            let (n, k) = parse_nk(args, args_offset)?;
            match Ensemble::rho_representative(n, k) {
                Ok(rho) => Ok(ParsedState::Mixed(rho)),
                Err(e) => err(offset, e.to_string()),
            }
        }
        "mix" => err(offset, "mix may not be nested"),
        _ => err(offset, format!("unknown state name '{name}'")),
    }
}

fn parse_mix(body: &str, offset: usize) -> Result<ParsedState, SpecError> {
    let mut members: Vec<(f64, PureState)> = Vec::new();
    let mut at = offset;
    for part in body.split('+') {
        let (weight_text, spec) = part
            .split_once('*')
            .ok_or(SpecError {
                position: at,
                message: "mix member needs the form WEIGHT*SPEC".into(),
            })?;
        let weight: f64 = weight_text.trim().parse().map_err(|_| SpecError {
            position: at,
            message: format!("bad weight '{}'", weight_text.trim()),
        })?;
        if !(weight > 0.0) {
            return err(at, format!("weight {weight} must be positive"));
        }
        let spec_offset = at + weight_text.len() + 1;
        match parse_atom(spec.trim(), spec_offset)? {
            ParsedState::Pure(psi) => members.push((weight, psi)),
            ParsedState::Mixed(rho) => {
                for (w, psi) in rho.members() {
                    members.push((weight * w, psi.clone()));
                }
            }
        }
        at += part.len() + 1;
    }
    let total: f64 = members.iter().map(|(w, _)| w).sum();
    let members = members.into_iter().map(|(w, s)| (w / total, s)).collect();
    match Ensemble::new(members) {
        Ok(rho) => Ok(ParsedState::Mixed(rho)),
        Err(e) => err(offset, e.to_string()),
    }
}

fn parse_file(path: &str) -> Result<ParsedState, SpecError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SpecError {
            position: 0,
            message: format!("cannot read {path}: {e}"),
        })?;
    let doc: StateDoc = serde_json::from_str(&text).map_err(|e| SpecError {
        position: 0,
        message: format!("{path}: {e}"),
    })?;
    let built = match &doc {
        StateDoc::Pure(state) => state.build().map(ParsedState::Pure),
        StateDoc::Ensemble(rho) => rho.build().map(ParsedState::Mixed),
    };
    built.map_err(|e| SpecError {
        position: 0,
        message: format!("{path}: {e}"),
    })
}

fn parse_n(args: Option<&str>, offset: usize) -> Result<usize, SpecError> {
    match parse_args(args, offset)? {
        [Some(n), None] => Ok(n),
        _ => err(offset, "expected exactly n=N"),
    }
}

fn parse_nk(args: Option<&str>, offset: usize) -> Result<(usize, usize), SpecError> {
    match parse_args(args, offset)? {
        [Some(n), Some(k)] => Ok((n, k)),
        _ => err(offset, "expected n=N,k=K"),
    }
}

/// Reads `n=…` and `k=…` in either order; absent keys stay `None`.
fn parse_args(args: Option<&str>, offset: usize) -> Result<[Option<usize>; 2], SpecError> {
    let args = match args {
        Some(a) if !a.is_empty() => a,
        _ => return Ok([None, None]),
    };
    let mut out = [None, None];
    let mut at = offset;
    for pair in args.split(',') {
        let (key, value) = pair
            .split_once('=')
            .ok_or(SpecError {
                position: at,
                message: format!("expected key=value, got '{pair}'"),
            })?;
        let slot = match key.trim() {
            "n" => 0,
            "k" => 1,
            other => return err(at, format!("unknown argument '{other}'")),
        };
        if out[slot].is_some() {
            return err(at, format!("duplicate argument '{}'", key.trim()));
        }
        let parsed: usize = value.trim().parse().map_err(|_| SpecError {
            position: at + key.len() + 1,
            message: format!("bad integer '{}'", value.trim()),
        })?;
        out[slot] = Some(parsed);
        at += pair.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use homsim_core::ModeAssignment;

    #[test]
    fn canonical_names() {
        for name in ["alpha", "beta", "gamma", "alpha-bar", "beta-bar", "gamma-bar"] {
            match parse(name).unwrap() {
                ParsedState::Pure(psi) => {
                    assert_eq!(psi.particle_count(), 3);
                    assert_eq!(psi.term_count(), 3);
                }
                other => panic!("{name}: {other:?}"),
            }
        }
    }

    #[test]
    fn named_and_parameterized_forms_agree() {
        let by_name = match parse("beta-bar").unwrap() {
            ParsedState::Pure(psi) => psi,
            _ => unreachable!(),
        };
        let by_args = match parse("lambda-bar:n=3,k=1").unwrap() {
            ParsedState::Pure(psi) => psi,
            _ => unreachable!(),
        };
        assert!((by_name.inner(&by_args).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn basis_infers_dimensions() {
        match parse("basis:132").unwrap() {
            ParsedState::Pure(psi) => {
                assert_eq!((psi.particle_count(), psi.mode_count()), (3, 3));
                assert!((psi.amplitude(&ModeAssignment::new([1, 3, 2])).norm() - 1.0).abs() < 1e-12);
            }
            _ => unreachable!(),
        }
        match parse("basis:14").unwrap() {
            ParsedState::Pure(psi) => {
                assert_eq!((psi.particle_count(), psi.mode_count()), (2, 4));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn mix_normalizes_weights_and_flattens_mixtures() {
        match parse("mix:1*rho:n=3,k=1+1*rho:n=3,k=2").unwrap() {
            ParsedState::Mixed(rho) => {
                assert_eq!(rho.len(), 4);
                for (w, _) in rho.members() {
                    assert!((w - 0.25).abs() < 1e-12);
                }
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn errors_carry_positions() {
        assert!(parse("").is_err());
        assert!(parse("nope").is_err());
        assert!(parse("lambda:n=3").is_err());
        assert!(parse("lambda:n=3,k=7").is_err());
        assert!(parse("basis:104").is_err());
        assert!(parse("mix:0.5*alpha").is_err() == false);
        let e = parse("mix:x*alpha+0.5*beta").unwrap_err();
        assert!(e.to_string().contains("position"));
        assert!(parse("mix:1*mix:1*alpha").is_err());
    }
}
