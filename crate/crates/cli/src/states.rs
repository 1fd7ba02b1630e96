//! Input states: `*`-separated factors, each a named state or an occupation
//! list, tensored left to right (modes concatenate).

use bsf_core::bell::{alpha, bell_state, beta, BellState};
use bsf_core::fock::{FockState, StateVector};

use crate::circuit::ParseError;

pub const NAMED: &[&str] = &["psi+", "psi-", "phi+", "phi-", "beta+", "beta-", "alpha"];

fn named(name: &str) -> Option<StateVector> {
    match name {
        "alpha" => Some(alpha()),
        "beta+" => Some(beta(true)),
        "beta-" => Some(beta(false)),
        other => other.parse::<BellState>().ok().map(bell_state),
    }
}

pub fn parse_state(src: &str) -> Result<StateVector, ParseError> {
    let mut out: Option<StateVector> = None;
    let mut column = 1;
    for factor in src.split('*') {
        let lead = factor.len() - factor.trim_start().len();
        let text = factor.trim();
        let at = column + factor[..lead].chars().count();
        let err = |message: String| ParseError { line: 1, column: at, message };
        let state = if text.is_empty() {
            return Err(err("empty state factor".into()));
        } else if let Some(s) = named(text) {
            s
        } else if text.starts_with(|c: char| c.is_ascii_digit() || c == '|') {
            let fock: FockState = text.parse().map_err(|e| err(format!("invalid occupation list '{text}': {e}")))?;
            StateVector::basis(fock)
        } else {
            return Err(err(format!("unknown state '{text}' (named states: {})", NAMED.join(", "))));
        };
        out = Some(match out {
            None => state,
            Some(acc) => acc.tensor(&state),
        });
        column += factor.chars().count() + 1;
    }
    Ok(out.expect("split yields at least one factor"))
}
