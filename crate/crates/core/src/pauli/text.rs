use std::fmt::Write as _;
use std::io::Read;

use num_complex::Complex;

use super::sum::PauliSum;
use super::term::PauliTerm;
use crate::error::{Error, Result};
use crate::Real;

fn parse_number<T: Real>(tok: &str, line: usize) -> Result<T> {
    tok.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .map(T::of)
        .ok_or_else(|| Error::Parse {
            line,
            msg: format!("non-numeric coefficient {tok:?}"),
        })
}

/// Parses the Hamiltonian text format.
///
/// One term per line, `<re> [<im>] <LABEL>`, `#` starts a comment. The label
/// length fixes the register width; the rightmost character is qubit 0.
/// Duplicated labels merge. An input without terms yields an empty sum on a
/// zero-width register.
pub fn parse_pauli_sum<T: Real>(text: &str) -> Result<PauliSum<T>> {
    let mut n_qubits: Option<usize> = None;
    let mut terms = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        let (label, nums) = match toks.split_last() {
            Some((label, nums)) if (1..=2).contains(&nums.len()) => (*label, nums),
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: "expected `<re> [<im>] <label>`".into(),
                })
            }
        };
        let re = parse_number::<T>(nums[0], line)?;
        let im = match nums.get(1) {
            Some(tok) => parse_number::<T>(tok, line)?,
            None => T::zero(),
        };
        let width = label.chars().count();
        match n_qubits {
            None => n_qubits = Some(width),
            Some(n) if n != width => {
                return Err(Error::Parse {
                    line,
                    msg: format!("label {label:?} has {width} qubits, expected {n}"),
                })
            }
            _ => {}
        }
        if width == 0 || width > 63 {
            return Err(Error::Parse {
                line,
                msg: format!("label width {width} out of range"),
            });
        }
        let term = PauliTerm::from_label(label, Complex::new(re, im)).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { line, msg },
            other => other,
        })?;
        terms.push(term);
    }
    PauliSum::from_terms(n_qubits.unwrap_or(0), terms)
}

pub fn read_pauli_sum<T: Real, R: Read>(mut reader: R) -> Result<PauliSum<T>> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_pauli_sum(&text)
}

impl<T: Real> PauliSum<T> {
    /// Serializes in the text format, terms ordered by `(z_mask, x_mask)`
    /// with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in self.terms() {
            let c = t.coeff();
            if c.im == T::zero() {
                let _ = writeln!(out, "{:.16e} {}", c.re, t.label());
            } else {
                let _ = writeln!(out, "{:.16e} {:.16e} {}", c.re, c.im, t.label());
            }
        }
        out
    }
}
