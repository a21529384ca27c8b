//! Symbolic identity checks. Exponents are linear forms in free dimension
//! variables, so a passing check holds for every module in the hearts
//! involved, not just sampled dimension vectors.

use std::collections::BTreeSet;

use serde::Serialize;

use super::character::{
    complex_character, degree_character, geometric_char_at, koszul_rewrite, ori_char, ori_char_on, split_branch,
    DetCharacter, Direction,
};
use crate::error::{Error, Result};
use crate::quiver::Side;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffEntry {
    pub step: String,
    pub symbol: String,
    pub lhs_form: String,
    pub rhs_form: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessEntry {
    pub step: String,
    pub symbol: String,
    pub form: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProofReport {
    pub identity: String,
    pub status: Status,
    pub window: [i64; 2],
    pub diff: Vec<DiffEntry>,
    pub witness: Vec<WitnessEntry>,
    pub version: &'static str,
    pub conventions: std::collections::BTreeMap<&'static str, &'static str>,
}

impl ProofReport {
    fn new(identity: &str, window: [i64; 2]) -> Self {
        ProofReport {
            identity: identity.to_string(),
            status: Status::Pass,
            window,
            diff: Vec::new(),
            witness: Vec::new(),
            version: crate::VERSION,
            conventions: crate::conventions(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Record `lhs = rhs` for one step; every differing symbol goes in the diff.
    fn compare(&mut self, step: &str, lhs: &DetCharacter, rhs: &DetCharacter) {
        let symbols: BTreeSet<_> = lhs.symbols().chain(rhs.symbols()).collect();
        for s in symbols {
            let (l, r) = (lhs.exponent(s), rhs.exponent(s));
            if l == r {
                self.witness.push(WitnessEntry { step: step.to_string(), symbol: s.to_string(), form: l.to_string() });
            } else {
                self.status = Status::Fail;
                self.diff.push(DiffEntry {
                    step: step.to_string(),
                    symbol: s.to_string(),
                    lhs_form: l.to_string(),
                    rhs_form: r.to_string(),
                });
            }
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{}: {} on [{}, {}]\n", self.identity, status_word(self.status), self.window[0], self.window[1]);
        if self.diff.is_empty() {
            for w in &self.witness {
                out.push_str(&format!("  {:<14} {:<12} {}\n", w.step, w.symbol, w.form));
            }
        } else {
            for d in &self.diff {
                out.push_str(&format!("  {:<14} {:<12} lhs {}  rhs {}\n", d.step, d.symbol, d.lhs_form, d.rhs_form));
            }
        }
        out
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
    }
}

fn require(lo: i64, hi: i64, strict: bool) -> Result<()> {
    if hi < lo || (strict && hi == lo) {
        let need = if strict { "max > min" } else { "max >= min" };
        return Err(Error::InvalidRange(lo, hi, need.to_string()));
    }
    Ok(())
}

/// `koszul_rewrite(ori(n), n, up) = ori(n + 1)` for every `n` in `[lo, hi)`.
pub fn verify_theorem3(lo: i64, hi: i64) -> Result<ProofReport> {
    verify_theorem3_with(lo, hi, ori_char)
}

pub fn verify_theorem3_with(lo: i64, hi: i64, ori: impl Fn(i64) -> DetCharacter) -> Result<ProofReport> {
    require(lo, hi, true)?;
    let mut r = ProofReport::new("theorem3", [lo, hi]);
    for n in lo..hi {
        let lhs = koszul_rewrite(&ori(n), n, Direction::Up);
        r.compare(&format!("{n}->{}", n + 1), &lhs, &ori(n + 1));
    }
    Ok(r)
}

/// Character of the Beilinson-side complex equals the orientation character.
pub fn verify_theorem4(lo: i64, hi: i64) -> Result<ProofReport> {
    require(lo, hi, false)?;
    let mut r = ProofReport::new("theorem4", [lo, hi]);
    for n in lo..=hi {
        r.compare(&format!("heart {n}"), &geometric_char_at(n), &ori_char(n));
    }
    Ok(r)
}

/// The full self-Ext complex on Y has character `2·ori(n)`, and its
/// outer terms cancel.
pub fn verify_square_root(lo: i64, hi: i64) -> Result<ProofReport> {
    require(lo, hi, false)?;
    let mut r = ProofReport::new("square-root", [lo, hi]);
    for n in lo..=hi {
        let step = format!("heart {n}");
        r.compare(&step, &complex_character(Side::Y, n, 0, 0), &(ori_char(n) * 2));
        let outer = degree_character(Side::Y, 0, n, 0, 0) - degree_character(Side::Y, 3, n, 0, 0);
        r.compare(&format!("{step} outer"), &outer, &DetCharacter::zero());
    }
    Ok(r)
}

/// Branches 1 and 3 extend to branch 2. The orientation character of the
/// middle term, minus those of the ends, equals the character of the mixed
/// complex `RHom(M₁, M₃)`.
pub fn verify_cocycle(lo: i64, hi: i64) -> Result<ProofReport> {
    verify_cocycle_with(lo, hi, |n| complex_character(Side::Y, n, 1, 3))
}

pub fn verify_cocycle_with(lo: i64, hi: i64, mixed: impl Fn(i64) -> DetCharacter) -> Result<ProofReport> {
    require(lo, hi, false)?;
    let mut r = ProofReport::new("cocycle", [lo, hi]);
    for n in lo..=hi {
        let lhs = split_branch(&ori_char_on(2, n), 2, 1, 3) - ori_char_on(1, n) - ori_char_on(3, n);
        r.compare(&format!("heart {n}"), &lhs, &mixed(n));
    }
    Ok(r)
}
