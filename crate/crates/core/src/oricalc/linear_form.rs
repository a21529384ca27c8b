use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Dimension variable `h_k`, optionally tagged with a branch label.
/// Branch 0 is the untagged default.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub branch: u8,
    pub k: i64,
}

impl Var {
    pub fn h(k: i64) -> Self {
        Var { branch: 0, k }
    }

    pub fn on(branch: u8, k: i64) -> Self {
        Var { branch, k }
    }
}

pub(crate) fn indexed(letter: char, k: i64, branch: u8) -> String {
    let idx = if k < 0 { format!("({k})") } else { k.to_string() };
    if branch == 0 {
        format!("{letter}{idx}")
    } else {
        format!("{letter}{idx}^({branch})")
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&indexed('h', self.k, self.branch))
    }
}

/// Integer linear form `Σ c_v v + c` in the dimension variables. Zero
/// coefficients are never stored, so equality is structural.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LinearForm {
    coeffs: BTreeMap<Var, i64>,
    constant: i64,
}

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        Self::term(1, v)
    }

    pub fn term(c: i64, v: Var) -> Self {
        let mut f = Self::zero();
        f.add_term(c, v);
        f
    }

    pub fn constant(c: i64) -> Self {
        LinearForm { coeffs: BTreeMap::new(), constant: c }
    }

    /// `Σ c_i h_{k_i}` on one branch.
    pub fn from_terms(branch: u8, terms: &[(i64, i64)]) -> Self {
        let mut f = Self::zero();
        for &(c, k) in terms {
            f.add_term(c, Var::on(branch, k));
        }
        f
    }

    pub fn add_term(&mut self, c: i64, v: Var) {
        if c == 0 {
            return;
        }
        let e = self.coeffs.entry(v).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&v);
        }
    }

    pub fn coeff(&self, v: Var) -> i64 {
        self.coeffs.get(&v).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> i64 {
        self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant == 0
    }

    pub fn terms(&self) -> impl Iterator<Item = (Var, i64)> + '_ {
        self.coeffs.iter().map(|(v, c)| (*v, *c))
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.coeffs.keys().copied()
    }

    /// Replace every occurrence of `v` by `with`.
    pub fn substitute(&self, v: Var, with: &LinearForm) -> LinearForm {
        let c = self.coeff(v);
        if c == 0 {
            return self.clone();
        }
        let mut out = self.clone();
        out.coeffs.remove(&v);
        out + with.clone() * c
    }

    pub fn eval(&self, assign: &BTreeMap<Var, i64>) -> Result<i64> {
        self.coeffs.iter().try_fold(self.constant, |acc, (v, c)| {
            assign
                .get(v)
                .map(|x| acc + c * x)
                .ok_or_else(|| Error::MissingVariable(v.to_string()))
        })
    }
}

impl Add for LinearForm {
    type Output = LinearForm;
    fn add(mut self, rhs: LinearForm) -> LinearForm {
        self += rhs;
        self
    }
}

impl AddAssign for LinearForm {
    fn add_assign(&mut self, rhs: LinearForm) {
        for (v, c) in rhs.coeffs {
            self.add_term(c, v);
        }
        self.constant += rhs.constant;
    }
}

impl Neg for LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        self * -1
    }
}

impl Sub for LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: LinearForm) -> LinearForm {
        self + (-rhs)
    }
}

impl Mul<i64> for LinearForm {
    type Output = LinearForm;
    fn mul(self, k: i64) -> LinearForm {
        if k == 0 {
            return LinearForm::zero();
        }
        LinearForm {
            coeffs: self.coeffs.into_iter().map(|(v, c)| (v, c * k)).collect(),
            constant: self.constant * k,
        }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts: Vec<(i64, String)> = self.coeffs.iter().map(|(v, c)| (*c, v.to_string())).collect();
        if self.constant != 0 {
            parts.push((self.constant, String::new()));
        }
        for (n, (c, name)) in parts.iter().enumerate() {
            let mag = c.abs();
            let body = match (mag, name.is_empty()) {
                (_, true) => mag.to_string(),
                (1, false) => name.clone(),
                _ => format!("{mag}{name}"),
            };
            match (n, *c < 0) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
