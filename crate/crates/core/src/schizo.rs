//! Exact digits of `sqrt(x)` and `1/sqrt(x)`, and the runs of repeated
//! digits that make square roots of `a(n, k)` for odd `n` look rational
//! for a while before turning chaotic.
//!
//! Digits are always truncated, never rounded, so raising the precision only
//! appends digits.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas::a_seq;
use crate::numerics::{pow, to_base, DigitString, Nat, TreeParams};

/// Integer square root by Newton iteration: the `s` with `s^2 <= y < (s+1)^2`.
pub fn isqrt(y: &Nat) -> Nat {
    if y.is_zero() {
        return Nat::zero();
    }
    // 2^ceil(bits/2) is already >= sqrt(y); the iteration then decreases
    // monotonically until it reaches the floor.
    let mut x = Nat::one() << y.bits().div_ceil(2);
    loop {
        let next = (&x + y / &x) >> 1u32;
        if next >= x {
            return x;
        }
        x = next;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitDump {
    pub subject: String,
    pub int_part: DigitString,
    pub frac_part: DigitString,
    pub precision: usize,
}

impl DigitDump {
    fn from_scaled(subject: String, scaled: Nat, radix: u32, precision: usize) -> Self {
        let (int, frac) = scaled.div_rem(&pow(radix, precision));
        let int_width = int_digit_count(&int, radix);
        DigitDump {
            subject,
            int_part: to_base(&int, radix, int_width).expect("width fits"),
            frac_part: to_base(&frac, radix, precision).expect("below radix^precision"),
            precision,
        }
    }

    pub fn radix(&self) -> u32 {
        self.frac_part.radix()
    }
}

impl fmt::Display for DigitDump {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.int_part, self.frac_part)
    }
}

fn int_digit_count(x: &Nat, radix: u32) -> usize {
    if x.is_zero() {
        1
    } else {
        x.to_radix_be(radix).len()
    }
}

fn check_args(x: &Nat, precision: usize, radix: u32) -> Result<()> {
    if x.is_zero() {
        return Err(Error::InvalidArgument("x must be at least 1".into()));
    }
    if precision == 0 {
        return Err(Error::InvalidArgument(
            "precision must be at least 1".into(),
        ));
    }
    if !(2..=36).contains(&radix) {
        return Err(Error::InvalidRadix(radix));
    }
    Ok(())
}

/// `floor(sqrt(x) * radix^p)` split at the radix point.
pub fn sqrt_digits_in(x: &Nat, precision: usize, radix: u32) -> Result<DigitDump> {
    check_args(x, precision, radix)?;
    let scaled = isqrt(&(x * pow(radix, 2 * precision)));
    Ok(DigitDump::from_scaled(
        format!("sqrt({x})"),
        scaled,
        radix,
        precision,
    ))
}

pub fn sqrt_digits(x: &Nat, precision: usize) -> Result<DigitDump> {
    sqrt_digits_in(x, precision, 10)
}

/// `floor(radix^p / sqrt(x))`, computed as `isqrt(floor(radix^(2p) / x))`;
/// flooring inside the root does not change the result.
pub fn inv_sqrt_digits_in(x: &Nat, precision: usize, radix: u32) -> Result<DigitDump> {
    check_args(x, precision, radix)?;
    let scaled = isqrt(&(pow(radix, 2 * precision) / x));
    Ok(DigitDump::from_scaled(
        format!("1/sqrt({x})"),
        scaled,
        radix,
        precision,
    ))
}

pub fn inv_sqrt_digits(x: &Nat, precision: usize) -> Result<DigitDump> {
    inv_sqrt_digits_in(x, precision, 10)
}

/// A maximal run of one digit in the fractional part. `start` is 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Block {
    pub digit: u32,
    pub start: usize,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct BlockReport {
    pub blocks: Vec<Block>,
}

/// Default minimum run length for [`block_report`].
pub const DEFAULT_MIN_RUN: usize = 4;

/// Maximal runs of equal fractional digits with length at least `min_run`, in order.
pub fn block_report(dump: &DigitDump, min_run: usize) -> Result<BlockReport> {
    if min_run < 2 {
        return Err(Error::InvalidArgument("min_run must be at least 2".into()));
    }
    let digits = dump.frac_part.digits();
    let mut blocks = Vec::new();
    let mut start = 0;
    while start < digits.len() {
        let d = digits[start];
        let len = digits[start..].iter().take_while(|&&x| x == d).count();
        if len >= min_run {
            blocks.push(Block {
                digit: d,
                start,
                length: len,
            });
        }
        start += len;
    }
    Ok(BlockReport { blocks })
}

/// JSON form `{subject, digits, blocks}`.
pub fn dump_json(dump: &DigitDump, report: &BlockReport) -> serde_json::Value {
    serde_json::json!({
        "subject": dump.subject,
        "digits": dump.to_string(),
        "blocks": report.blocks,
    })
}

#[derive(Debug, Clone)]
pub struct SurveyEntry {
    pub n: usize,
    pub value: Nat,
    pub root: (DigitDump, BlockReport),
    pub inverse: (DigitDump, BlockReport),
}

/// Digits and blocks of `sqrt(a(n, k))` and `1/sqrt(a(n, k))` for every odd
/// `n <= n_max`. Purely observational.
pub fn schizo_survey(
    tree: TreeParams,
    n_max: usize,
    precision: usize,
    min_run: usize,
    radix: u32,
) -> Result<Vec<SurveyEntry>> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    (1..=n_max)
        .step_by(2)
        .map(|n| {
            let value = a_seq(n, tree);
            let root = sqrt_digits_in(&value, precision, radix)?;
            let inverse = inv_sqrt_digits_in(&value, precision, radix)?;
            let root_blocks = block_report(&root, min_run)?;
            let inverse_blocks = block_report(&inverse, min_run)?;
            Ok(SurveyEntry {
                n,
                value,
                root: (root, root_blocks),
                inverse: (inverse, inverse_blocks),
            })
        })
        .collect()
}
