//! Exact base-k arithmetic for the tree: repunits, the height index,
//! digit expansions, the k-adic valuation and the stable configuration.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer used for chip and fire counts.
pub type Nat = BigUint;

/// Branching factor of the tree. Always at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct TreeParams {
    k: u32,
}

impl TreeParams {
    pub fn new(k: u64) -> Result<Self> {
        match u32::try_from(k) {
            Ok(k) if k >= 2 => Ok(TreeParams { k }),
            _ => Err(Error::InvalidBranching(k)),
        }
    }

    #[inline]
    pub fn k(self) -> u32 {
        self.k
    }

    pub fn k_nat(self) -> Nat {
        Nat::from(self.k)
    }
}

impl TryFrom<u64> for TreeParams {
    type Error = Error;

    fn try_from(k: u64) -> Result<Self> {
        TreeParams::new(k)
    }
}

impl From<TreeParams> for u64 {
    fn from(t: TreeParams) -> u64 {
        u64::from(t.k)
    }
}

impl fmt::Display for TreeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={}", self.k)
    }
}

/// `k^e` as a big integer.
pub fn pow(k: u32, e: usize) -> Nat {
    num_traits::pow(Nat::from(k), e)
}

/// `(k^n - 1)/(k - 1) = 1 + k + ... + k^(n-1)`, built by multiply-add.
pub fn repunit(n: usize, tree: TreeParams) -> Nat {
    let k = tree.k_nat();
    let mut acc = Nat::zero();
    for _ in 0..n {
        acc = acc * &k + 1u32;
    }
    acc
}

/// Returns `(n, repunit(n, k))` for the unique `n` with
/// `repunit(n) <= chips < repunit(n + 1)`.
pub(crate) fn height_and_base(chips: &Nat, tree: TreeParams) -> Result<(usize, Nat)> {
    if chips.is_zero() {
        return Err(Error::ZeroChips);
    }
    let k = tree.k_nat();
    let mut n = 0usize;
    let mut rep = Nat::zero();
    let mut power = Nat::one();
    loop {
        let next = &rep + &power;
        if &next > chips {
            return Ok((n, rep));
        }
        rep = next;
        power *= &k;
        n += 1;
    }
}

/// Height index `n = floor(log_k(N(k-1) + 1))`, found by exact comparison
/// against successive repunits.
pub fn height_index(chips: &Nat, tree: TreeParams) -> Result<usize> {
    height_and_base(chips, tree).map(|(n, _)| n)
}

/// Fixed-width digit string, most significant digit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitString {
    radix: u32,
    digits: Vec<u32>,
}

impl DigitString {
    pub fn new(radix: u32, digits: Vec<u32>) -> Result<Self> {
        if radix < 2 {
            return Err(Error::InvalidRadix(radix));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= radix) {
            return Err(Error::InvalidArgument(format!(
                "digit {d} out of range for radix {radix}"
            )));
        }
        Ok(DigitString { radix, digits })
    }

    pub fn radix(&self) -> u32 {
        self.radix
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn value(&self) -> Nat {
        let radix = Nat::from(self.radix);
        self.digits
            .iter()
            .fold(Nat::zero(), |acc, &d| acc * &radix + d)
    }

    /// Digit at `position` counted from the least significant end.
    pub fn from_right(&self, position: usize) -> Option<u32> {
        self.digits.iter().rev().nth(position).copied()
    }
}

/// One character per digit (`0-9a-z`) up to radix 36; above that, decimal
/// digit values joined by `:`.
impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radix > 36 {
            for (i, d) in self.digits.iter().enumerate() {
                if i > 0 {
                    f.write_str(":")?;
                }
                write!(f, "{d}")?;
            }
            return Ok(());
        }
        for &d in &self.digits {
            let c = char::from_digit(d, 36).ok_or(fmt::Error)?;
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Base-`radix` expansion of `x` padded with leading zeros to exactly `width` digits.
pub fn to_base(x: &Nat, radix: u32, width: usize) -> Result<DigitString> {
    if radix < 2 {
        return Err(Error::InvalidRadix(radix));
    }
    let r = Nat::from(radix);
    let mut digits = vec![0u32; width];
    let mut rest = x.clone();
    for slot in digits.iter_mut().rev() {
        if rest.is_zero() {
            break;
        }
        let (q, d) = rest.div_rem(&r);
        *slot = d.to_u32().expect("digit below radix");
        rest = q;
    }
    if !rest.is_zero() {
        return Err(Error::WidthTooSmall {
            value: x.to_string(),
            radix,
            width,
        });
    }
    Ok(DigitString { radix, digits })
}

/// Largest `e` with `base^e | x`.
pub fn valuation(x: &Nat, base: u32) -> Result<usize> {
    if base < 2 {
        return Err(Error::InvalidRadix(base));
    }
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let b = Nat::from(base);
    let mut e = 0;
    let mut rest = x.clone();
    loop {
        let (q, r) = rest.div_rem(&b);
        if !r.is_zero() {
            return Ok(e);
        }
        rest = q;
        e += 1;
    }
}

/// Unique stable configuration reached from `N` chips at the root.
///
/// Every vertex on layer `i + 1` holds `chips[i]` chips; layers past
/// `height` are empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StableConfig {
    pub k: TreeParams,
    pub height: usize,
    pub chips: Vec<u32>,
}

impl StableConfig {
    /// `sum_i chips[i] * k^i`, which equals the starting pile.
    pub fn total(&self) -> Nat {
        let k = self.k.k_nat();
        self.chips
            .iter()
            .rev()
            .fold(Nat::zero(), |acc, &c| acc * &k + c)
    }

    pub fn chips_on(&self, layer_index: usize) -> Option<u32> {
        self.chips.get(layer_index).copied()
    }
}

/// Stable configuration for `N >= 1` chips: `c_i = a_i + 1` where `a` is the
/// `n`-digit base-k expansion of `N - repunit(n, k)`.
pub fn stable_config(chips: &Nat, tree: TreeParams) -> Result<StableConfig> {
    let (height, base) = height_and_base(chips, tree)?;
    let excess = to_base(&(chips - base), tree.k(), height)?;
    let config = StableConfig {
        k: tree,
        height,
        chips: excess.digits().iter().rev().map(|&a| a + 1).collect(),
    };
    debug_assert!(config.chips.iter().all(|&c| (1..=tree.k()).contains(&c)));
    debug_assert_eq!(&config.total(), chips);
    Ok(config)
}
