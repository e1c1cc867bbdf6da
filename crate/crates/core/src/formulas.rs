//! Fire counts in closed form and by recursion.
//!
//! Every quantity has at least two independent routes (a closed form over
//! the stable configuration and a recursion on `ceil(N/k) - 1`). The public
//! entry points that combine routes assert agreement; the individual routes
//! are exported so tests can compare them against each other and against
//! the simulation engine.
//!
//! Naming: for a pile of `N` chips, `vertex_fires(N, i)` is the number of
//! fires of each vertex on layer `i + 1`, `root_fires` is the layer-0 case and
//! `total_fires` sums over every vertex. The block forms reparameterize by
//! `m = ceil(N/k)`: `block_root_fires(m) = root_fires(mk)` and
//! `block_total_fires(m) = total_fires(mk)`; `root_fires_diff` and
//! `total_fires_diff` are their first differences.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{height_and_base, pow, repunit, stable_config, valuation, Nat, TreeParams};

fn exact_div(num: Nat, den: &Nat) -> Nat {
    let (q, r) = num.div_rem(den);
    assert!(r.is_zero(), "inexact division: remainder {r} modulo {den}");
    q
}

fn exact_div_signed(num: BigInt, den: &BigInt) -> Nat {
    let (q, r) = num.div_rem(den);
    assert!(r.is_zero(), "inexact division: remainder {r} modulo {den}");
    assert!(!q.is_negative(), "negative quotient {q}");
    q.to_biguint().expect("nonnegative")
}

fn signed(x: u64) -> BigInt {
    BigInt::from(x)
}

fn signed_pow(k: u32, e: usize) -> BigInt {
    BigInt::from_biguint(Sign::Plus, pow(k, e))
}

/// `ceil(N/k) - 1`, the pile each child subtree receives from the root.
/// Zero for `N = 0`.
fn child_pile(chips: &Nat, k: &Nat) -> Nat {
    if chips.is_zero() {
        Nat::zero()
    } else {
        (chips - 1u32) / k
    }
}

fn check_layer(index: usize, height: usize) -> Result<()> {
    if index < height {
        Ok(())
    } else {
        Err(Error::LayerOutOfRange { index, height })
    }
}

/// Fires of each vertex on layer `i + 1`:
/// `sum_{j=1}^{n-i-1} repunit(j) * c_{i+j}`.
pub fn vertex_fires(chips: &Nat, tree: TreeParams, i: usize) -> Result<Nat> {
    let config = stable_config(chips, tree)?;
    check_layer(i, config.height)?;
    let k = tree.k_nat();
    let mut rep = Nat::zero();
    let mut total = Nat::zero();
    for &c in &config.chips[i + 1..] {
        rep = rep * &k + 1u32;
        total += &rep * c;
    }
    Ok(total)
}

/// `f_i - f_{i+1}`: the stable chips below one layer-`(i+1)` vertex, divided by k.
pub fn fires_difference(chips: &Nat, tree: TreeParams, i: usize) -> Result<Nat> {
    let config = stable_config(chips, tree)?;
    check_layer(i + 1, config.height)?;
    let k = tree.k_nat();
    let mut scale = Nat::one();
    let mut total = Nat::zero();
    for &c in &config.chips[i + 1..] {
        total += &scale * c;
        scale *= &k;
    }
    Ok(total)
}

/// Layer fires via the root count of a smaller pile: the subtree of a
/// layer-`(i+1)` vertex behaves like a fresh tree whose digits are the top
/// `n - i` digits of the original excess.
pub fn vertex_fires_via_root(chips: &Nat, tree: TreeParams, i: usize) -> Result<Nat> {
    let (height, base) = height_and_base(chips, tree)?;
    check_layer(i, height)?;
    let shifted = (chips - base) / pow(tree.k(), i) + repunit(height - i, tree);
    Ok(root_fires(&shifted, tree))
}

/// Root fires in closed form, `(1/(k-1)) sum_{j=1}^{n-1} (k^j - 1) c_j`.
/// Zero for an empty pile.
pub fn root_fires(chips: &Nat, tree: TreeParams) -> Nat {
    if chips.is_zero() {
        return Nat::zero();
    }
    let config = stable_config(chips, tree).expect("nonzero pile");
    let k = tree.k_nat();
    let mut power = Nat::one();
    let mut sum = Nat::zero();
    for &c in &config.chips[1..] {
        power *= &k;
        sum += (&power - 1u32) * c;
    }
    exact_div(sum, &(k - 1u32))
}

/// Root fires by recursion: `f0(N) = (ceil(N/k) - 1) + f0(ceil(N/k) - 1)`, `f0(0) = 0`.
pub fn root_fires_rec(chips: &Nat, tree: TreeParams) -> Nat {
    let k = tree.k_nat();
    let mut total = Nat::zero();
    let mut pile = child_pile(chips, &k);
    while !pile.is_zero() {
        total += &pile;
        pile = child_pile(&pile, &k);
    }
    total
}

/// Total fires in closed form,
/// `(1/(k-1)^2) sum_{m=1}^{n-1} (m k^{m+1} - (m+1) k^m + 1) c_m`.
pub fn total_fires(chips: &Nat, tree: TreeParams) -> Nat {
    if chips.is_zero() {
        return Nat::zero();
    }
    let config = stable_config(chips, tree).expect("nonzero pile");
    let k = tree.k();
    let k_nat = tree.k_nat();
    let mut power = Nat::one();
    let mut sum = Nat::zero();
    for (m, &c) in config.chips.iter().enumerate().skip(1) {
        power *= &k_nat;
        // m k^{m+1} - (m+1) k^m + 1 = k^m (m (k - 1) - 1) + 1, never negative
        let coeff = &power * (Nat::from(m) * (k - 1) - 1u32) + 1u32;
        sum += coeff * c;
    }
    let km1 = Nat::from(k - 1);
    exact_div(sum, &(&km1 * &km1))
}

/// Total fires by recursion: `F(N) = f0(N) + k F(ceil(N/k) - 1)`, `F(0) = 0`.
pub fn total_fires_rec(chips: &Nat, tree: TreeParams) -> Nat {
    let k = tree.k_nat();
    // Unrolled: F(N) = sum_t k^t f0(pile_t) with pile_0 = N.
    let mut total = Nat::zero();
    let mut scale = Nat::one();
    let mut pile = chips.clone();
    while !pile.is_zero() {
        total += &scale * root_fires_rec(&pile, tree);
        scale *= &k;
        pile = child_pile(&pile, &k);
    }
    total
}

/// Fires on layer `i + 1` when `N = repunit(n, k)`:
/// `(k^{n-i} - k(n-i) + (n-i) - 1)/(k-1)^2`.
pub fn repunit_vertex_fires(n: usize, tree: TreeParams, i: usize) -> Result<Nat> {
    check_layer(i, n)?;
    let k = tree.k();
    let d = (n - i) as u64;
    let num = signed_pow(k, n - i) - signed(u64::from(k)) * d + d - 1;
    let km1 = signed(u64::from(k) - 1);
    Ok(exact_div_signed(num, &(&km1 * &km1)))
}

/// Root fires when `N = repunit(n, k)`: `(k^n - nk + n - 1)/(k-1)^2`.
pub fn repunit_root_fires(n: usize, tree: TreeParams) -> Nat {
    let k = tree.k();
    let n64 = n as u64;
    let num = signed_pow(k, n) - signed(n64 * u64::from(k)) + n64 - 1;
    let km1 = signed(u64::from(k) - 1);
    exact_div_signed(num, &(&km1 * &km1))
}

/// Total fires when `N = repunit(n, k)`:
/// `((k(n-1) - n - 1) k^n + k(n+1) - n + 1)/(k-1)^3`.
pub fn repunit_total_fires(n: usize, tree: TreeParams) -> Nat {
    let k = signed(u64::from(tree.k()));
    let n_s = signed(n as u64);
    let lead = &k * (&n_s - 1) - &n_s - 1;
    let num = lead * signed_pow(tree.k(), n) + &k * (&n_s + 1) - &n_s + 1;
    let km1 = &k - 1;
    exact_div_signed(num, &(&km1 * &km1 * &km1))
}

/// `a(n) = k a(n-1) + n`, `a(0) = 0`.
pub fn a_seq_rec(n: usize, tree: TreeParams) -> Nat {
    let k = tree.k_nat();
    (1..=n).fold(Nat::zero(), |acc, j| acc * &k + j)
}

/// `a(n) = (k^{n+1} - (k-1) n - k)/(k-1)^2`.
pub fn a_seq_closed(n: usize, tree: TreeParams) -> Nat {
    let k = signed(u64::from(tree.k()));
    let num = signed_pow(tree.k(), n + 1) - (&k - 1) * signed(n as u64) - &k;
    let km1 = &k - 1;
    exact_div_signed(num, &(&km1 * &km1))
}

/// The values taken by `total_fires_diff`; for `k = 10` the first nine
/// terms are 1, 12, 123, ..., 123456789.
pub fn a_seq(n: usize, tree: TreeParams) -> Nat {
    let rec = a_seq_rec(n, tree);
    assert_eq!(
        rec,
        a_seq_closed(n, tree),
        "a({n}) routes disagree at {tree}"
    );
    rec
}

/// `b(n) = n k^{n-1} + b(n-1)`, `b(0) = 0`.
pub fn b_seq_rec(n: usize, tree: TreeParams) -> Nat {
    (1..=n).fold(Nat::zero(), |acc, j| acc + pow(tree.k(), j - 1) * j)
}

/// `b(n) = (k^n ((k-1) n - 1) + 1)/(k-1)^2`.
pub fn b_seq_closed(n: usize, tree: TreeParams) -> Nat {
    let k = signed(u64::from(tree.k()));
    let num = signed_pow(tree.k(), n) * ((&k - 1) * signed(n as u64) - 1) + 1;
    let km1 = &k - 1;
    exact_div_signed(num, &(&km1 * &km1))
}

/// Summands whose partial sums give `repunit_total_fires`:
/// `sum_{j<=n} b(j) = repunit_total_fires(n + 1)`.
pub fn b_seq(n: usize, tree: TreeParams) -> Nat {
    let rec = b_seq_rec(n, tree);
    assert_eq!(
        rec,
        b_seq_closed(n, tree),
        "b({n}) routes disagree at {tree}"
    );
    rec
}

/// `g0(m) = root_fires(mk)`.
pub fn block_root_fires(m: &Nat, tree: TreeParams) -> Nat {
    root_fires(&(m * tree.k()), tree)
}

/// `G(m) = total_fires(mk)`.
pub fn block_total_fires(m: &Nat, tree: TreeParams) -> Nat {
    total_fires(&(m * tree.k()), tree)
}

/// First difference of `block_root_fires` from the closed form:
/// `n` if `m = repunit(n)`, else `nu_k((k-1)m + 1) + 1`. Zero at `m = 0`.
pub fn root_fires_diff_formula(m: &Nat, tree: TreeParams) -> u64 {
    if m.is_zero() {
        return 0;
    }
    let (n, base) = height_and_base(m, tree).expect("nonzero");
    if &base == m {
        return n as u64;
    }
    let shifted = m * (tree.k() - 1) + 1u32;
    valuation(&shifted, tree.k()).expect("nonzero") as u64 + 1
}

/// First difference of `block_root_fires` by recursion:
/// `d0(m) = d0((m-1)/k) + 1` when `k | m - 1`, else 1; `d0(0) = 0`.
pub fn root_fires_diff_rec(m: &Nat, tree: TreeParams) -> u64 {
    let k = tree.k_nat();
    let mut depth = 0;
    let mut cur = m.clone();
    loop {
        if cur.is_zero() {
            return depth;
        }
        let (q, r) = (&cur - 1u32).div_rem(&k);
        if !r.is_zero() {
            return depth + 1;
        }
        depth += 1;
        cur = q;
    }
}

/// The first `len` terms (from `m = 1`) of the root-fire difference
/// sequence, built by substitution: start from all ones, then for
/// `x = 2, 3, ...` replace the `(k+1)`-th occurrence of `x - 1` and every
/// `k`-th occurrence after it with `x`.
pub fn root_fires_diff_fractal(len: usize, tree: TreeParams) -> Vec<u64> {
    let k = tree.k() as usize;
    let mut seq = vec![1u64; len];
    for x in 2u64.. {
        let positions: Vec<usize> = seq
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v == x - 1)
            .map(|(i, _)| i)
            .collect();
        if positions.len() <= k {
            break;
        }
        for &p in positions.iter().skip(k).step_by(k) {
            seq[p] = x;
        }
    }
    seq
}

/// `d0(m) = g0(m+1) - g0(m)`; both routes are evaluated and must agree.
pub fn root_fires_diff(m: &Nat, tree: TreeParams) -> u64 {
    let formula = root_fires_diff_formula(m, tree);
    assert_eq!(formula, root_fires_diff_rec(m, tree), "d0({m}) at {tree}");
    formula
}

/// `D(m) = d0(m) + k D((m-1)/k)` when `k | m - 1`, else 1; `D(0) = 0`.
pub fn total_fires_diff_rec(m: &Nat, tree: TreeParams) -> Nat {
    if m.is_zero() {
        return Nat::zero();
    }
    let k = tree.k_nat();
    let (q, r) = (m - 1u32).div_rem(&k);
    if !r.is_zero() {
        return Nat::one();
    }
    Nat::from(root_fires_diff_rec(m, tree)) + k * total_fires_diff_rec(&q, tree)
}

/// `D(m) = a(d0(m))`.
pub fn total_fires_diff_via_a(m: &Nat, tree: TreeParams) -> Nat {
    let d = root_fires_diff_formula(m, tree);
    a_seq_closed(d as usize, tree)
}

/// `D(m) = (k^{j+1} - (k-1) j - k)/(k-1)^2` with
/// `j = nu_k(m - repunit(n)) + 1`, or `j = n` when `m` is itself a repunit.
pub fn total_fires_diff_explicit(m: &Nat, tree: TreeParams) -> Nat {
    if m.is_zero() {
        return Nat::zero();
    }
    let (n, base) = height_and_base(m, tree).expect("nonzero");
    let j = if &base == m {
        n
    } else {
        valuation(&(m - base), tree.k()).expect("nonzero") + 1
    };
    let k = signed(u64::from(tree.k()));
    let num = signed_pow(tree.k(), j + 1) - (&k - 1) * signed(j as u64) - &k;
    let km1 = &k - 1;
    exact_div_signed(num, &(&km1 * &km1))
}

/// `D(m) = G(m+1) - G(m)`; recursion, `a(d0(m))` and the explicit form must agree.
pub fn total_fires_diff(m: &Nat, tree: TreeParams) -> Nat {
    let rec = total_fires_diff_rec(m, tree);
    assert_eq!(
        rec,
        total_fires_diff_via_a(m, tree),
        "D({m}) via a at {tree}"
    );
    assert_eq!(
        rec,
        total_fires_diff_explicit(m, tree),
        "D({m}) explicit at {tree}"
    );
    rec
}

/// Whether `2(k+1)` divides the total fires for `repunit(2j+1, k)` chips.
pub fn divisibility_check(j: usize, tree: TreeParams) -> bool {
    let fires = total_fires(&repunit(2 * j + 1, tree), tree);
    (fires % (2 * (tree.k() + 1))).is_zero()
}

/// Per-layer fire counts and their weighted total for one pile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FireProfile {
    #[serde(serialize_with = "crate::sequences::ser_nat")]
    pub chips: Nat,
    pub k: TreeParams,
    pub height: usize,
    /// `fires[i]`: fires of each vertex on layer `i + 1`.
    #[serde(serialize_with = "crate::sequences::ser_nats")]
    pub fires: Vec<Nat>,
    #[serde(serialize_with = "crate::sequences::ser_nat")]
    pub total: Nat,
}

impl FireProfile {
    pub fn root(&self) -> Nat {
        self.fires.first().cloned().unwrap_or_default()
    }

    /// `sum_i k^i fires[i]`.
    pub fn weighted_sum(&self) -> Nat {
        let k = self.k.k_nat();
        self.fires
            .iter()
            .rev()
            .fold(Nat::zero(), |acc, f| acc * &k + f)
    }
}

/// Closed-form fire profile. An empty pile gives height 0 and no layers.
pub fn fire_profile(chips: &Nat, tree: TreeParams) -> FireProfile {
    if chips.is_zero() {
        return FireProfile {
            chips: Nat::zero(),
            k: tree,
            height: 0,
            fires: Vec::new(),
            total: Nat::zero(),
        };
    }
    let height = crate::numerics::height_index(chips, tree).expect("nonzero");
    let fires: Vec<Nat> = (0..height)
        .map(|i| vertex_fires(chips, tree, i).expect("layer in range"))
        .collect();
    let profile = FireProfile {
        chips: chips.clone(),
        k: tree,
        height,
        fires,
        total: total_fires(chips, tree),
    };
    debug_assert_eq!(profile.weighted_sum(), profile.total);
    profile
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{simulate, Strategy};
    use proptest::prelude::*;

    fn tree(k: u64) -> TreeParams {
        TreeParams::new(k).unwrap()
    }

    fn nat(x: u64) -> Nat {
        Nat::from(x)
    }

    #[test]
    fn vertex_fires_examples() {
        assert_eq!(vertex_fires(&nat(9), tree(3), 0).unwrap(), nat(2));
        assert_eq!(vertex_fires(&nat(15), tree(2), 1).unwrap(), nat(4));
        for k in 2..6 {
            for n in [1u64, 7, 40, 123] {
                let h = crate::numerics::height_index(&nat(n), tree(k)).unwrap();
                assert_eq!(vertex_fires(&nat(n), tree(k), h - 1).unwrap(), nat(0));
                assert!(matches!(
                    vertex_fires(&nat(n), tree(k), h),
                    Err(Error::LayerOutOfRange { .. })
                ));
            }
        }
        assert!(vertex_fires(&nat(0), tree(2), 0).is_err());
    }

    #[test]
    fn fires_difference_examples() {
        assert_eq!(fires_difference(&nat(9), tree(3), 0).unwrap(), nat(2));
        assert_eq!(fires_difference(&nat(15), tree(2), 0).unwrap(), nat(7));
        // f_{n-2} - f_{n-1} = c_{n-1}
        for n in 5..200u64 {
            let t = tree(3);
            let c = stable_config(&nat(n), t).unwrap();
            let h = c.height;
            assert_eq!(
                fires_difference(&nat(n), t, h - 2).unwrap(),
                nat(u64::from(c.chips[h - 1]))
            );
        }
        assert!(fires_difference(&nat(9), tree(3), 1).is_err());
    }

    #[test]
    fn telescoping_matches_vertex_fires() {
        for k in 2..=5 {
            let t = tree(k);
            for n in 1..1500u64 {
                let h = crate::numerics::height_index(&nat(n), t).unwrap();
                for i in 0..h {
                    let tail: Nat = (i..h.saturating_sub(1))
                        .map(|j| fires_difference(&nat(n), t, j).unwrap())
                        .sum();
                    assert_eq!(
                        vertex_fires(&nat(n), t, i).unwrap(),
                        tail,
                        "N={n} k={k} i={i}"
                    );
                }
            }
        }
    }

    #[test]
    fn via_root_examples() {
        assert_eq!(vertex_fires_via_root(&nat(15), tree(2), 1).unwrap(), nat(4));
        assert_eq!(root_fires(&nat(7), tree(2)), nat(4));
        assert_eq!(vertex_fires_via_root(&nat(9), tree(3), 1).unwrap(), nat(0));
        for k in 2..=6 {
            for n in 1..800u64 {
                let t = tree(k);
                let h = crate::numerics::height_index(&nat(n), t).unwrap();
                assert_eq!(
                    vertex_fires_via_root(&nat(n), t, 0).unwrap(),
                    vertex_fires(&nat(n), t, 0).unwrap()
                );
                for i in 0..h {
                    assert_eq!(
                        vertex_fires_via_root(&nat(n), t, i).unwrap(),
                        vertex_fires(&nat(n), t, i).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn root_fires_examples() {
        assert_eq!(root_fires(&nat(9), tree(3)), nat(2));
        assert_eq!(root_fires(&nat(16), tree(2)), nat(11));
        assert_eq!(root_fires_rec(&nat(0), tree(4)), nat(0));
        assert_eq!(root_fires_rec(&nat(9), tree(3)), nat(2));
        assert_eq!(root_fires_rec(&nat(20), tree(2)), nat(14));
        for k in 2..9u64 {
            for n in 0..=k {
                assert_eq!(root_fires(&nat(n), tree(k)), nat(0));
                assert_eq!(total_fires(&nat(n), tree(k)), nat(0));
            }
        }
    }

    #[test]
    fn total_fires_examples() {
        assert_eq!(total_fires(&nat(16), tree(2)), nat(23));
        assert_eq!(total_fires(&nat(15), tree(3)), nat(8));
        assert_eq!(total_fires_rec(&nat(0), tree(3)), nat(0));
        assert_eq!(total_fires_rec(&nat(24), tree(4)), nat(10));
        assert_eq!(total_fires_rec(&nat(12), tree(2)), nat(11));
    }

    #[test]
    fn repunit_special_cases() {
        for n in 1..20usize {
            for i in 0..n {
                let expected = (1u64 << (n - i)) - (n - i) as u64 - 1;
                assert_eq!(repunit_vertex_fires(n, tree(2), i).unwrap(), nat(expected));
            }
            for k in 2..7 {
                assert_eq!(repunit_vertex_fires(n, tree(k), n - 1).unwrap(), nat(0));
            }
            let expected = (n as i64 - 3) * (1i64 << n) + n as i64 + 3;
            assert_eq!(repunit_total_fires(n, tree(2)), nat(expected as u64));
        }
        assert_eq!(repunit_vertex_fires(4, tree(3), 0).unwrap(), nat(18));
        assert!(repunit_vertex_fires(4, tree(3), 4).is_err());
        assert_eq!(repunit_root_fires(3, tree(2)), nat(4));
        assert_eq!(repunit_root_fires(4, tree(3)), nat(18));
        for k in 2..9 {
            assert_eq!(repunit_root_fires(1, tree(k)), nat(0));
        }
        assert_eq!(repunit_total_fires(3, tree(4)), nat(10));
        assert_eq!(repunit_total_fires(3, tree(5)), nat(12));
    }

    #[test]
    fn repunit_forms_match_general_forms() {
        for k in 2..=10 {
            let t = tree(k);
            for n in 1..15 {
                let chips = repunit(n, t);
                for i in 0..n {
                    assert_eq!(
                        repunit_vertex_fires(n, t, i).unwrap(),
                        vertex_fires(&chips, t, i).unwrap()
                    );
                }
                assert_eq!(repunit_root_fires(n, t), root_fires(&chips, t));
                assert_eq!(repunit_total_fires(n, t), total_fires(&chips, t));
            }
        }
    }

    #[test]
    fn a_and_b_sequences() {
        for k in 2..12 {
            assert_eq!(a_seq(1, tree(k)), nat(1));
            assert_eq!(b_seq(1, tree(k)), nat(1));
        }
        assert_eq!(a_seq(3, tree(4)), nat(27));
        assert_eq!(a_seq(7, tree(10)), nat(1234567));
        assert_eq!(a_seq(11, tree(10)), nat(12345679011));
        assert_eq!(b_seq(2, tree(2)), nat(5));
        assert_eq!(b_seq(2, tree(3)), nat(7));
        for k in 2..=10 {
            let t = tree(k);
            let mut partial = Nat::zero();
            for n in 1..=30 {
                partial += b_seq(n, t);
                assert_eq!(partial, repunit_total_fires(n + 1, t), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn root_fires_diff_examples() {
        for k in 2..8 {
            assert_eq!(root_fires_diff(&nat(1), tree(k)), 1);
        }
        assert_eq!(root_fires_diff(&nat(7), tree(2)), 3);
        assert_eq!(root_fires_diff(&nat(13), tree(3)), 3);
        // 10 is not a repunit in base 3; nu_3(21) + 1
        assert_eq!(root_fires_diff(&nat(10), tree(3)), 2);
    }

    #[test]
    fn root_fires_diff_matches_block_difference() {
        for k in 2..=6 {
            let t = tree(k);
            for m in 1..2000u64 {
                let diff = block_root_fires(&nat(m + 1), t) - block_root_fires(&nat(m), t);
                assert_eq!(Nat::from(root_fires_diff(&nat(m), t)), diff, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn fractal_construction_prefixes() {
        assert_eq!(
            root_fires_diff_fractal(18, tree(2)),
            vec![1, 1, 2, 1, 2, 1, 3, 1, 2, 1, 3, 1, 2, 1, 4, 1, 2, 1]
        );
        assert_eq!(
            root_fires_diff_fractal(23, tree(3)),
            vec![1, 1, 1, 2, 1, 1, 2, 1, 1, 2, 1, 1, 3, 1, 1, 2, 1, 1, 2, 1, 1, 3, 1]
        );
        assert!(root_fires_diff_fractal(0, tree(2)).is_empty());
    }

    #[test]
    fn total_fires_diff_examples() {
        assert_eq!(total_fires_diff(&nat(7), tree(2)), nat(11));
        assert_eq!(total_fires_diff(&nat(4), tree(3)), nat(5));
        assert_eq!(total_fires_diff(&nat(7), tree(6)), nat(8));
        for k in 2..=6 {
            let t = tree(k);
            for m in 1..1500u64 {
                let diff = block_total_fires(&nat(m + 1), t) - block_total_fires(&nat(m), t);
                assert_eq!(total_fires_diff(&nat(m), t), diff, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn divisibility_examples() {
        assert!(divisibility_check(1, tree(4)));
        assert_eq!(total_fires(&repunit(3, tree(4)), tree(4)), nat(10));
        for k in 2..=10 {
            assert!(divisibility_check(0, tree(k)));
        }
        assert!(divisibility_check(2, tree(2)));
        assert_eq!(total_fires(&nat(31), tree(2)), nat(72));
    }

    #[test]
    fn engine_oracle_spot_checks() {
        // Values derived from the node-level simulator.
        let sim = simulate(&nat(15), tree(2), Strategy::RootFirstBfs, 0).unwrap();
        assert_eq!(sim.fires_by_layer[0], nat(11));
        assert_eq!(sim.fires_by_layer[1], nat(4));
        let sim = simulate(&repunit(4, tree(3)), tree(3), Strategy::MaxChipsFirst, 0).unwrap();
        assert_eq!(sim.root_fires, nat(18));
        let sim = simulate(&nat(31), tree(2), Strategy::RandomEligible, 3).unwrap();
        assert_eq!(sim.total_fires, nat(72));
        let sim = simulate(&nat(9), tree(3), Strategy::RootFirstBfs, 0).unwrap();
        assert_eq!(sim.fires_by_layer, vec![nat(2), nat(0)]);
    }

    #[test]
    fn fire_profile_shape() {
        let p = fire_profile(&nat(9), tree(3));
        assert_eq!(p.fires, vec![nat(2), nat(0)]);
        assert_eq!(p.total, nat(2));
        let p = fire_profile(&nat(16), tree(2));
        assert_eq!(p.root(), nat(11));
        assert_eq!(p.total, nat(23));
        let p = fire_profile(&nat(0), tree(2));
        assert_eq!(p.height, 0);
        assert_eq!(p.root(), nat(0));
    }

    proptest! {
        #[test]
        fn profile_invariants(n in 1u64..5_000_000, k in 2u64..12) {
            let p = fire_profile(&nat(n), tree(k));
            prop_assert_eq!(p.fires.last().cloned(), Some(nat(0)));
            prop_assert!(p.fires.windows(2).all(|w| w[0] >= w[1]));
            prop_assert_eq!(p.weighted_sum(), p.total.clone());
            prop_assert_eq!(root_fires_rec(&nat(n), tree(k)), p.root());
            prop_assert_eq!(total_fires_rec(&nat(n), tree(k)), p.total);
        }

        #[test]
        fn block_constancy(a in 0u64..100_000, k in 2u64..10, off in 1u64..10) {
            let t = tree(k);
            let off = 1 + (off - 1) % k;
            let low = nat(a * k + 1);
            let here = nat(a * k + off);
            prop_assert_eq!(total_fires(&low, t), total_fires(&here, t));
            // repunits are 1 mod k, so the height never changes inside a block
            let h = crate::numerics::height_index(&low, t).unwrap();
            prop_assert_eq!(h, crate::numerics::height_index(&here, t).unwrap());
            for i in 0..h {
                prop_assert_eq!(vertex_fires(&low, t, i).unwrap(), vertex_fires(&here, t, i).unwrap());
            }
        }
    }
}
