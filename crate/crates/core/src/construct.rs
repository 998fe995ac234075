//! Explicit constructions of strong 132-avoiders.
//!
//! When `n` sits at position `b > n/2` and lies in a cycle of length at
//! least 4, the permutation is determined by `b` and a 132-avoider `α`, in one
//! of two shapes depending on whether `3b >= 2n`. Inverses cover `b < n/2`.
//! Permutations with `n` in a 3-cycle are built by layering a pure 3-cycle
//! avoider around a smaller strong avoider.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::enumerate::{gen_avoiders_132, gen_avoiders_132_with, strong_avoiders_132};
use crate::error::{invalid, Error, Result};
use crate::perm::{Pattern, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `2n/3 <= b <= n - 1`, `|α| = n - b`.
    Form1,
    /// `n/2 < b < 2n/3`, `|α| = 2b - n`.
    Form2,
}

impl Variant {
    /// The shape that applies to `(n, b)`, if any.
    pub fn for_position(n: usize, b: usize) -> Option<Variant> {
        if b >= n || 2 * b <= n {
            None
        } else if 3 * b >= 2 * n {
            Some(Variant::Form1)
        } else {
            Some(Variant::Form2)
        }
    }

    pub fn alpha_len(self, n: usize, b: usize) -> usize {
        match self {
            Variant::Form1 => n - b,
            Variant::Form2 => 2 * b - n,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Form1 => "form1",
            Variant::Form2 => "form2",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "form1" | "1" => Ok(Variant::Form1),
            "form2" | "2" => Ok(Variant::Form2),
            other => Err(invalid(format!("unknown variant {other:?}"))),
        }
    }
}

/// Inputs of a big-cycle construction. Built only through [`ConstructionParams::new`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructionParams {
    n: usize,
    b: usize,
    variant: Variant,
    alpha: Permutation,
    take_inverse: bool,
}

impl ConstructionParams {
    pub fn new(
        n: usize,
        b: usize,
        variant: Variant,
        alpha: Permutation,
        take_inverse: bool,
    ) -> Result<Self> {
        if Variant::for_position(n, b) != Some(variant) {
            return Err(invalid(format!(
                "{variant} does not apply to n = {n}, b = {b}"
            )));
        }
        let want = variant.alpha_len(n, b);
        if alpha.len() != want {
            return Err(invalid(format!(
                "{variant} at n = {n}, b = {b} needs alpha of size {want}, got {}",
                alpha.len()
            )));
        }
        if !alpha.avoids(&Pattern::p132()) {
            return Err(invalid(format!("alpha {alpha} contains 132")));
        }
        Ok(ConstructionParams {
            n,
            b,
            variant,
            alpha,
            take_inverse,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn alpha(&self) -> &Permutation {
        &self.alpha
    }

    pub fn take_inverse(&self) -> bool {
        self.take_inverse
    }

    /// Length of the cycle containing `n` in the result: `n / gcd(n, b)`.
    pub fn cycle_length(&self) -> usize {
        self.n / self.n.gcd(&self.b)
    }

    fn inverted(&self) -> Self {
        ConstructionParams {
            take_inverse: !self.take_inverse,
            ..self.clone()
        }
    }
}

fn finish(one_line: Vec<usize>) -> Permutation {
    Permutation::new(one_line).expect("construction yields a bijection")
}

fn forward(params: &ConstructionParams) -> Permutation {
    let (n, b) = (params.n, params.b);
    let a = &params.alpha;
    let m = a.len();
    let ainv = a.inverse();
    let one_line = (1..=n)
        .map(|k| match params.variant {
            Variant::Form1 => {
                if k <= m {
                    ainv.image(k) + n - b
                } else if k <= b {
                    k + n - b
                } else {
                    a.image(k - b)
                }
            }
            Variant::Form2 => {
                if k <= m {
                    ainv.image(k) + n - b
                } else if k <= b {
                    k + n - b
                } else if k <= 3 * b - n {
                    a.image(k - b)
                } else {
                    k - b
                }
            }
        })
        .collect();
    finish(one_line)
}

/// Builds the permutation described by `params`, inverted if requested.
pub fn build(params: &ConstructionParams) -> Permutation {
    let p = forward(params);
    if params.take_inverse {
        p.inverse()
    } else {
        p
    }
}

pub fn build_form1(params: &ConstructionParams) -> Result<Permutation> {
    if params.variant != Variant::Form1 {
        return Err(invalid("build_form1 needs Form1 parameters"));
    }
    Ok(build(params))
}

pub fn build_form2(params: &ConstructionParams) -> Result<Permutation> {
    if params.variant != Variant::Form2 {
        return Err(invalid("build_form2 needs Form2 parameters"));
    }
    Ok(build(params))
}

/// The square of the forward construction, written out piece by piece
/// rather than computed by composition. Ignores `take_inverse`.
pub fn form_square(params: &ConstructionParams) -> Permutation {
    let (n, b) = (params.n, params.b);
    let a = &params.alpha;
    let ainv = a.inverse();
    let one_line = (1..=n)
        .map(|k| match params.variant {
            Variant::Form1 => {
                if k <= n - b {
                    ainv.image(k) + 2 * n - 2 * b
                } else if k <= 2 * b - n {
                    k + 2 * n - 2 * b
                } else if k <= b {
                    a.image(k + n - 2 * b)
                } else {
                    k + n - 2 * b
                }
            }
            Variant::Form2 => {
                if k <= 2 * b - n {
                    ainv.image(k) + 2 * n - 2 * b
                } else if k <= 4 * b - 2 * n {
                    a.image(k + n - 2 * b)
                } else {
                    k + n - 2 * b
                }
            }
        })
        .collect();
    finish(one_line)
}

/// Recovers the parameters of `p` when it is a forward construction, i.e.
/// `n` sits at some `b > n/2` and the one-line form has the right shape.
pub fn recognize_forward(p: &Permutation) -> Option<ConstructionParams> {
    let n = p.len();
    let b = p.position_of(n);
    let variant = Variant::for_position(n, b)?;
    let m = variant.alpha_len(n, b);
    let alpha = (b + 1..=b + m).map(|k| p.image(k)).collect::<Vec<_>>();
    let alpha = Permutation::new(alpha).ok()?;
    let params = ConstructionParams::new(n, b, variant, alpha, false).ok()?;
    (build(&params) == *p).then_some(params)
}

/// Like [`recognize_forward`], also accepting inverses of constructions.
pub fn recognize(p: &Permutation) -> Option<ConstructionParams> {
    recognize_forward(p).or_else(|| recognize_forward(&p.inverse()).map(|q| q.inverted()))
}

/// Positions `b` whose construction puts `n` in a cycle of length >= 4.
pub fn big_cycle_positions(n: usize) -> impl Iterator<Item = usize> {
    (n / 2 + 1..n).filter(move |&b| n / n.gcd(&b) > 3)
}

/// Every strong avoider of size `n` with `n` in a cycle of length at least 4.
///
/// Order: by `b` ascending, `α` in lexicographic order, all forward
/// constructions first and then their inverses.
pub fn enumerate_big_cycle(n: usize) -> Result<Vec<Permutation>> {
    if n < 4 {
        return Err(invalid("enumerate_big_cycle needs n >= 4"));
    }
    let mut forward_family = Vec::new();
    for b in big_cycle_positions(n) {
        let variant = Variant::for_position(n, b).expect("b > n/2");
        let mut alphas: Vec<Permutation> = gen_avoiders_132(variant.alpha_len(n, b))?.collect();
        alphas.sort();
        for alpha in alphas {
            let params = ConstructionParams::new(n, b, variant, alpha, false)?;
            forward_family.push(build(&params));
        }
    }
    let mut out = Vec::with_capacity(2 * forward_family.len());
    let mut inverses = Vec::with_capacity(forward_family.len());
    for p in forward_family {
        let q = p.inverse();
        // forward outputs have n past the midpoint, so an inverse with n
        // before it cannot coincide with any of them
        if 2 * q.position_of(n) >= n {
            return Err(Error::InverseCollision {
                n,
                perm: q.to_string(),
            });
        }
        out.push(p);
        inverses.push(q);
    }
    out.extend(inverses);
    Ok(out)
}

fn catalan_u128(i: usize) -> Result<u128> {
    let mut c: u128 = 1;
    for j in 0..i as u128 {
        c = c
            .checked_mul(2 * (2 * j + 1))
            .ok_or(Error::Overflow("catalan"))?
            / (j + 2);
    }
    Ok(c)
}

/// `Σ_{k >= 4} a_{n,k}` from the Catalan-sum closed form.
pub fn count_k_ge_4(n: usize) -> Result<u128> {
    if n < 4 {
        return Err(invalid("count_k_ge_4 needs n >= 4"));
    }
    let mut sum: u128 = 0;
    let mut add = |i: usize| -> Result<()> {
        sum = sum
            .checked_add(catalan_u128(i)?)
            .ok_or(Error::Overflow("count_k_ge_4"))?;
        Ok(())
    };
    for i in 1..=(n - 1) / 3 {
        add(i)?;
    }
    for i in (n + 1).div_ceil(3)..=(n - 1) / 2 {
        add(n - 2 * i)?;
    }
    sum.checked_mul(2).ok_or(Error::Overflow("count_k_ge_4"))
}

/// `a_{n,n}`: permutations in `A_n` that are a single `n`-cycle.
pub fn count_full_cycle(n: usize) -> Result<u128> {
    if n < 3 {
        return Err(invalid("count_full_cycle needs n >= 3"));
    }
    let mut sum: u128 = 0;
    for r in (1..).take_while(|&r| 2 * r < n) {
        if r.gcd(&n) == 1 {
            let term = catalan_u128(r.min(n - 2 * r))?
                .checked_mul(2)
                .ok_or(Error::Overflow("count_full_cycle"))?;
            sum = sum
                .checked_add(term)
                .ok_or(Error::Overflow("count_full_cycle"))?;
        }
    }
    Ok(sum)
}

pub fn binomial(n: usize, k: usize) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (n - i) is divisible by (i + 1)
        acc = acc
            .checked_mul(n as u128 - i)
            .ok_or(Error::Overflow("binomial"))?
            / (i + 1);
    }
    Ok(acc)
}

/// `a_{n,2} = C(n - 1, ⌊(n - 2)/2⌋)` for `n >= 2`.
pub fn count_two_cycle(n: usize) -> Result<u128> {
    if n < 2 {
        return Err(invalid("count_two_cycle needs n >= 2"));
    }
    binomial(n - 1, (n - 2) / 2)
}

fn all_three_cycles(p: &Permutation) -> bool {
    p.cycle_type().iter().all(|&len| len == 3)
}

/// Wraps the pure 3-cycle avoider `alpha` (size `3k`) around the strong
/// avoider `beta` (size `m`, or none when `m = 0`).
///
/// The first `k` entries of `alpha` stay in front, `beta` follows shifted up
/// by `k`, and the remaining `2k` entries of `alpha` come last. Values of
/// `alpha` above `k` are shifted up by `m`. The result has `n = 3k + m` in a
/// 3-cycle.
pub fn layer_3cycles(alpha: &Permutation, beta: Option<&Permutation>) -> Result<Permutation> {
    let len = alpha.len();
    if !len.is_multiple_of(3) || !all_three_cycles(alpha) {
        return Err(invalid(format!("alpha {alpha} is not made of 3-cycles")));
    }
    if !alpha.avoids(&Pattern::p132()) {
        return Err(invalid(format!("alpha {alpha} contains 132")));
    }
    let k = len / 3;
    let m = beta.map_or(0, Permutation::len);
    if let Some(beta) = beta {
        if !beta.strongly_avoids_132() {
            return Err(invalid(format!("beta {beta} does not strongly avoid 132")));
        }
        if beta.cycle_length_of(m)? == 3 {
            return Err(invalid(format!(
                "beta {beta} has its largest element in a 3-cycle"
            )));
        }
    }
    let lift = |v: usize| if v <= k { v } else { v + m };
    let mut one_line = Vec::with_capacity(len + m);
    one_line.extend((1..=k).map(|i| lift(alpha.image(i))));
    if let Some(beta) = beta {
        one_line.extend((1..=m).map(|j| beta.image(j) + k));
    }
    one_line.extend((k + 1..=len).map(|i| lift(alpha.image(i))));
    Ok(finish(one_line))
}

/// 132-avoiders of size `size` whose cycles all have length 3, sorted.
pub fn pure_three_cycle_avoiders(size: usize) -> Result<Vec<Permutation>> {
    let mut v: Vec<_> = gen_avoiders_132(size)?.filter(all_three_cycles).collect();
    v.sort();
    Ok(v)
}

/// Every member of `A_n` with `n` in a 3-cycle, produced by layering: for
/// each `k`, every pure 3-cycle avoider of size `3k` around every admissible
/// `β` of size `n - 3k`.
pub fn three_cycle_family(n: usize) -> Result<Vec<Permutation>> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let mut out = Vec::new();
    for k in 1..=n / 3 {
        let m = n - 3 * k;
        let alphas = pure_three_cycle_avoiders(3 * k)?;
        let betas: Vec<Option<Permutation>> = if m == 0 {
            vec![None]
        } else {
            let mut v: Vec<_> = strong_avoiders_132(m, false)?
                .filter(|p| p.cycle_length_of(m) != Ok(3))
                .map(Some)
                .collect();
            v.sort();
            v
        };
        for alpha in &alphas {
            for beta in &betas {
                out.push(layer_3cycles(alpha, beta.as_ref())?);
            }
        }
    }
    Ok(out)
}

/// The 132-avoiding involutions of `S_n`.
pub fn involutions_132(n: usize, unsafe_n: bool) -> Result<impl Iterator<Item = Permutation>> {
    Ok(gen_avoiders_132_with(n, unsafe_n)?.filter(Permutation::is_involution))
}
