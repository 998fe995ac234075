//! Permutations in one-line notation.
//!
//! Values are 1-based at every public surface: `Permutation::image(i)` is
//! π(i) for `1 <= i <= n`. Storage is 0-based and never exposed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A bijection on `[1, n]`, `n >= 1`. Immutable once built.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    // 0-based images
    image: Box<[u32]>,
}

impl Permutation {
    /// Builds a permutation from its one-line form `π(1), ..., π(n)`.
    pub fn new(one_line: Vec<usize>) -> Result<Self> {
        let n = one_line.len();
        if n == 0 {
            return Err(invalid("a permutation needs at least one element"));
        }
        if n > u32::MAX as usize {
            return Err(invalid("permutation too large"));
        }
        let mut seen = vec![false; n];
        let mut image = Vec::with_capacity(n);
        for &v in &one_line {
            if v == 0 || v > n {
                return Err(invalid(format!("value {v} is outside [1, {n}]")));
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(invalid(format!("value {v} appears twice")));
            }
            image.push((v - 1) as u32);
        }
        Ok(Permutation {
            image: image.into_boxed_slice(),
        })
    }

    /// Caller guarantees `image` is a permutation of `0..image.len()`.
    pub(crate) fn from_zero_based(image: Vec<u32>) -> Self {
        debug_assert!(is_bijection(&image));
        debug_assert!(!image.is_empty());
        Permutation {
            image: image.into_boxed_slice(),
        }
    }

    pub fn identity(n: usize) -> Result<Self> {
        Permutation::new((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// π(i), 1-based. Panics when `i` is outside `[1, n]`.
    pub fn image(&self, i: usize) -> usize {
        self.image[i - 1] as usize + 1
    }

    /// Position of value `v`, i.e. π⁻¹(v). Panics when `v` is outside `[1, n]`.
    pub fn position_of(&self, v: usize) -> usize {
        self.image
            .iter()
            .position(|&x| x as usize + 1 == v)
            .map(|i| i + 1)
            .expect("value out of range")
    }

    /// The one-line form as 1-based values.
    pub fn one_line(&self) -> Vec<usize> {
        self.image.iter().map(|&x| x as usize + 1).collect()
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ q`, i.e. `result(i) = self(q(i))`.
    pub fn compose(&self, q: &Permutation) -> Result<Permutation> {
        if self.len() != q.len() {
            return Err(invalid(format!(
                "cannot compose permutations of sizes {} and {}",
                self.len(),
                q.len()
            )));
        }
        let image = q.image.iter().map(|&j| self.image[j as usize]).collect();
        Ok(Permutation::from_zero_based(image))
    }

    /// π², the functional square.
    pub fn square(&self) -> Permutation {
        let mut out = vec![0; self.len()];
        square_into(&self.image, &mut out);
        Permutation::from_zero_based(out)
    }

    pub fn inverse(&self) -> Permutation {
        let mut out = vec![0u32; self.len()];
        for (i, &x) in self.image.iter().enumerate() {
            out[x as usize] = i as u32;
        }
        Permutation::from_zero_based(out)
    }

    pub fn is_involution(&self) -> bool {
        self.image
            .iter()
            .enumerate()
            .all(|(i, &x)| self.image[x as usize] as usize == i)
    }

    pub fn cycle_decomposition(&self) -> CycleDecomposition {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        // scanning starts in increasing order, so each cycle starts at its minimum
        // and cycles come out sorted by first element
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.image[x] as usize;
            }
            cycles.push(cycle);
        }
        CycleDecomposition { n, cycles }
    }

    /// Length of the cycle containing `v` (1-based).
    pub fn cycle_length_of(&self, v: usize) -> Result<usize> {
        if v == 0 || v > self.len() {
            return Err(invalid(format!("value {v} is outside [1, {}]", self.len())));
        }
        Ok(cycle_length_raw(&self.image, v - 1))
    }

    /// Lengths of all cycles, in canonical cycle order.
    pub fn cycle_type(&self) -> Vec<usize> {
        self.cycle_decomposition()
            .cycles
            .iter()
            .map(Vec::len)
            .collect()
    }

    pub fn contains_pattern(&self, t: &Pattern) -> bool {
        contains_pattern_raw(&self.image, t.0.raw())
    }

    pub fn avoids(&self, t: &Pattern) -> bool {
        !self.contains_pattern(t)
    }

    /// True iff both π and π² avoid `t`.
    pub fn strongly_avoids(&self, t: &Pattern) -> bool {
        let mut sq = vec![0; self.len()];
        square_into(&self.image, &mut sq);
        !contains_pattern_raw(&self.image, t.0.raw()) && !contains_pattern_raw(&sq, t.0.raw())
    }

    pub fn strongly_avoids_132(&self) -> bool {
        self.strongly_avoids(&Pattern::p132())
    }

    /// The complement `n + 1 - π(i)`.
    pub fn complement(&self) -> Permutation {
        let top = self.len() as u32 - 1;
        Permutation::from_zero_based(self.image.iter().map(|&x| top - x).collect())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

/// One-line form, space separated.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &x) in self.image.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", x + 1)?;
        }
        Ok(())
    }
}

/// Accepts comma- or whitespace-separated one-line values, optionally wrapped
/// in parentheses: `"6 7 8 1 2 3 4 5"`, `"2,3,1"`, `"(2,3,1)"`.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |reason: String| Error::Parse {
            input: s.to_string(),
            reason,
        };
        let body = s.trim();
        let body = body
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .unwrap_or(body);
        let values = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|e| parse_err(format!("{tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(values).map_err(|e| match e {
            Error::InvalidArgument(reason) => parse_err(reason),
            other => other,
        })
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.one_line()
    }
}

/// Disjoint cycles in canonical form: each cycle starts at its smallest
/// element and cycles are sorted by that element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleDecomposition {
    n: usize,
    cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    /// Canonicalizes an arbitrary list of disjoint cycles covering `[1, n]`.
    pub fn new(n: usize, cycles: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut canon = Vec::with_capacity(cycles.len());
        for mut c in cycles {
            if c.is_empty() {
                return Err(invalid("empty cycle"));
            }
            for &v in &c {
                if v == 0 || v > n {
                    return Err(invalid(format!("value {v} is outside [1, {n}]")));
                }
                if std::mem::replace(&mut seen[v - 1], true) {
                    return Err(invalid(format!("value {v} appears in two cycles")));
                }
            }
            let min_at = (0..c.len()).min_by_key(|&i| c[i]).unwrap();
            c.rotate_left(min_at);
            canon.push(c);
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(invalid(format!("value {} is in no cycle", missing + 1)));
        }
        canon.sort_by_key(|c| c[0]);
        Ok(CycleDecomposition { n, cycles: canon })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn cycle_containing(&self, v: usize) -> Option<&[usize]> {
        self.cycles
            .iter()
            .find(|c| c.contains(&v))
            .map(Vec::as_slice)
    }

    /// Re-expands the cycles into one-line form.
    pub fn to_permutation(&self) -> Permutation {
        let mut image = vec![0u32; self.n];
        for c in &self.cycles {
            for (i, &u) in c.iter().enumerate() {
                let v = c[(i + 1) % c.len()];
                image[u - 1] = (v - 1) as u32;
            }
        }
        Permutation::from_zero_based(image)
    }
}

/// `(1,6,11)(2,7,12)`; fixed points are written as `(k)`.
impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cycles {
            f.write_str("(")?;
            for (i, v) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A pattern of length at most 4.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern(Permutation);

impl Pattern {
    pub const MAX_LEN: usize = 4;

    pub fn new(p: Permutation) -> Result<Self> {
        if p.len() > Self::MAX_LEN {
            return Err(invalid(format!(
                "patterns longer than {} are not supported",
                Self::MAX_LEN
            )));
        }
        Ok(Pattern(p))
    }

    fn of(digits: [u32; 3]) -> Self {
        Pattern(Permutation::from_zero_based(
            digits.iter().map(|d| d - 1).collect(),
        ))
    }

    pub fn p132() -> Self {
        Self::of([1, 3, 2])
    }

    pub fn p312() -> Self {
        Self::of([3, 1, 2])
    }

    pub fn p231() -> Self {
        Self::of([2, 3, 1])
    }

    pub fn p213() -> Self {
        Self::of([2, 1, 3])
    }

    pub fn as_permutation(&self) -> &Permutation {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl FromStr for Pattern {
    type Err = Error;

    /// Accepts the compact form `"132"` as well as anything `Permutation` parses.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if !s.is_empty() && s.len() <= Self::MAX_LEN && s.bytes().all(|b| b.is_ascii_digit()) {
            let digits = s.bytes().map(|b| (b - b'0') as usize).collect();
            return Pattern::new(Permutation::new(digits)?);
        }
        Pattern::new(s.parse()?)
    }
}

pub(crate) fn is_bijection(image: &[u32]) -> bool {
    let mut seen = vec![false; image.len()];
    image
        .iter()
        .all(|&x| (x as usize) < seen.len() && !std::mem::replace(&mut seen[x as usize], true))
}

pub(crate) fn square_into(p: &[u32], out: &mut [u32]) {
    for (o, &x) in out.iter_mut().zip(p) {
        *o = p[x as usize];
    }
}

pub(crate) fn cycle_length_raw(p: &[u32], v: usize) -> usize {
    let mut len = 1;
    let mut x = p[v] as usize;
    while x != v {
        x = p[x] as usize;
        len += 1;
    }
    len
}

/// Containment test on 0-based slices.
///
/// Length-3 patterns use a scan over the middle entry of the occurrence:
/// for each candidate middle, the eligible left and right entries are
/// reduced to their extremes, which decides existence in O(n) per middle.
/// Length-4 patterns fall back to subsequence search.
pub(crate) fn contains_pattern_raw(p: &[u32], t: &[u32]) -> bool {
    let (n, m) = (p.len(), t.len());
    if m > n {
        return false;
    }
    match m {
        0 | 1 => true,
        2 => {
            let ascent = t[0] < t[1];
            (0..n).any(|j| (0..j).any(|i| (p[i] < p[j]) == ascent))
        }
        3 => contains_len3(p, t),
        _ => contains_by_subsequence(p, t),
    }
}

fn contains_len3(p: &[u32], t: &[u32]) -> bool {
    let left_above = t[0] > t[1];
    let right_above = t[2] > t[1];
    let left_below_right = t[0] < t[2];
    let n = p.len();
    for j in 1..n.saturating_sub(1) {
        let mid = p[j];
        let (mut lmin, mut lmax) = (u32::MAX, None::<u32>);
        for &x in &p[..j] {
            if (x > mid) == left_above {
                lmin = lmin.min(x);
                lmax = Some(lmax.map_or(x, |m: u32| m.max(x)));
            }
        }
        let Some(lmax) = lmax else { continue };
        let (mut rmin, mut rmax) = (u32::MAX, None::<u32>);
        for &x in &p[j + 1..] {
            if (x > mid) == right_above {
                rmin = rmin.min(x);
                rmax = Some(rmax.map_or(x, |m: u32| m.max(x)));
            }
        }
        let Some(rmax) = rmax else { continue };
        let hit = if left_below_right {
            lmin < rmax
        } else {
            lmax > rmin
        };
        if hit {
            return true;
        }
    }
    false
}

fn contains_by_subsequence(p: &[u32], t: &[u32]) -> bool {
    fn extend(p: &[u32], t: &[u32], start: usize, picked: &mut Vec<u32>) -> bool {
        if picked.len() == t.len() {
            return true;
        }
        let k = picked.len();
        for i in start..p.len() {
            if p.len() - i < t.len() - k {
                break;
            }
            let v = p[i];
            // the new entry must compare to every picked entry as t does
            let consistent = picked.iter().zip(t).all(|(&u, &tu)| (u < v) == (tu < t[k]));
            if consistent {
                picked.push(v);
                if extend(p, t, i + 1, picked) {
                    return true;
                }
                picked.pop();
            }
        }
        false
    }
    extend(p, t, 0, &mut Vec::with_capacity(t.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn compose_examples() {
        let p = perm("2 3 1");
        let id = Permutation::identity(3).unwrap();
        assert_eq!(id.compose(&p).unwrap(), p);
        assert_eq!(p.compose(&p).unwrap(), perm("3 1 2"));

        let q = perm("6 7 8 9 10 11 12 1 2 3 4 5");
        let sq = q.square();
        for i in 1..=12 {
            assert_eq!(sq.image(i), q.image(q.image(i)));
        }
        assert_eq!(sq, perm("11 12 1 2 3 4 5 6 7 8 9 10"));
    }

    #[test]
    fn compose_size_mismatch() {
        let err = perm("1 2").compose(&perm("1 2 3")).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn inverse_examples() {
        let id = Permutation::identity(5).unwrap();
        assert_eq!(id.inverse(), id);
        assert_eq!(perm("2 3 1").inverse(), perm("3 1 2"));
    }

    #[test]
    fn cycles_examples() {
        let id = Permutation::identity(3).unwrap();
        assert_eq!(id.cycle_decomposition().to_string(), "(1)(2)(3)");

        let p = perm("6 7 8 9 10 11 12 1 2 3 4 5");
        assert_eq!(
            p.cycle_decomposition().to_string(),
            "(1,6,11,4,9,2,7,12,5,10,3,8)"
        );
        let q = perm("4 5 6 7 8 9 10 11 12 1 2 3");
        assert_eq!(
            q.cycle_decomposition().to_string(),
            "(1,4,7,10)(2,5,8,11)(3,6,9,12)"
        );
    }

    #[test]
    fn cycle_length_examples() {
        assert_eq!(Permutation::identity(5).unwrap().cycle_length_of(5), Ok(1));
        assert_eq!(perm("2 1 3").cycle_length_of(1), Ok(2));
        let p = perm("6 7 8 9 10 11 12 1 2 3 4 5");
        assert_eq!(p.cycle_length_of(12), Ok(12));
        assert!(p.cycle_length_of(13).is_err());
        assert!(p.cycle_length_of(0).is_err());
    }

    #[test]
    fn canonicalizes_cycles() {
        let c = CycleDecomposition::new(5, vec![vec![5, 3], vec![4, 1, 2]]).unwrap();
        assert_eq!(c.to_string(), "(1,2,4)(3,5)");
        assert_eq!(c.to_permutation(), perm("2 4 5 1 3"));
        assert!(CycleDecomposition::new(3, vec![vec![1, 2]]).is_err());
        assert!(CycleDecomposition::new(3, vec![vec![1, 2], vec![2, 3]]).is_err());
    }

    #[test]
    fn pattern_examples() {
        let p132 = Pattern::p132();
        assert!(perm("1 3 2").contains_pattern(&p132));
        assert!(!perm("3 2 1").contains_pattern(&p132));
        assert!(!perm("1 2").contains_pattern(&p132));
        assert!(perm("2 4 1 3").contains_pattern(&"213".parse().unwrap()));
        assert!(perm("1 4 2 3").contains_pattern(&"1423".parse().unwrap()));
        assert!(!perm("4 3 2 1").contains_pattern(&"1432".parse().unwrap()));
        assert!("12345".parse::<Pattern>().is_err());
    }

    #[test]
    fn strong_avoidance_examples() {
        assert!(!perm("1 3 2").strongly_avoids_132());
        assert!(perm("2 3 1").strongly_avoids_132());
    }

    #[test]
    fn parse_formats() {
        assert_eq!(perm("2,3,1"), perm("2 3 1"));
        assert_eq!(perm("(2, 3, 1)"), perm("2 3 1"));
        assert!("2 2 1".parse::<Permutation>().is_err());
        assert!("0 1".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
        assert!("1 x".parse::<Permutation>().is_err());
    }

    #[test]
    fn serde_roundtrip() {
        let p = perm("3 1 2");
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "[3,1,2]");
        assert_eq!(serde_json::from_str::<Permutation>(&json).unwrap(), p);
        assert!(serde_json::from_str::<Permutation>("[1,1]").is_err());
    }
}
