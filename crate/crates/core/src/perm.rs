//! Permutations of `{0..n-1}`, parity, cycle structure and text formats.

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A parity bit in F_2: 0 is even, 1 is odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: u64) -> Parity {
        if b.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Parity {
        self + Parity::Odd
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    pub fn parse(s: &str) -> Result<Parity> {
        match s.trim().to_ascii_lowercase().as_str() {
            "even" | "0" => Ok(Parity::Even),
            "odd" | "1" => Ok(Parity::Odd),
            other => Err(Error::Parse(format!("unknown parity '{other}'"))),
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit((self.bit() ^ rhs.bit()) as u64)
    }
}

impl std::iter::Sum for Parity {
    fn sum<I: Iterator<Item = Parity>>(iter: I) -> Parity {
        iter.fold(Parity::Even, |a, b| a + b)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A bijection on `{0..n-1}` stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::NotAPermutation(format!(
                    "image {x} out of range or repeated (degree {n})"
                )));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    /// Caller guarantees `images` is a bijection.
    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Perm {
        debug_assert!(Perm::from_images(images.clone()).is_ok());
        Perm { images }
    }

    /// Builds a permutation from disjoint zero-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Perm> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cyc in cycles {
            for (i, &a) in cyc.iter().enumerate() {
                if a >= n {
                    return Err(Error::NotAPermutation(format!(
                        "point {} exceeds degree {n}",
                        a + 1
                    )));
                }
                if touched[a] {
                    return Err(Error::NotAPermutation(format!(
                        "point {} appears twice in cycle notation",
                        a + 1
                    )));
                }
                touched[a] = true;
                images[a] = cyc[(i + 1) % cyc.len()];
            }
        }
        Ok(Perm { images })
    }

    /// A single cycle through `seq` (zero-based).
    pub fn cycle(n: usize, seq: &[usize]) -> Result<Perm> {
        Perm::from_cycles(n, &[seq.to_vec()])
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn into_images(self) -> Vec<usize> {
        self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    fn check_degree(&self, other: &Perm) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        self.check_degree(other)?;
        Ok(Perm {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        })
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &Perm) -> Result<Perm> {
        other.compose(self)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, e: u64) -> Perm {
        let mut result = Perm::identity(self.degree());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = base.compose(&result).expect("same degree");
            }
            base = base.compose(&base).expect("same degree");
            e >>= 1;
        }
        result
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.images[i] == i).collect()
    }

    /// All cycles including fixed points; each starts at its smallest point,
    /// cycles sorted by first point.
    pub fn all_cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.images[x];
            }
            out.push(cyc);
        }
        out
    }

    /// Nontrivial cycles in canonical form.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.all_cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .collect()
    }

    /// Cycle lengths (fixed points included), in descending order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.all_cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// Number of cycles of each length, indexed by length.
    pub fn cycle_census(&self) -> Vec<usize> {
        let mut census = vec![0; self.degree() + 1];
        for c in self.all_cycles() {
            census[c.len()] += 1;
        }
        census
    }

    /// Parity of the number of even-length cycles.
    pub fn parity(&self) -> Parity {
        let even_cycles = self
            .all_cycles()
            .iter()
            .filter(|c| c.len() % 2 == 0)
            .count();
        Parity::from_bit(even_cycles as u64)
    }

    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.all_cycles()
            .iter()
            .map(|c| c.len() as u64)
            .fold(1, |acc, l| acc / gcd(acc, l) * l)
    }

    /// Parses 1-based cycle notation, a 0-based comma-separated image list,
    /// or either one prefixed by `cycles:` / `images:`.
    pub fn parse(text: &str, degree: usize) -> Result<Perm> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("cycles:") {
            return Perm::parse_cycles(rest, degree);
        }
        if let Some(rest) = t.strip_prefix("images:") {
            let p = Perm::parse_images(rest)?;
            if p.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: p.degree(),
                });
            }
            return Ok(p);
        }
        if t.starts_with('(') || t.is_empty() {
            Perm::parse_cycles(t, degree)
        } else {
            let p = Perm::parse_images(t)?;
            if p.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: p.degree(),
                });
            }
            Ok(p)
        }
    }

    /// Parses 1-based cycle notation such as `(1,7,8)(2,3)`; `()` is the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Perm> {
        let cycles = parse_cycle_tokens(text)?
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|tok| {
                        let v: usize = tok.parse().map_err(|_| {
                            Error::Parse(format!("bad point '{tok}' in cycle notation"))
                        })?;
                        if v == 0 {
                            return Err(Error::Parse(
                                "cycle notation is 1-based; found 0".into(),
                            ));
                        }
                        Ok(v - 1)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::from_cycles(degree, &cycles)
    }

    /// Parses a zero-based comma- or whitespace-separated image list.
    pub fn parse_images(text: &str) -> Result<Perm> {
        let images = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad image '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::from_images(images)
    }

    /// Canonical 1-based cycle notation; `()` for the identity.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
                format!("({})", inner.join(","))
            })
            .collect()
    }

    pub fn to_image_string(&self) -> String {
        let v: Vec<String> = self.images.iter().map(usize::to_string).collect();
        v.join(",")
    }

    /// Cycle notation with a format tag, accepted by [`Perm::parse`].
    pub fn to_tagged_cycles(&self) -> String {
        format!("cycles:{}", self.to_cycle_string())
    }

    pub fn to_tagged_images(&self) -> String {
        format!("images:{}", self.to_image_string())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

/// Splits `(a,b,c)(d,e)` into token lists without interpreting the tokens.
pub fn parse_cycle_tokens(text: &str) -> Result<Vec<Vec<String>>> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let Some(after_open) = rest.strip_prefix('(') else {
            return Err(Error::Parse(format!("expected '(' at '{rest}'")));
        };
        let Some(close) = after_open.find(')') else {
            return Err(Error::Parse("unbalanced parenthesis".into()));
        };
        let body = &after_open[..close];
        let toks: Vec<String> = body
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        if !toks.is_empty() {
            out.push(toks);
        }
        rest = after_open[close + 1..].trim_start();
    }
    Ok(out)
}

/// A total order on `{0..n-1}` given by ranks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TotalOrder {
    rank: Vec<usize>,
}

impl TotalOrder {
    /// Element-index order.
    pub fn index_order(n: usize) -> TotalOrder {
        TotalOrder {
            rank: (0..n).collect(),
        }
    }

    pub fn from_ranks(rank: Vec<usize>) -> Result<TotalOrder> {
        Perm::from_images(rank.clone())
            .map_err(|e| Error::InvalidArgument(format!("ranks are not a bijection: {e}")))?;
        Ok(TotalOrder { rank })
    }

    /// `seq[0] < seq[1] < ...`.
    pub fn from_sequence(seq: &[usize]) -> Result<TotalOrder> {
        let p = Perm::from_images(seq.to_vec())
            .map_err(|e| Error::InvalidArgument(format!("sequence is not a listing: {e}")))?;
        Ok(TotalOrder {
            rank: p.inverse().into_images(),
        })
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    #[inline]
    pub fn rank(&self, x: usize) -> usize {
        self.rank[x]
    }

    /// Elements listed from smallest to largest.
    pub fn sequence(&self) -> Vec<usize> {
        Perm::from_images_unchecked(self.rank.clone())
            .inverse()
            .into_images()
    }
}

/// Counts pairs `a < b` with `f(b) < f(a)` under `ord`, in O(n log n).
pub fn inversion_count(f: &Perm, ord: &TotalOrder) -> Result<u64> {
    if f.degree() != ord.len() {
        return Err(Error::DegreeMismatch {
            expected: f.degree(),
            found: ord.len(),
        });
    }
    // Read f in ord-increasing order of arguments, as ranks of the values.
    let mut seq: Vec<usize> = ord.sequence().iter().map(|&a| ord.rank(f.apply(a))).collect();
    let mut buf = vec![0; seq.len()];
    Ok(merge_count(&mut seq, &mut buf))
}

fn merge_count(v: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = {
        let (l, r) = v.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        merge_count(l, bl) + merge_count(r, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[i] <= v[j] {
            buf[k] = v[i];
            i += 1;
        } else {
            buf[k] = v[j];
            j += 1;
            count += (mid - i) as u64;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    count
}

/// The same count by the quadratic definition.
pub fn inversion_count_by_definition(f: &Perm, ord: &TotalOrder) -> Result<u64> {
    if f.degree() != ord.len() {
        return Err(Error::DegreeMismatch {
            expected: f.degree(),
            found: ord.len(),
        });
    }
    let n = f.degree();
    let mut count = 0u64;
    for a in 0..n {
        for b in 0..n {
            if ord.rank(a) < ord.rank(b) && ord.rank(f.apply(b)) < ord.rank(f.apply(a)) {
                count += 1;
            }
        }
    }
    Ok(count)
}

pub fn parity_by_inversions(f: &Perm, ord: &TotalOrder) -> Result<Parity> {
    inversion_count(f, ord).map(Parity::from_bit)
}

pub fn parity_by_cycles(f: &Perm) -> Parity {
    f.parity()
}
