//! Constructors for the group families used throughout the crate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, MAX_TABLE_ORDER};

pub fn mk_cyclic(m: usize) -> Result<FiniteGroup> {
    if m == 0 {
        return Err(Error::InvalidArgument("cyclic order must be positive".into()));
    }
    let labels = (0..m).map(|i| i.to_string()).collect();
    FiniteGroup::from_fn(format!("C{m}"), m, labels, |a, b| (a + b) % m)
}

/// `G × H` with element `(g,h)` at index `g·|H| + h`.
pub fn mk_direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    let (m, n) = (g.order(), h.order());
    let labels = (0..m * n)
        .map(|i| format!("({},{})", g.label(i / n), h.label(i % n)))
        .collect();
    FiniteGroup::from_fn(
        format!("{}x{}", g.name(), h.name()),
        m * n,
        labels,
        |a, b| g.mul(a / n, b / n) * n + h.mul(a % n, b % n),
    )
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Label of a coordinate vector, e.g. `e1+2e3`; the zero vector is `0`.
pub fn vector_label(coords: &[usize]) -> String {
    let terms: Vec<String> = coords
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            if c == 1 {
                format!("e{}", i + 1)
            } else {
                format!("{c}e{}", i + 1)
            }
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

/// Base-`p` digits of `index`, least significant first (`e1` first).
pub fn digits(index: usize, p: usize, d: usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(d);
    let mut x = index;
    for _ in 0..d {
        v.push(x % p);
        x /= p;
    }
    v
}

pub fn from_digits(coords: &[usize], p: usize) -> usize {
    coords.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Additive group of 𝔽_p^d; index `Σ c_i p^{i-1}`.
pub fn mk_elementary_abelian(p: usize, d: usize) -> Result<FiniteGroup> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let n = p
        .checked_pow(d as u32)
        .filter(|&n| n <= MAX_TABLE_ORDER)
        .ok_or_else(|| Error::InvalidArgument(format!("{p}^{d} exceeds the table limit")))?;
    let labels = (0..n).map(|i| vector_label(&digits(i, p, d))).collect();
    FiniteGroup::from_fn(format!("F{p}^{d}"), n, labels, |a, b| {
        let (va, vb) = (digits(a, p, d), digits(b, p, d));
        let sum: Vec<usize> = va.iter().zip(&vb).map(|(x, y)| (x + y) % p).collect();
        from_digits(&sum, p)
    })
}

/// The five families of noncyclic 2-groups with a cyclic subgroup of index 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TwoGroupKind {
    /// `C_{2^{n-1}} × C_2`.
    AC,
    /// Dihedral.
    D,
    /// Generalized quaternion.
    Q,
    /// Semidihedral.
    SD,
    /// Modular.
    M,
}

impl TwoGroupKind {
    pub fn min_n(self) -> u32 {
        match self {
            TwoGroupKind::AC | TwoGroupKind::D => 3,
            _ => 4,
        }
    }

    /// `r` with `y⁻¹xy = x^r`, and `s` with `y² = x^s`.
    fn relations(self, n: u32) -> (usize, usize) {
        let half = 1usize << (n - 1);
        let m = 1usize << (n - 2);
        match self {
            TwoGroupKind::AC => (1, 0),
            TwoGroupKind::D => (half - 1, 0),
            TwoGroupKind::Q => (half - 1, m),
            TwoGroupKind::SD => (m - 1, 0),
            TwoGroupKind::M => (m + 1, 0),
        }
    }
}

impl fmt::Display for TwoGroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TwoGroupKind::AC => "AC",
            TwoGroupKind::D => "D",
            TwoGroupKind::Q => "Q",
            TwoGroupKind::SD => "SD",
            TwoGroupKind::M => "M",
        };
        f.write_str(s)
    }
}

impl FromStr for TwoGroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AC" => Ok(TwoGroupKind::AC),
            "D" => Ok(TwoGroupKind::D),
            "Q" => Ok(TwoGroupKind::Q),
            "SD" => Ok(TwoGroupKind::SD),
            "M" => Ok(TwoGroupKind::M),
            _ => Err(Error::Parse(format!("unknown 2-group family '{s}'"))),
        }
    }
}

/// Label for `x^l y^e`.
pub fn xy_label(l: usize, e: usize) -> String {
    let x = match l {
        0 => String::new(),
        1 => "x".to_string(),
        _ => format!("x^{l}"),
    };
    let y = if e == 1 { "y" } else { "" };
    let s = format!("{x}{y}");
    if s.is_empty() {
        "1".to_string()
    } else {
        s
    }
}

/// Index of `x^l y^e` in a two-generated 2-group.
#[inline]
pub fn xy_index(l: usize, e: usize) -> usize {
    2 * l + e
}

/// Order `2^n` group with elements `x^l y^e` at index `2l + e`.
pub fn mk_two_generated_2group(kind: TwoGroupKind, n: u32) -> Result<FiniteGroup> {
    if n < kind.min_n() {
        return Err(Error::InvalidArgument(format!(
            "{kind} requires n >= {}, got {n}",
            kind.min_n()
        )));
    }
    if n > 12 {
        return Err(Error::InvalidArgument(format!("n = {n} exceeds the table limit")));
    }
    let half = 1usize << (n - 1);
    let (r, s) = kind.relations(n);
    let labels = (0..2 * half).map(|i| xy_label(i / 2, i % 2)).collect();
    FiniteGroup::from_fn(format!("{kind}{}", 2 * half), 2 * half, labels, |a, b| {
        let (l1, e1) = (a / 2, a % 2);
        let (l2, e2) = (b / 2, b % 2);
        // y x^l = x^{lr} y since r² ≡ 1.
        let twisted = if e1 == 1 { l2 * r % half } else { l2 };
        let extra = if e1 == 1 && e2 == 1 { s } else { 0 };
        xy_index((l1 + twisted + extra) % half, (e1 + e2) % 2)
    })
}

/// Label for `y^e x^l`.
pub fn yx_label(e: usize, l: usize) -> String {
    let y = if e == 1 { "y" } else { "" };
    let x = match l {
        0 => String::new(),
        1 => "x".to_string(),
        _ => format!("x^{l}"),
    };
    let s = format!("{y}{x}");
    if s.is_empty() {
        "1".to_string()
    } else {
        s
    }
}

/// `⟨x,y : x^{8k} = y² = 1, y⁻¹xy = x^{1+4k}⟩` with `y^e x^l` at index
/// `e·8k + l`, multiplied by the two-case rule on normal forms.
pub fn mk_modular_16k(k: usize) -> Result<FiniteGroup> {
    if k == 0 || 16 * k > MAX_TABLE_ORDER {
        return Err(Error::InvalidArgument(format!("unsupported k = {k}")));
    }
    let len = 8 * k;
    let labels = (0..2 * len).map(|i| yx_label(i / len, i % len)).collect();
    FiniteGroup::from_fn(format!("M{}", 16 * k), 2 * len, labels, |a, b| {
        let (e1, l1) = (a / len, a % len);
        let (e2, l2) = (b / len, b % len);
        let shift = if e2 == 0 || l1 % 2 == 0 { 0 } else { 4 * k };
        ((e1 + e2) % 2) * len + (l1 + l2 + shift) % len
    })
}

/// Which order-32 semidirect product `C_4 ⋉ A` to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sd32Variant {
    /// `A = ⟨y⟩ × ⟨z⟩ ≅ C_4 × C_2`, `x⁻¹yx = yz`, `x` centralizes `z`.
    I2,
    /// `A = ⟨y,z,t⟩ ≅ C_2^3`, `x⁻¹yx = z`, `x⁻¹zx = t`, `x⁻¹tx = yzt`.
    I6,
}

impl FromStr for Sd32Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "i2" | "2" => Ok(Sd32Variant::I2),
            "i6" | "6" => Ok(Sd32Variant::I6),
            _ => Err(Error::Parse(format!("unknown order-32 variant '{s}'"))),
        }
    }
}

/// Builds `⟨x⟩ ⋉ A` with `|x| = 4`, elements `x^a v` at index `a·|A| + v`.
/// `alpha(v)` must be `x⁻¹ v x`; product is `x^{a+b} α^b(v) w`.
fn c4_semidirect(
    name: &str,
    a_order: usize,
    a_mul: impl Fn(usize, usize) -> usize,
    alpha: impl Fn(usize) -> usize,
    a_label: impl Fn(usize) -> String,
) -> Result<FiniteGroup> {
    let alpha_pow = |v: usize, b: usize| (0..b).fold(v, |acc, _| alpha(acc));
    let labels = (0..4 * a_order)
        .map(|i| {
            let (a, v) = (i / a_order, i % a_order);
            let x = match a {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{a}"),
            };
            let rest = if v == 0 { String::new() } else { a_label(v) };
            let s = format!("{x}{rest}");
            if s.is_empty() {
                "1".to_string()
            } else {
                s
            }
        })
        .collect();
    FiniteGroup::from_fn(name, 4 * a_order, labels, |p, q| {
        let (a, v) = (p / a_order, p % a_order);
        let (b, w) = (q / a_order, q % a_order);
        ((a + b) % 4) * a_order + a_mul(alpha_pow(v, b), w)
    })
}

/// The two order-32 groups `C_4 ⋉ A` used for the transversal lifting route.
pub fn mk_semidirect_32(variant: Sd32Variant) -> Result<FiniteGroup> {
    let g = match variant {
        Sd32Variant::I2 => {
            // A = C4 × C2 with y^i z^j at index 2i + j.
            let mul = |v: usize, w: usize| ((v / 2 + w / 2) % 4) * 2 + (v % 2 + w % 2) % 2;
            let y = 2;
            let z = 1;
            // α(y^i z^j) = (yz)^i z^j.
            let alpha = move |v: usize| {
                let (i, j) = (v / 2, v % 2);
                let mut acc = 0;
                for _ in 0..i {
                    acc = mul(acc, mul(y, z));
                }
                if j == 1 {
                    acc = mul(acc, z);
                }
                acc
            };
            let label = |v: usize| {
                let (i, j) = (v / 2, v % 2);
                let y = match i {
                    0 => String::new(),
                    1 => "y".to_string(),
                    _ => format!("y^{i}"),
                };
                format!("{y}{}", if j == 1 { "z" } else { "" })
            };
            c4_semidirect("SG32_2", 8, mul, alpha, label)?
        }
        Sd32Variant::I6 => {
            // A = C2^3 with bits y = 1, z = 2, t = 4.
            let mul = |v: usize, w: usize| v ^ w;
            let alpha = |v: usize| {
                let mut out = 0;
                if v & 1 != 0 {
                    out ^= 2;
                }
                if v & 2 != 0 {
                    out ^= 4;
                }
                if v & 4 != 0 {
                    out ^= 7;
                }
                out
            };
            let label = |v: usize| {
                let mut s = String::new();
                for (bit, c) in [(1, 'y'), (2, 'z'), (4, 't')] {
                    if v & bit != 0 {
                        s.push(c);
                    }
                }
                s
            };
            c4_semidirect("SG32_6", 8, mul, alpha, label)?
        }
    };
    if g.order() != 32 {
        return Err(Error::Internal("semidirect product has wrong order".into()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::is_isomorphic;

    #[test]
    fn cyclic_basics() {
        assert_eq!(mk_cyclic(1).unwrap().order(), 1);
        let c9 = mk_cyclic(9).unwrap();
        assert_eq!(c9.element_order(1), 9);
        assert!(!mk_cyclic(6).unwrap().hall_paige_condition());
    }

    #[test]
    fn direct_products() {
        let c2 = mk_cyclic(2).unwrap();
        let v4 = mk_direct_product(&c2, &c2).unwrap();
        assert_eq!(v4.order(), 4);
        assert!((1..4).all(|g| v4.element_order(g) == 2));
        let c4c2 = mk_direct_product(&mk_cyclic(4).unwrap(), &c2).unwrap();
        let ac8 = mk_two_generated_2group(TwoGroupKind::AC, 3).unwrap();
        assert!(is_isomorphic(&c4c2, &ac8));
        let c3 = mk_cyclic(3).unwrap();
        let c3c3 = mk_direct_product(&c3, &c3).unwrap();
        assert!(is_isomorphic(&c3c3, &mk_elementary_abelian(3, 2).unwrap()));
    }

    #[test]
    fn elementary_abelian_labels() {
        let f9 = mk_elementary_abelian(3, 2).unwrap();
        assert_eq!(f9.order(), 9);
        assert!((1..9).all(|g| f9.element_order(g) == 3));
        assert_eq!(f9.label(0), "0");
        assert_eq!(f9.label(1), "e1");
        assert_eq!(f9.label(3), "e2");
        assert_eq!(f9.label(7), "e1+2e2");
        let f4 = mk_elementary_abelian(2, 2).unwrap();
        assert!((1..4).all(|g| f4.element_order(g) == 2));
        assert!(mk_elementary_abelian(4, 2).is_err());
        assert_eq!(mk_elementary_abelian(2, 4).unwrap().order(), 16);
    }

    fn x(l: usize) -> usize {
        xy_index(l, 0)
    }
    const Y: usize = 1;

    #[test]
    fn dihedral_and_quaternion_relations() {
        let d8 = mk_two_generated_2group(TwoGroupKind::D, 3).unwrap();
        assert_eq!(d8.element_order(x(1)), 4);
        assert_eq!(d8.conjugate(x(1), Y), x(3));
        assert_eq!(d8.commutator(x(1), Y), x(2));
        let q16 = mk_two_generated_2group(TwoGroupKind::Q, 4).unwrap();
        assert_eq!(q16.mul(Y, Y), x(4));
        assert_eq!(q16.element_order(Y), 4);
        let m16 = mk_two_generated_2group(TwoGroupKind::M, 4).unwrap();
        assert_eq!(m16.conjugate(x(1), Y), x(5));
        assert!(mk_two_generated_2group(TwoGroupKind::Q, 3).is_err());
    }

    #[test]
    fn semidihedral_matches_three_case_product() {
        for n in 4..=7u32 {
            let g = mk_two_generated_2group(TwoGroupKind::SD, n).unwrap();
            let len = 1usize << (n - 1);
            let k = len / 4;
            for a in 0..2 * len {
                for b in 0..2 * len {
                    let (l1, e1, l2, e2) = (a / 2, a % 2, b / 2, b % 2);
                    let l = if e1 == 0 {
                        l1 + l2
                    } else if l2 % 2 == 0 {
                        l1 + len - l2
                    } else {
                        l1 + len - l2 + 2 * k
                    };
                    assert_eq!(g.mul(a, b), xy_index(l % len, (e1 + e2) % 2));
                }
            }
        }
    }

    #[test]
    fn modular_reindexed_matches_presentation() {
        for n in 5..=8u32 {
            let k = 1usize << (n - 4);
            let len = 8 * k;
            let m = mk_two_generated_2group(TwoGroupKind::M, n).unwrap();
            let myx = mk_modular_16k(k).unwrap();
            // y^e x^l = x^{l r^e} y^e in the presentation normal form.
            let r = 4 * k + 1;
            let to_xy = |i: usize| {
                let (e, l) = (i / len, i % len);
                let l2 = if e == 1 { l * r % len } else { l };
                xy_index(l2, e)
            };
            for a in 0..2 * len {
                for b in 0..2 * len {
                    assert_eq!(to_xy(myx.mul(a, b)), m.mul(to_xy(a), to_xy(b)));
                }
            }
        }
    }

    #[test]
    fn semidirect_32_structure() {
        let g2 = mk_semidirect_32(Sd32Variant::I2).unwrap();
        let (x, y, z) = (8, 2, 1);
        assert_eq!(g2.element_order(x), 4);
        assert_eq!(g2.element_order(y), 4);
        assert_eq!(g2.conjugate(y, x), g2.mul(y, z));
        let h = g2.generate(&[x, g2.mul(y, y)]);
        assert_eq!(h.order(), 8);
        let (hg, _) = g2.subgroup_as_group(&h).unwrap();
        let c4c2 = mk_direct_product(&mk_cyclic(4).unwrap(), &mk_cyclic(2).unwrap()).unwrap();
        assert!(is_isomorphic(&hg, &c4c2));

        let g6 = mk_semidirect_32(Sd32Variant::I6).unwrap();
        let (y, z, t) = (1, 2, 4);
        assert_eq!(g6.conjugate(t, x), 7);
        assert_eq!(g6.conjugate(y, x), z);
        assert_eq!(g6.generate(&[y, z]).order(), 4);
        assert!(!g6.is_abelian());
        assert!(!g2.is_abelian());
    }
}
