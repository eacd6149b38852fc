//! Explicit complete mappings and orthomorphisms: closed-form families,
//! fixed permutations of small groups, Singer cycles and linear maps.

use crate::case_table;
use crate::error::{Error, Result};
use crate::families::{
    digits, from_digits, is_prime, mk_cyclic, mk_elementary_abelian, mk_modular_16k,
    mk_semidirect_32, mk_two_generated_2group, xy_index, Sd32Variant, TwoGroupKind,
};
use crate::group::{FiniteGroup, Side};
use crate::mapping::{associated_orthomorphism, compose_with_inversion, is_complete_mapping};
use crate::pc::mk_small16_pc;
use crate::perm::{parse_cycle_tokens, Parity, Perm, TotalOrder};
use crate::witness::TransversalWitness;

fn ensure_cm(g: &FiniteGroup, f: &Perm, what: &str) -> Result<()> {
    if is_complete_mapping(g, f)? {
        Ok(())
    } else {
        Err(Error::Internal(format!("{what} is not a complete mapping of {}", g.name())))
    }
}

/// Parses cycle notation whose entries are element labels of `g`.
pub fn perm_from_labels(g: &FiniteGroup, text: &str) -> Result<Perm> {
    let cycles = parse_cycle_tokens(text)?
        .into_iter()
        .map(|cyc| {
            cyc.iter()
                .map(|t| {
                    g.find_label(t)
                        .ok_or_else(|| Error::Parse(format!("unknown element '{t}' in {}", g.name())))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Perm::from_cycles(g.order(), &cycles)
}

/// The four-case mapping on `D`, `Q` or `SD` of order `2^n`, with
/// `m = 2^{n-2}`:
/// `x^ℓ ↦ x^ℓ` and `x^ℓ y ↦ x^{-(ℓ+1)}` for `ℓ < m`,
/// `x^ℓ ↦ x^{ℓ-m} y` and `x^ℓ y ↦ x^{m-(ℓ+1)} y` for `ℓ ≥ m`.
pub fn hall_paige_even_cm(kind: TwoGroupKind, n: u32) -> Result<(FiniteGroup, Perm)> {
    if !matches!(kind, TwoGroupKind::D | TwoGroupKind::Q | TwoGroupKind::SD) {
        return Err(Error::InvalidArgument(format!("no four-case mapping for {kind}")));
    }
    let g = mk_two_generated_2group(kind, n)?;
    let m = 1usize << (n - 2);
    let half = 2 * m;
    let images = (0..2 * half)
        .map(|i| {
            let (l, e) = (i / 2, i % 2);
            match (e, l < m) {
                (0, true) => xy_index(l, 0),
                (0, false) => xy_index(l - m, 1),
                (_, true) => xy_index((half - (l + 1)) % half, 0),
                (_, false) => xy_index((m + half - (l + 1)) % half, 1),
            }
        })
        .collect();
    let f = Perm::from_images(images)?;
    ensure_cm(&g, &f, "four-case mapping")?;
    Ok((g, f))
}

fn sd_k(n: u32) -> Result<usize> {
    if !(4..=12).contains(&n) {
        return Err(Error::InvalidArgument(format!("semidihedral n must be in 4..=12, got {n}")));
    }
    Ok(1usize << (n - 3))
}

/// Which of the nine formula cases of the semidihedral orthomorphism covers
/// `x^ℓ y^ε` (1-based), for `k = 2^{n-3}`.
pub fn sd_case(k: usize, l: usize, e: usize) -> usize {
    let odd = l % 2 == 1;
    match e {
        0 if l < 2 * k => 1,
        0 if l < 3 * k => 2,
        0 => 3,
        _ if l < 2 * k && odd => 4,
        _ if l < k => 5,
        _ if l < 2 * k => 6,
        _ if odd && l < 3 * k => 7,
        _ if odd => 8,
        _ => 9,
    }
}

/// The nine-case closed form of `f̃` for the semidihedral four-case mapping.
pub fn sd_orthomorphism_formula(n: u32) -> Result<Perm> {
    let k = sd_k(n)? as i64;
    let modulus = 4 * k;
    let images = (0..8 * k)
        .map(|i| {
            let (l, e) = (i / 2, i % 2);
            let (exp, eps) = match sd_case(k as usize, l as usize, e as usize) {
                1 => (2 * l, 0),
                2 => (2 * l - 2 * k, 1),
                3 => (2 * l - 6 * k, 1),
                4 => (2 * l + 1, 1),
                5 => (2 * l + 2 * k + 1, 1),
                6 => (2 * l - 2 * k + 1, 1),
                7 => (2 * l - 2 * k + 1, 0),
                8 => (2 * l - 6 * k + 1, 0),
                _ => (2 * l - 4 * k + 1, 0),
            };
            xy_index(exp.rem_euclid(modulus) as usize, eps)
        })
        .collect();
    Perm::from_images(images)
}

/// `f̃` of the semidihedral four-case mapping, cross-checked against the
/// nine-case closed form.
pub fn sd_orthomorphism(n: u32) -> Result<(FiniteGroup, Perm)> {
    sd_k(n)?;
    let (g, f) = hall_paige_even_cm(TwoGroupKind::SD, n)?;
    let ft = associated_orthomorphism(&g, &f)?;
    if ft != sd_orthomorphism_formula(n)? {
        return Err(Error::Internal("nine-case formula disagrees with the group product".into()));
    }
    Ok((g, ft))
}

/// `x^{ℓ1} y^{ε1} < x^{ℓ2} y^{ε2}` iff `ε1 < ε2`, or `ε1 = ε2` and `ℓ1 < ℓ2`,
/// for a two-generated group of order `2^n` indexed by `2ℓ + ε`.
pub fn epsilon_major_order(n: u32) -> TotalOrder {
    let half = 1usize << (n - 1);
    let rank = (0..2 * half).map(|i| (i % 2) * half + i / 2).collect();
    TotalOrder::from_ranks(rank).expect("ranks form a bijection")
}

/// `29k²/2 − 2k`.
pub fn sd_inversion_formula(k: u64) -> u64 {
    29 * k * k / 2 - 2 * k
}

/// Inversions of `g` split by (a-case, b-case), computed by brute force.
/// Entry `[a-1][b-1]` counts pairs `a < b` with `g(b) < g(a)`.
pub fn sd_case_pair_counts(n: u32) -> Result<[[u64; 9]; 9]> {
    let k = sd_k(n)?;
    let (_, g) = sd_orthomorphism(n)?;
    let ord = epsilon_major_order(n);
    let seq = ord.sequence();
    let case: Vec<usize> = (0..g.degree()).map(|i| sd_case(k, i / 2, i % 2) - 1).collect();
    let mut out = [[0u64; 9]; 9];
    for (ia, &a) in seq.iter().enumerate() {
        for &b in &seq[ia + 1..] {
            if ord.rank(g.apply(b)) < ord.rank(g.apply(a)) {
                out[case[a]][case[b]] += 1;
            }
        }
    }
    Ok(out)
}

/// The per-case-pair inversion counts as closed forms in `k`
/// (`k` a power of two, at least 2).
pub fn sd_case_pair_table(k: u64) -> [[u64; 9]; 9] {
    let q = |four_times: u64| four_times / 4;
    let a = q(k * (k - 2));
    let b = q(k * (3 * k - 2));
    let kk = k * k;
    let mut t = [[0u64; 9]; 9];
    let mut set = |i: usize, j: usize, v: u64| t[i - 1][j - 1] = v;
    set(1, 7, a);
    set(1, 8, b);
    set(1, 9, kk);
    set(2, 3, kk);
    set(2, 4, b);
    set(2, 5, kk / 4);
    set(2, 6, kk / 2);
    set(2, 7, kk / 2);
    set(2, 8, kk / 2);
    set(2, 9, kk);
    set(3, 4, a);
    set(3, 6, kk / 4);
    set(3, 7, kk / 2);
    set(3, 8, kk / 2);
    set(3, 9, kk);
    set(4, 6, kk / 4);
    set(4, 7, kk / 2);
    set(4, 8, kk / 2);
    set(4, 9, kk);
    set(5, 4, kk / 4);
    set(5, 6, kk / 4);
    set(5, 7, kk / 4);
    set(5, 8, kk / 4);
    set(5, 9, kk / 2);
    set(6, 7, kk / 4);
    set(6, 8, kk / 4);
    set(6, 9, kk / 2);
    set(7, 8, kk / 4);
    set(7, 9, kk / 4);
    set(9, 8, kk / 4);
    t
}

/// A single-cycle complete mapping of `M_{2^n}` and the harmonious
/// ordering given by the orbit of the identity.
pub fn modular_harmonious(n: u32) -> Result<(FiniteGroup, Perm, Vec<usize>)> {
    if !(4..=12).contains(&n) {
        return Err(Error::InvalidArgument(format!("modular n must be in 4..=12, got {n}")));
    }
    let g = mk_two_generated_2group(TwoGroupKind::M, n)?;
    let m = 1usize << (n - 2);
    let half = 2 * m;
    let images = (0..2 * half)
        .map(|i| {
            let (l, e) = (i / 2, i % 2);
            match e {
                0 if (1..=m).contains(&l) => xy_index(l + 1, 0),
                0 => xy_index((l + m + 1) % half, 1),
                _ if l < m => xy_index((l + m + 2) % half, 0),
                _ => xy_index((l + 2) % half, 1),
            }
        })
        .collect();
    let f = Perm::from_images(images)?;
    ensure_cm(&g, &f, "single-cycle mapping")?;
    let mut order = vec![0usize];
    let mut x = f.apply(0);
    while x != 0 {
        order.push(x);
        x = f.apply(x);
    }
    Ok((g, f, order))
}

/// The 41-case even complete mapping of `M_{16k}` (index `ε·8k + ℓ` for
/// `y^ε x^ℓ`). The table's `f̃` column is checked against the group product.
pub fn modular_even_cm_16k(k: usize) -> Result<(FiniteGroup, Perm)> {
    let (f_images, ft_images) = case_table::table_images(k)?;
    let g = mk_modular_16k(k)?;
    let f = Perm::from_images(f_images)?;
    let ft = associated_orthomorphism(&g, &f)?;
    if ft.images() != ft_images.as_slice() {
        return Err(Error::Internal("f̃ column disagrees with the group product".into()));
    }
    Ok((g, f))
}

/// `59k² + 19k − 6`.
pub fn modular_inversion_formula(k: u64) -> u64 {
    59 * k * k + 19 * k - 6
}

/// Complete mappings of order-16 groups in 1-based cycle notation over the
/// pc element order `1, x, y, z, t, xy, xz, xt, yz, yt, zt, xyz, xyt, xzt,
/// yzt, xyzt`.
pub const ORDER16_FIXTURES: &[(usize, Parity, &str)] = &[
    (6, Parity::Even, "(1,7,8,4,6,13,3,2,12,14,9,10,5,15,16)"),
    (2, Parity::Even, "(1,4,6,2,16,9,5)(3,10,7,11,8)(13,14,15)"),
    (2, Parity::Odd, "(1,12,15,4,14,9,8,16,3,11)(2,7,5,13,6)"),
    (3, Parity::Even, "(2,15,12,11,7,3,9,4,5,13,14,6)(10,16)"),
    (3, Parity::Odd, "(1,6,9,16,12,8,13,4,10,7,3,15,5,2)"),
    (4, Parity::Even, "(1,8,10,12,13,4,11,3,9,15,2)(5,14,6,7,16)"),
    (4, Parity::Odd, "(1,2,11,8,15,12,7,14,3,5,13,16,4,9)"),
    (10, Parity::Even, "(1,12,4,5,7,6,13,8)(3,14,9)(10,11,15,16)"),
    (10, Parity::Odd, "(1,13,16,10,8,15,12,14,2)(3,5,7,6,11,4)"),
    (11, Parity::Even, "(1,6,10,8,14,7,13,11)(2,15,4,9,16)(3,12)"),
    (11, Parity::Odd, "(1,13,3,14,12,2,8,11,16)(4,7,6,15,10,5)"),
    (12, Parity::Even, "(1,16,9)(2,11,3,12,7,14)(4,6,5,13,10,15)"),
    (12, Parity::Odd, "(1,13,5,14,8)(3,7)(4,15,11,10)(6,9,12,16)"),
    (13, Parity::Even, "(1,11,4,16,8,13,9,3,10,7,12,5,2)(6,14,15)"),
    (13, Parity::Odd, "(1,15,7,2,3,10,6,8,16)(4,5,14,11,13,9)"),
];

/// A complete mapping of the order-16 group with the given small-group id
/// and parity. The listed pc fixtures come with their pc group; the other
/// ids fall back to the family constructions where one exists.
pub fn order16_fixture(id: usize, parity: Parity) -> Result<(FiniteGroup, Perm)> {
    if let Some((_, _, cycles)) = ORDER16_FIXTURES
        .iter()
        .find(|(i, p, _)| *i == id && *p == parity)
    {
        let g = mk_small16_pc(id)?;
        let f = Perm::parse_cycles(cycles, 16)?;
        ensure_cm(&g, &f, "order-16 fixture")?;
        return Ok((g, f));
    }
    let unknown = || Error::Unknown(format!("no fixed {parity} complete mapping of SmallGroup(16,{id})"));
    let (g, f) = match (id, parity) {
        (14, Parity::Even) => (mk_elementary_abelian(2, 4)?, singer_even_cm(4)?),
        (14, Parity::Odd) => field_fixture(FieldFixture::F16)?,
        (6, Parity::Odd) => {
            let (g, f, _) = modular_harmonious(4)?;
            (g, f)
        }
        (7, Parity::Even) => hall_paige_even_cm(TwoGroupKind::D, 4)?,
        (8, Parity::Even) => hall_paige_even_cm(TwoGroupKind::SD, 4)?,
        (9, Parity::Even) => hall_paige_even_cm(TwoGroupKind::Q, 4)?,
        (8, Parity::Odd) => {
            let (g, o) = sd_orthomorphism(4)?;
            let f = compose_with_inversion(&g, &o, Side::Right)?;
            (g, f)
        }
        (1..=14, _) => return Err(unknown()),
        _ => return Err(Error::InvalidArgument(format!("no group SmallGroup(16,{id})"))),
    };
    ensure_cm(&g, &f, "order-16 construction")?;
    if f.parity() != parity {
        return Err(Error::Internal(format!("SmallGroup(16,{id}) construction has the wrong parity")));
    }
    Ok((g, f))
}

/// Non-additive complete mappings of small fields and of `ℤ/9`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldFixture {
    F9,
    F11,
    F16,
    Z9,
}

impl FieldFixture {
    pub const ALL: [FieldFixture; 4] = [FieldFixture::F9, FieldFixture::F11, FieldFixture::F16, FieldFixture::Z9];

    pub fn cycles(self) -> &'static str {
        match self {
            FieldFixture::F9 => "(0)(2e2)(e1,e1+2e2,e2,2e1+2e2,2e1,2e1+e2,e1+e2)",
            FieldFixture::F11 => "(0)(6)(7)(9)(10)(1,4,2,8,5,3)",
            FieldFixture::F16 => {
                "(e1+e3,e2+e3+e4,e1+e2+e3)(e4)\
                 (0,e3+e4,e2+e3,e1,e1+e4,e3,e2+e4,e1+e2+e3+e4,e1+e2+e4,e1+e3+e4,e2,e1+e2)"
            }
            FieldFixture::Z9 => "(0,1,3,6,8)(2,4,7,5)",
        }
    }

    pub fn group(self) -> Result<FiniteGroup> {
        match self {
            FieldFixture::F9 => mk_elementary_abelian(3, 2),
            FieldFixture::F11 => Ok(mk_cyclic(11)?.with_name("F11")),
            FieldFixture::F16 => mk_elementary_abelian(2, 4),
            FieldFixture::Z9 => mk_cyclic(9),
        }
    }

    /// `(a, 2a)` with `a` fixed and `2a` moved, where the fixture has one.
    pub fn non_additivity_witness(self) -> Option<(&'static str, &'static str)> {
        match self {
            FieldFixture::F9 => Some(("2e2", "e2")),
            FieldFixture::F11 => Some(("6", "1")),
            _ => None,
        }
    }
}

impl std::str::FromStr for FieldFixture {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "9" | "f9" => Ok(FieldFixture::F9),
            "11" | "f11" => Ok(FieldFixture::F11),
            "16" | "f16" => Ok(FieldFixture::F16),
            "z9" => Ok(FieldFixture::Z9),
            _ => Err(Error::InvalidArgument(format!("no field fixture '{s}'"))),
        }
    }
}

/// The fixture's group and permutation, verified as a complete mapping.
pub fn field_fixture(which: FieldFixture) -> Result<(FiniteGroup, Perm)> {
    let g = which.group()?;
    let f = perm_from_labels(&g, which.cycles())?;
    ensure_cm(&g, &f, "field fixture")?;
    Ok((g, f))
}

/// Primitive polynomials over 𝔽_2 of degree 2..=8 as bit masks
/// (bit `i` is the coefficient of `x^i`).
pub const PRIMITIVE_POLYS: [(u32, u32); 7] = [
    (2, 0b111),
    (3, 0b1011),
    (4, 0b1_0011),
    (5, 0b10_0101),
    (6, 0b100_0011),
    (7, 0b1000_0011),
    (8, 0b1_0001_1101),
];

/// `v ↦ x·v` in `𝔽_2[x]/(p)`, with `e_i` standing for `x^{i-1}`.
pub fn singer_even_cm(d: u32) -> Result<Perm> {
    let &(_, poly) = PRIMITIVE_POLYS
        .iter()
        .find(|(deg, _)| *deg == d)
        .ok_or_else(|| Error::InvalidArgument(format!("Singer cycles are pinned for 2 <= d <= 8, got {d}")))?;
    let n = 1usize << d;
    let images = (0..n)
        .map(|v| {
            let w = v << 1;
            if w & n != 0 {
                w ^ poly as usize
            } else {
                w
            }
        })
        .collect();
    Perm::from_images(images)
}

fn rank_mod_p(m: &[Vec<usize>], p: usize) -> usize {
    let mut a: Vec<Vec<usize>> = m.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let inv = |x: usize| (1..p).find(|y| x * y % p == 1).expect("p is prime");
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let s = inv(a[rank][c]);
        for x in a[rank].iter_mut() {
            *x = *x * s % p;
        }
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let factor = a[r][c];
                let pivot = a[rank].clone();
                for (x, &y) in a[r].iter_mut().zip(&pivot) {
                    *x = (*x + p * p - factor * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn check_square(m: &[Vec<usize>], p: usize) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let d = m.len();
    if m.iter().any(|r| r.len() != d) {
        return Err(Error::InvalidArgument("matrix is not square".into()));
    }
    Ok(d)
}

/// Whether `v ↦ Mv` is a complete mapping of 𝔽_p^d, i.e. `M` and `M + I`
/// are both invertible.
pub fn is_linear_complete_mapping(m: &[Vec<usize>], p: usize) -> Result<bool> {
    let d = check_square(m, p)?;
    let shifted: Vec<Vec<usize>> = (0..d)
        .map(|i| (0..d).map(|j| (m[i][j] + usize::from(i == j)) % p).collect())
        .collect();
    Ok(rank_mod_p(m, p) == d && rank_mod_p(&shifted, p) == d)
}

/// `v ↦ Mv` on the indices of [`mk_elementary_abelian`], when bijective.
pub fn linear_map_perm(m: &[Vec<usize>], p: usize) -> Result<Perm> {
    let d = check_square(m, p)?;
    let n = p.pow(d as u32);
    let images = (0..n)
        .map(|i| {
            let v = digits(i, p, d);
            let w: Vec<usize> = (0..d)
                .map(|r| (0..d).map(|c| m[r][c] * v[c]).sum::<usize>() % p)
                .collect();
            from_digits(&w, p)
        })
        .collect();
    Perm::from_images(images)
}

/// Transversal witness for the order-32 groups `C_4 ⋉ (C_4 × C_2)` and
/// `C_4 ⋉ C_2^3`, from `Θ(1)=1, Θ(y)=z, Θ(z)=yz, Θ(yz)=y` on
/// `U = {1, y, z, yz}`.
pub fn theta_transversal_witness(variant: Sd32Variant) -> Result<(FiniteGroup, TransversalWitness)> {
    let g = mk_semidirect_32(variant)?;
    // Indices of x, the second generator of H, and 1, y, z, yz.
    let (x, h2, u) = match variant {
        Sd32Variant::I2 => (8, 4, vec![0, 2, 1, 3]),
        Sd32Variant::I6 => (8, 5, vec![0, 1, 2, 3]),
    };
    let h = g.generate(&[x, h2]);
    let s = Perm::from_images(vec![0, 2, 3, 1])?;
    let w = TransversalWitness::from_s(&g, h, u, s)
        .ok_or_else(|| Error::Internal("Θ does not yield a transversal witness".into()))?;
    Ok((g, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::is_isomorphic;
    use crate::mapping::is_orthomorphism;
    use crate::perm::inversion_count_by_definition;

    #[test]
    fn hall_paige_d8_census() {
        let (_, f) = hall_paige_even_cm(TwoGroupKind::D, 3).unwrap();
        // fixed points, transpositions, 3-cycles, 4-cycles
        assert_eq!(f.cycle_census()[1..=4], [2, 1, 0, 1]);
        assert_eq!(f.parity(), Parity::Even);
        assert!(hall_paige_even_cm(TwoGroupKind::M, 4).is_err());
        assert!(hall_paige_even_cm(TwoGroupKind::Q, 3).is_err());
    }

    #[test]
    fn sd_small_values() {
        let (g, o) = sd_orthomorphism(4).unwrap();
        assert_eq!(o.apply(0), 0);
        assert!(is_orthomorphism(&g, &o).unwrap());
        let ord = epsilon_major_order(4);
        assert_eq!(inversion_count_by_definition(&o, &ord).unwrap(), 54);
        assert_eq!(sd_inversion_formula(8), 912);
        let counts = sd_case_pair_counts(4).unwrap();
        assert_eq!(counts, sd_case_pair_table(2));
        assert_eq!(counts.iter().flatten().sum::<u64>(), 54);
    }

    #[test]
    fn modular_cycle_small() {
        let (g, f, order) = modular_harmonious(4).unwrap();
        assert_eq!(f.cycle_type(), vec![16]);
        assert_eq!(order.len(), 16);
        // f(x) = x²
        assert_eq!(f.apply(xy_index(1, 0)), xy_index(2, 0));
        assert!(crate::mapping::is_harmonious_ordering(&g, &order).unwrap());
    }

    #[test]
    fn modular_even_k2() {
        let (g, f) = modular_even_cm_16k(2).unwrap();
        assert_eq!(f.apply(0), 0);
        let ord = TotalOrder::index_order(g.order());
        assert_eq!(inversion_count_by_definition(&f, &ord).unwrap(), 268);
        assert_eq!(modular_inversion_formula(4), 1014);
    }

    #[test]
    fn order16_fixtures_verify() {
        for &(id, parity, _) in ORDER16_FIXTURES {
            let (_, f) = order16_fixture(id, parity).unwrap();
            assert_eq!(f.parity(), parity, "SmallGroup(16,{id})");
        }
        for (id, parity) in [(14, Parity::Even), (14, Parity::Odd), (6, Parity::Odd), (7, Parity::Even), (8, Parity::Odd), (9, Parity::Even)] {
            let (_, f) = order16_fixture(id, parity).unwrap();
            assert_eq!(f.parity(), parity);
        }
        assert!(matches!(order16_fixture(5, Parity::Odd), Err(Error::Unknown(_))));
        assert!(order16_fixture(17, Parity::Odd).is_err());
    }

    #[test]
    fn field_fixtures() {
        let parities = [Parity::Even, Parity::Odd, Parity::Odd, Parity::Odd];
        for (which, parity) in FieldFixture::ALL.into_iter().zip(parities) {
            let (g, f) = field_fixture(which).unwrap();
            assert_eq!(f.parity(), parity, "{which:?}");
            if let Some((fixed, moved)) = which.non_additivity_witness() {
                let a = g.find_label(fixed).unwrap();
                let b = g.find_label(moved).unwrap();
                assert_eq!(g.mul(a, a), b);
                assert_eq!(f.apply(a), a);
                assert_ne!(f.apply(b), b);
            }
        }
        let (_, f16) = field_fixture(FieldFixture::F16).unwrap();
        assert_eq!(f16.cycle_type(), vec![12, 3, 1]);
    }

    #[test]
    fn singer_cycles() {
        for d in 2..=8u32 {
            let f = singer_even_cm(d).unwrap();
            let g = mk_elementary_abelian(2, d as usize).unwrap();
            assert_eq!(f.cycle_type(), vec![(1 << d) - 1, 1], "d = {d}");
            assert_eq!(f.parity(), Parity::Even);
            assert!(is_complete_mapping(&g, &f).unwrap());
        }
        assert!(singer_even_cm(9).is_err());
    }

    #[test]
    fn linear_maps() {
        let id3 = vec![vec![1, 0], vec![0, 1]];
        assert!(is_linear_complete_mapping(&id3, 3).unwrap());
        assert!(!is_linear_complete_mapping(&id3, 2).unwrap());
        assert!(is_linear_complete_mapping(&[vec![1, 2]], 3).is_err());
        // All 512 matrices over 𝔽_2 of size 3 against the induced map.
        let g = mk_elementary_abelian(2, 3).unwrap();
        for bits in 0..512u32 {
            let m: Vec<Vec<usize>> = (0..3)
                .map(|r| (0..3).map(|c| ((bits >> (3 * r + c)) & 1) as usize).collect())
                .collect();
            let lin = is_linear_complete_mapping(&m, 2).unwrap();
            let brute = linear_map_perm(&m, 2)
                .map(|f| is_complete_mapping(&g, &f).unwrap())
                .unwrap_or(false);
            assert_eq!(lin, brute);
        }
    }

    #[test]
    fn theta_witnesses() {
        let (g, w) = theta_transversal_witness(Sd32Variant::I2).unwrap();
        assert_eq!(w.t.images(), &[0, 3, 1, 2]);
        assert!(w.verify(&g));
        let c4c2 = crate::families::mk_two_generated_2group(TwoGroupKind::AC, 3).unwrap();
        let (hg, _) = g.subgroup_as_group(&w.subgroup).unwrap();
        assert!(is_isomorphic(&hg, &c4c2));

        let (g6, w6) = theta_transversal_witness(Sd32Variant::I6).unwrap();
        assert!(w6.verify(&g6));
        let (hg6, _) = g6.subgroup_as_group(&w6.subgroup).unwrap();
        assert!(is_isomorphic(&hg6, &c4c2));
        let k = g6.subgroup_from_members(&w6.transversal).unwrap();
        assert_eq!(k.order(), 4);
    }
}
