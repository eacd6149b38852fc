//! Complete mappings, orthomorphisms and the transforms between them.

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Side, Subgroup};
use crate::perm::{Parity, Perm};

fn check_degree(g: &FiniteGroup, f: &Perm) -> Result<()> {
    if f.degree() != g.order() {
        return Err(Error::DegreeMismatch {
            expected: g.order(),
            found: f.degree(),
        });
    }
    Ok(())
}

fn is_bijective(n: usize, values: impl Iterator<Item = usize>) -> bool {
    let mut seen = vec![false; n];
    for v in values {
        if seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// True iff `g ↦ g·f(g)` is a permutation.
pub fn is_complete_mapping(g: &FiniteGroup, f: &Perm) -> Result<bool> {
    check_degree(g, f)?;
    Ok(is_bijective(
        g.order(),
        (0..g.order()).map(|x| g.mul(x, f.apply(x))),
    ))
}

/// True iff `g ↦ g⁻¹·f(g)` is a permutation.
pub fn is_orthomorphism(g: &FiniteGroup, f: &Perm) -> Result<bool> {
    check_degree(g, f)?;
    Ok(is_bijective(
        g.order(),
        (0..g.order()).map(|x| g.mul(g.inv(x), f.apply(x))),
    ))
}

/// `f̃ : g ↦ g·f(g)`.
pub fn associated_orthomorphism(g: &FiniteGroup, f: &Perm) -> Result<Perm> {
    check_degree(g, f)?;
    let images: Vec<usize> = (0..g.order()).map(|x| g.mul(x, f.apply(x))).collect();
    Perm::from_images(images)
        .map_err(|_| Error::NotCompleteMapping("g ↦ g·f(g) is not injective".into()))
}

/// `Right`: `f ∘ inv`. `Left`: `inv ∘ f`, defined for abelian groups only.
pub fn compose_with_inversion(g: &FiniteGroup, f: &Perm, side: Side) -> Result<Perm> {
    check_degree(g, f)?;
    let inv = g.inversion_perm();
    match side {
        Side::Right => f.compose(&inv),
        Side::Left => {
            if !g.is_abelian() {
                return Err(Error::NotAbelian);
            }
            inv.compose(f)
        }
    }
}

/// The cyclic listing as a single cycle `(seq[0], seq[1], ...)`.
fn listing_cycle(g: &FiniteGroup, seq: &[usize]) -> Result<Perm> {
    if seq.len() != g.order() {
        return Err(Error::InvalidArgument(format!(
            "listing has {} entries for a group of order {}",
            seq.len(),
            g.order()
        )));
    }
    Perm::from_images(seq.to_vec())
        .map_err(|_| Error::InvalidArgument("listing repeats an element".into()))?;
    Perm::cycle(g.order(), seq)
}

/// Consecutive cyclic products `g_i g_{i+1}` are pairwise distinct.
/// Cross-checked against the single-cycle complete mapping it defines.
pub fn is_harmonious_ordering(g: &FiniteGroup, seq: &[usize]) -> Result<bool> {
    let cycle = listing_cycle(g, seq)?;
    let n = seq.len();
    let direct = is_bijective(n, (0..n).map(|i| g.mul(seq[i], seq[(i + 1) % n])));
    let via_cycle = is_complete_mapping(g, &cycle)?;
    if direct != via_cycle {
        return Err(Error::Internal(
            "harmonious ordering views disagree".into(),
        ));
    }
    Ok(direct)
}

/// Partial products `b_1..b_n` of a listing.
pub fn partial_products(g: &FiniteGroup, seq: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    seq.iter()
        .map(|&s| {
            acc = g.mul(acc, s);
            acc
        })
        .collect()
}

/// R-sequencing test: `seq[0] = 1`, `b_1..b_{n-1}` distinct and `b_n = 1`.
/// Cross-checked against the orthomorphism `(b_1,...,b_{n-1})`.
pub fn is_r_sequencing(g: &FiniteGroup, seq: &[usize]) -> Result<bool> {
    let n = g.order();
    if seq.len() != n {
        return Err(Error::InvalidArgument("listing length differs from the group order".into()));
    }
    if seq.first() != Some(&0) {
        return Err(Error::InvalidArgument("an R-sequencing starts at the identity".into()));
    }
    if !is_bijective(n, seq.iter().copied()) {
        return Err(Error::InvalidArgument("listing repeats an element".into()));
    }
    let b = partial_products(g, seq);
    let distinct = is_bijective(n, b[..n - 1].iter().copied());
    let direct = distinct && b[n - 1] == 0;
    let via_orth = distinct && is_orthomorphism(g, &Perm::cycle(n, &b[..n - 1])?)?;
    if direct != via_orth {
        return Err(Error::Internal("R-sequencing views disagree".into()));
    }
    Ok(direct)
}

/// The orthomorphism `(b_1, ..., b_{n-1})` attached to an R-sequencing.
pub fn r_sequencing_orthomorphism(g: &FiniteGroup, seq: &[usize]) -> Result<Perm> {
    if !is_r_sequencing(g, seq)? {
        return Err(Error::InvalidArgument("not an R-sequencing".into()));
    }
    let b = partial_products(g, seq);
    Perm::cycle(g.order(), &b[..g.order() - 1])
}

/// `f` restricted to `h`, as a permutation of `h`'s own indexing
/// (position in the sorted member list).
pub fn restrict_to_subgroup(f: &Perm, h: &Subgroup) -> Result<Perm> {
    let mut pos = vec![usize::MAX; f.degree()];
    for (i, &m) in h.members().iter().enumerate() {
        pos[m] = i;
    }
    let images = h
        .members()
        .iter()
        .map(|&m| {
            let y = f.apply(m);
            if pos[y] == usize::MAX {
                Err(Error::InvalidArgument("mapping does not stabilize the subgroup".into()))
            } else {
                Ok(pos[y])
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Perm::from_images(images)
}

/// Replaces `f` on `h` by `inner` (a complete mapping of `h` as a group)
/// and verifies the result and its parity.
pub fn splice(g: &FiniteGroup, h: &Subgroup, f: &Perm, inner: &Perm) -> Result<Perm> {
    check_degree(g, f)?;
    if !is_complete_mapping(g, f)? {
        return Err(Error::NotCompleteMapping("outer mapping".into()));
    }
    let f_on_h = restrict_to_subgroup(f, h)?;
    let (hg, emb) = g.subgroup_as_group(h)?;
    if !is_complete_mapping(&hg, inner)? {
        return Err(Error::NotCompleteMapping("inner mapping of the subgroup".into()));
    }
    let mut images = f.images().to_vec();
    for (i, &m) in emb.iter().enumerate() {
        images[m] = emb[inner.apply(i)];
    }
    let out = Perm::from_images(images)?;
    if !is_complete_mapping(g, &out)? {
        return Err(Error::Internal("spliced mapping is not complete".into()));
    }
    let expected = f.parity() + inner.parity() + f_on_h.parity();
    if out.parity() != expected {
        return Err(Error::Internal("spliced parity differs from the sum rule".into()));
    }
    Ok(out)
}

fn feistel_check(f_table: &[usize], n: u32) -> Result<usize> {
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("Feistel width {n} is odd")));
    }
    let half = 1usize << (n / 2);
    if f_table.len() != half || f_table.iter().any(|&v| v >= half) {
        return Err(Error::InvalidArgument(format!(
            "round function must map {half} values into 0..{half}"
        )));
    }
    Ok(half)
}

/// `(v_l, v_r) ↦ (v_r, v_l + F(v_r))` on 𝔽_2^n, with `(v_l, v_r)` at index
/// `v_l·2^{n/2} + v_r`.
pub fn feistel_round(f_table: &[usize], n: u32) -> Result<Perm> {
    let half = feistel_check(f_table, n)?;
    let images = (0..half * half)
        .map(|v| {
            let (vl, vr) = (v / half, v % half);
            vr * half + (vl ^ f_table[vr])
        })
        .collect();
    Ok(Perm::from_images_unchecked(images))
}

/// `(w_l, w_r) ↦ (w_r + F(w_l), w_l)`.
pub fn feistel_inverse(f_table: &[usize], n: u32) -> Result<Perm> {
    let half = feistel_check(f_table, n)?;
    let images = (0..half * half)
        .map(|w| {
            let (wl, wr) = (w / half, w % half);
            (wr ^ f_table[wl]) * half + wl
        })
        .collect();
    Ok(Perm::from_images_unchecked(images))
}

/// `f_S(v) = v + (v ⊕ 1) + S(v ⊕ 1)` where `+` is XOR and `⊕` is addition
/// modulo `2^m`, bit strings read as big-endian integers.
pub fn gost_fs(s: &Perm) -> Result<Vec<usize>> {
    let size = s.degree();
    if !size.is_power_of_two() {
        return Err(Error::InvalidArgument("S must act on 2^m points".into()));
    }
    Ok((0..size)
        .map(|v| {
            let w = (v + 1) % size;
            v ^ w ^ s.apply(w)
        })
        .collect())
}

pub fn gost_fs_injective(s: &Perm) -> Result<bool> {
    let f = gost_fs(s)?;
    Ok(is_bijective(s.degree(), f.into_iter()))
}

/// The round `(v_l, v_r) ↦ (v_r ⊕ 1, v_l + S(v_r ⊕ 1))` on 𝔽_2^{2m}.
pub fn gost_round(s: &Perm) -> Result<Perm> {
    let half = s.degree();
    if !half.is_power_of_two() {
        return Err(Error::InvalidArgument("S must act on 2^m points".into()));
    }
    let images = (0..half * half)
        .map(|v| {
            let (vl, vr) = (v / half, v % half);
            let w = (vr + 1) % half;
            w * half + (vl ^ s.apply(w))
        })
        .collect();
    Perm::from_images(images)
}

/// Cyclic right rotation by `r` bits on `m`-bit strings.
pub fn rotate_right(m: u32, r: u32) -> Perm {
    let size = 1usize << m;
    let mask = size - 1;
    let r = r % m.max(1);
    let images = (0..size)
        .map(|x| {
            if r == 0 {
                x
            } else {
                ((x >> r) | (x << (m - r))) & mask
            }
        })
        .collect();
    Perm::from_images_unchecked(images)
}

/// Segment-wise application of `bricks` (first brick on the most
/// significant segment).
pub fn bricklayer(bricks: &[Perm]) -> Result<Perm> {
    let widths: Vec<u32> = bricks
        .iter()
        .map(|b| {
            if b.degree().is_power_of_two() {
                Ok(b.degree().trailing_zeros())
            } else {
                Err(Error::InvalidArgument("brick size must be a power of two".into()))
            }
        })
        .collect::<Result<_>>()?;
    let m: u32 = widths.iter().sum();
    let size = 1usize << m;
    let images = (0..size)
        .map(|x| {
            let mut out = 0;
            let mut shift = m;
            for (b, &w) in bricks.iter().zip(&widths) {
                shift -= w;
                let seg = (x >> shift) & ((1 << w) - 1);
                out |= b.apply(seg) << shift;
            }
            out
        })
        .collect();
    Perm::from_images(images)
}

/// `S = R_r ∘ γ`: the bricklayer first, then the rotation.
pub fn bricklayer_then_rotation(bricks: &[Perm], r: u32) -> Result<Perm> {
    let gamma = bricklayer(bricks)?;
    let m = gamma.degree().trailing_zeros();
    rotate_right(m, r).compose(&gamma)
}

/// `(fixed points, 2-cycles)` of a permutation.
pub fn fixed_and_transpositions(f: &Perm) -> (usize, usize) {
    let c = f.cycle_census();
    (c.get(1).copied().unwrap_or(0), c.get(2).copied().unwrap_or(0))
}

/// Parity of the inversion map of `g`.
pub fn inversion_parity(g: &FiniteGroup) -> Parity {
    g.inversion_perm().parity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::*;
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        let z3 = mk_cyclic(3).unwrap();
        assert!(is_complete_mapping(&z3, &Perm::identity(3)).unwrap());
        let double = Perm::from_images(vec![0, 2, 1]).unwrap();
        assert!(is_orthomorphism(&z3, &double).unwrap());
        assert!(!is_orthomorphism(&z3, &Perm::identity(3)).unwrap());
        assert_eq!(associated_orthomorphism(&z3, &Perm::identity(3)).unwrap(), double);

        let f4 = mk_elementary_abelian(2, 2).unwrap();
        let c = Perm::cycle(4, &[1, 2, 3]).unwrap();
        assert!(is_complete_mapping(&f4, &c).unwrap());
        let c2 = mk_cyclic(2).unwrap();
        assert!(!is_complete_mapping(&c2, &Perm::identity(2)).unwrap());
        assert!(is_complete_mapping(&c2, &Perm::identity(3)).is_err());
    }

    #[test]
    fn char_two_fixed_point_is_preimage_of_zero() {
        let f4 = mk_elementary_abelian(2, 2).unwrap();
        let c = Perm::cycle(4, &[1, 2, 3]).unwrap();
        let t = associated_orthomorphism(&f4, &c).unwrap();
        let fixed = c.fixed_points();
        assert_eq!(fixed.len(), 1);
        assert_eq!(t.apply(fixed[0]), 0);
        assert_eq!(is_orthomorphism(&f4, &c).unwrap(), is_complete_mapping(&f4, &c).unwrap());
    }

    #[test]
    fn inversion_transform_rules() {
        let d8 = mk_two_generated_2group(TwoGroupKind::D, 3).unwrap();
        let id = Perm::identity(8);
        let twice = compose_with_inversion(
            &d8,
            &compose_with_inversion(&d8, &id, Side::Right).unwrap(),
            Side::Right,
        )
        .unwrap();
        assert_eq!(twice, id);
        assert!(matches!(
            compose_with_inversion(&d8, &id, Side::Left),
            Err(Error::NotAbelian)
        ));
    }

    #[test]
    fn harmonious_examples() {
        let z5 = mk_cyclic(5).unwrap();
        assert!(is_harmonious_ordering(&z5, &[0, 1, 2, 3, 4]).unwrap());
        let c2 = mk_cyclic(2).unwrap();
        assert!(!is_harmonious_ordering(&c2, &[0, 1]).unwrap());
        assert!(!is_harmonious_ordering(&c2, &[1, 0]).unwrap());
        assert!(is_harmonious_ordering(&z5, &[0, 1, 1, 3, 4]).is_err());
    }

    #[test]
    fn r_sequencing_examples() {
        let z3 = mk_cyclic(3).unwrap();
        assert!(is_r_sequencing(&z3, &[0, 1, 2]).unwrap());
        assert!(is_r_sequencing(&z3, &[0, 2, 1]).unwrap());
        let o = r_sequencing_orthomorphism(&z3, &[0, 1, 2]).unwrap();
        assert_eq!(o, Perm::cycle(3, &[0, 1]).unwrap());
        assert!(is_orthomorphism(&z3, &o).unwrap());
        assert!(is_r_sequencing(&z3, &[1, 0, 2]).is_err());
        let z5 = mk_cyclic(5).unwrap();
        assert!(!is_r_sequencing(&z5, &[0, 1, 2, 3, 4]).unwrap());
    }

    #[test]
    fn feistel_examples() {
        let ident: Vec<usize> = (0..4).collect();
        let g = mk_elementary_abelian(2, 4).unwrap();
        let r = feistel_round(&ident, 4).unwrap();
        assert!(is_complete_mapping(&g, &r).unwrap());
        let zero = vec![0; 4];
        let r0 = feistel_round(&zero, 4).unwrap();
        assert!(!is_complete_mapping(&g, &r0).unwrap());
        for f in [ident, zero, vec![3, 1, 1, 0]] {
            let r = feistel_round(&f, 4).unwrap();
            let ri = feistel_inverse(&f, 4).unwrap();
            assert!(r.compose(&ri).unwrap().is_identity());
        }
        assert!(feistel_round(&[0, 1], 3).is_err());
    }

    #[test]
    fn feistel_criterion_exhaustive_on_two_bits() {
        let g = mk_elementary_abelian(2, 4).unwrap();
        for code in 0..256usize {
            let f: Vec<usize> = (0..4).map(|i| (code >> (2 * i)) & 3).collect();
            let bijective = {
                let mut s = f.clone();
                s.sort_unstable();
                s == vec![0, 1, 2, 3]
            };
            let r = feistel_round(&f, 4).unwrap();
            assert_eq!(is_complete_mapping(&g, &r).unwrap(), bijective);
        }
    }

    fn f256() -> &'static FiniteGroup {
        static G: std::sync::OnceLock<FiniteGroup> = std::sync::OnceLock::new();
        G.get_or_init(|| mk_elementary_abelian(2, 8).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn feistel_criterion_sampled_on_four_bits(f in proptest::collection::vec(0usize..16, 16)) {
            let g = f256();
            let mut s = f.clone();
            s.sort_unstable();
            let bijective = s == (0..16).collect::<Vec<_>>();
            let r = feistel_round(&f, 8).unwrap();
            prop_assert_eq!(is_complete_mapping(g, &r).unwrap(), bijective);
        }
    }

    #[test]
    fn gost_one_bit() {
        let s = Perm::identity(2);
        assert_eq!(gost_fs(&s).unwrap(), vec![0, 1]);
        assert!(gost_fs_injective(&s).unwrap());
    }

    #[test]
    fn gost_injectivity_matches_round_oracle() {
        // f_S injective ⇔ the GOST-like round is a complete mapping of 𝔽_2^8.
        let g = f256();
        let brick_a = Perm::from_images(vec![1, 3, 0, 2]).unwrap();
        let brick_b = Perm::from_images(vec![2, 0, 3, 1]).unwrap();
        for r in 0..4 {
            for bricks in [
                vec![brick_a.clone(), brick_b.clone()],
                vec![brick_b.clone(), brick_a.clone()],
                vec![Perm::identity(4), brick_a.clone()],
            ] {
                let s = bricklayer_then_rotation(&bricks, r).unwrap();
                let round = gost_round(&s).unwrap();
                assert_eq!(
                    gost_fs_injective(&s).unwrap(),
                    is_complete_mapping(g, &round).unwrap()
                );
            }
        }
    }

    #[test]
    fn rotation_and_bricks() {
        let r = rotate_right(4, 1);
        assert_eq!(r.apply(0b0001), 0b1000);
        assert_eq!(r.apply(0b0110), 0b0011);
        let b = bricklayer(&[Perm::identity(4), Perm::from_images(vec![1, 0, 2, 3]).unwrap()]).unwrap();
        assert_eq!(b.apply(0b0100), 0b0101);
    }

    #[test]
    fn splice_identity_case() {
        let f8 = mk_elementary_abelian(2, 3).unwrap();
        let f = crate::perm::Perm::cycle(8, &[1, 2, 4, 3, 6, 7, 5]).unwrap();
        assert!(is_complete_mapping(&f8, &f).unwrap());
        let h = f8.trivial_subgroup();
        let inner = Perm::identity(1);
        assert_eq!(splice(&f8, &h, &f, &inner).unwrap(), f);
    }
}
