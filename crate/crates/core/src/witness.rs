//! Two-sided transversal witnesses for lifting complete mappings from a
//! subgroup to the whole group.

use serde::{Deserialize, Serialize};

use crate::group::{FiniteGroup, Side, Subgroup};
use crate::perm::Perm;

/// `u_0..u_{k-1}` is a left and right transversal of `h` with `u_0 ∈ h`,
/// and `u_i u_{S(i)} H = u_{T(i)} H` with `S(0) = T(0) = 0` (zero-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalWitness {
    pub subgroup: Subgroup,
    pub transversal: Vec<usize>,
    pub s: Perm,
    pub t: Perm,
}

impl TransversalWitness {
    pub fn index(&self) -> usize {
        self.transversal.len()
    }

    /// Reads `T` off the coset identities for given `u` and `S`.
    pub fn from_s(g: &FiniteGroup, h: Subgroup, u: Vec<usize>, s: Perm) -> Option<Self> {
        if s.degree() != u.len() {
            return None;
        }
        let left = g.coset_index(&h, Side::Left);
        let mut pos = vec![usize::MAX; u.len()];
        for (i, &x) in u.iter().enumerate() {
            let c = *left.get(x)?;
            if c >= pos.len() {
                return None;
            }
            pos[c] = i;
        }
        let t_images: Vec<usize> = (0..u.len())
            .map(|i| pos[left[g.mul(u[i], u[s.apply(i)])]])
            .collect();
        let t = Perm::from_images(t_images).ok()?;
        let w = TransversalWitness {
            subgroup: h,
            transversal: u,
            s,
            t,
        };
        w.check(g).ok().map(|_| w)
    }

    /// The trivial witness for `H = G`.
    pub fn trivial(g: &FiniteGroup) -> Self {
        TransversalWitness {
            subgroup: g.whole(),
            transversal: vec![0],
            s: Perm::identity(1),
            t: Perm::identity(1),
        }
    }

    /// Checks every invariant, reporting the first violation.
    pub fn check(&self, g: &FiniteGroup) -> Result<(), String> {
        let h = &self.subgroup;
        let u = &self.transversal;
        let k = u.len();
        if h.parent_order() != g.order() {
            return Err("subgroup belongs to a group of different order".into());
        }
        if k == 0 || k * h.order() != g.order() {
            return Err(format!("{k} representatives for index {}", h.index()));
        }
        if u.iter().any(|&x| x >= g.order()) {
            return Err("representative out of range".into());
        }
        if !h.contains(u[0]) {
            return Err("first representative is not in the subgroup".into());
        }
        if !g.is_left_transversal(h, u) {
            return Err("not a left transversal".into());
        }
        if !g.is_right_transversal(h, u) {
            return Err("not a right transversal".into());
        }
        if self.s.degree() != k || self.t.degree() != k {
            return Err("S or T has the wrong degree".into());
        }
        if self.s.apply(0) != 0 {
            return Err("S(1) != 1".into());
        }
        if self.t.apply(0) != 0 {
            return Err("T(1) != 1".into());
        }
        let left = g.coset_index(h, Side::Left);
        for i in 0..k {
            let lhs = left[g.mul(u[i], u[self.s.apply(i)])];
            let rhs = left[u[self.t.apply(i)]];
            if lhs != rhs {
                return Err(format!(
                    "u_{0} u_S({0}) H differs from u_T({0}) H",
                    i + 1
                ));
            }
        }
        Ok(())
    }

    pub fn verify(&self, g: &FiniteGroup) -> bool {
        self.check(g).is_ok()
    }
}

/// Free-function form of [`TransversalWitness::verify`].
pub fn verify_transversal_witness(g: &FiniteGroup, w: &TransversalWitness) -> bool {
    w.verify(g)
}
