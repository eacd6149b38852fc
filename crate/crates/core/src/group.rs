//! Finite groups as multiplication tables, subgroups, quotients and
//! structural queries.

use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Parity, Perm};

/// Largest order for which a full multiplication table is built.
pub const MAX_TABLE_ORDER: usize = 4096;

/// Orders up to this bound are checked for associativity on every triple.
pub const EXHAUSTIVE_CHECK_ORDER: usize = 64;

const SAMPLED_TRIPLES: usize = 100_000;

/// A group of order `n` on `{0..n-1}` with identity `0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    labels: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A subgroup, stored as a sorted member list and a membership mask.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    parent_order: usize,
    members: Vec<usize>,
    generators: Vec<usize>,
    #[serde(skip)]
    mask: Vec<bool>,
}

impl Subgroup {
    fn from_members(parent_order: usize, mut members: Vec<usize>, generators: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        let mut mask = vec![false; parent_order];
        for &m in &members {
            mask[m] = true;
        }
        Subgroup {
            parent_order,
            members,
            generators,
            mask,
        }
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.parent_order / self.members.len()
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.mask.get(g).copied().unwrap_or(false)
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }
}

impl FiniteGroup {
    /// Builds a group from a product closure and validates every invariant.
    pub fn from_fn(
        name: impl Into<String>,
        n: usize,
        labels: Vec<String>,
        mut op: impl FnMut(usize, usize) -> usize,
    ) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::InvalidGroup("order must be positive".into()));
        }
        if n > MAX_TABLE_ORDER {
            return Err(Error::InvalidGroup(format!(
                "order {n} exceeds table limit {MAX_TABLE_ORDER}"
            )));
        }
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let c = op(a, b);
                if c >= n {
                    return Err(Error::InvalidGroup(format!(
                        "product of {a} and {b} is {c}, outside 0..{n}"
                    )));
                }
                mul[a * n + b] = c as u32;
            }
        }
        FiniteGroup::from_flat(name.into(), n, mul, labels)
    }

    /// Builds a group from rows of its Cayley table.
    pub fn from_table(
        name: impl Into<String>,
        table: &[Vec<usize>],
        labels: Vec<String>,
    ) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (g, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {g} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::InvalidGroup(format!(
                        "entry {x} in row {g} out of range"
                    )));
                }
                mul.push(x as u32);
            }
        }
        FiniteGroup::from_flat(name.into(), n, mul, labels)
    }

    fn from_flat(name: String, n: usize, mul: Vec<u32>, labels: Vec<String>) -> Result<FiniteGroup> {
        let labels = if labels.is_empty() {
            (0..n).map(|i| i.to_string()).collect()
        } else if labels.len() != n {
            return Err(Error::InvalidGroup(format!(
                "{} labels for {n} elements",
                labels.len()
            )));
        } else {
            labels
        };
        let mut g = FiniteGroup {
            name,
            order: n,
            mul,
            inv: vec![0; n],
            labels,
        };
        g.validate_and_fill_inverses()?;
        Ok(g)
    }

    fn validate_and_fill_inverses(&mut self) -> Result<()> {
        let n = self.order;
        let mut seen = vec![0u32; n];
        for a in 0..n {
            let stamp = a as u32 + 1;
            for b in 0..n {
                let c = self.mul[a * n + b] as usize;
                if seen[c] == stamp {
                    return Err(Error::InvalidGroup(format!("row not a bijection (row {a})")));
                }
                seen[c] = stamp;
            }
        }
        seen.iter_mut().for_each(|s| *s = 0);
        for b in 0..n {
            let stamp = b as u32 + 1;
            for a in 0..n {
                let c = self.mul[a * n + b] as usize;
                if seen[c] == stamp {
                    return Err(Error::InvalidGroup(format!("column not a bijection (column {b})")));
                }
                seen[c] = stamp;
            }
        }
        for g in 0..n {
            if self.mul(0, g) != g || self.mul(g, 0) != g {
                return Err(Error::InvalidGroup(
                    "index 0 is not the identity".into(),
                ));
            }
        }
        for g in 0..n {
            // Row g is a bijection, so exactly one h has gh = 1.
            let h = (0..n).find(|&h| self.mul(g, h) == 0).expect("row bijective");
            if self.mul(h, g) != 0 {
                return Err(Error::InvalidGroup(format!(
                    "element {g} has different left and right inverses"
                )));
            }
            self.inv[g] = h as u32;
        }
        if n <= EXHAUSTIVE_CHECK_ORDER {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(Error::InvalidGroup(format!(
                                "not associative at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a550c);
            for _ in 0..SAMPLED_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return Err(Error::InvalidGroup(format!(
                        "not associative at ({a},{b},{c})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn pow(&self, g: usize, e: u64) -> usize {
        let mut acc = 0;
        let mut base = g;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// `g⁻¹h⁻¹gh`.
    pub fn commutator(&self, g: usize, h: usize) -> usize {
        let gi = self.inv(g);
        let hi = self.inv(h);
        self.mul(self.mul(gi, hi), self.mul(g, h))
    }

    /// `g⁻¹hg`.
    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), h), g)
    }

    pub fn product_of(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |acc, &w| self.mul(acc, w))
    }

    /// The subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut mask = vec![false; self.order];
        let mut members = vec![0];
        mask[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for &g in gens {
                let b = self.mul(a, g);
                if !mask[b] {
                    mask[b] = true;
                    members.push(b);
                    queue.push_back(b);
                }
            }
        }
        Subgroup::from_members(self.order, members, gens.to_vec())
    }

    /// Wraps an explicit member list after checking closure.
    pub fn subgroup_from_members(&self, members: &[usize]) -> Result<Subgroup> {
        let sub = Subgroup::from_members(self.order, members.to_vec(), Vec::new());
        if !sub.contains(0) {
            return Err(Error::InvalidArgument("subset lacks the identity".into()));
        }
        for &a in &sub.members {
            if !sub.contains(self.inv(a)) {
                return Err(Error::InvalidArgument("subset not closed under inverses".into()));
            }
            for &b in &sub.members {
                if !sub.contains(self.mul(a, b)) {
                    return Err(Error::InvalidArgument("subset not closed under products".into()));
                }
            }
        }
        let gens = self.small_generating_set(&sub.members);
        Ok(Subgroup {
            generators: gens,
            ..sub
        })
    }

    /// A greedy generating set for the subgroup with the given members.
    pub fn small_generating_set(&self, members: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = self.generate(&gens);
        // Prefer elements of large order so fewer generators are needed.
        let mut candidates: Vec<usize> = members.to_vec();
        candidates.sort_by_key(|&g| (std::cmp::Reverse(self.element_order(g)), g));
        for g in candidates {
            if current.order() == members.len() {
                break;
            }
            if !current.contains(g) {
                gens.push(g);
                current = self.generate(&gens);
            }
        }
        gens
    }

    pub fn whole(&self) -> Subgroup {
        let members: Vec<usize> = (0..self.order).collect();
        let gens = self.small_generating_set(&members);
        Subgroup::from_members(self.order, members, gens)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_members(self.order, vec![0], Vec::new())
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        (0..self.order).all(|g| h.members.iter().all(|&x| h.contains(self.conjugate(x, g))))
    }

    pub fn normal_closure(&self, gens: &[usize]) -> Subgroup {
        let mut current = self.generate(gens);
        loop {
            let mut extra = Vec::new();
            for g in 0..self.order {
                for &x in current.generators() {
                    let c = self.conjugate(x, g);
                    if !current.contains(c) && !extra.contains(&c) {
                        extra.push(c);
                    }
                }
            }
            if extra.is_empty() {
                return current;
            }
            let mut gens = current.generators.clone();
            gens.extend(extra);
            current = self.generate(&gens);
        }
    }

    pub fn commutator_subgroup(&self) -> Subgroup {
        let mut comms = BTreeSet::new();
        for g in 0..self.order {
            for h in 0..self.order {
                comms.insert(self.commutator(g, h));
            }
        }
        let comms: Vec<usize> = comms.into_iter().filter(|&c| c != 0).collect();
        let sub = self.normal_closure(&comms);
        let gens = self.small_generating_set(&sub.members);
        Subgroup { generators: gens, ..sub }
    }

    /// All normal subgroups, sorted by order then members.
    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        let mut found: Vec<Subgroup> = Vec::new();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut push = |s: Subgroup, found: &mut Vec<Subgroup>| {
            if seen.insert(s.members.clone()) {
                found.push(s);
                true
            } else {
                false
            }
        };
        for g in 0..self.order {
            let s = self.normal_closure(&[g]);
            push(s, &mut found);
        }
        // Close under joins.
        let mut i = 0;
        while i < found.len() {
            for j in 0..i {
                let mut gens = found[i].generators.clone();
                gens.extend_from_slice(&found[j].generators);
                let s = self.normal_closure(&gens);
                push(s, &mut found);
            }
            i += 1;
        }
        for s in &mut found {
            s.generators = self.small_generating_set(&s.members);
        }
        found.sort_by(|a, b| a.order().cmp(&b.order()).then(a.members.cmp(&b.members)));
        found
    }

    /// The subgroup as a group in its own right, with the embedding.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
        let emb = h.members.clone();
        let mut pos = vec![usize::MAX; self.order];
        for (i, &m) in emb.iter().enumerate() {
            pos[m] = i;
        }
        let labels = emb.iter().map(|&m| self.labels[m].clone()).collect();
        let g = FiniteGroup::from_fn(
            format!("{}:sub{}", self.name, emb.len()),
            emb.len(),
            labels,
            |a, b| pos[self.mul(emb[a], emb[b])],
        )?;
        Ok((g, emb))
    }

    /// Left cosets `gH`, each sorted, ordered by smallest member.
    pub fn left_cosets(&self, h: &Subgroup) -> Vec<Vec<usize>> {
        self.cosets(h, Side::Left)
    }

    pub fn right_cosets(&self, h: &Subgroup) -> Vec<Vec<usize>> {
        self.cosets(h, Side::Right)
    }

    fn cosets(&self, h: &Subgroup, side: Side) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.order];
        let mut out = Vec::new();
        for g in 0..self.order {
            if assigned[g] {
                continue;
            }
            let mut c: Vec<usize> = h
                .members
                .iter()
                .map(|&x| match side {
                    Side::Left => self.mul(g, x),
                    Side::Right => self.mul(x, g),
                })
                .collect();
            c.sort_unstable();
            for &x in &c {
                assigned[x] = true;
            }
            out.push(c);
        }
        out
    }

    /// Index of the coset containing each element.
    pub fn coset_index(&self, h: &Subgroup, side: Side) -> Vec<usize> {
        let mut idx = vec![0; self.order];
        for (i, c) in self.cosets(h, side).iter().enumerate() {
            for &x in c {
                idx[x] = i;
            }
        }
        idx
    }

    /// A set of representatives that is simultaneously a left and a right
    /// transversal of `h`, with the identity first. `None` if none exists.
    pub fn two_sided_transversal(&self, h: &Subgroup) -> Option<Vec<usize>> {
        let left = self.left_cosets(h);
        let right_idx = self.coset_index(h, Side::Right);
        let k = left.len();
        let mut used_right = vec![false; k];
        let mut chosen = Vec::with_capacity(k);
        fn dfs(
            i: usize,
            left: &[Vec<usize>],
            right_idx: &[usize],
            used: &mut Vec<bool>,
            chosen: &mut Vec<usize>,
        ) -> bool {
            if i == left.len() {
                return true;
            }
            let cands: Vec<usize> = if i == 0 { vec![0] } else { left[i].clone() };
            for g in cands {
                let r = right_idx[g];
                if used[r] {
                    continue;
                }
                used[r] = true;
                chosen.push(g);
                if dfs(i + 1, left, right_idx, used, chosen) {
                    return true;
                }
                chosen.pop();
                used[r] = false;
            }
            false
        }
        if dfs(0, &left, &right_idx, &mut used_right, &mut chosen) {
            Some(chosen)
        } else {
            None
        }
    }

    pub fn is_left_transversal(&self, h: &Subgroup, u: &[usize]) -> bool {
        self.is_transversal(h, u, Side::Left)
    }

    pub fn is_right_transversal(&self, h: &Subgroup, u: &[usize]) -> bool {
        self.is_transversal(h, u, Side::Right)
    }

    fn is_transversal(&self, h: &Subgroup, u: &[usize], side: Side) -> bool {
        if u.len() * h.order() != self.order {
            return false;
        }
        let idx = self.coset_index(h, side);
        let mut seen = vec![false; u.len()];
        for &x in u {
            let c = idx[x];
            if c >= seen.len() || seen[c] {
                return false;
            }
            seen[c] = true;
        }
        true
    }

    /// `G/N` with the coset containing `g` at `projection[g]`; cosets are
    /// numbered by smallest member, so the identity coset is `0`.
    pub fn quotient_group(&self, n: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let cosets = self.left_cosets(n);
        let proj = self.coset_index(n, Side::Left);
        let reps: Vec<usize> = cosets.iter().map(|c| c[0]).collect();
        let labels = reps.iter().map(|&r| format!("{}N", self.labels[r])).collect();
        let q = FiniteGroup::from_fn(
            format!("{}/N{}", self.name, n.order()),
            cosets.len(),
            labels,
            |a, b| proj[self.mul(reps[a], reps[b])],
        )?;
        Ok((q, proj))
    }

    /// True iff |G| is odd or no element has order equal to the 2-part of |G|.
    pub fn hall_paige_condition(&self) -> bool {
        let n = self.order;
        if n % 2 == 1 {
            return true;
        }
        let two_part = 1usize << n.trailing_zeros();
        (0..n).all(|g| self.element_order(g) != two_part)
    }

    /// Left (`h ↦ gh`) or right (`h ↦ hg`) translation by `g`.
    pub fn regular_rep(&self, g: usize, side: Side) -> Perm {
        let images = (0..self.order)
            .map(|h| match side {
                Side::Left => self.mul(g, h),
                Side::Right => self.mul(h, g),
            })
            .collect();
        Perm::from_images_unchecked(images)
    }

    /// The inversion map `g ↦ g⁻¹`.
    pub fn inversion_perm(&self) -> Perm {
        Perm::from_images_unchecked(self.inv.iter().map(|&x| x as usize).collect())
    }

    /// 𝔽₂-sum over all g of the parity of λ(g).
    pub fn sigma(&self) -> Parity {
        (0..self.order)
            .map(|g| self.regular_rep(g, Side::Left).parity())
            .sum()
    }

    /// Serializes in the Cayley text format with a `labels:` line.
    pub fn to_cayley_text(&self) -> String {
        let mut s = format!("{}\nlabels: {}\n", self.order, self.labels.join(" "));
        for a in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|b| self.mul(a, b).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses the Cayley text format: a line with `n`, an optional label line
    /// (any line not starting with a digit; a `labels:` prefix is stripped),
    /// then `n` rows of `n` zero-based indices.
    pub fn from_cayley_text(name: impl Into<String>, text: &str) -> Result<FiniteGroup> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty Cayley file".into()))?
            .parse()
            .map_err(|_| Error::Parse("first line must be the group order".into()))?;
        if n == 0 {
            return Err(Error::Parse("group order must be positive".into()));
        }
        let mut rest: Vec<&str> = lines.collect();
        let mut labels = Vec::new();
        if let Some(first) = rest.first() {
            if !first.starts_with(|c: char| c.is_ascii_digit()) {
                let body = first.strip_prefix("labels:").unwrap_or(first);
                labels = body.split_whitespace().map(String::from).collect();
                rest.remove(0);
            }
        }
        if rest.len() != n {
            return Err(Error::Parse(format!(
                "expected {n} table rows, found {}",
                rest.len()
            )));
        }
        let mut table = Vec::with_capacity(n);
        for (i, line) in rest.iter().enumerate() {
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad entry '{t}' in row {i}")))
                })
                .collect::<Result<Vec<_>>>()?;
            table.push(row);
        }
        FiniteGroup::from_table(name, &table, labels)
    }
}

/// Searches for an isomorphism `G → H` by matching images of a small
/// generating set of `G`. Returns the element map on success.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<Vec<usize>> {
    if g.order() != h.order() {
        return None;
    }
    let n = g.order();
    let mut g_orders: Vec<usize> = (0..n).map(|x| g.element_order(x)).collect();
    let mut h_orders: Vec<usize> = (0..n).map(|x| h.element_order(x)).collect();
    let (go, ho) = (g_orders.clone(), h_orders.clone());
    g_orders.sort_unstable();
    h_orders.sort_unstable();
    if g_orders != h_orders {
        return None;
    }
    let gens = g.small_generating_set(&(0..n).collect::<Vec<_>>());
    let cands: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| (0..n).filter(|&y| ho[y] == go[x]).collect())
        .collect();
    let mut choice = vec![0usize; gens.len()];
    fn extend(
        g: &FiniteGroup,
        h: &FiniteGroup,
        gens: &[usize],
        imgs: &[usize],
    ) -> Option<Vec<usize>> {
        let n = g.order();
        let mut map = vec![usize::MAX; n];
        map[0] = 0;
        let mut used = vec![false; n];
        used[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for (i, &s) in gens.iter().enumerate() {
                let b = g.mul(a, s);
                let fb = h.mul(map[a], imgs[i]);
                if map[b] == usize::MAX {
                    if used[fb] {
                        return None;
                    }
                    map[b] = fb;
                    used[fb] = true;
                    queue.push_back(b);
                } else if map[b] != fb {
                    return None;
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if map[g.mul(a, b)] != h.mul(map[a], map[b]) {
                    return None;
                }
            }
        }
        Some(map)
    }
    loop {
        let imgs: Vec<usize> = choice.iter().zip(&cands).map(|(&c, v)| v[c]).collect();
        if let Some(m) = extend(g, h, &gens, &imgs) {
            return Some(m);
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return None;
            }
            choice[i] += 1;
            if choice[i] < cands[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

pub fn is_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    find_isomorphism(g, h).is_some()
}
