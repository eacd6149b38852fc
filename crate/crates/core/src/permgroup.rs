//! Permutation groups generated by complete mappings: a Schreier–Sims
//! stabilizer chain with exact order, membership, transitivity,
//! primitivity and classification against Sym, Alt and AGL.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::constructions::{field_fixture, singer_even_cm, FieldFixture};
use crate::error::{Error, Result};
use crate::families::mk_elementary_abelian;
use crate::fixtures::FixtureStore;
use crate::group::{FiniteGroup, Side};
use crate::mapping::associated_orthomorphism;
use crate::perm::Perm;
use crate::search::{enumerate_cms, random_cm, Predicate, SearchBudget};
use crate::selector::prime_power;

type Images = Vec<usize>;

fn compose(a: &[usize], b: &[usize]) -> Images {
    // a ∘ b
    b.iter().map(|&x| a[x]).collect()
}

fn invert(a: &[usize]) -> Images {
    let mut out = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x] = i;
    }
    out
}

fn is_id(a: &[usize]) -> bool {
    a.iter().enumerate().all(|(i, &x)| i == x)
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Level {
    point: usize,
    /// Strong generators fixing all earlier base points.
    gens: Vec<Images>,
    /// `reps[b]` maps `point` to `b`, for `b` in the basic orbit.
    reps: Vec<Option<Images>>,
}

impl Level {
    fn new(point: usize, n: usize) -> Level {
        let mut reps = vec![None; n];
        reps[point] = Some((0..n).collect());
        Level {
            point,
            gens: Vec::new(),
            reps,
        }
    }

    fn rebuild_orbit(&mut self) {
        let n = self.reps.len();
        self.reps = vec![None; n];
        self.reps[self.point] = Some((0..n).collect());
        let mut queue = vec![self.point];
        while let Some(b) = queue.pop() {
            let rb = self.reps[b].clone().expect("orbit point");
            for s in &self.gens {
                let c = s[b];
                if self.reps[c].is_none() {
                    self.reps[c] = Some(compose(s, &rb));
                    queue.push(c);
                }
            }
        }
    }

    fn orbit(&self) -> impl Iterator<Item = usize> + '_ {
        self.reps.iter().enumerate().filter(|(_, r)| r.is_some()).map(|(b, _)| b)
    }

    fn orbit_len(&self) -> usize {
        self.reps.iter().filter(|r| r.is_some()).count()
    }
}

/// A permutation group given by a base and strong generating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedGroup {
    degree: usize,
    generators: Vec<Perm>,
    levels: Vec<Level>,
}

/// Where [`GeneratedGroup`] places a permutation group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "order")]
pub enum Classification {
    Trivial,
    Alternating,
    Symmetric,
    AffineMatch(String),
    Other(String),
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::Trivial => f.write_str("trivial"),
            Classification::Alternating => f.write_str("alternating"),
            Classification::Symmetric => f.write_str("symmetric"),
            Classification::AffineMatch(o) => write!(f, "affine_match({o})"),
            Classification::Other(o) => write!(f, "other({o})"),
        }
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(i))
}

/// `|AGL_d(p)| = p^d · ∏ (p^d − p^i)`.
pub fn agl_order(p: usize, d: usize) -> BigUint {
    let q = BigUint::from(p).pow(d as u32);
    let mut order = q.clone();
    for i in 0..d {
        order *= &q - BigUint::from(p).pow(i as u32);
    }
    order
}

impl GeneratedGroup {
    /// The group generated by `perms`; the identity group of degree
    /// `degree` when `perms` is empty.
    pub fn new(degree: usize, perms: &[Perm]) -> Result<GeneratedGroup> {
        let mut gg = GeneratedGroup {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
        };
        for p in perms {
            gg.add(p)?;
        }
        Ok(gg)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Input generators that enlarged the group, in the order given.
    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut out: Vec<Perm> = Vec::new();
        for l in &self.levels {
            for s in &l.gens {
                let p = Perm::from_images_unchecked(s.clone());
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Level::orbit_len).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit_len()))
    }

    fn check_degree(&self, p: &Perm) -> Result<()> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: p.degree(),
            });
        }
        Ok(())
    }

    /// Sifts from level `from`; returns the residue and the level where
    /// sifting stopped (`levels.len()` when it passed every level).
    fn sift(&self, g: &[usize], from: usize) -> (Images, usize) {
        let mut h = g.to_vec();
        for (i, l) in self.levels.iter().enumerate().skip(from) {
            let b = h[l.point];
            match &l.reps[b] {
                Some(r) => h = compose(&invert(r), &h),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, p: &Perm) -> Result<bool> {
        self.check_degree(p)?;
        let (h, j) = self.sift(p.images(), 0);
        Ok(j == self.levels.len() && is_id(&h))
    }

    /// Adds a generator; returns whether the group grew.
    pub fn add(&mut self, p: &Perm) -> Result<bool> {
        self.check_degree(p)?;
        if self.contains(p)? {
            return Ok(false);
        }
        self.generators.push(p.clone());
        self.insert(p.images().to_vec(), 0);
        self.complete();
        Ok(true)
    }

    /// Adds `g` as a strong generator on levels `from..`, extending the
    /// base when `g` fixes every base point.
    fn insert(&mut self, g: Images, from: usize) {
        let need_new = self.levels.iter().skip(from).all(|l| g[l.point] == l.point)
            && self.levels.iter().take(from).all(|l| g[l.point] == l.point);
        if need_new {
            let moved = (0..self.degree).find(|&x| g[x] != x).expect("nonidentity");
            self.levels.push(Level::new(moved, self.degree));
        }
        for l in self.levels.iter_mut().skip(from) {
            if !l.gens.contains(&g) {
                l.gens.push(g.clone());
                l.rebuild_orbit();
            }
            if g[l.point] != l.point {
                break;
            }
        }
    }

    /// Schreier–Sims: checks Schreier generators from the bottom level up,
    /// inserting any that fail to sift.
    fn complete(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            let lvl = i - 1;
            let mut restart = None;
            'scan: for b in self.levels[lvl].orbit().collect::<Vec<_>>() {
                let ub = self.levels[lvl].reps[b].clone().expect("orbit point");
                for s in self.levels[lvl].gens.clone() {
                    let c = s[b];
                    let uc = self.levels[lvl].reps[c].clone().expect("orbit closed");
                    let schreier = compose(&invert(&uc), &compose(&s, &ub));
                    let (h, j) = self.sift(&schreier, lvl + 1);
                    if j < self.levels.len() || !is_id(&h) {
                        self.insert(h, lvl + 1);
                        restart = Some(self.levels.len());
                        break 'scan;
                    }
                }
            }
            match restart {
                Some(top) => i = top,
                None => i -= 1,
            }
        }
    }

    pub fn is_transitive(&self) -> bool {
        if self.degree <= 1 {
            return true;
        }
        let mut seen = vec![false; self.degree];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Smallest block containing `0` and `beta`.
    pub fn minimal_block(&self, beta: usize) -> Vec<usize> {
        let n = self.degree;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut queue = vec![(0, beta)];
        if beta != 0 {
            parent[beta] = 0;
        }
        while let Some((a, b)) = queue.pop() {
            for g in &self.generators {
                let c = find(&mut parent, g.apply(a));
                let d = find(&mut parent, g.apply(b));
                if c != d {
                    parent[d] = c;
                    queue.push((c, d));
                }
            }
        }
        let root = find(&mut parent, 0);
        (0..n).filter(|&x| find(&mut parent, x) == root).collect()
    }

    pub fn is_primitive(&self) -> bool {
        if !self.is_transitive() {
            return false;
        }
        (1..self.degree).all(|b| self.minimal_block(b).len() == self.degree)
    }

    /// Classification against Sym, Alt and, for prime-power degree, the
    /// affine group on `𝔽_p^d` with its standard indexing.
    pub fn classify(&self) -> Classification {
        let additive = prime_power(self.degree).and_then(|(p, d)| mk_elementary_abelian(p, d).ok());
        self.classify_with(additive.as_ref())
    }

    /// [`GeneratedGroup::classify`] with an explicit additive group for the
    /// affine test.
    pub fn classify_with(&self, additive: Option<&FiniteGroup>) -> Classification {
        let order = self.order();
        let n = self.degree;
        if order == BigUint::from(1u32) {
            return Classification::Trivial;
        }
        let sym = factorial(n);
        if order == sym {
            return Classification::Symmetric;
        }
        if order.clone() * BigUint::from(2u32) == sym {
            return Classification::Alternating;
        }
        if let Some(a) = additive.filter(|a| a.order() == n && a.is_abelian()) {
            if self.contains_translations(a) && self.generators.iter().all(|g| is_affine(a, g)) {
                return Classification::AffineMatch(order.to_string());
            }
        }
        Classification::Other(order.to_string())
    }

    fn contains_translations(&self, a: &FiniteGroup) -> bool {
        (0..a.order()).all(|x| self.contains(&a.regular_rep(x, Side::Left)).unwrap_or(false))
    }

    /// Whether the group is all of `AGL_d(p)` on the standard indexing.
    pub fn is_full_affine(&self) -> bool {
        match prime_power(self.degree) {
            Some((p, d)) => {
                matches!(self.classify(), Classification::AffineMatch(_)) && self.order() == agl_order(p, d)
            }
            None => false,
        }
    }

    pub fn report(&self) -> GroupReport {
        GroupReport {
            degree: self.degree,
            order: self.order().to_string(),
            classification: self.classify(),
            transitive: self.is_transitive(),
            primitive: self.is_primitive(),
            generator_count: self.generators.len(),
        }
    }
}

/// `g(x) − g(0)` is additive in the abelian group `a`.
pub fn is_affine(a: &FiniteGroup, g: &Perm) -> bool {
    let c = a.inv(g.apply(0));
    let lin = |x: usize| a.mul(g.apply(x), c);
    let n = a.order();
    (0..n).all(|x| (0..n).all(|y| lin(a.mul(x, y)) == a.mul(lin(x), lin(y))))
}

/// Summary suitable for JSON output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub degree: usize,
    pub order: String,
    pub classification: Classification,
    pub transitive: bool,
    pub primitive: bool,
    pub generator_count: usize,
}

/// Which family of mappings generates the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generating {
    CompleteMappings,
    Orthomorphisms,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Exhaustive,
    /// Stop after this many consecutive additions that leave the order unchanged.
    Sampled { stabilize: usize },
}

/// Largest order accepted by exhaustive mode.
pub const EXHAUSTIVE_GUARD: usize = 11;
pub const DEFAULT_STABILIZE: usize = 25;

fn mapping_to_generator(g: &FiniteGroup, f: &Perm, kind: Generating) -> Result<Perm> {
    match kind {
        Generating::CompleteMappings => Ok(f.clone()),
        Generating::Orthomorphisms => associated_orthomorphism(g, f),
    }
}

fn generated_exhaustive(g: &FiniteGroup, kind: Generating) -> Result<GeneratedGroup> {
    if g.order() > EXHAUSTIVE_GUARD {
        return Err(Error::GuardExceeded {
            order: g.order(),
            guard: EXHAUSTIVE_GUARD,
        });
    }
    let all = enumerate_cms(g, &Predicate::any(), None, false)?;
    let gens = all
        .found
        .iter()
        .map(|f| mapping_to_generator(g, f, kind))
        .collect::<Result<Vec<_>>>()?;
    GeneratedGroup::new(g.order(), &gens)
}

/// Seed mappings for sampled mode: fixtures of the group, and the Singer
/// mapping when the group is the additive group of `𝔽_{2^d}`.
fn sampled_seeds(g: &FiniteGroup, store: Option<&FixtureStore>) -> Result<Vec<Perm>> {
    let mut seeds = Vec::new();
    if let Some(store) = store {
        for r in store.for_group(g.name()) {
            seeds.push(r.perm(g.order())?);
        }
    }
    if let Some((2, d)) = prime_power(g.order()) {
        if d >= 2 && g.table() == mk_elementary_abelian(2, d)?.table() {
            seeds.push(singer_even_cm(d as u32)?);
            if d == 4 {
                seeds.push(field_fixture(FieldFixture::F16)?.1);
            }
        }
    }
    seeds.retain(|f| crate::mapping::is_complete_mapping(g, f).unwrap_or(false));
    Ok(seeds)
}

fn generated_sampled(
    g: &FiniteGroup,
    kind: Generating,
    stabilize: usize,
    budget: &SearchBudget,
    store: Option<&FixtureStore>,
) -> Result<GeneratedGroup> {
    let n = g.order();
    let mut gg = GeneratedGroup::new(n, &[])?;
    let translations: Vec<Perm> = g
        .small_generating_set(&(0..n).collect::<Vec<_>>())
        .into_iter()
        .map(|x| g.regular_rep(x, Side::Left))
        .collect();
    let feed = |gg: &mut GeneratedGroup, f: &Perm| -> Result<bool> {
        let mut grew = gg.add(&mapping_to_generator(g, f, kind)?)?;
        for t in &translations {
            // λ(x)∘f is again a complete mapping; its orthomorphism is λ(x)∘f̃ too.
            let shifted = t.compose(f)?;
            grew |= gg.add(&mapping_to_generator(g, &shifted, kind)?)?;
        }
        Ok(grew)
    };
    for f in sampled_seeds(g, store)? {
        feed(&mut gg, &f)?;
    }
    let sym = factorial(n);
    let mut quiet = 0;
    let mut round = 0u64;
    while quiet < stabilize && gg.order() != sym {
        let b = SearchBudget {
            seed: budget.seed.wrapping_add(round),
            ..*budget
        };
        round += 1;
        let Some(f) = random_cm(g, &Predicate::any(), &b) else {
            quiet += 1;
            continue;
        };
        if feed(&mut gg, &f)? {
            quiet = 0;
        } else {
            quiet += 1;
        }
    }
    Ok(gg)
}

/// The group generated by the complete mappings of `g`.
pub fn p_comp(
    g: &FiniteGroup,
    mode: Mode,
    budget: &SearchBudget,
    store: Option<&FixtureStore>,
) -> Result<GeneratedGroup> {
    p_generated(g, Generating::CompleteMappings, mode, budget, store)
}

/// The group generated by the orthomorphisms of `g`.
pub fn p_orth(
    g: &FiniteGroup,
    mode: Mode,
    budget: &SearchBudget,
    store: Option<&FixtureStore>,
) -> Result<GeneratedGroup> {
    p_generated(g, Generating::Orthomorphisms, mode, budget, store)
}

pub fn p_generated(
    g: &FiniteGroup,
    kind: Generating,
    mode: Mode,
    budget: &SearchBudget,
    store: Option<&FixtureStore>,
) -> Result<GeneratedGroup> {
    match mode {
        Mode::Exhaustive => generated_exhaustive(g, kind),
        Mode::Sampled { stabilize } => generated_sampled(g, kind, stabilize, budget, store),
    }
}

/// `e^{−1/2}·|G/G′|·(|G|!)²/|G|^{|G|}`, computed in log space.
pub fn estimate_cm_count(g: &FiniteGroup) -> f64 {
    let n = g.order();
    let abel = (n / g.commutator_subgroup().order()) as f64;
    let ln_fact: f64 = (1..=n).map(|i| (i as f64).ln()).sum();
    (-0.5 + abel.ln() + 2.0 * ln_fact - n as f64 * (n as f64).ln()).exp()
}
