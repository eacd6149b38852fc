//! Backtracking enumeration and randomized search for complete mappings,
//! lifting through transversal witnesses, and the both-parities report.

use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::theta_transversal_witness;
use crate::error::{Error, Result};
use crate::families::Sd32Variant;
use crate::fixtures::FixtureStore;
use crate::group::{FiniteGroup, Side, Subgroup};
use crate::mapping::{is_complete_mapping, splice};
use crate::perm::{Parity, Perm};
use crate::witness::TransversalWitness;

/// Largest order enumerated exhaustively without an explicit override.
pub const ENUMERATION_GUARD: usize = 16;
/// Hard limit of the bitset enumerator.
pub const BITSET_LIMIT: usize = 64;

/// Filters applied to each complete mapping found.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicate {
    pub parity: Option<Parity>,
    /// Require a single cycle through all elements.
    pub single_cycle: bool,
    /// Require `f(1) = 1`.
    pub fixes_identity: bool,
}

impl Predicate {
    pub fn any() -> Self {
        Predicate::default()
    }

    pub fn parity(p: Parity) -> Self {
        Predicate {
            parity: Some(p),
            ..Predicate::default()
        }
    }

    pub fn accepts(&self, f: &Perm) -> bool {
        if self.fixes_identity && f.apply(0) != 0 {
            return false;
        }
        if self.single_cycle && f.cycle_type() != [f.degree()] {
            return false;
        }
        self.parity.is_none_or(|p| f.parity() == p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    /// Matching mappings, lexicographic by image sequence, at most `limit`.
    pub found: Vec<Perm>,
    /// Number of matches visited; exact when `complete`.
    pub count: u64,
    pub complete: bool,
    pub nodes: u64,
}

fn check_guard(g: &FiniteGroup, allow_large: bool) -> Result<()> {
    let n = g.order();
    if n > BITSET_LIMIT || (n > ENUMERATION_GUARD && !allow_large) {
        return Err(Error::GuardExceeded {
            order: n,
            guard: if allow_large { BITSET_LIMIT } else { ENUMERATION_GUARD },
        });
    }
    Ok(())
}

/// Depth-first assignment of `f(0), f(1), …` in index order with used-image
/// and used-product bitsets. `visit` sees every complete mapping in
/// lexicographic order of image sequences.
fn dfs<V>(
    g: &FiniteGroup,
    images: &mut Vec<usize>,
    used_img: u64,
    used_prod: u64,
    nodes: &mut u64,
    visit: &mut V,
) -> ControlFlow<()>
where
    V: FnMut(&[usize]) -> ControlFlow<()>,
{
    let n = g.order();
    let x = images.len();
    if x == n {
        return visit(images);
    }
    for v in 0..n {
        if used_img >> v & 1 == 1 {
            continue;
        }
        let p = g.mul(x, v);
        if used_prod >> p & 1 == 1 {
            continue;
        }
        *nodes += 1;
        images.push(v);
        let flow = dfs(g, images, used_img | 1 << v, used_prod | 1 << p, nodes, visit);
        images.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

/// Visits every complete mapping of `g` in lexicographic order until
/// `visit` breaks. Returns the node count.
pub fn for_each_cm<V>(g: &FiniteGroup, allow_large: bool, mut visit: V) -> Result<u64>
where
    V: FnMut(&Perm) -> ControlFlow<()>,
{
    check_guard(g, allow_large)?;
    let mut nodes = 0;
    let mut images = Vec::with_capacity(g.order());
    let _ = dfs(g, &mut images, 0, 0, &mut nodes, &mut |im: &[usize]| {
        visit(&Perm::from_images(im.to_vec()).expect("search yields bijections"))
    });
    Ok(nodes)
}

/// Every complete mapping satisfying `predicate`, keeping at most `limit`
/// of them (counting stops at the limit).
pub fn enumerate_cms(
    g: &FiniteGroup,
    predicate: &Predicate,
    limit: Option<u64>,
    allow_large: bool,
) -> Result<Enumeration> {
    let mut found = Vec::new();
    let mut count = 0u64;
    let mut complete = true;
    let nodes = for_each_cm(g, allow_large, |f| {
        if predicate.accepts(f) {
            count += 1;
            found.push(f.clone());
            if limit.is_some_and(|l| count >= l) {
                complete = false;
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    })?;
    Ok(Enumeration {
        found,
        count,
        complete,
        nodes,
    })
}

/// Exact `(even, odd)` census, split over the first two assignments and
/// counted in parallel.
pub fn count_by_parity(g: &FiniteGroup, allow_large: bool) -> Result<(u64, u64)> {
    check_guard(g, allow_large)?;
    let n = g.order();
    if n == 1 {
        return Ok((1, 0));
    }
    let mut prefixes = Vec::new();
    for v0 in 0..n {
        let p0 = g.mul(0, v0);
        for v1 in (0..n).filter(|&v| v != v0) {
            let p1 = g.mul(1, v1);
            if p1 != p0 {
                prefixes.push((v0, v1, p0, p1));
            }
        }
    }
    let totals = prefixes
        .par_iter()
        .map(|&(v0, v1, p0, p1)| {
            let mut counts = (0u64, 0u64);
            let mut nodes = 0;
            let mut images = vec![v0, v1];
            let _ = dfs(
                g,
                &mut images,
                1 << v0 | 1 << v1,
                1 << p0 | 1 << p1,
                &mut nodes,
                &mut |im: &[usize]| {
                    match Perm::from_images_unchecked(im.to_vec()).parity() {
                        Parity::Even => counts.0 += 1,
                        Parity::Odd => counts.1 += 1,
                    }
                    ControlFlow::Continue(())
                },
            );
            counts
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(totals)
}

/// Total number of complete mappings.
pub fn count_cms(g: &FiniteGroup, allow_large: bool) -> Result<u64> {
    count_by_parity(g, allow_large).map(|(e, o)| e + o)
}

/// Limits for randomized search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Nodes per restart.
    pub node_limit: u64,
    pub wall_time: Option<Duration>,
    pub seed: u64,
    pub restarts: u32,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            node_limit: 200_000,
            wall_time: None,
            seed: 0,
            restarts: 32,
        }
    }
}

impl SearchBudget {
    pub fn with_seed(seed: u64) -> Self {
        SearchBudget {
            seed,
            ..Self::default()
        }
    }
}

/// A permutation search with per-element candidate lists and presets.
struct Problem<'a> {
    g: &'a FiniteGroup,
    /// Variables in assignment order.
    vars: Vec<usize>,
    /// Allowed images per element; `None` means unrestricted.
    allowed: Vec<Option<Vec<usize>>>,
    /// Fixed part of the mapping.
    preset: Vec<Option<usize>>,
}

/// A found assignment may be partial (unassigned entries are `usize::MAX`).
enum Outcome {
    Found(Vec<usize>, u64),
    Exhausted(u64),
    Aborted(u64),
}

struct Run<'p, 'a, P: Fn(&[usize]) -> bool> {
    pb: &'p Problem<'a>,
    rng: Option<ChaCha8Rng>,
    node_limit: u64,
    deadline: Option<Instant>,
    nodes: u64,
    aborted: bool,
    images: Vec<usize>,
    used_img: Vec<bool>,
    used_prod: Vec<bool>,
    accept: P,
}

impl<P: Fn(&[usize]) -> bool> Run<'_, '_, P> {
    fn go(&mut self, depth: usize) -> Option<Vec<usize>> {
        if depth == self.pb.vars.len() {
            return (self.accept)(&self.images).then(|| self.images.clone());
        }
        let x = self.pb.vars[depth];
        let mut cands: Vec<usize> = match &self.pb.allowed[x] {
            Some(list) => list.clone(),
            None => (0..self.pb.g.order()).collect(),
        };
        if let Some(rng) = self.rng.as_mut() {
            cands.shuffle(rng);
        }
        for v in cands {
            if self.used_img[v] {
                continue;
            }
            let p = self.pb.g.mul(x, v);
            if self.used_prod[p] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.node_limit
                || (self.nodes.is_multiple_of(4096) && self.deadline.is_some_and(|d| Instant::now() > d))
            {
                self.aborted = true;
                return None;
            }
            self.images[x] = v;
            self.used_img[v] = true;
            self.used_prod[p] = true;
            let found = self.go(depth + 1);
            self.used_img[v] = false;
            self.used_prod[p] = false;
            if found.is_some() || self.aborted {
                return found;
            }
        }
        None
    }
}

impl Problem<'_> {
    fn unrestricted(g: &FiniteGroup) -> Problem<'_> {
        Problem {
            g,
            vars: (0..g.order()).collect(),
            allowed: vec![None; g.order()],
            preset: vec![None; g.order()],
        }
    }

    fn solve(
        &self,
        rng: Option<ChaCha8Rng>,
        node_limit: u64,
        deadline: Option<Instant>,
        accept: impl Fn(&[usize]) -> bool,
    ) -> Outcome {
        let n = self.g.order();
        let mut run = Run {
            pb: self,
            rng,
            node_limit,
            deadline,
            nodes: 0,
            aborted: false,
            images: vec![usize::MAX; n],
            used_img: vec![false; n],
            used_prod: vec![false; n],
            accept,
        };
        for (x, v) in self.preset.iter().enumerate() {
            if let Some(v) = *v {
                let p = self.g.mul(x, v);
                if run.used_img[v] || run.used_prod[p] {
                    return Outcome::Exhausted(0);
                }
                run.images[x] = v;
                run.used_img[v] = true;
                run.used_prod[p] = true;
            }
        }
        match run.go(0) {
            Some(f) => Outcome::Found(f, run.nodes),
            None if run.aborted => Outcome::Aborted(run.nodes),
            None => Outcome::Exhausted(run.nodes),
        }
    }

    /// Seeded restarts in parallel batches; the lowest successful restart
    /// index wins, so the result does not depend on scheduling.
    fn solve_random(
        &self,
        budget: &SearchBudget,
        accept: &(dyn Fn(&[usize]) -> bool + Sync),
    ) -> (Option<Perm>, u64) {
        let deadline = budget.wall_time.map(|t| Instant::now() + t);
        let batch = rayon::current_num_threads().max(1) as u32;
        let mut total = 0;
        let mut start = 0;
        while start < budget.restarts.max(1) {
            let end = (start + batch).min(budget.restarts.max(1));
            let results: Vec<(Option<Perm>, u64, bool)> = (start..end)
                .into_par_iter()
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
                    rng.set_stream(u64::from(i));
                    match self.solve(Some(rng), budget.node_limit, deadline, accept) {
                        Outcome::Found(f, nodes) => (Some(Perm::from_images_unchecked(f)), nodes, false),
                        Outcome::Exhausted(nodes) => (None, nodes, true),
                        Outcome::Aborted(nodes) => (None, nodes, false),
                    }
                })
                .collect();
            total += results.iter().map(|r| r.1).sum::<u64>();
            if let Some(f) = results.iter().find_map(|r| r.0.clone()) {
                return (Some(f), total);
            }
            // A finished (not aborted) run has seen the whole tree.
            if results.iter().any(|r| r.2) {
                return (None, total);
            }
            if deadline.is_some_and(|d| Instant::now() > d) {
                break;
            }
            start = end;
        }
        (None, total)
    }
}

/// Seeded randomized backtracking with restarts. Deterministic for a given
/// budget unless the wall-time limit cuts the search short.
pub fn random_cm(g: &FiniteGroup, predicate: &Predicate, budget: &SearchBudget) -> Option<Perm> {
    random_cm_with_nodes(g, predicate, budget).0
}

/// [`random_cm`] that also reports the number of nodes visited.
pub fn random_cm_with_nodes(
    g: &FiniteGroup,
    predicate: &Predicate,
    budget: &SearchBudget,
) -> (Option<Perm>, u64) {
    let pb = Problem::unrestricted(g);
    let accept = |im: &[usize]| predicate.accepts(&Perm::from_images_unchecked(im.to_vec()));
    let (f, nodes) = pb.solve_random(budget, &accept);
    debug_assert!(f.as_ref().is_none_or(|f| is_complete_mapping(g, f).unwrap_or(false)));
    (f, nodes)
}

/// Any complete mapping: lexicographically first for small groups,
/// random search otherwise.
pub fn find_cm(g: &FiniteGroup, predicate: &Predicate, budget: &SearchBudget) -> Result<Option<Perm>> {
    if g.order() <= ENUMERATION_GUARD {
        let e = enumerate_cms(g, predicate, Some(1), false)?;
        return Ok(e.found.into_iter().next());
    }
    if predicate.parity.is_none() && !g.hall_paige_condition() {
        return Ok(None);
    }
    Ok(random_cm(g, predicate, budget))
}

/// Witness from a normal subgroup `n` whose quotient has a complete mapping:
/// `u` runs over coset minima, `S` comes from a complete mapping of `G/N`
/// normalized to fix the identity coset.
pub fn derive_witness_from_quotient(
    g: &FiniteGroup,
    n: &Subgroup,
    budget: &SearchBudget,
) -> Result<Option<TransversalWitness>> {
    let (q, proj) = g.quotient_group(n)?;
    if q.order() == 1 {
        return Ok(Some(TransversalWitness {
            subgroup: n.clone(),
            transversal: vec![0],
            s: Perm::identity(1),
            t: Perm::identity(1),
        }));
    }
    let Some(qf) = find_cm(&q, &Predicate::any(), budget)? else {
        return Ok(None);
    };
    // ρ(g(1)⁻¹)∘g fixes the identity coset.
    let shift = q.inv(qf.apply(0));
    let normalized: Vec<usize> = (0..q.order()).map(|a| q.mul(qf.apply(a), shift)).collect();
    let cosets = g.left_cosets(n);
    let u: Vec<usize> = cosets.iter().map(|c| c[0]).collect();
    let mut slot = vec![usize::MAX; q.order()];
    for (i, &x) in u.iter().enumerate() {
        slot[proj[x]] = i;
    }
    let s_images: Vec<usize> = u.iter().map(|&x| slot[normalized[proj[x]]]).collect();
    let s = Perm::from_images(s_images)?;
    Ok(TransversalWitness::from_s(g, n.clone(), u, s))
}

/// Witness from a complement `k` of `h`: `u` runs over `K`, and `S` comes
/// from a complete mapping of `K` fixing the identity.
pub fn derive_witness_from_complement(
    g: &FiniteGroup,
    h: &Subgroup,
    k: &Subgroup,
    budget: &SearchBudget,
) -> Result<Option<TransversalWitness>> {
    let meet = h.members().iter().filter(|&&x| k.contains(x)).count();
    if meet != 1 || h.order() * k.order() != g.order() {
        return Err(Error::InvalidArgument("subgroups are not complements".into()));
    }
    let (kg, emb) = g.subgroup_as_group(k)?;
    let fixes = Predicate {
        fixes_identity: true,
        ..Predicate::any()
    };
    let candidates: Vec<Perm> = if kg.order() <= ENUMERATION_GUARD {
        enumerate_cms(&kg, &fixes, Some(64), false)?.found
    } else {
        random_cm(&kg, &fixes, budget).into_iter().collect()
    };
    for theta in candidates {
        if let Some(w) = TransversalWitness::from_s(g, h.clone(), emb.clone(), theta) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// How [`lift_cm`] found its result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftMode {
    /// Each coset `u_i H` solved on its own, onto `u_{S(i)} H` with
    /// products covering `u_{T(i)} H`.
    Blocks,
    /// One search over `G \ H` with products of `u_i H` confined to `u_{T(i)} H`.
    CosetConstrained,
    /// One search over `G \ H` keeping `G \ H` closed.
    Global,
}

/// A complete mapping of `g` that stabilizes `w.subgroup` and equals `h`
/// there (`h` on the subgroup's own indexing).
pub fn lift_cm(g: &FiniteGroup, w: &TransversalWitness, h: &Perm) -> Result<Perm> {
    lift_cm_with(g, w, h, &SearchBudget::default()).map(|(f, _)| f)
}

pub fn lift_cm_with(
    g: &FiniteGroup,
    w: &TransversalWitness,
    h: &Perm,
    budget: &SearchBudget,
) -> Result<(Perm, LiftMode)> {
    w.check(g).map_err(|e| Error::InvalidArgument(format!("invalid witness: {e}")))?;
    let sub = &w.subgroup;
    let (hg, emb) = g.subgroup_as_group(sub)?;
    if !is_complete_mapping(&hg, h)? {
        return Err(Error::NotCompleteMapping("mapping of the subgroup".into()));
    }
    let n = g.order();
    let mut preset = vec![None; n];
    for (i, &m) in emb.iter().enumerate() {
        preset[m] = Some(emb[h.apply(i)]);
    }
    let left = g.coset_index(sub, Side::Left);
    let u = &w.transversal;
    let coset_of_u: Vec<usize> = u.iter().map(|&x| left[x]).collect();
    let outside: Vec<usize> = (0..n).filter(|&x| !sub.contains(x)).collect();
    let block_of = |x: usize| coset_of_u.iter().position(|&c| c == left[x]).expect("transversal");

    let finish = |f: Perm, mode| -> Result<(Perm, LiftMode)> {
        if !is_complete_mapping(g, &f)? || emb.iter().enumerate().any(|(i, &m)| f.apply(m) != emb[h.apply(i)]) {
            return Err(Error::Internal("lifted mapping failed verification".into()));
        }
        Ok((f, mode))
    };

    // Per-block allowed images: u_{S(i)}H, with products in u_{T(i)}H.
    let allowed_for = |x: usize, image_block: Option<usize>| -> Vec<usize> {
        let i = block_of(x);
        let target = coset_of_u[w.t.apply(i)];
        outside
            .iter()
            .copied()
            .filter(|&y| image_block.is_none_or(|b| left[y] == b))
            .filter(|&y| left[g.mul(x, y)] == target)
            .collect()
    };

    // Blocks: independent subproblems.
    let mut images: Vec<Option<usize>> = preset.clone();
    let mut blocks_ok = true;
    for i in 1..u.len() {
        let xs: Vec<usize> = outside.iter().copied().filter(|&x| block_of(x) == i).collect();
        let image_block = coset_of_u[w.s.apply(i)];
        let mut allowed = vec![None; n];
        for &x in &xs {
            allowed[x] = Some(allowed_for(x, Some(image_block)));
        }
        let pb = Problem {
            g,
            vars: xs.clone(),
            allowed,
            preset: vec![None; n],
        };
        match pb.solve(None, budget.node_limit, None, |_| true) {
            Outcome::Found(f, _) => {
                for &x in &xs {
                    images[x] = Some(f[x]);
                }
            }
            _ => {
                blocks_ok = false;
                break;
            }
        }
    }
    if blocks_ok {
        let f = Perm::from_images(images.into_iter().map(|v| v.expect("assigned")).collect())?;
        return finish(f, LiftMode::Blocks);
    }

    let accept = |_: &[usize]| true;
    let mut allowed = vec![None; n];
    for &x in &outside {
        allowed[x] = Some(allowed_for(x, None));
    }
    let pb = Problem {
        g,
        vars: outside.clone(),
        allowed,
        preset: preset.clone(),
    };
    if let (Some(f), _) = pb.solve_random(budget, &accept) {
        return finish(f, LiftMode::CosetConstrained);
    }

    let mut allowed = vec![None; n];
    for &x in &outside {
        allowed[x] = Some(
            outside
                .iter()
                .copied()
                .filter(|&y| !sub.contains(g.mul(x, y)))
                .collect(),
        );
    }
    let pb = Problem {
        g,
        vars: outside,
        allowed,
        preset,
    };
    match pb.solve_random(budget, &accept) {
        (Some(f), _) => finish(f, LiftMode::Global),
        _ => Err(Error::Internal(
            "no complete mapping stabilizing the subgroup was found".into(),
        )),
    }
}

/// Outcome of the both-parities question for one group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    FailsOnlyEven,
    FailsOnlyOdd,
    FailsNoCm,
    Unknown,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Holds => "holds",
            Verdict::FailsOnlyEven => "fails_only_even",
            Verdict::FailsOnlyOdd => "fails_only_odd",
            Verdict::FailsNoCm => "fails_no_cm",
            Verdict::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Fixture,
    Enumeration,
    HallPaige,
    Lifting,
    Random,
}

/// One line of the method trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub group: String,
    pub method: Method,
    pub parity: Option<Parity>,
    pub cycles: Option<String>,
    pub nodes: u64,
    pub seed: u64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyPReport {
    pub group: String,
    pub order: usize,
    pub even: Option<Perm>,
    pub odd: Option<Perm>,
    pub verdict: Verdict,
    pub trace: Vec<TraceEvent>,
}

impl PropertyPReport {
    pub fn witness(&self, p: Parity) -> Option<&Perm> {
        match p {
            Parity::Even => self.even.as_ref(),
            Parity::Odd => self.odd.as_ref(),
        }
    }

    /// The trace as JSON lines.
    pub fn json_lines(&self) -> String {
        self.trace
            .iter()
            .map(|e| serde_json::to_string(e).expect("trace serializes"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

struct Collector<'a> {
    g: &'a FiniteGroup,
    seed: u64,
    even: Option<Perm>,
    odd: Option<Perm>,
    trace: Vec<TraceEvent>,
}

impl Collector<'_> {
    fn missing(&self) -> Vec<Parity> {
        let mut out = Vec::new();
        if self.even.is_none() {
            out.push(Parity::Even);
        }
        if self.odd.is_none() {
            out.push(Parity::Odd);
        }
        out
    }

    fn offer(&mut self, f: Perm, method: Method, nodes: u64, note: &str) -> Result<()> {
        if !is_complete_mapping(self.g, &f)? {
            return Err(Error::Internal(format!("{method:?} produced a non-complete mapping")));
        }
        let slot = match f.parity() {
            Parity::Even => &mut self.even,
            Parity::Odd => &mut self.odd,
        };
        if slot.is_some() {
            return Ok(());
        }
        self.trace.push(TraceEvent {
            group: self.g.name().to_string(),
            method,
            parity: Some(f.parity()),
            cycles: Some(f.to_cycle_string()),
            nodes,
            seed: self.seed,
            note: note.to_string(),
        });
        *slot = Some(f);
        Ok(())
    }

    fn note(&mut self, method: Method, nodes: u64, note: String) {
        self.trace.push(TraceEvent {
            group: self.g.name().to_string(),
            method,
            parity: None,
            cycles: None,
            nodes,
            seed: self.seed,
            note,
        });
    }
}

/// Even and odd complete mappings of a group small enough to enumerate,
/// stopping as soon as both are seen. The flag is true when the whole
/// tree was searched.
pub fn parity_witnesses_by_enumeration(g: &FiniteGroup) -> Result<(Option<Perm>, Option<Perm>, bool, u64)> {
    let mut even = None;
    let mut odd = None;
    let mut complete = true;
    let nodes = for_each_cm(g, false, |f| {
        let slot = match f.parity() {
            Parity::Even => &mut even,
            Parity::Odd => &mut odd,
        };
        if slot.is_none() {
            *slot = Some(f.clone());
        }
        if even.is_some() && odd.is_some() {
            complete = false;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok((even, odd, complete, nodes))
}

/// Transversal witnesses known in closed form, keyed by group name.
pub fn registered_witness(g: &FiniteGroup) -> Option<TransversalWitness> {
    let variant = match g.name() {
        "sd32:i2" => Sd32Variant::I2,
        "sd32:i6" => Sd32Variant::I6,
        _ => return None,
    };
    let (model, w) = theta_transversal_witness(variant).ok()?;
    (model.table() == g.table()).then_some(w)
}

/// Lifts two complete mappings of different parity through `w`, returning
/// the lift and its splice.
fn lift_both(
    g: &FiniteGroup,
    w: &TransversalWitness,
    budget: &SearchBudget,
) -> Result<Option<(Perm, Perm)>> {
    let (hg, _) = g.subgroup_as_group(&w.subgroup)?;
    let (he, ho) = if hg.order() <= ENUMERATION_GUARD {
        let (e, o, _, _) = parity_witnesses_by_enumeration(&hg)?;
        (e, o)
    } else {
        (
            random_cm(&hg, &Predicate::parity(Parity::Even), budget),
            random_cm(&hg, &Predicate::parity(Parity::Odd), budget),
        )
    };
    let (Some(he), Some(ho)) = (he, ho) else {
        return Ok(None);
    };
    let lifted = lift_cm_with(g, w, &he, budget)?.0;
    let spliced = splice(g, &w.subgroup, &lifted, &ho)?;
    Ok(Some((lifted, spliced)))
}

/// Decides whether `g` has complete mappings of both parities, trying the
/// fixture store, enumeration, structural lifting and random search in turn.
pub fn property_p_report(
    g: &FiniteGroup,
    budget: &SearchBudget,
    store: Option<&FixtureStore>,
) -> Result<PropertyPReport> {
    let mut c = Collector {
        g,
        seed: budget.seed,
        even: None,
        odd: None,
        trace: Vec::new(),
    };
    let mut proven_absent: Option<Vec<Parity>> = None;

    if let Some(store) = store {
        for r in store.for_group(g.name()) {
            let f = r.perm(g.order())?;
            if is_complete_mapping(g, &f)? && f.parity() == r.parity {
                c.offer(f, Method::Fixture, 0, &r.provenance)?;
            }
        }
    }

    if !c.missing().is_empty() && !g.hall_paige_condition() {
        c.note(Method::HallPaige, 0, "Sylow 2-subgroup is cyclic and nontrivial".into());
        proven_absent = Some(vec![Parity::Even, Parity::Odd]);
    }

    if proven_absent.is_none() && !c.missing().is_empty() && g.order() <= ENUMERATION_GUARD {
        let (e, o, complete, nodes) = parity_witnesses_by_enumeration(g)?;
        for f in [e, o].into_iter().flatten() {
            c.offer(f, Method::Enumeration, nodes, "lexicographically first")?;
        }
        if complete {
            c.note(Method::Enumeration, nodes, "search tree exhausted".into());
            proven_absent = Some(c.missing());
        }
    }

    if proven_absent.is_none() && !c.missing().is_empty() {
        let mut witnesses: Vec<(TransversalWitness, String)> = Vec::new();
        if let Some(w) = registered_witness(g) {
            witnesses.push((w, "registered transversal witness".into()));
        }
        if witnesses.is_empty() {
            for nsub in g.normal_subgroups() {
                let k = nsub.order();
                if k == 1 || k == g.order() || k > ENUMERATION_GUARD {
                    continue;
                }
                let (ng, _) = g.subgroup_as_group(&nsub)?;
                let (q, _) = g.quotient_group(&nsub)?;
                if !q.hall_paige_condition() || !ng.hall_paige_condition() {
                    continue;
                }
                let (e, o, _, _) = parity_witnesses_by_enumeration(&ng)?;
                if e.is_none() || o.is_none() {
                    continue;
                }
                if let Some(w) = derive_witness_from_quotient(g, &nsub, budget)? {
                    witnesses.push((w, format!("normal subgroup of order {k}")));
                    break;
                }
            }
        }
        for (w, why) in witnesses {
            if let Some((a, b)) = lift_both(g, &w, budget)? {
                c.offer(a, Method::Lifting, 0, &format!("{why}, lifted"))?;
                c.offer(b, Method::Lifting, 0, &format!("{why}, spliced"))?;
            }
            if c.missing().is_empty() {
                break;
            }
        }
    }

    if proven_absent.is_none() {
        for p in c.missing() {
            let (f, nodes) = random_cm_with_nodes(g, &Predicate::parity(p), budget);
            match f {
                Some(f) => c.offer(f, Method::Random, nodes, "seeded restarts")?,
                None => c.note(Method::Random, nodes, format!("no {p} mapping within budget")),
            }
        }
    }

    let verdict = match (&c.even, &c.odd, proven_absent.is_some()) {
        (Some(_), Some(_), _) => Verdict::Holds,
        (Some(_), None, true) => Verdict::FailsOnlyEven,
        (None, Some(_), true) => Verdict::FailsOnlyOdd,
        (None, None, true) => Verdict::FailsNoCm,
        _ => Verdict::Unknown,
    };
    Ok(PropertyPReport {
        group: g.name().to_string(),
        order: g.order(),
        even: c.even,
        odd: c.odd,
        verdict,
        trace: c.trace,
    })
}
