//! Polycyclic presentations with relative orders, power and commutator
//! relations, and a collector that turns them into multiplication tables.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// Exponent vector over the generators.
pub type PcWord = Vec<usize>;

/// A refined polycyclic presentation. Commutators use `[a,b] = a⁻¹b⁻¹ab`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcPresentation {
    pub names: Vec<String>,
    pub relative_orders: Vec<usize>,
    /// `g_i^{p_i}` as a word in `g_{i+1}..`; absent means trivial.
    pub powers: BTreeMap<usize, PcWord>,
    /// `[g_j, g_i]` for `j > i`, as a word in `g_{j+1}..`; absent means trivial.
    pub commutators: BTreeMap<(usize, usize), PcWord>,
}

impl PcPresentation {
    pub fn new(names: &[&str], relative_orders: Vec<usize>) -> Result<Self> {
        if names.len() != relative_orders.len() {
            return Err(Error::InvalidArgument("names and orders differ in length".into()));
        }
        if names.is_empty() || names.len() > 5 {
            return Err(Error::InvalidArgument("between 1 and 5 generators supported".into()));
        }
        if relative_orders.iter().any(|&p| p < 2) {
            return Err(Error::InvalidArgument("relative orders must be at least 2".into()));
        }
        Ok(PcPresentation {
            names: names.iter().map(|s| s.to_string()).collect(),
            relative_orders,
            powers: BTreeMap::new(),
            commutators: BTreeMap::new(),
        })
    }

    fn rank(&self) -> usize {
        self.names.len()
    }

    fn gen_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Parse(format!("unknown generator '{name}'")))
    }

    /// Parses a word such as `zt` or `x^2y` into an exponent vector.
    pub fn parse_word(&self, text: &str) -> Result<PcWord> {
        let mut w = vec![0; self.rank()];
        let t = text.trim();
        if t == "1" || t.is_empty() {
            return Ok(w);
        }
        let chars: Vec<char> = t.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let g = self.gen_index(&chars[i].to_string())?;
            i += 1;
            let mut e = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                e = chars[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in '{t}'")))?;
            }
            w[g] += e;
        }
        for (g, e) in w.iter_mut().enumerate() {
            *e %= self.relative_orders[g];
        }
        Ok(w)
    }

    /// Sets `g^{p} = word`.
    pub fn with_power(mut self, g: &str, word: &str) -> Result<Self> {
        let i = self.gen_index(g)?;
        let w = self.parse_word(word)?;
        if w[..=i].iter().any(|&e| e != 0) {
            return Err(Error::InvalidArgument(format!(
                "power relation of {g} uses a generator that is not later"
            )));
        }
        self.powers.insert(i, w);
        Ok(self)
    }

    /// Sets `[a, b] = word` where `a` comes after `b`.
    pub fn with_commutator(mut self, a: &str, b: &str, word: &str) -> Result<Self> {
        let j = self.gen_index(a)?;
        let i = self.gen_index(b)?;
        if j <= i {
            return Err(Error::InvalidArgument(format!(
                "commutator [{a},{b}] must list the later generator first"
            )));
        }
        let w = self.parse_word(word)?;
        if w[..=j].iter().any(|&e| e != 0) {
            return Err(Error::InvalidArgument(format!(
                "commutator [{a},{b}] uses a generator that is not later"
            )));
        }
        self.commutators.insert((j, i), w);
        Ok(self)
    }

    fn power_word(&self, i: usize) -> Option<&PcWord> {
        self.powers.get(&i).filter(|w| w.iter().any(|&e| e != 0))
    }

    fn comm_word(&self, j: usize, i: usize) -> Option<&PcWord> {
        self.commutators.get(&(j, i)).filter(|w| w.iter().any(|&e| e != 0))
    }

    /// `v · g_i` in normal form.
    fn mul_gen(&self, v: &mut PcWord, i: usize) {
        match (i + 1..self.rank()).rev().find(|&j| v[j] != 0) {
            None => {
                v[i] += 1;
                if v[i] == self.relative_orders[i] {
                    v[i] = 0;
                    if let Some(w) = self.power_word(i).cloned() {
                        self.mul_word(v, &w);
                    }
                }
            }
            Some(j) => {
                // v = v'·g_j and g_j g_i = g_i g_j [g_j, g_i].
                v[j] -= 1;
                self.mul_gen(v, i);
                self.mul_gen(v, j);
                if let Some(w) = self.comm_word(j, i).cloned() {
                    self.mul_word(v, &w);
                }
            }
        }
    }

    fn mul_word(&self, v: &mut PcWord, w: &PcWord) {
        for (g, &e) in w.iter().enumerate() {
            for _ in 0..e {
                self.mul_gen(v, g);
            }
        }
    }

    pub fn multiply(&self, a: &PcWord, b: &PcWord) -> PcWord {
        let mut v = a.clone();
        self.mul_word(&mut v, b);
        v
    }

    /// All normal-form words ordered by support size, then by support
    /// positions lexicographically, then by exponents.
    pub fn elements(&self) -> Vec<PcWord> {
        let r = self.rank();
        let mut all: Vec<PcWord> = vec![vec![]];
        for g in 0..r {
            all = all
                .into_iter()
                .flat_map(|w| {
                    (0..self.relative_orders[g]).map(move |e| {
                        let mut w2 = w.clone();
                        w2.push(e);
                        w2
                    })
                })
                .collect();
        }
        all.sort_by_key(|w| {
            let support: Vec<usize> = (0..r).filter(|&g| w[g] != 0).collect();
            let exps: Vec<usize> = support.iter().map(|&g| w[g]).collect();
            (support.len(), support, exps)
        });
        all
    }

    pub fn word_label(&self, w: &PcWord) -> String {
        let s: String = w
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(g, &e)| {
                if e == 1 {
                    self.names[g].clone()
                } else {
                    format!("{}^{e}", self.names[g])
                }
            })
            .collect();
        if s.is_empty() {
            "1".to_string()
        } else {
            s
        }
    }

    /// The group defined by the presentation, elements in [`Self::elements`] order.
    pub fn to_group(&self, name: impl Into<String>) -> Result<FiniteGroup> {
        let elems = self.elements();
        let index: BTreeMap<PcWord, usize> =
            elems.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let labels = elems.iter().map(|w| self.word_label(w)).collect();
        let mut table = Vec::with_capacity(elems.len());
        for a in &elems {
            let mut row = Vec::with_capacity(elems.len());
            for b in &elems {
                let c = self.multiply(a, b);
                row.push(*index.get(&c).ok_or_else(|| {
                    Error::InvalidGroup("collection left the normal-form range".into())
                })?);
            }
            table.push(row);
        }
        FiniteGroup::from_table(name, &table, labels).map_err(|e| {
            Error::InvalidGroup(format!("presentation is inconsistent: {e}"))
        })
    }
}

/// The SmallGroup ids of order 16 that have a stored presentation.
pub const SMALL16_PC_IDS: [usize; 9] = [2, 3, 4, 6, 10, 11, 12, 13, 14];

/// Refined pc presentation of `SmallGroup(16, id)` on generators `x,y,z,t`.
pub fn small16_presentation(id: usize) -> Result<PcPresentation> {
    let p = PcPresentation::new(&["x", "y", "z", "t"], vec![2; 4])?;
    let p = match id {
        2 => p.with_power("x", "z")?.with_power("y", "t")?,
        3 => p.with_power("x", "t")?.with_commutator("y", "x", "z")?,
        4 => p
            .with_power("x", "t")?
            .with_power("y", "z")?
            .with_commutator("y", "x", "z")?,
        6 => p
            .with_power("x", "z")?
            .with_power("z", "t")?
            .with_commutator("y", "x", "t")?,
        10 => p.with_power("x", "t")?,
        11 => p.with_commutator("y", "x", "t")?,
        // The y² relation is not trivial here: C2 × Q8 needs y² = x² = t.
        12 => p
            .with_power("x", "t")?
            .with_power("y", "t")?
            .with_commutator("y", "x", "t")?,
        13 => p.with_power("z", "t")?.with_commutator("y", "x", "t")?,
        14 => p,
        _ => return Err(Error::Unknown(format!("SmallGroup(16,{id}) presentation"))),
    };
    Ok(p)
}

pub fn mk_small16_pc(id: usize) -> Result<FiniteGroup> {
    small16_presentation(id)?.to_group(format!("SG16_{id}"))
}
