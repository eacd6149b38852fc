//! Textual group selectors such as `cyclic:9`, `2group:SD:5`, `small16:6`
//! or `cyclic:2*cyclic:3`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::families::{
    is_prime, mk_cyclic, mk_direct_product, mk_elementary_abelian, mk_modular_16k,
    mk_semidirect_32, mk_two_generated_2group, Sd32Variant, TwoGroupKind,
};
use crate::group::FiniteGroup;
use crate::pc::{mk_small16_pc, SMALL16_PC_IDS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSelector {
    Cyclic(usize),
    /// Additive group of the field of order `q`.
    Field(usize),
    Elementary { p: usize, d: usize },
    TwoGroup { kind: TwoGroupKind, n: u32 },
    /// `M_{16k}` with `y^ε x^ℓ` at index `ε·8k + ℓ`.
    Modular16k(usize),
    Small16(usize),
    Sd32(Sd32Variant),
    Q8,
    Cayley(String),
    Product(Vec<GroupSelector>),
}

/// `q = p^d` with `p` prime.
pub fn prime_power(q: usize) -> Option<(usize, usize)> {
    let p = (2..=q).find(|p| q.is_multiple_of(*p))?;
    let mut d = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        d += 1;
    }
    (r == 1 && is_prime(p)).then_some((p, d))
}

fn num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what} '{s}'")))
}

impl FromStr for GroupSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('*') {
            let parts = s.split('*').map(str::parse).collect::<Result<Vec<_>>>()?;
            return Ok(GroupSelector::Product(parts));
        }
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        let args: Vec<&str> = if rest.is_empty() { vec![] } else { rest.split(':').collect() };
        let want = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!("selector '{s}' expects {n} argument(s)")))
            }
        };
        match head.to_ascii_lowercase().as_str() {
            "cyclic" | "c" | "z" => {
                want(1)?;
                Ok(GroupSelector::Cyclic(num(args[0], "order")?))
            }
            "field" | "f" => {
                want(1)?;
                let q = num(args[0], "field order")?;
                prime_power(q)
                    .map(|_| GroupSelector::Field(q))
                    .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))
            }
            "elem" => {
                want(2)?;
                Ok(GroupSelector::Elementary {
                    p: num(args[0], "prime")?,
                    d: num(args[1], "dimension")?,
                })
            }
            "2group" => {
                want(2)?;
                Ok(GroupSelector::TwoGroup {
                    kind: args[0].parse()?,
                    n: num(args[1], "exponent")?,
                })
            }
            "modular16k" => {
                want(1)?;
                Ok(GroupSelector::Modular16k(num(args[0], "k")?))
            }
            "small16" => {
                want(1)?;
                let id = num(args[0], "small group id")?;
                if !(1..=14).contains(&id) {
                    return Err(Error::InvalidArgument(format!("no group SmallGroup(16,{id})")));
                }
                Ok(GroupSelector::Small16(id))
            }
            "sd32" => {
                want(1)?;
                Ok(GroupSelector::Sd32(args[0].parse()?))
            }
            "q8" => {
                want(0)?;
                Ok(GroupSelector::Q8)
            }
            "cayley" => {
                if rest.is_empty() {
                    return Err(Error::Parse("cayley selector needs a path".into()));
                }
                Ok(GroupSelector::Cayley(rest.to_string()))
            }
            _ => Err(Error::Parse(format!("unknown group selector '{s}'"))),
        }
    }
}

impl fmt::Display for GroupSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSelector::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSelector::Field(q) => write!(f, "field:{q}"),
            GroupSelector::Elementary { p, d } => write!(f, "elem:{p}:{d}"),
            GroupSelector::TwoGroup { kind, n } => write!(f, "2group:{kind}:{n}"),
            GroupSelector::Modular16k(k) => write!(f, "modular16k:{k}"),
            GroupSelector::Small16(i) => write!(f, "small16:{i}"),
            GroupSelector::Sd32(Sd32Variant::I2) => write!(f, "sd32:i2"),
            GroupSelector::Sd32(Sd32Variant::I6) => write!(f, "sd32:i6"),
            GroupSelector::Q8 => write!(f, "q8"),
            GroupSelector::Cayley(p) => write!(f, "cayley:{p}"),
            GroupSelector::Product(parts) => {
                let s: Vec<String> = parts.iter().map(ToString::to_string).collect();
                f.write_str(&s.join("*"))
            }
        }
    }
}

impl GroupSelector {
    pub fn build(&self) -> Result<FiniteGroup> {
        let g = match self {
            GroupSelector::Cyclic(n) => mk_cyclic(*n)?,
            GroupSelector::Field(q) => {
                let (p, d) = prime_power(*q)
                    .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
                if d == 1 {
                    mk_cyclic(p)?
                } else {
                    mk_elementary_abelian(p, d)?
                }
            }
            GroupSelector::Elementary { p, d } => mk_elementary_abelian(*p, *d)?,
            GroupSelector::TwoGroup { kind, n } => mk_two_generated_2group(*kind, *n)?,
            GroupSelector::Modular16k(k) => mk_modular_16k(*k)?,
            GroupSelector::Small16(id) => match id {
                1 => mk_cyclic(16)?,
                5 => mk_two_generated_2group(TwoGroupKind::AC, 4)?,
                7 => mk_two_generated_2group(TwoGroupKind::D, 4)?,
                8 => mk_two_generated_2group(TwoGroupKind::SD, 4)?,
                9 => mk_two_generated_2group(TwoGroupKind::Q, 4)?,
                i if SMALL16_PC_IDS.contains(i) => mk_small16_pc(*i)?,
                i => return Err(Error::InvalidArgument(format!("no group SmallGroup(16,{i})"))),
            },
            GroupSelector::Sd32(v) => mk_semidirect_32(*v)?,
            GroupSelector::Q8 => {
                let q16 = mk_two_generated_2group(TwoGroupKind::Q, 4)?;
                // ⟨x², y⟩ with x² at index 4 and y at index 1.
                let h = q16.generate(&[4, 1]);
                q16.subgroup_as_group(&h)?.0
            }
            GroupSelector::Cayley(path) => {
                let text = std::fs::read_to_string(path)?;
                FiniteGroup::from_cayley_text(path.clone(), &text)?
            }
            GroupSelector::Product(parts) => {
                let mut it = parts.iter();
                let first = it
                    .next()
                    .ok_or_else(|| Error::Parse("empty product".into()))?
                    .build()?;
                it.try_fold(first, |acc, s| mk_direct_product(&acc, &s.build()?))?
            }
        };
        Ok(g.with_name(self.to_string()))
    }
}

/// Parses and builds in one step.
pub fn resolve_group(selector: &str) -> Result<FiniteGroup> {
    selector.parse::<GroupSelector>()?.build()
}
