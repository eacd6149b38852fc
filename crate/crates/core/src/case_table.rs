//! The 41-case definition of an even complete mapping of the modular group
//! `M_{16k} = ⟨x,y : x^{8k} = y² = 1, y⁻¹xy = x^{1+4k}⟩`, elements written
//! `y^ε x^ℓ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `a·k + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lin {
    pub a: i64,
    pub b: i64,
}

impl Lin {
    pub fn eval(self, k: i64) -> i64 {
        self.a * k + self.b
    }

    fn parse(s: &str) -> Result<Lin> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad linear term '{s}'"));
        match s.find('K') {
            None => Ok(Lin {
                a: 0,
                b: s.parse().map_err(|_| bad())?,
            }),
            Some(p) => {
                let a = match &s[..p] {
                    "" | "+" => 1,
                    "-" => -1,
                    t => t.parse().map_err(|_| bad())?,
                };
                let rest = &s[p + 1..];
                let b = if rest.is_empty() {
                    0
                } else {
                    rest.trim_start_matches('+').parse().map_err(|_| bad())?
                };
                Ok(Lin { a, b })
            }
        }
    }
}

/// `(ε, ℓ mod m = r, lo ≤ ℓ ≤ hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Range {
    pub eps: u8,
    pub residue: i64,
    pub lo: Lin,
    pub hi: Lin,
}

impl Range {
    /// The exponents `ℓ` described for a given `k` and residue modulus.
    pub fn exponents(&self, k: i64, modulus: i64) -> Vec<i64> {
        let (lo, hi) = (self.lo.eval(k), self.hi.eval(k));
        (lo..=hi).filter(|l| l.rem_euclid(modulus) == self.residue).collect()
    }
}

/// `Shift(c)`: `ℓ' = ℓ + c`; `Double(c)`: `ℓ' = 2ℓ + c`; `Const(c)`: `ℓ' = c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Formula {
    Shift(Lin),
    Double(Lin),
    Const(Lin),
}

impl Formula {
    pub fn apply(self, l: i64, k: i64) -> i64 {
        let v = match self {
            Formula::Shift(c) => l + c.eval(k),
            Formula::Double(c) => 2 * l + c.eval(k),
            Formula::Const(c) => c.eval(k),
        };
        v.rem_euclid(8 * k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRow {
    pub id: usize,
    /// Input case, residue mod 4.
    pub input: Range,
    pub f_eps: u8,
    pub f: Formula,
    /// Values of `f`, residue mod 4.
    pub f_range: Range,
    pub ft_eps: u8,
    pub ft: Formula,
    /// Values of `f̃`, residue mod 8.
    pub ft_range: Range,
}

// id | ε r lo hi | ε' f | ε' r' lo hi | ε'' f̃ | ε'' r'' lo hi
// S c: ℓ+c; D c: 2ℓ+c; C c: constant. All exponents mod 8K.
const TABLE: &str = "
1  | 0 0 0 0          | 0 C 0     | 0 0 0 0          | 0 C 0     | 0 0 0 0
2  | 0 0 4 2K         | 1 S -3    | 1 1 1 2K-3       | 1 D -3    | 1 5 5 4K-3
3  | 0 0 2K+4 4K-4    | 0 S -1    | 0 3 2K+3 4K-5    | 0 D -1    | 0 7 4K+7 8K-9
4  | 0 0 4K 4K        | 1 C 4K    | 1 0 4K 4K        | 1 C 0     | 1 0 0 0
5  | 0 0 4K+4 6K      | 0 S 4K-3  | 0 1 1 2K-3       | 0 D 4K-3  | 0 5 4K+5 8K-3
6  | 0 0 6K+4 8K-4    | 1 S 4K-1  | 1 3 2K+3 4K-5    | 1 D 4K-1  | 1 7 7 4K-9
7  | 0 1 1 1          | 1 C 8K-1  | 1 3 8K-1 8K-1    | 1 C 4K    | 1 0 4K 4K
8  | 0 1 5 2K+1       | 0 S -3    | 0 2 2 2K-2       | 0 D -3    | 0 7 7 4K-1
9  | 0 1 2K+5 4K-3    | 1 S 4K-2  | 1 3 6K+3 8K-5    | 1 D -2    | 1 0 4K+8 8K-8
10 | 0 1 4K+1 4K+1    | 0 C 8K-1  | 0 3 8K-1 8K-1    | 0 C 4K    | 0 0 4K 4K
11 | 0 1 4K+5 6K+1    | 1 S -3    | 1 2 4K+2 6K-2    | 1 D 4K-3  | 1 7 4K+7 8K-1
12 | 0 1 6K+5 8K-3    | 0 S -2    | 0 3 6K+3 8K-5    | 0 D -2    | 0 0 4K+8 8K-8
13 | 0 2 2 2K-2       | 1 S 0     | 1 2 2 2K-2       | 1 D 0     | 1 4 4 4K-4
14 | 0 2 2K+2 4K-2    | 1 S 4K-2  | 1 0 6K 8K-4      | 1 D 4K-2  | 1 2 2 4K-6
15 | 0 2 4K+2 6K-2    | 0 S 0     | 0 2 4K+2 6K-2    | 0 D 0     | 0 4 4 4K-4
16 | 0 2 6K+2 8K-2    | 0 S 4K-2  | 0 0 2K 4K-4      | 0 D 4K-2  | 0 2 2 4K-6
17 | 0 3 3 2K-1       | 0 S 4K    | 0 3 4K+3 6K-1    | 0 D 4K    | 0 6 4K+6 8K-2
18 | 0 3 2K+3 4K-1    | 1 S 4K-1  | 1 2 6K+2 8K-2    | 1 D -1    | 1 5 4K+5 8K-3
19 | 0 3 4K+3 6K-1    | 1 S 0     | 1 3 4K+3 6K-1    | 1 D 4K    | 1 6 4K+6 8K-2
20 | 0 3 6K+3 8K-1    | 0 S 4K-1  | 0 2 2K+2 4K-2    | 0 D 4K-1  | 0 5 5 4K-3
21 | 1 0 0 0          | 1 C 4K-2  | 1 2 4K-2 4K-2    | 0 C 4K-2  | 0 6 4K-2 4K-2
22 | 1 0 4 2K-4       | 0 S 0     | 0 0 4 2K-4       | 1 D 0     | 1 0 8 4K-8
23 | 1 0 2K 2K        | 0 C 2K-1  | 0 3 2K-1 2K-1    | 1 C 4K-1  | 1 7 4K-1 4K-1
24 | 1 0 2K+4 4K      | 0 S 4K-2  | 0 2 6K+2 8K-2    | 1 D 4K-2  | 1 6 6 4K-2
25 | 1 0 4K+4 6K-4    | 1 S 0     | 1 0 4K+4 6K-4    | 0 D 0     | 0 0 8 4K-8
26 | 1 0 6K 6K        | 1 C 2K-1  | 1 3 2K-1 2K-1    | 0 C 8K-1  | 0 7 8K-1 8K-1
27 | 1 0 6K+4 8K-4    | 1 S 4K-2  | 1 2 2K+2 4K-6    | 0 D 4K-2  | 0 6 6 4K-10
28 | 1 1 1 2K-3       | 0 S 4K    | 0 1 4K+1 6K-3    | 1 D 4K    | 1 2 4K+2 8K-6
29 | 1 1 2K+1 4K-3    | 1 S -1    | 1 0 2K 4K-4      | 0 D 4K-1  | 0 1 1 4K-7
30 | 1 1 4K+1 6K-3    | 1 S 0     | 1 1 4K+1 6K-3    | 0 D 4K    | 0 2 4K+2 8K-6
31 | 1 1 6K+1 8K-3    | 0 S -1    | 0 0 6K 8K-4      | 1 D -1    | 1 1 4K+1 8K-7
32 | 1 2 2 2          | 1 C 4K-1  | 1 3 4K-1 4K-1    | 0 C 4K+1  | 0 1 4K+1 4K+1
33 | 1 2 6 2K-2       | 0 S -3    | 0 3 3 2K-5       | 1 D -3    | 1 1 9 4K-7
34 | 1 2 2K+2 4K-2    | 1 S -1    | 1 1 2K+1 4K-3    | 0 D -1    | 0 3 4K+3 8K-5
35 | 1 2 4K+2 4K+2    | 0 C 4K-1  | 0 3 4K-1 4K-1    | 1 C 1     | 1 1 1 1
36 | 1 2 4K+6 6K-2    | 1 S 4K-3  | 1 3 3 2K-5       | 0 D 4K-3  | 0 1 4K+9 8K-7
37 | 1 2 6K+2 8K-2    | 0 S 4K-1  | 0 1 2K+1 4K-3    | 1 D 4K-1  | 1 3 3 4K-5
38 | 1 3 3 2K-1       | 0 S 4K-3  | 0 0 4K 6K-4      | 1 D 4K-3  | 1 3 4K+3 8K-5
39 | 1 3 2K+3 4K-1    | 1 S 4K-2  | 1 1 6K+1 8K-3    | 0 D -2    | 0 4 4K+4 8K-4
40 | 1 3 4K+3 6K-1    | 1 S 4K-3  | 1 0 0 2K-4       | 0 D -3    | 0 3 3 4K-5
41 | 1 3 6K+3 8K-1    | 0 S -2    | 0 1 6K+1 8K-3    | 1 D -2    | 1 4 4K+4 8K-4
";

fn parse_range(fields: &[&str]) -> Result<Range> {
    if fields.len() != 4 {
        return Err(Error::Parse(format!("range needs 4 fields: {fields:?}")));
    }
    Ok(Range {
        eps: fields[0].parse().map_err(|_| Error::Parse("bad ε".into()))?,
        residue: fields[1].parse().map_err(|_| Error::Parse("bad residue".into()))?,
        lo: Lin::parse(fields[2])?,
        hi: Lin::parse(fields[3])?,
    })
}

fn parse_formula(fields: &[&str]) -> Result<(u8, Formula)> {
    if fields.len() != 3 {
        return Err(Error::Parse(format!("formula needs 3 fields: {fields:?}")));
    }
    let eps = fields[0].parse().map_err(|_| Error::Parse("bad ε".into()))?;
    let c = Lin::parse(fields[2])?;
    let f = match fields[1] {
        "S" => Formula::Shift(c),
        "D" => Formula::Double(c),
        "C" => Formula::Const(c),
        other => return Err(Error::Parse(format!("bad formula kind '{other}'"))),
    };
    Ok((eps, f))
}

/// The 41 rows, parsed once.
pub fn case_table() -> &'static [CaseRow] {
    static ROWS: std::sync::OnceLock<Vec<CaseRow>> = std::sync::OnceLock::new();
    ROWS.get_or_init(|| parse_table(TABLE).expect("embedded case table parses"))
}

fn parse_table(text: &str) -> Result<Vec<CaseRow>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|line| {
            let cols: Vec<Vec<&str>> = line
                .split('|')
                .map(|c| c.split_whitespace().collect())
                .collect();
            if cols.len() != 6 {
                return Err(Error::Parse(format!("row needs 6 columns: '{line}'")));
            }
            let id = cols[0][0].parse().map_err(|_| Error::Parse("bad row id".into()))?;
            let (f_eps, f) = parse_formula(&cols[2])?;
            let (ft_eps, ft) = parse_formula(&cols[4])?;
            Ok(CaseRow {
                id,
                input: parse_range(&cols[1])?,
                f_eps,
                f,
                f_range: parse_range(&cols[3])?,
                ft_eps,
                ft,
                ft_range: parse_range(&cols[5])?,
            })
        })
        .collect()
}

fn check_k(k: usize) -> Result<i64> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("k must be even and at least 2, got {k}")));
    }
    Ok(k as i64)
}

/// Index `ε·8k + ℓ`.
fn idx(eps: u8, l: i64, k: i64) -> usize {
    (eps as i64 * 8 * k + l) as usize
}

/// For each element index of `M_{16k}`, the id of the row covering it.
/// Fails unless the input cases partition the group.
pub fn case_of_each_element(k: usize) -> Result<Vec<usize>> {
    let k = check_k(k)?;
    let n = 16 * k as usize;
    let mut case = vec![0usize; n];
    for row in case_table() {
        for l in row.input.exponents(k, 4) {
            if !(0..8 * k).contains(&l) {
                return Err(Error::Internal(format!("row {} leaves the range", row.id)));
            }
            let i = idx(row.input.eps, l, k);
            if case[i] != 0 {
                return Err(Error::Internal(format!(
                    "rows {} and {} overlap",
                    case[i], row.id
                )));
            }
            case[i] = row.id;
        }
    }
    if let Some(i) = case.iter().position(|&c| c == 0) {
        return Err(Error::Internal(format!("element {i} is not covered")));
    }
    Ok(case)
}

/// Checks that each output descriptor column partitions the group and that
/// every row's formulas land inside that row's stated ranges.
pub fn verify_partitions(k: usize) -> Result<()> {
    let kk = check_k(k)?;
    case_of_each_element(k)?;
    let n = 16 * k;
    for (modulus, pick) in [(4i64, 0u8), (8, 1)] {
        let mut seen = vec![false; n];
        for row in case_table() {
            let range = if pick == 0 { row.f_range } else { row.ft_range };
            for l in range.exponents(kk, modulus) {
                let i = idx(range.eps, l, kk);
                if !(0..8 * kk).contains(&l) || seen[i] {
                    return Err(Error::Internal(format!(
                        "output ranges overlap or overflow at row {}",
                        row.id
                    )));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Internal("output ranges do not cover the group".into()));
        }
    }
    for row in case_table() {
        let inputs = row.input.exponents(kk, 4);
        let f_vals: Vec<i64> = row.f_range.exponents(kk, 4);
        let ft_vals: Vec<i64> = row.ft_range.exponents(kk, 8);
        if inputs.len() != f_vals.len() || inputs.len() != ft_vals.len() {
            return Err(Error::Internal(format!("row {} has mismatched sizes", row.id)));
        }
        for &l in &inputs {
            let fl = row.f.apply(l, kk);
            if row.f_range.eps != row.f_eps || f_vals.binary_search(&fl).is_err() {
                return Err(Error::Internal(format!("row {}: f value outside its range", row.id)));
            }
            let tl = row.ft.apply(l, kk);
            if row.ft_range.eps != row.ft_eps || ft_vals.binary_search(&tl).is_err() {
                return Err(Error::Internal(format!("row {}: f̃ value outside its range", row.id)));
            }
        }
    }
    Ok(())
}

/// Image table of `f` and the `f̃` column of the table, both as element indices.
pub fn table_images(k: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let kk = check_k(k)?;
    let case = case_of_each_element(k)?;
    let rows = case_table();
    let n = 16 * k;
    let mut f = vec![0; n];
    let mut ft = vec![0; n];
    for i in 0..n {
        let row = &rows[case[i] - 1];
        let l = (i % (8 * k)) as i64;
        f[i] = idx(row.f_eps, row.f.apply(l, kk), kk);
        ft[i] = idx(row.ft_eps, row.ft.apply(l, kk), kk);
    }
    Ok((f, ft))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_has_41_rows_in_order() {
        let rows = case_table();
        assert_eq!(rows.len(), 41);
        assert!(rows.iter().enumerate().all(|(i, r)| r.id == i + 1));
    }

    #[test]
    fn linear_terms_parse() {
        assert_eq!(Lin::parse("2K-3").unwrap(), Lin { a: 2, b: -3 });
        assert_eq!(Lin::parse("4K").unwrap(), Lin { a: 4, b: 0 });
        assert_eq!(Lin::parse("-3").unwrap(), Lin { a: 0, b: -3 });
        assert_eq!(Lin::parse("6K+4").unwrap(), Lin { a: 6, b: 4 });
        assert!(Lin::parse("2X").is_err());
    }

    #[test]
    fn partitions_hold_for_small_k() {
        for k in (2..=12).step_by(2) {
            verify_partitions(k).unwrap();
        }
        assert!(verify_partitions(3).is_err());
    }
}
