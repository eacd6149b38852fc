//! Latin squares `L_h = (h(g_i)·g_j)`, their row, column and symbol
//! permutations, parity types, and Mann products.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Side};
use crate::perm::{Parity, Perm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Cayley,
    LH,
    MannProduct,
    External,
}

/// An `n × n` array of symbols `0..n`, not necessarily Latin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Square {
    pub cells: Vec<Vec<usize>>,
    pub provenance: Provenance,
}

/// A square whose rows and columns are all bijections.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatinSquare {
    cells: Vec<Vec<usize>>,
    provenance: Provenance,
}

fn is_bijection(n: usize, it: impl Iterator<Item = usize>) -> bool {
    let mut seen = vec![false; n];
    let mut count = 0;
    for x in it {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
        count += 1;
    }
    count == n
}

impl Square {
    pub fn degree(&self) -> usize {
        self.cells.len()
    }

    pub fn is_latin(&self) -> bool {
        let n = self.cells.len();
        self.cells.iter().all(|r| r.len() == n && is_bijection(n, r.iter().copied()))
            && (0..n).all(|j| is_bijection(n, self.cells.iter().map(|r| r[j])))
    }

    pub fn into_latin(self) -> Result<LatinSquare> {
        LatinSquare::new(self.cells, self.provenance)
    }
}

/// The three parities `(π_r, π_c, π_s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FhwType {
    pub rows: Parity,
    pub cols: Parity,
    pub symbols: Parity,
}

impl FhwType {
    pub fn new(rows: Parity, cols: Parity, symbols: Parity) -> Self {
        FhwType { rows, cols, symbols }
    }

    pub fn bits(&self) -> (u8, u8, u8) {
        (self.rows.bit(), self.cols.bit(), self.symbols.bit())
    }
}

impl std::fmt::Display for FhwType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (r, c, s) = self.bits();
        write!(f, "({r},{c},{s})")
    }
}

/// `(k, m)`: the number of rows, resp. columns, whose permutation has the
/// less frequent parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KotlarType {
    pub k: usize,
    pub m: usize,
}

impl std::fmt::Display for KotlarType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.k, self.m)
    }
}

fn parity_of_c2(n: usize) -> Parity {
    Parity::from_bit((n * n.saturating_sub(1) / 2) as u64)
}

impl LatinSquare {
    pub fn new(cells: Vec<Vec<usize>>, provenance: Provenance) -> Result<LatinSquare> {
        let sq = Square { cells, provenance };
        if !sq.is_latin() {
            return Err(Error::InvalidArgument("square is not Latin".into()));
        }
        Ok(LatinSquare {
            cells: sq.cells,
            provenance,
        })
    }

    pub fn degree(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell(&self, i: usize, j: usize) -> usize {
        self.cells[i][j]
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.degree() {
            return Err(Error::InvalidArgument(format!(
                "index {i} out of range for degree {}",
                self.degree()
            )));
        }
        Ok(())
    }

    /// `j ↦ L(i, j)`.
    pub fn row_perm(&self, i: usize) -> Result<Perm> {
        self.check_index(i)?;
        Perm::from_images(self.cells[i].clone())
    }

    /// `i ↦ L(i, j)`.
    pub fn col_perm(&self, j: usize) -> Result<Perm> {
        self.check_index(j)?;
        Perm::from_images(self.cells.iter().map(|r| r[j]).collect())
    }

    /// `i ↦ j` where `L(i, j) = x`.
    pub fn symbol_perm(&self, x: usize) -> Result<Perm> {
        self.check_index(x)?;
        let images = self
            .cells
            .iter()
            .map(|r| r.iter().position(|&v| v == x).expect("Latin row"))
            .collect();
        Perm::from_images(images)
    }

    pub fn parities(&self) -> FhwType {
        let n = self.degree();
        let sum = |f: &dyn Fn(usize) -> Perm| (0..n).map(|i| f(i).parity()).sum::<Parity>();
        let t = FhwType {
            rows: sum(&|i| self.row_perm(i).expect("in range")),
            cols: sum(&|j| self.col_perm(j).expect("in range")),
            symbols: sum(&|x| self.symbol_perm(x).expect("in range")),
        };
        debug_assert_eq!(t.rows + t.cols + t.symbols, parity_of_c2(n));
        t
    }

    /// Whether `π_r + π_c + π_s = C(n,2) mod 2`.
    pub fn fundamental_relation_holds(&self) -> bool {
        let t = self.parities();
        t.rows + t.cols + t.symbols == parity_of_c2(self.degree())
    }

    pub fn kotlar_type(&self) -> KotlarType {
        let n = self.degree();
        let minority = |odd: usize| odd.min(n - odd);
        let odd_rows = (0..n)
            .filter(|&i| self.row_perm(i).expect("in range").parity() == Parity::Odd)
            .count();
        let odd_cols = (0..n)
            .filter(|&j| self.col_perm(j).expect("in range").parity() == Parity::Odd)
            .count();
        KotlarType {
            k: minority(odd_rows),
            m: minority(odd_cols),
        }
    }

    /// Text format: `n`, then `n` rows of zero-based symbols.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.degree());
        for r in &self.cells {
            let row: Vec<String> = r.iter().map(ToString::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<LatinSquare> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty square".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("degree: {e}")))?;
        let cells = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("cell {t:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if cells.len() != n {
            return Err(Error::Parse(format!("expected {n} rows, found {}", cells.len())));
        }
        LatinSquare::new(cells, Provenance::External)
    }
}

/// `L_h(i, j) = h(g_i)·g_j`.
pub fn l_h_square(g: &FiniteGroup, h: &Perm) -> Result<LatinSquare> {
    if h.degree() != g.order() {
        return Err(Error::DegreeMismatch {
            expected: g.order(),
            found: h.degree(),
        });
    }
    let n = g.order();
    let cells = (0..n)
        .map(|i| (0..n).map(|j| g.mul(h.apply(i), j)).collect())
        .collect();
    let prov = if h.is_identity() {
        Provenance::Cayley
    } else {
        Provenance::LH
    };
    LatinSquare::new(cells, prov)
}

/// The Cayley table `A = L_id`.
pub fn cayley_square(g: &FiniteGroup) -> LatinSquare {
    l_h_square(g, &Perm::identity(g.order())).expect("degree matches")
}

/// Row, column and symbol permutations of `L_h` predicted from `h` alone:
/// row `i` is `λ(h(g_i))`, column `j` is `ρ(g_j)∘h`, symbol `x` is
/// `ρ(x)∘inv∘h`.
pub fn predicted_lines(g: &FiniteGroup, h: &Perm) -> Result<(Vec<Perm>, Vec<Perm>, Vec<Perm>)> {
    let n = g.order();
    let inv = g.inversion_perm();
    let rows = (0..n).map(|i| g.regular_rep(h.apply(i), Side::Left)).collect();
    let cols = (0..n)
        .map(|j| g.regular_rep(j, Side::Right).compose(h))
        .collect::<Result<_>>()?;
    let syms = (0..n)
        .map(|x| g.regular_rep(x, Side::Right).compose(&inv)?.compose(h))
        .collect::<Result<_>>()?;
    Ok((rows, cols, syms))
}

/// Whether the predicted line permutations equal those read off the cells.
pub fn lines_match_prediction(g: &FiniteGroup, h: &Perm) -> Result<bool> {
    let sq = l_h_square(g, h)?;
    let (rows, cols, syms) = predicted_lines(g, h)?;
    for i in 0..g.order() {
        if sq.row_perm(i)? != rows[i] || sq.col_perm(i)? != cols[i] || sq.symbol_perm(i)? != syms[i] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Row-wise composition: row `i` of the product is `P_i ∘ Q_i`, so
/// cell `(i, j)` is `L1(i, L2(i, j))`.
pub fn mann_product(l1: &LatinSquare, l2: &LatinSquare) -> Result<Square> {
    check_same_degree(l1, l2)?;
    let n = l1.degree();
    let cells = (0..n)
        .map(|i| (0..n).map(|j| l1.cells[i][l2.cells[i][j]]).collect())
        .collect();
    Ok(Square {
        cells,
        provenance: Provenance::MannProduct,
    })
}

/// Superposition test: all `n²` pairs `(L1(i,j), L2(i,j))` are distinct.
/// Cross-checked against the row-quotient criterion of
/// [`orthogonal_by_quotient`].
pub fn is_orthogonal(l1: &LatinSquare, l2: &LatinSquare) -> Result<bool> {
    check_same_degree(l1, l2)?;
    let n = l1.degree();
    let mut seen = vec![false; n * n];
    let mut ok = true;
    for i in 0..n {
        for j in 0..n {
            let k = l1.cells[i][j] * n + l2.cells[i][j];
            ok &= !seen[k];
            seen[k] = true;
        }
    }
    if orthogonal_by_quotient(l1, l2)? != ok {
        return Err(Error::Internal("orthogonality tests disagree".into()));
    }
    Ok(ok)
}

fn check_same_degree(l1: &LatinSquare, l2: &LatinSquare) -> Result<()> {
    if l1.degree() != l2.degree() {
        return Err(Error::DegreeMismatch {
            expected: l1.degree(),
            found: l2.degree(),
        });
    }
    Ok(())
}

/// Orthogonality as a Latin condition: with rows `P_i` of `L1` and `R_i`
/// of `L2`, the square with rows `R_i ∘ P_i⁻¹` (that is, `L2 = Q·L1`) is
/// Latin exactly when the two squares are orthogonal.
pub fn orthogonal_by_quotient(l1: &LatinSquare, l2: &LatinSquare) -> Result<bool> {
    check_same_degree(l1, l2)?;
    let n = l1.degree();
    let cells = (0..n)
        .map(|i| {
            let p_inv = Perm::from_images_unchecked(l1.cells[i].clone()).inverse();
            (0..n).map(|a| l2.cells[i][p_inv.apply(a)]).collect()
        })
        .collect();
    Ok(Square {
        cells,
        provenance: Provenance::MannProduct,
    }
    .is_latin())
}

/// The square `Q` with rows `P_i⁻¹ ∘ R_i`, so that `L2 = L1·Q`.
pub fn mann_quotient(l1: &LatinSquare, l2: &LatinSquare) -> Result<Square> {
    check_same_degree(l1, l2)?;
    let n = l1.degree();
    let cells = (0..n)
        .map(|i| {
            let p_inv = Perm::from_images_unchecked(l1.cells[i].clone()).inverse();
            (0..n).map(|j| p_inv.apply(l2.cells[i][j])).collect()
        })
        .collect();
    Ok(Square {
        cells,
        provenance: Provenance::MannProduct,
    })
}

/// Whether `L2 = L1·Q` for a Latin square `Q`. This agrees with
/// orthogonality when the row permutations of `L1` commute with those of
/// the quotient, e.g. for Cayley tables of abelian groups, but not in general.
pub fn is_right_mann_multiple(l1: &LatinSquare, l2: &LatinSquare) -> Result<bool> {
    Ok(mann_quotient(l1, l2)?.is_latin())
}

/// `σ(G)`: the sum over `g` of the parity of `λ(g)`, checked against the
/// closed form (odd exactly when `|G| ≡ 2 mod 4`).
pub fn sigma(g: &FiniteGroup) -> Result<Parity> {
    let s = g.sigma();
    if s != sigma_closed_form(g.order()) {
        return Err(Error::Internal("σ(G) differs from its closed form".into()));
    }
    Ok(s)
}

pub fn sigma_closed_form(n: usize) -> Parity {
    Parity::from_bit((n % 4 == 2) as u64)
}

/// Parity type of `L_h` predicted from `|G| mod 4` and the parity of `h`.
pub fn fhw_expected(n: usize, h: Parity) -> FhwType {
    use Parity::{Even, Odd};
    match n % 4 {
        0 => FhwType::new(Even, Even, Even),
        1 => FhwType::new(Even, h, h),
        2 => FhwType::new(Odd, Odd, Odd),
        _ => FhwType::new(Even, h, h + Odd),
    }
}

pub fn fhw_theorem_check(g: &FiniteGroup, h: &Perm) -> Result<bool> {
    let sq = l_h_square(g, h)?;
    Ok(sq.parities() == fhw_expected(g.order(), h.parity()))
}

/// Kotlar type of `L_h` predicted from the Sylow condition: `(0,0)` when
/// complete mappings exist, `(n/2, n/2)` otherwise.
pub fn kotlar_expected(g: &FiniteGroup) -> KotlarType {
    if g.hall_paige_condition() {
        KotlarType { k: 0, m: 0 }
    } else {
        KotlarType {
            k: g.order() / 2,
            m: g.order() / 2,
        }
    }
}

/// One CSV record per analysed square.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatinRecord {
    pub group: String,
    pub h_parity: Parity,
    pub pi_r: u8,
    pub pi_c: u8,
    pub pi_s: u8,
    pub k: usize,
    pub m: usize,
}

impl LatinRecord {
    pub fn new(g: &FiniteGroup, h: &Perm) -> Result<LatinRecord> {
        let sq = l_h_square(g, h)?;
        let (pi_r, pi_c, pi_s) = sq.parities().bits();
        let kt = sq.kotlar_type();
        Ok(LatinRecord {
            group: g.name().to_string(),
            h_parity: h.parity(),
            pi_r,
            pi_c,
            pi_s,
            k: kt.k,
            m: kt.m,
        })
    }

    pub const CSV_HEADER: &'static str = "group,h_parity,pi_r,pi_c,pi_s,k,m";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.group, self.h_parity, self.pi_r, self.pi_c, self.pi_s, self.k, self.m
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{mk_cyclic, mk_elementary_abelian};
    use crate::mapping::associated_orthomorphism;

    #[test]
    fn order_three() {
        let g = mk_cyclic(3).unwrap();
        let a = cayley_square(&g);
        assert_eq!(a.parities().bits(), (0, 0, 1));
        let f = Perm::identity(3);
        let ft = associated_orthomorphism(&g, &f).unwrap();
        let b = l_h_square(&g, &ft).unwrap();
        let c = l_h_square(&g, &f).unwrap();
        assert_eq!(b.parities().bits(), (0, 1, 0));
        assert_eq!(c.parities().bits(), (0, 0, 1));
        assert!(is_orthogonal(&a, &b).unwrap());
        assert!(!is_orthogonal(&a, &a).unwrap());
        assert_eq!(mann_product(&a, &c).unwrap().cells, b.cells);
    }

    #[test]
    fn cayley_lines() {
        let g = mk_elementary_abelian(2, 2).unwrap();
        let a = cayley_square(&g);
        assert_eq!(a.symbol_perm(0).unwrap(), g.inversion_perm());
        assert_eq!(a.col_perm(3).unwrap(), g.regular_rep(3, Side::Right));
        let h = Perm::from_images(vec![2, 0, 3, 1]).unwrap();
        assert!(lines_match_prediction(&g, &h).unwrap());
    }

    #[test]
    fn kotlar_and_sigma() {
        let c6 = mk_cyclic(6).unwrap();
        let h = Perm::cycle(6, &[0, 3, 1]).unwrap();
        assert_eq!(l_h_square(&c6, &h).unwrap().kotlar_type(), KotlarType { k: 3, m: 3 });
        assert_eq!(sigma(&c6).unwrap(), Parity::Odd);
        assert_eq!(sigma(&mk_cyclic(4).unwrap()).unwrap(), Parity::Even);
        assert!(fhw_theorem_check(&c6, &h).unwrap());
    }

    #[test]
    fn nonabelian_cayley_mate() {
        let q8 = crate::selector::resolve_group("q8").unwrap();
        let a = cayley_square(&q8);
        let f = crate::search::enumerate_cms(&q8, &crate::search::Predicate::any(), Some(1), false)
            .unwrap()
            .found
            .remove(0);
        let b = l_h_square(&q8, &associated_orthomorphism(&q8, &f).unwrap()).unwrap();
        let c = l_h_square(&q8, &f).unwrap();
        assert_eq!(mann_quotient(&a, &b).unwrap().cells, c.cells);
        assert!(is_right_mann_multiple(&a, &b).unwrap());
        assert!(!is_orthogonal(&a, &b).unwrap());
        // The mate built from the transversals x ↦ f(x)⁻¹ is orthogonal.
        let h = Perm::from_images((0..8).map(|x| q8.inv(f.apply(x))).collect()).unwrap();
        assert!(is_orthogonal(&a, &l_h_square(&q8, &h).unwrap()).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let a = cayley_square(&mk_cyclic(5).unwrap());
        let back = LatinSquare::from_text(&a.to_text()).unwrap();
        assert_eq!(back.cells(), a.cells());
        assert!(LatinSquare::from_text("2\n0 1\n0 1\n").is_err());
    }
}
