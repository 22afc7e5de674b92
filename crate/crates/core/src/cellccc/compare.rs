use serde::Serialize;

use super::{cell_hom_dims, convolve, CellSheafComplex};
use crate::error::CellError;
use crate::lbcx::{rhom_dims, ExtTable, LBComplex};
use crate::rational::{format_q, Q};

/// One Ext table computed on both sides.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GridEntry {
    pub left: String,
    pub right: String,
    pub cellular: ExtTable,
    pub coherent: ExtTable,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CccReport {
    /// `{unit, twist}²` against `{O, O(−1)}²`.
    pub grid: Vec<GridEntry>,
    /// `twist ⋆ twist` against `O(−2)`, paired with both generators.
    pub convolution: Vec<GridEntry>,
    pub pass: bool,
}

impl CccReport {
    pub fn mismatches(&self) -> Vec<&GridEntry> {
        self.grid.iter().chain(&self.convolution).filter(|e| !e.pass).collect()
    }
}

struct Object {
    name: &'static str,
    cell: CellSheafComplex,
    coh: LBComplex,
}

fn entry(a: &Object, b: &Object) -> Result<GridEntry, CellError> {
    let cellular = cell_hom_dims(&a.cell, &b.cell)?;
    let coherent = rhom_dims(&a.coh, &b.coh).map_err(|e| CellError::Other(e.to_string()))?;
    Ok(GridEntry {
        left: a.name.into(),
        right: b.name.into(),
        pass: cellular == coherent,
        cellular,
        coherent,
    })
}

/// Matches `unit ↦ O`, `twist ↦ O(−1)` and `twist ⋆ twist ↦ O(−2)` on `P¹` through Ext tables.
pub fn ccc_compare() -> Result<CccReport, CellError> {
    let unit = Object { name: "unit", cell: CellSheafComplex::unit(), coh: LBComplex::line_bundle(1, 0) };
    let twist = Object { name: "twist", cell: CellSheafComplex::twist(), coh: LBComplex::line_bundle(1, -1) };
    let tt = Object {
        name: "twist*twist",
        cell: convolve(&twist.cell, &twist.cell)?,
        coh: LBComplex::line_bundle(1, -2),
    };
    let gens = [&unit, &twist];
    let mut pairs: Vec<(&Object, &Object, bool)> = Vec::new();
    for a in gens {
        for b in gens {
            pairs.push((a, b, false));
        }
    }
    for g in gens {
        pairs.push((g, &tt, true));
        pairs.push((&tt, g, true));
    }
    let results: Vec<Result<GridEntry, CellError>> = std::thread::scope(|s| {
        let handles: Vec<_> = pairs.iter().map(|(a, b, _)| s.spawn(move || entry(a, b))).collect();
        handles.into_iter().map(|h| h.join().expect("grid worker panicked")).collect()
    });
    let mut grid = Vec::new();
    let mut convolution = Vec::new();
    for ((_, _, conv), r) in pairs.iter().zip(results) {
        if *conv { convolution.push(r?) } else { grid.push(r?) }
    }
    let pass = grid.iter().chain(&convolution).all(|e| e.pass);
    Ok(CccReport { grid, convolution, pass })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LocalSystemComparison {
    pub other: String,
    pub table: ExtTable,
    pub expected: ExtTable,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LocalSystemReport {
    pub lambda: String,
    /// `Ext(L_λ, L_λ)`; a skyscraper at a smooth point of a curve has `(1, 1)`.
    pub self_ext: ExtTable,
    pub comparisons: Vec<LocalSystemComparison>,
    pub pass: bool,
}

fn circle_table() -> ExtTable {
    ExtTable::from([(0, 1), (1, 1)])
}

/// Rank-one local systems against the Fourier picture: `Ext(L_λ, L_μ)` is `(1, 1)` for
/// `λ = μ` and vanishes otherwise.
pub fn local_system_check(lambda: &Q, others: &[Q]) -> Result<LocalSystemReport, CellError> {
    let l = CellSheafComplex::local_system(lambda)?;
    let self_ext = cell_hom_dims(&l, &l)?;
    let mut comparisons = Vec::new();
    for mu in others {
        let table = cell_hom_dims(&l, &CellSheafComplex::local_system(mu)?)?;
        let expected = if mu == lambda { circle_table() } else { ExtTable::new() };
        comparisons.push(LocalSystemComparison { other: format_q(mu), pass: table == expected, table, expected });
    }
    let pass = self_ext == circle_table() && comparisons.iter().all(|c| c.pass);
    Ok(LocalSystemReport { lambda: format_q(lambda), self_ext, comparisons, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn full_grid_matches_p1() {
        let r = ccc_compare().unwrap();
        for e in r.grid.iter().chain(&r.convolution) {
            assert!(e.pass, "{} vs {}: {:?} ≠ {:?}", e.left, e.right, e.cellular, e.coherent);
        }
        assert!(r.pass && r.mismatches().is_empty());
        let tt = r.grid.iter().find(|e| e.left == "twist" && e.right == "twist").unwrap();
        assert_eq!(tt.cellular, ExtTable::from([(0, 1)]));
        assert!(r.grid.iter().all(|e| !e.cellular.contains_key(&1)));
        // O(−2) has h¹ = 1.
        let u_tt = r.convolution.iter().find(|e| e.left == "unit").unwrap();
        assert_eq!(u_tt.coherent, ExtTable::from([(1, 1)]));
    }

    #[test]
    fn local_systems() {
        let r = local_system_check(&q(1), &[q(1)]).unwrap();
        assert!(r.pass);
        assert_eq!(r.self_ext, circle_table());
        let r = local_system_check(&q(2), &[q(3), qf(-1, 2)]).unwrap();
        assert!(r.pass && r.comparisons.iter().all(|c| c.table.is_empty()));
        let r = local_system_check(&q(5), &[q(5)]).unwrap();
        assert_eq!(r.comparisons[0].table, circle_table());
        assert!(matches!(local_system_check(&q(0), &[]), Err(CellError::ZeroMonodromy)));
    }
}
