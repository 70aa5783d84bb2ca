//! Published solution tables, embedded as data.
//!
//! `CUBE_TABLE` lists solutions with 3 | n, `QUARTIC_TABLE` those with 4 | n.
//! Rows keep their printed order (left column before right, top to bottom).

use serde::Serialize;

use crate::solution::SolutionTuple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GoldenTable {
    Cube,
    Quartic,
}

impl GoldenTable {
    pub fn name(self) -> &'static str {
        match self {
            GoldenTable::Cube => "3|n",
            GoldenTable::Quartic => "4|n",
        }
    }
}

/// (x, y, a, b, c, m, n) as printed.
pub type RawRow = (u64, u64, u32, u32, u32, u32, u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GoldenRow {
    pub table: GoldenTable,
    /// 1-based position within its table.
    pub index: usize,
    pub row: RawRow,
    /// The tuple that actually satisfies the equation when the printed row does not.
    pub correction: Option<RawRow>,
}

impl GoldenRow {
    pub fn is_erratum(&self) -> bool {
        self.correction.is_some()
    }

    /// The row as a verified tuple: the correction if there is one, else the printed row.
    pub fn corrected(&self) -> SolutionTuple {
        let (x, y, a, b, c, m, n) = self.correction.unwrap_or(self.row);
        SolutionTuple::from_u64(x, y, a, b, c, m, n).expect("golden rows are verified by tests")
    }
}

const fn row(table: GoldenTable, index: usize, row: RawRow) -> GoldenRow {
    GoldenRow { table, index, row, correction: None }
}

use GoldenTable::{Cube, Quartic};

pub const CUBE_TABLE: [GoldenRow; 19] = [
    row(Cube, 1, (70, 17, 0, 1, 0, 0, 3)),
    row(Cube, 2, (716, 81, 1, 1, 2, 0, 3)),
    row(Cube, 3, (716, 9, 1, 1, 2, 0, 6)),
    row(Cube, 4, (716, 3, 1, 1, 2, 0, 12)),
    row(Cube, 5, (94, 21, 2, 0, 1, 0, 3)),
    row(Cube, 6, (142, 29, 2, 2, 0, 0, 3)),
    row(Cube, 7, (2034, 161, 3, 0, 2, 0, 3)),
    row(Cube, 8, (9, 5, 0, 2, 0, 1, 3)),
    row(Cube, 9, (7, 3, 1, 0, 0, 1, 3)),
    row(Cube, 10, (99, 17, 2, 0, 0, 1, 3)),
    row(Cube, 11, (63, 13, 2, 0, 1, 1, 3)),
    row(Cube, 12, (19, 7, 2, 1, 0, 1, 3)),
    // x and y transposed
    GoldenRow {
        table: Cube,
        index: 13,
        row: (33, 7, 2, 2, 1, 1, 3),
        correction: Some((7, 33, 2, 2, 1, 1, 3)),
    },
    row(Cube, 14, (118699, 1917, 2, 2, 1, 1, 3)),
    row(Cube, 15, (79137, 1463, 2, 3, 0, 1, 3)),
    row(Cube, 16, (253, 73, 2, 4, 0, 1, 3)),
    row(Cube, 17, (188000497, 260473, 8, 4, 0, 1, 3)),
    row(Cube, 18, (267689, 3297, 2, 2, 3, 1, 3)),
    row(Cube, 19, (336049, 4317, 10, 0, 3, 1, 3)),
];

pub const QUARTIC_TABLE: [GoldenRow; 9] = [
    row(Quartic, 1, (8, 3, 0, 0, 1, 0, 4)),
    row(Quartic, 2, (4, 3, 1, 1, 0, 0, 4)),
    row(Quartic, 3, (26556, 163, 5, 1, 1, 0, 4)),
    row(Quartic, 4, (36, 7, 1, 1, 1, 0, 4)),
    row(Quartic, 5, (716, 27, 1, 1, 2, 0, 4)),
    row(Quartic, 6, (716, 3, 1, 1, 2, 0, 12)),
    row(Quartic, 7, (1, 1, 0, 0, 0, 1, 4)),
    row(Quartic, 8, (239, 13, 0, 0, 0, 1, 4)),
    row(Quartic, 9, (31, 5, 0, 0, 2, 1, 4)),
];

pub fn golden_rows() -> impl Iterator<Item = &'static GoldenRow> {
    CUBE_TABLE.iter().chain(QUARTIC_TABLE.iter())
}

/// Every tuple the tables assert, with errata corrected, sorted and deduplicated.
pub fn corrected_golden_set() -> Vec<SolutionTuple> {
    let mut out: Vec<_> = golden_rows().map(GoldenRow::corrected).collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::check_tuple;
    use num_bigint::BigUint;

    fn raw_ok(r: RawRow) -> bool {
        let (x, y, a, b, c, m, n) = r;
        check_tuple(&BigUint::from(x), &BigUint::from(y), a, b, c, m, n).is_ok()
    }

    #[test]
    fn row_counts() {
        assert_eq!(golden_rows().count(), 28);
        assert_eq!(golden_rows().filter(|r| r.is_erratum()).count(), 1);
        assert_eq!(corrected_golden_set().len(), 27);
    }

    #[test]
    fn printed_rows_hold_except_the_erratum() {
        for r in golden_rows() {
            assert_eq!(raw_ok(r.row), !r.is_erratum(), "{:?}", r.row);
            if let Some(c) = r.correction {
                assert!(raw_ok(c));
            }
        }
    }

    #[test]
    fn shared_row_appears_once() {
        let set = corrected_golden_set();
        let twelve: Vec<_> = set.iter().filter(|t| t.n == 12).collect();
        assert_eq!(twelve.len(), 1);
    }
}
