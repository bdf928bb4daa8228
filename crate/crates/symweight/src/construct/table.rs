//! Reference parameter rows for the comparison codes and how each is built.

use super::{
    equitable_partition, parse_partition, partition_code, rs_code, rs_coset, rs_subcode_expurgate,
    ConstructionTarget, ReedSolomon,
};
use crate::code::Code;
use crate::error::Result;
use crate::gf::FieldSpec;

/// How a row is constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Equitable symbol weight code.
    Esw,
    /// Minimum symbol weight code with the given constant partition.
    Msw(&'static str),
    /// Low-weight coset of RS(n, k).
    Rsc { k: usize },
    /// Low-weight subcode of RS(n, k).
    Rss { k: usize },
}

/// Target parameters `(n, d, swt)_q`, size and narrowband capability.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub label: &'static str,
    pub family: Family,
    pub n: usize,
    pub d: usize,
    pub swt: usize,
    pub q: usize,
    pub size: usize,
    pub capability: usize,
}

const fn row(
    label: &'static str,
    family: Family,
    (n, d, swt, q): (usize, usize, usize, usize),
    size: usize,
    capability: usize,
) -> TableRow {
    TableRow {
        label,
        family,
        n,
        d,
        swt,
        q,
        size,
        capability,
    }
}

/// All reference rows.
pub const ROWS: [TableRow; 13] = [
    row("ESW(25,24,2)_17", Family::Esw, (25, 24, 2, 17), 51, 16),
    row(
        "MSW(25,24,2)_17",
        Family::Msw("2^12,1,0^4"),
        (25, 24, 2, 17),
        51,
        12,
    ),
    row("ESW(11,6,2)_10", Family::Esw, (11, 6, 2, 10), 1000, 5),
    row(
        "MSW(11,6,2)_10",
        Family::Msw("2^3,1^5,0^2"),
        (11, 6, 2, 10),
        1000,
        3,
    ),
    row("ESW(7,5,1)_8", Family::Esw, (7, 5, 1, 8), 336, 5),
    row("RSC(7,6,2)_8", Family::Rsc { k: 2 }, (7, 6, 2, 8), 64, 3),
    row("RSS(7,5,2)_8", Family::Rss { k: 3 }, (7, 5, 2, 8), 336, 3),
    row("ESW(7,2,1)_8", Family::Esw, (7, 2, 1, 8), 20160, 2),
    row("RSC(7,4,4)_8", Family::Rsc { k: 4 }, (7, 4, 4, 8), 4096, 1),
    row("RSS(7,3,2)_8", Family::Rss { k: 5 }, (7, 3, 2, 8), 20160, 2),
    row("ESW(15,11,1)_16", Family::Esw, (15, 11, 1, 16), 21120, 11),
    row(
        "RSC(15,13,3)_16",
        Family::Rsc { k: 3 },
        (15, 13, 3, 16),
        4096,
        5,
    ),
    row(
        "RSS(15,12,3)_16",
        Family::Rss { k: 4 },
        (15, 12, 3, 16),
        21120,
        4,
    ),
];

/// Looks up a row by label, ignoring case.
pub fn find_row(label: &str) -> Option<&'static TableRow> {
    ROWS.iter().find(|r| r.label.eq_ignore_ascii_case(label))
}

impl TableRow {
    pub fn target(&self, seed: u64) -> Result<ConstructionTarget> {
        let t =
            ConstructionTarget::new(self.n, self.q, self.d, self.size, self.swt).with_seed(seed);
        Ok(match self.family {
            Family::Esw => t.with_partition(equitable_partition(self.n, self.q)),
            Family::Msw(p) => t.with_partition(parse_partition(p)?),
            Family::Rsc { .. } | Family::Rss { .. } => t,
        })
    }

    /// Builds the code and names the method used.
    pub fn build(&self, seed: u64) -> Result<(Code, &'static str)> {
        let target = self.target(seed)?;
        let (mut code, method) = match self.family {
            Family::Esw | Family::Msw(_) => partition_code(&target)?,
            Family::Rsc { k } => {
                let rs = ReedSolomon::new(FieldSpec::with_size(self.q)?, self.n, k)?;
                (rs_coset(&rs, &target)?.0, "rs-coset")
            }
            Family::Rss { k } => {
                let base = rs_code(&FieldSpec::with_size(self.q)?, self.n, k)?;
                (rs_subcode_expurgate(&base, &target)?, "rs-expurgate")
            }
        };
        code.set_id(self.label);
        Ok((code, method))
    }
}
