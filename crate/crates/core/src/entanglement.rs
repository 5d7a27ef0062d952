//! Peres-Horodecki checks for bipartite states.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{min_eigenvalue, partial_transpose, Subsystem, DEFAULT_TOL};
use crate::states::{BellDiagonalParams, DensityMatrix};

/// Default threshold on the smallest partial-transpose eigenvalue.
pub const PPT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PptReport {
    pub min_eig_pt: f64,
    pub is_ppt: bool,
    pub side: Subsystem,
    /// `|min_eig_pt| <= tol`: PPT, but only just.
    pub boundary: bool,
}

pub fn is_ppt(rho: &DensityMatrix, tol: f64) -> Result<PptReport> {
    is_ppt_on(rho, Subsystem::B, tol)
}

/// PPT test transposing the given factor. Both choices give the same verdict.
pub fn is_ppt_on(rho: &DensityMatrix, side: Subsystem, tol: f64) -> Result<PptReport> {
    let dims = rho.bipartite_dims()?;
    let pt = partial_transpose(rho.matrix(), dims, side)?;
    let min_eig_pt = min_eigenvalue(&pt, DEFAULT_TOL)?;
    Ok(PptReport { min_eig_pt, is_ppt: min_eig_pt >= -tol, side, boundary: min_eig_pt.abs() <= tol })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Separable,
    Entangled,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Separable => "separable",
            Verdict::Entangled => "entangled",
            Verdict::Undecided => "undecided",
        })
    }
}

/// NPT states are entangled. PPT is sufficient for separability only up to
/// total dimension 6 (2⊗2 and 2⊗3); beyond that a PPT state is undecided.
pub fn separable_verdict(rho: &DensityMatrix, tol: f64) -> Result<Verdict> {
    let (da, db) = rho.bipartite_dims()?;
    let report = is_ppt(rho, tol)?;
    Ok(match (report.is_ppt, da * db <= 6) {
        (false, _) => Verdict::Entangled,
        (true, true) => Verdict::Separable,
        (true, false) => Verdict::Undecided,
    })
}

/// `|t1| + |t2| + |t3| <= 1`: the separable octahedron inside the tetrahedron.
pub fn bell_octahedron_member(t: &BellDiagonalParams, tol: f64) -> bool {
    t.l1_norm() <= 1.0 + tol
}
