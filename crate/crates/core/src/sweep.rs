//! Parameter sweeps that produce the data behind the coherence and Bell
//! geometry plots, and their CSV serialisation.

use std::io::Write;

use crate::coherence::{l1_coherence, rel_ent_coherence};
use crate::entanglement::{bell_octahedron_member, is_ppt};
use crate::error::{Error, Result};
use crate::linalg::Subsystem;
use crate::par::{map_indices, map_slice, Exec};
use crate::states::{bell_diagonal_state, qubit_from_bloch, BellDiagonalParams, BlochVector, DensityMatrix};
use crate::twirl::{reconstruct_output_state, twirl_one_sided, twirl_params};

/// Tolerance for deciding whether a grid point lies in the tetrahedron.
pub const GRID_TOL: f64 = 1e-12;

/// Tolerance of the PPT flags in the Bell sweep.
pub const BELL_PPT_TOL: f64 = 1e-9;

/// `%.12g`-style formatting: 12 significant digits, trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    fmt_sig_digits(x, 12)
}

pub fn fmt_sig_digits(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitSweepRow {
    pub r1: f64,
    pub c_l1_rho: f64,
    pub c_l1_star: f64,
    pub c_r_rho: f64,
    pub c_r_star: f64,
}

impl QubitSweepRow {
    pub const HEADER: [&'static str; 5] = ["r1", "c_l1_rho", "c_l1_star", "c_r_rho", "c_r_star"];

    fn record(&self) -> Vec<String> {
        [self.r1, self.c_l1_rho, self.c_l1_star, self.c_r_rho, self.c_r_star].map(fmt_sig).to_vec()
    }
}

fn qubit_row(r1: f64, r2: f64, r3: f64) -> Result<QubitSweepRow> {
    let rho = qubit_from_bloch(BlochVector::new(r1, r2, r3))?;
    let star = reconstruct_output_state(&twirl_params(&rho)?)?;
    Ok(QubitSweepRow {
        r1,
        c_l1_rho: l1_coherence(&rho)?,
        c_l1_star: l1_coherence(&star)?,
        c_r_rho: rel_ent_coherence(&rho)?,
        c_r_star: rel_ent_coherence(&star)?,
    })
}

/// Sweeps `r1` over `[0, sqrt(1 - r2² - r3²)]` in `steps` equal steps
/// (`steps + 1` rows, both endpoints included).
pub fn sweep_qubit(r2: f64, r3: f64, steps: usize, exec: Exec) -> Result<Vec<QubitSweepRow>> {
    let rest = r2 * r2 + r3 * r3;
    if !(rest <= 1.0) {
        return Err(Error::ParamOutOfRange(format!("r2² + r3² = {rest} exceeds 1")));
    }
    if steps == 0 {
        return Err(Error::ParamOutOfRange("steps must be at least 1".into()));
    }
    let r1_max = (1.0 - rest).sqrt();
    map_indices(exec, steps + 1, |k| qubit_row(r1_max * k as f64 / steps as f64, r2, r3))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellSweepRow {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub in_octahedron: bool,
    pub ppt_before: bool,
    pub ppt_after_one_sided: bool,
    pub t1_image: f64,
    /// Max-entry distance between the one-sided image and the Bell-diagonal
    /// state with parameters `(t1, 0, 0)`. Not written to CSV.
    pub image_residual: f64,
}

impl BellSweepRow {
    pub const HEADER: [&'static str; 7] =
        ["t1", "t2", "t3", "in_octahedron", "ppt_before", "ppt_after_one_sided", "t1_image"];

    fn record(&self) -> Vec<String> {
        vec![
            fmt_sig(self.t1),
            fmt_sig(self.t2),
            fmt_sig(self.t3),
            self.in_octahedron.to_string(),
            self.ppt_before.to_string(),
            self.ppt_after_one_sided.to_string(),
            fmt_sig(self.t1_image),
        ]
    }
}

/// Points `-1 + 2k/(n-1)` per axis, kept when inside the tetrahedron.
pub fn tetrahedron_grid(n: usize) -> Result<Vec<BellDiagonalParams>> {
    if n < 2 {
        return Err(Error::ParamOutOfRange(format!("grid needs at least 2 points per axis, got {n}")));
    }
    let axis: Vec<f64> = (0..n).map(|k| -1.0 + 2.0 * k as f64 / (n - 1) as f64).collect();
    let mut out = Vec::new();
    for &t1 in &axis {
        for &t2 in &axis {
            for &t3 in &axis {
                if let Ok(t) = BellDiagonalParams::new_with_tol(t1, t2, t3, GRID_TOL) {
                    out.push(t);
                }
            }
        }
    }
    Ok(out)
}

pub fn bell_row(t: &BellDiagonalParams) -> Result<BellSweepRow> {
    let rho = bell_diagonal_state(*t);
    let image = twirl_one_sided(rho.matrix(), (2, 2), Subsystem::A)?;
    // ¼ Tr(σ₁⊗σ₁ X) recovers t1 from ¼(1 + t1 σ₁⊗σ₁)
    let t1_image = (image[(0, 3)] + image[(1, 2)] + image[(2, 1)] + image[(3, 0)]).re;
    let target = bell_diagonal_state(BellDiagonalParams::new_with_tol(t.t1, 0.0, 0.0, GRID_TOL)?);
    let image_residual = image.max_abs_diff(target.matrix());
    let image_state = DensityMatrix::validate(image, vec![2, 2], 1e-10)?;
    Ok(BellSweepRow {
        t1: t.t1,
        t2: t.t2,
        t3: t.t3,
        in_octahedron: bell_octahedron_member(t, BELL_PPT_TOL),
        ppt_before: is_ppt(&rho, BELL_PPT_TOL)?.is_ppt,
        ppt_after_one_sided: is_ppt(&image_state, BELL_PPT_TOL)?.is_ppt,
        t1_image,
        image_residual,
    })
}

pub fn sweep_bell(n: usize, exec: Exec) -> Result<Vec<BellSweepRow>> {
    let grid = tetrahedron_grid(n)?;
    map_slice(exec, &grid, bell_row).into_iter().collect()
}

fn write_records<W: Write>(out: W, header: &[&str], records: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let io_err = |e: csv::Error| Error::Parse(format!("csv output: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(io_err)?;
    for r in records {
        w.write_record(&r).map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::Parse(format!("csv output: {e}")))
}

pub fn write_qubit_csv<W: Write>(out: W, rows: &[QubitSweepRow]) -> Result<()> {
    write_records(out, &QubitSweepRow::HEADER, rows.iter().map(QubitSweepRow::record))
}

pub fn write_bell_csv<W: Write>(out: W, rows: &[BellSweepRow]) -> Result<()> {
    write_records(out, &BellSweepRow::HEADER, rows.iter().map(BellSweepRow::record))
}
