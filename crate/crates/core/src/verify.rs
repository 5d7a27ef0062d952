//! End-to-end invariant suite: every closed form against its brute-force
//! oracle, the structural properties of the channel, the coherence bounds,
//! the bipartite results and the Bell-diagonal geometry.
//!
//! Each check reports the largest residual it saw next to its tolerance.
//! Counting checks (disagreements, failed verdicts) use tolerance zero.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::coherence::{
    l1_coherence, l1_lower_bound, rel_ent_bound_from_p, rel_ent_coherence, rel_ent_lower_bound,
};
use crate::entanglement::{is_ppt, separable_verdict, Verdict};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hs_inner, ComplexMatrix, Subsystem, DEFAULT_TOL};
use crate::par::{map_slice, Exec};
use crate::random::{
    ginibre, random_bloch, random_density, random_density_dims, random_hermitian, random_nonnegative_real_density,
    random_permutation, stream_rng, SeededRng,
};
use crate::states::{bloch_of_operator, qubit_from_bloch, DensityMatrix, Permutation};
use crate::sweep::{sweep_bell, sweep_qubit};
use crate::twirl::{
    conjugate_by_permutation, entanglement_breaking_certificate,
    reconstruct_output_state, twirl_bruteforce_with, twirl_closed_form, twirl_one_sided,
    twirl_one_sided_bruteforce, twirl_params, twirl_two_sided, twirl_two_sided_bruteforce, BipartiteTwirlCoefficients,
    TwirlSummary, MAX_TWIRL_DIM,
};

pub const ORACLE_TOL: f64 = 1e-10;
pub const TIGHT_TOL: f64 = 1e-12;
pub const ENTROPY_TOL: f64 = 1e-9;

const QUBIT_SAMPLES: usize = 1000;
const BOUND_SAMPLES: usize = 1000;
const BIPARTITE_SAMPLES: usize = 50;
const ERASURE_SAMPLES: usize = 500;
const SWEEP_STEPS: usize = 200;
const BELL_GRID: usize = 21;

/// Deliberate implementation errors used to check that the suite notices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Off-diagonal entries divided by `d²` instead of `d(d-1)`.
    WrongDenominator,
    /// `c1` and `c2` exchanged in the two-sided expansion.
    SwappedCoefficients,
}

impl FromStr for Fault {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wrong-denominator" => Ok(Fault::WrongDenominator),
            "swapped-coefficients" => Ok(Fault::SwappedCoefficients),
            other => Err(Error::ParamOutOfRange(format!("unknown fault `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyConfig {
    /// Largest dimension for the single-system brute-force checks.
    pub dmax: usize,
    /// Random matrices per dimension for the single-system checks.
    pub samples: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { dmax: 6, samples: 100, seed: crate::random::DEFAULT_SEED, fault: None, exec: Exec::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub max_residual: f64,
    pub tol: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: &str, max_residual: f64, tol: f64) -> Self {
        // NaN residuals fail
        let passed = max_residual <= tol;
        Self { name: name.to_string(), max_residual, tol, passed }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {:<40} residual {:.3e} (tol {:.0e})", self.name, self.max_residual, self.tol)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    // fold with a NaN-propagating max so a NaN residual cannot hide
    values.into_iter().fold(0.0, |acc: f64, v| if v.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(v) })
}

fn count(flags: impl IntoIterator<Item = bool>) -> f64 {
    flags.into_iter().filter(|&bad| bad).count() as f64
}

struct Suite {
    cfg: VerifyConfig,
    checks: Vec<CheckResult>,
}

impl Suite {
    fn push(&mut self, name: &str, residual: f64, tol: f64) {
        self.checks.push(CheckResult::new(name, residual, tol));
    }

    fn rng(&self, check: u64) -> SeededRng {
        stream_rng(self.cfg.seed, check)
    }

    fn exec(&self) -> Exec {
        self.cfg.exec
    }

    /// The closed form under test, with the configured fault applied.
    fn closed(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let out = twirl_closed_form(x).expect("square input");
        match self.cfg.fault {
            Some(Fault::WrongDenominator) if x.rows() >= 2 => {
                let d = x.rows() as f64;
                let k = (d - 1.0) / d;
                ComplexMatrix::from_fn(x.rows(), x.rows(), |i, j| if i == j { out[(i, j)] } else { out[(i, j)] * k })
            }
            _ => out,
        }
    }

    fn two_sided(&self, x: &ComplexMatrix, dims: (usize, usize)) -> (ComplexMatrix, BipartiteTwirlCoefficients) {
        let (out, c) = twirl_two_sided(x, dims).expect("valid dims");
        match self.cfg.fault {
            Some(Fault::SwappedCoefficients) => {
                let swapped = BipartiteTwirlCoefficients { c1: c.c2, c2: c.c1, ..c };
                (expand_two_sided(&swapped, dims), swapped)
            }
            _ => (out, c),
        }
    }

    /// Random density and Hermitian inputs for `d = 1..=dmax`.
    fn single_system_inputs(&self) -> Vec<ComplexMatrix> {
        let mut rng = self.rng(1);
        let mut out = Vec::new();
        for d in 1..=self.cfg.dmax {
            for _ in 0..self.cfg.samples {
                out.push(random_density(&mut rng, d).into_matrix());
                out.push(random_hermitian(&mut rng, d));
            }
        }
        out
    }
}

fn expand_two_sided(c: &BipartiteTwirlCoefficients, (da, db): (usize, usize)) -> ComplexMatrix {
    use crate::linalg::kron;
    use crate::states::off_diagonal_ones;
    let (ia, ib) = (ComplexMatrix::identity(da), ComplexMatrix::identity(db));
    let (fa, fb) = (off_diagonal_ones(da), off_diagonal_ones(db));
    let terms = [
        kron(&ia, &ib).scale(c.c0),
        kron(&ia, &fb).scale(c.c1),
        kron(&fa, &ib).scale(c.c2),
        kron(&fa, &fb).scale(c.c3),
    ];
    terms.iter().skip(1).fold(terms[0].clone(), |acc, t| &acc + t)
}

fn eigen_residual(m: &ComplexMatrix, expected: &mut [f64]) -> f64 {
    expected.sort_by(f64::total_cmp);
    match hermitian_eigen(m, DEFAULT_TOL) {
        Ok(eig) => max_of(eig.eigenvalues.iter().zip(expected.iter()).map(|(a, b)| (a - b).abs())),
        Err(_) => f64::NAN,
    }
}

/// Runs the suite. Bad configuration (including `dmax` beyond the brute-force
/// guard) is an error; numerical disagreements are reported as failed checks.
pub fn run_verify(cfg: VerifyConfig) -> Result<VerifyReport> {
    if cfg.dmax == 0 {
        return Err(Error::ParamOutOfRange("dmax must be at least 1".into()));
    }
    if cfg.dmax > MAX_TWIRL_DIM {
        return Err(Error::DimensionTooLarge { d: cfg.dmax, limit: MAX_TWIRL_DIM });
    }
    if cfg.samples == 0 {
        return Err(Error::SampleCountZero);
    }
    let mut suite = Suite { cfg, checks: Vec::new() };
    oracle_equivalence(&mut suite);
    channel_properties(&mut suite);
    qubit_image(&mut suite);
    output_state_structure(&mut suite);
    coherence_bounds(&mut suite)?;
    qubit_sweep(&mut suite)?;
    bipartite_closed_forms(&mut suite);
    entanglement_erasure(&mut suite)?;
    entanglement_breaking(&mut suite);
    bell_geometry(&mut suite)?;
    let passed = suite.checks.iter().all(|c| c.passed);
    Ok(VerifyReport { config: suite.cfg, checks: suite.checks, passed })
}

fn oracle_equivalence(s: &mut Suite) {
    let inputs = s.single_system_inputs();
    let exec = s.exec();
    let residuals = map_slice(exec, &inputs, |x| {
        let brute = twirl_bruteforce_with(x, Exec::Serial).expect("guarded dimension");
        brute.max_abs_diff(&s.closed(x))
    });
    let r = max_of(residuals);
    s.push("oracle/closed-form-vs-bruteforce", r, ORACLE_TOL);
    // at d = 1 the only permutation is trivial
    let mut rng = s.rng(2);
    let x = ginibre(&mut rng, 1, 1);
    s.push("oracle/d1-identity", s.closed(&x).max_abs_diff(&x), 0.0);
}

fn channel_properties(s: &mut Suite) {
    let inputs = s.single_system_inputs();
    let mut rng = s.rng(3);
    let extra: Vec<(ComplexMatrix, Permutation)> = inputs
        .iter()
        .map(|x| (random_hermitian(&mut rng, x.rows()), random_permutation(&mut rng, x.rows())))
        .collect();
    let pairs: Vec<_> = inputs.iter().zip(&extra).collect();
    let rows = map_slice(s.exec(), &pairs, |(x, (y, tau))| {
        let dx = s.closed(x);
        let idem = s.closed(&dx).max_abs_diff(&dx);
        let id = ComplexMatrix::identity(x.rows());
        let unital = s.closed(&id).max_abs_diff(&id);
        let lhs = hs_inner(&dx, y).expect("same shape");
        let rhs = hs_inner(x, &s.closed(y)).expect("same shape");
        let adjoint = (lhs - rhs).norm();
        let transpose = s.closed(&x.transpose()).max_abs_diff(&dx.transpose());
        let outer = conjugate_by_permutation(&dx, tau).expect("degree matches").max_abs_diff(&dx);
        let inner = s.closed(&conjugate_by_permutation(x, tau).expect("degree matches")).max_abs_diff(&dx);
        let trace = (dx.trace().expect("square") - x.trace().expect("square")).norm();
        [idem, unital, adjoint, transpose, outer.max(inner), trace]
    });
    let names = [
        "properties/idempotence",
        "properties/unitality",
        "properties/self-adjointness",
        "properties/transpose-covariance",
        "properties/permutation-invariance",
        "properties/trace-preservation",
    ];
    for (k, name) in names.iter().enumerate() {
        s.push(name, max_of(rows.iter().map(|r| r[k])), ORACLE_TOL);
    }
}

fn qubit_image(s: &mut Suite) {
    let mut rng = s.rng(4);
    let points: Vec<_> = (0..QUBIT_SAMPLES).map(|_| random_bloch(&mut rng)).collect();
    let residuals = map_slice(s.exec(), &points, |r| {
        let rho = qubit_from_bloch(*r).expect("inside the ball");
        let out = s.closed(rho.matrix());
        match bloch_of_operator(&out) {
            Ok(b) => max_of([(b.r1 - r.r1).abs(), b.r2.abs(), b.r3.abs()]),
            Err(_) => f64::NAN,
        }
    });
    s.push("qubit/image-on-r1-axis", max_of(residuals), TIGHT_TOL);
}

fn output_state_structure(s: &mut Suite) {
    let mut rng = s.rng(5);
    let mut states = Vec::new();
    for d in 2..=s.cfg.dmax {
        for _ in 0..s.cfg.samples {
            states.push(random_density(&mut rng, d));
        }
    }
    let rows = map_slice(s.exec(), &states, |rho| {
        let d = rho.dim();
        let params = match twirl_params(rho) {
            Ok(p) => p,
            Err(_) => return [f64::NAN; 3],
        };
        let brute = twirl_bruteforce_with(rho.matrix(), Exec::Serial).expect("guarded dimension");
        let (recon, eig) = match reconstruct_output_state(&params) {
            Ok(star) => {
                let df = d as f64;
                let mut expected = vec![(1.0 - params.p) / df; d];
                expected[0] = params.p + (1.0 - params.p) / df;
                (star.matrix().max_abs_diff(&brute), eigen_residual(star.matrix(), &mut expected))
            }
            Err(_) => (f64::NAN, f64::NAN),
        };
        let (lo, hi) = TwirlSummary::a_range(d);
        let range = (lo - params.a).max(params.a - hi).max(0.0);
        [recon, eig, range]
    });
    s.push("output-state/reconstruction", max_of(rows.iter().map(|r| r[0])), TIGHT_TOL);
    s.push("output-state/eigenvalues", max_of(rows.iter().map(|r| r[1])), ORACLE_TOL);
    s.push("output-state/a-range", max_of(rows.iter().map(|r| r[2])), 0.0);
}

fn coherence_bounds(s: &mut Suite) -> Result<()> {
    let mut rng = s.rng(6);
    let mut states = Vec::new();
    let mut real = Vec::new();
    for d in 2..=5 {
        for _ in 0..BOUND_SAMPLES {
            states.push(random_density(&mut rng, d));
        }
        for _ in 0..s.cfg.samples {
            real.push(random_nonnegative_real_density(&mut rng, d));
        }
    }
    let bound_of = |rho: &DensityMatrix| -> Result<[f64; 4]> {
        let params = twirl_params(rho)?;
        let df = rho.dim() as f64;
        let l1_bound = l1_lower_bound(rho)?;
        let l1_gap = (l1_bound - l1_coherence(rho)?).max(0.0);
        let re_bound = rel_ent_lower_bound(rho)?;
        let re_gap = (re_bound - rel_ent_coherence(rho)?).max(0.0);
        let exact = (l1_bound - df * (df - 1.0) * params.a.abs()).abs();
        let star = reconstruct_output_state(&params)?;
        let route = (rel_ent_bound_from_p(params.d, params.p)? - rel_ent_coherence(&star)?).abs();
        Ok([l1_gap, re_gap, exact, route])
    };
    let rows: Result<Vec<_>> = map_slice(s.exec(), &states, bound_of).into_iter().collect();
    let rows = rows?;
    s.push("bounds/l1-gap-nonnegative", max_of(rows.iter().map(|r| r[0])), ORACLE_TOL);
    s.push("bounds/relent-gap-nonnegative", max_of(rows.iter().map(|r| r[1])), ORACLE_TOL);
    s.push("bounds/l1-bound-equals-d(d-1)|a|", max_of(rows.iter().map(|r| r[2])), 0.0);
    s.push("bounds/relent-formula-vs-eigenvalues", max_of(rows.iter().map(|r| r[3])), ENTROPY_TOL);
    let tight: Result<Vec<f64>> = map_slice(s.exec(), &real, |rho| {
        Ok((l1_coherence(rho)? - l1_lower_bound(rho)?).abs())
    })
    .into_iter()
    .collect();
    s.push("bounds/l1-tight-for-nonnegative-real", max_of(tight?), ORACLE_TOL);
    Ok(())
}

fn qubit_sweep(s: &mut Suite) -> Result<()> {
    let rows = sweep_qubit(0.1, 0.1, SWEEP_STEPS, s.exec())?;
    let pointwise = max_of(rows.iter().map(|r| {
        let rho_formula = (r.r1 * r.r1 + 0.01).sqrt();
        (r.c_l1_rho - rho_formula).abs().max((r.c_l1_star - r.r1).abs())
    }));
    s.push("qubit-sweep/l1-curves", pointwise, ORACLE_TOL);
    let drops = max_of(rows.windows(2).map(|w| {
        (w[0].c_r_rho - w[1].c_r_rho).max(w[0].c_r_star - w[1].c_r_star).max(0.0)
    }));
    s.push("qubit-sweep/relent-monotone", drops, TIGHT_TOL);
    let order = max_of(rows.iter().map(|r| (r.c_r_star - r.c_r_rho).max(0.0)));
    s.push("qubit-sweep/relent-ordering", order, ORACLE_TOL);
    Ok(())
}

fn bipartite_closed_forms(s: &mut Suite) {
    let mut rng = s.rng(7);
    let mut inputs = Vec::new();
    for dims in [(2, 2), (2, 3), (3, 3), (3, 4)] {
        for _ in 0..BIPARTITE_SAMPLES {
            inputs.push((dims, random_density_dims(&mut rng, &[dims.0, dims.1]).into_matrix()));
        }
    }
    let rows = map_slice(s.exec(), &inputs, |(dims, x)| {
        let mut one = 0.0f64;
        for side in [Subsystem::A, Subsystem::B] {
            let closed = twirl_one_sided(x, *dims, side).expect("valid dims");
            let brute = twirl_one_sided_bruteforce(x, *dims, side, Exec::Serial).expect("guarded");
            one = one.max(closed.max_abs_diff(&brute));
        }
        let (out, c) = s.two_sided(x, *dims);
        let brute = twirl_two_sided_bruteforce(x, *dims, Exec::Serial).expect("guarded");
        let two = out.max_abs_diff(&brute);
        let spectrum = if *dims == (2, 2) {
            let (c0, c1, c2, c3) = (c.c0.re, c.c1.re, c.c2.re, c.c3.re);
            let mut expected = [c0 + c1 + c2 + c3, c0 + c1 - c2 - c3, c0 - c1 + c2 - c3, c0 - c1 - c2 + c3];
            eigen_residual(&out, &mut expected)
        } else {
            0.0
        };
        let c0 = (c.c0 - Complex64::new(1.0 / (dims.0 * dims.1) as f64, 0.0)).norm();
        [one, two, spectrum, c0]
    });
    s.push("bipartite/one-sided-vs-bruteforce", max_of(rows.iter().map(|r| r[0])), ORACLE_TOL);
    s.push("bipartite/two-sided-vs-nested-bruteforce", max_of(rows.iter().map(|r| r[1])), ORACLE_TOL);
    s.push("bipartite/two-qubit-spectrum", max_of(rows.iter().map(|r| r[2])), ORACLE_TOL);
    s.push("bipartite/c0-for-states", max_of(rows.iter().map(|r| r[3])), ORACLE_TOL);
}

fn entanglement_erasure(s: &mut Suite) -> Result<()> {
    let mut rng = s.rng(8);
    let states: Vec<_> = (0..ERASURE_SAMPLES).map(|_| random_density_dims(&mut rng, &[2, 2])).collect();
    let rows: Result<Vec<[f64; 2]>> = map_slice(s.exec(), &states, |rho| {
        let mut worst = 0.0f64;
        let mut not_separable = 0.0;
        let (two, _) = s.two_sided(rho.matrix(), (2, 2));
        let outputs = [
            twirl_one_sided(rho.matrix(), (2, 2), Subsystem::A)?,
            twirl_one_sided(rho.matrix(), (2, 2), Subsystem::B)?,
            two,
        ];
        for out in outputs {
            let state = DensityMatrix::from_trusted(out, vec![2, 2]);
            worst = worst.max(-is_ppt(&state, ORACLE_TOL)?.min_eig_pt);
            if separable_verdict(&state, ORACLE_TOL)? != Verdict::Separable {
                not_separable += 1.0;
            }
        }
        Ok([worst.max(0.0), not_separable])
    })
    .into_iter()
    .collect();
    let rows = rows?;
    s.push("erasure/min-pt-eigenvalue", max_of(rows.iter().map(|r| r[0])), ORACLE_TOL);
    s.push("erasure/non-separable-verdicts", rows.iter().map(|r| r[1]).sum(), 0.0);
    Ok(())
}

fn entanglement_breaking(s: &mut Suite) {
    let dims: Vec<usize> = (2..=6).collect();
    let residuals = map_slice(s.exec(), &dims, |&d| match entanglement_breaking_certificate(d, f64::INFINITY) {
        Ok(cert) => cert.residual,
        Err(_) => f64::NAN,
    });
    s.push("choi/separable-decomposition", max_of(residuals), TIGHT_TOL);
    let ppt = map_slice(s.exec(), &dims, |&d| match crate::twirl::choi_matrix(d) {
        Ok(j) => is_ppt(&j, ORACLE_TOL).map(|r| (-r.min_eig_pt).max(0.0)).unwrap_or(f64::NAN),
        Err(_) => f64::NAN,
    });
    s.push("choi/ppt", max_of(ppt), ORACLE_TOL);
}

fn bell_geometry(s: &mut Suite) -> Result<()> {
    let rows = sweep_bell(BELL_GRID, s.exec())?;
    let disagreements = count(rows.iter().map(|r| r.in_octahedron != r.ppt_before));
    s.push("bell/octahedron-iff-ppt", disagreements, 0.0);
    let image = max_of(rows.iter().map(|r| r.image_residual));
    s.push("bell/one-sided-image", image, TIGHT_TOL);
    let erased = count(rows.iter().map(|r| !r.ppt_after_one_sided));
    s.push("bell/one-sided-image-ppt", erased, 0.0);
    Ok(())
}
