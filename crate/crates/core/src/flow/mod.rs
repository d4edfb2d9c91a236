//! Discretized Yang-Mills-Higgs functional on a flat square-lattice torus
//! with a structure-preserving Hermitian-metric heat flow.
//!
//! Discrete model. Sites carry the (0,1)-potential a (relative to the product
//! trivialization), the (1,0) Higgs sample φ, and the Hermitian metric h.
//! First-order operators are periodic centered differences; the curvature is
//! the discrete exterior derivative of the potential plus the commutator
//! (small-field regime, no group-valued plaquettes):
//!
//!   b = (h⁻¹(∂h) − (∂h⁻¹)h)/2 − h⁻¹ a† h          (Chern (1,0) term)
//!   F = ∂a − ∂̄b + \[b, a\]
//!   c = φ φ^{*h} − φ^{*h} φ,   φ^{*h} = h⁻¹ φ† h
//!
//! The symmetrized Chern term makes the curvature exactly transpose-coherent,
//! F(−aᵗ, (hᵗ)⁻¹) = −F(a,h)ᵗ, which is what lets the real-form restriction
//! theorem hold to rounding at desk scale (see `heat::restriction_check`);
//! the curvature of record is the h-self-adjoint part of F (see `Derived`).
//!
//! A flow run mutates only the metric; the holomorphic data (a, φ) is fixed,
//! so the Higgs-bundle constraint is preserved at machine level.

pub mod gradient;
pub mod heat;

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::cmatrix::{CMat, C64};

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("lattice size must be >= 2 and spacing > 0")]
    BadGeometry,
    #[error("field length {0} does not match site count {1}")]
    FieldLength(usize, usize),
    #[error("metric not positive definite at site {site}: min eigenvalue {min_eig}")]
    PositivityLoss {
        site: usize,
        min_eig: f64,
        time: f64,
    },
    #[error(
        "step size underflow at t={time} (no energy-decreasing step above {floor}); state dump:\n{dump}"
    )]
    StepUnderflow { time: f64, floor: f64, dump: String },
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("rank {0} does not match the group tag {1}")]
    TagRankMismatch(usize, String),
}

/// N×N periodic grid with a fixed cell edge length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeGeometry {
    size: usize,
    spacing: f64,
}

impl LatticeGeometry {
    pub fn new(size: usize, spacing: f64) -> Result<Self, FlowError> {
        if size < 2 || !(spacing > 0.0) {
            return Err(FlowError::BadGeometry);
        }
        Ok(LatticeGeometry { size, spacing })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn sites(&self) -> usize {
        self.size * self.size
    }

    pub fn cell_area(&self) -> f64 {
        self.spacing * self.spacing
    }

    pub fn total_area(&self) -> f64 {
        self.cell_area() * self.sites() as f64
    }

    #[inline]
    pub fn idx(&self, x: usize, y: usize) -> usize {
        y * self.size + x
    }

    #[inline]
    fn wrap(&self, v: usize, dv: isize) -> usize {
        let n = self.size as isize;
        ((v as isize + dv).rem_euclid(n)) as usize
    }
}

/// Per-site matrix field, site-major (row-major in (x,y) with y outer).
pub type Field = Vec<CMat>;

/// Ambient complex group or real-form tag; the real forms carry the linear
/// constraints on (a, φ) and the metric locus used by `restriction_check`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupTag {
    /// GL(n,C) ambient; no constraints.
    GlC,
    /// SL(n,R) ⊂ SL(n,C): aᵗ = −a, φᵗ = φ, tr φ = 0, metric hᵗh = I.
    SlnR,
    /// Sp(2n,R) ⊂ Sp(2n,C) on W = V ⊕ V*: a = diag(A, −Aᵗ),
    /// φ = offdiag(β, γ) with β, γ symmetric, metric diag(h, (hᵗ)⁻¹).
    Sp2nR { n: usize },
}

impl GroupTag {
    pub fn label(&self) -> String {
        match self {
            GroupTag::GlC => "gl".into(),
            GroupTag::SlnR => "sl(n,R)".into(),
            GroupTag::Sp2nR { n } => format!("sp({},R)", 2 * n),
        }
    }
}

/// Lattice state: fixed holomorphic data (base_a, higgs) plus the evolving
/// Hermitian metric.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub geometry: LatticeGeometry,
    pub rank: usize,
    pub group_tag: GroupTag,
    pub base_a: Field,
    pub higgs: Field,
    pub metric: Field,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyVariant {
    Restricted,
    Full,
}

impl FlowState {
    pub fn new(
        geometry: LatticeGeometry,
        rank: usize,
        group_tag: GroupTag,
        base_a: Field,
        higgs: Field,
        metric: Field,
    ) -> Result<Self, FlowError> {
        let sites = geometry.sites();
        for f in [&base_a, &higgs, &metric] {
            if f.len() != sites {
                return Err(FlowError::FieldLength(f.len(), sites));
            }
        }
        if let GroupTag::Sp2nR { n } = group_tag {
            if rank != 2 * n {
                return Err(FlowError::TagRankMismatch(rank, group_tag.label()));
            }
        }
        Ok(FlowState {
            geometry,
            rank,
            group_tag,
            base_a,
            higgs,
            metric,
        })
    }

    /// Zero potential and Higgs field, identity metric.
    pub fn vacuum(geometry: LatticeGeometry, rank: usize) -> Self {
        let sites = geometry.sites();
        FlowState {
            geometry,
            rank,
            group_tag: GroupTag::GlC,
            base_a: vec![CMat::zeros(rank); sites],
            higgs: vec![CMat::zeros(rank); sites],
            metric: vec![CMat::eye(rank); sites],
        }
    }

    pub fn check_metric_positive(&self, time: f64) -> Result<(), FlowError> {
        for (site, h) in self.metric.iter().enumerate() {
            let min_eig = h.min_eigenvalue_hermitian();
            if !(min_eig > 0.0) {
                return Err(FlowError::PositivityLoss {
                    site,
                    min_eig,
                    time,
                });
            }
        }
        Ok(())
    }
}

fn centered(geom: &LatticeGeometry, f: &Field, dx: isize, dy: isize) -> Field {
    let n = geom.size;
    let mut out = Vec::with_capacity(f.len());
    for y in 0..n {
        for x in 0..n {
            let plus = &f[geom.idx(geom.wrap(x, dx), geom.wrap(y, dy))];
            let minus = &f[geom.idx(geom.wrap(x, -dx), geom.wrap(y, -dy))];
            out.push((plus - minus).scale(C64::new(1.0 / (2.0 * geom.spacing), 0.0)));
        }
    }
    out
}

/// ∂/∂z = (∂x − i∂y)/2 by centered differences.
pub fn del(geom: &LatticeGeometry, f: &Field) -> Field {
    let fx = centered(geom, f, 1, 0);
    let fy = centered(geom, f, 0, 1);
    fx.iter()
        .zip(&fy)
        .map(|(a, b)| &a.scale(C64::new(0.5, 0.0)) + &b.scale(C64::new(0.0, -0.5)))
        .collect()
}

/// ∂/∂z̄ = (∂x + i∂y)/2 by centered differences.
pub fn delbar(geom: &LatticeGeometry, f: &Field) -> Field {
    let fx = centered(geom, f, 1, 0);
    let fy = centered(geom, f, 0, 1);
    fx.iter()
        .zip(&fy)
        .map(|(a, b)| &a.scale(C64::new(0.5, 0.0)) + &b.scale(C64::new(0.0, 0.5)))
        .collect()
}

/// Derived per-site fields of a state, recomputed on demand.
pub struct Derived {
    pub metric_inv: Field,
    /// Chern (1,0) potential b.
    pub chern_b: Field,
    /// Curvature of record: the h-self-adjoint part of ∂a − ∂̄b + \[b,a\].
    /// The raw discrete field carries an anti-self-adjoint O(spacing²)
    /// defect (the continuum curvature contracted with the Kähler form is
    /// exactly self-adjoint); keeping only the self-adjoint part restores
    /// that structure, so the metric flow can drive the moment to zero.
    pub curvature: Field,
    /// Raw discrete curvature before self-adjointization (the gradient
    /// calculus needs its h-adjoint).
    pub curvature_raw: Field,
    /// Bracket c = \[φ, φ^{*h}\] (exactly h-self-adjoint).
    pub bracket: Field,
    /// Moment field M = F + c (the zz̄-component of F_A + \[φ,φ*\]).
    pub moment: Field,
    /// ∂̄_A φ = ∂̄φ + \[a, φ\].
    pub dbar_phi: Field,
}

pub fn derived(state: &FlowState) -> Derived {
    let geom = &state.geometry;
    let metric_inv: Field = state
        .metric
        .iter()
        .map(|h| h.inverse().expect("metric positive definite"))
        .collect();
    let dh = del(geom, &state.metric);
    let dhinv = del(geom, &metric_inv);
    let mut chern_b = Vec::with_capacity(state.metric.len());
    for s in 0..state.metric.len() {
        let h = &state.metric[s];
        let hi = &metric_inv[s];
        let p = &(&(hi * &dh[s]) - &(&dhinv[s] * h)).scale(C64::new(0.5, 0.0));
        let adj_term = &(hi * &state.base_a[s].adjoint()) * h;
        chern_b.push(p - &adj_term);
    }
    let da = del(geom, &state.base_a);
    let dbb = delbar(geom, &chern_b);
    let mut curvature_raw = Vec::with_capacity(state.metric.len());
    let mut curvature = Vec::with_capacity(state.metric.len());
    for s in 0..state.metric.len() {
        let f = &(&da[s] - &dbb[s]) + &chern_b[s].commutator(&state.base_a[s]);
        let f_star = &(&metric_inv[s] * &f.adjoint()) * &state.metric[s];
        curvature.push((&f + &f_star).scale(C64::new(0.5, 0.0)));
        curvature_raw.push(f);
    }
    let mut bracket = Vec::with_capacity(state.metric.len());
    let mut moment = Vec::with_capacity(state.metric.len());
    for s in 0..state.metric.len() {
        let phi = &state.higgs[s];
        let phi_star = &(&metric_inv[s] * &phi.adjoint()) * &state.metric[s];
        let c = &(phi * &phi_star) - &(&phi_star * phi);
        moment.push(&curvature[s] + &c);
        bracket.push(c);
    }
    let dbphi_raw = delbar(geom, &state.higgs);
    let dbar_phi: Field = (0..state.metric.len())
        .map(|s| &dbphi_raw[s] + &state.base_a[s].commutator(&state.higgs[s]))
        .collect();
    Derived {
        metric_inv,
        chern_b,
        curvature,
        curvature_raw,
        bracket,
        moment,
        dbar_phi,
    }
}

/// Real h-pairing Σ_s cell · Re tr(X h⁻¹Y†h).
pub fn inner_product(state: &FlowState, metric_inv: &Field, x: &Field, y: &Field) -> f64 {
    let cell = state.geometry.cell_area();
    let mut acc = 0.0;
    for s in 0..x.len() {
        let wrapped = &(&metric_inv[s] * &y[s].adjoint()) * &state.metric[s];
        acc += (&x[s] * &wrapped).trace().re * cell;
    }
    acc
}

pub fn field_norm_sq(state: &FlowState, metric_inv: &Field, x: &Field) -> f64 {
    inner_product(state, metric_inv, x, x)
}

/// ‖F_A + \[φ,φ*\]‖² (restricted) or with 4‖∂̄_A φ‖² added (full).
pub fn ymh_energy(state: &FlowState, variant: EnergyVariant) -> f64 {
    let d = derived(state);
    ymh_energy_from(state, &d, variant)
}

pub fn ymh_energy_from(state: &FlowState, d: &Derived, variant: EnergyVariant) -> f64 {
    let restricted = field_norm_sq(state, &d.metric_inv, &d.moment);
    match variant {
        EnergyVariant::Restricted => restricted,
        EnergyVariant::Full => restricted + 4.0 * field_norm_sq(state, &d.metric_inv, &d.dbar_phi),
    }
}

/// Moment maps μ₁ = F_A + \[φ,φ*\] and μ_C = 2i ∂̄_A φ = μ₂ + iμ₃.
pub struct MomentMaps {
    pub mu1: Field,
    pub mu_c: Field,
    pub mu2: Field,
    pub mu3: Field,
}

pub fn moment_maps(state: &FlowState) -> MomentMaps {
    let d = derived(state);
    let mu_c: Field = d
        .dbar_phi
        .iter()
        .map(|m| m.scale(C64::new(0.0, 2.0)))
        .collect();
    let mut mu2 = Vec::with_capacity(mu_c.len());
    let mut mu3 = Vec::with_capacity(mu_c.len());
    for s in 0..mu_c.len() {
        let star = &(&d.metric_inv[s] * &mu_c[s].adjoint()) * &state.metric[s];
        mu2.push((&mu_c[s] + &star).scale(C64::new(0.5, 0.0)));
        mu3.push((&mu_c[s] - &star).scale(C64::new(0.0, -0.5)));
    }
    MomentMaps {
        mu1: d.moment,
        mu_c,
        mu2,
        mu3,
    }
}

/// Honest discrete gauge action: a ↦ gag† − (∂̄g)g†, φ ↦ gφg†, h ↦ ghg†.
///
/// A constant g is an exact symmetry; general site-varying g preserves the
/// energy only to discretization order (the inhomogeneous term hits the
/// discrete product rule). The exact site-varying family lives in
/// `phase_constant_gauge`.
pub fn gauge_transform(state: &FlowState, g: &Field) -> FlowState {
    let geom = &state.geometry;
    let dbg_ = delbar(geom, g);
    let mut base_a = Vec::with_capacity(g.len());
    let mut higgs = Vec::with_capacity(g.len());
    let mut metric = Vec::with_capacity(g.len());
    for s in 0..g.len() {
        let gd = g[s].adjoint();
        base_a.push(&(&(&g[s] * &state.base_a[s]) * &gd) - &(&dbg_[s] * &gd));
        higgs.push(&(&g[s] * &state.higgs[s]) * &gd);
        metric.push(&(&g[s] * &state.metric[s]) * &gd);
    }
    FlowState {
        base_a,
        higgs,
        metric,
        ..*state
    }
}

/// Gauge transformation by g(s) = e^{iθ(s)}·g₀ with g₀ a constant unitary,
/// realized with the exact discrete pure-gauge shift for the phase part:
///
///   a ↦ g₀ a g₀† − i(∂̄θ)·Id,   φ ↦ g₀ φ g₀†,   h ↦ g₀ h g₀†.
///
/// Because the discrete ∂ and ∂̄ commute and scalars drop out of every
/// commutator, this site-wise family preserves both energy variants exactly
/// (to rounding), which is the discretization's realization of gauge
/// invariance; the finite-phase inhomogeneous term −(∂̄e^{iθ})e^{−iθ} would
/// agree only to O(θ²) per cell.
pub fn phase_constant_gauge(state: &FlowState, theta: &[f64], g0: &CMat) -> FlowState {
    let geom = &state.geometry;
    let theta_field: Field = theta
        .iter()
        .map(|&t| CMat::scalar(state.rank, C64::new(t, 0.0)))
        .collect();
    let shift = delbar(geom, &theta_field);
    let g0d = g0.adjoint();
    let mut base_a = Vec::with_capacity(theta.len());
    let mut higgs = Vec::with_capacity(theta.len());
    let mut metric = Vec::with_capacity(theta.len());
    for s in 0..theta.len() {
        let conj_a = &(g0 * &state.base_a[s]) * &g0d;
        base_a.push(&conj_a - &shift[s].scale(C64::new(0.0, 1.0)));
        higgs.push(&(g0 * &state.higgs[s]) * &g0d);
        metric.push(&(g0 * &state.metric[s]) * &g0d);
    }
    FlowState {
        base_a,
        higgs,
        metric,
        ..*state
    }
}

/// Report of the S¹-action identities.
#[derive(Debug, Clone, PartialEq)]
pub struct S1Report {
    pub energy_rel_dev: f64,
    pub phi_norm_rel_dev: f64,
    /// max |(A, e^{iθ}φ) − exp(iθΨ)·(A, φ)| over sites, when Ψ weights given.
    pub psi_field_dev: Option<f64>,
}

/// Checks ymh(A, e^{iθ}φ) = ymh(A, φ) and ‖e^{iθ}φ‖ = ‖φ‖; with Ψ-weights
/// supplied (one per bundle index), also the exact fixed-point identity
/// (A, e^{iθ}φ) = exp(iθΨ)·(A, φ) for weight-compatible block states.
pub fn s1_action_check(state: &FlowState, theta: f64, psi_weights: Option<&[f64]>) -> S1Report {
    let rotate = C64::new(0.0, theta).exp();
    let mut rotated = state.clone();
    for m in rotated.higgs.iter_mut() {
        *m = m.scale(rotate);
    }
    let e0 = ymh_energy(state, EnergyVariant::Restricted);
    let e1 = ymh_energy(&rotated, EnergyVariant::Restricted);
    let energy_rel_dev = (e1 - e0).abs() / e0.abs().max(1e-300);
    let d = derived(state);
    let n0 = field_norm_sq(state, &d.metric_inv, &state.higgs).sqrt();
    let n1 = field_norm_sq(&rotated, &derived(&rotated).metric_inv, &rotated.higgs).sqrt();
    let phi_norm_rel_dev = (n1 - n0).abs() / n0.abs().max(1e-300);
    let psi_field_dev = psi_weights.map(|weights| {
        let diag: Vec<C64> = weights
            .iter()
            .map(|&l| C64::new(0.0, theta * l).exp())
            .collect();
        let g = vec![CMat::diag(&diag); state.geometry.sites()];
        let gauged = gauge_transform(state, &g);
        let mut dev = 0.0f64;
        for s in 0..state.base_a.len() {
            dev = dev.max((&gauged.base_a[s] - &rotated.base_a[s]).max_abs());
            dev = dev.max((&gauged.higgs[s] - &rotated.higgs[s]).max_abs());
        }
        dev
    });
    S1Report {
        energy_rel_dev,
        phi_norm_rel_dev,
        psi_field_dev,
    }
}

/// One eigenvalue cluster of *(F_A + \[φ,φ*\]) across sites.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub center: f64,
    pub min: f64,
    pub max: f64,
    /// Eigenvalue count per site (candidate Harder-Narasimhan-type rank).
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClusterReport {
    pub clusters: Vec<Cluster>,
    pub threshold: f64,
}

impl ClusterReport {
    pub fn max_spread(&self) -> f64 {
        self.clusters
            .iter()
            .map(|c| c.max - c.min)
            .fold(0.0, f64::max)
    }
}

/// Per-site eigenvalues of the h-self-adjoint part of the moment field,
/// clustered with gap threshold; multiplicities are per-site counts.
pub fn classify_limit(state: &FlowState, threshold: f64) -> ClusterReport {
    let d = derived(state);
    let sites = state.geometry.sites();
    let mut values = Vec::with_capacity(sites * state.rank);
    for s in 0..sites {
        let w = state.metric[s].hermitian_sqrt();
        let wi = w.inverse().expect("positive definite");
        let n = &(&w * &d.moment[s]) * &wi;
        let herm = (&n + &n.adjoint()).scale(C64::new(0.5, 0.0));
        let (vals, _) = herm.hermitian_eigen();
        values.extend(vals);
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut clusters = Vec::new();
    let mut start = 0usize;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > threshold {
            let slice = &values[start..i];
            clusters.push(Cluster {
                center: slice.iter().sum::<f64>() / slice.len() as f64,
                min: slice[0],
                max: *slice.last().unwrap(),
                multiplicity: slice.len() / sites,
            });
            start = i;
        }
    }
    ClusterReport {
        clusters,
        threshold,
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)
}

fn random_complex(rng: &mut ChaCha8Rng, amp: f64) -> C64 {
    Complex64::new(amp * normal(rng), amp * normal(rng))
}

fn random_full(rng: &mut ChaCha8Rng, n: usize, amp: f64) -> CMat {
    let mut m = CMat::zeros(n);
    for v in m.d.iter_mut() {
        *v = random_complex(rng, amp);
    }
    m
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize, amp: f64) -> CMat {
    let m = random_full(rng, n, amp);
    (&m + &m.adjoint()).scale(C64::new(0.5, 0.0))
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, amp: f64) -> CMat {
    let m = random_full(rng, n, amp);
    (&m + &m.transpose()).scale(C64::new(0.5, 0.0))
}

fn random_antisymmetric(rng: &mut ChaCha8Rng, n: usize, amp: f64) -> CMat {
    let m = random_full(rng, n, amp);
    (&m - &m.transpose()).scale(C64::new(0.5, 0.0))
}

/// Seeded random state for the given tag, with fields of the stated amplitude
/// and the metric a positive exponential of an amplitude-sized direction.
/// Real-form tags satisfy their constraints exactly at t = 0.
pub fn random_state(
    geometry: LatticeGeometry,
    rank: usize,
    group_tag: GroupTag,
    seed: u64,
    amp: f64,
) -> FlowState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sites = geometry.sites();
    let mut base_a = Vec::with_capacity(sites);
    let mut higgs = Vec::with_capacity(sites);
    let mut metric = Vec::with_capacity(sites);
    for _ in 0..sites {
        match group_tag {
            GroupTag::GlC => {
                base_a.push(random_full(&mut rng, rank, amp));
                higgs.push(random_full(&mut rng, rank, amp));
                metric.push(random_hermitian(&mut rng, rank, amp).exp());
            }
            GroupTag::SlnR => {
                base_a.push(random_antisymmetric(&mut rng, rank, amp));
                let mut phi = random_symmetric(&mut rng, rank, amp);
                let t = phi.trace() / C64::new(rank as f64, 0.0);
                phi = &phi - &CMat::scalar(rank, t);
                higgs.push(phi);
                // metric locus hᵗh = I: h = exp(i·A) with A real antisymmetric
                let mut u = CMat::zeros(rank);
                for i in 0..rank {
                    for j in (i + 1)..rank {
                        let v = C64::new(0.0, amp * normal(&mut rng));
                        u.set(i, j, v);
                        u.set(j, i, -v);
                    }
                }
                metric.push(u.exp());
            }
            GroupTag::Sp2nR { n } => {
                let a = random_full(&mut rng, n, amp);
                let beta = random_symmetric(&mut rng, n, amp);
                let gamma = random_symmetric(&mut rng, n, amp);
                let h1 = random_hermitian(&mut rng, n, amp).exp();
                let h2 = h1.transpose().inverse().expect("positive definite");
                let mut aw = CMat::zeros(rank);
                let mut pw = CMat::zeros(rank);
                let mut hw = CMat::zeros(rank);
                let at = a.transpose();
                for i in 0..n {
                    for j in 0..n {
                        aw.set(i, j, a.at(i, j));
                        aw.set(n + i, n + j, -at.at(i, j));
                        pw.set(i, n + j, beta.at(i, j));
                        pw.set(n + i, j, gamma.at(i, j));
                        hw.set(i, j, h1.at(i, j));
                        hw.set(n + i, n + j, h2.at(i, j));
                    }
                }
                base_a.push(aw);
                higgs.push(pw);
                metric.push(hw);
            }
        }
    }
    FlowState {
        geometry,
        rank,
        group_tag,
        base_a,
        higgs,
        metric,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn geom(n: usize) -> LatticeGeometry {
        LatticeGeometry::new(n, 1.0).unwrap()
    }

    #[test]
    fn vacuum_has_zero_energy_and_moments() {
        let state = FlowState::vacuum(geom(6), 2);
        assert_eq!(ymh_energy(&state, EnergyVariant::Restricted), 0.0);
        assert_eq!(ymh_energy(&state, EnergyVariant::Full), 0.0);
        let mm = moment_maps(&state);
        for s in 0..state.geometry.sites() {
            assert_eq!(mm.mu1[s].max_abs(), 0.0);
            assert_eq!(mm.mu_c[s].max_abs(), 0.0);
        }
    }

    #[test]
    fn abelian_bracket_vanishes_and_energy_is_quadrature() {
        // n = 1: the bracket c always vanishes; the energy equals an
        // independently summed quadrature of |F|² in scrambled site order.
        let state = random_state(geom(8), 1, GroupTag::GlC, 3, 0.2);
        let d = derived(&state);
        for s in 0..state.geometry.sites() {
            assert!(d.bracket[s].max_abs() < 1e-16);
        }
        let energy = ymh_energy(&state, EnergyVariant::Restricted);
        // scrambled-order oracle
        let mut order: Vec<usize> = (0..state.geometry.sites()).collect();
        order.reverse();
        order.rotate_left(7);
        let mut oracle = 0.0;
        for &s in &order {
            let h = &state.metric[s];
            let hi = h.inverse().unwrap();
            let wrapped = &(&hi * &d.moment[s].adjoint()) * h;
            oracle += (&d.moment[s] * &wrapped).trace().re * state.geometry.cell_area();
        }
        assert!((energy - oracle).abs() <= 1e-12 * oracle.abs().max(1.0));
    }

    #[test]
    fn random_energy_matches_scrambled_quadrature_rank2() {
        let state = random_state(geom(8), 2, GroupTag::GlC, 11, 0.3);
        let d = derived(&state);
        let energy = ymh_energy_from(&state, &d, EnergyVariant::Full);
        let mut terms: Vec<f64> = Vec::new();
        for s in 0..state.geometry.sites() {
            let h = &state.metric[s];
            let hi = h.inverse().unwrap();
            let w1 = &(&hi * &d.moment[s].adjoint()) * h;
            let w2 = &(&hi * &d.dbar_phi[s].adjoint()) * h;
            terms.push(
                ((&d.moment[s] * &w1).trace().re + 4.0 * (&d.dbar_phi[s] * &w2).trace().re)
                    * state.geometry.cell_area(),
            );
        }
        terms.reverse();
        let oracle: f64 = terms.iter().sum();
        assert!((energy - oracle).abs() <= 1e-12 * oracle.abs().max(1.0));
    }

    #[test]
    fn moment_map_norm_identity() {
        for seed in 0..20u64 {
            let state = random_state(geom(8), 2, GroupTag::GlC, seed, 0.25);
            let d = derived(&state);
            let mm = moment_maps(&state);
            let full = ymh_energy_from(&state, &d, EnergyVariant::Full);
            let lhs = field_norm_sq(&state, &d.metric_inv, &mm.mu1)
                + field_norm_sq(&state, &d.metric_inv, &mm.mu2)
                + field_norm_sq(&state, &d.metric_inv, &mm.mu3);
            assert!(
                (lhs - full).abs() <= 1e-12 * full.abs().max(1.0),
                "seed {seed}: {lhs} vs {full}"
            );
        }
    }

    #[test]
    fn expansion_identity() {
        // full = ‖F‖² + ‖[φ,φ*]‖² + 2Re⟨F,[φ,φ*]⟩ + 4‖∂̄φ‖²
        for seed in 0..20u64 {
            let state = random_state(geom(8), 2, GroupTag::GlC, 100 + seed, 0.25);
            let d = derived(&state);
            let full = ymh_energy_from(&state, &d, EnergyVariant::Full);
            let rhs = field_norm_sq(&state, &d.metric_inv, &d.curvature)
                + field_norm_sq(&state, &d.metric_inv, &d.bracket)
                + 2.0 * inner_product(&state, &d.metric_inv, &d.curvature, &d.bracket)
                + 4.0 * field_norm_sq(&state, &d.metric_inv, &d.dbar_phi);
            assert!(
                (full - rhs).abs() <= 1e-12 * full.abs().max(1.0),
                "seed {seed}: {full} vs {rhs}"
            );
        }
    }

    /// Exact-symmetry gauge family: site-wise scalar phase × constant unitary.
    pub(super) fn exact_gauge_data(state: &FlowState, seed: u64) -> (Vec<f64>, CMat) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = state.rank;
        // constant unitary from the exponential of a skew-Hermitian matrix
        let sk = {
            let m = random_full(&mut rng, n, 0.7);
            (&m - &m.adjoint()).scale(C64::new(0.5, 0.0))
        };
        let g0 = sk.exp();
        let theta: Vec<f64> = (0..state.geometry.sites())
            .map(|_| 2.0 * std::f64::consts::PI * rng.gen_range(-1.0..1.0f64))
            .collect();
        (theta, g0)
    }

    #[test]
    fn gauge_invariance_exact_family() {
        for seed in 0..10u64 {
            let state = random_state(geom(8), 2, GroupTag::GlC, 200 + seed, 0.25);
            let (theta, g0) = exact_gauge_data(&state, 300 + seed);
            let gauged = phase_constant_gauge(&state, &theta, &g0);
            for variant in [EnergyVariant::Restricted, EnergyVariant::Full] {
                let e0 = ymh_energy(&state, variant);
                let e1 = ymh_energy(&gauged, variant);
                assert!(
                    (e1 - e0).abs() <= 1e-12 * e0.abs().max(1.0),
                    "seed {seed}: {e0} vs {e1}"
                );
            }
        }
        // a constant unitary through the general gauge action is exact too
        let state = random_state(geom(8), 2, GroupTag::GlC, 222, 0.25);
        let (_, g0) = exact_gauge_data(&state, 223);
        let g = vec![g0; state.geometry.sites()];
        let e0 = ymh_energy(&state, EnergyVariant::Restricted);
        let e1 = ymh_energy(&gauge_transform(&state, &g), EnergyVariant::Restricted);
        assert!((e1 - e0).abs() <= 1e-12 * e0.abs().max(1.0));
    }

    #[test]
    fn gauge_invariance_breaks_for_general_site_varying_g() {
        // documents the discretization limit: a random nonabelian site-varying
        // gauge transformation moves the energy at O(spacing²), far above the
        // exact-family deviation
        let state = random_state(geom(8), 2, GroupTag::GlC, 400, 0.25);
        let mut rng = ChaCha8Rng::seed_from_u64(401);
        let g: Field = (0..state.geometry.sites())
            .map(|_| {
                let m = random_full(&mut rng, 2, 0.5);
                (&m - &m.adjoint()).scale(C64::new(0.5, 0.0)).exp()
            })
            .collect();
        let gauged = gauge_transform(&state, &g);
        let e0 = ymh_energy(&state, EnergyVariant::Restricted);
        let e1 = ymh_energy(&gauged, EnergyVariant::Restricted);
        assert!((e1 - e0).abs() > 1e-6 * e0.abs());
    }

    #[test]
    fn s1_invariance_and_fixed_point_identity() {
        for seed in 0..10u64 {
            let state = random_state(geom(8), 2, GroupTag::GlC, 500 + seed, 0.25);
            let r = s1_action_check(&state, std::f64::consts::PI / 3.0, None);
            assert!(
                r.energy_rel_dev <= 1e-12,
                "seed {seed}: {}",
                r.energy_rel_dev
            );
            assert!(r.phi_norm_rel_dev <= 1e-12);
        }
        // θ = 0 is the identity
        let state = random_state(geom(6), 2, GroupTag::GlC, 42, 0.25);
        let r = s1_action_check(&state, 0.0, None);
        assert_eq!(r.energy_rel_dev, 0.0);

        // two-block state: Ψ = diag(0, i) (weights 0,1), φ routing 0→1
        let mut block = FlowState::vacuum(geom(6), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for s in 0..block.geometry.sites() {
            let mut a = CMat::zeros(2);
            a.set(0, 0, random_complex(&mut rng, 0.3));
            a.set(1, 1, random_complex(&mut rng, 0.3));
            block.base_a[s] = a;
            let mut phi = CMat::zeros(2);
            phi.set(1, 0, random_complex(&mut rng, 0.3));
            block.higgs[s] = phi;
        }
        for theta in [std::f64::consts::PI / 7.0, std::f64::consts::PI / 3.0, 1.0] {
            let r = s1_action_check(&block, theta, Some(&[0.0, 1.0]));
            assert!(r.psi_field_dev.unwrap() <= 1e-15, "theta={theta}");
        }
    }

    #[test]
    fn classify_limit_zero_and_two_cluster_states() {
        let state = FlowState::vacuum(geom(6), 2);
        let report = classify_limit(&state, 1e-4);
        assert_eq!(report.clusters.len(), 1);
        assert_eq!(report.clusters[0].center, 0.0);
        assert_eq!(report.clusters[0].multiplicity, 2);

        // split state with constant nilpotent φ: moment = diag(|ψ|², −|ψ|²)
        let mut split = FlowState::vacuum(geom(6), 2);
        for s in 0..split.geometry.sites() {
            let mut phi = CMat::zeros(2);
            phi.set(0, 1, C64::new(0.4, 0.0));
            split.higgs[s] = phi;
        }
        let report = classify_limit(&split, 1e-4);
        assert_eq!(report.clusters.len(), 2);
        assert_eq!(report.clusters[0].multiplicity, 1);
        assert_eq!(report.clusters[1].multiplicity, 1);
        assert!(report.clusters[0].center < report.clusters[1].center);
        assert!(report.max_spread() < 1e-12);
    }

    #[test]
    fn real_form_random_states_satisfy_constraints() {
        use super::heat::constraint_deviation;
        let s = random_state(geom(6), 2, GroupTag::SlnR, 9, 0.2);
        assert!(constraint_deviation(&s) < 1e-13);
        let s = random_state(geom(6), 2, GroupTag::Sp2nR { n: 1 }, 9, 0.2);
        assert!(constraint_deviation(&s) < 1e-13);
        let s = random_state(geom(6), 4, GroupTag::Sp2nR { n: 2 }, 9, 0.2);
        assert!(constraint_deviation(&s) < 1e-13);
    }
}
