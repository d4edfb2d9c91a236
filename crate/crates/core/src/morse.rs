//! Deformation-complex weight pieces, Morse indices, local-minimum tests,
//! Poincaré-polynomial assembly and the rank-2 equivariant difference series.
//!
//! Index convention: the negative directions at a critical stratum are the
//! μ > 0 hypercohomology pieces of the deformation complex
//!     C•_μ : (E_H(h^C))_μ → (E_H(m^C))_{μ+1} ⊗ K,
//! so "index 0 ⇔ local minimum" is literal. The real index is twice the sum
//! of the complex H¹ dimensions. A piece whose H¹ is not pinned down by
//! degree signs (or by the isomorphism certificate) is reported UNRESOLVED
//! and the index degrades to an interval — generic values are never silently
//! reported as exact.

use num_bigint::BigInt;
use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    poly_add, poly_mul, series_geometric, series_mul, series_shift, series_sub, Polynomial,
    TruncatedSeries,
};
use crate::critical::{
    check_hodge_fixed_point, CriticalStratum, HodgeType, RouteTag, StratumClass,
};
use crate::curve::{chi_bundle, h0_line_bundle, CurveContext, SectionCount};
use crate::groups::GroupName;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MorseError {
    #[error("input is not an S¹ fixed point (a route fails the weight rule)")]
    NotFixedPoint,
    #[error("unsupported group routing for {0}")]
    UnsupportedGroup(String),
    #[error("odd Morse index {0} violates the even-index convention")]
    OddIndex(u64),
    #[error("truncation order {order} below the cohomology shift {shift}")]
    OrderBelowShift { order: usize, shift: i64 },
    #[error("negative shift {0} (need 2l - deg(E) + g - 1 >= 0)")]
    NegativeShift(i64),
    #[error("negative symmetric-product index {0} (need 2g - 2 + deg(E) - 2l >= 0)")]
    NegativeSymIndex(i64),
}

/// Where a weight component of h^C or m^C comes from; indices are summand
/// positions in the Hodge chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CompKey {
    /// Hom(V_i, V_j) ⊂ End(V)
    Hom(usize, usize),
    /// V_i ⊗ V_j (i ≤ j; i = j is the Sym² diagonal) ⊂ Sym²(V)
    Sym(usize, usize),
    /// (V_i ⊗ V_j)* ⊂ Sym²(V*)
    SymDual(usize, usize),
}

/// A direct summand of a weight piece, with Hom/Sym bundle arithmetic done.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BundleComp {
    pub key: CompKey,
    pub rank: u32,
    pub degree: i64,
}

/// One weight piece C•_μ of the deformation complex; target degrees include
/// the K-twist (rank·(2g−2)).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPiece {
    pub weight: Rational64,
    pub source: Vec<BundleComp>,
    pub target: Vec<BundleComp>,
}

impl ComplexPiece {
    pub fn source_rank(&self) -> u32 {
        self.source.iter().map(|c| c.rank).sum()
    }
    pub fn target_rank(&self) -> u32 {
        self.target.iter().map(|c| c.rank).sum()
    }
    pub fn source_degree(&self) -> i64 {
        self.source.iter().map(|c| c.degree).sum()
    }
    pub fn target_degree(&self) -> i64 {
        self.target.iter().map(|c| c.degree).sum()
    }
}

fn hom_comp(h: &HodgeType, i: usize, j: usize) -> BundleComp {
    let (si, sj) = (&h.summands[i], &h.summands[j]);
    BundleComp {
        key: CompKey::Hom(i, j),
        rank: si.rank * sj.rank,
        degree: si.rank as i64 * sj.degree - sj.rank as i64 * si.degree,
    }
}

fn sym_comp(h: &HodgeType, i: usize, j: usize, dual: bool) -> BundleComp {
    let (si, sj) = (&h.summands[i], &h.summands[j]);
    let (rank, degree) = if i == j {
        let r = si.rank as i64;
        ((r * (r + 1) / 2) as u32, (r + 1) * si.degree)
    } else {
        (
            si.rank * sj.rank,
            si.rank as i64 * sj.degree + sj.rank as i64 * si.degree,
        )
    };
    BundleComp {
        key: if dual {
            CompKey::SymDual(i, j)
        } else {
            CompKey::Sym(i, j)
        },
        rank,
        degree: if dual { -degree } else { degree },
    }
}

/// Decompose the deformation complex into weight pieces. Supported routings:
/// GL(n,C) chains (h^C = m^C = End V) and Sp(2n,R) chains
/// (h^C = End V, m^C = Sym²V ⊕ Sym²V*).
pub fn deformation_pieces(
    h: &HodgeType,
    ctx: &CurveContext,
) -> Result<Vec<ComplexPiece>, MorseError> {
    if !check_hodge_fixed_point(h) {
        return Err(MorseError::NotFixedPoint);
    }
    let sp = match h.group.name {
        GroupName::GlC { .. } => false,
        GroupName::Sp2nR { .. } => true,
        other => return Err(MorseError::UnsupportedGroup(other.to_string())),
    };
    let k = ctx.canonical_degree();
    let n = h.summands.len();
    let mut weights: Vec<Rational64> = Vec::new();
    let mut note = |w: Rational64| {
        if !weights.contains(&w) {
            weights.push(w);
        }
    };
    // h^C weights (also m^C for GL): λ_j − λ_i over Hom(V_i, V_j)
    for i in 0..n {
        for j in 0..n {
            let w = h.summands[j].weight - h.summands[i].weight;
            note(w);
            if !sp {
                note(w - Rational64::from_integer(1));
            }
        }
    }
    if sp {
        for i in 0..n {
            for j in i..n {
                let s = h.summands[i].weight + h.summands[j].weight;
                note(s - Rational64::from_integer(1));
                note(-s - Rational64::from_integer(1));
            }
        }
    }
    weights.sort();
    let mut pieces = Vec::new();
    for mu in weights {
        let mut source = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if h.summands[j].weight - h.summands[i].weight == mu {
                    source.push(hom_comp(h, i, j));
                }
            }
        }
        let target_weight = mu + Rational64::from_integer(1);
        let mut target = Vec::new();
        if sp {
            for i in 0..n {
                for j in i..n {
                    let s = h.summands[i].weight + h.summands[j].weight;
                    if s == target_weight {
                        target.push(sym_comp(h, i, j, false));
                    }
                    if -s == target_weight {
                        target.push(sym_comp(h, i, j, true));
                    }
                }
            }
        } else {
            for i in 0..n {
                for j in 0..n {
                    if h.summands[j].weight - h.summands[i].weight == target_weight {
                        target.push(hom_comp(h, i, j));
                    }
                }
            }
        }
        for t in &mut target {
            t.degree += t.rank as i64 * k;
        }
        if source.is_empty() && target.is_empty() {
            continue;
        }
        pieces.push(ComplexPiece {
            weight: mu,
            source,
            target,
        });
    }
    Ok(pieces)
}

/// Structural ad(φ) edges from source components to target components of one
/// piece: u ∈ Hom(V_a, V_b) is pushed through each route.
fn ad_phi_edges(h: &HodgeType, piece: &ComplexPiece) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let find_target = |key: CompKey| piece.target.iter().position(|c| c.key == key);
    for (si, s) in piece.source.iter().enumerate() {
        let CompKey::Hom(a, b) = s.key else { continue };
        for r in &h.routes {
            match r.tag {
                RouteTag::Phi => {
                    // φ∘u via routes out of b; u∘φ via routes into a
                    if r.src == b {
                        if let Some(t) = find_target(CompKey::Hom(a, r.tgt)) {
                            edges.push((si, t));
                        }
                    }
                    if r.tgt == a {
                        if let Some(t) = find_target(CompKey::Hom(r.src, b)) {
                            edges.push((si, t));
                        }
                    }
                }
                RouteTag::Beta => {
                    // β pair {src,tgt} ⊂ Sym²V: replace a member equal to a by b
                    for (x, y) in [(r.src, r.tgt), (r.tgt, r.src)] {
                        if x == a {
                            let (lo, hi) = (b.min(y), b.max(y));
                            if let Some(t) = find_target(CompKey::Sym(lo, hi)) {
                                edges.push((si, t));
                            }
                        }
                    }
                }
                RouteTag::Gamma => {
                    // γ pair {src,tgt} ⊂ Sym²V*: replace a member equal to b by a
                    for (x, y) in [(r.src, r.tgt), (r.tgt, r.src)] {
                        if x == b {
                            let (lo, hi) = (a.min(y), a.max(y));
                            if let Some(t) = find_target(CompKey::SymDual(lo, hi)) {
                                edges.push((si, t));
                            }
                        }
                    }
                }
            }
        }
    }
    edges.sort();
    edges.dedup();
    edges
}

/// Isomorphism certificate for ad(φ): (h^C)_μ → (m^C)_{μ+1}⊗K: necessary
/// numeric conditions (equal rank, equal degree) plus generically-nonvanishing
/// routing (every source component feeds a target component and every target
/// component is fed).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsoCheck {
    pub rank_equal: bool,
    pub degree_equal: bool,
    pub routing_generic: bool,
}

impl IsoCheck {
    pub fn passes(&self) -> bool {
        self.rank_equal && self.degree_equal && self.routing_generic
    }
}

fn iso_check(h: &HodgeType, piece: &ComplexPiece) -> IsoCheck {
    let rank_equal = piece.source_rank() == piece.target_rank();
    let degree_equal = piece.source_degree() == piece.target_degree();
    let routing_generic = if piece.source.is_empty() && piece.target.is_empty() {
        true
    } else if piece.source.is_empty() || piece.target.is_empty() {
        false
    } else {
        let edges = ad_phi_edges(h, piece);
        (0..piece.source.len()).all(|s| edges.iter().any(|e| e.0 == s))
            && (0..piece.target.len()).all(|t| edges.iter().any(|e| e.1 == t))
    };
    IsoCheck {
        rank_equal,
        degree_equal,
        routing_generic,
    }
}

/// How one μ > 0 piece was resolved in the index computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PieceResolution {
    /// ad(φ) certified an isomorphism: H¹ = 0.
    Isomorphism,
    /// Degree signs force H⁰ and H² to vanish; H¹ = χ(target) − χ(source).
    DegreeVanishing { h1: u64 },
    /// Vanishing not forced: only the lower bound max(0, χ(t) − χ(s)) is known.
    Unresolved { h1_lower: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightEntry {
    pub weight: Rational64,
    pub source_rank: u32,
    pub source_degree: i64,
    pub target_rank: u32,
    pub target_degree: i64,
    pub resolution: PieceResolution,
}

/// Real Morse index: exact even integer, or an interval when some piece is
/// unresolved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IndexValue {
    Exact(u64),
    Interval { lower: u64, upper: Option<u64> },
}

impl IndexValue {
    pub fn exact(&self) -> Option<u64> {
        match self {
            IndexValue::Exact(v) => Some(*v),
            IndexValue::Interval { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexReport {
    pub index: IndexValue,
    pub per_weight: Vec<WeightEntry>,
}

fn chi_comp(ctx: &CurveContext, comps: &[BundleComp]) -> i64 {
    comps
        .iter()
        .map(|c| chi_bundle(ctx, c.rank, c.degree).expect("positive rank"))
        .sum()
}

fn resolve_piece(h: &HodgeType, ctx: &CurveContext, piece: &ComplexPiece) -> PieceResolution {
    if iso_check(h, piece).passes() {
        return PieceResolution::Isomorphism;
    }
    let k = ctx.canonical_degree();
    let all_lines_below = |c: &[BundleComp]| c.iter().all(|x| x.rank == 1 && x.degree < 0);
    let all_lines_above = |c: &[BundleComp]| c.iter().all(|x| x.rank == 1 && x.degree > k);
    let chi_diff = chi_comp(ctx, &piece.target) - chi_comp(ctx, &piece.source);
    if piece.source.is_empty() {
        // H¹(C•_μ) = H⁰(target)
        if all_lines_below(&piece.target) {
            return PieceResolution::DegreeVanishing { h1: 0 };
        }
        if all_lines_above(&piece.target) {
            return PieceResolution::DegreeVanishing {
                h1: chi_diff.max(0) as u64,
            };
        }
    } else if all_lines_below(&piece.source)
        && (piece.target.is_empty() || all_lines_above(&piece.target))
    {
        debug_assert!(chi_diff >= 0);
        return PieceResolution::DegreeVanishing {
            h1: chi_diff.max(0) as u64,
        };
    }
    PieceResolution::Unresolved {
        h1_lower: chi_diff.max(0) as u64,
    }
}

/// Morse index 2·Σ_{μ>0} dim H¹(C•_μ) with per-weight resolution report.
pub fn morse_index(h: &HodgeType, ctx: &CurveContext) -> Result<IndexReport, MorseError> {
    let pieces = deformation_pieces(h, ctx)?;
    let mut per_weight = Vec::new();
    let mut total = 0u64;
    let mut unresolved = false;
    for piece in pieces
        .iter()
        .filter(|p| p.weight > Rational64::from_integer(0))
    {
        let resolution = resolve_piece(h, ctx, piece);
        match &resolution {
            PieceResolution::Isomorphism => {}
            PieceResolution::DegreeVanishing { h1 } => total += h1,
            PieceResolution::Unresolved { h1_lower } => {
                total += h1_lower;
                unresolved = true;
            }
        }
        per_weight.push(WeightEntry {
            weight: piece.weight,
            source_rank: piece.source_rank(),
            source_degree: piece.source_degree(),
            target_rank: piece.target_rank(),
            target_degree: piece.target_degree(),
            resolution,
        });
    }
    let index = if unresolved {
        IndexValue::Interval {
            lower: 2 * total,
            upper: None,
        }
    } else {
        IndexValue::Exact(2 * total)
    };
    Ok(IndexReport { index, per_weight })
}

/// Per-weight certificate for the minimum criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimumCertificate {
    pub entries: Vec<(Rational64, IsoCheck)>,
}

/// Local-minimum test: every μ > 0 piece must pass the ad(φ) isomorphism
/// certificate (rank and degree equality plus generic routing).
pub fn is_local_minimum(
    h: &HodgeType,
    ctx: &CurveContext,
) -> Result<(bool, MinimumCertificate), MorseError> {
    let pieces = deformation_pieces(h, ctx)?;
    let mut entries = Vec::new();
    let mut all = true;
    for piece in pieces
        .iter()
        .filter(|p| p.weight > Rational64::from_integer(0))
    {
        let check = iso_check(h, piece);
        all &= check.passes();
        entries.push((piece.weight, check));
    }
    Ok((all, MinimumCertificate { entries }))
}

/// Σ_N t^{λ_N} P_t(N), exact; odd indices are an index-convention violation.
pub fn poincare_assemble(strata: &[(u64, Polynomial)]) -> Result<Polynomial, MorseError> {
    let mut acc = Polynomial::zero();
    for (index, p) in strata {
        if index % 2 != 0 {
            return Err(MorseError::OddIndex(*index));
        }
        acc = poly_add(
            &acc,
            &poly_mul(p, &Polynomial::monomial(BigInt::from(1), *index as usize)),
        );
    }
    Ok(acc)
}

/// Poincaré polynomial of a critical stratum, where known: GL(2) ℓ-strata are
/// S^m X × Jac(X); the φ = 0 stratum takes an externally supplied polynomial
/// (moduli of stable bundles).
pub fn stratum_poincare(
    s: &CriticalStratum,
    ctx: &CurveContext,
    n0_external: Option<&Polynomial>,
) -> Option<Polynomial> {
    match s.description {
        StratumClass::N0ModuliOfBundles => n0_external.cloned(),
        StratumClass::Gl2Hodge => {
            let d = s.hodge.total_degree;
            let ell = s.hodge.summands[0].degree;
            let m = d - 2 * ell + ctx.canonical_degree();
            debug_assert!(m >= 0);
            Some(poly_mul(
                &crate::curve::sym_product_poincare(ctx, m as usize),
                &crate::curve::jacobian_poincare(ctx),
            ))
        }
        StratumClass::IsolatedHodgePoint => Some(Polynomial::one()),
        _ => None,
    }
}

/// Negative-normal fiber dimension at a rank-2 φ = 0 critical set with
/// splitting L₁ ⊕ L₂, deg L₁ = ℓ: 2ℓ − deg(E) + g − 1 + h⁰(L₁*L₂⊗K), the h⁰
/// term carried as the curve module's interval.
pub fn negative_normal_dim(
    ell: i64,
    deg_e: i64,
    ctx: &CurveContext,
) -> Result<SectionCount, MorseError> {
    let g = ctx.genus() as i64;
    let base = 2 * ell - deg_e + g - 1;
    if base < 0 {
        return Err(MorseError::NegativeShift(base));
    }
    let h0 = h0_line_bundle(ctx, deg_e - 2 * ell + ctx.canonical_degree());
    Ok(h0.offset(base as u64))
}

/// The two equivariant series of the rank-2 difference formula
/// P_t^G(X_d) − P_t^G(X_{d−1}):
///   first  = t^s (1+t)^{4g} / (1−t²)²          (the (ν_d, ν_d'') term)
///   second = t^s P_t(S^{2g−2+degE−2ℓ} X) (1+t)^{2g} / (1−t²)
/// with cohomology shift s = 2ℓ − deg(E) + (g−1).
#[derive(Debug, Clone, PartialEq)]
pub struct DwwwSeries {
    pub first: TruncatedSeries,
    pub second: TruncatedSeries,
    pub shift: i64,
    pub sym_index: i64,
}

impl DwwwSeries {
    pub fn difference(&self) -> TruncatedSeries {
        series_sub(&self.first, &self.second)
    }
}

pub fn dwww_difference(
    ell: i64,
    deg_e: i64,
    ctx: &CurveContext,
    order: usize,
) -> Result<DwwwSeries, MorseError> {
    let g = ctx.genus();
    let shift = 2 * ell - deg_e + (g as i64 - 1);
    if shift < 0 {
        return Err(MorseError::NegativeShift(shift));
    }
    let sym_index = ctx.canonical_degree() + deg_e - 2 * ell;
    if sym_index < 0 {
        return Err(MorseError::NegativeSymIndex(sym_index));
    }
    if (shift as usize) > order {
        return Err(MorseError::OrderBelowShift { order, shift });
    }
    let bu1 = series_geometric(2, order).expect("step 2");
    let jac2 = TruncatedSeries::from_polynomial(&Polynomial::from_i64(&[1, 1]).pow(4 * g), order);
    let first =
        series_shift(&series_mul(&series_mul(&jac2, &bu1), &bu1), shift).expect("shift >= 0");
    let sym = TruncatedSeries::from_polynomial(
        &crate::curve::sym_product_poincare(ctx, sym_index as usize),
        order,
    );
    let jac = TruncatedSeries::from_polynomial(&crate::curve::jacobian_poincare(ctx), order);
    let second =
        series_shift(&series_mul(&series_mul(&sym, &jac), &bu1), shift).expect("shift >= 0");
    Ok(DwwwSeries {
        first,
        second,
        shift,
        sym_index,
    })
}
