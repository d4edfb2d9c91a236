//! Connected-component counting and invariant extraction: Milnor-Wood bound,
//! Cayley partner, Sp component decompositions, the σ-pair chamber map and
//! the Hitchin-base dimension cross-check.
//!
//! UNKNOWN is a first-class census result: connectedness that the literature
//! only conjectures is never reported as a count.

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::groups::GroupName;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CensusError {
    #[error("genus >= 2 required, got {0}")]
    GenusTooSmall(u32),
    #[error("n >= 1 required")]
    BadRank,
    #[error("n >= 3 required here; n = {0} is handled by the Sp(4,R)/non-maximal paths")]
    RedirectLowRank(u32),
    #[error("|d| = {0} is not maximal (need |d| = n(g-1) = {1})")]
    NotMaximal(i64, i64),
    #[error("|d| = {0} must be strictly below n(g-1) = {1}")]
    NotNonmaximal(i64, i64),
    #[error("deg(V) = {0} does not match the requested Toledo invariant {1}")]
    DegreeMismatch(i64, i64),
    #[error("sigma = {0} outside the allowed range [0, {1}]")]
    SigmaOutOfRange(Rational64, Rational64),
    #[error("expected an Sp(2n,R) group datum, got {0}")]
    NotSp(String),
    #[error("hitchin base dimension mismatch: sum {0} vs closed form {1}")]
    HitchinBaseMismatch(i64, i64),
}

/// Total count, or explicitly unknown (with the conjecture recorded in the
/// breakdown provenance).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Count {
    Known(u64),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakdownRow {
    pub label: String,
    pub count: u64,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentReport {
    pub group: String,
    pub genus: u32,
    pub toledo: i64,
    pub total: Count,
    pub breakdown: Vec<BreakdownRow>,
}

impl ComponentReport {
    pub fn breakdown_sum(&self) -> u64 {
        self.breakdown.iter().map(|r| r.count).sum()
    }
}

/// Milnor-Wood interval [−n(g−1), n(g−1)] for Sp(2n,R).
pub fn milnor_wood(n: u32, g: u32) -> Result<(i64, i64), CensusError> {
    if n < 1 {
        return Err(CensusError::BadRank);
    }
    if g < 2 {
        return Err(CensusError::GenusTooSmall(g));
    }
    let b = n as i64 * (g as i64 - 1);
    Ok((-b, b))
}

fn two_pow_2g(g: u32) -> u64 {
    1u64 << (2 * g)
}

/// Maximal Sp(2n,R), n ≥ 3: 3·2^{2g} components, split as 2·2^{2g} labeled by
/// (w₁,w₂) plus 2^{2g} Hitchin components labeled by square roots of K.
pub fn count_sp2nr_maximal(n: u32, g: u32) -> Result<ComponentReport, CensusError> {
    if g < 2 {
        return Err(CensusError::GenusTooSmall(g));
    }
    if n < 3 {
        return Err(CensusError::RedirectLowRank(n));
    }
    let p = two_pow_2g(g);
    let breakdown = vec![
        BreakdownRow {
            label: "(w1,w2) Stiefel-Whitney classes of the Cayley partner".into(),
            count: 2 * p,
            provenance: "orthogonal-bundle topological types".into(),
        },
        BreakdownRow {
            label: "Hitchin components (square roots of K)".into(),
            count: p,
            provenance: "isolated Hodge-point minima".into(),
        },
    ];
    Ok(ComponentReport {
        group: GroupName::Sp2nR { n }.to_string(),
        genus: g,
        toledo: n as i64 * (g as i64 - 1),
        total: Count::Known(3 * p),
        breakdown,
    })
}

/// Maximal Sp(4,R): 3·2^{2g} + 2g − 4 components,
/// 2(2^{2g}−1) + (2g−2) + 2^{2g}.
pub fn count_sp4_maximal(g: u32) -> Result<ComponentReport, CensusError> {
    if g < 2 {
        return Err(CensusError::GenusTooSmall(g));
    }
    let p = two_pow_2g(g);
    let breakdown = vec![
        BreakdownRow {
            label: "M_{w1,w2}, w1 != 0".into(),
            count: 2 * (p - 1),
            provenance: "double-cover pushforward families".into(),
        },
        BreakdownRow {
            label: "M0_l, g-1 <= l <= 3g-4".into(),
            count: 2 * g as u64 - 2,
            provenance: "w1 = 0 families with deg(L) below the top".into(),
        },
        BreakdownRow {
            label: "M_{K^{3/2}} Hitchin components".into(),
            count: p,
            provenance: "l = 3g-3 splits by L^2 = K^3".into(),
        },
    ];
    Ok(ComponentReport {
        group: GroupName::Sp2nR { n: 2 }.to_string(),
        genus: g,
        toledo: 2 * (g as i64 - 1),
        total: Count::Known(3 * p + 2 * g as u64 - 4),
        breakdown,
    })
}

/// Non-maximal |d| < n(g−1): proved connected for n = 2 and for d = 0;
/// conjectured (and reported UNKNOWN) otherwise.
pub fn count_sp2nr_nonmaximal(n: u32, g: u32, d: i64) -> Result<ComponentReport, CensusError> {
    if n < 1 {
        return Err(CensusError::BadRank);
    }
    if g < 2 {
        return Err(CensusError::GenusTooSmall(g));
    }
    let bound = n as i64 * (g as i64 - 1);
    if d.abs() >= bound {
        return Err(CensusError::NotNonmaximal(d, bound));
    }
    let (total, row) = if n == 2 {
        (
            Count::Known(1),
            BreakdownRow {
                label: "M_d(Sp(4,R))".into(),
                count: 1,
                provenance: "connected (proved for all |d| < 2g-2)".into(),
            },
        )
    } else if d == 0 {
        (
            Count::Known(1),
            BreakdownRow {
                label: "M_0".into(),
                count: 1,
                provenance: "M(n,0) connected".into(),
            },
        )
    } else {
        (
            Count::Unknown,
            BreakdownRow {
                label: "M_d".into(),
                count: 0,
                provenance: "conjectured 1".into(),
            },
        )
    };
    Ok(ComponentReport {
        group: GroupName::Sp2nR { n }.to_string(),
        genus: g,
        toledo: d,
        total,
        breakdown: vec![row],
    })
}

/// Which Higgs component is the maximal-rank isomorphism used for the twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CayleySide {
    Gamma,
    Beta,
}

/// The orthogonal bundle (W, q) = (V K^{∓1/2}, γ or β) at maximal Toledo.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CayleyDatum {
    pub rank: u32,
    pub degree: i64,
    pub side: CayleySide,
    pub sw1_classes: u64,
    pub sw2_classes: u64,
}

pub fn cayley_partner(n: u32, g: u32, d: i64, deg_v: i64) -> Result<CayleyDatum, CensusError> {
    if g < 2 {
        return Err(CensusError::GenusTooSmall(g));
    }
    let bound = n as i64 * (g as i64 - 1);
    if d.abs() != bound || bound == 0 {
        return Err(CensusError::NotMaximal(d, bound));
    }
    if deg_v != d {
        return Err(CensusError::DegreeMismatch(deg_v, d));
    }
    // d = +n(g−1): γ is an isomorphism, W = V⊗K^{−1/2};
    // d = −n(g−1): β is, and the twist runs through V*.
    let (side, degree) = if d > 0 {
        (CayleySide::Gamma, deg_v - bound)
    } else {
        (CayleySide::Beta, -deg_v - bound)
    };
    debug_assert_eq!(degree, 0);
    Ok(CayleyDatum {
        rank: n,
        degree,
        side,
        sw1_classes: two_pow_2g(g),
        sw2_classes: 2,
    })
}

/// σ-pair chamber data for a GL(3) type-(1,2) stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaChamber {
    pub sigma: Rational64,
    pub v: i64,
    /// Chamber i means σ ∈ (v/2 − i − 1, v/2 − i); None on a wall.
    pub chamber: Option<i64>,
    pub note: String,
}

/// σ = −d/6 + l/2 with pair-bundle degree v = d − l + 2g − 2; errors when σ
/// leaves [0, v/2]. Walls sit where v/2 ± σ is integral.
pub fn sigma_pair_map(d: i64, l: i64, g: u32) -> Result<SigmaChamber, CensusError> {
    let sigma = Rational64::new(-d, 6) + Rational64::new(l, 2);
    let v = d - l + 2 * g as i64 - 2;
    let hi = Rational64::new(v, 2);
    if sigma < Rational64::from_integer(0) || sigma > hi {
        return Err(CensusError::SigmaOutOfRange(sigma, hi));
    }
    // wall ⟺ v/2 − σ ∈ Z (equivalently v/2 + σ ∈ Z)
    let gap = hi - sigma;
    let chamber = if gap.is_integer() {
        None
    } else {
        // σ ∈ (v/2 − i − 1, v/2 − i) with i = ceil(v/2 − σ) − 1
        Some((gap.ceil()).to_integer() - 1)
    };
    Ok(SigmaChamber {
        sigma,
        v,
        chamber,
        note: "pair-bundle degree convention: v = d - l + 2g - 2".into(),
    })
}

/// Per-exponent table for the Hitchin base of Sp(2n,R).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HitchinBase {
    pub rows: Vec<(u32, i64)>,
    pub total: i64,
}

/// Hitchin-base dimension Σ_{i=1..n} h⁰(K^{2i}) with h⁰(K^p) = (2p−1)(g−1),
/// cross-checked against the moduli dimension (g−1)(2n²+n); a mismatch is an
/// internal consistency failure.
pub fn hitchin_base_dim(group: GroupName, g: u32) -> Result<HitchinBase, CensusError> {
    let GroupName::Sp2nR { n } = group else {
        return Err(CensusError::NotSp(group.to_string()));
    };
    if g < 2 {
        return Err(CensusError::GenusTooSmall(g));
    }
    let gm1 = g as i64 - 1;
    let mut rows = Vec::new();
    let mut total = 0i64;
    for i in 1..=n {
        let p = 2 * i;
        let h0 = (2 * p as i64 - 1) * gm1;
        rows.push((p, h0));
        total += h0;
    }
    let closed = gm1 * (2 * (n as i64) * (n as i64) + n as i64);
    if total != closed {
        return Err(CensusError::HitchinBaseMismatch(total, closed));
    }
    Ok(HitchinBase { rows, total })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn milnor_wood_examples() {
        assert_eq!(milnor_wood(2, 2).unwrap(), (-2, 2));
        assert_eq!(milnor_wood(3, 2).unwrap(), (-3, 3));
        assert_eq!(milnor_wood(1, 3).unwrap(), (-2, 2));
        assert!(milnor_wood(2, 1).is_err());
    }

    #[test]
    fn milnor_wood_symmetric_with_integer_count() {
        for n in 1..=6u32 {
            for g in 2..=6u32 {
                let (lo, hi) = milnor_wood(n, g).unwrap();
                assert_eq!(lo, -hi);
                let points = hi - lo + 1;
                assert_eq!(points, 2 * n as i64 * (g as i64 - 1) + 1);
            }
        }
    }

    #[test]
    fn sp2n_maximal_counts() {
        let r = count_sp2nr_maximal(3, 2).unwrap();
        assert_eq!(r.total, Count::Known(48));
        assert_eq!(r.breakdown[0].count, 32);
        assert_eq!(r.breakdown[1].count, 16);
        let r = count_sp2nr_maximal(4, 3).unwrap();
        assert_eq!(r.total, Count::Known(192));
        assert_eq!(r.breakdown[0].count, 128);
        assert_eq!(r.breakdown[1].count, 64);
        assert!(count_sp2nr_maximal(2, 2).is_err());
        for n in 3..=5u32 {
            for g in 2..=4u32 {
                let r = count_sp2nr_maximal(n, g).unwrap();
                assert_eq!(r.total, Count::Known(r.breakdown_sum()));
            }
        }
    }

    #[test]
    fn sp4_maximal_counts() {
        let r = count_sp4_maximal(2).unwrap();
        assert_eq!(r.total, Count::Known(48));
        let counts: Vec<u64> = r.breakdown.iter().map(|b| b.count).collect();
        assert_eq!(counts, vec![30, 2, 16]);
        let r = count_sp4_maximal(3).unwrap();
        assert_eq!(r.total, Count::Known(194));
        let counts: Vec<u64> = r.breakdown.iter().map(|b| b.count).collect();
        assert_eq!(counts, vec![126, 4, 64]);
        for g in 2..=8u32 {
            let r = count_sp4_maximal(g).unwrap();
            let Count::Known(total) = r.total else {
                panic!()
            };
            assert_eq!(total, r.breakdown_sum());
            assert_eq!(total - 3 * two_pow_2g(g), 2 * g as u64 - 4);
        }
    }

    #[test]
    fn nonmaximal_counts() {
        let r = count_sp2nr_nonmaximal(2, 2, 1).unwrap();
        assert_eq!(r.total, Count::Known(1));
        let r = count_sp2nr_nonmaximal(3, 2, 0).unwrap();
        assert_eq!(r.total, Count::Known(1));
        assert!(r.breakdown[0].provenance.contains("M(n,0)"));
        let r = count_sp2nr_nonmaximal(3, 2, 1).unwrap();
        assert_eq!(r.total, Count::Unknown);
        assert!(r.breakdown[0].provenance.contains("conjectured 1"));
        assert!(count_sp2nr_nonmaximal(3, 2, 3).is_err());
    }

    #[test]
    fn cayley_examples() {
        let c = cayley_partner(2, 2, 2, 2).unwrap();
        assert_eq!((c.rank, c.degree), (2, 0));
        assert_eq!(c.side, CayleySide::Gamma);
        assert_eq!(c.sw1_classes * c.sw2_classes, 2 * two_pow_2g(2));
        let c = cayley_partner(2, 2, -2, -2).unwrap();
        assert_eq!(c.side, CayleySide::Beta);
        assert_eq!(c.degree, 0);
        assert!(cayley_partner(2, 2, 1, 1).is_err());
        assert!(cayley_partner(2, 2, 2, 1).is_err());
    }

    #[test]
    fn sigma_examples() {
        // (d=1, l=1, g=2): σ = 1/3, v = 2, chamber strictly inside (0,1) → i=0
        let s = sigma_pair_map(1, 1, 2).unwrap();
        assert_eq!(s.sigma, Rational64::new(1, 3));
        assert_eq!(s.v, 2);
        assert_eq!(s.chamber, Some(0));
        // (d=1, l=2, g=2): σ = 5/6 falls outside [0, 1/2]
        assert!(matches!(
            sigma_pair_map(1, 2, 2),
            Err(CensusError::SigmaOutOfRange(_, _))
        ));
        // wall: v odd and σ = 1/2 makes v/2 − σ integral (d=3, l=2, g=2)
        let s = sigma_pair_map(3, 2, 2).unwrap();
        assert_eq!(s.sigma, Rational64::new(1, 2));
        assert_eq!(s.v, 3);
        assert_eq!(s.chamber, None);
    }

    #[test]
    fn hitchin_base_examples() {
        let b = hitchin_base_dim(GroupName::Sp2nR { n: 2 }, 2).unwrap();
        assert_eq!(b.total, 10);
        assert_eq!(b.rows, vec![(2, 3), (4, 7)]);
        let b = hitchin_base_dim(GroupName::Sp2nR { n: 3 }, 2).unwrap();
        assert_eq!(b.total, 21);
        for n in 1..=6u32 {
            for g in 2..=6u32 {
                let b = hitchin_base_dim(GroupName::Sp2nR { n }, g).unwrap();
                assert_eq!(
                    b.total,
                    (g as i64 - 1) * (2 * n as i64 * n as i64 + n as i64)
                );
            }
        }
        assert!(hitchin_base_dim(GroupName::GlC { n: 2 }, 2).is_err());
    }
}
