//! Cohomology calculus on a smooth closed genus-g curve.
//!
//! Riemann-Roch Euler characteristics, line-bundle section counts (with the
//! non-constant special range 0 ≤ d ≤ 2g−2 returned as an interval), and the
//! Poincaré polynomials of Jacobians and symmetric products.

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::algebra::{poly_add, poly_mul, Polynomial};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CurveError {
    #[error("rank must be >= 1")]
    ZeroRank,
    #[error("the {0} flag needs degree {1}, got {2}")]
    SpecialDegree(&'static str, i64, i64),
    #[error("genus >= 2 required for moduli enumeration, got {0}")]
    GenusTooSmall(u32),
}

/// A smooth closed curve of genus g. Genus ≥ 2 is required by the enumeration
/// modules; the flow module's torus uses g = 1; the Jacobian of a g = 0 curve
/// is a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveContext {
    genus: u32,
}

impl CurveContext {
    pub fn new(genus: u32) -> Self {
        CurveContext { genus }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// deg K = 2g − 2.
    pub fn canonical_degree(&self) -> i64 {
        2 * self.genus as i64 - 2
    }

    pub fn require_enumeration_genus(&self) -> Result<(), CurveError> {
        if self.genus < 2 {
            Err(CurveError::GenusTooSmall(self.genus))
        } else {
            Ok(())
        }
    }
}

/// h⁰ of a line bundle: exact where Riemann-Roch decides it, an interval
/// (lower ≤ generic ≤ upper) in the special range where it is not constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectionCount {
    pub lower: u64,
    pub generic: u64,
    pub upper: u64,
}

impl SectionCount {
    fn exact(v: u64) -> Self {
        SectionCount {
            lower: v,
            generic: v,
            upper: v,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    /// Interval translate by a non-negative base offset.
    pub fn offset(&self, base: u64) -> SectionCount {
        SectionCount {
            lower: self.lower + base,
            generic: self.generic + base,
            upper: self.upper + base,
        }
    }
}

/// Named special line bundles inside the 0 ≤ d ≤ 2g−2 window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineBundleKind {
    Generic,
    Trivial,
    Canonical,
}

/// χ(E) = deg + rank·(1 − g).
pub fn chi_bundle(ctx: &CurveContext, rank: u32, degree: i64) -> Result<i64, CurveError> {
    if rank == 0 {
        return Err(CurveError::ZeroRank);
    }
    Ok(degree + rank as i64 * (1 - ctx.genus() as i64))
}

/// Section count of a generic line bundle of the given degree.
pub fn h0_line_bundle(ctx: &CurveContext, degree: i64) -> SectionCount {
    h0_line_bundle_kind(ctx, degree, LineBundleKind::Generic)
        .expect("generic kind has no degree constraint")
}

/// Section count with the trivial/canonical special points selectable.
pub fn h0_line_bundle_kind(
    ctx: &CurveContext,
    degree: i64,
    kind: LineBundleKind,
) -> Result<SectionCount, CurveError> {
    let g = ctx.genus() as i64;
    let kmax = 2 * g - 2;
    match kind {
        LineBundleKind::Trivial => {
            if degree != 0 {
                return Err(CurveError::SpecialDegree("trivial", 0, degree));
            }
            return Ok(SectionCount::exact(1));
        }
        LineBundleKind::Canonical => {
            if degree != kmax {
                return Err(CurveError::SpecialDegree("canonical", kmax, degree));
            }
            return Ok(SectionCount::exact(g as u64));
        }
        LineBundleKind::Generic => {}
    }
    if degree < 0 {
        Ok(SectionCount::exact(0))
    } else if degree > kmax {
        Ok(SectionCount::exact((degree - g + 1) as u64))
    } else {
        // Special range: generic value by Riemann-Roch with h¹ generic,
        // Clifford bound on top.
        let generic = (degree - g + 1).max(0) as u64;
        Ok(SectionCount {
            lower: generic,
            generic,
            upper: (degree / 2 + 1) as u64,
        })
    }
}

/// P_t(Jac X) = (1+t)^{2g}.
pub fn jacobian_poincare(ctx: &CurveContext) -> Polynomial {
    Polynomial::from_i64(&[1, 1]).pow(2 * ctx.genus())
}

/// P_t(S^m X) extracted as the q^m coefficient of the generating series
/// (1+qt)^{2g} / ((1−q)(1−q t²)), computed by convolving the three q-series
/// with polynomial coefficients.
pub fn sym_product_poincare(ctx: &CurveContext, m: usize) -> Polynomial {
    let two_g = 2 * ctx.genus();
    // (1+qt)^{2g}: q^a coefficient is C(2g,a) t^a.
    let mut binom: Vec<Polynomial> = Vec::with_capacity(m + 1);
    let mut c = BigInt::one();
    for a in 0..=m {
        if a > two_g as usize {
            binom.push(Polynomial::zero());
            continue;
        }
        binom.push(Polynomial::monomial(c.clone(), a));
        c = c * BigInt::from(two_g as i64 - a as i64) / BigInt::from(a as i64 + 1);
    }
    // 1/(1−q): q^b coefficient 1. 1/(1−qt²): q^c coefficient t^{2c}.
    // Convolve: q^m coefficient of the product.
    let mut out = Polynomial::zero();
    for (a, pa) in binom.iter().enumerate() {
        if pa.is_zero() {
            continue;
        }
        for cc in 0..=(m - a) {
            // b = m - a - cc contributes the constant 1
            let term = poly_mul(pa, &Polynomial::monomial(BigInt::one(), 2 * cc));
            out = poly_add(&out, &term);
        }
    }
    out
}
