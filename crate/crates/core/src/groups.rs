//! Cartan data for the supported real reductive groups and the vector-bundle
//! shape of their Higgs fields.
//!
//! The supported list is closed on purpose: each group's Higgs shape and Hodge
//! combinatorics downstream are hand-checked against the Cartan tables, so
//! there is no plugin route for new groups.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cmatrix::{CMat, C64};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("unsupported group identifier: {0}")]
    Unsupported(String),
    #[error("group parameter out of range: {0}")]
    BadParameter(String),
    #[error("square matrix input required")]
    NotSquare,
}

/// Supported group identifiers with their integer parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GroupName {
    /// GL(n,C) viewed as a real group.
    GlC { n: u32 },
    /// SL(n,C) viewed as a real group.
    SlC { n: u32 },
    /// The split real form SL(n,R).
    SlR { n: u32 },
    /// The split Hermitian form Sp(2n,R).
    Sp2nR { n: u32 },
    /// The Hermitian form U(p,q).
    UPQ { p: u32, q: u32 },
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupName::GlC { n } => write!(f, "gl({n})"),
            GroupName::SlC { n } => write!(f, "sl({n})"),
            GroupName::SlR { n } => write!(f, "sl({n},R)"),
            GroupName::Sp2nR { n } => write!(f, "sp({},R)", 2 * n),
            GroupName::UPQ { p, q } => write!(f, "u({p},{q})"),
        }
    }
}

/// Parse CLI/config identifiers: `gl(n)`, `sl(n)`, `sl(n,R)`, `sp(2n,R)`,
/// `u(p,q)`. Literal parameter letters (`n`, `2n`, `p`, `q`) draw from the
/// explicit `--n/--p/--q` values.
pub fn parse_group(
    s: &str,
    n_flag: Option<u32>,
    p_flag: Option<u32>,
    q_flag: Option<u32>,
) -> Result<GroupName, GroupError> {
    let t = s.trim().to_lowercase().replace(' ', "");
    let inner = |prefix: &str| -> Option<String> {
        t.strip_prefix(prefix)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
            .map(|r| r.to_string())
    };
    let need_n = |tok: &str| -> Result<u32, GroupError> {
        if tok == "n" {
            n_flag.ok_or_else(|| GroupError::BadParameter("--n required for symbolic n".into()))
        } else {
            tok.parse::<u32>()
                .map_err(|_| GroupError::BadParameter(format!("bad integer {tok:?}")))
        }
    };
    if let Some(args) = inner("sp") {
        let body = args
            .strip_suffix(",r")
            .ok_or_else(|| GroupError::Unsupported(s.to_string()))?;
        let n = if body == "2n" {
            n_flag.ok_or_else(|| GroupError::BadParameter("--n required for sp(2n,R)".into()))?
        } else {
            let two_n = need_n(body)?;
            if two_n == 0 || two_n % 2 != 0 {
                return Err(GroupError::BadParameter(format!(
                    "sp needs a positive even matrix size, got {two_n}"
                )));
            }
            two_n / 2
        };
        if n == 0 {
            return Err(GroupError::BadParameter("sp(2n,R) needs n >= 1".into()));
        }
        return Ok(GroupName::Sp2nR { n });
    }
    if let Some(args) = inner("gl") {
        let n = need_n(&args)?;
        if n == 0 {
            return Err(GroupError::BadParameter("gl(n) needs n >= 1".into()));
        }
        return Ok(GroupName::GlC { n });
    }
    if let Some(args) = inner("sl") {
        if let Some(body) = args.strip_suffix(",r") {
            let n = need_n(body)?;
            if n == 0 {
                return Err(GroupError::BadParameter("sl(n,R) needs n >= 1".into()));
            }
            return Ok(GroupName::SlR { n });
        }
        let n = need_n(&args)?;
        if n == 0 {
            return Err(GroupError::BadParameter("sl(n) needs n >= 1".into()));
        }
        return Ok(GroupName::SlC { n });
    }
    if let Some(args) = inner("u") {
        let mut it = args.split(',');
        let ptok = it.next().unwrap_or("");
        let qtok = it.next().unwrap_or("");
        if it.next().is_some() {
            return Err(GroupError::Unsupported(s.to_string()));
        }
        let p = if ptok == "p" {
            p_flag.ok_or_else(|| GroupError::BadParameter("--p required".into()))?
        } else {
            need_n(ptok)?
        };
        let q = if qtok == "q" {
            q_flag.ok_or_else(|| GroupError::BadParameter("--q required".into()))?
        } else {
            need_n(qtok)?
        };
        if p == 0 || q == 0 {
            return Err(GroupError::BadParameter("u(p,q) needs p,q >= 1".into()));
        }
        return Ok(GroupName::UPQ { p, q });
    }
    Err(GroupError::Unsupported(s.to_string()))
}

/// Symmetry constraint on a Higgs component map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Symmetry {
    None,
    Symmetric,
    SymmetricTraceless,
}

/// One bundle-map component of the Higgs field, per the Cartan table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HiggsComponent {
    pub tag: char,
    pub source: String,
    pub target: String,
    pub symmetry: Symmetry,
    /// Every component is twisted by the canonical bundle K.
    pub k_twist: bool,
}

/// Cartan datum: maximal compact, its complexification, and the isotropy
/// representation shape (with `isotropy_dim` = dim_C m^C).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupDatum {
    pub name: GroupName,
    pub maximal_compact: String,
    pub complexified_compact: String,
    pub isotropy_dim: u64,
    pub higgs_shape: Vec<HiggsComponent>,
}

impl GroupDatum {
    /// Rank of the standard bundle V (for U(p,q): rank of V1 ⊕ V2).
    pub fn standard_rank(&self) -> u32 {
        match self.name {
            GroupName::GlC { n } | GroupName::SlC { n } | GroupName::SlR { n } => n,
            GroupName::Sp2nR { n } => n,
            GroupName::UPQ { p, q } => p + q,
        }
    }
}

/// Populate the Cartan datum for a supported group.
pub fn group_datum(name: GroupName) -> Result<GroupDatum, GroupError> {
    let comp = |tag, source: &str, target: &str, symmetry| HiggsComponent {
        tag,
        source: source.to_string(),
        target: target.to_string(),
        symmetry,
        k_twist: true,
    };
    let datum = match name {
        GroupName::GlC { n } => GroupDatum {
            name,
            maximal_compact: format!("U({n})"),
            complexified_compact: format!("GL({n},C)"),
            isotropy_dim: (n as u64) * (n as u64),
            higgs_shape: vec![comp('φ', "V", "V", Symmetry::None)],
        },
        GroupName::SlC { n } => GroupDatum {
            name,
            maximal_compact: format!("SU({n})"),
            complexified_compact: format!("SL({n},C)"),
            isotropy_dim: (n as u64) * (n as u64) - 1,
            higgs_shape: vec![comp('φ', "V", "V", Symmetry::SymmetricTraceless)],
        },
        GroupName::SlR { n } => GroupDatum {
            name,
            maximal_compact: format!("SO({n})"),
            complexified_compact: format!("SO({n},C)"),
            isotropy_dim: (n as u64) * (n as u64 + 1) / 2 - 1,
            higgs_shape: vec![comp('φ', "V", "V", Symmetry::SymmetricTraceless)],
        },
        GroupName::Sp2nR { n } => GroupDatum {
            name,
            maximal_compact: format!("U({n})"),
            complexified_compact: format!("GL({n},C)"),
            isotropy_dim: (n as u64) * (n as u64 + 1),
            higgs_shape: vec![
                comp('β', "V*", "V", Symmetry::Symmetric),
                comp('γ', "V", "V*", Symmetry::Symmetric),
            ],
        },
        GroupName::UPQ { p, q } => GroupDatum {
            name,
            maximal_compact: format!("U({p})xU({q})"),
            complexified_compact: format!("GL({p},C)xGL({q},C)"),
            isotropy_dim: 2 * (p as u64) * (q as u64),
            higgs_shape: vec![
                comp('β', "V1", "V2", Symmetry::None),
                comp('γ', "V2", "V1", Symmetry::None),
            ],
        },
    };
    Ok(datum)
}

/// The compact conjugation τ and the Cartan involution θ both act on the
/// standard representation as u ↦ −u*.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Involution {
    CompactConjugationTau,
    CartanTheta,
}

pub fn apply_involution(_inv: Involution, field: &CMat) -> Result<CMat, GroupError> {
    if field.d.len() != field.n * field.n {
        return Err(GroupError::NotSquare);
    }
    Ok(-&field.adjoint())
}

/// Trace form B(u,v) = tr(uv), proportional to the Killing form on the simple
/// factors in play.
pub fn b_form(u: &CMat, v: &CMat) -> C64 {
    (u * v).trace()
}

/// B_τ(u,v) = −B(u, τ(v)) = tr(u v†): positive definite Hermitian pairing.
pub fn b_tau(u: &CMat, v: &CMat) -> C64 {
    (u * &v.adjoint()).trace()
}
