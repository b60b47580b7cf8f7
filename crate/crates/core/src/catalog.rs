//! Named metric Lie algebras. All default metrics are the identity in the
//! listed basis; brackets below are written 1-based as in the usual notation.
//!
//! | name            | brackets                                              |
//! |-----------------|-------------------------------------------------------|
//! | `abelian<n>`    | none                                                  |
//! | `heis3`         | `[e1,e2]=e3`                                          |
//! | `heis5`         | `[e1,e2]=e5, [e3,e4]=e5`                              |
//! | `heis3+r`       | `heis3 ⊕ R`, the extra direction central             |
//! | `nil4`          | `[e1,e2]=e3, [e1,e3]=e4`                              |
//! | `qheis7`        | quaternionic Heisenberg, `v = H`, `z = Im H`         |
//! | `sol3`          | `[e3,e1]=e1, [e3,e2]=-e2`                             |
//! | `sl2r`          | `[h,e]=2e, [h,f]=-2f, [e,f]=h` with `(h,e,f)=(e1,e2,e3)` |
//! | `e2`            | `[e3,e1]=e2, [e3,e2]=-e1`                             |
//! | `milnor(a,b,c,d)` | `[e1,e2]=a e2 + b e3, [e1,e3]=c e2 + d e3`          |

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::metric::MetricLieAlgebra;

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub algebra: MetricLieAlgebra,
}

/// Largest `n` accepted for `abelian<n>`.
pub const MAX_ABELIAN_DIM: usize = 16;

/// Names of the shipped entries, in catalog order.
pub const SHIPPED: [&str; 14] = [
    "abelian2",
    "abelian3",
    "abelian4",
    "heis3",
    "heis5",
    "heis3+r",
    "nil4",
    "qheis7",
    "sol3",
    "sl2r",
    "e2",
    "milnor(1,0,0,1)",
    "milnor(1,0,0,2)",
    "milnor(1,1,-1,1)",
];

fn build(dim: usize, brackets: &[(usize, usize, usize, f64)]) -> MetricLieAlgebra {
    // 1-based in the tables above, 0-based in storage.
    let entries: Vec<_> = brackets.iter().map(|&(i, j, k, v)| (i - 1, j - 1, k - 1, v)).collect();
    MetricLieAlgebra::with_identity(LieAlgebra::from_brackets(dim, &entries).expect("catalog entry is well formed"))
}

pub fn heis3() -> MetricLieAlgebra {
    build(3, &[(1, 2, 3, 1.0)])
}

pub fn heis5() -> MetricLieAlgebra {
    build(5, &[(1, 2, 5, 1.0), (3, 4, 5, 1.0)])
}

pub fn nil4() -> MetricLieAlgebra {
    build(4, &[(1, 2, 3, 1.0), (1, 3, 4, 1.0)])
}

pub fn sol3() -> MetricLieAlgebra {
    build(3, &[(3, 1, 1, 1.0), (3, 2, 2, -1.0)])
}

pub fn sl2r() -> MetricLieAlgebra {
    build(3, &[(1, 2, 2, 2.0), (1, 3, 3, -2.0), (2, 3, 1, 1.0)])
}

pub fn e2() -> MetricLieAlgebra {
    build(3, &[(3, 1, 2, 1.0), (3, 2, 1, -1.0)])
}

pub fn abelian(n: usize) -> MetricLieAlgebra {
    MetricLieAlgebra::with_identity(LieAlgebra::abelian(n))
}

pub fn heis3_plus_line() -> MetricLieAlgebra {
    heis3().direct_sum(&abelian(1))
}

pub fn milnor(alpha: f64, beta: f64, gamma: f64, delta: f64) -> MetricLieAlgebra {
    build(
        3,
        &[(1, 2, 2, alpha), (1, 2, 3, beta), (1, 3, 2, gamma), (1, 3, 3, delta)],
    )
}

/// `v = span(e1..e4) ≅ H` with basis `(1, i, j, k)`, `z = span(e5, e6, e7) ≅ Im H`,
/// and `[x, y] = sum_a <L_a x, y> z_a` with `L_a` left multiplication by `i, j, k`.
pub fn quaternionic_heisenberg() -> MetricLieAlgebra {
    // Columns of left multiplication: (source index, target index, sign).
    let left_mult: [[(usize, usize, f64); 4]; 3] = [
        [(1, 2, 1.0), (2, 1, -1.0), (3, 4, 1.0), (4, 3, -1.0)],
        [(1, 3, 1.0), (2, 4, -1.0), (3, 1, -1.0), (4, 2, 1.0)],
        [(1, 4, 1.0), (2, 3, 1.0), (3, 2, -1.0), (4, 1, -1.0)],
    ];
    let mut brackets = Vec::new();
    for (a, cols) in left_mult.iter().enumerate() {
        for &(b, c, sign) in cols {
            // <L_a v_b, v_c> = sign; record once per unordered pair.
            if b < c {
                brackets.push((b, c, 5 + a, sign));
            }
        }
    }
    build(7, &brackets)
}

fn parse_milnor(args: &str) -> Option<MetricLieAlgebra> {
    let inner = args.strip_prefix('(')?.strip_suffix(')')?;
    let vals: Vec<f64> = inner
        .split(',')
        .map(|s| s.trim().parse::<f64>().ok())
        .collect::<Option<_>>()?;
    match vals.as_slice() {
        &[a, b, c, d] => Some(milnor(a, b, c, d)),
        _ => None,
    }
}

fn parse_abelian(rest: &str) -> Option<MetricLieAlgebra> {
    let digits = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
    let n: usize = digits.trim().parse().ok()?;
    (1..=MAX_ABELIAN_DIM).contains(&n).then(|| abelian(n))
}

/// Resolves a catalog name, including the parametrised `abelian<n>` and `milnor(a,b,c,d)`.
pub fn lookup(name: &str) -> Result<MetricLieAlgebra> {
    let key = name.trim();
    let found = match key {
        "heis3" | "nil3" => Some(heis3()),
        "heis5" => Some(heis5()),
        "heis3+r" => Some(heis3_plus_line()),
        "nil4" => Some(nil4()),
        "qheis7" => Some(quaternionic_heisenberg()),
        "sol3" => Some(sol3()),
        "sl2r" => Some(sl2r()),
        "e2" => Some(e2()),
        _ => {
            if let Some(rest) = key.strip_prefix("milnor") {
                parse_milnor(rest)
            } else if let Some(rest) = key.strip_prefix("abelian") {
                parse_abelian(rest)
            } else {
                None
            }
        }
    };
    found.ok_or_else(|| Error::UnknownAlgebra {
        name: key.to_string(),
        valid: format!(
            "{}, abelian<n> (n <= {MAX_ABELIAN_DIM}), milnor(a,b,c,d)",
            SHIPPED.join(", ")
        ),
    })
}

/// The shipped catalog, in fixed order.
pub fn catalog() -> Vec<CatalogEntry> {
    SHIPPED
        .iter()
        .map(|&name| CatalogEntry {
            name: name.to_string(),
            algebra: lookup(name).expect("shipped names resolve"),
        })
        .collect()
}
