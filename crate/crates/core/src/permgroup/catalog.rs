//! Named groups and the plain-text group input format.
//!
//! ```text
//! # comment lines start with '#'
//! degree: 4
//! gen: (1,2,3)
//! gen: (1,2)(3,4)
//! ```
//!
//! or a single `name: <catalog-id>` line.

use super::PermutationGroup;
use crate::error::{Error, Result};
use crate::perm::Permutation;

pub const CATALOG_IDS: &[&str] = &[
    "trivial",
    "Cn:<n>",
    "D2n:<n>",
    "Q8",
    "A4",
    "S4",
    "SL2_3",
    "A5",
    "extraspecial_27_exp3",
    "Qd3",
];

/// A parsed group together with the catalog id it came from, if any.
#[derive(Clone, Debug)]
pub struct GroupInput {
    pub group: PermutationGroup,
    pub catalog_id: Option<String>,
}

fn cyc(n: usize, s: &str) -> Permutation {
    Permutation::parse_cycles(n, s).expect("catalog permutation")
}

/// A 2x2 matrix over F_p, row-major.
pub(crate) type Mat2 = [[u64; 2]; 2];

/// Point index (0-based) of the vector `(x, y)` in F_p^2.
fn affine_point(p: u64, x: u64, y: u64) -> u32 {
    (x + p * y) as u32
}

/// Permutation of F_p^2 (p^2 points) given by `v -> m v + t`.
pub(crate) fn affine_map(p: u64, m: Mat2, t: [u64; 2]) -> Permutation {
    let mut images = vec![0u32; (p * p) as usize];
    for y in 0..p {
        for x in 0..p {
            let nx = (m[0][0] * x + m[0][1] * y + t[0]) % p;
            let ny = (m[1][0] * x + m[1][1] * y + t[1]) % p;
            images[affine_point(p, x, y) as usize] = affine_point(p, nx, ny);
        }
    }
    Permutation::from_images(images).expect("invertible affine map")
}

/// Linear action of matrices on the `p^2 - 1` nonzero vectors of F_p^2.
fn linear_on_nonzero(p: u64, mats: &[Mat2]) -> PermutationGroup {
    let n = (p * p - 1) as usize;
    let label = |x: u64, y: u64| (x + p * y - 1) as u32;
    let gens = mats
        .iter()
        .map(|m| {
            let mut images = vec![0u32; n];
            for y in 0..p {
                for x in 0..p {
                    if x == 0 && y == 0 {
                        continue;
                    }
                    let nx = (m[0][0] * x + m[0][1] * y) % p;
                    let ny = (m[1][0] * x + m[1][1] * y) % p;
                    images[label(x, y) as usize] = label(nx, ny);
                }
            }
            Permutation::from_images(images).expect("invertible matrix")
        })
        .collect();
    PermutationGroup::new(n, gens).expect("positive degree")
}

pub(crate) const TRANSVECTION_UPPER: Mat2 = [[1, 1], [0, 1]];
pub(crate) const TRANSVECTION_LOWER: Mat2 = [[1, 0], [1, 1]];
const IDENTITY: Mat2 = [[1, 0], [0, 1]];

/// `(Z/p)^2 ⋊ SL_2(p)` on the p^2 points of F_p^2: the two unit
/// translations and the two elementary transvections.
pub(crate) fn affine_special_linear(p: u64) -> PermutationGroup {
    let gens = vec![
        affine_map(p, IDENTITY, [1, 0]),
        affine_map(p, IDENTITY, [0, 1]),
        affine_map(p, TRANSVECTION_UPPER, [0, 0]),
        affine_map(p, TRANSVECTION_LOWER, [0, 0]),
    ];
    PermutationGroup::new((p * p) as usize, gens).expect("positive degree")
}

pub fn cyclic(n: usize) -> Result<PermutationGroup> {
    if n == 0 {
        return Err(Error::InvalidArgument("cyclic group of order 0".into()));
    }
    if n == 1 {
        return Ok(PermutationGroup::trivial(1));
    }
    let points: Vec<usize> = (1..=n).collect();
    PermutationGroup::new(n, vec![Permutation::from_cycles(n, &[points])?])
}

/// Dihedral group of order `2n`.
pub fn dihedral(n: usize) -> Result<PermutationGroup> {
    match n {
        0 => Err(Error::InvalidArgument("dihedral group of order 0".into())),
        1 => PermutationGroup::new(2, vec![cyc(2, "(1,2)")]),
        2 => PermutationGroup::new(4, vec![cyc(4, "(1,2)"), cyc(4, "(3,4)")]),
        _ => {
            let rotation = Permutation::from_cycles(n, &[(1..=n).collect()])?;
            let reflection: Vec<Vec<usize>> = (2..=n)
                .map(|i| (i, n + 2 - i))
                .filter(|(a, b)| a < b)
                .map(|(a, b)| vec![a, b])
                .collect();
            let reflection = Permutation::from_cycles(n, &reflection)?;
            PermutationGroup::new(n, vec![rotation, reflection])
        }
    }
}

/// Looks up a catalog id such as `A4`, `Cn:6` or `D2n:5`.
pub fn catalog_group(id: &str) -> Result<PermutationGroup> {
    let parse_n = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::UnknownCatalogId(id.to_string()))
    };
    if let Some(n) = id.strip_prefix("Cn:") {
        return cyclic(parse_n(n)?);
    }
    if let Some(n) = id.strip_prefix("D2n:") {
        return dihedral(parse_n(n)?);
    }
    match id {
        "trivial" => Ok(PermutationGroup::trivial(1)),
        "Q8" => PermutationGroup::new(8, vec![cyc(8, "(1,2,3,4)(5,6,7,8)"), cyc(8, "(1,5,3,7)(2,8,4,6)")]),
        "A4" => PermutationGroup::new(4, vec![cyc(4, "(1,2,3)"), cyc(4, "(1,2)(3,4)")]),
        "S4" => PermutationGroup::new(4, vec![cyc(4, "(1,2,3,4)"), cyc(4, "(1,2)")]),
        "A5" => PermutationGroup::new(5, vec![cyc(5, "(1,2,3,4,5)"), cyc(5, "(1,2,3)")]),
        "SL2_3" => Ok(linear_on_nonzero(3, &[TRANSVECTION_UPPER, TRANSVECTION_LOWER])),
        "extraspecial_27_exp3" => PermutationGroup::new(
            9,
            vec![
                affine_map(3, IDENTITY, [1, 0]),
                affine_map(3, IDENTITY, [0, 1]),
                affine_map(3, TRANSVECTION_UPPER, [0, 0]),
            ],
        ),
        "Qd3" => Ok(affine_special_linear(3)),
        _ => Err(Error::UnknownCatalogId(id.to_string())),
    }
}

/// Parses the group text format. Whitespace inside lines is ignored.
pub fn parse_group_text(text: &str) -> Result<GroupInput> {
    let mut degree: Option<usize> = None;
    let mut gens: Vec<String> = Vec::new();
    let mut name: Option<String> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `key: value`", lineno + 1)))?;
        match key {
            "degree" => {
                if degree.is_some() {
                    return Err(Error::Parse(format!("line {}: duplicate degree", lineno + 1)));
                }
                let d = value
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {}: bad degree `{value}`", lineno + 1)))?;
                degree = Some(d);
            }
            "gen" => gens.push(value.to_string()),
            "name" => {
                if name.is_some() {
                    return Err(Error::Parse(format!("line {}: duplicate name", lineno + 1)));
                }
                name = Some(value.to_string());
            }
            other => {
                return Err(Error::Parse(format!("line {}: unknown key `{other}`", lineno + 1)));
            }
        }
    }
    match (name, degree) {
        (Some(id), None) if gens.is_empty() => Ok(GroupInput {
            group: catalog_group(&id)?,
            catalog_id: Some(id),
        }),
        (Some(_), _) => Err(Error::Parse("`name` cannot be combined with `degree`/`gen`".into())),
        (None, None) => Err(Error::Parse("missing `degree`".into())),
        (None, Some(d)) => {
            let perms = gens
                .iter()
                .map(|g| Permutation::parse_cycles(d, g))
                .collect::<Result<Vec<_>>>()?;
            Ok(GroupInput {
                group: PermutationGroup::new(d, perms)?,
                catalog_id: None,
            })
        }
    }
}
