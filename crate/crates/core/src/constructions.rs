//! Explicit code families in `C_n(1,d)`, `C_n(1,d-1,d)`, `C_n(1,d-1,d,d+1)`,
//! `C_n(1,3)`, `C_{2k+1}(1,4)` and `C_{2k}(1,k)`.
//!
//! Every constructor checks its family's side conditions eagerly and names the
//! first violated one. The claimed size is computed from the family's
//! cardinality formula, independently of the code that gets built.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::bounds::{antipodal_sid_value, c13_sid_value};
use crate::circulant::{CirculantGraph, Code, Shape};
use crate::error::{Error, Result};
use crate::verifier::CodeKind;

/// Base block of the mod-40 identifying family in `C_n(1,d)`.
pub const B1: [usize; 14] = [0, 1, 2, 8, 10, 12, 16, 18, 22, 24, 26, 32, 33, 34];
/// Base block of the mod-20 identifying family in `C_n(1,d)`.
pub const B2: [usize; 7] = [0, 2, 8, 9, 11, 12, 18];
/// Base block of the mod-20 locating-dominating family in `C_n(1,d)`.
pub const B3: [usize; 6] = [0, 4, 7, 11, 14, 17];
/// Base block of the mod-57 locating-dominating family in `C_n(1,d-1,d)`.
pub const B57: [usize; 13] = [0, 2, 4, 6, 15, 18, 27, 29, 31, 33, 43, 45, 47];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyId {
    IdSquareMod40,
    IdSquareMod20,
    LdSquareMod20,
    LdTriMod57,
    IdTri6d,
    LdKingMod10,
    IdKingAppendix,
    SidSquareEven,
    SidTriEven,
    SidKingMod3,
    SidC13Optimal,
    SidC14Odd,
    SidAntipodal,
}

/// Which of `n`, `d`, `k` a family is parameterised by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signature {
    NAndD,
    DOnly,
    NOnly,
    KOnly,
}

impl FamilyId {
    pub const ALL: [FamilyId; 13] = [
        FamilyId::IdSquareMod40,
        FamilyId::IdSquareMod20,
        FamilyId::LdSquareMod20,
        FamilyId::LdTriMod57,
        FamilyId::IdTri6d,
        FamilyId::LdKingMod10,
        FamilyId::IdKingAppendix,
        FamilyId::SidSquareEven,
        FamilyId::SidTriEven,
        FamilyId::SidKingMod3,
        FamilyId::SidC13Optimal,
        FamilyId::SidC14Odd,
        FamilyId::SidAntipodal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::IdSquareMod40 => "id_square_mod40",
            FamilyId::IdSquareMod20 => "id_square_mod20",
            FamilyId::LdSquareMod20 => "ld_square_mod20",
            FamilyId::LdTriMod57 => "ld_tri_mod57",
            FamilyId::IdTri6d => "id_tri_6d",
            FamilyId::LdKingMod10 => "ld_king_mod10",
            FamilyId::IdKingAppendix => "id_king_appendix",
            FamilyId::SidSquareEven => "sid_square_even",
            FamilyId::SidTriEven => "sid_tri_even",
            FamilyId::SidKingMod3 => "sid_king_mod3",
            FamilyId::SidC13Optimal => "sid_c13_optimal",
            FamilyId::SidC14Odd => "sid_c14_odd",
            FamilyId::SidAntipodal => "sid_antipodal",
        }
    }

    pub fn kind(self) -> CodeKind {
        match self {
            FamilyId::IdSquareMod40
            | FamilyId::IdSquareMod20
            | FamilyId::IdTri6d
            | FamilyId::IdKingAppendix => CodeKind::Id,
            FamilyId::LdSquareMod20 | FamilyId::LdTriMod57 | FamilyId::LdKingMod10 => CodeKind::Ld,
            _ => CodeKind::Sid,
        }
    }

    pub fn signature(self) -> Signature {
        match self {
            FamilyId::IdTri6d | FamilyId::IdKingAppendix => Signature::DOnly,
            FamilyId::SidC13Optimal | FamilyId::SidC14Odd => Signature::NOnly,
            FamilyId::SidAntipodal => Signature::KOnly,
            _ => Signature::NAndD,
        }
    }

    /// Whether the family's size equals a matching lower bound, i.e. the
    /// construction is optimal.
    pub fn is_optimal_family(self) -> bool {
        !matches!(self, FamilyId::IdTri6d | FamilyId::IdKingAppendix)
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownName { what: "family", name: s.to_string() })
    }
}

impl Serialize for FamilyId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructionResult {
    pub family: FamilyId,
    pub graph: CirculantGraph,
    #[serde(serialize_with = "ser_code")]
    pub code: Code,
    pub kind: CodeKind,
    pub claimed_size: usize,
}

fn ser_code<S: Serializer>(c: &Code, s: S) -> std::result::Result<S::Ok, S::Error> {
    c.to_vec().serialize(s)
}

/// Parameters for [`construct`]; which fields are read depends on the family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FamilyParams {
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub k: Option<usize>,
}

fn require(family: FamilyId, ok: bool, condition: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::NotApplicable {
            family: family.name(),
            condition: condition(),
        })
    }
}

fn missing(family: FamilyId, what: &str) -> Error {
    Error::NotApplicable {
        family: family.name(),
        condition: format!("parameter {what} is required"),
    }
}

fn graph(family: FamilyId, n: usize, gens: &[i64]) -> Result<CirculantGraph> {
    CirculantGraph::new(n, gens).map_err(|e| Error::NotApplicable {
        family: family.name(),
        condition: e.to_string(),
    })
}

fn result(
    family: FamilyId,
    graph: CirculantGraph,
    code: Code,
    claimed_size: usize,
) -> ConstructionResult {
    ConstructionResult {
        family,
        graph,
        code,
        kind: family.kind(),
        claimed_size,
    }
}

/// `{u ∈ Z_n : u mod period ∈ residues}`.
pub fn periodic_code(n: usize, period: usize, residues: &[usize]) -> Result<Code> {
    Code::periodic(n, period, residues)
}

fn congruent(family: FamilyId, name: &str, value: usize, r: usize, m: usize) -> Result<()> {
    require(family, value % m == r, || {
        format!("{name} ≡ {r} (mod {m}) fails for {name} = {value}")
    })
}

fn square_mod(
    family: FamilyId,
    n: usize,
    d: usize,
    (n_mod, d_res, d_mod): (usize, usize, usize),
    base: &[usize],
    claimed: usize,
) -> Result<ConstructionResult> {
    congruent(family, "n", n, 0, n_mod)?;
    congruent(family, "d", d, d_res, d_mod)?;
    require(family, d < n, || format!("d < n fails for n = {n}, d = {d}"))?;
    // d and n - d give the same graph
    let folded = d.min(n - d);
    let g = graph(family, n, &[1, folded as i64])?;
    Ok(result(family, g, periodic_code(n, n_mod, base)?, claimed))
}

/// Identifying code of size `7n/20` in `C_n(1,d)`, `n ≡ 0 (mod 40)`, `d ≡ 4 (mod 40)`.
pub fn id_square_mod40(n: usize, d: usize) -> Result<ConstructionResult> {
    square_mod(FamilyId::IdSquareMod40, n, d, (40, 4, 40), &B1, 7 * n / 20)
}

/// Identifying code of size `7n/20` in `C_n(1,d)`, `n ≡ 0 (mod 20)`, `d ≡ 6 (mod 20)`.
pub fn id_square_mod20(n: usize, d: usize) -> Result<ConstructionResult> {
    square_mod(FamilyId::IdSquareMod20, n, d, (20, 6, 20), &B2, 7 * n / 20)
}

/// Locating-dominating code of size `3n/10` in `C_n(1,d)`, `n ≡ 0 (mod 20)`, `d ≡ 5 (mod 20)`.
pub fn ld_square_mod20(n: usize, d: usize) -> Result<ConstructionResult> {
    square_mod(FamilyId::LdSquareMod20, n, d, (20, 5, 20), &B3, 3 * n / 10)
}

/// Locating-dominating code of size `13n/57` in `C_n(1,d-1,d)`.
pub fn ld_tri_mod57(n: usize, d: usize) -> Result<ConstructionResult> {
    let f = FamilyId::LdTriMod57;
    congruent(f, "d", d, 8, 57)?;
    require(f, d >= 8, || format!("d ≥ 8 fails for d = {d}"))?;
    require(f, n >= 2 * d, || format!("n ≥ 2d fails for n = {n}, d = {d}"))?;
    congruent(f, "n", n, 0, 57)?;
    let g = graph(f, n, &Shape::Triangular { d }.gens())?;
    Ok(result(f, g, periodic_code(n, 57, &B57)?, 13 * n / 57))
}

/// Identifying code in `C_{6d}(1,d-1,d)` for even `d ≥ 6`, of size `3(d/2+1)`.
pub fn id_tri_6d(d: usize) -> Result<ConstructionResult> {
    let f = FamilyId::IdTri6d;
    require(f, d % 2 == 0, || format!("d even fails for d = {d}"))?;
    require(f, d >= 6, || format!("d ≥ 6 fails for d = {d}"))?;
    let n = 6 * d;
    let residues: Vec<usize> = (0..=d).step_by(2).collect();
    let g = graph(f, n, &Shape::Triangular { d }.gens())?;
    Ok(result(f, g, periodic_code(n, 2 * d, &residues)?, 3 * (d / 2 + 1)))
}

/// Locating-dominating code `{v ≡ 0, 4 (mod 10)}` of size `n/5` in `C_n(1,d-1,d,d+1)`.
pub fn ld_king_mod10(n: usize, d: usize) -> Result<ConstructionResult> {
    let f = FamilyId::LdKingMod10;
    congruent(f, "d", d, 8, 10)?;
    require(f, d >= 8, || format!("d ≥ 8 fails for d = {d}"))?;
    require(f, n >= 4 * d + 6, || format!("n ≥ 4d+6 fails for n = {n}, d = {d}"))?;
    congruent(f, "n", n, 0, 10)?;
    let g = graph(f, n, &Shape::King { d }.gens())?;
    Ok(result(f, g, periodic_code(n, 10, &[0, 4])?, n / 5))
}

/// Identifying code in `C_{3d-9}(1,d-1,d,d+1)` for `d ≥ 15`, `d ≡ 3 (mod 6)`.
///
/// The vertex range is cut into `A1 = [0, d)`, `A2 = [d, 2d)` and
/// `A3 = [2d, n)`; the code takes `v ≡ 5 (mod 6)` from `A1 ∪ A3`,
/// `v ≡ 0, 4 (mod 6)` from `A2`, and the two extra codewords `0` and `2d`.
/// Its size is `2d/3`.
pub fn id_king_appendix(d: usize) -> Result<ConstructionResult> {
    let f = FamilyId::IdKingAppendix;
    require(f, d >= 15, || format!("d ≥ 15 fails for d = {d}"))?;
    congruent(f, "d", d, 3, 6)?;
    let n = 3 * d - 9;
    let members: Vec<usize> = (0..n)
        .filter(|&v| {
            let in_a2 = (d..2 * d).contains(&v);
            if in_a2 {
                v % 6 == 0 || v % 6 == 4
            } else {
                v % 6 == 5
            }
        })
        .chain([0, 2 * d])
        .collect();
    let g = graph(f, n, &Shape::King { d }.gens())?;
    Ok(result(f, g, Code::from_vertices(n, &members)?, 2 * d / 3))
}

/// `{v ≡ 0 (mod 2)}` in `C_n(1,d)`, `d` even `≥ 4`, `n` even `≥ 4d+1`.
pub fn sid_square_even(n: usize, d: usize) -> Result<ConstructionResult> {
    let f = FamilyId::SidSquareEven;
    require(f, d % 2 == 0, || format!("d even fails for d = {d}"))?;
    require(f, d >= 4, || format!("d ≥ 4 fails for d = {d}"))?;
    require(f, n % 2 == 0, || format!("n even fails for n = {n}"))?;
    // For even n the bound n ≥ 4d+1 is the same as n ≥ 4d+2.
    require(f, n > 4 * d, || format!("n ≥ 4d+1 fails for n = {n}, d = {d}"))?;
    let g = graph(f, n, &[1, d as i64])?;
    Ok(result(f, g, periodic_code(n, 2, &[0])?, n / 2))
}

/// `{v ≡ 0 (mod 2)}` in `C_n(1,d-1,d)`, `d ≥ 4`, `n` even `≥ 4d+1`.
pub fn sid_tri_even(n: usize, d: usize) -> Result<ConstructionResult> {
    let f = FamilyId::SidTriEven;
    require(f, d >= 4, || format!("d ≥ 4 fails for d = {d}"))?;
    require(f, n % 2 == 0, || format!("n even fails for n = {n}"))?;
    require(f, n > 4 * d, || format!("n ≥ 4d+1 fails for n = {n}, d = {d}"))?;
    let g = graph(f, n, &Shape::Triangular { d }.gens())?;
    Ok(result(f, g, periodic_code(n, 2, &[0])?, n / 2))
}

/// `{v ≡ 0 (mod 3)}` in `C_n(1,d-1,d,d+1)`, `d ≡ 1 (mod 3)`, `d ≥ 4`,
/// `n ≡ 0 (mod 3)`, `n ≥ 4d+5`.
pub fn sid_king_mod3(n: usize, d: usize) -> Result<ConstructionResult> {
    let f = FamilyId::SidKingMod3;
    congruent(f, "d", d, 1, 3)?;
    require(f, d >= 4, || format!("d ≥ 4 fails for d = {d}"))?;
    congruent(f, "n", n, 0, 3)?;
    require(f, n >= 4 * d + 5, || format!("n ≥ 4d+5 fails for n = {n}, d = {d}"))?;
    let g = graph(f, n, &Shape::King { d }.gens())?;
    Ok(result(f, g, periodic_code(n, 3, &[0])?, n / 3))
}

/// Optimal self-identifying code in `C_n(1,3)` for `n > 11`.
///
/// Built from blocks of four consecutive codewords every seven vertices, with
/// a tail that depends on `n mod 7`.
pub fn sid_c13_optimal(n: usize) -> Result<ConstructionResult> {
    let f = FamilyId::SidC13Optimal;
    require(f, n > 11, || format!("n > 11 fails for n = {n}"))?;
    let k = n / 7;
    let blocks = |count: usize| (0..count).flat_map(|j| (0..4).map(move |i| i + 7 * j));
    let members: Vec<usize> = match n % 7 {
        // The block pattern fails at n = 12: I(5) ⊆ I(11). Use the
        // lexicographically smallest optimal code instead.
        _ if n == 12 => vec![0, 1, 2, 3, 4, 7, 8, 9],
        0 => blocks(k).collect(),
        1 => blocks(k).chain([7 * k]).collect(),
        2 => blocks(k).chain([7 * k, 7 * k + 1]).collect(),
        3 => blocks(k).chain([7 * k, 7 * k + 1, 7 * k + 2]).collect(),
        4 => blocks(k).chain([7 * k - 1, 7 * k, 7 * k + 1]).collect(),
        _ => blocks(k + 1).collect(),
    };
    let g = graph(f, n, &[1, 3])?;
    Ok(result(f, g, Code::from_vertices(n, &members)?, c13_sid_value(n)))
}

/// `{0, 2} ∪ odds` in `C_{2k+1}(1,4)`, `k > 5`, of size `k+2`.
pub fn sid_c14_odd(n: usize) -> Result<ConstructionResult> {
    let f = FamilyId::SidC14Odd;
    require(f, n % 2 == 1, || format!("n odd fails for n = {n}"))?;
    let k = n / 2;
    require(f, k > 5, || format!("k > 5 fails for n = 2k+1 = {n}"))?;
    let members: Vec<usize> = [0, 2].into_iter().chain((1..n).step_by(2)).collect();
    let g = graph(f, n, &[1, 4])?;
    Ok(result(f, g, Code::from_vertices(n, &members)?, k + 2))
}

/// Optimal self-identifying code in `C_{2k}(1,k)` for `k ≥ 5`.
pub fn sid_antipodal(k: usize) -> Result<ConstructionResult> {
    let f = FamilyId::SidAntipodal;
    require(f, k >= 5, || format!("k ≥ 5 fails for k = {k}"))?;
    let n = 2 * k;
    let members: Vec<usize> = if k % 3 == 0 {
        (0..n).filter(|v| v % 3 != 2).collect()
    } else {
        let half: Vec<usize> = (0..k).filter(|v| v % 3 != 2).collect();
        half.iter().copied().chain(half.iter().map(|s| s + k)).collect()
    };
    let g = graph(f, n, &[1, k as i64])?;
    Ok(result(f, g, Code::from_vertices(n, &members)?, antipodal_sid_value(k)))
}

/// Builds `family` from whichever of `n`, `d`, `k` its signature needs.
pub fn construct(family: FamilyId, p: FamilyParams) -> Result<ConstructionResult> {
    let n = || p.n.ok_or_else(|| missing(family, "n"));
    let d = || p.d.ok_or_else(|| missing(family, "d"));
    let k = || p.k.ok_or_else(|| missing(family, "k"));
    match family {
        FamilyId::IdSquareMod40 => id_square_mod40(n()?, d()?),
        FamilyId::IdSquareMod20 => id_square_mod20(n()?, d()?),
        FamilyId::LdSquareMod20 => ld_square_mod20(n()?, d()?),
        FamilyId::LdTriMod57 => ld_tri_mod57(n()?, d()?),
        FamilyId::IdTri6d => id_tri_6d(d()?),
        FamilyId::LdKingMod10 => ld_king_mod10(n()?, d()?),
        FamilyId::IdKingAppendix => id_king_appendix(d()?),
        FamilyId::SidSquareEven => sid_square_even(n()?, d()?),
        FamilyId::SidTriEven => sid_tri_even(n()?, d()?),
        FamilyId::SidKingMod3 => sid_king_mod3(n()?, d()?),
        FamilyId::SidC13Optimal => sid_c13_optimal(n()?),
        FamilyId::SidC14Odd => sid_c14_odd(n()?),
        FamilyId::SidAntipodal => sid_antipodal(k()?),
    }
}

/// Every family instance whose graph is exactly `g` and whose kind is `kind`.
pub fn constructions_for(g: &CirculantGraph, kind: CodeKind) -> Vec<ConstructionResult> {
    let n = g.order();
    let mut params = Vec::new();
    if let Some(shape) = g.shape() {
        let d = shape.d();
        params.push(FamilyParams {
            n: Some(n),
            d: Some(d),
            k: None,
        });
        if let Shape::Square { .. } = shape {
            params.push(FamilyParams {
                n: Some(n),
                d: Some(n - d),
                k: None,
            });
        }
    }
    if let &[1, k] = g.gens() {
        params.push(FamilyParams {
            n: Some(n),
            d: None,
            k: (2 * k == n).then_some(k),
        });
    }
    let mut out: Vec<ConstructionResult> = Vec::new();
    for family in FamilyId::ALL.into_iter().filter(|f| f.kind() == kind) {
        for &p in &params {
            if let Ok(r) = construct(family, p) {
                if r.graph == *g && !out.iter().any(|o| o.family == family) {
                    out.push(r);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_families_sizes() {
        assert_eq!(id_square_mod40(40, 4).unwrap().code.len(), 14);
        assert_eq!(id_square_mod20(20, 6).unwrap().code.to_vec(), B2.to_vec());
        assert_eq!(ld_square_mod20(20, 5).unwrap().code.len(), 6);
        assert!(id_square_mod40(80, 44).is_ok());
    }

    #[test]
    fn not_applicable_names_condition() {
        let err = ld_tri_mod57(57, 9).unwrap_err();
        let Error::NotApplicable { family, condition } = err else {
            panic!("wrong error");
        };
        assert_eq!(family, "ld_tri_mod57");
        assert!(condition.contains("d ≡ 8 (mod 57)"), "{condition}");
        assert!(id_king_appendix(14).is_err());
        assert!(sid_c14_odd(11).is_err());
        assert!(sid_c14_odd(13).is_ok());
        assert!(sid_antipodal(4).is_err());
        assert!(sid_c13_optimal(11).is_err());
        assert!(id_tri_6d(7).is_err());
        assert!(id_tri_6d(4).is_err());
        assert!(id_square_mod40(40, 44).is_err());
    }

    #[test]
    fn tri_and_king_sizes() {
        assert_eq!(ld_tri_mod57(57, 8).unwrap().code.len(), 13);
        assert_eq!(ld_tri_mod57(114, 8).unwrap().code.len(), 26);
        assert_eq!(id_tri_6d(6).unwrap().code.len(), 12);
        assert_eq!(id_tri_6d(8).unwrap().code.len(), 15);
        assert_eq!(ld_king_mod10(40, 8).unwrap().code.len(), 8);
        assert_eq!(ld_king_mod10(80, 18).unwrap().code.len(), 16);
        assert_eq!(ld_king_mod10(50, 8).unwrap().code.len(), 10);
        let app = id_king_appendix(15).unwrap();
        assert_eq!(app.graph.order(), 36);
        assert_eq!(app.graph.gens(), &[1, 14, 15, 16]);
        assert_eq!(app.code.len(), 10);
    }

    #[test]
    fn sid_sizes() {
        assert_eq!(sid_square_even(18, 4).unwrap().code.len(), 9);
        assert_eq!(sid_tri_even(22, 5).unwrap().code.len(), 11);
        assert_eq!(sid_king_mod3(33, 7).unwrap().code.len(), 11);
        assert_eq!(sid_c13_optimal(14).unwrap().code.to_vec(), vec![0, 1, 2, 3, 7, 8, 9, 10]);
        assert_eq!(sid_c13_optimal(17).unwrap().code.len(), 11);
        assert_eq!(sid_c13_optimal(12).unwrap().code.len(), 8);
        assert_eq!(sid_c14_odd(17).unwrap().code.len(), 10);
        assert_eq!(sid_c14_odd(19).unwrap().code.len(), 11);
        assert_eq!(sid_antipodal(15).unwrap().code.len(), 20);
        assert_eq!(sid_antipodal(16).unwrap().code.len(), 22);
        assert_eq!(sid_antipodal(17).unwrap().code.len(), 24);
    }

    #[test]
    fn family_names_round_trip() {
        for f in FamilyId::ALL {
            assert_eq!(f.name().parse::<FamilyId>().unwrap(), f);
        }
    }

    #[test]
    fn construct_requires_parameters() {
        let err = construct(FamilyId::IdSquareMod40, FamilyParams::default()).unwrap_err();
        assert!(err.to_string().contains("parameter n"));
    }

    #[test]
    fn constructions_for_graph() {
        let g = CirculantGraph::new(40, &[1, 4]).unwrap();
        let ids = constructions_for(&g, CodeKind::Id);
        assert_eq!(ids.len(), 1);
        assert_eq!(ids[0].family, FamilyId::IdSquareMod40);
        let g = CirculantGraph::new(30, &[1, 15]).unwrap();
        let sids = constructions_for(&g, CodeKind::Sid);
        assert_eq!(sids[0].family, FamilyId::SidAntipodal);
    }
}
