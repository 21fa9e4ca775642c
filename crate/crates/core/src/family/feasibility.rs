//! Which fibre genera `g` are compatible with given `(K^2, chi, q)` for a
//! surface whose canonical map is composed with a pencil.

use serde::Serialize;

use super::FamilyError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    pub name: &'static str,
    /// Human-readable form, e.g. `12 K^2 >= 63 p_g - 142`.
    pub statement: &'static str,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

impl InequalityCheck {
    fn ge(name: &'static str, statement: &'static str, lhs: i64, rhs: i64) -> Self {
        InequalityCheck { name, statement, lhs: lhs.to_string(), rhs: rhs.to_string(), holds: lhs >= rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusVerdict {
    pub genus: u32,
    pub feasible: bool,
    pub checks: Vec<InequalityCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub k2: String,
    pub chi: String,
    pub q: String,
    pub p_g: String,
    pub miyaoka_yau: InequalityCheck,
    pub genera: Vec<GenusVerdict>,
    pub feasible: Vec<u32>,
    /// The genus bound `2 <= g <= 5` is only known for `chi > 20`.
    pub caveat: Option<&'static str>,
}

/// Evaluates the necessary conditions for `g = 2..=5` and `K^2 <= 9 chi`.
pub fn genus_feasibility(k2: i64, chi: i64, q: i64) -> Result<FeasibilityReport, FamilyError> {
    if k2 <= 0 || chi <= 0 || !(0..=1).contains(&q) {
        return Err(FamilyError::FeasibilityInput);
    }
    let p_g = chi - 1 + q;
    let my = InequalityCheck::ge("miyaoka-yau", "9 chi >= K^2", 9 * chi, k2);
    let mut genera = Vec::new();
    for g in 2..=5u32 {
        let gi = g as i64;
        let mut checks = vec![InequalityCheck::ge("beauville", "K^2 >= 2(g-1)(chi-2)", k2, 2 * (gi - 1) * (chi - 2))];
        checks.push(match g {
            2 => InequalityCheck::ge("xiao", "K^2 >= 4 chi + 6 q - 10", k2, 4 * chi + 6 * q - 10),
            3 => InequalityCheck::ge("sun-3", "12 K^2 >= 63 p_g - 142", 12 * k2, 63 * p_g - 142),
            4 => InequalityCheck::ge("sun-4", "7 K^2 >= 48 p_g - 134", 7 * k2, 48 * p_g - 134),
            _ => InequalityCheck::ge("sun-5", "9 K^2 >= 80 p_g - 262", 9 * k2, 80 * p_g - 262),
        });
        let feasible = my.holds && checks.iter().all(|c| c.holds);
        genera.push(GenusVerdict { genus: g, feasible, checks });
    }
    let feasible = genera.iter().filter(|v| v.feasible).map(|v| v.genus).collect();
    Ok(FeasibilityReport {
        k2: k2.to_string(),
        chi: chi.to_string(),
        q: q.to_string(),
        p_g: p_g.to_string(),
        miyaoka_yau: my,
        genera,
        feasible,
        caveat: (chi <= 20).then_some("valid classification filter only for chi > 20"),
    })
}
