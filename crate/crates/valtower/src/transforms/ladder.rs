//! Per-level stable forms of `A_j -> S_j`, `R_j -> A_j` and `R_j -> S_j`.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genseq::graded::{Element, Embed};
use crate::genseq::Family;
use crate::towers::Tower;

use super::stable::{defect_from_stable, stable_form_in, StableForm};
use super::transform_chain;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Extension {
    /// `A_j -> S_j`, i.e. `K*/K1`.
    SOverA,
    /// `R_j -> A_j`, i.e. `K1/K`.
    AOverR,
    /// `R_j -> S_j`, i.e. `K*/K`.
    SOverR,
}

impl fmt::Display for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Extension::SOverA => "S/A",
            Extension::AOverR => "A/R",
            Extension::SOverR => "S/R",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderRow {
    pub j: usize,
    pub extension: Extension,
    pub form: StableForm,
    pub defect: u32,
}

/// `(α_j, β_j)` of the alternation table.
pub fn expected_parity(j: usize, ext: Extension) -> (u32, u32) {
    let odd = j % 2 == 1;
    match ext {
        Extension::SOverA => {
            if odd {
                (0, 1)
            } else {
                (1, 0)
            }
        }
        Extension::AOverR => {
            if odd {
                (1, 0)
            } else {
                (0, 1)
            }
        }
        Extension::SOverR => (1, 1),
    }
}

/// Stable forms for `j = 1..=levels`; needs `tower.n >= levels + 1`.
pub fn run_tower_ladder(tower: &Tower, levels: usize) -> Result<Vec<LadderRow>> {
    if levels == 0 || tower.n < levels + 1 {
        return Err(Error::BadParams(format!("ladder to level {levels} needs N >= {}", levels + 1)));
    }
    let qc = transform_chain(&tower.q, levels)?;
    let uc = transform_chain(&tower.u, levels)?;
    let rc = transform_chain(&tower.r, levels)?;
    let jobs: Vec<(usize, Extension)> =
        (1..=levels).flat_map(|j| [Extension::SOverA, Extension::AOverR, Extension::SOverR].map(|e| (j, e))).collect();
    jobs.into_par_iter()
        .map(|(j, ext)| {
            let (upper, lower, family, embed) = match ext {
                Extension::SOverA => (&qc[j - 1], &uc[j - 1], Family::U, Embed::UinS),
                Extension::AOverR => (&uc[j - 1], &rc[j - 1], Family::P, Embed::PinA),
                Extension::SOverR => (&qc[j - 1], &rc[j - 1], Family::P, Embed::PinS),
            };
            let atoms = tower.atoms(family, embed)?;
            let u = Element::from_vec(&lower.key_vec(0));
            let v = Element::from_vec(&lower.key_vec(1));
            let form = stable_form_in(upper, &atoms, &u, &v)?;
            // e = f = 1 throughout the tower; residue fields are trivial
            let defect = defect_from_stable(&form, 1, 1, 1, tower.p)?.defect_exponent;
            Ok(LadderRow { j, extension: ext, form, defect })
        })
        .collect()
}
