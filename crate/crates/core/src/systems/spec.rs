//! JSON description of systems, e.g. `{"kind":"counterexample","p":3,"d":1}`.

use serde::{Deserialize, Serialize};

use super::counterexample::{build_counterexample, build_nonergodic, CounterexampleParams};
use super::examples::{build_example31, build_example41};
use super::skew::{build_rotation, build_skew_product, Cocycle, RotationSystem, SkewProduct};
use super::FiniteSystem;
use crate::error::Result;
use crate::group::{FiniteAbelianGroup, Homomorphism};

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SystemSpec {
    /// `α` is given as a matrix whose column `j` is `α(e_j)`.
    Rotation {
        group: Vec<i64>,
        space: Vec<i64>,
        alpha: Vec<Vec<i64>>,
    },
    /// `cocycle[j][z]` is `σ(e_j, z)` with `z` in enumeration order of the base.
    Skew {
        group: Vec<i64>,
        space: Vec<i64>,
        alpha: Vec<Vec<i64>>,
        fiber: Vec<i64>,
        cocycle: Vec<Vec<Vec<i64>>>,
    },
    Example31 {
        d: usize,
    },
    /// `extension = true` selects `X̃` (with `x_∞ ∈ C₄`), otherwise `X`.
    Example41 {
        d: usize,
        #[serde(default)]
        extension: bool,
    },
    Counterexample {
        p: u64,
        d: usize,
        #[serde(default = "yes")]
        corrected: bool,
    },
    Nonergodic {
        p: u64,
        d: usize,
    },
}

/// The result of building a [`SystemSpec`].
#[derive(Clone, Debug)]
pub enum BuiltSystem {
    Rotation(RotationSystem),
    Skew(SkewProduct),
}

impl BuiltSystem {
    pub fn system(&self) -> &FiniteSystem {
        match self {
            BuiltSystem::Rotation(r) => r.system(),
            BuiltSystem::Skew(s) => s.system(),
        }
    }

    pub fn as_skew(&self) -> Option<&SkewProduct> {
        match self {
            BuiltSystem::Skew(s) => Some(s),
            BuiltSystem::Rotation(_) => None,
        }
    }
}

fn rotation(group: &[i64], space: &[i64], alpha: &[Vec<i64>]) -> Result<RotationSystem> {
    let g = FiniteAbelianGroup::new(group)?;
    let z = FiniteAbelianGroup::new(space)?;
    build_rotation(&Homomorphism::new(&g, &z, alpha.to_vec())?)
}

impl SystemSpec {
    pub fn build(&self) -> Result<BuiltSystem> {
        Ok(match self {
            SystemSpec::Rotation {
                group,
                space,
                alpha,
            } => BuiltSystem::Rotation(rotation(group, space, alpha)?),
            SystemSpec::Skew {
                group,
                space,
                alpha,
                fiber,
                cocycle,
            } => {
                let rot = rotation(group, space, alpha)?;
                let h = FiniteAbelianGroup::new(fiber)?;
                let values = cocycle
                    .iter()
                    .map(|row| row.iter().map(|v| h.element(v)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let sigma = Cocycle::from_generator_values(&rot, &h, &values)?;
                BuiltSystem::Skew(build_skew_product(&sigma)?)
            }
            SystemSpec::Example31 { d } => BuiltSystem::Skew(build_example31(*d)?),
            SystemSpec::Example41 { d, extension } => {
                let e = build_example41(*d)?;
                BuiltSystem::Skew(if *extension { e.extension } else { e.system })
            }
            SystemSpec::Counterexample { p, d, corrected } => BuiltSystem::Skew(
                build_counterexample(&CounterexampleParams::new(*p, *d, *corrected)?)?.skew,
            ),
            SystemSpec::Nonergodic { p, d } => BuiltSystem::Skew(build_nonergodic(*p, *d)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_build() {
        let s: SystemSpec = serde_json::from_str(r#"{"kind":"counterexample","p":3,"d":1}"#).unwrap();
        assert_eq!(
            s,
            SystemSpec::Counterexample {
                p: 3,
                d: 1,
                corrected: true
            }
        );
        assert_eq!(s.build().unwrap().system().num_points(), 27);
        let r: SystemSpec =
            serde_json::from_str(r#"{"kind":"rotation","group":[8],"space":[8],"alpha":[[2]]}"#)
                .unwrap();
        assert_eq!(r.build().unwrap().system().orbit_count(), 2);
        let k: SystemSpec = serde_json::from_str(
            r#"{"kind":"skew","group":[2],"space":[2],"alpha":[[1]],"fiber":[2],"cocycle":[[[1],[1]]]}"#,
        )
        .unwrap();
        assert_eq!(k.build().unwrap().system().num_points(), 4);
        let e: SystemSpec = serde_json::from_str(r#"{"kind":"example41","d":1,"extension":true}"#).unwrap();
        assert_eq!(e.build().unwrap().system().num_points(), 32);
        assert!(serde_json::from_str::<SystemSpec>(r#"{"kind":"torus"}"#).is_err());
        let round = serde_json::to_string(&e).unwrap();
        assert_eq!(serde_json::from_str::<SystemSpec>(&round).unwrap(), e);
    }
}
