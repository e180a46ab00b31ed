//! Deterministic random instances of each g-frame kind.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::controlled::{controlled_bounds, ControlOperator};
use crate::corpus::{commuting_control, conditioned_gframe, sign_definite_weights};
use crate::error::{Error, Result};
use crate::frame::{classify, GFrame};
use crate::io::InstanceFile;
use crate::random::{random_isometry, random_unitary, seeded};
use crate::scalar::Real;
use crate::weighted::weighted_bounds;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum GeneratorKind {
    RandomGframe,
    GRiesz,
    GOnb,
    Parseval,
    ControlledCommuting,
    Weighted,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 6] = [
        GeneratorKind::RandomGframe,
        GeneratorKind::GRiesz,
        GeneratorKind::GOnb,
        GeneratorKind::Parseval,
        GeneratorKind::ControlledCommuting,
        GeneratorKind::Weighted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::RandomGframe => "random_gframe",
            GeneratorKind::GRiesz => "g_riesz",
            GeneratorKind::GOnb => "g_onb",
            GeneratorKind::Parseval => "parseval",
            GeneratorKind::ControlledCommuting => "controlled_commuting",
            GeneratorKind::Weighted => "weighted",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeneratorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidFrame(format!("unknown generator kind {s:?}")))
    }
}

fn infeasible(kind: GeneratorKind, reason: impl Into<String>) -> Error {
    Error::InfeasibleKind {
        kind: kind.name().into(),
        reason: reason.into(),
    }
}

/// Builds an instance of `kind` on `C^d` with block sizes `partition`.
///
/// The output depends only on the arguments and is certified by
/// [`classify`] (or the controlled/weighted bound checks) before returning.
pub fn generate<T: Real>(kind: GeneratorKind, d: usize, partition: &[usize], seed: u64) -> Result<InstanceFile<T>> {
    if d == 0 {
        return Err(infeasible(kind, "dimension must be positive"));
    }
    if partition.is_empty() || partition.contains(&0) {
        return Err(infeasible(
            kind,
            "partition needs at least one block, all sizes positive",
        ));
    }
    let n: usize = partition.iter().sum();
    let exact = matches!(kind, GeneratorKind::GRiesz | GeneratorKind::GOnb);
    if exact && n != d {
        return Err(infeasible(
            kind,
            format!("block sizes sum to {n}, need exactly d = {d}"),
        ));
    }
    if n < d {
        return Err(infeasible(
            kind,
            format!("block sizes sum to {n} < d = {d}, no frame is possible"),
        ));
    }

    let mut rng = seeded(seed);
    let frame = match kind {
        GeneratorKind::GOnb => GFrame::from_analysis(&random_unitary::<T, _>(&mut rng, d), partition)?,
        GeneratorKind::Parseval => GFrame::from_analysis(&random_isometry::<T, _>(&mut rng, n, d), partition)?,
        _ => conditioned_gframe(&mut rng, d, partition, 0.5, 2.0),
    };
    let label = format!("{kind} d={d} partition={partition:?} seed={seed}");
    let mut inst = InstanceFile::new(frame.with_label(label.clone()));
    inst.label = Some(label);

    let report = classify(&inst.frame);
    let certified = match kind {
        GeneratorKind::RandomGframe => report.is_g_frame,
        GeneratorKind::GRiesz => report.is_g_riesz,
        GeneratorKind::GOnb => report.is_g_onb,
        GeneratorKind::Parseval => report.is_parseval,
        GeneratorKind::ControlledCommuting => {
            let c = ControlOperator::new(commuting_control(&mut rng, &inst.frame))?;
            let ok = report.is_g_frame && controlled_bounds(&inst.frame, &c)?.is_controlled_frame;
            inst.control = Some(c.matrix);
            ok
        }
        GeneratorKind::Weighted => {
            let w = sign_definite_weights(&mut rng, inst.frame.len(), 0.5, 2.0, false);
            let w_alt = sign_definite_weights(&mut rng, inst.frame.len(), 0.25, 4.0, false);
            let ok = report.is_g_frame && weighted_bounds(&inst.frame, &w)?.is_frame();
            inst.weights = Some(w);
            inst.payloads.w_alt = Some(w_alt);
            ok
        }
    };
    if !certified {
        return Err(infeasible(kind, "generated instance failed certification"));
    }
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::frame_bounds;

    #[test]
    fn g_onb_example() {
        let inst = generate::<f64>(GeneratorKind::GOnb, 4, &[2, 2], 7).unwrap();
        assert!(classify(&inst.frame).is_g_onb);
    }

    #[test]
    fn parseval_example() {
        let inst = generate::<f64>(GeneratorKind::Parseval, 3, &[2, 2], 1).unwrap();
        let b = frame_bounds(&inst.frame);
        assert!((b.lower - 1.0).abs() < 1e-10 && (b.upper - 1.0).abs() < 1e-10);
    }

    #[test]
    fn deterministic_output() {
        for kind in GeneratorKind::ALL {
            let a = generate::<f64>(kind, 3, &[1, 2], 42).unwrap().to_json();
            let b = generate::<f64>(kind, 3, &[1, 2], 42).unwrap().to_json();
            assert_eq!(a, b, "{kind}");
        }
    }

    #[test]
    fn infeasible_kinds() {
        assert!(matches!(
            generate::<f64>(GeneratorKind::GOnb, 3, &[2, 2], 0),
            Err(Error::InfeasibleKind { .. })
        ));
        assert!(matches!(
            generate::<f64>(GeneratorKind::RandomGframe, 4, &[1, 1], 0),
            Err(Error::InfeasibleKind { .. })
        ));
    }

    #[test]
    fn kind_names_parse() {
        for kind in GeneratorKind::ALL {
            assert_eq!(kind.name().parse::<GeneratorKind>().unwrap(), kind);
        }
    }
}
