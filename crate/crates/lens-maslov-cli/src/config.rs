//! Per-command options, shared between the flag parser and the config file.
//!
//! Each subcommand owns one struct whose fields are all optional. Flags fill
//! it first; a `--config FILE` (TOML, keys named like the flags with `_` in
//! place of `-`) is deserialized into the *same* struct and overlaid on top,
//! file values winning, so the two sources can never drift apart. Defaults
//! are applied only after the merge, inside each command, and the effective
//! values are what the report records. Unknown TOML keys are rejected.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::RunError;

/// Overlay `file` (the config-file values) onto `self` (the flag values):
/// every `Some` in `file` replaces the flag.
pub trait Overlay: Sized {
    fn overlay(self, file: Self) -> Self;
}

macro_rules! overlay_fields {
    ($ty:ty { $($field:ident),+ $(,)? }) => {
        impl Overlay for $ty {
            fn overlay(mut self, file: Self) -> Self {
                $( if file.$field.is_some() { self.$field = file.$field; } )+
                self
            }
        }
    };
}

/// Merge the parsed flags with an optional config file.
pub fn merge<T>(flags: T, config: Option<&Path>) -> Result<T, RunError>
where
    T: Overlay + serde::de::DeserializeOwned,
{
    let Some(path) = config else { return Ok(flags) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| RunError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let file: T = toml::from_str(&text)
        .map_err(|e| RunError::Usage(format!("invalid config {}: {e}", path.display())))?;
    Ok(flags.overlay(file))
}

/// nu of a loop in Sp(2n; R).
#[derive(Debug, Clone, Default, clap::Args, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinearMaslovOpts {
    /// Use the standard circle `s -> rotation(n, 2 pi s)` (the default mode).
    #[arg(long, action = clap::ArgAction::SetTrue)]
    pub standard_loop: Option<bool>,
    /// Number of complex coordinates; the loop lives in Sp(2n; R).
    #[arg(long)]
    pub n: Option<usize>,
    /// Build a seeded random loop with these windings (one per coordinate
    /// plane, comma separated); the loop's index is twice their sum.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub windings: Option<Vec<i64>>,
    /// Amplitude of the contractible wiggle on the random loop.
    #[arg(long)]
    pub wiggle: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Force the frozen decomposition to this many pieces (default: auto).
    #[arg(long)]
    pub pieces: Option<usize>,
}
overlay_fields!(LinearMaslovOpts { standard_loop, n, windings, wiggle, seed, pieces });

/// mu of Reeb iterates on a lens space.
#[derive(Debug, Clone, Default, clap::Args, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReebMuOpts {
    /// Group order (a prime).
    #[arg(long)]
    pub k: Option<u32>,
    /// Number of complex coordinates (weights default to all ones).
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of full Reeb turns; the index is exactly 2nl.
    #[arg(long)]
    pub l: Option<usize>,
    /// Lens weights, comma separated; overrides --n's all-ones default.
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<u32>>,
}
overlay_fields!(ReebMuOpts { k, n, l, weights });

/// Translated points of a perturbed Reeb contactomorphism.
#[derive(Debug, Clone, Default, clap::Args, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TranslatedPointsOpts {
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<u32>>,
    /// Strength of the Reeb perturbation; 0 gives the (degenerate) pure Reeb flow.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Flow duration of the contactomorphism.
    #[arg(long)]
    pub time: Option<f64>,
    /// Start-point grid density per sphere dimension.
    #[arg(long)]
    pub grid_density: Option<usize>,
    /// Initial guesses for the time-shift per start point.
    #[arg(long)]
    pub eta_samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}
overlay_fields!(TranslatedPointsOpts { k, weights, eps, time, grid_density, eta_samples, seed });

/// Which contact Hamiltonian drives a crossings run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HamKind {
    /// The unit Hamiltonian: the Reeb rotation itself.
    Reeb,
    /// The Reeb flow perturbed by an invariant quartic of strength --eps.
    PerturbedReeb,
}

/// Discriminant crossings and index bounds of a contact flow.
#[derive(Debug, Clone, Default, clap::Args, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CrossingsOpts {
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<u32>>,
    /// Contact Hamiltonian (default: reeb).
    #[arg(long, value_enum)]
    pub hamiltonian: Option<HamKind>,
    /// Perturbation strength when --hamiltonian perturbed-reeb.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Scan the isotopy over [0, t-max].
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}
overlay_fields!(CrossingsOpts { k, weights, hamiltonian, eps, t_max, seed });

/// Betti numbers and the Bockstein ladder of an equivariant model.
#[derive(Debug, Clone, Default, clap::Args, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HomologyOpts {
    #[arg(long)]
    pub k: Option<u32>,
    /// Number of join factors: the model of L_k^{2M-1} with all-ones weights.
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub m: Option<usize>,
    /// Explicit lens weights (alternative to --M).
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<u32>>,
    /// Load the complex from a file instead of building a lens model.
    #[arg(long)]
    pub file: Option<PathBuf>,
}
overlay_fields!(HomologyOpts { k, m, weights, file });

/// Cohomological index of a subcomplex, computed by both routes.
#[derive(Debug, Clone, Default, clap::Args, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IndexOpts {
    #[arg(long)]
    pub k: Option<u32>,
    /// Number of join factors: the model of L_k^{2M-1} with all-ones weights.
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub m: Option<usize>,
    /// Explicit lens weights (alternative to --M).
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<u32>>,
    /// Load the complex (and its named subcomplexes) from a file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Subcomplex to measure: "full", "empty", or a name from the file.
    #[arg(long)]
    pub sub: Option<String>,
}
overlay_fields!(IndexOpts { k, m, weights, file, sub });

/// Seeded stress test of the five index laws.
#[derive(Debug, Clone, Default, clap::Args, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PropertySuiteOpts {
    #[arg(long)]
    pub k: Option<u32>,
    /// Number of join factors of the ambient model (all-ones weights).
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub m: Option<usize>,
    /// Explicit lens weights (alternative to --M).
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<u32>>,
    /// Random subcomplex pairs on top of the five pinned ones.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}
overlay_fields!(PropertySuiteOpts { k, m, weights, samples, seed });

/// Loop additivity and the quasimorphism defect on random Sp(2n) paths.
#[derive(Debug, Clone, Default, clap::Args, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DefectSuiteOpts {
    /// Number of complex coordinates; paths live in Sp(2n; R).
    #[arg(long)]
    pub n: Option<usize>,
    /// Random pairs per phase (loops, then truncated paths).
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Windings are drawn uniformly from [-max-winding, max-winding].
    #[arg(long)]
    pub max_winding: Option<i64>,
    /// Amplitude of the contractible wiggle.
    #[arg(long)]
    pub wiggle: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}
overlay_fields!(DefectSuiteOpts { n, pairs, max_winding, wiggle, seed });

#[cfg(test)]
mod tests {
    use super::*;

    fn write_temp(content: &str) -> PathBuf {
        let path = std::env::temp_dir().join(format!(
            "lens-maslov-config-test-{}-{}.toml",
            std::process::id(),
            content.len()
        ));
        std::fs::write(&path, content).unwrap();
        path
    }

    #[test]
    fn file_values_override_flags() {
        let flags = ReebMuOpts { k: Some(3), n: Some(2), l: Some(1), weights: None };
        let path = write_temp("l = 3\nweights = [1, 2]\n");
        let merged = merge(flags, Some(path.as_path())).unwrap();
        std::fs::remove_file(&path).unwrap();
        assert_eq!(merged.k, Some(3), "flag survives when the file is silent");
        assert_eq!(merged.l, Some(3), "file wins over the flag");
        assert_eq!(merged.weights, Some(vec![1, 2]));
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let path = write_temp("k = 3\nturns = 2\n");
        let err = merge(ReebMuOpts::default(), Some(path.as_path())).unwrap_err();
        std::fs::remove_file(&path).unwrap();
        let RunError::Usage(msg) = err else { panic!("unknown key must be a usage error") };
        assert!(msg.contains("turns"), "error should name the bad key: {msg}");
    }

    #[test]
    fn missing_config_file_is_a_usage_error() {
        let err = merge(ReebMuOpts::default(), Some(Path::new("/no/such/file.toml")));
        assert!(matches!(err, Err(RunError::Usage(_))));
    }

    #[test]
    fn enum_values_parse_in_kebab_case() {
        let opts: CrossingsOpts = toml::from_str("hamiltonian = \"perturbed-reeb\"").unwrap();
        assert_eq!(opts.hamiltonian, Some(HamKind::PerturbedReeb));
    }

    #[test]
    fn the_capital_m_flag_maps_to_the_same_toml_key() {
        let opts: IndexOpts = toml::from_str("k = 3\nM = 2\nsub = \"full\"").unwrap();
        assert_eq!(opts.m, Some(2));
    }
}
