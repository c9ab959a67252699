use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use ogclab_core::complex::{build_marked_complex, build_oriented_complex, GradedComplex};
use ogclab_core::enumerate::{
    check_stable_pair, generate_marked, generate_oriented, standard_labels, Flavor,
    GenerateOptions, GraphCatalog,
};
use ogclab_core::graph::{Label, StabilityProfile};

use crate::error::CliError;

pub const CACHE_ENV: &str = "OGCLAB_CACHE";

/// Parses `3` or `1..4` (inclusive).
pub fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let bad = || format!("expected N or A..B, got {s:?}");
    match s.split_once("..") {
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            Ok(v..=v)
        }
        Some((a, b)) => {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b
                .trim_start_matches('=')
                .trim()
                .parse()
                .map_err(|_| bad())?;
            if a > b {
                return Err(format!("empty range {s:?}"));
            }
            Ok(a..=b)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pair {
    pub genus: u32,
    pub labels: Vec<Label>,
}

impl Pair {
    pub fn markings(&self) -> usize {
        self.labels.len()
    }
}

/// Every `(g, n)` in the two ranges, in order. All of them must be stable.
pub fn pairs(
    genus: &RangeInclusive<u32>,
    markings: &RangeInclusive<u32>,
) -> Result<Vec<Pair>, CliError> {
    let mut out = Vec::new();
    for g in genus.clone() {
        for n in markings.clone() {
            let labels = standard_labels(n as usize);
            check_stable_pair(g, &labels).map_err(CliError::from)?;
            out.push(Pair { genus: g, labels });
        }
    }
    Ok(out)
}

pub fn default_profile(flavor: Flavor) -> StabilityProfile {
    match flavor {
        Flavor::Marked => StabilityProfile::marked(),
        Flavor::Oriented => StabilityProfile::oriented(),
    }
}

pub fn profile_for(flavor: Flavor, name: Option<&str>) -> Result<StabilityProfile, CliError> {
    match name {
        None => Ok(default_profile(flavor)),
        Some(n) => StabilityProfile::by_name(n)
            .ok_or_else(|| CliError::Usage(format!("unknown stability profile {n:?}"))),
    }
}

/// Directory name of a catalog inside an output or cache directory.
pub fn catalog_dir_name(flavor: Flavor, pair: &Pair, profile: &StabilityProfile) -> String {
    format!(
        "{}-g{}-n{}-{}",
        flavor.name(),
        pair.genus,
        pair.markings(),
        profile.name()
    )
}

pub struct CatalogSource {
    pub cache: Option<PathBuf>,
    pub opts: GenerateOptions,
}

impl CatalogSource {
    pub fn from_env(opts: GenerateOptions) -> Self {
        CatalogSource {
            cache: std::env::var_os(CACHE_ENV).map(PathBuf::from),
            opts,
        }
    }

    /// Loads the catalog from the cache when present, otherwise generates it
    /// and stores it there.
    pub fn catalog(
        &self,
        flavor: Flavor,
        pair: &Pair,
        profile: StabilityProfile,
    ) -> Result<GraphCatalog, CliError> {
        let cached = self
            .cache
            .as_ref()
            .map(|root| root.join(catalog_dir_name(flavor, pair, &profile)));
        if let Some(dir) = &cached {
            if dir.join(ogclab_core::enumerate::INDEX_FILE).exists() {
                let c = GraphCatalog::load(dir)?;
                check_loaded(&c, flavor, pair, &profile, dir)?;
                return Ok(c);
            }
        }
        let c = generate(flavor, pair, profile, self.opts)?;
        if let Some(dir) = &cached {
            c.save(dir).map_err(|e| CliError::Io(dir.clone(), e))?;
        }
        Ok(c)
    }

    pub fn complex(
        &self,
        flavor: Flavor,
        pair: &Pair,
        profile: StabilityProfile,
    ) -> Result<GradedComplex, CliError> {
        let c = Arc::new(self.catalog(flavor, pair, profile)?);
        Ok(match flavor {
            Flavor::Marked => build_marked_complex(c)?,
            Flavor::Oriented => build_oriented_complex(c)?,
        })
    }
}

pub fn generate(
    flavor: Flavor,
    pair: &Pair,
    profile: StabilityProfile,
    opts: GenerateOptions,
) -> Result<GraphCatalog, CliError> {
    Ok(match flavor {
        Flavor::Marked => generate_marked(pair.genus, &pair.labels, profile, opts)?,
        Flavor::Oriented => generate_oriented(pair.genus, &pair.labels, profile, opts)?,
    })
}

fn check_loaded(
    c: &GraphCatalog,
    flavor: Flavor,
    pair: &Pair,
    profile: &StabilityProfile,
    dir: &Path,
) -> Result<(), CliError> {
    if c.flavor() != flavor
        || c.genus() != pair.genus
        || c.labels() != pair.labels.as_slice()
        || c.profile() != profile
    {
        return Err(CliError::Catalog(format!(
            "{}: catalog does not match the requested job",
            dir.join(ogclab_core::enumerate::INDEX_FILE).display()
        )));
    }
    Ok(())
}
