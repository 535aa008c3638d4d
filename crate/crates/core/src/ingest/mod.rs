//! Ingest pipeline: parse → group-by-max lookups → edge normalization →
//! long-form influence table → [`Snapshot`].

mod clean;
mod country;
mod source;

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

pub use clean::{build_companies, build_unique_directors, transpose_inf_long};
pub use country::{country_name, AFRICAN_CODES};
pub use source::{
    parse_bce, parse_bool, parse_dif, HeaderMapping, Parsed, BCE_COLUMNS, BCE_FILE, DIF_COLUMNS,
    DIF_FILE,
};

use crate::error::IngestError;
use crate::graph::normalize_edges;
use crate::model::{DiagCode, Diagnostic, Year};
use crate::snapshot::{Snapshot, SnapshotParts};

fn stage(stage: &'static str) -> impl FnOnce(IngestError) -> IngestError {
    move |e| IngestError::Stage {
        stage,
        source: Box::new(e),
    }
}

/// Build a snapshot from the two source streams. Both files are parsed
/// concurrently; the result is identical to sequential processing.
pub fn build_snapshot<D, B>(
    dif: D,
    bce: B,
    reference_year: Year,
    mapping: &HeaderMapping,
) -> Result<Snapshot, IngestError>
where
    D: Read + Send,
    B: Read + Send,
{
    let (dif, bce) = std::thread::scope(|scope| {
        let dif = scope.spawn(|| parse_dif(dif, reference_year, mapping));
        let bce = parse_bce(bce, mapping);
        (dif.join().expect("factors parser panicked"), bce)
    });
    let dif = dif.map_err(stage("parse_dif"))?;
    let bce = bce.map_err(stage("parse_bce"))?;

    let mut warnings = dif.diagnostics;
    warnings.extend(bce.diagnostics);

    let mut seats = dif.rows;
    seats.sort_by_key(|s| (s.director_id, s.company_id));

    let (directors, diags) = build_unique_directors(&seats, &bce.rows);
    warnings.extend(diags);
    let (companies, diags) = build_companies(&seats, &bce.rows);
    warnings.extend(diags);
    let (edges, diags) = normalize_edges(&bce.rows);
    warnings.extend(diags);
    let inf_long = transpose_inf_long(&seats, &companies);

    let mut country_names = BTreeMap::new();
    let mut unknown = BTreeSet::new();
    for c in companies.values() {
        if c.hq_country.is_empty() || country_names.contains_key(&c.hq_country) {
            continue;
        }
        match country_name(&c.hq_country) {
            Some(name) => {
                country_names.insert(c.hq_country.clone(), name.to_string());
            }
            None => {
                unknown.insert(c.hq_country.clone());
            }
        }
    }
    warnings.extend(unknown.into_iter().map(|code| {
        Diagnostic::new(
            "clean",
            0,
            DiagCode::UnknownCountry,
            format!("{code} is not an ISO 3166 alpha-2 code"),
        )
    }));

    Ok(Snapshot::from_parts(SnapshotParts {
        seats,
        directors,
        companies,
        edges,
        inf_long,
        country_names,
        reference_year,
        warnings,
    }))
}

/// [`build_snapshot`] over files on disk, with an optional mapping file.
pub fn build_snapshot_from_paths(
    dif: &Path,
    bce: &Path,
    reference_year: Year,
    mapping: Option<&Path>,
) -> Result<Snapshot, IngestError> {
    let open = |p: &Path| {
        File::open(p).map(BufReader::new).map_err(|source| IngestError::Io {
            file: p.display().to_string(),
            source,
        })
    };
    let mapping = match mapping {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| IngestError::Io {
                file: p.display().to_string(),
                source,
            })?;
            HeaderMapping::parse(&text)?
        }
        None => HeaderMapping::default(),
    };
    build_snapshot(open(dif)?, open(bce)?, reference_year, &mapping)
}
