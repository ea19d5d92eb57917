use std::path::Path;

use super::{column_index, csv_error, csv_reader, Loaded, Warning};
use crate::error::IngestError;
use crate::model::{InstitutionId, Sector, SectorRegistry};

/// Load `institution_id,name,sectors` where `sectors` is a `;`-separated
/// subset of `UNIV;MPG;HGF;WGL;FHG`. Repeated ids merge their sectors.
pub fn load_sector_registry(path: &Path) -> Result<Loaded<SectorRegistry>, IngestError> {
    let mut reader = csv_reader(path)?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let missing = |column: &str| IngestError::MissingColumn {
        path: path.to_path_buf(),
        column: column.into(),
    };
    let id_col = column_index(&headers, "institution_id").ok_or_else(|| missing("institution_id"))?;
    let sectors_col = column_index(&headers, "sectors").ok_or_else(|| missing("sectors"))?;

    let mut registry = SectorRegistry::new();
    let mut warnings = Vec::new();
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        rows += 1;
        let parsed = (|| {
            let id = InstitutionId::new(record.get(id_col).unwrap_or("").trim()).map_err(|e| e.to_string())?;
            let sectors = record
                .get(sectors_col)
                .unwrap_or("")
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.parse::<Sector>().map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            if sectors.is_empty() {
                return Err(format!("institution {id} has no sectors"));
            }
            Ok((id, sectors))
        })();
        match parsed {
            Ok((id, sectors)) => registry.insert(id, sectors),
            Err(message) => warnings.push(Warning {
                file: path.to_path_buf(),
                line,
                message,
            }),
        }
    }
    if registry.is_empty() {
        return Err(IngestError::EmptyList {
            path: path.to_path_buf(),
        });
    }
    Ok(Loaded {
        value: registry,
        rejected: warnings.len(),
        warnings,
        rows,
    })
}
