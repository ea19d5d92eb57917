//! Publication units: per-institution sums of shares across a corpus.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::Zero;

use crate::attribution::{attribute_with, participants, ShareVector};
use crate::error::{AnalyticsError, AttributionError};
use crate::model::{CostModel, InstitutionId, ParticipantScope, Publication, SectorRegistry};

/// A publication left out of every model because one model found no payer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exclusion {
    /// Position in the input corpus.
    pub index: usize,
    pub publication: String,
    pub model: CostModel,
}

/// Institution x model matrix of exact publication units.
///
/// For each model the column sums to `attributed`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicationUnitsTable {
    models: Vec<CostModel>,
    cells: BTreeMap<InstitutionId, Vec<BigRational>>,
    pub scope: ParticipantScope,
    pub corpus_size: usize,
    pub attributed: usize,
    pub excluded: Vec<Exclusion>,
}

impl PublicationUnitsTable {
    /// Builds a table directly from cell values; institutions missing a model get zero.
    pub fn from_cells(
        models: impl IntoIterator<Item = CostModel>,
        cells: impl IntoIterator<Item = (InstitutionId, CostModel, BigRational)>,
    ) -> Self {
        let models: Vec<CostModel> = models.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut table = Self::empty(models, ParticipantScope::default());
        for (id, model, value) in cells {
            if let Some(col) = table.column(model) {
                let width = table.models.len();
                table
                    .cells
                    .entry(id)
                    .or_insert_with(|| vec![BigRational::zero(); width])[col] += value;
            }
        }
        table
    }

    fn empty(models: Vec<CostModel>, scope: ParticipantScope) -> Self {
        Self {
            models,
            cells: BTreeMap::new(),
            scope,
            corpus_size: 0,
            attributed: 0,
            excluded: Vec::new(),
        }
    }

    /// Models in canonical order 1, 2, 3, 4a, 4b.
    pub fn models(&self) -> &[CostModel] {
        &self.models
    }

    pub fn column(&self, model: CostModel) -> Option<usize> {
        self.models.iter().position(|m| *m == model)
    }

    pub fn has_model(&self, model: CostModel) -> bool {
        self.column(model).is_some()
    }

    /// Units of `id` under `model`; zero for unknown institutions.
    pub fn cell(&self, id: &InstitutionId, model: CostModel) -> Result<BigRational, AnalyticsError> {
        let col = self.column(model).ok_or(AnalyticsError::ModelMissing(model))?;
        Ok(self
            .cells
            .get(id)
            .map_or_else(BigRational::zero, |row| row[col].clone()))
    }

    /// Row of `id`, one value per model in [`Self::models`] order.
    pub fn row(&self, id: &InstitutionId) -> Option<&[BigRational]> {
        self.cells.get(id).map(Vec::as_slice)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&InstitutionId, &[BigRational])> {
        self.cells.iter().map(|(k, v)| (k, v.as_slice()))
    }

    pub fn institutions(&self) -> impl Iterator<Item = &InstitutionId> {
        self.cells.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn column_total(&self, model: CostModel) -> Result<BigRational, AnalyticsError> {
        let col = self.column(model).ok_or(AnalyticsError::ModelMissing(model))?;
        Ok(self.cells.values().map(|row| &row[col]).sum())
    }
}

/// Partial aggregate; merging is associative and commutative.
struct Partial {
    cells: BTreeMap<InstitutionId, Vec<BigRational>>,
    attributed: usize,
    excluded: Vec<Exclusion>,
}

impl Partial {
    fn new() -> Self {
        Self {
            cells: BTreeMap::new(),
            attributed: 0,
            excluded: Vec::new(),
        }
    }

    fn add(mut self, width: usize, index: usize, outcome: Result<Vec<ShareVector>, (String, CostModel)>) -> Self {
        match outcome {
            Ok(vectors) => {
                self.attributed += 1;
                for (col, vector) in vectors.into_iter().enumerate() {
                    for (id, share) in vector.into_inner() {
                        self.cells.entry(id).or_insert_with(|| vec![BigRational::zero(); width])[col] += share;
                    }
                }
            }
            Err((publication, model)) => self.excluded.push(Exclusion {
                index,
                publication,
                model,
            }),
        }
        self
    }

    #[cfg(feature = "parallel")]
    fn merge(mut self, other: Partial) -> Self {
        for (id, row) in other.cells {
            match self.cells.get_mut(&id) {
                Some(mine) => mine.iter_mut().zip(row).for_each(|(a, b)| *a += b),
                None => {
                    self.cells.insert(id, row);
                }
            }
        }
        self.attributed += other.attributed;
        self.excluded.extend(other.excluded);
        self
    }
}

fn attribute_models(
    publication: &Publication,
    models: &[CostModel],
    registry: &SectorRegistry,
    scope: ParticipantScope,
) -> Result<Vec<ShareVector>, (String, CostModel)> {
    let parts = participants(publication, registry, scope);
    models
        .iter()
        .map(|m| attribute_with(publication, *m, &parts))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|AttributionError::NoEligiblePayer { publication, model }| (publication, model))
}

fn finish(
    models: Vec<CostModel>,
    scope: ParticipantScope,
    corpus_size: usize,
    mut partial: Partial,
) -> PublicationUnitsTable {
    partial.excluded.sort_by_key(|e| e.index);
    PublicationUnitsTable {
        models,
        cells: partial.cells,
        scope,
        corpus_size,
        attributed: partial.attributed,
        excluded: partial.excluded,
    }
}

fn canonical(models: &BTreeSet<CostModel>) -> Vec<CostModel> {
    models.iter().copied().collect()
}

/// Single-threaded aggregation.
pub fn compute_publication_units_sequential(
    corpus: &[Publication],
    models: &BTreeSet<CostModel>,
    registry: &SectorRegistry,
    scope: ParticipantScope,
) -> PublicationUnitsTable {
    let models = canonical(models);
    let width = models.len();
    let partial = corpus.iter().enumerate().fold(Partial::new(), |acc, (i, p)| {
        acc.add(width, i, attribute_models(p, &models, registry, scope))
    });
    finish(models, scope, corpus.len(), partial)
}

/// Data-parallel aggregation; produces the same table as the sequential path.
#[cfg(feature = "parallel")]
pub fn compute_publication_units_parallel(
    corpus: &[Publication],
    models: &BTreeSet<CostModel>,
    registry: &SectorRegistry,
    scope: ParticipantScope,
) -> PublicationUnitsTable {
    use rayon::prelude::*;

    let models = canonical(models);
    let width = models.len();
    let partial = corpus
        .par_iter()
        .enumerate()
        .fold(Partial::new, |acc, (i, p)| {
            acc.add(width, i, attribute_models(p, &models, registry, scope))
        })
        .reduce(Partial::new, Partial::merge);
    finish(models, scope, corpus.len(), partial)
}

/// Sum shares per institution and model. A publication without an eligible
/// payer under any requested model is excluded from all of them and listed
/// in [`PublicationUnitsTable::excluded`].
pub fn compute_publication_units(
    corpus: &[Publication],
    models: &BTreeSet<CostModel>,
    registry: &SectorRegistry,
    scope: ParticipantScope,
) -> PublicationUnitsTable {
    #[cfg(feature = "parallel")]
    {
        compute_publication_units_parallel(corpus, models, registry, scope)
    }
    #[cfg(not(feature = "parallel"))]
    {
        compute_publication_units_sequential(corpus, models, registry, scope)
    }
}
