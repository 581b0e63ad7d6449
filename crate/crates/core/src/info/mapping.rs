//! Enabling mappings between state sets, recoverability and recoverable reduction.

use serde::Serialize;

use super::error::InfoError;
use super::state::StateSet;
use crate::logic::{format_formula, Wff};

/// A single-valued association from source formulas to target formulas, stored by index.
#[derive(Debug, Clone, PartialEq)]
pub struct EnablingMapping {
    source: StateSet,
    target: StateSet,
    image: Vec<Option<usize>>,
    provenance: Option<String>,
}

impl EnablingMapping {
    /// Builds the mapping from formula pairs. Every pair must name a source formula and a
    /// target formula; a source formula may appear in several pairs only with one image.
    pub fn new(
        source: StateSet,
        target: StateSet,
        pairs: &[(Wff, Wff)],
        provenance: Option<String>,
    ) -> Result<Self, InfoError> {
        let mut image = vec![None; source.len()];
        for (from, to) in pairs {
            let i = source.index_of(from).ok_or_else(|| InfoError::UnknownFormula {
                state: source.label().to_string(),
                formula: format_formula(from),
            })?;
            let j = target.index_of(to).ok_or_else(|| InfoError::UnknownFormula {
                state: target.label().to_string(),
                formula: format_formula(to),
            })?;
            match image[i] {
                Some(old) if old != j => return Err(InfoError::MultiValued(format_formula(from))),
                _ => image[i] = Some(j),
            }
        }
        Ok(EnablingMapping { source, target, image, provenance })
    }

    /// Builds the mapping from target indices, one slot per source formula.
    pub fn from_image(
        source: StateSet,
        target: StateSet,
        image: Vec<Option<usize>>,
    ) -> Result<Self, InfoError> {
        if image.len() != source.len() {
            return Err(InfoError::Json(format!(
                "image has {} entries for {} source formulas",
                image.len(),
                source.len()
            )));
        }
        if let Some(&Some(bad)) = image.iter().find(|j| matches!(j, Some(j) if *j >= target.len())) {
            return Err(InfoError::Json(format!("target index {bad} out of range")));
        }
        Ok(EnablingMapping { source, target, image, provenance: None })
    }

    /// Every formula mapped to itself.
    pub fn identity(state: StateSet) -> Self {
        let image = (0..state.len()).map(Some).collect();
        EnablingMapping { source: state.clone(), target: state, image, provenance: None }
    }

    pub fn with_provenance(mut self, note: impl Into<String>) -> Self {
        self.provenance = Some(note.into());
        self
    }

    pub fn source(&self) -> &StateSet {
        &self.source
    }

    pub fn target(&self) -> &StateSet {
        &self.target
    }

    pub fn image(&self) -> &[Option<usize>] {
        &self.image
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    /// Mapped pairs in source order.
    pub fn pairs(&self) -> Vec<(&Wff, &Wff)> {
        self.image
            .iter()
            .enumerate()
            .filter_map(|(i, j)| j.map(|j| (&self.source.formulas()[i], &self.target.formulas()[j])))
            .collect()
    }

    fn total_image(&self) -> Result<Vec<usize>, InfoError> {
        let missing: Vec<String> = self
            .image
            .iter()
            .enumerate()
            .filter(|(_, j)| j.is_none())
            .map(|(i, _)| format_formula(&self.source.formulas()[i]))
            .collect();
        if !missing.is_empty() {
            return Err(InfoError::NotTotal(missing));
        }
        Ok(self.image.iter().map(|j| j.unwrap()).collect())
    }
}

/// Set-theoretic properties of a total mapping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MappingReport {
    pub surjective: bool,
    pub injective: bool,
    pub recoverable: bool,
    /// Source formulas sharing one image, one list per shared image.
    pub collisions: Vec<Vec<String>>,
    /// Target formulas nothing maps to.
    pub unhit: Vec<String>,
}

/// Groups source indices by image; groups are ordered by their first member.
fn preimages(image: &[usize], targets: usize) -> Vec<Vec<usize>> {
    let mut by_target: Vec<Vec<usize>> = vec![Vec::new(); targets];
    for (i, &j) in image.iter().enumerate() {
        by_target[j].push(i);
    }
    let mut classes: Vec<Vec<usize>> = by_target.into_iter().filter(|c| !c.is_empty()).collect();
    classes.sort_by_key(|c| c[0]);
    classes
}

pub fn check_enabling_map(m: &EnablingMapping) -> Result<MappingReport, InfoError> {
    let image = m.total_image()?;
    let n = m.target.len();
    let classes = preimages(&image, n);
    let mut hit = vec![false; n];
    for &j in &image {
        hit[j] = true;
    }
    let src = m.source.formulas();
    let collisions: Vec<Vec<String>> = classes
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| c.iter().map(|&i| format_formula(&src[i])).collect())
        .collect();
    let unhit: Vec<String> = (0..n)
        .filter(|&j| !hit[j])
        .map(|j| format_formula(&m.target.formulas()[j]))
        .collect();
    let surjective = unhit.is_empty();
    let injective = collisions.is_empty();
    Ok(MappingReport {
        surjective,
        injective,
        recoverable: surjective && injective,
        collisions,
        unhit,
    })
}

/// The source state partitioned into same-image classes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientStateSet {
    /// Source indices per class, classes ordered by first member.
    pub classes: Vec<Vec<usize>>,
    pub formulas: Vec<Vec<Wff>>,
}

impl QuotientStateSet {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn texts(&self) -> Vec<Vec<String>> {
        self.formulas
            .iter()
            .map(|c| c.iter().map(format_formula).collect())
            .collect()
    }
}

/// The mapping induced on classes: class `k` goes to target formula `image[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedMapping {
    pub image: Vec<usize>,
    pub target_size: usize,
}

impl ReducedMapping {
    pub fn is_bijective(&self) -> bool {
        let mut hit = vec![false; self.target_size];
        for &j in &self.image {
            if std::mem::replace(&mut hit[j], true) {
                return false;
            }
        }
        hit.into_iter().all(|h| h)
    }

    /// True when the quotient is the source itself (singleton classes in source order) and
    /// this mapping agrees with `m` formula by formula.
    pub fn equals_original(&self, quotient: &QuotientStateSet, m: &EnablingMapping) -> bool {
        quotient.classes.len() == m.image.len()
            && quotient
                .classes
                .iter()
                .enumerate()
                .all(|(k, c)| c.as_slice() == [k] && m.image[k] == Some(self.image[k]))
    }
}

/// Quotient of a total surjective mapping by same-image equivalence, with the bijection it
/// induces on the classes.
pub fn recoverable_reduction(
    m: &EnablingMapping,
) -> Result<(QuotientStateSet, ReducedMapping), InfoError> {
    let report = check_enabling_map(m)?;
    if !report.surjective {
        return Err(InfoError::NotSurjective(report.unhit));
    }
    let image = m.total_image()?;
    let classes = preimages(&image, m.target.len());
    let formulas = classes
        .iter()
        .map(|c| c.iter().map(|&i| m.source.formulas()[i].clone()).collect())
        .collect();
    let reduced = ReducedMapping {
        image: classes.iter().map(|c| image[c[0]]).collect(),
        target_size: m.target.len(),
    };
    Ok((QuotientStateSet { classes, formulas }, reduced))
}
