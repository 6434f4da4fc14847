//! Finite-stage Cohen iterations assembled from a product generic.
//!
//! Each stage has its own many-coordinate Cohen poset. The projection used
//! at stage `i` comes from a dictionary that may depend on the filters
//! assembled at earlier stages; pushing the stage-`i` product generic
//! forward along it gives the stage-`i` iteration filter.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cohen::{CohenMany, LambdaCoded, ManyCondition};
use crate::dictionary::DictionaryMany;
use crate::error::{Error, Result};
use crate::order::{build_generic, project_dense, pushforward, DenseSet, Filter, Poset, Product};
use crate::projections::ManyProjection;
use crate::sampling::ManyDense;

/// How a stage picks its dictionary from the filters of earlier stages.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum DictionaryRule {
    Identity,
    Bitflip,
    /// A scrambled dictionary seeded by a SHA-256 digest of `seed`, the
    /// stage index and the JSON of all earlier filters.
    SeededHash { seed: u64 },
}

impl DictionaryRule {
    pub fn dictionary(&self, stage: usize, lambda: u32, earlier: &[Filter<ManyCondition>]) -> DictionaryMany {
        match self {
            DictionaryRule::Identity => DictionaryMany::Identity,
            DictionaryRule::Bitflip => DictionaryMany::BitFlip,
            DictionaryRule::SeededHash { seed } => {
                let mut h = Sha256::new();
                h.update(seed.to_le_bytes());
                h.update((stage as u64).to_le_bytes());
                h.update(serde_json::to_vec(earlier).expect("filters serialize"));
                let digest = h.finalize();
                let mut first = [0u8; 8];
                first.copy_from_slice(&digest[..8]);
                DictionaryMany::scrambled(u64::from_le_bytes(first), lambda)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageSpec {
    pub lambda: u32,
    /// Truncation of both the coded domain and the stage poset.
    pub max_len: usize,
    #[serde(flatten)]
    pub rule: DictionaryRule,
    /// Dense sets on the stage poset that the stage filter must meet.
    pub dense: Vec<ManyDense>,
}

impl StageSpec {
    pub fn coded(&self) -> LambdaCoded {
        LambdaCoded::new(self.lambda, self.max_len)
    }

    pub fn poset(&self) -> CohenMany {
        CohenMany::new(self.lambda, self.max_len)
    }

    pub fn dense_sets(&self) -> Vec<DenseSet<ManyCondition>> {
        self.dense.iter().map(ManyDense::dense_set).collect()
    }

    pub fn projection(&self, stage: usize, earlier: &[Filter<ManyCondition>]) -> ManyProjection {
        let dict = self.rule.dictionary(stage, self.lambda, earlier);
        ManyProjection::new(dict, self.lambda, self.max_len, self.max_len)
    }
}

/// One filter per stage on that stage's coded sub-poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductGeneric {
    pub per_stage: Vec<Filter<ManyCondition>>,
}

/// One filter per stage on that stage's Cohen poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationGeneric {
    pub per_stage: Vec<Filter<ManyCondition>>,
}

/// Finite-support product of the stage posets.
pub fn product_poset(stages: &[StageSpec]) -> Product<CohenMany> {
    Product::new(stages.iter().map(StageSpec::poset).collect())
}

/// Product of the coded sub-posets, where the product generic lives.
pub fn coded_product(stages: &[StageSpec]) -> Product<LambdaCoded> {
    Product::new(stages.iter().map(StageSpec::coded).collect())
}

/// Push each stage of `g` forward along the projection chosen from the
/// earlier results, and check it meets that stage's dense family.
pub fn assemble_iteration(stages: &[StageSpec], g: &ProductGeneric) -> Result<IterationGeneric> {
    if g.per_stage.len() != stages.len() {
        return Err(Error::InvalidInput(format!(
            "{} stages but {} product filters",
            stages.len(),
            g.per_stage.len()
        )));
    }
    let mut per_stage: Vec<Filter<ManyCondition>> = Vec::with_capacity(stages.len());
    for (i, (spec, gi)) in stages.iter().zip(&g.per_stage).enumerate() {
        let map = spec.projection(i, &per_stage);
        let ji = pushforward(&map, gi)?;
        if let Some(dense_index) = spec.dense_sets().iter().position(|d| !ji.meets(d)) {
            return Err(Error::StageFailure { stage: i, dense_index });
        }
        per_stage.push(ji);
    }
    Ok(IterationGeneric { per_stage })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTrace {
    pub stage: usize,
    pub lambda: u32,
    pub dictionary: String,
    /// Strongest condition of the product generic at this stage.
    pub generic_condition: ManyCondition,
    /// Strongest condition of the assembled stage filter.
    pub stage_condition: ManyCondition,
    pub filter_size: usize,
    pub dense_met: usize,
    pub dense_total: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineRun {
    pub product: ProductGeneric,
    pub iteration: IterationGeneric,
    pub trace: Vec<StageTrace>,
}

/// Build the product generic stage by stage, each stage generic for the
/// preimages of its dense family under the projection that the earlier
/// stages determine, then assemble the iteration from it.
pub fn run_pipeline(stages: &[StageSpec], budget: usize) -> Result<PipelineRun> {
    let mut product = Vec::with_capacity(stages.len());
    let mut assembled: Vec<Filter<ManyCondition>> = Vec::with_capacity(stages.len());
    for (i, spec) in stages.iter().enumerate() {
        let map = spec.projection(i, &assembled);
        let preimages: Vec<_> = spec.dense_sets().iter().map(|d| project_dense(&map, d)).collect();
        let coded = spec.coded();
        let gi = build_generic(&coded, &preimages, &coded.top(), budget)?;
        assembled.push(pushforward(&map, &gi)?);
        product.push(gi);
    }
    let product = ProductGeneric { per_stage: product };
    let iteration = assemble_iteration(stages, &product)?;
    let mut trace = Vec::with_capacity(stages.len());
    for (i, spec) in stages.iter().enumerate() {
        let gi = &product.per_stage[i];
        let ji = &iteration.per_stage[i];
        let dense = spec.dense_sets();
        trace.push(StageTrace {
            stage: i,
            lambda: spec.lambda,
            dictionary: spec.rule.dictionary(i, spec.lambda, &iteration.per_stage[..i]).name(),
            generic_condition: gi.least(&spec.coded()).cloned().unwrap_or_default(),
            stage_condition: ji.least(&spec.poset()).cloned().unwrap_or_default(),
            filter_size: ji.len(),
            dense_met: dense.iter().filter(|d| ji.meets(d)).count(),
            dense_total: dense.len(),
        });
    }
    Ok(PipelineRun {
        product,
        iteration,
        trace,
    })
}

/// `count` stages with seeded random dense families of size `dense_per_stage`.
pub fn random_stages(
    seed: u64,
    count: usize,
    lambda: u32,
    max_len: usize,
    dense_per_stage: usize,
    rule: DictionaryRule,
) -> Vec<StageSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| StageSpec {
            lambda,
            max_len,
            rule: rule.clone(),
            dense: ManyDense::random_family(&mut rng, lambda, dense_per_stage),
        })
        .collect()
}
