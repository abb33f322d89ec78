//! The staged enumeration.
//!
//! The candidate space is the Cartesian product
//! `extension tuples × ∏ adjunctive ranges`, addressed by a mixed-radix
//! index. Each candidate is solved for its class and pushed through four
//! filters:
//!
//! 1. every candidate is counted;
//! 2. the class must be integral and characteristic;
//! 3. its ambient square must reach `2χ + 3σ` (non-negative formal dimension);
//! 4. its pairings with `H` and `H'` must be nonzero and of opposite sign.
//!
//! Candidates reaching stage 4 with a zero pairing are tallied separately.
//! Tallies are plain sums plus a sorted class list, so any partition of the
//! index space into chunks, in any order, on any number of workers, yields
//! the same report.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{BigRat, LinalgError};
use crate::lattice::{ClassVector, LatticeError, RationalClass, SphereClass};
use crate::search::config::SearchConfig;
use crate::search::solver::NarrowSolver;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("{what}: expected {expected} values, found {found}")]
    Arity {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("basic-class list is not known to be complete: some surviving class is not zero-dimensional")]
    IncompleteBasicClasses,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `{-p, -p + 2, …, p}`: the evaluations allowed on a sphere of square `-p`.
pub fn adjunctive_range(sphere: &SphereClass) -> Vec<i64> {
    let p = sphere.p() as i64;
    (0..=p).map(|k| -p + 2 * k).collect()
}

/// The unique rational class with evaluation `tuple` on the chain and
/// `sphere_evals` on the spheres.
pub fn solve_candidate(
    config: &SearchConfig,
    tuple: &[i64],
    sphere_evals: &[i64],
) -> Result<RationalClass, SearchError> {
    let chain_len = config.chain().classes().len();
    if tuple.len() != chain_len {
        return Err(SearchError::Arity {
            what: "extension tuple",
            expected: chain_len,
            found: tuple.len(),
        });
    }
    if sphere_evals.len() != config.spheres().len() {
        return Err(SearchError::Arity {
            what: "sphere evaluations",
            expected: config.spheres().len(),
            found: sphere_evals.len(),
        });
    }
    let rhs: Vec<BigInt> = tuple
        .iter()
        .chain(sphere_evals)
        .copied()
        .map(BigInt::from)
        .collect();
    Ok(config.solver().solve(&rhs)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StageCounts {
    pub candidates: u64,
    pub characteristic: u64,
    pub dimension: u64,
    pub basic: u64,
}

impl StageCounts {
    pub fn as_array(&self) -> [u64; 4] {
        [
            self.candidates,
            self.characteristic,
            self.dimension,
            self.basic,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageReport {
    pub counts: StageCounts,
    /// Surviving classes in ascending coordinate order.
    pub basic_classes: Vec<ClassVector>,
    /// Stage-4 entrants excluded because `K·H = 0` or `K·H' = 0`.
    pub zero_pairing_diagnostics: u64,
    pub lemma_verified: bool,
    /// `None` when the basic-class list is not known to be complete.
    pub minimal: Option<bool>,
}

/// Partial result over some subset of the candidate space.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StageTally {
    pub counts: StageCounts,
    pub zero_pairing: u64,
    pub basic_classes: Vec<ClassVector>,
}

impl StageTally {
    pub fn merge(mut self, other: Self) -> Self {
        self.counts.candidates += other.counts.candidates;
        self.counts.characteristic += other.counts.characteristic;
        self.counts.dimension += other.counts.dimension;
        self.counts.basic += other.counts.basic;
        self.zero_pairing += other.zero_pairing;
        self.basic_classes.extend(other.basic_classes);
        self
    }
}

/// Mixed-radix addressing of `tuples × ∏ ranges`, last sphere fastest.
#[derive(Debug, Clone)]
pub struct CandidateSpace {
    tuples: Vec<Vec<i64>>,
    sphere_p: Vec<i64>,
    len: u64,
}

impl CandidateSpace {
    pub fn new(config: &SearchConfig) -> Self {
        let tuples = config.chain().extension_tuples().to_vec();
        let sphere_p: Vec<i64> = config.spheres().iter().map(|s| s.p() as i64).collect();
        let len = sphere_p
            .iter()
            .fold(tuples.len() as u64, |acc, &p| acc * (p as u64 + 1));
        Self {
            tuples,
            sphere_p,
            len,
        }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Largest absolute value any right-hand side can take.
    pub fn max_abs_rhs(&self) -> u64 {
        self.tuples
            .iter()
            .flatten()
            .map(|x| x.unsigned_abs())
            .chain(self.sphere_p.iter().map(|p| p.unsigned_abs()))
            .max()
            .unwrap_or(0)
    }

    /// Writes `tuple ++ sphere evaluations` for `index` into `rhs`.
    pub fn decode(&self, mut index: u64, rhs: &mut [i64]) {
        debug_assert!(index < self.len);
        let k = self.tuples.first().map_or(0, Vec::len);
        for (slot, &p) in rhs[k..].iter_mut().zip(&self.sphere_p).rev() {
            let radix = p as u64 + 1;
            *slot = -p + 2 * (index % radix) as i64;
            index /= radix;
        }
        rhs[..k].copy_from_slice(&self.tuples[index as usize]);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Arithmetic {
    /// Fixed-width fast path when overflow is ruled out, else big integers.
    #[default]
    Auto,
    /// Big integers throughout.
    Wide,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineOptions {
    /// Worker count; `None` uses the global pool. Ignored without the
    /// `parallel` feature.
    pub threads: Option<usize>,
    pub chunk_size: u64,
    pub arithmetic: Arithmetic,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            threads: None,
            chunk_size: 4096,
            arithmetic: Arithmetic::Auto,
        }
    }
}

/// Fixed-width copies of the form and chamber data.
struct NarrowData {
    solver: NarrowSolver,
    gram: Vec<i128>,
    diag_parity: Vec<bool>,
    gram_h: Vec<i128>,
    gram_h_prime: Vec<i128>,
    bound: i128,
}

impl NarrowData {
    fn new(config: &SearchConfig, space: &CandidateSpace) -> Option<Self> {
        let solver = config.solver().narrow(space.max_abs_rhs())?;
        let form = config.form();
        let to_i128 = |v: &[BigInt]| {
            v.iter()
                .map(ToPrimitive::to_i128)
                .collect::<Option<Vec<_>>>()
        };
        let gram = to_i128(
            &form
                .gram()
                .iter_rows()
                .flatten()
                .cloned()
                .collect::<Vec<_>>(),
        )?;
        let n = form.rank();
        let diag_parity = (0..n).map(|i| gram[i * n + i] & 1 == 1).collect();
        let gram_h = to_i128(&form.dual(config.h()).ok()?)?;
        let gram_h_prime = to_i128(&form.dual(config.h_prime()).ok()?)?;
        let bound = form.derived_bound().to_i128()?;
        Some(Self {
            solver,
            gram,
            diag_parity,
            gram_h,
            gram_h_prime,
            bound,
        })
    }
}

fn checked_dot(a: &[i128], b: &[i128]) -> Option<i128> {
    a.iter()
        .zip(b)
        .try_fold(0i128, |acc, (x, y)| acc.checked_add(x.checked_mul(*y)?))
}

enum Verdict {
    Rejected,
    Characteristic,
    Dimension,
    ZeroPairing,
    Basic(ClassVector),
}

struct Kernel<'a> {
    config: &'a SearchConfig,
    space: CandidateSpace,
    narrow: Option<NarrowData>,
    bound: BigInt,
    rank: usize,
}

impl<'a> Kernel<'a> {
    fn new(config: &'a SearchConfig, arithmetic: Arithmetic) -> Self {
        let space = CandidateSpace::new(config);
        let narrow = match arithmetic {
            Arithmetic::Auto => NarrowData::new(config, &space),
            Arithmetic::Wide => None,
        };
        Self {
            config,
            space,
            narrow,
            bound: config.form().derived_bound(),
            rank: config.form().rank(),
        }
    }

    fn classify_wide(&self, rhs: &[i64]) -> Verdict {
        let config = self.config;
        let form = config.form();
        let rhs: Vec<BigInt> = rhs.iter().copied().map(BigInt::from).collect();
        let Some(k) = config.solver().solve_integral(&rhs).expect("rank checked") else {
            return Verdict::Rejected;
        };
        if !form.is_characteristic(&k) {
            return Verdict::Rejected;
        }
        if form.square(&k).expect("rank checked") < self.bound {
            return Verdict::Characteristic;
        }
        let kh = form.pair(&k, config.h()).expect("rank checked");
        let khp = form.pair(&k, config.h_prime()).expect("rank checked");
        if kh.is_zero() || khp.is_zero() {
            Verdict::ZeroPairing
        } else if kh.is_positive() != khp.is_positive() {
            Verdict::Basic(k)
        } else {
            Verdict::Dimension
        }
    }

    /// `None` when an intermediate would overflow; the caller then redoes
    /// the candidate with big integers.
    fn classify_narrow(&self, nd: &NarrowData, rhs: &[i64], k: &mut [i128]) -> Option<Verdict> {
        if !nd.solver.solve_integral(rhs, k) {
            return Some(Verdict::Rejected);
        }
        let n = self.rank;
        let mut square = 0i128;
        for (i, row) in nd.gram.chunks_exact(n).enumerate() {
            let gk = checked_dot(row, k)?;
            if (gk & 1 == 1) != nd.diag_parity[i] {
                return Some(Verdict::Rejected);
            }
            square = square.checked_add(gk.checked_mul(k[i])?)?;
        }
        if square < nd.bound {
            return Some(Verdict::Characteristic);
        }
        let kh = checked_dot(&nd.gram_h, k)?;
        let khp = checked_dot(&nd.gram_h_prime, k)?;
        Some(if kh == 0 || khp == 0 {
            Verdict::ZeroPairing
        } else if (kh > 0) != (khp > 0) {
            Verdict::Basic(ClassVector::new(
                k.iter().map(|&x| BigInt::from(x)).collect(),
            ))
        } else {
            Verdict::Dimension
        })
    }

    fn tally(&self, indices: impl IntoIterator<Item = u64>) -> StageTally {
        let mut tally = StageTally::default();
        let mut rhs = vec![0i64; self.rank];
        let mut k = vec![0i128; self.rank];
        for index in indices {
            self.space.decode(index, &mut rhs);
            let verdict = self
                .narrow
                .as_ref()
                .and_then(|nd| self.classify_narrow(nd, &rhs, &mut k))
                .unwrap_or_else(|| self.classify_wide(&rhs));
            tally.counts.candidates += 1;
            let c = &mut tally.counts;
            match verdict {
                Verdict::Rejected => {}
                Verdict::Characteristic => c.characteristic += 1,
                Verdict::Dimension => {
                    c.characteristic += 1;
                    c.dimension += 1;
                }
                Verdict::ZeroPairing => {
                    c.characteristic += 1;
                    c.dimension += 1;
                    tally.zero_pairing += 1;
                }
                Verdict::Basic(class) => {
                    c.characteristic += 1;
                    c.dimension += 1;
                    c.basic += 1;
                    tally.basic_classes.push(class);
                }
            }
        }
        tally
    }
}

/// Runs the stages over an arbitrary set of candidate indices. Indices
/// must lie in `0..CandidateSpace::new(config).len()`.
pub fn tally_indices(
    config: &SearchConfig,
    indices: impl IntoIterator<Item = u64>,
    arithmetic: Arithmetic,
) -> StageTally {
    Kernel::new(config, arithmetic).tally(indices)
}

/// Packages a tally over the whole candidate space as a report, running the
/// lemma and minimality checks.
pub fn finish_report(config: &SearchConfig, tally: StageTally) -> StageReport {
    let mut basic_classes = tally.basic_classes;
    basic_classes.sort();
    let mut report = StageReport {
        counts: tally.counts,
        basic_classes,
        zero_pairing_diagnostics: tally.zero_pairing,
        lemma_verified: false,
        minimal: None,
    };
    report.lemma_verified = verify_lemma_hypothesis(config, &report);
    report.minimal = check_minimality(config, &report).ok();
    report
}

pub fn run_pipeline(config: &SearchConfig) -> StageReport {
    run_pipeline_with(config, &PipelineOptions::default())
}

pub fn run_pipeline_with(config: &SearchConfig, options: &PipelineOptions) -> StageReport {
    let kernel = Kernel::new(config, options.arithmetic);
    let total = kernel.space.len();
    let chunk = options.chunk_size.max(1);
    let chunks = total.div_ceil(chunk);
    let run_chunk = |c: u64| kernel.tally(c * chunk..((c + 1) * chunk).min(total));

    #[cfg(feature = "parallel")]
    let tally = {
        use rayon::prelude::*;
        let par = || {
            (0..chunks)
                .into_par_iter()
                .map(run_chunk)
                .reduce(StageTally::default, StageTally::merge)
        };
        match options.threads {
            Some(1) => (0..chunks)
                .map(run_chunk)
                .fold(StageTally::default(), StageTally::merge),
            Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(par),
                Err(_) => par(),
            },
            None => par(),
        }
    };
    #[cfg(not(feature = "parallel"))]
    let tally = (0..chunks)
        .map(run_chunk)
        .fold(StageTally::default(), StageTally::merge);

    finish_report(config, tally)
}

/// Every surviving class has formal dimension zero on the blown-down
/// manifold. This is the hypothesis that makes the adjunctive enumeration
/// a complete list of basic classes.
pub fn verify_lemma_hypothesis(config: &SearchConfig, report: &StageReport) -> bool {
    report.basic_classes.iter().all(|k| {
        config
            .chain()
            .formal_dimension(config.form(), k)
            .is_ok_and(|d| d.is_zero())
    })
}

/// A blow-up would force basic classes to pair up as `L ± E` with
/// `(2E)² = -4`. The manifold is minimal unless some pair of distinct basic
/// classes differs by a class of blown-down square `-4`.
pub fn check_minimality(config: &SearchConfig, report: &StageReport) -> Result<bool, SearchError> {
    if !report.lemma_verified {
        return Err(SearchError::IncompleteBasicClasses);
    }
    let target = BigRat::from_integer((-4).into());
    let classes = &report.basic_classes;
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            if a == b {
                continue;
            }
            let diff = a - b;
            if config.chain().blown_down_square(config.form(), &diff)? == target {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
