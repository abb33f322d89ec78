//! Validated problem instances.
//!
//! A [`ConfigDocument`] is checked by [`audit`], which runs every invariant
//! and reports each one by name. [`SearchConfig`] can only be obtained from
//! a document whose audit passed, so the pipeline never sees an invalid
//! instance.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::blowdown::{BlowdownChain, BlowdownError};
use crate::lattice::{ClassVector, IntersectionForm, LatticeError, SphereClass};
use crate::presets::ConfigDocument;
use crate::search::solver::CandidateSolver;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("malformed config document: {0}")]
    Schema(String),
    #[error("{what}: expected {expected} entries, found {found}")]
    Arity {
        what: String,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Blowdown(#[from] BlowdownError),
    #[error("form has b+ = {found}, the chamber analysis needs b+ = 1")]
    BPlus { found: usize },
    #[error("sphere S{index} has square {square}, expected a negative square")]
    SphereNotNegative { index: usize, square: BigInt },
    #[error("sphere S{sphere} is not orthogonal to chain class R{chain} (pairing {pairing})")]
    SphereNotOrthogonal {
        sphere: usize,
        chain: usize,
        pairing: BigInt,
    },
    #[error("H is not orthogonal to chain class R{chain} (pairing {pairing})")]
    ChamberNotOrthogonal { chain: usize, pairing: BigInt },
    #[error("H has square {square}, expected a positive square")]
    ChamberSquare { square: BigInt },
    #[error("H' has square {square}, expected a positive square")]
    ReferenceSquare { square: BigInt },
    #[error("H.H' = {pairing}, expected a positive pairing")]
    ChambersMisaligned { pairing: BigInt },
    #[error(
        "chain and sphere classes do not form a rational basis (evaluation matrix is singular)"
    )]
    SingularBasis,
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
}

/// Names of the audit checks, in the order they run.
pub const CHECK_NAMES: [&str; 13] = [
    "document shape",
    "gram symmetric",
    "form nondegenerate",
    "b+ = 1",
    "blow-down chain",
    "extension tuples",
    "sphere squares negative",
    "spheres orthogonal to chain",
    "H orthogonal to chain",
    "H positive square",
    "H' positive square",
    "H.H' positive",
    "evaluation basis invertible",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail(ConfigError),
    /// Not run because an earlier check it depends on failed.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub status: CheckStatus,
}

#[derive(Debug, Clone)]
pub struct Audit {
    pub checks: Vec<CheckOutcome>,
    pub config: Option<SearchConfig>,
}

impl Audit {
    pub fn passed(&self) -> bool {
        self.config.is_some()
    }

    pub fn first_failure(&self) -> Option<&ConfigError> {
        self.checks.iter().find_map(|c| match &c.status {
            CheckStatus::Fail(e) => Some(e),
            _ => None,
        })
    }
}

#[derive(Default)]
struct Auditor {
    checks: Vec<CheckOutcome>,
}

impl Auditor {
    fn record(&mut self, name: &'static str, result: Result<(), ConfigError>) -> bool {
        let ok = result.is_ok();
        let status = match result {
            Ok(()) => CheckStatus::Pass,
            Err(e) => CheckStatus::Fail(e),
        };
        self.checks.push(CheckOutcome { name, status });
        ok
    }

    fn finish(mut self, config: Option<SearchConfig>) -> Audit {
        for name in CHECK_NAMES {
            if !self.checks.iter().any(|c| c.name == name) {
                self.checks.push(CheckOutcome {
                    name,
                    status: CheckStatus::Skipped,
                });
            }
        }
        let all_pass = self.checks.iter().all(|c| c.status == CheckStatus::Pass);
        Audit {
            checks: self.checks,
            config: config.filter(|_| all_pass),
        }
    }
}

fn arity(what: impl Into<String>, expected: usize, found: usize) -> Result<(), ConfigError> {
    if expected == found {
        Ok(())
    } else {
        Err(ConfigError::Arity {
            what: what.into(),
            expected,
            found,
        })
    }
}

fn check_shape(doc: &ConfigDocument) -> Result<(), ConfigError> {
    let n = doc.rank;
    if n == 0 {
        return Err(ConfigError::Schema("rank must be positive".into()));
    }
    arity("gram rows", n, doc.gram.len())?;
    for (i, row) in doc.gram.iter().enumerate() {
        arity(format!("gram row {i}"), n, row.len())?;
    }
    arity("chain classes", doc.chain.p + 1, doc.chain.classes.len())?;
    arity(
        "basis classes (chain + spheres)",
        n,
        doc.chain.classes.len() + doc.spheres.len(),
    )?;
    for (i, c) in doc.chain.classes.iter().enumerate() {
        arity(format!("chain class R{i}"), n, c.len())?;
    }
    for (i, s) in doc.spheres.iter().enumerate() {
        arity(format!("sphere S{}", i + 1), n, s.len())?;
    }
    arity("H", n, doc.h.len())?;
    arity("Hprime", n, doc.h_prime.len())?;
    Ok(())
}

/// Runs every invariant check on `doc`, in [`CHECK_NAMES`] order.
pub fn audit(doc: &ConfigDocument) -> Audit {
    let mut a = Auditor::default();
    if !a.record("document shape", check_shape(doc)) {
        return a.finish(None);
    }
    let symmetric = (0..doc.rank)
        .flat_map(|i| (i + 1..doc.rank).map(move |j| (i, j)))
        .find(|&(i, j)| doc.gram[i][j] != doc.gram[j][i])
        .map_or(Ok(()), |(row, col)| {
            Err(LatticeError::NotSymmetric { row, col }.into())
        });
    if !a.record("gram symmetric", symmetric) {
        return a.finish(None);
    }
    let form = match IntersectionForm::from_i64_rows(&doc.gram) {
        Ok(f) => {
            a.record("form nondegenerate", Ok(()));
            f
        }
        Err(e) => {
            a.record("form nondegenerate", Err(e.into()));
            return a.finish(None);
        }
    };
    a.record(
        "b+ = 1",
        if form.b_plus() == 1 {
            Ok(())
        } else {
            Err(ConfigError::BPlus {
                found: form.b_plus(),
            })
        },
    );

    let classes = |rows: &[Vec<i64>]| -> Vec<ClassVector> {
        rows.iter().map(|r| ClassVector::from_i64s(r)).collect()
    };
    let chain_classes = classes(&doc.chain.classes);
    let sphere_classes = classes(&doc.spheres);
    let h = ClassVector::from_i64s(&doc.h);
    let h_prime = ClassVector::from_i64s(&doc.h_prime);
    let pair = |v: &ClassVector, w: &ClassVector| form.pair(v, w).expect("arity checked");

    let chain = match BlowdownChain::new(&form, doc.chain.p, chain_classes.clone()) {
        Ok(c) => {
            a.record("blow-down chain", Ok(()));
            match c.with_extension_tuples(doc.chain.extension_tuples.clone()) {
                Ok(c) => {
                    a.record("extension tuples", Ok(()));
                    Some(c)
                }
                Err(e) => {
                    a.record("extension tuples", Err(e.into()));
                    None
                }
            }
        }
        Err(e) => {
            a.record("blow-down chain", Err(e.into()));
            None
        }
    };

    let mut spheres = Vec::with_capacity(sphere_classes.len());
    let negative = sphere_classes
        .iter()
        .enumerate()
        .try_for_each(|(i, s)| match SphereClass::new(&form, s.clone()) {
            Ok(sc) => {
                spheres.push(sc);
                Ok(())
            }
            Err(LatticeError::NonNegativeSphere { square }) => {
                Err(ConfigError::SphereNotNegative {
                    index: i + 1,
                    square,
                })
            }
            Err(e) => Err(e.into()),
        });
    a.record("sphere squares negative", negative);

    let orthogonal = sphere_classes.iter().enumerate().try_for_each(|(i, s)| {
        chain_classes.iter().enumerate().try_for_each(|(j, r)| {
            let pairing = pair(s, r);
            if pairing.is_zero() {
                Ok(())
            } else {
                Err(ConfigError::SphereNotOrthogonal {
                    sphere: i + 1,
                    chain: j,
                    pairing,
                })
            }
        })
    });
    a.record("spheres orthogonal to chain", orthogonal);

    let h_orthogonal = chain_classes.iter().enumerate().try_for_each(|(j, r)| {
        let pairing = pair(&h, r);
        if pairing.is_zero() {
            Ok(())
        } else {
            Err(ConfigError::ChamberNotOrthogonal { chain: j, pairing })
        }
    });
    a.record("H orthogonal to chain", h_orthogonal);

    let square = pair(&h, &h);
    a.record(
        "H positive square",
        if square.is_positive() {
            Ok(())
        } else {
            Err(ConfigError::ChamberSquare { square })
        },
    );
    let square = pair(&h_prime, &h_prime);
    a.record(
        "H' positive square",
        if square.is_positive() {
            Ok(())
        } else {
            Err(ConfigError::ReferenceSquare { square })
        },
    );
    let pairing = pair(&h, &h_prime);
    a.record(
        "H.H' positive",
        if pairing.is_positive() {
            Ok(())
        } else {
            Err(ConfigError::ChambersMisaligned { pairing })
        },
    );

    let basis: Vec<ClassVector> = chain_classes
        .iter()
        .chain(&sphere_classes)
        .cloned()
        .collect();
    let solver = form
        .evaluation_matrix(&basis)
        .map_err(ConfigError::from)
        .and_then(|m| CandidateSolver::new(&m).map_err(|_| ConfigError::SingularBasis));
    let solver = match solver {
        Ok(s) => {
            a.record("evaluation basis invertible", Ok(()));
            Some(s)
        }
        Err(e) => {
            a.record("evaluation basis invertible", Err(e));
            None
        }
    };

    let config = match (chain, solver) {
        (Some(chain), Some(solver)) if spheres.len() == sphere_classes.len() => {
            Some(SearchConfig {
                document: doc.clone(),
                form,
                chain,
                spheres,
                h,
                h_prime,
                solver,
            })
        }
        _ => None,
    };
    a.finish(config)
}

/// One complete, validated problem instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    document: ConfigDocument,
    form: IntersectionForm,
    chain: BlowdownChain,
    spheres: Vec<SphereClass>,
    h: ClassVector,
    h_prime: ClassVector,
    solver: CandidateSolver,
}

impl SearchConfig {
    /// Validates `doc`, failing with the first failed check.
    pub fn from_document(doc: &ConfigDocument) -> Result<Self, ConfigError> {
        let audit = audit(doc);
        match audit.config {
            Some(c) => Ok(c),
            None => Err(audit
                .first_failure()
                .cloned()
                .unwrap_or_else(|| ConfigError::Schema("validation failed".into()))),
        }
    }

    pub fn document(&self) -> &ConfigDocument {
        &self.document
    }

    pub fn label(&self) -> &str {
        &self.document.label
    }

    pub fn form(&self) -> &IntersectionForm {
        &self.form
    }

    pub fn chain(&self) -> &BlowdownChain {
        &self.chain
    }

    pub fn spheres(&self) -> &[SphereClass] {
        &self.spheres
    }

    pub fn h(&self) -> &ClassVector {
        &self.h
    }

    pub fn h_prime(&self) -> &ClassVector {
        &self.h_prime
    }

    pub fn solver(&self) -> &CandidateSolver {
        &self.solver
    }

    /// Chain classes followed by sphere classes; the rows of the evaluation
    /// system solved for each candidate.
    pub fn basis(&self) -> Vec<ClassVector> {
        self.chain
            .classes()
            .iter()
            .cloned()
            .chain(self.spheres.iter().map(|s| s.class().clone()))
            .collect()
    }
}
