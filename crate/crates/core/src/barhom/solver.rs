//! Deciding equality of homology classes by boundary membership.

use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::chain::{BarChain, CycleClass};
use super::complex::{bar_boundary_with, chain_vector, check_square_zero, CellIndex, TensorModel};
use crate::intlin::{
    modular_verdict, Caps, ExactElimination, MembershipStatus, ModularElimination, SparseIntMatrix, DEFAULT_PRIMES,
};
use crate::report::CheckStatus;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomologyStatus {
    HomologousExact,
    NotHomologous,
    HomologousModP,
}

impl fmt::Display for HomologyStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HomologyStatus::HomologousExact => "homologous-exact",
            HomologyStatus::NotHomologous => "not-homologous",
            HomologyStatus::HomologousModP => "homologous-mod-p",
        })
    }
}

/// Which complex decided the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// The normalized bar complex of the group itself.
    Bar,
    /// The tensor model of a product of cyclic groups, reached through the
    /// Alexander–Whitney map.
    TensorModel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyVerdict {
    pub status: HomologyStatus,
    /// Present for exact verdicts: ∂(witness) = x − y.
    pub witness: Option<BarChain>,
    pub moduli: Vec<u32>,
    pub route: Route,
    /// Integral membership decided in the tensor model, when it was run.
    pub integral_in_model: Option<bool>,
}

impl HomologyVerdict {
    pub fn is_homologous(&self) -> bool {
        self.status != HomologyStatus::NotHomologous
    }

    /// Report status: only exact verdicts pass.
    pub fn check_status(&self) -> CheckStatus {
        match self.status {
            HomologyStatus::HomologousExact => CheckStatus::Pass,
            HomologyStatus::HomologousModP => CheckStatus::CertifiedModP,
            HomologyStatus::NotHomologous => CheckStatus::Fail,
        }
    }

    pub fn summary(&self) -> String {
        let mut s = self.status.to_string();
        if !self.moduli.is_empty() {
            s += &format!(" mod {:?}", self.moduli);
        }
        if self.route == Route::TensorModel {
            s += " via tensor model";
        }
        if self.integral_in_model == Some(true) {
            s += ", integral in tensor model";
        } else if self.integral_in_model == Some(false) {
            s += ", integrally refuted in tensor model";
        }
        if let Some(w) = &self.witness {
            s += &format!(", witness of {} terms", w.len());
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolvePolicy {
    /// Exact membership only; refuses complexes above the column cap.
    Exact,
    /// Modular certificates only.
    Modular(Vec<u32>),
    /// Exact when within the column cap, modular otherwise.
    Auto(Vec<u32>),
}

impl SolvePolicy {
    pub fn auto() -> Self {
        SolvePolicy::Auto(DEFAULT_PRIMES.to_vec())
    }

    pub fn modular() -> Self {
        SolvePolicy::Modular(DEFAULT_PRIMES.to_vec())
    }
}

type Key = (String, usize);

/// Caches boundary factorizations across many membership queries.
pub struct HomologySolver {
    caps: Caps,
    exact: HashMap<Key, ExactElimination>,
    modular: HashMap<(Key, Route, u32), ModularElimination>,
    tensor_exact: HashMap<Key, ExactElimination>,
}

impl Default for HomologySolver {
    fn default() -> Self {
        Self::new(Caps::default())
    }
}

impl HomologySolver {
    pub fn new(caps: Caps) -> Self {
        HomologySolver {
            caps,
            exact: HashMap::new(),
            modular: HashMap::new(),
            tensor_exact: HashMap::new(),
        }
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    /// ∂_{n+1} of the bar complex, after checking ∂ₙ∘∂ₙ₊₁ = 0.
    fn upper_boundary(&self, x: &BarChain) -> Result<SparseIntMatrix> {
        let g = x.group();
        let n = x.degree();
        let upper = bar_boundary_with(g, n + 1, &self.caps)?;
        if n > 0 {
            check_square_zero(&bar_boundary_with(g, n, &self.caps)?, &upper)?;
        }
        Ok(upper)
    }

    fn upper_cols(&self, x: &BarChain) -> usize {
        CellIndex::new(x.group().order(), x.degree() + 1).count().unwrap_or(usize::MAX)
    }

    pub fn homologous(&mut self, x: &CycleClass, y: &CycleClass, policy: &SolvePolicy) -> Result<HomologyVerdict> {
        let diff = x.chain().sub(y.chain())?;
        self.is_boundary(&diff, policy)
    }

    /// Decides whether a cycle bounds.
    pub fn is_boundary(&mut self, diff: &BarChain, policy: &SolvePolicy) -> Result<HomologyVerdict> {
        if diff.is_zero() {
            return Ok(HomologyVerdict {
                status: HomologyStatus::HomologousExact,
                witness: Some(BarChain::zero(diff.group().clone(), diff.degree() + 1)),
                moduli: Vec::new(),
                route: Route::Bar,
                integral_in_model: None,
            });
        }
        let cols = self.upper_cols(diff);
        match policy {
            SolvePolicy::Exact => self.exact(diff),
            SolvePolicy::Auto(_) if cols <= self.caps.max_cols => self.exact(diff),
            SolvePolicy::Auto(primes) | SolvePolicy::Modular(primes) => self.modular(diff, primes, cols),
        }
    }

    fn exact(&mut self, diff: &BarChain) -> Result<HomologyVerdict> {
        let key = (diff.group().name().to_string(), diff.degree());
        if !self.exact.contains_key(&key) {
            let upper = self.upper_boundary(diff)?;
            let e = ExactElimination::new(&upper, &self.caps)?;
            self.exact.insert(key.clone(), e);
        }
        let v = self.exact[&key].solve(&chain_vector(diff))?;
        let witness = match v.witness {
            None => {
                return Ok(HomologyVerdict {
                    status: HomologyStatus::NotHomologous,
                    witness: None,
                    moduli: Vec::new(),
                    route: Route::Bar,
                    integral_in_model: None,
                })
            }
            Some(w) => w,
        };
        let ix = CellIndex::new(diff.group().order(), diff.degree() + 1);
        let mut chain = BarChain::zero(diff.group().clone(), diff.degree() + 1);
        for (j, k) in witness.iter().enumerate() {
            if k.sign() != num_bigint::Sign::NoSign {
                let k = k.to_i64().ok_or(Error::ResourceLimit {
                    what: "witness coefficient bit length",
                    cap: 63,
                    actual: k.bits(),
                })?;
                chain.add_term(&ix.cell(j), k)?;
            }
        }
        if chain.boundary()? != *diff {
            return Err(Error::Mismatch("homology witness failed verification".into()));
        }
        Ok(HomologyVerdict {
            status: HomologyStatus::HomologousExact,
            witness: Some(chain),
            moduli: Vec::new(),
            route: Route::Bar,
            integral_in_model: None,
        })
    }

    fn modular(&mut self, diff: &BarChain, primes: &[u32], cols: usize) -> Result<HomologyVerdict> {
        let factors = diff.group().cyclic_factors().filter(|f| f.len() > 1).map(<[u32]>::to_vec);
        let route = match factors {
            Some(_) if cols > self.caps.max_cols => Route::TensorModel,
            _ => Route::Bar,
        };
        let key = (diff.group().name().to_string(), diff.degree());
        let mut integral = None;
        let (matrix, b) = match route {
            Route::Bar => {
                let need = primes.iter().any(|&p| !self.modular.contains_key(&(key.clone(), route, p)));
                let m = if need { Some(self.upper_boundary(diff)?) } else { None };
                (m, chain_vector(diff))
            }
            Route::TensorModel => {
                let t = TensorModel::new(factors.as_deref().expect("tensor route needs factors"))?;
                let need = primes.iter().any(|&p| !self.modular.contains_key(&(key.clone(), route, p)));
                let upper = t.boundary(diff.degree() + 1, &self.caps)?;
                check_square_zero(&t.boundary(diff.degree(), &self.caps)?, &upper)?;
                let b = t.alexander_whitney(diff, &self.caps)?;
                if upper.cols() <= self.caps.max_cols {
                    if !self.tensor_exact.contains_key(&key) {
                        let e = ExactElimination::new(&upper, &self.caps)?;
                        self.tensor_exact.insert(key.clone(), e);
                    }
                    integral = Some(self.tensor_exact[&key].solve(&b)?.is_member());
                }
                (need.then_some(upper), b)
            }
        };
        if integral == Some(false) {
            // an integral refutation through a chain homotopy equivalence is final
            return Ok(HomologyVerdict {
                status: HomologyStatus::NotHomologous,
                witness: None,
                moduli: Vec::new(),
                route,
                integral_in_model: integral,
            });
        }
        let mut fs = Vec::with_capacity(primes.len());
        for &p in primes {
            let k = (key.clone(), route, p);
            let f = match self.modular.remove(&k) {
                Some(f) => f,
                None => ModularElimination::new(matrix.as_ref().expect("matrix built when missing"), p)?,
            };
            fs.push(f);
        }
        let v = modular_verdict(&fs, &b);
        for f in fs {
            self.modular.insert((key.clone(), route, f.prime()), f);
        }
        let status = match v.status {
            MembershipStatus::NonMember => HomologyStatus::NotHomologous,
            _ => HomologyStatus::HomologousModP,
        };
        Ok(HomologyVerdict {
            status,
            witness: None,
            moduli: v.moduli,
            route,
            integral_in_model: integral,
        })
    }
}
