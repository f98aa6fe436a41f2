//! CNF formulas and an exhaustive satisfiability oracle.

use thiserror::Error;

/// A variable (0-based) with a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Self {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Self {
            var,
            positive: false,
        }
    }

    /// DIMACS encoding: `i > 0` is variable `i - 1` positive, `i < 0` is
    /// variable `-i - 1` negated. Returns `None` for zero.
    pub fn from_dimacs(lit: i64) -> Option<Self> {
        match lit {
            0 => None,
            l if l > 0 => Some(Self::pos((l - 1) as usize)),
            l => Some(Self::neg((-l - 1) as usize)),
        }
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }

    /// Whether this literal is true when its variable has `value`.
    #[inline]
    pub fn holds(self, value: bool) -> bool {
        value == self.positive
    }
}

pub type Clause = Vec<Literal>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("clause {clause} uses variable {var} but the formula has only {n_vars} variables")]
pub struct VariableOutOfRange {
    pub clause: usize,
    pub var: usize,
    pub n_vars: usize,
}

/// A CNF formula over `n_vars` variables. Clauses may be empty, repeated,
/// or contain duplicate and complementary literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    n_vars: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(n_vars: usize, clauses: Vec<Clause>) -> Result<Self, VariableOutOfRange> {
        for (i, clause) in clauses.iter().enumerate() {
            if let Some(lit) = clause.iter().find(|l| l.var >= n_vars) {
                return Err(VariableOutOfRange {
                    clause: i,
                    var: lit.var,
                    n_vars,
                });
            }
        }
        Ok(Self { n_vars, clauses })
    }

    /// Convenience constructor from DIMACS-style signed integers.
    ///
    /// # Panics
    /// On a zero literal or a variable outside `1..=n_vars`.
    pub fn from_dimacs_clauses(n_vars: usize, clauses: &[&[i64]]) -> Self {
        let clauses = clauses
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&l| Literal::from_dimacs(l).expect("zero literal"))
                    .collect()
            })
            .collect();
        Self::new(n_vars, clauses).expect("literal out of range")
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn n_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Maximum clause width.
    pub fn k(&self) -> usize {
        self.clauses.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Same clauses over `n_vars` variables. `n_vars` must not shrink below
    /// the current count.
    pub fn with_n_vars(&self, n_vars: usize) -> Self {
        assert!(n_vars >= self.n_vars);
        Self {
            n_vars,
            clauses: self.clauses.clone(),
        }
    }

    /// Whether the assignment `values[i]` for variable `i` satisfies every
    /// clause.
    pub fn is_satisfied_by(&self, values: &[bool]) -> bool {
        assert!(values.len() >= self.n_vars);
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.holds(values[l.var])))
    }

    /// Like [`is_satisfied_by`](Self::is_satisfied_by) with bit `i` of `mask`
    /// as the value of variable `i`.
    pub fn is_satisfied_by_mask(&self, mask: u64) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.holds(mask >> l.var & 1 == 1)))
    }

    /// Relabels variable `i` as `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n_vars);
        let clauses = self
            .clauses
            .iter()
            .map(|c| {
                c.iter()
                    .map(|l| Literal {
                        var: perm[l.var],
                        positive: l.positive,
                    })
                    .collect()
            })
            .collect();
        Self {
            n_vars: self.n_vars,
            clauses,
        }
    }
}

/// Adds one unused variable when the variable count is odd.
pub fn pad_to_even(f: &CnfFormula) -> CnfFormula {
    if f.n_vars().is_multiple_of(2) {
        f.clone()
    } else {
        f.with_n_vars(f.n_vars() + 1)
    }
}

/// Outcome of a satisfiability decision. A witness is an `X`-half mask and a
/// `Y`-half mask over the padded variable split (see
/// [`VariableSplit`](crate::reduction::VariableSplit)).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SatVerdict {
    pub satisfiable: bool,
    pub witness: Option<Witness>,
}

impl SatVerdict {
    pub fn unsat() -> Self {
        Self {
            satisfiable: false,
            witness: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub x_mask: u64,
    pub y_mask: u64,
}

impl Witness {
    /// Full assignment mask where the `X` half occupies the low `l` bits.
    pub fn combined(self, l: u32) -> u64 {
        if l >= 64 {
            self.x_mask
        } else {
            self.x_mask | self.y_mask << l
        }
    }

    /// Truth values of the first `n_vars` variables.
    pub fn assignment(self, l: u32, n_vars: usize) -> Vec<bool> {
        let mask = self.combined(l);
        (0..n_vars).map(|i| mask >> i & 1 == 1).collect()
    }
}

/// Largest variable count [`brute_force_sat`] accepts.
pub const BRUTE_FORCE_MAX_VARS: usize = 40;

/// Scans all `2^n` assignments in increasing mask order and reports the first
/// satisfying one, split at `l = padded n / 2`. Practical up to about 24
/// variables.
///
/// # Panics
/// If the formula has more than [`BRUTE_FORCE_MAX_VARS`] variables.
pub fn brute_force_sat(f: &CnfFormula) -> SatVerdict {
    let n = f.n_vars();
    assert!(
        n <= BRUTE_FORCE_MAX_VARS,
        "brute force is limited to {BRUTE_FORCE_MAX_VARS} variables, got {n}"
    );
    let l = n.div_ceil(2) as u32;
    let x_bits = (1u64 << l) - 1;
    (0..1u64 << n)
        .find(|&mask| f.is_satisfied_by_mask(mask))
        .map_or_else(SatVerdict::unsat, |mask| SatVerdict {
            satisfiable: true,
            witness: Some(Witness {
                x_mask: mask & x_bits,
                y_mask: mask >> l,
            }),
        })
}
