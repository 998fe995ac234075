//! Cross-checks between the brute-force table, the generating functions and
//! the explicit constructions.
//!
//! Checks run in a fixed order and each records the first mismatch it meets,
//! so the report is a pure function of its inputs.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::construct::{
    binomial, count_full_cycle, count_k_ge_4, count_two_cycle, enumerate_big_cycle, recognize,
    three_cycle_family,
};
use crate::enumerate::{
    collect_strong_avoiders, count_involutions_132, count_only_3cycle_avoiders, count_strong_312,
    count_strong_full_scan, ClassTable, Options,
};
use crate::error::{invalid, Result};
use crate::perm::{Pattern, Permutation};
use crate::series::{
    component_series, d_identity_residual, master_identity_residual, sav132, sav312,
    three_cycle_identity_residual, Component, PowerSeries,
};

/// Largest `n` for the checks that walk explicit permutation sets.
pub const STRUCTURE_LIMIT: usize = 14;
/// Largest `n` for the 2-cycle and 3-cycle layering checks.
pub const SMALL_STRUCTURE_LIMIT: usize = 12;
/// Largest `n` for the strong-312 brute count.
pub const SAV312_LIMIT: usize = 11;
/// Largest `n` for the full `S_n` scan used as a second 312 oracle.
pub const FULL_SCAN_LIMIT: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub n: usize,
    pub k: Option<usize>,
    pub expected: String,
    pub got: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}", self.n)?;
        if let Some(k) = self.k {
            write!(f, " k={k}")?;
        }
        write!(f, " expected={} got={}", self.expected, self.got)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub description: &'static str,
    /// Number of individual comparisons made.
    pub cases: usize,
    pub mismatch: Option<Mismatch>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n_max: usize,
    pub order: usize,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verify n_max={} order={}", self.n_max, self.order);
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let status = if c.passed() { "ok  " } else { "FAIL" };
            let _ = writeln!(
                out,
                "{status} {:<width$} {:>6} cases  {}",
                c.name, c.cases, c.description
            );
            if let Some(m) = &c.mismatch {
                let _ = writeln!(out, "     first mismatch: {m}");
            }
        }
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        let _ = writeln!(out, "{passed}/{} checks passed", self.checks.len());
        if let Some(c) = self.first_failure() {
            let m = c.mismatch.as_ref().expect("failed check has a mismatch");
            let _ = writeln!(out, "first failure: {} {m}", c.name);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Accumulates comparisons for one check, keeping only the first mismatch.
struct Check {
    outcome: CheckOutcome,
}

impl Check {
    fn new(name: &'static str, description: &'static str) -> Self {
        Check {
            outcome: CheckOutcome {
                name,
                description,
                cases: 0,
                mismatch: None,
            },
        }
    }

    fn compare<T: PartialEq + fmt::Display>(
        &mut self,
        n: usize,
        k: Option<usize>,
        expected: T,
        got: T,
    ) {
        self.outcome.cases += 1;
        if expected != got && self.outcome.mismatch.is_none() {
            self.outcome.mismatch = Some(Mismatch {
                n,
                k,
                expected: expected.to_string(),
                got: got.to_string(),
            });
        }
    }

    fn require(
        &mut self,
        n: usize,
        k: Option<usize>,
        ok: bool,
        expected: impl fmt::Display,
        got: impl fmt::Display,
    ) {
        self.outcome.cases += 1;
        if !ok && self.outcome.mismatch.is_none() {
            self.outcome.mismatch = Some(Mismatch {
                n,
                k,
                expected: expected.to_string(),
                got: got.to_string(),
            });
        }
    }

    fn done(self) -> CheckOutcome {
        self.outcome
    }
}

fn coeff(s: &PowerSeries, n: usize) -> BigInt {
    s.coeff(n).cloned().unwrap_or_else(BigInt::zero)
}

fn residual_check(name: &'static str, description: &'static str, r: &PowerSeries) -> CheckOutcome {
    let mut c = Check::new(name, description);
    for (n, v) in r.coeffs().iter().enumerate() {
        c.compare(n, None, BigInt::zero(), v.clone());
    }
    c.done()
}

fn table_column_check(
    name: &'static str,
    description: &'static str,
    table: &ClassTable,
    series: &PowerSeries,
    k: usize,
) -> CheckOutcome {
    let mut c = Check::new(name, description);
    for n in k..=table.n_max() {
        c.compare(
            n,
            Some(k),
            coeff(series, n),
            BigInt::from(table.count(n, k)),
        );
    }
    c.done()
}

/// Runs every check against `table`, using series truncated at `order`.
pub fn run_checks(table: &ClassTable, order: usize, opts: &Options) -> Result<VerifyReport> {
    let n_max = table.n_max();
    if order < n_max {
        return Err(invalid(format!("order {order} is below n_max {n_max}")));
    }
    let a = sav132(order);
    let mut checks = Vec::new();

    let mut c = Check::new("totals_vs_sav132", "brute totals equal [x^n] sav132");
    for n in 1..=n_max {
        c.compare(
            n,
            None,
            coeff(&a, n),
            BigInt::from(table.total(n).unwrap_or(0)),
        );
    }
    checks.push(c.done());

    let mut c = Check::new(
        "table_invariants",
        "a_{n,k} = 0 unless k <= 3 or k | n; a_{n+1,1} = a_n",
    );
    let bad = table.violations();
    let cells: usize = (1..=n_max).sum::<usize>();
    c.outcome.cases = cells;
    if let Some(&(n, k, expected, got)) = bad.first() {
        c.outcome.mismatch = Some(Mismatch {
            n,
            k: Some(k),
            expected: expected.to_string(),
            got: got.to_string(),
        });
    }
    checks.push(c.done());

    let a1 = component_series(Component::A1, order);
    checks.push(table_column_check(
        "a1_series",
        "a_{n,1} equals [x^n] x a(x)",
        table,
        &a1,
        1,
    ));

    let mut c = Check::new("a2_binomial", "a_{n,2} = C(n-1, floor((n-2)/2))");
    for n in 2..=n_max {
        c.compare(
            n,
            Some(2),
            count_two_cycle(n)?,
            u128::from(table.count(n, 2)),
        );
    }
    checks.push(c.done());

    let a2 = component_series(Component::A2, order);
    checks.push(table_column_check(
        "a2_series",
        "a_{n,2} equals [x^n] a2",
        table,
        &a2,
        2,
    ));

    let a3 = component_series(Component::A3, order);
    checks.push(table_column_check(
        "a3_series",
        "a_{n,3} equals [x^n] a3",
        table,
        &a3,
        3,
    ));

    let mut c = Check::new(
        "a_ge4_closed_form",
        "Catalan-sum formula equals sum_{k>=4} a_{n,k}",
    );
    for n in 4..=n_max {
        c.compare(n, None, count_k_ge_4(n)?, u128::from(table.count_k_ge_4(n)));
    }
    checks.push(c.done());

    let mut c = Check::new("a_ge4_series", "[x^n] a_ge4 equals sum_{k>=4} a_{n,k}");
    let age4 = component_series(Component::AGe4, order);
    for n in 1..=n_max {
        c.compare(
            n,
            None,
            coeff(&age4, n),
            BigInt::from(table.count_k_ge_4(n)),
        );
    }
    checks.push(c.done());

    let mut c = Check::new("full_cycle", "coprime Catalan sum equals a_{n,n}");
    for n in 3..=n_max {
        c.compare(
            n,
            Some(n),
            count_full_cycle(n)?,
            u128::from(table.count(n, n)),
        );
    }
    checks.push(c.done());

    let mut c = Check::new(
        "involutions",
        "132-avoiding involutions number C(n, floor(n/2))",
    );
    let d = component_series(Component::D, order);
    for n in 1..=n_max.min(crate::enumerate::TABLE_LIMIT) {
        let expected = binomial(n, n / 2)?;
        c.compare(
            n,
            None,
            expected,
            u128::from(count_involutions_132(n, opts)?),
        );
        c.compare(n, None, BigInt::from(expected), coeff(&d, n));
    }
    checks.push(c.done());

    let mut c3 = Check::new("b_series", "pure 3-cycle avoiders equal [x^n] b");
    let b = component_series(Component::B, order);
    for n in 1..=n_max.min(crate::enumerate::TABLE_LIMIT) {
        c3.compare(
            n,
            None,
            coeff(&b, n),
            BigInt::from(count_only_3cycle_avoiders(n, opts)?),
        );
    }
    checks.push(c3.done());

    let mut two = Check::new(
        "two_cycle_involution",
        "n in a 2-cycle forces an involution",
    );
    let mut big = Check::new(
        "big_cycle_sets",
        "constructions equal the brute set with n in a cycle of length >= 4",
    );
    let mut shape = Check::new(
        "big_cycle_shape",
        "n in a cycle >= 4 has b != n/2 and a recognized form",
    );
    let mut layers = Check::new(
        "three_cycle_layering",
        "layered constructions equal the brute set with n in a 3-cycle",
    );
    for n in 1..=n_max.min(STRUCTURE_LIMIT) {
        let strong = collect_strong_avoiders(n, opts)?;
        let class = |k: &dyn Fn(usize) -> bool| -> HashSet<&Permutation> {
            strong
                .iter()
                .filter(|p| k(p.cycle_length_of(n).expect("n in range")))
                .collect()
        };
        if n <= SMALL_STRUCTURE_LIMIT {
            for p in class(&|k| k == 2) {
                two.require(n, Some(2), p.is_involution(), "involution", p);
            }
            let brute3 = class(&|k| k == 3);
            let built = three_cycle_family(n)?;
            let built_set: HashSet<&Permutation> = built.iter().collect();
            layers.compare(n, Some(3), brute3.len(), built.len());
            layers.compare(n, Some(3), brute3.len(), built_set.len());
            if let Some(p) = brute3.iter().find(|p| !built_set.contains(**p)) {
                layers.require(n, Some(3), false, *p, "missing");
            }
        }
        if n >= 4 {
            let brute = class(&|k| k >= 4);
            let built = enumerate_big_cycle(n)?;
            let built_set: HashSet<&Permutation> = built.iter().collect();
            big.compare(n, None, brute.len(), built.len());
            big.compare(n, None, brute.len(), built_set.len());
            if let Some(p) = brute.iter().find(|p| !built_set.contains(**p)) {
                big.require(n, None, false, *p, "missing");
            }
            for p in &built {
                match recognize(p) {
                    Some(params) => {
                        big.compare(n, None, params.cycle_length(), p.cycle_length_of(n)?)
                    }
                    None => big.require(n, None, false, "a recognized form", p),
                }
            }
            for p in brute {
                let b = p.position_of(n);
                shape.require(n, None, 2 * b != n, "b != n/2", format!("b = {b} in {p}"));
                shape.require(n, None, recognize(p).is_some(), "a recognized form", p);
            }
        }
    }
    checks.push(two.done());
    checks.push(big.done());
    checks.push(shape.done());
    checks.push(layers.done());

    checks.push(residual_check(
        "master_identity",
        "a = 1 + x a + a2 + a3 + a_ge4 to the truncation order",
        &master_identity_residual(order),
    ));
    checks.push(residual_check(
        "three_cycle_identity",
        "b / (1 + b) = 2 - 2 / c(x^3 c(x^3))",
        &three_cycle_identity_residual(order),
    ));
    checks.push(residual_check(
        "central_binomial_identity",
        "a2 = d - x d - 1",
        &d_identity_residual(order),
    ));

    let s312 = sav312(order);
    let mut c = Check::new(
        "sav312_brute",
        "[x^n] sav312 equals brute strong-312 counts",
    );
    for n in 1..=n_max.min(SAV312_LIMIT) {
        let brute = count_strong_312(n, opts)?;
        c.compare(n, None, coeff(&s312, n), BigInt::from(brute));
        if n <= FULL_SCAN_LIMIT {
            let scan = count_strong_full_scan(n, &Pattern::p312(), opts.unsafe_n)?;
            c.compare(n, None, brute, scan);
        }
    }
    checks.push(c.done());

    let mut c = Check::new(
        "sav312_recurrence",
        "a_n = 2a_(n-1) + a_(n-2) - 2a_(n-3) + a_(n-4) for n >= 5",
    );
    let s = |n: usize| coeff(&s312, n);
    for n in 5..=order {
        let expected = s(n - 1) * 2 + s(n - 2) - s(n - 3) * 2 + s(n - 4);
        c.compare(n, None, expected, s(n));
    }
    checks.push(c.done());

    let mut c = Check::new("below_2_pow_n", "a_n < 2^n through the truncation order");
    for n in 1..=order {
        let pow = BigInt::one() << n;
        let an = coeff(&a, n);
        c.require(n, None, an < pow, format!("< {pow}"), an);
    }
    checks.push(c.done());

    Ok(VerifyReport {
        n_max,
        order,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{brute_table, Column};

    #[test]
    fn passes_on_small_table() {
        let t = brute_table(9, &Options::default()).unwrap();
        let r = run_checks(&t, 32, &Options::default()).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.to_text().ends_with("checks passed\n"));
        assert!(r.check("big_cycle_sets").unwrap().cases > 0);
    }

    #[test]
    fn reports_first_mismatch() {
        let t = brute_table(6, &Options::default()).unwrap();
        let mut cols = t.columns().to_vec();
        cols[4].counts[1] += 1;
        let tampered = ClassTable::from_columns(cols).unwrap();
        let r = run_checks(&tampered, 16, &Options::default()).unwrap();
        assert!(!r.passed());
        let first = r.first_failure().unwrap();
        assert_eq!(first.name, "totals_vs_sav132");
        let m = first.mismatch.as_ref().unwrap();
        assert_eq!((m.n, m.expected.as_str(), m.got.as_str()), (5, "24", "25"));
        assert!(r.to_text().contains("first failure: totals_vs_sav132 n=5"));
    }

    #[test]
    fn rejects_short_order() {
        let t = ClassTable::from_columns(vec![Column {
            n: 1,
            counts: vec![1],
        }])
        .unwrap();
        assert!(run_checks(&t, 0, &Options::default()).is_err());
    }
}
