//! Net benefit as a function of the unknown baseline PLM.

use num_traits::{One, Zero};

use super::cba::{rank_grid, CbaGrid};
use super::exact::Rational;
use super::factors::{CostModel, ScenarioFactors};
use super::DecisionError;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub plm0: Rational,
    /// Net benefit per option, in option order.
    pub nb: Vec<Rational>,
    /// 1-based best option.
    pub best: usize,
}

/// A PLM value at which the best option changes.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossover {
    pub plm0: Rational,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub crossovers: Vec<Crossover>,
}

pub fn sensitivity_sweep(
    factors: &ScenarioFactors,
    cost: &CostModel,
    lo: Rational,
    hi: Rational,
    step: Rational,
) -> Result<SweepResult, DecisionError> {
    if hi < lo || lo < Rational::zero() {
        return Err(DecisionError::Range(format!("[{lo}, {hi}]")));
    }
    if step <= Rational::zero() {
        return Err(DecisionError::Range(format!("step {step} must be positive")));
    }
    let at0 = CbaGrid::build(factors, cost, Rational::zero())?;
    let at1 = CbaGrid::build(factors, cost, Rational::one())?;
    // NB_k(x) = slope_k * x + intercept_k
    let lines: Vec<(Rational, Rational)> = at0
        .options
        .iter()
        .zip(&at1.options)
        .map(|(o0, o1)| (o1.nb - o0.nb, o0.nb))
        .collect();

    let mut rows = Vec::new();
    let mut x = lo;
    while x <= hi {
        let grid = CbaGrid::build(factors, cost, x)?;
        let best = rank_grid(&grid)[0].option;
        rows.push(SweepRow {
            plm0: x,
            nb: grid.options.iter().map(|o| o.nb).collect(),
            best,
        });
        x += step;
    }

    let start = rank_grid(&CbaGrid::build(factors, cost, lo)?)[0].option - 1;
    let crossovers = envelope_crossovers(&lines, start, lo, hi);
    Ok(SweepResult { rows, crossovers })
}

/// Walks the upper envelope of the net-benefit lines from `lo` to `hi`.
fn envelope_crossovers(
    lines: &[(Rational, Rational)],
    start: usize,
    lo: Rational,
    hi: Rational,
) -> Vec<Crossover> {
    let mut out = Vec::new();
    let mut current = start;
    let mut x = lo;
    loop {
        let (a_cur, b_cur) = lines[current];
        let mut next: Option<(Rational, usize)> = None;
        for (k, &(a, b)) in lines.iter().enumerate() {
            if k == current || a <= a_cur {
                continue;
            }
            let at = (b_cur - b) / (a - a_cur);
            if at < x || at > hi {
                continue;
            }
            next = match next {
                None => Some((at, k)),
                Some((best_at, best_k)) => {
                    if at < best_at || (at == best_at && a > lines[best_k].0) {
                        Some((at, k))
                    } else {
                        Some((best_at, best_k))
                    }
                }
            };
        }
        match next {
            Some((at, k)) => {
                out.push(Crossover {
                    plm0: at,
                    from: current + 1,
                    to: k + 1,
                });
                current = k;
                x = at;
            }
            None => break,
        }
    }
    out
}
