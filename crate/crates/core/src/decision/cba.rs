use num_traits::{One, Zero};

use super::exact::Rational;
use super::factors::{CostModel, ScenarioFactors};
use super::DecisionError;

/// Missed positive lorries per year once traffic grows by `tg` and search
/// activity by `sg`: proportional to traffic, inversely proportional to search.
pub fn plm_projection(plm0: Rational, tg: Rational, sg: Rational) -> Result<Rational, DecisionError> {
    if plm0 < Rational::zero() {
        return Err(DecisionError::Negative("PLM"));
    }
    for rate in [tg, sg] {
        if rate <= -Rational::one() {
            return Err(DecisionError::GrowthRate(super::Exact(rate).to_string()));
        }
    }
    Ok(plm0 * (Rational::one() + tg) / (Rational::one() + sg))
}

/// Annual economic cost (£) of `plm` missed lorries under positive-lorry
/// growth `plg`.
///
/// The lorry count is priced with [`CostModel::cost_per_plm`]; the scenario
/// table values are in pounds, not lorries.
pub fn economic_cost(plm: Rational, plg: Rational, cost: &CostModel) -> Result<Rational, DecisionError> {
    if plg <= -Rational::one() {
        return Err(DecisionError::GrowthRate(super::Exact(plg).to_string()));
    }
    Ok(plm * (Rational::one() + plg) * cost.cost_per_plm())
}

pub fn scenario_probability(p_tg: Rational, p_plg: Rational) -> Result<Rational, DecisionError> {
    for p in [p_tg, p_plg] {
        if p < Rational::zero() || p > Rational::one() {
            return Err(DecisionError::Probability(super::Exact(p).to_string()));
        }
    }
    Ok(p_tg * p_plg)
}

pub fn net_benefit(tec_base: Rational, tec_option: Rational, option_cost: Rational) -> Rational {
    tec_base - tec_option - option_cost
}

/// Converts a simulated count of found lorries into missed lorries assuming
/// the reference missed/found ratio holds.
pub fn linear_plm_estimate(plf: f64, reference_plf: f64, reference_plm: f64) -> f64 {
    if reference_plf <= 0.0 {
        return 0.0;
    }
    plf * reference_plm / reference_plf
}

/// Cost figures of one search-growth option over the (TG, PLG) lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct OptionGrid {
    /// 1-based option number in factor order.
    pub option: usize,
    pub sg: Rational,
    pub cost: Rational,
    /// PLM per traffic-growth level with no positive-lorry growth.
    pub plm: Vec<Rational>,
    /// `ec[tg][plg]` in pounds.
    pub ec: Vec<Vec<Rational>>,
    pub tec: Rational,
    pub nb: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CbaGrid {
    pub plm0: Rational,
    pub tg_rates: Vec<Rational>,
    pub plg_rates: Vec<Rational>,
    /// `probability[tg][plg]`.
    pub probability: Vec<Vec<Rational>>,
    pub options: Vec<OptionGrid>,
}

impl CbaGrid {
    pub fn build(factors: &ScenarioFactors, cost: &CostModel, plm0: Rational) -> Result<Self, DecisionError> {
        factors.validate()?;
        cost.validate()?;
        let tg_rates: Vec<Rational> = factors.traffic_growth.iter().map(|l| l.rate.0).collect();
        let plg_rates: Vec<Rational> = factors.positive_lorry_growth.iter().map(|l| l.rate.0).collect();
        let probability = factors
            .traffic_growth
            .iter()
            .map(|t| {
                factors
                    .positive_lorry_growth
                    .iter()
                    .map(|p| scenario_probability(t.probability.0, p.probability.0))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;

        let mut options = Vec::with_capacity(factors.search_growth.len());
        for (i, option) in factors.search_growth.iter().enumerate() {
            let plm = tg_rates
                .iter()
                .map(|&tg| plm_projection(plm0, tg, option.rate.0))
                .collect::<Result<Vec<_>, _>>()?;
            let ec = plm
                .iter()
                .map(|&p| {
                    plg_rates
                        .iter()
                        .map(|&plg| economic_cost(p, plg, cost))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            options.push(OptionGrid {
                option: i + 1,
                sg: option.rate.0,
                cost: option.cost.0,
                plm,
                ec,
                tec: Rational::zero(),
                nb: Rational::zero(),
            });
        }
        let mut grid = Self {
            plm0,
            tg_rates,
            plg_rates,
            probability,
            options,
        };
        for i in 0..grid.options.len() {
            grid.options[i].tec = total_expected_cost(&grid, i);
        }
        let base_tec = grid.options[0].tec;
        for option in &mut grid.options {
            option.nb = net_benefit(base_tec, option.tec, option.cost);
        }
        // the base option is compared with itself at zero cost
        grid.options[0].nb = Rational::zero();
        Ok(grid)
    }

    pub fn probability_total(&self) -> Rational {
        self.probability.iter().flatten().sum()
    }
}

/// Probability-weighted economic cost of option `index` (0-based).
pub fn total_expected_cost(grid: &CbaGrid, index: usize) -> Rational {
    let option = &grid.options[index];
    option
        .ec
        .iter()
        .zip(&grid.probability)
        .flat_map(|(ec_row, p_row)| ec_row.iter().zip(p_row).map(|(ec, p)| ec * p))
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedOption {
    pub option: usize,
    pub sg: Rational,
    pub cost: Rational,
    pub tec: Rational,
    pub nb: Rational,
}

/// Options ordered best first by net benefit; ties go to the cheaper option.
pub fn rank_options(
    factors: &ScenarioFactors,
    cost: &CostModel,
    plm0: Rational,
) -> Result<Vec<RankedOption>, DecisionError> {
    let grid = CbaGrid::build(factors, cost, plm0)?;
    Ok(rank_grid(&grid))
}

pub(crate) fn rank_grid(grid: &CbaGrid) -> Vec<RankedOption> {
    let mut ranked: Vec<RankedOption> = grid
        .options
        .iter()
        .map(|o| RankedOption {
            option: o.option,
            sg: o.sg,
            cost: o.cost,
            tec: o.tec,
            nb: o.nb,
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.nb.cmp(&a.nb)
            .then_with(|| a.cost.cmp(&b.cost))
            .then_with(|| a.option.cmp(&b.option))
    });
    ranked
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::exact::{format_fixed, parse_rational};
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn default_grid(plm0: &str) -> CbaGrid {
        CbaGrid::build(&ScenarioFactors::default(), &CostModel::default(), q(plm0)).unwrap()
    }

    #[test]
    fn plm_projection_examples() {
        assert_eq!(plm_projection(q("150"), q("0.10"), q("0")).unwrap(), q("165"));
        assert_eq!(plm_projection(q("150"), q("0"), q("0")).unwrap(), q("150"));
        let v = plm_projection(q("150"), q("0.20"), q("0.10")).unwrap();
        assert_eq!(format_fixed(&v, 2), "163.64");
        assert!(plm_projection(q("150"), q("0"), q("-1")).is_err());
    }

    #[test]
    fn economic_cost_examples() {
        let c = CostModel::default();
        assert_eq!(economic_cost(q("150"), q("-0.5"), &c).unwrap(), q("30000000"));
        assert_eq!(economic_cost(q("137.5"), q("0"), &c).unwrap(), q("55000000"));
        assert_eq!(economic_cost(q("0"), q("0.25"), &c).unwrap(), q("0"));
    }

    #[test]
    fn scenario_probability_examples() {
        assert_eq!(format_fixed(&scenario_probability(q("0.5"), q("1/3")).unwrap(), 4), "0.1667");
        assert_eq!(format_fixed(&scenario_probability(q("0.25"), q("1/3")).unwrap(), 4), "0.0833");
        assert_eq!(scenario_probability(q("1"), q("1")).unwrap(), q("1"));
        assert!(scenario_probability(q("1.2"), q("0.5")).is_err());
    }

    #[test]
    fn total_expected_costs() {
        let grid = default_grid("150");
        assert_eq!(grid.options[0].tec, q("60500000"));
        assert_eq!(grid.options[1].tec, q("55000000"));
        assert_eq!(format_fixed(&grid.options[2].tec, 0), "50416667");
        assert_eq!(grid.probability_total(), q("1"));
    }

    #[test]
    fn constant_costs_give_that_constant() {
        let mut grid = default_grid("150");
        for row in &mut grid.options[1].ec {
            for cell in row.iter_mut() {
                *cell = q("1234567");
            }
        }
        assert_eq!(total_expected_cost(&grid, 1), q("1234567"));
    }

    #[test]
    fn net_benefit_examples() {
        assert_eq!(net_benefit(q("60500000"), q("55000000"), q("5000000")), q("500000"));
        let nb = net_benefit(q("60500000"), q("151250000/3"), q("10000000"));
        assert_eq!(format_fixed(&nb, 0), "83333");
        assert_eq!(net_benefit(q("60500000"), q("60500000"), q("0")), q("0"));
    }

    #[test]
    fn ranking_at_defaults() {
        let ranked = rank_options(&ScenarioFactors::default(), &CostModel::default(), q("150")).unwrap();
        let order: Vec<usize> = ranked.iter().map(|r| r.option).collect();
        assert_eq!(order, vec![2, 3, 1]);
        assert_eq!(ranked[0].nb, q("500000"));
        assert_eq!(format_fixed(&ranked[1].nb, 0), "83333");
        assert_eq!(ranked[2].nb, q("0"));
    }

    #[test]
    fn no_missed_lorries_means_no_investment() {
        let ranked = rank_options(&ScenarioFactors::default(), &CostModel::default(), q("0")).unwrap();
        assert_eq!(ranked[0].option, 1);
    }

    #[test]
    fn high_plm_favours_biggest_investment() {
        // Brute-force oracle: every cell evaluated directly in floating point.
        let (tg, ptg) = ([0.0, 0.1, 0.2], [0.25, 0.5, 0.25]);
        let plg = [-0.5, 0.0, 0.25];
        let options = [(0.0, 0.0), (0.1, 5e6), (0.2, 10e6)];
        let tec = |plm0: f64, sg: f64| -> f64 {
            let mut total = 0.0;
            for i in 0..3 {
                for g in plg {
                    total += plm0 * (1.0 + tg[i]) / (1.0 + sg) * (1.0 + g) * 400_000.0 * ptg[i] / 3.0;
                }
            }
            total
        };
        let nb: Vec<f64> = options.iter().map(|(sg, c)| tec(300.0, 0.0) - tec(300.0, *sg) - c).collect();
        let best = nb.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0 + 1;
        assert_eq!(best, 3);
        let ranked = rank_options(&ScenarioFactors::default(), &CostModel::default(), q("300")).unwrap();
        assert_eq!(ranked[0].option, best);
    }

    proptest! {
        #[test]
        fn base_option_has_zero_benefit(
            plm0 in 0i64..10_000,
            sg1 in 1i64..100,
            tg_probs in (1i64..10, 1i64..10, 1i64..10),
        ) {
            let mut f = ScenarioFactors::default();
            let total = tg_probs.0 + tg_probs.1 + tg_probs.2;
            let probs = [tg_probs.0, tg_probs.1, tg_probs.2];
            for (level, p) in f.traffic_growth.iter_mut().zip(probs) {
                level.probability = crate::decision::Exact(Rational::new(p as i128, total as i128));
            }
            f.search_growth[1].rate = crate::decision::Exact(Rational::new(sg1 as i128, 100));
            let grid = CbaGrid::build(&f, &CostModel::default(), Rational::from_integer(plm0 as i128)).unwrap();
            prop_assert_eq!(grid.options[0].nb, Rational::zero());
            prop_assert_eq!(grid.probability_total(), Rational::one());
        }

        #[test]
        fn net_benefit_is_linear_in_plm0(plm0 in 1i64..5_000, alpha in 1i64..20) {
            let f = ScenarioFactors::default();
            let c = CostModel::default();
            let nb = |x: Rational| -> Vec<Rational> {
                CbaGrid::build(&f, &c, x).unwrap().options.iter().map(|o| o.nb).collect()
            };
            let x = Rational::from_integer(plm0 as i128);
            let a = Rational::from_integer(alpha as i128);
            let at0 = nb(Rational::zero());
            let atx = nb(x);
            let atax = nb(a * x);
            for k in 0..3 {
                prop_assert_eq!(atax[k] - at0[k], a * (atx[k] - at0[k]));
            }
        }

        #[test]
        fn tec_non_increasing_in_search_growth(plm0 in 0i64..5_000, sg in 0i64..200) {
            let mut f = ScenarioFactors::default();
            f.search_growth[1].rate = crate::decision::Exact(Rational::new(sg as i128, 100));
            f.search_growth[2].rate = crate::decision::Exact(Rational::new(sg as i128 + 7, 100));
            let grid = CbaGrid::build(&f, &CostModel::default(), Rational::from_integer(plm0 as i128)).unwrap();
            prop_assert!(grid.options[1].tec <= grid.options[0].tec);
            prop_assert!(grid.options[2].tec <= grid.options[1].tec);
        }

        #[test]
        fn scaling_costs_keeps_best_saving(lambda in 1i64..50, plm0 in 1i64..1000) {
            let c = CostModel::default();
            let mut scaled = c;
            scaled.cost_per_clandestine_year =
                crate::decision::Exact(c.cost_per_clandestine_year.0 * Rational::from_integer(lambda as i128));
            let f = ScenarioFactors::default();
            let x = Rational::from_integer(plm0 as i128);
            let g1 = CbaGrid::build(&f, &c, x).unwrap();
            let g2 = CbaGrid::build(&f, &scaled, x).unwrap();
            let saving = |g: &CbaGrid| -> Vec<Rational> { g.options.iter().map(|o| g.options[0].tec - o.tec).collect() };
            let (s1, s2) = (saving(&g1), saving(&g2));
            for k in 0..3 {
                prop_assert_eq!(g2.options[k].tec, g1.options[k].tec * Rational::from_integer(lambda as i128));
            }
            let argmax = |s: &Vec<Rational>| s.iter().enumerate().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0))).unwrap().0;
            prop_assert_eq!(argmax(&s1), argmax(&s2));
        }
    }
}
