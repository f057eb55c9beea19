//! Plain-text and CSV renderings of the CBA grid and sensitivity sweep.

use std::fmt::Write;

use num_traits::Zero;

use super::cba::CbaGrid;
use super::exact::{format_fixed, Rational};
use super::sensitivity::SweepResult;

pub fn percent(r: &Rational) -> String {
    let p = r * Rational::from_integer(100);
    let body = if p.is_integer() {
        p.to_integer().to_string()
    } else {
        format_fixed(&p, 2)
    };
    if p > Rational::zero() {
        format!("+{body}%")
    } else {
        format!("{body}%")
    }
}

/// `£12,345,678`, rounded to the nearest pound.
pub fn pounds(r: &Rational) -> String {
    let whole = format_fixed(r, 0);
    let (sign, digits) = match whole.strip_prefix('-') {
        Some(d) => ("-", d.to_string()),
        None => ("", whole),
    };
    let mut grouped = String::new();
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            grouped.push(',');
        }
        grouped.push(ch);
    }
    format!("{sign}£{grouped}")
}

fn row_line(out: &mut String, label: &str, cells: &[String]) {
    let _ = write!(out, "{label:<10}");
    for c in cells {
        let _ = write!(out, "{c:>16}");
    }
    out.push('\n');
}

/// The four CBA tables as aligned text.
pub fn render_text(grid: &CbaGrid) -> String {
    let mut out = String::new();
    let tg_labels: Vec<String> = grid.tg_rates.iter().map(|t| format!("TG {}", percent(t))).collect();
    let plg_labels: Vec<String> = grid.plg_rates.iter().map(|p| format!("PLG {}", percent(p))).collect();

    out.push_str("PLM (PLG = 0)\n");
    let sg_labels: Vec<String> = grid.options.iter().map(|o| format!("SG {}", percent(&o.sg))).collect();
    row_line(&mut out, "", &sg_labels);
    for (i, label) in tg_labels.iter().enumerate() {
        let cells: Vec<String> = grid.options.iter().map(|o| format_fixed(&o.plm[i], 2)).collect();
        row_line(&mut out, label, &cells);
    }

    out.push_str("\nEconomic cost\n");
    for o in &grid.options {
        row_line(&mut out, &format!("SG {}", percent(&o.sg)), &plg_labels);
        for (i, label) in tg_labels.iter().enumerate() {
            let cells: Vec<String> = o.ec[i].iter().map(pounds).collect();
            row_line(&mut out, label, &cells);
        }
    }

    out.push_str("\nCombined probabilities\n");
    row_line(&mut out, "", &plg_labels);
    for (i, label) in tg_labels.iter().enumerate() {
        let cells: Vec<String> = grid.probability[i].iter().map(|p| format_fixed(p, 4)).collect();
        row_line(&mut out, label, &cells);
    }

    out.push_str("\nCost-benefit by option\n");
    let opts: Vec<String> = grid.options.iter().map(|o| o.option.to_string()).collect();
    row_line(&mut out, "Option", &opts);
    row_line(&mut out, "SG", &grid.options.iter().map(|o| percent(&o.sg).trim_start_matches('+').to_string()).collect::<Vec<_>>());
    row_line(&mut out, "TEC", &grid.options.iter().map(|o| pounds(&o.tec)).collect::<Vec<_>>());
    row_line(&mut out, "C", &grid.options.iter().map(|o| pounds(&o.cost)).collect::<Vec<_>>());
    row_line(&mut out, "NB", &grid.options.iter().map(|o| pounds(&o.nb)).collect::<Vec<_>>());
    out
}

pub const CBA_CSV_HEADER: [&str; 6] = ["table", "option", "sg", "tg", "plg", "value"];

/// Long-format records: `plm` (2 dp), `ec` (£), `probability` (4 dp),
/// and `tec`/`cost`/`nb` (£) per option.
pub fn csv_records(grid: &CbaGrid) -> Vec<[String; 6]> {
    let mut rows = Vec::new();
    let dec = |r: &Rational| format_fixed(r, 4);
    for o in &grid.options {
        for (i, tg) in grid.tg_rates.iter().enumerate() {
            rows.push([
                "plm".into(),
                o.option.to_string(),
                dec(&o.sg),
                dec(tg),
                dec(&Rational::zero()),
                format_fixed(&o.plm[i], 2),
            ]);
        }
    }
    for o in &grid.options {
        for (i, tg) in grid.tg_rates.iter().enumerate() {
            for (j, plg) in grid.plg_rates.iter().enumerate() {
                rows.push([
                    "ec".into(),
                    o.option.to_string(),
                    dec(&o.sg),
                    dec(tg),
                    dec(plg),
                    format_fixed(&o.ec[i][j], 0),
                ]);
            }
        }
    }
    for (i, tg) in grid.tg_rates.iter().enumerate() {
        for (j, plg) in grid.plg_rates.iter().enumerate() {
            rows.push([
                "probability".into(),
                String::new(),
                String::new(),
                dec(tg),
                dec(plg),
                format_fixed(&grid.probability[i][j], 4),
            ]);
        }
    }
    for o in &grid.options {
        for (name, value) in [("tec", &o.tec), ("cost", &o.cost), ("nb", &o.nb)] {
            rows.push([
                name.into(),
                o.option.to_string(),
                dec(&o.sg),
                String::new(),
                String::new(),
                format_fixed(value, 0),
            ]);
        }
    }
    rows
}

pub fn sweep_header(options: usize) -> Vec<String> {
    let mut h = vec!["plm0".to_string()];
    h.extend((1..=options).map(|k| format!("nb_{k}")));
    h.push("best".into());
    h
}

pub fn sweep_records(sweep: &SweepResult) -> Vec<Vec<String>> {
    sweep
        .rows
        .iter()
        .map(|row| {
            let mut rec = vec![format_fixed(&row.plm0, 4)];
            rec.extend(row.nb.iter().map(|nb| format_fixed(nb, 2)));
            rec.push(row.best.to_string());
            rec
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::{CostModel, ScenarioFactors};

    #[test]
    fn pounds_grouping() {
        assert_eq!(pounds(&Rational::from_integer(30_000_000)), "£30,000,000");
        assert_eq!(pounds(&Rational::new(250, 3)), "£83");
        assert_eq!(pounds(&Rational::from_integer(0)), "£0");
        assert_eq!(pounds(&Rational::from_integer(-1500)), "-£1,500");
    }

    #[test]
    fn text_contains_option_table() {
        let grid = CbaGrid::build(&ScenarioFactors::default(), &CostModel::default(), Rational::from_integer(150)).unwrap();
        let text = render_text(&grid);
        assert!(text.contains("£60,500,000"));
        assert!(text.contains("£50,416,667"));
        assert!(text.contains("£83,333"));
        assert!(text.contains("0.1667"));
        assert_eq!(csv_records(&grid).len(), 9 + 27 + 9 + 9);
    }
}
