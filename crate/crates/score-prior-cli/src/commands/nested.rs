//! Nested binomial test curves: posterior probability of the free
//! model against the point null, under the centered solved prior and
//! under the intrinsic Beta-mixture prior.

use crate::commands::RunCtx;
use crate::svg::{line_plot, Series};
use score_prior::selection::nested_comparison;
use score_prior::{Error, Result};
use std::io::Write as _;

pub fn run(mut ctx: RunCtx) -> Result<()> {
    let n = ctx.cfg.take_u64("n")?.unwrap_or(12);
    let theta0 = ctx.cfg.take_f64("theta0")?.unwrap_or(0.25);
    let w = ctx.cfg.take_f64("w")?.unwrap_or(1.5);
    let b = ctx.cfg.take_f64("b")?.unwrap_or(1.0);
    let t = ctx.cfg.take_u64("t")?.unwrap_or(8);
    let svg = ctx.cfg.take_bool("svg")?.unwrap_or(false);
    ctx.cfg.finish()?;

    let report = nested_comparison(n, theta0, w, b, t)?;

    let path = ctx.out.join("nested_curve.csv");
    let mut f = std::fs::File::create(&path)
        .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
    writeln!(f, "y,prob_scoring,prob_intrinsic")
        .map_err(|e| Error::InvalidConfig(format!("write: {e}")))?;
    for i in 0..report.y.len() {
        writeln!(
            f,
            "{},{:.16e},{:.16e}",
            report.y[i], report.scoring_prob_m1[i], report.intrinsic_prob_m1[i]
        )
        .map_err(|e| Error::InvalidConfig(format!("write: {e}")))?;
    }

    let argmin = |v: &[f64]| {
        v.iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap_or(0)
    };
    println!(
        "nested binomial n={n} theta0={theta0}: curve minima at y={} (scoring) and y={} (intrinsic)",
        argmin(&report.scoring_prob_m1),
        argmin(&report.intrinsic_prob_m1)
    );
    println!("wrote {}", path.display());

    if svg {
        let ys: Vec<f64> = report.y.iter().map(|&y| y as f64).collect();
        let svg_path = ctx.out.join("nested_curve.svg");
        line_plot(
            &svg_path,
            "P(M1 | y) under both priors",
            &[
                Series { label: "scoring prior", xs: &ys, ys: &report.scoring_prob_m1 },
                Series { label: "intrinsic prior", xs: &ys, ys: &report.intrinsic_prob_m1 },
            ],
        )?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}
