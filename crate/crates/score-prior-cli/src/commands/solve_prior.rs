//! Solve one prior and emit its u table, normalized density, and
//! optionally a line plot.

use crate::commands::RunCtx;
use crate::svg::{line_plot, Series};
use score_prior::prior::{normalize, solve_half_line_anchor, solve_u, PriorSpec};
use score_prior::scoring::score_identity_residual;
use score_prior::{io, Error, Result};

const DEFAULT_STEP: f64 = 1e-4;

pub fn run(mut ctx: RunCtx) -> Result<()> {
    let domain = ctx.cfg.take("domain").unwrap_or_else(|| "unit".into());
    let svg = ctx.cfg.take_bool("svg")?.unwrap_or(false);
    let u0 = solve_half_line_anchor();

    // Per-domain defaults: anchor height w, anchor location, and how far
    // the grid reaches. The solved support is finite, so a generous
    // half-width just means the march stops on its own.
    let (spec, half_width) = match domain.as_str() {
        "unit" => {
            let center = ctx.cfg.take_f64("center")?.unwrap_or(0.5);
            let w = ctx.cfg.take_f64("w")?.unwrap_or(1.14);
            let hw = ctx.cfg.take_f64("half_width")?.unwrap_or(center.max(1.0 - center));
            (PriorSpec::unit_interval(center, w)?, hw)
        }
        "half-line" => {
            let anchor = ctx.cfg.take_f64("anchor")?.unwrap_or(0.0);
            let w = ctx.cfg.take_f64("w")?.unwrap_or(u0);
            // Reaching one unit past the anchor covers the whole
            // support: the left march ends at zero, the right at the
            // cap just short of one unit out.
            let hw = ctx.cfg.take_f64("half_width")?.unwrap_or(anchor + 1.0);
            (PriorSpec::half_line_with(w, anchor)?, hw)
        }
        "real-symmetric" => {
            let anchor = ctx.cfg.take_f64("anchor")?.unwrap_or(0.0);
            let w = ctx.cfg.take_f64("w")?.unwrap_or(u0);
            let hw = ctx.cfg.take_f64("half_width")?.unwrap_or(1.0);
            (PriorSpec::real_line_symmetric(w, anchor)?, hw)
        }
        "real-smooth" => {
            let anchor = ctx.cfg.take_f64("anchor")?.unwrap_or(0.0);
            let w = ctx.cfg.take_f64("w")?.unwrap_or(0.01);
            let hw = ctx.cfg.take_f64("half_width")?.unwrap_or(5.0);
            (PriorSpec::real_line_smooth(w, anchor)?, hw)
        }
        other => {
            return Err(Error::InvalidConfig(format!(
                "domain '{other}' not recognized; use unit, half-line, real-symmetric, real-smooth"
            )))
        }
    };
    let points = match ctx.cfg.take_usize("points")? {
        Some(p) => p,
        None => (half_width / DEFAULT_STEP).ceil() as usize,
    };
    ctx.cfg.finish()?;

    let table = solve_u(&spec, half_width, points)?;
    let density = normalize(&table)?;
    let residual = score_identity_residual(&table);

    let u_path = ctx.out.join("u_table.csv");
    let d_path = ctx.out.join("density.csv");
    io::write_utable(&u_path, &table)?;
    io::write_density(&d_path, &density)?;

    println!(
        "solved {domain} prior: {} grid points, step {:.3e}, support [{:.6}, {:.6}]",
        table.grid.len(),
        table.step,
        table.grid[0],
        table.grid[table.grid.len() - 1],
    );
    println!("identity residual sup = {residual:.3e}");
    println!("wrote {}", u_path.display());
    println!("wrote {}", d_path.display());

    if svg {
        let svg_path = ctx.out.join("prior.svg");
        line_plot(
            &svg_path,
            &format!("solved prior density ({domain})"),
            &[Series { label: "p", xs: &density.grid, ys: &density.p }],
        )?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}
