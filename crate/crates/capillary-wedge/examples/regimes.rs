//! Solves one configuration from each contact regime and prints the steady states found.

use capillary_wedge::{solve, FluidParams, SolveOptions};

fn main() {
    let cases = [
        ("opposite, apex maximum", FluidParams::new(1.0, 1.0, -0.5, 0.9, 0.6, 1.0)),
        ("opposite, interior minimum", FluidParams::new(1.0, 1.0, 0.5, 1.2, 1.2, 1.0)),
        ("same sign, large volume", FluidParams::new(1.0, 1.0, 0.9, 1.2, 0.4, 3.0)),
        ("same sign, small volume", FluidParams::new(1.0, 1.0, 0.9, 1.2, 0.4, 1.0)),
        ("neutral adhesion", FluidParams::new(1.0, 1.0, 0.0, 1.2, 1.2, 1.0)),
    ];
    for (label, p) in cases {
        println!("{label}: {p:?}");
        match solve(&p, &SolveOptions::default()) {
            Ok(sol) => {
                for s in &sol.states {
                    let r = &s.residuals;
                    println!(
                        "  {:<14} P0 = {:>10.6}  V = {:.10}  ode {:.1e}  bc {:.1e}  accepted {}",
                        s.branch.name(),
                        s.pressure,
                        s.volume,
                        r.ode_residual,
                        r.bc_residual,
                        s.accepted()
                    );
                }
                if let Some(t) = sol.thresholds {
                    println!("  thresholds: {t:?}");
                }
            }
            Err(e) => println!("  error: {e}"),
        }
    }
}
