//! Azimuthal separability profile, its probability and a cosine fit.
//!
//!     cargo run --release --example azimuthal_profile -- [rebit|qubit] [samples]

use sepscope::analytic::fit_cosine;
use sepscope::profile::{azimuthal_profile, integrate_profile};
use sepscope::sampling::{SamplerConfig, SamplerKind};
use sepscope::Field;

fn main() -> sepscope::Result<()> {
    let mut args = std::env::args().skip(1);
    let field: Field = args.next().as_deref().unwrap_or("rebit").parse()?;
    let n: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let kind = if field == Field::Rebit { SamplerKind::MonteCarlo } else { SamplerKind::QuasiMonteCarlo };
    let cfg = SamplerConfig::new(field, kind, 42, n).with_workers(4);

    let profile = azimuthal_profile(&cfg, 101)?;
    let p = integrate_profile(&profile)?;
    for k in (0..profile.grid.len()).step_by(10) {
        println!("phi_hat {:.2}  F {:.4} +- {:.4}", profile.grid[k], profile.value[k], profile.stderr[k]);
    }
    println!("separability probability {:.5} +- {:.5}", p.p, p.stderr);
    let fit = fit_cosine(&profile)?;
    println!("F ~ {:.5} + {:.5} cos(4 pi phi_hat), rms {:.4}", fit.params[0], fit.params[1], fit.rms_residual);
    Ok(())
}
