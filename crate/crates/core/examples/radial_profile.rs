//! Radial separability profile and probability.
//!
//!     cargo run --release --example radial_profile -- [rebit|qubit] [samples]

use sepscope::profile::{integrate_profile, radial_profile};
use sepscope::sampling::{SamplerConfig, SamplerKind};
use sepscope::Field;

fn main() -> sepscope::Result<()> {
    let mut args = std::env::args().skip(1);
    let field: Field = args.next().as_deref().unwrap_or("rebit").parse()?;
    let n: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let kind = if field == Field::Rebit { SamplerKind::MonteCarlo } else { SamplerKind::QuasiMonteCarlo };
    let cfg = SamplerConfig::new(field, kind, 42, n).with_workers(4);

    let profile = radial_profile(&cfg, 101)?;
    let p = integrate_profile(&profile)?;
    let m1 = (field.radial_exponent() + 1) as f64;
    println!("{field} radial profile, {n} {kind} samples");
    println!("{:>6} {:>10} {:>10}", "r", "F/(m+1)", "stderr");
    for k in (0..profile.grid.len()).step_by(10) {
        println!("{:>6.2} {:>10.5} {:>10.5}", profile.grid[k], profile.value[k] / m1, profile.stderr[k] / m1);
    }
    println!("separability probability {:.5} +- {:.5}", p.p, p.stderr);
    Ok(())
}
