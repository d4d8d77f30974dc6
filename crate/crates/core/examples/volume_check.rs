//! Hilbert-Schmidt volumes from the angular weight, MC against scrambled Sobol.
//!
//!     cargo run --release --example volume_check -- [samples]

use sepscope::sampling::{estimate_volume, SamplerConfig, SamplerKind};
use sepscope::Field;

fn main() -> sepscope::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200_000);
    for field in [Field::Rebit, Field::Qubit] {
        for kind in [SamplerKind::MonteCarlo, SamplerKind::QuasiMonteCarlo] {
            let est = estimate_volume(&SamplerConfig::new(field, kind, 42, n).with_workers(4))?;
            println!(
                "{field:<5} {kind:<3} volume {:.6e} +- {:.1e}  exact {:.6e}  rel err {:.2}%  z {:+.2}",
                est.volume,
                est.stderr,
                est.exact,
                100.0 * est.relative_error(),
                est.z_score()
            );
        }
    }
    Ok(())
}
